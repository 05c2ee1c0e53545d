use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::continuation::{continue_orbit, detect_period_doubling, ContinuationOptions};
use super::extract::{extract_braid, ProjectionConfig};
use super::orbit::{find_periodic_orbit, floquet_matrix, MapOrbit};
use super::{MapFamily, ParameterPath, Point};
use crate::braid::BraidWord;
use crate::{Error, Real, Result};

/// Schema tag written into serialized cascade records.
pub const CASCADE_SCHEMA: &str = "braidroute.cascade/1";

/// Settings for following a cascade of period doublings.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct CascadeOptions<T: Real> {
    pub continuation: ContinuationOptions<T>,
    pub max_doublings: usize,
    /// Scan step (path coordinate) while looking for the first doubling.
    pub first_scan_step: T,
    /// Later scan steps are the previous gap between doublings divided by this.
    pub scan_divisions: T,
    /// Distance past the first doubling at which the doubled orbit is sought.
    pub first_pickup_offset: T,
    /// Later pickup offsets are the previous gap divided by this.
    pub pickup_divisions: T,
    /// Displacements along the flip eigenvector tried in order.
    pub pickup_displacements: Vec<T>,
    /// Randomly jittered seeds tried after the eigenvector seeds fail.
    pub jitter_attempts: usize,
    pub seed: u64,
}

impl<T: Real> Default for CascadeOptions<T> {
    fn default() -> Self {
        CascadeOptions {
            continuation: ContinuationOptions::default(),
            max_doublings: 4,
            first_scan_step: T::lit(1.0 / 400.0),
            scan_divisions: T::lit(40.0),
            first_pickup_offset: T::lit(1e-3),
            pickup_divisions: T::lit(50.0),
            pickup_displacements: [1e-4, 1e-3, 1e-2, 3e-2, 1e-1].into_iter().map(T::lit).collect(),
            jitter_attempts: 16,
            seed: 0,
        }
    }
}

/// One detected doubling and the orbits on both sides of it at the pickup parameter.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct DoublingRecord<T: Real> {
    /// Path coordinate of the doubling.
    pub s: T,
    pub a: T,
    pub b: T,
    /// Path coordinate where the doubled orbit was picked up.
    pub pickup_s: T,
    pub parent: MapOrbit<T>,
    pub child: MapOrbit<T>,
}

/// The orbit family `γ⁰ … γⁿ` at a sample parameter between doublings `n` and `n+1`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct StageSample<T: Real> {
    pub stage: usize,
    pub s: T,
    pub a: T,
    pub b: T,
    pub orbits: Vec<MapOrbit<T>>,
}

/// An initial orbit followed through successive period doublings along a path.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct CascadeRecord<T: Real> {
    pub schema: String,
    pub path: ParameterPath<T>,
    pub start_s: T,
    pub initial: MapOrbit<T>,
    pub doublings: Vec<DoublingRecord<T>>,
    /// The doubling after the last recorded one, used only to bound the last window.
    pub window_end: Option<T>,
    pub stages: Vec<StageSample<T>>,
    /// Why the record stops short of the requested depth, if it does.
    pub termination: Option<String>,
    /// Settings the record was computed with.
    pub options: CascadeOptions<T>,
}

impl<T: Real> CascadeRecord<T> {
    pub fn doubling_parameters(&self) -> Vec<T> {
        self.doublings.iter().map(|d| d.s).collect()
    }

    /// Successive differences of the doubling coordinates.
    pub fn gaps(&self) -> Vec<T> {
        self.doublings.windows(2).map(|w| w[1].s - w[0].s).collect()
    }
}

fn flip_direction<T: Real>(m: [[T; 2]; 2], lambda: T) -> Point<T> {
    let c1 = [m[0][1], lambda - m[0][0]];
    let c2 = [lambda - m[1][1], m[1][0]];
    let n1 = c1[0].hypot(c1[1]);
    let n2 = c2[0].hypot(c2[1]);
    let (v, n) = if n1 >= n2 { (c1, n1) } else { (c2, n2) };
    if n == T::zero() {
        [T::one(), T::zero()]
    } else {
        [v[0] / n, v[1] / n]
    }
}

/// Finds the period-`2k` orbit born from `parent` (valid at coordinate `s`), seeding
/// Newton with the parent's points displaced along the eigenvector of the multiplier
/// nearest `-1`, then with randomly jittered seeds.
pub fn pickup_orbit<T: Real, F: MapFamily<T>>(
    family: &F,
    parent: &MapOrbit<T>,
    s: T,
    opts: &CascadeOptions<T>,
    rng: &mut ChaCha8Rng,
) -> Result<MapOrbit<T>> {
    let map = family.at(s);
    let m = floquet_matrix(&map, &parent.points);
    let lambda = parent
        .multipliers
        .iter()
        .filter(|z| z.im == T::zero())
        .map(|z| z.re)
        .min_by(|x, y| (*x + T::one()).abs().partial_cmp(&(*y + T::one()).abs()).unwrap())
        .ok_or_else(|| Error::NewtonFailed("parent orbit has no real multiplier".into()))?;
    let v = flip_direction(m, lambda);
    let p0 = parent.points[0];
    let period = 2 * parent.period;
    let mut seeds: Vec<Point<T>> = Vec::new();
    for &eps in &opts.pickup_displacements {
        seeds.push([p0[0] + eps * v[0], p0[1] + eps * v[1]]);
        seeds.push([p0[0] - eps * v[0], p0[1] - eps * v[1]]);
    }
    let max_eps = opts.pickup_displacements.iter().copied().fold(T::zero(), T::max);
    for _ in 0..opts.jitter_attempts {
        let angle = T::lit(rng.random::<f64>()) * T::TAU();
        let r = T::lit(rng.random::<f64>()) * max_eps;
        seeds.push([p0[0] + r * angle.cos(), p0[1] + r * angle.sin()]);
    }
    let mut last = Error::NewtonFailed("no pickup seeds".into());
    for seed in seeds {
        match find_periodic_orbit(&map, period, seed, &opts.continuation.newton) {
            Ok(o) => return Ok(o),
            Err(e) => last = e,
        }
    }
    Err(last)
}

/// Follows `initial` (valid at path coordinate `start_s`) through up to
/// `opts.max_doublings` period doublings. Failures end the record early; the reason is
/// kept in [`CascadeRecord::termination`].
pub fn continue_cascade<T: Real>(
    path: &ParameterPath<T>,
    initial: &MapOrbit<T>,
    start_s: T,
    opts: &CascadeOptions<T>,
) -> CascadeRecord<T> {
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let mut record = CascadeRecord {
        schema: CASCADE_SCHEMA.to_string(),
        path: *path,
        start_s,
        initial: initial.clone(),
        doublings: Vec::new(),
        window_end: None,
        stages: Vec::new(),
        termination: None,
        options: opts.clone(),
    };
    let copts = &opts.continuation;
    let mut current = initial.clone();
    let mut s = start_s;
    let mut last_t = start_s;
    let mut prev_gap: Option<T> = None;
    let scan_step = |gap: Option<T>| gap.map_or(opts.first_scan_step, |g| g / opts.scan_divisions);
    for n in 1..=opts.max_doublings {
        let found = detect_period_doubling(path, s, T::one(), &current, scan_step(prev_gap), copts).and_then(|det| {
            let offset = prev_gap.map_or(opts.first_pickup_offset, |_| (det.s - last_t) / opts.pickup_divisions);
            let pickup_s = det.s + offset;
            let parent = continue_orbit(path, &det.orbit, det.s, pickup_s, copts)?;
            let child = pickup_orbit(path, &parent, pickup_s, opts, &mut rng)?;
            Ok((det.s, pickup_s, parent, child))
        });
        match found {
            Ok((t, pickup_s, parent, child)) => {
                let p = path.params_at(t);
                record.doublings.push(DoublingRecord { s: t, a: p.a, b: p.b, pickup_s, parent, child: child.clone() });
                prev_gap = Some(t - last_t);
                last_t = t;
                current = child;
                s = pickup_s;
            }
            Err(e) => {
                record.termination = Some(format!("doubling {n}: {e}"));
                break;
            }
        }
    }
    if record.termination.is_none() && !record.doublings.is_empty() {
        record.window_end =
            detect_period_doubling(path, s, T::one(), &current, scan_step(prev_gap), copts).ok().map(|d| d.s);
    }
    sample_stages(&mut record, copts);
    record
}

fn sample_stages<T: Real>(record: &mut CascadeRecord<T>, copts: &ContinuationOptions<T>) {
    let path = record.path;
    let half = T::lit(0.5);
    let mut family: Vec<(T, MapOrbit<T>)> = vec![(record.start_s, record.initial.clone())];
    for n in 1..=record.doublings.len() {
        let d = &record.doublings[n - 1];
        family.push((d.pickup_s, d.child.clone()));
        let next = record.doublings.get(n).map(|x| x.s).or(record.window_end);
        let s = match next {
            Some(t) => d.s + (t - d.s) * half,
            None => d.pickup_s,
        };
        let mut orbits = Vec::with_capacity(family.len());
        for (j, (from, orbit)) in family.iter_mut().enumerate() {
            match continue_orbit(&path, orbit, *from, s, copts) {
                Ok(o) => {
                    *from = s;
                    *orbit = o.clone();
                    orbits.push(o);
                }
                Err(e) => {
                    let note = format!("stage {n}: orbit {j} lost before the sample parameter: {e}");
                    record.termination.get_or_insert(note);
                    return;
                }
            }
        }
        let p = path.params_at(s);
        record.stages.push(StageSample { stage: n, s, a: p.a, b: p.b, orbits });
    }
}

/// Braid of the orbits `γ⁰ … γⁿ` at stage `n`'s sample parameter; stage 0 is the
/// initial orbit alone.
pub fn gamma_braid<T: Real>(record: &CascadeRecord<T>, n: usize, cfg: &ProjectionConfig<T>) -> Result<BraidWord> {
    if n == 0 {
        return extract_braid(std::slice::from_ref(&record.initial), &record.path.params_at(record.start_s), cfg);
    }
    let stage = record.stages.get(n - 1).ok_or_else(|| Error::InvalidSequence(format!("stage {n} was not reached")))?;
    extract_braid(&stage.orbits, &record.path.params_at(stage.s), cfg)
}
