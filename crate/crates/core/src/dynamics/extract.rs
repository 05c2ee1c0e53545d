use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::orbit::MapOrbit;
use super::{PlanarMap, Point};
use crate::braid::{BraidWord, Letter, Permutation, Sign};
use crate::{Error, Real, Result};

/// Geometry of the projection used to read crossings off an orbit suspension.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ProjectionConfig<T: Real> {
    /// Strands are ordered by `x cos θ + y sin θ`; the strand with larger
    /// `-x sin θ + y cos θ` passes in front.
    pub theta: T,
    /// Substeps per phase of the isotopy; at least 2.
    pub steps: usize,
    pub coincidence_tolerance: T,
    /// Golden-angle rotations of `θ` tried before giving up.
    pub max_retries: usize,
}

impl<T: Real> Default for ProjectionConfig<T> {
    fn default() -> Self {
        ProjectionConfig { theta: T::zero(), steps: 64, coincidence_tolerance: T::lit(1e-9), max_retries: 16 }
    }
}

/// An extracted braid together with the projection angle that produced it and the
/// permutation the map induces on the sorted points.
#[derive(Clone, Debug, PartialEq)]
pub struct Extraction<T: Real> {
    pub braid: BraidWord,
    pub theta: T,
    pub dynamical: Permutation,
}

struct Coincidence;

fn project<T: Real>(p: Point<T>, sin: T, cos: T) -> (T, T) {
    (p[0] * cos + p[1] * sin, -p[0] * sin + p[1] * cos)
}

/// Orbit points in order, with the index of each point's image under the map.
fn flatten<T: Real>(orbits: &[MapOrbit<T>]) -> (Vec<Point<T>>, Vec<usize>) {
    let mut points = Vec::new();
    let mut next = Vec::new();
    for o in orbits {
        let base = points.len();
        let k = o.points.len();
        points.extend_from_slice(&o.points);
        next.extend((0..k).map(|i| base + (i + 1) % k));
    }
    (points, next)
}

fn sorted_order<T: Real>(u: &[T], tol: T) -> std::result::Result<Vec<usize>, Coincidence> {
    let mut order: Vec<usize> = (0..u.len()).collect();
    order.sort_by(|&i, &j| u[i].partial_cmp(&u[j]).unwrap_or(Ordering::Equal));
    if order.windows(2).any(|w| !(u[w[1]] - u[w[0]] > tol)) {
        return Err(Coincidence);
    }
    Ok(order)
}

fn permutation_for<T: Real>(
    points: &[Point<T>],
    next: &[usize],
    theta: T,
    tol: T,
) -> std::result::Result<Permutation, Coincidence> {
    let (sin, cos) = theta.sin_cos();
    let u: Vec<T> = points.iter().map(|&p| project(p, sin, cos).0).collect();
    let order = sorted_order(&u, tol)?;
    let mut rank = vec![0; points.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let mut images = vec![0; points.len()];
    for (i, &j) in next.iter().enumerate() {
        images[rank[j]] = rank[i];
    }
    Ok(Permutation::from_images(images).expect("rank map is a bijection"))
}

fn extract_at_angle<T: Real, M: PlanarMap<T>>(
    points: &[Point<T>],
    map: &M,
    theta: T,
    steps: usize,
    tol: T,
) -> std::result::Result<BraidWord, Coincidence> {
    let n = points.len();
    let (sin, cos) = theta.sin_cos();
    let sample = |s: T| -> Vec<(T, T)> { points.iter().map(|&p| project(map.isotopy(p, s), sin, cos)).collect() };
    let mut prev = sample(T::zero());
    let u0: Vec<T> = prev.iter().map(|q| q.0).collect();
    let mut at = sorted_order(&u0, tol)?;
    let mut pos = vec![0; n];
    for (r, &i) in at.iter().enumerate() {
        pos[i] = r;
    }
    let mut letters = Vec::new();
    let total = 2 * steps;
    for step in 1..=total {
        let s = if step == total { T::one() } else { T::from_usize(step).unwrap() / T::from_usize(total).unwrap() };
        let cur = sample(s);
        let mut events: Vec<(T, usize, usize)> = Vec::new();
        for j in 0..n {
            for l in j + 1..n {
                let d0 = prev[j].0 - prev[l].0;
                let d1 = cur[j].0 - cur[l].0;
                if d1.abs() <= tol {
                    return Err(Coincidence);
                }
                if (d0 < T::zero()) != (d1 < T::zero()) {
                    events.push((d0 / (d0 - d1), j, l));
                }
            }
        }
        events.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap_or(Ordering::Equal));
        for w in events.windows(2) {
            let shares = w[0].1 == w[1].1 || w[0].1 == w[1].2 || w[0].2 == w[1].1 || w[0].2 == w[1].2;
            if shares && (w[1].0 - w[0].0).abs() <= tol {
                return Err(Coincidence);
            }
        }
        for (tau, j, l) in events {
            let (pj, pl) = (pos[j], pos[l]);
            if pj.abs_diff(pl) != 1 {
                return Err(Coincidence);
            }
            let i = pj.min(pl);
            let (left, right) = (at[i], at[i + 1]);
            let v = |k: usize| prev[k].1 + tau * (cur[k].1 - prev[k].1);
            let (vl, vr) = (v(left), v(right));
            if (vl - vr).abs() <= tol {
                return Err(Coincidence);
            }
            let sign = if vl > vr { Sign::Pos } else { Sign::Neg };
            letters.push(Letter::new(i as u32 + 1, sign));
            at.swap(i, i + 1);
            pos[left] = i + 1;
            pos[right] = i;
        }
        prev = cur;
    }
    Ok(BraidWord::new(n, letters).expect("letters below strand count"))
}

/// Braid traced by the union of `orbits` under the map's isotopy from the identity.
pub fn extract_braid_detailed<T: Real, M: PlanarMap<T>>(
    orbits: &[MapOrbit<T>],
    map: &M,
    cfg: &ProjectionConfig<T>,
) -> Result<Extraction<T>> {
    if cfg.steps < 2 {
        return Err(Error::Config(format!("projection needs at least 2 substeps, got {}", cfg.steps)));
    }
    let (points, next) = flatten(orbits);
    if points.is_empty() {
        return Err(Error::InvalidStrands(0));
    }
    let golden = T::PI() * (T::lit(3.0) - T::lit(5.0).sqrt());
    let mut theta = cfg.theta;
    for _ in 0..=cfg.max_retries {
        let attempt = extract_at_angle(&points, map, theta, cfg.steps, cfg.coincidence_tolerance).and_then(|braid| {
            let dynamical = permutation_for(&points, &next, theta, cfg.coincidence_tolerance)?;
            Ok((braid, dynamical))
        });
        if let Ok((braid, dynamical)) = attempt {
            return Ok(Extraction { braid, theta, dynamical });
        }
        theta = theta + golden;
    }
    Err(Error::UnresolvedCoincidence { retries: cfg.max_retries })
}

pub fn extract_braid<T: Real, M: PlanarMap<T>>(
    orbits: &[MapOrbit<T>],
    map: &M,
    cfg: &ProjectionConfig<T>,
) -> Result<BraidWord> {
    Ok(extract_braid_detailed(orbits, map, cfg)?.braid)
}

/// Permutation the map induces on the points of `orbits`, sorted along direction `theta`.
pub fn dynamical_permutation<T: Real>(orbits: &[MapOrbit<T>], theta: T, tol: T) -> Result<Permutation> {
    let (points, next) = flatten(orbits);
    permutation_for(&points, &next, theta, tol).map_err(|_| Error::UnresolvedCoincidence { retries: 0 })
}

fn sorted_points<T: Real>(o: &MapOrbit<T>, theta: T) -> Vec<Point<T>> {
    let (sin, cos) = theta.sin_cos();
    let mut pts = o.points.clone();
    pts.sort_by(|p, q| project(*p, sin, cos).0.partial_cmp(&project(*q, sin, cos).0).unwrap_or(Ordering::Equal));
    pts
}

/// For each point of `child` in projected order (angle `child_theta`), the rank of the
/// nearest point of `parent` in its projected order (angle `parent_theta`).
pub fn nearest_pairing<T: Real>(
    parent: &MapOrbit<T>,
    parent_theta: T,
    child: &MapOrbit<T>,
    child_theta: T,
) -> Vec<usize> {
    let parents = sorted_points(parent, parent_theta);
    sorted_points(child, child_theta)
        .iter()
        .map(|c| {
            let d = |i: usize| (c[0] - parents[i][0]).hypot(c[1] - parents[i][1]);
            (0..parents.len()).min_by(|&i, &j| d(i).partial_cmp(&d(j)).unwrap_or(Ordering::Equal)).unwrap_or(0)
        })
        .collect()
}

/// Necessary condition for `after` to be a period-doubling cable of `before`, with
/// strands `2j, 2j+1` of `after` paired with strand `j` of `before`.
pub fn pd_cable_check(before: &BraidWord, after: &BraidWord) -> Result<bool> {
    let pairing: Vec<usize> = (0..after.strands()).map(|j| j / 2).collect();
    pd_cable_check_paired(before, after, &pairing)
}

/// As [`pd_cable_check`], with an explicit map from strands of `after` to strands of `before`.
pub fn pd_cable_check_paired(before: &BraidWord, after: &BraidWord, pairing: &[usize]) -> Result<bool> {
    let k = before.strands();
    if after.strands() != 2 * k {
        return Err(Error::StrandMismatch { left: 2 * k, right: after.strands() });
    }
    if pairing.len() != 2 * k || pairing.iter().any(|&p| p >= k) {
        return Err(Error::InvalidSequence("pairing must send 2k strands to k strands".into()));
    }
    let mut counts = vec![0; k];
    pairing.iter().for_each(|&p| counts[p] += 1);
    let pa = after.permutation();
    let pb = before.permutation();
    Ok(pa.is_single_cycle()
        && counts.iter().all(|&c| c == 2)
        && (0..2 * k).all(|j| pairing[pa.apply(j)] == pb.apply(pairing[j])))
}
