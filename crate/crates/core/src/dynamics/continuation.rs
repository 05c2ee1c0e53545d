use serde::{Deserialize, Serialize};

use super::orbit::{find_periodic_orbit, MapOrbit, NewtonOptions};
use super::MapFamily;
use crate::{Error, Real, Result};

/// Step control for following an orbit along a family.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ContinuationOptions<T: Real> {
    pub newton: NewtonOptions<T>,
    /// Largest step in path coordinate.
    pub max_step: T,
    /// Smallest step in path coordinate before giving up.
    pub min_step: T,
    /// A corrected orbit may move at most this far from its predecessor in one step.
    pub max_jump: T,
    /// Bisection stops once the bracket is shorter than this, in parameter-space distance.
    pub parameter_tolerance: T,
}

impl<T: Real> Default for ContinuationOptions<T> {
    fn default() -> Self {
        ContinuationOptions {
            newton: NewtonOptions::default(),
            max_step: T::lit(1.0 / 400.0),
            min_step: T::lit(1e-12),
            max_jump: T::lit(0.05),
            parameter_tolerance: T::lit(1e-10),
        }
    }
}

/// `1 + tr + det = (1 + λ₁)(1 + λ₂)`; changes sign when a real multiplier crosses `-1`.
pub fn doubling_indicator<T: Real>(orbit: &MapOrbit<T>) -> T {
    T::one() + orbit.trace() + orbit.det()
}

fn correct<T: Real, F: MapFamily<T>>(
    family: &F,
    s: T,
    prev: &MapOrbit<T>,
    opts: &ContinuationOptions<T>,
) -> Result<MapOrbit<T>> {
    let orbit = find_periodic_orbit(&family.at(s), prev.period, prev.points[0], &opts.newton)?;
    if orbit.distance(prev) > opts.max_jump {
        return Err(Error::NewtonFailed("corrector jumped to a different orbit".into()));
    }
    Ok(orbit)
}

/// Follows `orbit` (valid at `from`) to the path coordinate `to`.
pub fn continue_orbit<T: Real, F: MapFamily<T>>(
    family: &F,
    orbit: &MapOrbit<T>,
    from: T,
    to: T,
    opts: &ContinuationOptions<T>,
) -> Result<MapOrbit<T>> {
    let mut s = from;
    let mut current = orbit.clone();
    let mut h = opts.max_step;
    while s != to {
        let remaining = to - s;
        let step = if remaining.abs() <= h { remaining } else { h.copysign(remaining) };
        let next_s = if remaining.abs() <= h { to } else { s + step };
        match correct(family, next_s, &current, opts) {
            Ok(next) => {
                current = next;
                s = next_s;
                h = (h * T::lit(1.5)).min(opts.max_step);
            }
            Err(e) => {
                h = h * T::lit(0.5);
                if h < opts.min_step {
                    return Err(Error::ContinuationFailed {
                        at: s.to_f64().unwrap_or(f64::NAN),
                        reason: e.to_string(),
                    });
                }
            }
        }
    }
    Ok(current)
}

/// A located period-doubling: the path coordinate and the orbit continued there.
#[derive(Clone, Debug, PartialEq)]
pub struct Detection<T: Real> {
    pub s: T,
    pub orbit: MapOrbit<T>,
}

/// Scans from `s0` (where `orbit` is valid) towards `s1` in steps of at most `scan_step`
/// until a real multiplier crosses `-1`, then bisects the crossing.
pub fn detect_period_doubling<T: Real, F: MapFamily<T>>(
    family: &F,
    s0: T,
    s1: T,
    orbit: &MapOrbit<T>,
    scan_step: T,
    opts: &ContinuationOptions<T>,
) -> Result<Detection<T>> {
    let local = ContinuationOptions { max_step: scan_step.min(opts.max_step), ..opts.clone() };
    let mut lo = s0;
    let mut lo_orbit = orbit.clone();
    if doubling_indicator(&lo_orbit) <= T::zero() {
        return Err(Error::NoCrossing);
    }
    let mut hi = None;
    while lo < s1 {
        let next = (lo + local.max_step).min(s1);
        let next_orbit = continue_orbit(family, &lo_orbit, lo, next, &local)?;
        if doubling_indicator(&next_orbit) <= T::zero() {
            hi = Some(next);
            break;
        }
        lo = next;
        lo_orbit = next_orbit;
    }
    let mut hi = hi.ok_or(Error::NoCrossing)?;
    let length = family.length();
    while (hi - lo) * length > opts.parameter_tolerance {
        let mid = lo + (hi - lo) / T::lit(2.0);
        if mid <= lo || mid >= hi {
            break;
        }
        let mid_orbit = continue_orbit(family, &lo_orbit, lo, mid, &local)?;
        if doubling_indicator(&mid_orbit) > T::zero() {
            lo = mid;
            lo_orbit = mid_orbit;
        } else {
            hi = mid;
        }
    }
    let s = lo + (hi - lo) / T::lit(2.0);
    let orbit = continue_orbit(family, &lo_orbit, lo, s, &local)?;
    Ok(Detection { s, orbit })
}
