//! Periodic orbits of the Hénon family, period-doubling cascades and braid extraction.
//!
//! Everything numerical goes through two narrow traits: [`PlanarMap`] (one map of the
//! plane with its Jacobian and an isotopy from the identity) and [`MapFamily`] (a
//! one-parameter family of such maps). Only the Hénon family implements them.

mod cascade;
mod continuation;
mod extract;
mod orbit;

use serde::{Deserialize, Serialize};

use crate::{Error, Real, Result};

pub use cascade::{
    continue_cascade, gamma_braid, pickup_orbit, CascadeOptions, CascadeRecord, DoublingRecord, StageSample,
    CASCADE_SCHEMA,
};
pub use continuation::{continue_orbit, detect_period_doubling, doubling_indicator, ContinuationOptions, Detection};
pub use extract::{
    dynamical_permutation, extract_braid, extract_braid_detailed, nearest_pairing, pd_cable_check,
    pd_cable_check_paired, Extraction, ProjectionConfig,
};
pub use orbit::{find_periodic_orbit, floquet_matrix, MapOrbit, NewtonOptions};

/// A point of the plane.
pub type Point<T> = [T; 2];

/// A diffeomorphism of the plane isotopic to the identity.
pub trait PlanarMap<T: Real>: Send + Sync {
    fn step(&self, p: Point<T>) -> Point<T>;

    /// Row-major Jacobian `[[∂f₁/∂x, ∂f₁/∂y], [∂f₂/∂x, ∂f₂/∂y]]`.
    fn jacobian(&self, p: Point<T>) -> [[T; 2]; 2];

    fn jacobian_det(&self, p: Point<T>) -> T {
        let j = self.jacobian(p);
        j[0][0] * j[1][1] - j[0][1] * j[1][0]
    }

    /// An isotopy with `isotopy(p, 0) = p` and `isotopy(p, 1) = step(p)`.
    fn isotopy(&self, p: Point<T>, s: T) -> Point<T>;
}

/// A one-parameter family of planar maps, parametrized by `s ∈ [0, 1]`.
pub trait MapFamily<T: Real>: Send + Sync {
    type Map: PlanarMap<T>;

    fn at(&self, s: T) -> Self::Map;

    /// Euclidean length of the path in parameter space; tolerances are measured in it.
    fn length(&self) -> T;
}

/// Parameters of the Hénon map `H(x, y) = (a - x² - b y, x)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct HenonParams<T: Real> {
    pub a: T,
    pub b: T,
}

impl<T: Real> HenonParams<T> {
    /// Rejects `b <= 0` (the map must preserve orientation) and non-finite values.
    pub fn new(a: T, b: T) -> Result<HenonParams<T>> {
        if !a.is_finite() || !b.is_finite() || b <= T::zero() {
            return Err(Error::Config(format!("Hénon parameters need finite a and b > 0, got a = {a}, b = {b}")));
        }
        Ok(HenonParams { a, b })
    }

    /// The fixed point `x = y = (-(1+b) + √((1+b)² + 4a)) / 2`, when real.
    pub fn fixed_point(&self) -> Option<Point<T>> {
        let one = T::one();
        let two = T::lit(2.0);
        let disc = (one + self.b).powi(2) + T::lit(4.0) * self.a;
        if disc < T::zero() {
            return None;
        }
        let x = (disc.sqrt() - (one + self.b)) / two;
        Some([x, x])
    }

    /// `a` at which the fixed point's multiplier reaches `-1`: `3(1+b)²/4`.
    pub fn first_doubling(b: T) -> T {
        T::lit(0.75) * (T::one() + b).powi(2)
    }
}

/// One application of the Hénon map.
pub fn henon_step<T: Real>(p: &HenonParams<T>, point: Point<T>) -> Point<T> {
    let [x, y] = point;
    [p.a - x * x - p.b * y, x]
}

impl<T: Real> PlanarMap<T> for HenonParams<T> {
    fn step(&self, p: Point<T>) -> Point<T> {
        henon_step(self, p)
    }

    fn jacobian(&self, p: Point<T>) -> [[T; 2]; 2] {
        [[-T::lit(2.0) * p[0], -self.b], [T::one(), T::zero()]]
    }

    fn jacobian_det(&self, _p: Point<T>) -> T {
        self.b
    }

    /// First a shear `(x, y) ↦ (x, (1-τ+τb) y + τ(x² - a))`, then a quarter turn;
    /// the composite at the end is exactly `H`.
    fn isotopy(&self, p: Point<T>, s: T) -> Point<T> {
        let half = T::lit(0.5);
        let [x, y] = p;
        let one = T::one();
        if s <= half {
            let tau = s / half;
            [x, (one - tau + tau * self.b) * y + tau * (x * x - self.a)]
        } else {
            let tau = (s - half) / half;
            let (u, w) = (x, self.b * y + x * x - self.a);
            let theta = tau * T::FRAC_PI_2();
            let (sin, cos) = theta.sin_cos();
            if tau >= one {
                return [-w, u];
            }
            [u * cos - w * sin, u * sin + w * cos]
        }
    }
}

/// Straight segment from `start` to `end` in the `(a, b)` plane.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct ParameterPath<T: Real> {
    pub start: HenonParams<T>,
    pub end: HenonParams<T>,
}

impl<T: Real> ParameterPath<T> {
    pub fn new(start: HenonParams<T>, end: HenonParams<T>) -> Result<ParameterPath<T>> {
        if start == end {
            return Err(Error::Config("parameter path has zero length".into()));
        }
        Ok(ParameterPath { start, end })
    }

    /// The fixed-`b` segment `a ∈ [a_min, a_max]`.
    pub fn fixed_b(b: T, a_min: T, a_max: T) -> Result<ParameterPath<T>> {
        if a_max <= a_min {
            return Err(Error::Config(format!("need a_min < a_max, got {a_min} and {a_max}")));
        }
        ParameterPath::new(HenonParams::new(a_min, b)?, HenonParams::new(a_max, b)?)
    }

    pub fn params_at(&self, s: T) -> HenonParams<T> {
        HenonParams {
            a: self.start.a + s * (self.end.a - self.start.a),
            b: self.start.b + s * (self.end.b - self.start.b),
        }
    }

    /// Path coordinate of the point whose `a` value is `a` (for segments along which `a` varies).
    pub fn coordinate_of_a(&self, a: T) -> T {
        (a - self.start.a) / (self.end.a - self.start.a)
    }
}

impl<T: Real> MapFamily<T> for ParameterPath<T> {
    type Map = HenonParams<T>;

    fn at(&self, s: T) -> HenonParams<T> {
        self.params_at(s)
    }

    fn length(&self) -> T {
        (self.end.a - self.start.a).hypot(self.end.b - self.start.b)
    }
}
