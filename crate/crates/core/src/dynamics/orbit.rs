use num_complex::Complex;
use serde::{Deserialize, Serialize};

use super::{PlanarMap, Point};
use crate::{Error, Real, Result};

/// A periodic orbit `p₀, f(p₀), …, f^{k-1}(p₀)` with its Floquet multipliers.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct MapOrbit<T: Real> {
    pub period: usize,
    pub points: Vec<Point<T>>,
    /// `max |f(pᵢ) - p_{i+1 mod k}|`.
    pub residual: T,
    /// Ordered by decreasing modulus.
    pub multipliers: [Complex<T>; 2],
}

impl<T: Real> MapOrbit<T> {
    pub fn trace(&self) -> T {
        (self.multipliers[0] + self.multipliers[1]).re
    }

    pub fn det(&self) -> T {
        (self.multipliers[0] * self.multipliers[1]).re
    }

    /// Largest distance between corresponding points of two orbits of equal period.
    pub fn distance(&self, other: &MapOrbit<T>) -> T {
        self.points.iter().zip(&other.points).map(|(p, q)| (p[0] - q[0]).hypot(p[1] - q[1])).fold(T::zero(), T::max)
    }
}

/// Newton settings for periodic orbit searches.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(bound = "")]
pub struct NewtonOptions<T: Real> {
    /// Accepted residual; the minimal-period test uses ten times this value.
    pub tolerance: T,
    pub max_iterations: usize,
    /// Iterates leaving this box count as divergence.
    pub escape_radius: T,
}

impl<T: Real> Default for NewtonOptions<T> {
    fn default() -> Self {
        NewtonOptions { tolerance: T::lit(1e-11), max_iterations: 60, escape_radius: T::lit(1e3) }
    }
}

type Mat2<T> = [[T; 2]; 2];

fn mat_mul<T: Real>(a: Mat2<T>, b: Mat2<T>) -> Mat2<T> {
    [
        [a[0][0] * b[0][0] + a[0][1] * b[1][0], a[0][0] * b[0][1] + a[0][1] * b[1][1]],
        [a[1][0] * b[0][0] + a[1][1] * b[1][0], a[1][0] * b[0][1] + a[1][1] * b[1][1]],
    ]
}

fn dist<T: Real>(p: Point<T>, q: Point<T>) -> T {
    (p[0] - q[0]).hypot(p[1] - q[1])
}

/// `f^k(p)` together with the Jacobian `Df^k(p)`.
fn iterate_with_jacobian<T: Real, M: PlanarMap<T>>(map: &M, p: Point<T>, k: usize) -> (Point<T>, Mat2<T>) {
    let mut x = p;
    let mut jac = [[T::one(), T::zero()], [T::zero(), T::one()]];
    for _ in 0..k {
        jac = mat_mul(map.jacobian(x), jac);
        x = map.step(x);
    }
    (x, jac)
}

/// Product of step Jacobians around the orbit, starting at its first point.
pub fn floquet_matrix<T: Real, M: PlanarMap<T>>(map: &M, points: &[Point<T>]) -> [[T; 2]; 2] {
    points.iter().fold([[T::one(), T::zero()], [T::zero(), T::one()]], |acc, &p| mat_mul(map.jacobian(p), acc))
}

/// Eigenvalues of a 2×2 matrix with trace `tr` and determinant `det`, by decreasing modulus.
/// The smaller real root is recovered as `det / λ` to keep their product exact.
pub(crate) fn eigenvalues<T: Real>(tr: T, det: T) -> [Complex<T>; 2] {
    let two = T::lit(2.0);
    let disc = tr * tr - T::lit(4.0) * det;
    if disc >= T::zero() {
        let root = disc.sqrt();
        let big = if tr >= T::zero() { (tr + root) / two } else { (tr - root) / two };
        let small = if big == T::zero() { T::zero() } else { det / big };
        [Complex::new(big, T::zero()), Complex::new(small, T::zero())]
    } else {
        let im = (-disc).sqrt() / two;
        [Complex::new(tr / two, im), Complex::new(tr / two, -im)]
    }
}

/// Finds a period-`k` orbit near `seed` by Newton's method on `f^k(x) - x`.
pub fn find_periodic_orbit<T: Real, M: PlanarMap<T>>(
    map: &M,
    k: usize,
    seed: Point<T>,
    opts: &NewtonOptions<T>,
) -> Result<MapOrbit<T>> {
    if k == 0 {
        return Err(Error::NewtonFailed("period must be at least 1".into()));
    }
    let mut x = seed;
    let mut converged = false;
    for _ in 0..opts.max_iterations {
        let (fx, jac) = iterate_with_jacobian(map, x, k);
        let f = [fx[0] - x[0], fx[1] - x[1]];
        if !f[0].is_finite() || !f[1].is_finite() {
            return Err(Error::NewtonFailed("iterates are not finite".into()));
        }
        let a = [[jac[0][0] - T::one(), jac[0][1]], [jac[1][0], jac[1][1] - T::one()]];
        let det = a[0][0] * a[1][1] - a[0][1] * a[1][0];
        if det == T::zero() || !det.is_finite() {
            return Err(Error::NewtonFailed("singular Newton system".into()));
        }
        let dx = (a[1][1] * f[0] - a[0][1] * f[1]) / det;
        let dy = (a[0][0] * f[1] - a[1][0] * f[0]) / det;
        x = [x[0] - dx, x[1] - dy];
        if !(x[0].abs() < opts.escape_radius && x[1].abs() < opts.escape_radius) {
            return Err(Error::NewtonFailed(format!("iterate left the radius-{} box", opts.escape_radius)));
        }
        let scale = T::one() + x[0].abs().max(x[1].abs());
        if dx.hypot(dy) <= T::lit(64.0) * T::epsilon() * scale {
            converged = true;
            break;
        }
    }
    let mut points = Vec::with_capacity(k);
    let mut p = x;
    for _ in 0..k {
        points.push(p);
        p = map.step(p);
    }
    let residual = (0..k).map(|i| dist(map.step(points[i]), points[(i + 1) % k])).fold(T::zero(), T::max);
    if !(residual < opts.tolerance) {
        let why = if converged { "stalled" } else { "did not converge" };
        return Err(Error::NewtonFailed(format!(
            "{why} after {} iterations with residual {residual}",
            opts.max_iterations
        )));
    }
    let closing = T::lit(10.0) * opts.tolerance;
    if let Some(d) = (1..k).find(|&d| k.is_multiple_of(d) && dist(points[d], points[0]) < closing) {
        return Err(Error::NonMinimalPeriod { requested: k, found: d });
    }
    let m = floquet_matrix(map, &points);
    let det = points.iter().fold(T::one(), |acc, &p| acc * map.jacobian_det(p));
    let multipliers = eigenvalues(m[0][0] + m[1][1], det);
    Ok(MapOrbit { period: k, points, residual, multipliers })
}
