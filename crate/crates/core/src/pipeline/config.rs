use std::path::PathBuf;

use num_complex::Complex;
use serde::{Deserialize, Serialize};

use crate::dynamics::{CascadeOptions, ContinuationOptions, NewtonOptions, ParameterPath, ProjectionConfig};
use crate::invariants::is_prime;
use crate::modular::DEFAULT_ORBIT_CAP;
use crate::{Error, Result};

/// Everything a pipeline run depends on. Two runs with equal configs produce
/// byte-identical reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PipelineConfig {
    pub b: f64,
    pub a_min: f64,
    pub a_max: f64,
    /// Period of the initial orbit at `a_min`.
    pub initial_period: usize,
    /// Newton seed for the initial orbit; defaults to the analytic fixed point.
    pub initial_seed: Option<[f64; 2]>,
    pub max_doublings: usize,
    /// Truncation depth of every reported series.
    pub depth: usize,
    pub moduli: Vec<u64>,
    pub primes: Vec<u64>,
    /// Evaluation points as `"re,im"` or `"unit:p/q"` (the root of unity `e^{2πi p/q}`).
    pub trace_points: Vec<String>,
    pub newton_tolerance: f64,
    pub parameter_tolerance: f64,
    pub projection_steps: usize,
    /// Cap on the basis-vector orbit used to compute image orders.
    pub orbit_cap: u64,
    pub seed: u64,
    /// Where the report goes; not echoed into the report itself.
    #[serde(skip_serializing)]
    pub output: Option<PathBuf>,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            b: 0.3,
            a_min: 0.0,
            a_max: 2.0,
            initial_period: 1,
            initial_seed: None,
            max_doublings: 4,
            depth: 8,
            moduli: vec![2],
            primes: vec![2],
            trace_points: vec!["-1,0".into(), "0,1".into(), "unit:1/5".into()],
            newton_tolerance: 1e-11,
            parameter_tolerance: 1e-10,
            projection_steps: 64,
            orbit_cap: DEFAULT_ORBIT_CAP,
            seed: 0,
            output: None,
        }
    }
}

impl PipelineConfig {
    /// Checks every field before any computation starts.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Config(msg));
        if !(self.b.is_finite() && self.b > 0.0) {
            return bad(format!("b must be positive, got {}", self.b));
        }
        if !(self.a_min.is_finite() && self.a_max.is_finite() && self.a_min < self.a_max) {
            return bad(format!("need finite a_min < a_max, got {} and {}", self.a_min, self.a_max));
        }
        if self.initial_period == 0 {
            return bad("initial period must be at least 1".into());
        }
        if self.initial_period > 1 && self.initial_seed.is_none() {
            return bad("an initial seed is required when the initial period is not 1".into());
        }
        if self.depth == 0 {
            return bad("depth must be at least 1".into());
        }
        if let Some(&n) = self.moduli.iter().find(|&&n| n < 2 || n > u32::MAX as u64) {
            return bad(format!("modulus {n} is out of range (need 2 <= N < 2^32)"));
        }
        if let Some(&p) = self.primes.iter().find(|&&p| !is_prime(p)) {
            return bad(format!("{p} is not prime"));
        }
        if has_duplicates(&self.moduli) || has_duplicates(&self.primes) || has_duplicates(&self.trace_points) {
            return bad("moduli, primes and trace points must not repeat".into());
        }
        for t in &self.trace_points {
            parse_trace_point(t)?;
        }
        if !(self.newton_tolerance > 0.0 && self.parameter_tolerance > 0.0) {
            return bad("tolerances must be positive".into());
        }
        if self.projection_steps < 2 {
            return bad("projection steps must be at least 2".into());
        }
        Ok(())
    }

    pub fn path(&self) -> Result<ParameterPath<f64>> {
        ParameterPath::fixed_b(self.b, self.a_min, self.a_max)
    }

    pub fn cascade_options(&self) -> CascadeOptions<f64> {
        CascadeOptions {
            continuation: ContinuationOptions {
                newton: NewtonOptions { tolerance: self.newton_tolerance, ..NewtonOptions::default() },
                parameter_tolerance: self.parameter_tolerance,
                ..ContinuationOptions::default()
            },
            max_doublings: self.max_doublings,
            seed: self.seed,
            ..CascadeOptions::default()
        }
    }

    pub fn projection(&self) -> ProjectionConfig<f64> {
        ProjectionConfig { steps: self.projection_steps, ..ProjectionConfig::default() }
    }
}

fn has_duplicates<T: Ord + Clone>(items: &[T]) -> bool {
    let mut sorted = items.to_vec();
    sorted.sort();
    sorted.windows(2).any(|w| w[0] == w[1])
}

/// Parses `"re,im"` or `"unit:p/q"`; zero is rejected.
pub fn parse_trace_point(text: &str) -> Result<Complex<f64>> {
    let bad = || Error::Config(format!("bad evaluation point {text:?}; use \"re,im\" or \"unit:p/q\""));
    let z = if let Some(frac) = text.trim().strip_prefix("unit:") {
        let (p, q) = frac.split_once('/').ok_or_else(bad)?;
        let p: i64 = p.trim().parse().map_err(|_| bad())?;
        let q: i64 = q.trim().parse().map_err(|_| bad())?;
        if q == 0 {
            return Err(bad());
        }
        Complex::from_polar(1.0, std::f64::consts::TAU * p as f64 / q as f64)
    } else {
        let (re, im) = text.split_once(',').ok_or_else(bad)?;
        Complex::new(re.trim().parse().map_err(|_| bad())?, im.trim().parse().map_err(|_| bad())?)
    };
    if !(z.re.is_finite() && z.im.is_finite()) {
        return Err(bad());
    }
    if z.re == 0.0 && z.im == 0.0 {
        return Err(Error::Config(format!("evaluation point {text:?} is zero")));
    }
    Ok(z)
}
