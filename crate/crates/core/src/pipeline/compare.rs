use serde::Serialize;

use super::report::{InvariantReport, ModulusInvariants};
use crate::{Error, Result};

/// Absolute tolerance on trace values.
pub const TRACE_TOLERANCE: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Distinct,
    Indistinguishable,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Difference {
    pub field: String,
    pub detail: String,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportComparison {
    pub verdict: Verdict,
    pub depth: usize,
    pub differences: Vec<Difference>,
}

/// Compares the invariants of two reports computed with the same depth and menus.
///
/// Series of different lengths are compared over their common prefix; terms are numbered from 1.
pub fn compare_reports(r1: &InvariantReport, r2: &InvariantReport) -> Result<ReportComparison> {
    let (c1, c2) = (&r1.config, &r2.config);
    if c1.depth != c2.depth {
        return Err(Error::Incomparable(format!("depths differ: {} vs {}", c1.depth, c2.depth)));
    }
    if c1.moduli != c2.moduli || c1.primes != c2.primes || c1.trace_points != c2.trace_points {
        return Err(Error::Incomparable("moduli, primes or trace points differ".into()));
    }
    let mut diffs = Vec::new();
    compare_invariants("invariants", &r1.invariants, &r2.invariants, &mut diffs);
    for (t1, t2) in r1.traces.iter().zip(&r2.traces) {
        for (i, (v1, v2)) in t1.values.iter().zip(&t2.values).enumerate() {
            let d = (v1[0] - v2[0]).hypot(v1[1] - v2[1]);
            if !(d <= TRACE_TOLERANCE) {
                diffs.push(Difference {
                    field: format!("traces[t={}]", t1.t),
                    detail: format!("term {}: {:?} vs {:?}", i + 1, v1, v2),
                });
            }
        }
    }
    if let (Some(a), Some(b)) = (&r1.route, &r2.route) {
        compare_invariants("route", &a.invariants, &b.invariants, &mut diffs);
    }
    let verdict = if diffs.is_empty() { Verdict::Indistinguishable } else { Verdict::Distinct };
    Ok(ReportComparison { verdict, depth: c1.depth, differences: diffs })
}

fn compare_invariants(section: &str, a: &[ModulusInvariants], b: &[ModulusInvariants], diffs: &mut Vec<Difference>) {
    for (m1, m2) in a.iter().zip(b) {
        let n = m1.modulus;
        if let Some(i) = first_mismatch(&m1.index_terms, &m2.index_terms) {
            diffs.push(Difference {
                field: format!("{section}[N={n}].index_terms"),
                detail: format!("term {}: {} vs {}", i + 1, m1.index_terms[i], m2.index_terms[i]),
            });
        }
        for (p1, p2) in m1.padic.iter().zip(&m2.padic) {
            if let Some(i) = first_mismatch(&p1.digits, &p2.digits) {
                diffs.push(Difference {
                    field: format!("{section}[N={n}].padic[p={}]", p1.p),
                    detail: format!("digit {}: {} vs {}", i + 1, p1.digits[i], p2.digits[i]),
                });
            }
        }
    }
}

fn first_mismatch<T: PartialEq>(a: &[T], b: &[T]) -> Option<usize> {
    a.iter().zip(b).position(|(x, y)| x != y)
}
