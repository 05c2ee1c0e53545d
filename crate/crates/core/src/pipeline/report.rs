use serde::{Deserialize, Serialize};

use super::config::PipelineConfig;
use crate::invariants::PadicDigits;
use crate::ErrorKind;

/// Schema tag written into every report.
pub const REPORT_SCHEMA: &str = "braidroute.report/1";

/// Summary of the cascade a report was computed from.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CascadeDigest {
    /// SHA-256 of the record's canonical JSON.
    pub sha256: String,
    pub initial_period: usize,
    /// `a` values of the detected doublings.
    pub doublings: Vec<f64>,
    pub window_end: Option<f64>,
    pub termination: Option<String>,
}

/// Results for one stage `n`: the braid of `γ⁰ … γⁿ` and what was computed from it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StageReport {
    pub stage: usize,
    pub sample_a: f64,
    pub sample_b: f64,
    pub strands: usize,
    pub braid: String,
    /// Whether the orbit born at doubling `n` passes the cable test against its parent.
    pub cable_check: Option<bool>,
    pub spectral_log: Option<f64>,
    pub relative_index: Vec<IndexValue>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndexValue {
    pub modulus: u64,
    /// Decimal string; absent when the computation failed (see the error ledger).
    pub value: Option<String>,
}

/// Index-derived invariants for one modulus, truncated at `depth`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModulusInvariants {
    pub modulus: u64,
    pub depth: usize,
    pub index_terms: Vec<String>,
    pub convergents: Vec<[String; 2]>,
    /// Decimal rendering of the last convergent, for reading only.
    pub decimal: Option<String>,
    pub padic: Vec<PadicDigits>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TraceSeries {
    /// The evaluation point as written in the configuration.
    pub t: String,
    pub values: Vec<[f64; 2]>,
}

/// Invariants of several cascades merged by the braid order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RouteReport {
    /// Digests of the cascades, in input order.
    pub cascades: Vec<String>,
    pub invariants: Vec<ModulusInvariants>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Conventions {
    pub braid_gluing: String,
    pub ordering: String,
    pub projection: String,
    pub ambient_group: String,
    pub representation: String,
}

impl Default for Conventions {
    fn default() -> Self {
        Conventions {
            braid_gluing: "union-braid convention: the braid of all coexisting cascade orbits at a \
                           mid-window parameter, not a canonical gluing"
                .into(),
            ordering: "lowest-index generator positive (sigma_1-positive) left-invariant order".into(),
            projection: "strands ordered by x cos(theta) + y sin(theta), larger -x sin(theta) + y cos(theta) \
                         passes in front; theta starts at 0 and advances by the golden angle on coincidence"
                .into(),
            ambient_group: "relative index taken inside the image of B_k with k = strands of the stage braid".into(),
            representation: "unreduced Burau, sigma_i -> [[1-t, t], [1, 0]]; symplectic = value at t = -1".into(),
        }
    }
}

/// One aborted computation.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LedgerEntry {
    pub stage: String,
    pub kind: String,
    pub message: String,
}

impl LedgerEntry {
    pub fn new(stage: impl Into<String>, err: &crate::Error) -> LedgerEntry {
        let kind = match err.kind() {
            ErrorKind::Config => "config",
            ErrorKind::Numerical => "numerical",
            ErrorKind::Resource => "resource",
            ErrorKind::Other => "other",
        };
        LedgerEntry { stage: stage.into(), kind: kind.into(), message: err.to_string() }
    }
}

/// The full output of a pipeline run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub schema: String,
    pub tool_version: String,
    pub config: PipelineConfig,
    pub cascade: CascadeDigest,
    pub stages: Vec<StageReport>,
    pub invariants: Vec<ModulusInvariants>,
    pub traces: Vec<TraceSeries>,
    pub route: Option<RouteReport>,
    pub conventions: Conventions,
    pub notes: Vec<String>,
    pub errors: Vec<LedgerEntry>,
}

/// How a run ended, mapped to process exit codes by the command-line tool.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RunStatus {
    Complete,
    /// Some stage failed numerically; the report is partial.
    Partial,
    /// A resource cap was hit.
    ResourceLimited,
}

impl InvariantReport {
    pub fn status(&self) -> RunStatus {
        if self.errors.iter().any(|e| e.kind == "resource") {
            RunStatus::ResourceLimited
        } else if !self.errors.is_empty() || (self.stages.is_empty() && self.config.max_doublings > 0) {
            RunStatus::Partial
        } else {
            RunStatus::Complete
        }
    }

    /// Pretty JSON with a trailing newline; identical reports give identical bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
