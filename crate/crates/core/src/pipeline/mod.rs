//! Configuration, report assembly, comparison and persistence.

mod compare;
mod config;
mod persist;
mod report;
mod run;

pub use compare::{compare_reports, Difference, ReportComparison, Verdict, TRACE_TOLERANCE};
pub use config::{parse_trace_point, PipelineConfig};
pub use persist::{load_order_cache, load_record, load_report, save_order_cache, save_record, save_report};
pub use report::{
    CascadeDigest, Conventions, IndexValue, InvariantReport, LedgerEntry, ModulusInvariants, RouteReport, RunStatus,
    StageReport, TraceSeries, REPORT_SCHEMA,
};
pub use run::{assemble, build_cascade, cascade_digest, run_pipeline, TOOL_VERSION};
