//! Benchmark suites over Solomon instances: multi-seed runs on a worker pool,
//! per-cell statistics and comparison markers against reference results.

mod harness;
mod reference;
mod suite_config;

pub use harness::{
    iteration_budget, marker, mean_std, run_suite, CellRecord, CellStats, HarnessError, Marker, ReportRow,
    SuiteReport, SuiteSpec,
};
pub use reference::{ingest_reference, load_reference, ReferenceEntry, ReferenceError, ReferenceTable};
pub use suite_config::{load_suite, parse_suite, SuiteConfigError};
