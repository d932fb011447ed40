//! File formats: Solomon instances, solution dumps and benchmark reports.

pub mod report;
pub mod solomon;
pub mod solution;
