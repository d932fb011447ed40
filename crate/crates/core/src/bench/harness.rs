use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::reference::ReferenceTable;
use crate::engine::{run, Mode, PsoConfig, RunResult};
use crate::io::solomon::{build_instance, read_instance, truncate, SolomonError};
use crate::vrptw::{compare_lexicographic, Instance};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("{path}: {source}")]
    Instance { path: String, source: SolomonError },
    #[error("suite has no seeds")]
    NoSeeds,
    #[error("suite has no instances")]
    NoInstances,
    #[error("suite has no modes")]
    NoModes,
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("could not start worker pool: {0}")]
    Pool(String),
}

/// Default iteration budget for a customer count: 1000 up to 25 customers,
/// 10000 beyond.
pub fn iteration_budget(customers: usize) -> usize {
    if customers <= 25 {
        1000
    } else {
        10000
    }
}

#[derive(Debug, Clone)]
pub struct SuiteSpec {
    pub instance_paths: Vec<PathBuf>,
    /// Truncation sizes; `None` runs the full file.
    pub customer_counts: Vec<Option<usize>>,
    pub seeds: Vec<u64>,
    pub cfg: PsoConfig,
    pub modes: Vec<Mode>,
    pub reference: Option<ReferenceTable>,
    /// Overrides [`iteration_budget`] when set.
    pub iterations: Option<usize>,
    /// Worker threads; `None` uses every logical core.
    pub jobs: Option<usize>,
}

impl SuiteSpec {
    pub fn new(instance_paths: Vec<PathBuf>, seeds: Vec<u64>) -> Self {
        SuiteSpec {
            instance_paths,
            customer_counts: vec![None],
            seeds,
            cfg: PsoConfig::benchmark(),
            modes: vec![Mode::Rwpso],
            reference: None,
            iterations: None,
            jobs: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Marker {
    None,
    /// Same vehicle count as the reference and distance within 5%.
    Star,
    /// Fewer vehicles than the reference.
    DoubleStar,
}

impl Marker {
    pub fn symbol(self) -> &'static str {
        match self {
            Marker::None => "",
            Marker::Star => "*",
            Marker::DoubleStar => "**",
        }
    }
}

/// Compares a result against a best-known `(nv, td)`.
pub fn marker(best: (usize, f64), reference: (usize, f64)) -> Marker {
    if best.0 < reference.0 {
        Marker::DoubleStar
    } else if best.0 == reference.0 && best.1 <= 1.05 * reference.1 {
        Marker::Star
    } else {
        Marker::None
    }
}

/// Outcome of one (instance, mode, seed) job.
#[derive(Debug, Clone, Serialize)]
pub struct CellRecord {
    pub instance: String,
    pub customers: usize,
    pub mode: Mode,
    pub seed: u64,
    pub nv: Option<usize>,
    pub td: Option<f64>,
    pub wall_clock: Option<f64>,
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CellStats {
    pub best_nv: usize,
    pub best_td: f64,
    pub mean_td: f64,
    /// Sample standard deviation; 0 for a single seed.
    pub std_td: f64,
    pub mean_cpu_s: f64,
}

/// Aggregate over all seeds of one (instance, customer count, mode).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ReportRow {
    /// Instance name with the customer count, e.g. `C101.25`.
    pub instance: String,
    pub base_name: String,
    pub customers: usize,
    pub mode: Mode,
    pub capacity: f64,
    pub archive_size: usize,
    pub seeds: usize,
    pub failed: usize,
    /// `None` when every seed failed.
    pub stats: Option<CellStats>,
    pub reference: Option<(usize, f64)>,
    pub marker: Option<Marker>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteReport {
    pub seeds: Vec<u64>,
    pub archive_size: usize,
    pub rows: Vec<ReportRow>,
}

impl SuiteReport {
    pub fn succeeded_cells(&self) -> usize {
        self.rows.iter().filter(|r| r.stats.is_some()).count()
    }

    /// Copy with timing columns zeroed, for determinism comparisons.
    pub fn without_timing(&self) -> SuiteReport {
        let mut r = self.clone();
        for row in &mut r.rows {
            if let Some(s) = &mut row.stats {
                s.mean_cpu_s = 0.0;
            }
        }
        r
    }
}

/// Mean and sample standard deviation.
pub fn mean_std(values: &[f64]) -> (f64, f64) {
    let n = values.len();
    if n == 0 {
        return (f64::NAN, f64::NAN);
    }
    let mean = values.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, var.sqrt())
}

struct Cell {
    base_name: String,
    customers: usize,
    inst: Instance,
}

fn base_name(path: &Path, declared: &str) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .map(str::to_string)
        .unwrap_or_else(|| declared.to_string())
        .to_ascii_uppercase()
}

fn load_cells(spec: &SuiteSpec) -> Result<Vec<Cell>, HarnessError> {
    let mut cells = Vec::new();
    for path in &spec.instance_paths {
        let wrap = |source| HarnessError::Instance {
            path: path.display().to_string(),
            source,
        };
        let raw = read_instance(path).map_err(wrap)?;
        let base = base_name(path, &raw.name);
        for count in &spec.customer_counts {
            let view = match count {
                Some(n) => truncate(&raw, *n).map_err(wrap)?,
                None => raw.clone(),
            };
            let mut inst = build_instance(&view).map_err(wrap)?;
            let customers = inst.n_customers();
            inst = inst.renamed(format!("{base}.{customers}"));
            cells.push(Cell {
                base_name: base.clone(),
                customers,
                inst,
            });
        }
    }
    Ok(cells)
}

fn run_job(cell: &Cell, mode: Mode, seed: u64, spec: &SuiteSpec) -> Result<RunResult, String> {
    let cfg = PsoConfig {
        seed,
        max_iterations: spec.iterations.unwrap_or_else(|| iteration_budget(cell.customers)),
        ..spec.cfg.clone()
    };
    match catch_unwind(AssertUnwindSafe(|| run(&cell.inst, &cfg, mode))) {
        Ok(Ok(result)) => Ok(result),
        Ok(Err(e)) => Err(e.to_string()),
        Err(panic) => Err(panic
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| panic.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| "run panicked".to_string())),
    }
}

/// Runs every (instance, customer count, mode, seed) job on a worker pool and
/// folds the results in a fixed order. `on_record` is called as each job
/// completes, in completion order.
pub fn run_suite(spec: &SuiteSpec, on_record: impl Fn(&CellRecord) + Sync) -> Result<SuiteReport, HarnessError> {
    if spec.seeds.is_empty() {
        return Err(HarnessError::NoSeeds);
    }
    if spec.instance_paths.is_empty() {
        return Err(HarnessError::NoInstances);
    }
    if spec.modes.is_empty() {
        return Err(HarnessError::NoModes);
    }
    spec.cfg.validate().map_err(|e| HarnessError::Config(e.to_string()))?;
    let cells = load_cells(spec)?;

    let mut jobs = Vec::new();
    for (ci, _) in cells.iter().enumerate() {
        for &mode in &spec.modes {
            for &seed in &spec.seeds {
                jobs.push((ci, mode, seed));
            }
        }
    }
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(n) = spec.jobs {
        pool = pool.num_threads(n.max(1));
    }
    let pool = pool.build().map_err(|e| HarnessError::Pool(e.to_string()))?;
    let results: Vec<Result<RunResult, String>> = pool.install(|| {
        jobs.par_iter()
            .map(|&(ci, mode, seed)| {
                let cell = &cells[ci];
                let result = run_job(cell, mode, seed, spec);
                on_record(&CellRecord {
                    instance: cell.inst.name().to_string(),
                    customers: cell.customers,
                    mode,
                    seed,
                    nv: result.as_ref().ok().map(|r| r.nv),
                    td: result.as_ref().ok().map(|r| r.td),
                    wall_clock: result.as_ref().ok().map(|r| r.wall_clock),
                    error: result.as_ref().err().cloned(),
                });
                result
            })
            .collect()
    });

    let per_cell = spec.seeds.len();
    let mut rows = Vec::new();
    for (chunk, (ci, mode, _)) in results.chunks(per_cell).zip(jobs.iter().step_by(per_cell)) {
        let cell = &cells[*ci];
        let ok: Vec<&RunResult> = chunk.iter().filter_map(|r| r.as_ref().ok()).collect();
        let stats = ok
            .iter()
            .copied()
            .min_by(|a, b| compare_lexicographic(&a.best_plan, &b.best_plan))
            .map(|best| {
                let tds: Vec<f64> = ok.iter().map(|r| r.td).collect();
                let cpus: Vec<f64> = ok.iter().map(|r| r.wall_clock).collect();
                let (mean_td, std_td) = mean_std(&tds);
                CellStats {
                    best_nv: best.nv,
                    best_td: best.td,
                    mean_td,
                    std_td,
                    mean_cpu_s: mean_std(&cpus).0,
                }
            });
        let reference = spec
            .reference
            .as_ref()
            .and_then(|t| t.get(&cell.base_name, cell.customers))
            .map(|e| (e.nv, e.td));
        let marker = match (&stats, reference) {
            (Some(s), Some(r)) => Some(marker((s.best_nv, s.best_td), r)),
            _ => None,
        };
        rows.push(ReportRow {
            instance: cell.inst.name().to_string(),
            base_name: cell.base_name.clone(),
            customers: cell.customers,
            mode: *mode,
            capacity: cell.inst.capacity(),
            archive_size: match mode {
                Mode::Rwpso => spec.cfg.archive_size,
                Mode::Baseline => 1,
            },
            seeds: per_cell,
            failed: per_cell - ok.len(),
            stats,
            reference,
            marker,
        });
    }
    Ok(SuiteReport {
        seeds: spec.seeds.clone(),
        archive_size: spec.cfg.archive_size,
        rows,
    })
}
