//! The `rwpso` command line.
//!
//! Exit codes: 0 success, 1 runtime failure, 2 usage or configuration
//! error, 3 infeasible solution.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::sync::mpsc;

use clap::{Args, Parser, Subcommand};

use crate::bench::{load_suite, run_suite};
use crate::codec::DecodePolicy;
use crate::engine::{Mode, PsoConfig, Swarm};
use crate::io::report::{write_report, ReportFormat};
use crate::io::solomon::load_instance;
use crate::io::solution::SolutionDump;
use crate::vrptw::{evaluate, validate, CostWeights, Instance};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "rwpso", version, about = "Roulette-wheel PSO for the VRP with time windows")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Optimize one instance and write the run record with its routes.
    Solve(SolveArgs),
    /// Run a benchmark suite described by a TOML file.
    Bench(BenchArgs),
    /// Check a solution file against an instance.
    Validate(ValidateArgs),
    /// Print an instance summary and, optionally, a solution's schedule.
    Inspect(InspectArgs),
}

#[derive(Debug, Args)]
struct InstanceArgs {
    /// Solomon instance file.
    #[arg(long)]
    instance: PathBuf,
    /// Keep only the first N customers.
    #[arg(long)]
    customers: Option<usize>,
}

#[derive(Debug, Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InstanceArgs,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "rwpso")]
    mode: Mode,
    /// Iterations; defaults to 1000 up to 25 customers and 10000 beyond.
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long, default_value_t = 20)]
    particles: usize,
    /// Archive size L.
    #[arg(long, default_value_t = 5)]
    archive: usize,
    #[arg(long, default_value = "cheapest_insertion")]
    decoder: DecodePolicy,
    /// Velocity bound factor k.
    #[arg(long, default_value_t = 0.5)]
    k_vmax: f64,
    /// Weight of waiting time in the cost.
    #[arg(long, default_value_t = 0.0)]
    time_cost: f64,
    /// Output file; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// Suite file.
    #[arg(long)]
    suite: PathBuf,
    /// Report file; standard output when absent.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long, default_value = "csv")]
    format: ReportFormat,
    /// Worker threads; defaults to the number of logical cores.
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Debug, Args)]
struct ValidateArgs {
    #[command(flatten)]
    input: InstanceArgs,
    /// Solution JSON with a `routes` array.
    #[arg(long)]
    solution: PathBuf,
}

#[derive(Debug, Args)]
struct InspectArgs {
    #[command(flatten)]
    input: InstanceArgs,
    #[arg(long)]
    solution: Option<PathBuf>,
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }

    fn runtime(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_RUNTIME,
            message: message.into(),
        }
    }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (program name first) and executes the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { out.write_all(text.as_bytes()) } else { err.write_all(text.as_bytes()) };
            return code;
        }
    };
    let outcome = match cli.command {
        Command::Solve(a) => solve(a, out),
        Command::Bench(a) => bench(a, out, err),
        Command::Validate(a) => validate_cmd(a, out),
        Command::Inspect(a) => inspect(a, out),
    };
    match outcome {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn load(input: &InstanceArgs) -> Result<Instance, Failure> {
    load_instance(&input.instance, input.customers)
        .map(|(_, inst)| inst)
        .map_err(|e| Failure::usage(format!("{}: {e}", input.instance.display())))
}

fn write_output(path: Option<&Path>, text: &str, out: &mut dyn Write) -> Result<(), Failure> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::runtime(format!("{}: {e}", p.display()))),
        None => out.write_all(text.as_bytes()).map_err(|e| Failure::runtime(e.to_string())),
    }
}

fn solve(a: SolveArgs, out: &mut dyn Write) -> Outcome {
    let inst = load(&a.input)?;
    let cfg = PsoConfig {
        seed: a.seed,
        n_particles: a.particles,
        archive_size: a.archive,
        decoder: a.decoder,
        k_vmax: a.k_vmax,
        time_cost: a.time_cost,
        max_iterations: a.iters.unwrap_or_else(|| crate::bench::iteration_budget(inst.n_customers())),
        ..PsoConfig::benchmark()
    };
    let swarm = Swarm::new(&inst, &cfg, a.mode).map_err(|e| Failure::usage(e.to_string()))?;
    let result = swarm.run();
    let dump = SolutionDump::from_run(&result);
    write_output(a.out.as_deref(), &(dump.to_json() + "\n"), out)?;
    Ok(EXIT_OK)
}

fn bench(a: BenchArgs, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    let mut spec = load_suite(&a.suite).map_err(|e| Failure::usage(format!("{}: {e}", a.suite.display())))?;
    spec.jobs = a.jobs;
    let (tx, rx) = mpsc::channel::<String>();
    let report = std::thread::scope(|scope| {
        let worker = scope.spawn(|| {
            run_suite(&spec, move |record| {
                let _ = tx.send(serde_json::to_string(record).expect("records serialize"));
            })
        });
        for line in rx {
            let _ = writeln!(err, "{line}");
        }
        worker.join().expect("suite thread")
    })
    .map_err(|e| Failure::usage(e.to_string()))?;
    let mut buf = Vec::new();
    write_report(&report, a.format, &mut buf).map_err(|e| Failure::runtime(e.to_string()))?;
    write_output(a.report.as_deref(), &String::from_utf8_lossy(&buf), out)?;
    if report.succeeded_cells() == 0 {
        return Err(Failure::runtime("every run in the suite failed"));
    }
    Ok(EXIT_OK)
}

fn validate_cmd(a: ValidateArgs, out: &mut dyn Write) -> Outcome {
    let inst = load(&a.input)?;
    let dump = SolutionDump::read(&a.solution).map_err(|e| Failure::usage(format!("{}: {e}", a.solution.display())))?;
    let routes = dump.route_stops();
    if let Some(v) = validate(&inst, &routes).first() {
        return Err(Failure {
            code: EXIT_INFEASIBLE,
            message: format!("infeasible: {v}"),
        });
    }
    let plan = evaluate(&inst, &routes, &CostWeights::default()).map_err(|e| Failure {
        code: EXIT_INFEASIBLE,
        message: format!("infeasible: {e}"),
    })?;
    writeln!(out, "feasible nv={} td={:.2}", plan.nv, plan.td).map_err(|e| Failure::runtime(e.to_string()))?;
    Ok(EXIT_OK)
}

fn inspect(a: InspectArgs, out: &mut dyn Write) -> Outcome {
    let inst = load(&a.input)?;
    let (start, end) = inst.horizon();
    let mut text = format!(
        "instance {}\ncustomers {}\ncapacity {}\nvehicles {}\nhorizon [{start}, {end}]\n",
        inst.name(),
        inst.n_customers(),
        inst.capacity(),
        inst.fleet_size()
    );
    if let Some(path) = &a.solution {
        let dump = SolutionDump::read(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))?;
        let plan = evaluate(&inst, &dump.route_stops(), &CostWeights::default()).map_err(|e| Failure {
            code: EXIT_INFEASIBLE,
            message: format!("infeasible: {e}"),
        })?;
        text.push_str(&format!("nv {} td {:.2}\n", plan.nv, plan.td));
        for (i, r) in plan.routes.iter().enumerate() {
            text.push_str(&format!(
                "route {} load {} distance {:.2} return {:.2}\n",
                i + 1,
                r.load,
                r.distance,
                r.return_time
            ));
            for s in &r.schedule {
                text.push_str(&format!(
                    "  customer {:>3} arrive {:>8.2} wait {:>7.2} begin {:>8.2} depart {:>8.2}\n",
                    s.customer, s.arrival, s.wait, s.begin, s.depart
                ));
            }
        }
    }
    out.write_all(text.as_bytes()).map_err(|e| Failure::runtime(e.to_string()))?;
    Ok(EXIT_OK)
}
