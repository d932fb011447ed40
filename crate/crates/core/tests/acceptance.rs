//! Acceptance criteria. Runs as a plain binary and prints one PASS/FAIL line
//! per criterion; exits non-zero if any criterion fails.

mod common;

use std::collections::HashMap;
use std::path::PathBuf;
use std::process::Command;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use common::{brute_force, random_instance, reference_dir, solomon_dir, solomon_file};
use rwpso::bench::{load_reference, marker, run_suite, Marker, SuiteSpec};
use rwpso::codec::{decode, make_shape};
use rwpso::engine::{ArchiveRule, GBestArchive, Mode, PsoConfig, Swarm};
use rwpso::io::solomon::{build_instance, load_instance, read_instance};
use rwpso::io::solution::SolutionDump;
use rwpso::vrptw::{evaluate, validate, CostWeights, Instance};

struct Outcome {
    pass: bool,
    detail: String,
}

type Criterion = (&'static str, fn() -> Outcome);

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn load25(name: &str) -> Instance {
    load_instance(&solomon_file(name), Some(25)).expect("instance loads").1
}

fn parser_totality() -> Outcome {
    let start = Instant::now();
    let mut files: Vec<PathBuf> = std::fs::read_dir(solomon_dir())
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "txt"))
        .collect();
    files.sort();
    let mut problems = Vec::new();
    for path in &files {
        let stem = path.file_stem().unwrap().to_str().unwrap().to_ascii_uppercase();
        let expected = if stem.starts_with("C2") {
            700.0
        } else if stem.starts_with("R2") || stem.starts_with("RC2") {
            1000.0
        } else {
            200.0
        };
        match read_instance(path).and_then(|raw| build_instance(&raw)) {
            Ok(inst) if inst.capacity() == expected && inst.n_customers() == 100 => {}
            Ok(inst) => problems.push(format!("{stem}: capacity {} customers {}", inst.capacity(), inst.n_customers())),
            Err(e) => problems.push(format!("{stem}: {e}")),
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    outcome(
        files.len() == 56 && problems.is_empty() && elapsed < 1.0,
        format!("{} files, {} problems {:?}, {:.3}s", files.len(), problems.len(), problems, elapsed),
    )
}

fn desk_reproduction() -> Outcome {
    let targets = [("C101", 3usize, 191.81), ("C105", 3, 191.81), ("RC101", 4, 462.16)];
    let seeds: Vec<u64> = (1..=10).collect();
    let mut pass = true;
    let mut parts = Vec::new();
    for (name, nv, td) in targets {
        let inst = load25(name);
        let results: Vec<(usize, f64, f64)> = seeds
            .par_iter()
            .map(|&seed| {
                let cfg = PsoConfig { seed, max_iterations: 1000, ..PsoConfig::benchmark() };
                let r = Swarm::new(&inst, &cfg, Mode::Rwpso).unwrap().run();
                (r.nv, r.td, r.wall_clock)
            })
            .collect();
        let hits = results.iter().filter(|(n, t, _)| *n == nv && *t <= 1.05 * td).count();
        let slowest = results.iter().map(|r| r.2).fold(0.0, f64::max);
        let best = results.iter().min_by(|a, b| a.0.cmp(&b.0).then(a.1.total_cmp(&b.1))).unwrap();
        pass &= hits >= 7 && slowest < 30.0 && best.0 == nv;
        parts.push(format!("{name}.25 {hits}/10 hits, best {}/{:.2}, slowest {:.2}s", best.0, best.1, slowest));
    }
    outcome(pass, parts.join("; "))
}

fn r101_fifty() -> Outcome {
    let inst = load_instance(&solomon_file("R101"), Some(50)).unwrap().1;
    let cfg = PsoConfig { seed: 1, max_iterations: 10000, ..PsoConfig::benchmark() };
    let r = Swarm::new(&inst, &cfg, Mode::Rwpso).unwrap().run();
    let dump = SolutionDump::from_run(&r);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r101_50.json");
    std::fs::write(&path, dump.to_json()).unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_rwpso"))
        .args(["validate", "--instance"])
        .arg(solomon_file("R101"))
        .args(["--customers", "50", "--solution"])
        .arg(&path)
        .output()
        .unwrap();
    let code = status.status.code();
    outcome(
        r.iterations == 10000 && code == Some(0) && r.nv <= 14,
        format!("nv {} td {:.2}, validator exit {:?}, {:.1}s", r.nv, r.td, code, r.wall_clock),
    )
}

fn oracle_equivalence() -> Outcome {
    let cases: Vec<(u64, usize, bool)> = (0..20u64).map(|i| (1000 + i, 4 + (i as usize % 3), i % 2 == 0)).collect();
    let results: Vec<(bool, bool, String)> = cases
        .par_iter()
        .map(|&(seed, n, tight)| {
            let inst = random_instance(seed, n, tight);
            let oracle = brute_force(&inst);
            let eval = evaluate(&inst, &oracle.routes, &CostWeights::default()).unwrap();
            let td_agrees = eval.nv == oracle.nv && (eval.td - oracle.td).abs() <= 1e-9;
            let cfg = PsoConfig { seed, max_iterations: 500, ..PsoConfig::benchmark() };
            let r = Swarm::new(&inst, &cfg, Mode::Rwpso).unwrap().run();
            let found = r.nv == oracle.nv && (r.td - oracle.td).abs() <= 1e-6;
            (found, td_agrees, format!("{}: {}/{:.2} vs {}/{:.2}", inst.name(), r.nv, r.td, oracle.nv, oracle.td))
        })
        .collect();
    let found = results.iter().filter(|r| r.0).count();
    let agree = results.iter().all(|r| r.1);
    let misses: Vec<&str> = results.iter().filter(|r| !r.0).map(|r| r.2.as_str()).collect();
    outcome(
        found >= 18 && agree,
        format!("{found}/20 optimal, evaluator agrees: {agree}, misses {misses:?}"),
    )
}

fn trajectories_match(inst: &Instance, seed: u64, iterations: usize) -> bool {
    let cfg = PsoConfig { seed, archive_size: 1, max_iterations: iterations, ..PsoConfig::benchmark() };
    let a = Swarm::new(inst, &cfg, Mode::Rwpso).unwrap();
    let b = Swarm::new(inst, &cfg, Mode::Baseline).unwrap();
    let mut sa = a.init();
    let mut sb = b.init();
    let same = |x: &rwpso::engine::SwarmState, y: &rwpso::engine::SwarmState| {
        x.particles.iter().zip(&y.particles).all(|(p, q)| {
            p.position == q.position
                && p.velocity == q.velocity
                && p.pbest_position == q.pbest_position
                && p.pbest_fitness.to_bits() == q.pbest_fitness.to_bits()
        })
    };
    if !same(&sa, &sb) {
        return false;
    }
    for _ in 0..iterations {
        a.step(&mut sa);
        b.step(&mut sb);
        if !same(&sa, &sb) || sa.best_guide_fitness().to_bits() != sb.best_guide_fitness().to_bits() {
            return false;
        }
    }
    true
}

fn l1_degeneracy() -> Outcome {
    let cases: Vec<(String, Instance, u64)> = vec![
        ("C101.25".into(), load25("C101"), 3),
        ("RC101.25".into(), load25("RC101"), 8),
        ("random".into(), random_instance(7, 6, true), 21),
    ];
    let failures: Vec<&str> =
        cases.iter().filter(|(_, inst, seed)| !trajectories_match(inst, *seed, 200)).map(|c| c.0.as_str()).collect();
    outcome(failures.is_empty(), format!("{} instances x 200 iterations, mismatches {failures:?}", cases.len()))
}

fn roulette_statistics() -> Outcome {
    let positions: Vec<Vec<f64>> = (0..4).map(|i| vec![i as f64]).collect();
    let fitness = [4.0, 3.0, 2.0, 1.0];
    let archive = GBestArchive::seeded(
        4,
        ArchiveRule::Replace,
        positions.iter().map(|p| p.as_slice()).zip(fitness.iter().copied()),
    );
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let n = 100_000usize;
    let mut counts = [0usize; 4];
    for _ in 0..n {
        counts[archive.select_index(rng.gen::<f64>()).unwrap()] += 1;
    }
    let expected = [0.4, 0.3, 0.2, 0.1];
    let mut pass = true;
    let mut parts = Vec::new();
    for i in 0..4 {
        let p = expected[i];
        let sigma = (n as f64 * p * (1.0 - p)).sqrt();
        let dev = (counts[i] as f64 - n as f64 * p).abs() / sigma;
        pass &= dev <= 3.0;
        parts.push(format!("{:.4} ({dev:.2} sd)", counts[i] as f64 / n as f64));
    }
    outcome(pass, format!("frequencies {}", parts.join(", ")))
}

fn invariant_suite() -> Outcome {
    let mut failures: Vec<String> = Vec::new();
    let mut rng = ChaCha8Rng::seed_from_u64(77);

    for trial in 0..500 {
        let len = rng.gen_range(1..=8);
        let mut fit: Vec<f64> = (0..len).map(|_| rng.gen_range(1e-6..1.0)).collect();
        fit.sort_by(|a, b| b.total_cmp(a));
        fit.dedup();
        let positions: Vec<Vec<f64>> = fit.iter().map(|&f| vec![f]).collect();
        let archive = GBestArchive::seeded(
            fit.len(),
            ArchiveRule::Replace,
            positions.iter().map(|p| p.as_slice()).zip(fit.iter().copied()),
        );
        let probs = archive.selection_probabilities().unwrap();
        let sum: f64 = probs.iter().sum();
        if (sum - 1.0).abs() > 1e-12 || probs.iter().any(|&p| p < 0.0) || probs.windows(2).any(|w| w[0] < w[1]) {
            failures.push(format!("probabilities trial {trial}: sum {sum}"));
        }
    }

    for rule in [ArchiveRule::Replace, ArchiveRule::InsertShift] {
        let mut archive = GBestArchive::new(5, rule);
        let mut head = f64::NEG_INFINITY;
        for _ in 0..5000 {
            let f: f64 = rng.gen();
            archive.offer(&[f], f);
            let fit = archive.fitness();
            if fit.windows(2).any(|w| w[0] < w[1]) || fit[0] < head {
                failures.push(format!("archive ordering under {rule:?}: {fit:?}"));
                break;
            }
            head = fit[0];
        }
    }

    let weights = CostWeights::default();
    let mut instances: Vec<Instance> = ["C101", "R101", "RC101", "C201"].iter().map(|n| load25(n)).collect();
    instances.push(load_instance(&solomon_file("R101"), None).unwrap().1);
    for inst in &instances {
        let shape = make_shape(inst, inst.fleet_size(), 0.5).unwrap();
        for policy in [
            rwpso::codec::DecodePolicy::CheapestInsertion,
            rwpso::codec::DecodePolicy::FirstFeasible,
            rwpso::codec::DecodePolicy::NearestReference,
        ] {
            for _ in 0..1000 {
                let position: Vec<f64> =
                    shape.lower().iter().zip(shape.upper()).map(|(lo, hi)| lo + (hi - lo) * rng.gen::<f64>()).collect();
                let d = decode(inst, &position, &shape, &weights, policy);
                let violations = validate(inst, &d.plan.stops());
                if !violations.is_empty() {
                    failures.push(format!("{} {policy:?}: {}", inst.name(), violations[0]));
                    break;
                }
            }
        }
    }

    for (name, mode) in [("C101", Mode::Rwpso), ("RC101", Mode::Rwpso), ("R101", Mode::Baseline)] {
        let inst = load25(name);
        let cfg = PsoConfig { seed: 9, max_iterations: 1000, ..PsoConfig::benchmark() };
        let swarm = Swarm::new(&inst, &cfg, mode).unwrap();
        let shape = swarm.shape().clone();
        let mut state = swarm.init();
        let mut head = state.best_guide_fitness();
        for t in 0..cfg.max_iterations {
            swarm.step(&mut state);
            let clamped = state.particles.iter().all(|p| {
                p.velocity.iter().zip(shape.vmax()).all(|(v, m)| v.abs() <= *m)
                    && p.position.iter().zip(shape.lower()).zip(shape.upper()).all(|((x, lo), hi)| lo <= x && x <= hi)
            });
            if !clamped {
                failures.push(format!("{name}: clamping violated at iteration {t}"));
                break;
            }
            if state.best_guide_fitness() < head {
                failures.push(format!("{name}: head fitness decreased at iteration {t}"));
                break;
            }
            head = state.best_guide_fitness();
        }
    }

    let mut spec = SuiteSpec::new(vec![solomon_file("C101"), solomon_file("RC201")], vec![1, 2, 3]);
    spec.customer_counts = vec![Some(10)];
    spec.modes = vec![Mode::Rwpso, Mode::Baseline];
    spec.iterations = Some(50);
    let first = run_suite(&spec, |_| {}).unwrap().without_timing();
    spec.jobs = Some(1);
    let second = run_suite(&spec, |_| {}).unwrap().without_timing();
    if first != second {
        failures.push("suite report differs between runs".into());
    }

    outcome(failures.is_empty(), format!("failures {failures:?}"))
}

fn marker_logic() -> Outcome {
    let solomon = load_reference(&reference_dir().join("solomon_best.csv")).unwrap();
    let reported = load_reference(&reference_dir().join("rwpso_reported.csv")).unwrap();
    let printed: HashMap<String, String> = std::fs::read_to_string(reference_dir().join("reported_markers.csv"))
        .unwrap()
        .lines()
        .skip(1)
        .filter_map(|l| {
            let f: Vec<&str> = l.split(',').collect();
            (f[1] == "25").then(|| (f[0].to_string(), f[2].to_string()))
        })
        .collect();
    let spot = ["C101", "C105", "C201", "C202", "C205", "R101", "R103", "R110", "R201", "R208"];
    let mut mismatches = Vec::new();
    for name in spot {
        let best = reported.get(name, 25).unwrap();
        let reference = solomon.get(name, 25).unwrap();
        let m = marker((best.nv, best.td), (reference.nv, reference.td));
        if m.symbol() != printed[name] {
            mismatches.push(format!("{name}: {} vs printed {}", m.symbol(), printed[name]));
        }
    }
    let c202 = marker((1, 222.32), (2, 214.7)) == Marker::DoubleStar;
    outcome(
        mismatches.is_empty() && c202,
        format!("{} spot rows, mismatches {mismatches:?}", spot.len()),
    )
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("1 parser totality", parser_totality),
        ("2 desk-scale reproduction on C101/C105/RC101 .25", desk_reproduction),
        ("3 R101.50 property run", r101_fifty),
        ("4 brute-force oracle equivalence", oracle_equivalence),
        ("5 L = 1 degeneracy", l1_degeneracy),
        ("6 roulette statistics", roulette_statistics),
        ("7 invariant suite", invariant_suite),
        ("8 marker logic", marker_logic),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let result = check();
        let tag = if result.pass { "PASS" } else { "FAIL" };
        failed += usize::from(!result.pass);
        println!("{tag} criterion {name} ({:.1}s): {}", start.elapsed().as_secs_f64(), result.detail);
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
