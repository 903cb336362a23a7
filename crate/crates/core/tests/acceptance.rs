//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each and
//! exits non-zero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use common::*;
use ddp_core::greedy::run_greedy;
use ddp_core::harness::{
    generate, loglog_slope, run_instances, scaling_run, GeneratorConfig, SuiteOptions,
};
use ddp_core::interval_graph::{build_graph, clique_number, color_intervals};
use ddp_core::{
    bp_to_ddp, half_budget_census, solve_bp_exact, solve_exact, solve_greedy, solve_with_coloring,
    verify_solution, BinPackingInstance, DEFAULT_CAP,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const CORPUS_SIZE: usize = 1000;
const CORPUS_MAX_N: usize = 12;
const CORPUS_TIME_LIMIT: Duration = Duration::from_secs(60);
const ORACLE_INSTANCES: usize = 200;
const SCALING_SIZES: [usize; 3] = [1_000, 10_000, 100_000];
const SCALING_TIME_LIMIT: Duration = Duration::from_secs(5);
/// Sub-quadratic growth: fitted log-log slope of elapsed time against n.
const SCALING_MAX_SLOPE: f64 = 1.5;

struct Outcome {
    id: &'static str,
    title: &'static str,
    passed: bool,
    detail: String,
}

fn outcome(id: &'static str, title: &'static str, violations: usize, detail: String) -> Outcome {
    Outcome {
        id,
        title,
        passed: violations == 0,
        detail: format!("{violations} violations; {detail}"),
    }
}

struct CorpusResults {
    instances: usize,
    elapsed: Duration,
    infeasible: usize,
    greedy_bound: usize,
    coloring_bound: usize,
    omega_above_opt: usize,
    census: usize,
    class_density: usize,
    classes_checked: usize,
    check_budget: usize,
    suite_ok: bool,
    max_n: usize,
}

fn run_corpus() -> CorpusResults {
    let instances = corpus(CORPUS_SIZE, CORPUS_MAX_N, 1_000);
    let start = Instant::now();
    let mut r = CorpusResults {
        instances: instances.len(),
        elapsed: Duration::ZERO,
        infeasible: 0,
        greedy_bound: 0,
        coloring_bound: 0,
        omega_above_opt: 0,
        census: 0,
        class_density: 0,
        classes_checked: 0,
        check_budget: 0,
        suite_ok: false,
        max_n: instances.iter().map(|i| i.len()).max().unwrap_or(0),
    };
    for inst in &instances {
        let g = build_graph(inst);
        let (delta, omega, n_e, b) = (g.max_degree(), g.clique_number(), g.edge_count(), inst.budget());
        let greedy = solve_greedy(inst);
        let coloring = solve_with_coloring(inst);
        let opt = solve_exact(inst, DEFAULT_CAP).unwrap();

        for sol in [&greedy, &coloring, &opt] {
            if !verify_solution(inst, sol).passed() {
                r.infeasible += 1;
            }
        }
        let (m_g, m_c, opt) = (greedy.drones_used(), coloring.drones_used(), opt.drones_used());
        if m_g > 2 * opt + delta + 1 {
            r.greedy_bound += 1;
        }
        // strict form: m_c < 2 OPT + ω
        if m_c >= 2 * opt + omega && !inst.is_empty() {
            r.coloring_bound += 1;
        }
        if omega > opt {
            r.omega_above_opt += 1;
        }
        if half_budget_census(&greedy, inst) + delta + 1 < m_g {
            r.census += 1;
        }
        for c in coloring.report.classes.iter().filter(|c| c.drones >= 2) {
            r.classes_checked += 1;
            if 2 * c.weight <= (c.drones as u64 - 1) * b {
                r.class_density += 1;
            }
        }
        if greedy.report.check_calls > (inst.len() + 2 * n_e) as u64 {
            r.check_budget += 1;
        }
    }
    // the batch runner performs the same checks independently
    r.suite_ok = run_instances(&instances, &SuiteOptions::default()).is_ok();
    r.elapsed = start.elapsed();
    r
}

fn criterion_6(corpus: &CorpusResults) -> Outcome {
    let rows = scaling_run(&SCALING_SIZES, 6, 3);
    let mut violations = corpus.check_budget;
    let mut detail = String::new();
    for row in &rows {
        if row.check_calls > (row.n + 2 * row.edges) as u64 {
            violations += 1;
        }
        detail.push_str(&format!(
            "n={} n_e={} checks={} {:.1}ms; ",
            row.n,
            row.edges,
            row.check_calls,
            row.elapsed_ns as f64 / 1e6
        ));
    }
    let largest = rows.last().unwrap();
    if Duration::from_nanos(largest.elapsed_ns) >= SCALING_TIME_LIMIT {
        violations += 1;
    }
    let slope = loglog_slope(&rows);
    if slope.is_nan() || slope >= SCALING_MAX_SLOPE {
        violations += 1;
    }
    outcome(
        "AC6",
        "check accounting and scaling",
        violations,
        format!("{detail}log-log slope {slope:.2} (< {SCALING_MAX_SLOPE})"),
    )
}

fn criterion_7() -> Outcome {
    let instances = corpus(ORACLE_INSTANCES, 8, 7_000);
    let violations = instances
        .iter()
        .filter(|inst| solve_exact(inst, DEFAULT_CAP).unwrap().drones_used() != brute_opt(inst))
        .count();
    outcome(
        "AC7",
        "exact solver equals partition enumeration",
        violations,
        format!("{} instances, n <= 8", instances.len()),
    )
}

fn criterion_8() -> Outcome {
    let instances = corpus(ORACLE_INSTANCES, 10, 8_000);
    let mut violations = 0;
    for inst in &instances {
        let g = build_graph(inst);
        let omega = clique_number(inst);
        let c = color_intervals(inst, &g);
        let proper = g.edges().all(|(a, b)| c.color_of(a) != c.color_of(b));
        if omega != brute_max_clique(inst) || g.clique_number() != omega || !proper || c.color_count() != omega {
            violations += 1;
        }
    }
    outcome(
        "AC8",
        "clique number and optimal colouring",
        violations,
        format!("{} instances, n <= 10", instances.len()),
    )
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut violations = 0;
    for _ in 0..ORACLE_INSTANCES {
        let capacity = rng.gen_range(1..=30u64);
        let count = rng.gen_range(0..=10usize);
        let sizes: Vec<u64> = (0..count).map(|_| rng.gen_range(1..=capacity)).collect();
        let bp = BinPackingInstance::new(capacity, sizes).unwrap();
        let ddp = bp_to_ddp(&bp);
        let g = build_graph(&ddp);
        let bins = solve_bp_exact(&bp, DEFAULT_CAP).unwrap();
        let drones = solve_exact(&ddp, DEFAULT_CAP).unwrap().drones_used();
        if bins != drones || g.edge_count() != 0 || g.clique_number() > 1 {
            violations += 1;
        }
    }
    outcome(
        "AC9",
        "bin-packing reduction preserves the optimum",
        violations,
        format!("{ORACLE_INSTANCES} instances, <= 10 items"),
    )
}

fn criterion_10() -> Outcome {
    const OVERLAP: [f64; 4] = [0.3, 1.0, 3.0, 8.0];
    let mut violations = 0;
    let (mut probes, mut mutations) = (0, 0);
    let mut first = None;
    for i in 0..ORACLE_INSTANCES {
        let n = 1 + (i * 37) % 200;
        let cfg = GeneratorConfig::new(n, OVERLAP[i % OVERLAP.len()], 10_000 + i as u64)
            .with_costs(1 + (i % 3) as u64 * 20, 100);
        let inst = generate(&cfg).unwrap();
        let g = build_graph(&inst);
        let mut auditor = TreeAuditor::new(inst.budget());
        run_greedy(&inst, &g, &mut auditor);
        probes += auditor.probes;
        mutations += auditor.mutations;
        if !auditor.divergences.is_empty() {
            violations += auditor.divergences.len();
            first.get_or_insert_with(|| auditor.divergences[0].clone());
        }
    }
    let mut detail = format!("{ORACLE_INSTANCES} instances, n <= 200, {probes} probes, {mutations} mutations audited");
    if let Some(f) = first {
        detail.push_str(&format!("; first: {f}"));
    }
    outcome("AC10", "tree audit and linear-scan agreement", violations, detail)
}

fn criterion_11() -> Outcome {
    let a = fixture_a();
    let b = fixture_b();
    let got = [
        solve_greedy(&a).drones_used(),
        solve_exact(&a, DEFAULT_CAP).unwrap().drones_used(),
        solve_greedy(&b).drones_used(),
        solve_exact(&b, DEFAULT_CAP).unwrap().drones_used(),
        solve_with_coloring(&b).drones_used(),
    ];
    let expected = [4, 4, 2, 2, 2];
    let violations = got.iter().zip(&expected).filter(|(g, e)| g != e).count();
    outcome(
        "AC11",
        "fixture traces",
        violations,
        format!("A: greedy={} OPT={}; B: greedy={} OPT={} coloring={}", got[0], got[1], got[2], got[3], got[4]),
    )
}

fn main() -> ExitCode {
    let c = run_corpus();
    let corpus_note = format!("{} instances, n <= {}", c.instances, c.max_n);
    let mut results = vec![
        outcome(
            "AC1",
            "feasibility of every solution",
            c.infeasible + usize::from(c.elapsed >= CORPUS_TIME_LIMIT) + usize::from(!c.suite_ok),
            format!("{corpus_note}, {:.2}s total (< {}s)", c.elapsed.as_secs_f64(), CORPUS_TIME_LIMIT.as_secs()),
        ),
        outcome("AC2", "greedy m <= 2 OPT + delta + 1", c.greedy_bound, corpus_note.clone()),
        outcome(
            "AC3",
            "colouring m <= 2 OPT + omega - 1 and omega <= OPT",
            c.coloring_bound + c.omega_above_opt,
            corpus_note.clone(),
        ),
        outcome("AC4", "half-budget census >= m - delta - 1", c.census, corpus_note.clone()),
        outcome(
            "AC5",
            "2 W(J_k) > (m_k - 1) B per class",
            c.class_density,
            format!("{} classes with m_k >= 2", c.classes_checked),
        ),
    ];
    results.push(criterion_6(&c));
    results.push(criterion_7());
    results.push(criterion_8());
    results.push(criterion_9());
    results.push(criterion_10());
    results.push(criterion_11());

    for r in &results {
        println!(
            "[{}] {:<5} {}: {}",
            if r.passed { "PASS" } else { "FAIL" },
            r.id,
            r.title,
            r.detail
        );
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
