//! Seeded instance generation, bound certification and batch runs.
//!
//! Every solution produced here is re-checked by [`verify_solution`] and every
//! applicable bound is tested in integer arithmetic:
//!
//! * greedy: `m <= 2*OPT + Δ + 1`, half-budget census `>= m - Δ - 1`, and at
//!   most `n + 2*n_e` node checks;
//! * colouring: `m <= 2*OPT + ω - 1`, and `2*W(J_k) > (m_k - 1)*B` per class;
//! * always: `ω <= OPT <= min(m_greedy, m_coloring) <= n`.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::coloring::solve_with_coloring_graph;
use crate::exact::{solve_exact, DEFAULT_CAP};
use crate::greedy::{half_budget_census, solve_greedy, solve_greedy_with_graph};
use crate::interval_graph::build_graph;
use crate::io::instance_to_json;
use crate::model::{Algorithm, ClassReport, Energy, Instance, Solution, Time};
use crate::verify::verify_solution;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConfigError {
    #[error("budget must be positive")]
    ZeroBudget,
    #[error("cost range [{min}, {max}] must satisfy 1 <= min <= max <= budget ({budget})")]
    BadCostRange { min: Energy, max: Energy, budget: Energy },
    #[error("time horizon must be positive")]
    ZeroHorizon,
    #[error("overlap intensity must be finite and non-negative, got {0}")]
    BadOverlap(f64),
}

/// Random instance family.
///
/// Launch times are uniform in `[0, horizon)`. Window lengths are uniform in
/// `[0, 2 * overlap * horizon / n]`, so on average about `overlap` windows
/// cover any instant; raising it raises `Δ` and `ω`. Costs are uniform in
/// `[cost_min, cost_max]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GeneratorConfig {
    pub n: usize,
    pub budget: Energy,
    pub cost_min: Energy,
    pub cost_max: Energy,
    pub horizon: Time,
    pub overlap: f64,
    pub seed: u64,
}

impl GeneratorConfig {
    /// Mixed-cost instances over a horizon of `10 * n`.
    pub fn new(n: usize, overlap: f64, seed: u64) -> Self {
        GeneratorConfig {
            n,
            budget: 100,
            cost_min: 1,
            cost_max: 100,
            horizon: (10 * n as Time).max(1),
            overlap,
            seed,
        }
    }

    pub fn with_costs(mut self, min: Energy, max: Energy) -> Self {
        self.cost_min = min;
        self.cost_max = max;
        self
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if self.budget == 0 {
            return Err(ConfigError::ZeroBudget);
        }
        if self.cost_min == 0 || self.cost_min > self.cost_max || self.cost_max > self.budget {
            return Err(ConfigError::BadCostRange {
                min: self.cost_min,
                max: self.cost_max,
                budget: self.budget,
            });
        }
        if self.horizon == 0 {
            return Err(ConfigError::ZeroHorizon);
        }
        if !self.overlap.is_finite() || self.overlap < 0.0 {
            return Err(ConfigError::BadOverlap(self.overlap));
        }
        Ok(())
    }

    fn max_length(&self) -> Time {
        if self.n == 0 {
            return 0;
        }
        (2.0 * self.overlap * self.horizon as f64 / self.n as f64).round() as Time
    }
}

pub fn generate(cfg: &GeneratorConfig) -> Result<Instance, ConfigError> {
    cfg.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let max_len = cfg.max_length();
    let windows: Vec<_> = (0..cfg.n)
        .map(|_| {
            let launch = rng.gen_range(0..cfg.horizon);
            let len = rng.gen_range(0..=max_len);
            let cost = rng.gen_range(cfg.cost_min..=cfg.cost_max);
            (launch, launch + len, cost)
        })
        .collect();
    Ok(Instance::new(cfg.budget, windows).expect("generator respects instance invariants"))
}

/// Bound record for one instance. Solver fields are `None` when that solver
/// was not requested.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundCertificate {
    pub instance: usize,
    pub n: usize,
    pub edges: usize,
    pub max_degree: usize,
    pub omega: usize,
    pub budget: Energy,
    pub m_greedy: Option<usize>,
    pub m_coloring: Option<usize>,
    pub opt: Option<usize>,
    pub half_budget_census: Option<usize>,
    pub check_calls: Option<u64>,
    pub classes: Vec<ClassReport>,
    pub greedy_ns: Option<u64>,
    pub coloring_ns: Option<u64>,
    pub exact_ns: Option<u64>,
}

impl BoundCertificate {
    /// Every bound that applies, as `(name, holds)`.
    pub fn checks(&self) -> Vec<(&'static str, bool)> {
        let (n, d, w, b) = (
            self.n as i64,
            self.max_degree as i64,
            self.omega as i64,
            self.budget as u128,
        );
        let mut out = Vec::new();
        if let Some(m) = self.m_greedy {
            let m = m as i64;
            out.push(("greedy uses at least omega drones", m >= w));
            if let Some(census) = self.half_budget_census {
                out.push(("half-budget census >= m - delta - 1", census as i64 >= m - d - 1));
            }
            if let Some(calls) = self.check_calls {
                out.push((
                    "check calls <= n + 2 n_e",
                    calls <= self.n as u64 + 2 * self.edges as u64,
                ));
            }
            if let Some(opt) = self.opt {
                out.push(("m_greedy <= 2 OPT + delta + 1", m <= 2 * opt as i64 + d + 1));
            }
        }
        if let Some(m) = self.m_coloring {
            let m = m as i64;
            out.push(("coloring uses at least omega drones", m >= w));
            out.push(("one class per colour", self.classes.len() == self.omega));
            out.push((
                "2 W(J_k) > (m_k - 1) B for every class",
                self.classes
                    .iter()
                    .all(|c| 2 * c.weight as u128 > c.drones.saturating_sub(1) as u128 * b),
            ));
            if let Some(opt) = self.opt {
                out.push(("m_coloring <= 2 OPT + omega - 1", m < 2 * opt as i64 + w));
            }
        }
        if let Some(opt) = self.opt {
            let opt = opt as i64;
            out.push(("omega <= OPT <= n", w <= opt && opt <= n));
            for m in [self.m_greedy, self.m_coloring].into_iter().flatten() {
                out.push(("OPT <= heuristic", opt <= m as i64));
            }
        }
        out
    }

    pub fn failures(&self) -> Vec<&'static str> {
        self.checks()
            .into_iter()
            .filter(|(_, ok)| !ok)
            .map(|(name, _)| name)
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SuiteOptions {
    pub algorithms: Vec<Algorithm>,
    /// Exact search is skipped for instances larger than this.
    pub cap: usize,
    /// Where to write the offending instance when a check fails.
    pub replay_dir: Option<PathBuf>,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        SuiteOptions {
            algorithms: vec![Algorithm::Greedy, Algorithm::Coloring, Algorithm::Exact],
            cap: DEFAULT_CAP,
            replay_dir: None,
        }
    }
}

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("instance {instance}: {}", reasons.join("; "))]
    Violation {
        instance: usize,
        reasons: Vec<String>,
        /// Canonical JSON of the failing instance.
        replay: String,
        replay_path: Option<PathBuf>,
    },
    #[error("writing replay file: {0}")]
    Io(#[from] std::io::Error),
}

fn verified(inst: &Instance, sol: Solution, reasons: &mut Vec<String>) -> Solution {
    let v = verify_solution(inst, &sol);
    if !v.passed() {
        reasons.push(format!("{} solution rejected: {v}", sol.algorithm()));
    }
    sol
}

/// Runs the requested solvers on one instance and checks every bound.
/// On failure returns the list of reasons.
pub fn certify(id: usize, inst: &Instance, opts: &SuiteOptions) -> Result<BoundCertificate, Vec<String>> {
    let g = build_graph(inst);
    let wants = |a| opts.algorithms.contains(&a);
    let mut reasons = Vec::new();
    let mut cert = BoundCertificate {
        instance: id,
        n: inst.len(),
        edges: g.edge_count(),
        max_degree: g.max_degree(),
        omega: g.clique_number(),
        budget: inst.budget(),
        m_greedy: None,
        m_coloring: None,
        opt: None,
        half_budget_census: None,
        check_calls: None,
        classes: Vec::new(),
        greedy_ns: None,
        coloring_ns: None,
        exact_ns: None,
    };
    if wants(Algorithm::Greedy) {
        let sol = verified(inst, solve_greedy_with_graph(inst, &g), &mut reasons);
        cert.m_greedy = Some(sol.drones_used());
        cert.half_budget_census = Some(half_budget_census(&sol, inst));
        cert.check_calls = Some(sol.report.check_calls);
        cert.greedy_ns = Some(sol.report.elapsed_ns);
    }
    if wants(Algorithm::Coloring) {
        let sol = verified(inst, solve_with_coloring_graph(inst, &g), &mut reasons);
        cert.m_coloring = Some(sol.drones_used());
        cert.coloring_ns = Some(sol.report.elapsed_ns);
        cert.classes = sol.report.classes;
    }
    if wants(Algorithm::Exact) && inst.len() <= opts.cap {
        let sol = solve_exact(inst, opts.cap).expect("size checked against cap");
        let sol = verified(inst, sol, &mut reasons);
        cert.opt = Some(sol.drones_used());
        cert.exact_ns = Some(sol.report.elapsed_ns);
    }
    reasons.extend(cert.failures().into_iter().map(String::from));
    if reasons.is_empty() {
        Ok(cert)
    } else {
        Err(reasons)
    }
}

/// Certificates for a batch, in input order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub certificates: Vec<BoundCertificate>,
}

#[derive(Serialize)]
struct CsvRow {
    instance: usize,
    n: usize,
    edges: usize,
    max_degree: usize,
    omega: usize,
    m_greedy: Option<usize>,
    m_coloring: Option<usize>,
    opt: Option<usize>,
    half_budget_census: Option<usize>,
    check_calls: Option<u64>,
    greedy_ns: Option<u64>,
    coloring_ns: Option<u64>,
    exact_ns: Option<u64>,
}

impl SuiteReport {
    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.certificates.is_empty() {
            // headers are written with the first record; keep them for empty runs
            w.write_record([
                "instance", "n", "edges", "max_degree", "omega", "m_greedy", "m_coloring", "opt",
                "half_budget_census", "check_calls", "greedy_ns", "coloring_ns", "exact_ns",
            ])
            .expect("in-memory write");
        }
        for c in &self.certificates {
            w.serialize(CsvRow {
                instance: c.instance,
                n: c.n,
                edges: c.edges,
                max_degree: c.max_degree,
                omega: c.omega,
                m_greedy: c.m_greedy,
                m_coloring: c.m_coloring,
                opt: c.opt,
                half_budget_census: c.half_budget_census,
                check_calls: c.check_calls,
                greedy_ns: c.greedy_ns,
                coloring_ns: c.coloring_ns,
                exact_ns: c.exact_ns,
            })
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Short human-readable digest.
    pub fn summary(&self) -> String {
        let certs = &self.certificates;
        let mut out = String::new();
        let _ = writeln!(out, "instances: {}", certs.len());
        let with_opt: Vec<_> = certs.iter().filter(|c| c.opt.is_some()).collect();
        let _ = writeln!(out, "with exact optimum: {}", with_opt.len());
        for (name, pick) in [
            ("greedy", (|c: &BoundCertificate| c.m_greedy) as fn(&BoundCertificate) -> Option<usize>),
            ("coloring", |c: &BoundCertificate| c.m_coloring),
        ] {
            let ratios: Vec<f64> = with_opt
                .iter()
                .filter_map(|c| Some((pick(c)?, c.opt?)))
                .filter(|&(_, opt)| opt > 0)
                .map(|(m, opt)| m as f64 / opt as f64)
                .collect();
            if ratios.is_empty() {
                continue;
            }
            let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
            let worst = ratios.iter().cloned().fold(1.0, f64::max);
            let optimal = ratios.iter().filter(|&&r| r == 1.0).count();
            let _ = writeln!(
                out,
                "{name}: mean m/OPT {mean:.3}, worst {worst:.3}, optimal on {optimal}/{}",
                ratios.len()
            );
        }
        let checks: usize = certs.iter().map(|c| c.checks().len()).sum();
        let _ = writeln!(out, "bound checks passed: {checks}");
        out
    }
}

fn write_replay(dir: &Path, id: usize, json: &str) -> std::io::Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    let path = dir.join(format!("failing-instance-{id}.json"));
    std::fs::write(&path, json)?;
    Ok(path)
}

/// Certifies a batch of instances, in parallel. Stops at the failing instance
/// with the smallest id.
pub fn run_instances(instances: &[Instance], opts: &SuiteOptions) -> Result<SuiteReport, SuiteError> {
    let results: Vec<_> = instances
        .par_iter()
        .enumerate()
        .map(|(id, inst)| certify(id, inst, opts))
        .collect();
    let mut certificates = Vec::with_capacity(results.len());
    for (id, r) in results.into_iter().enumerate() {
        match r {
            Ok(c) => certificates.push(c),
            Err(reasons) => {
                let replay = instance_to_json(&instances[id]);
                let replay_path = match &opts.replay_dir {
                    Some(dir) => Some(write_replay(dir, id, &replay)?),
                    None => None,
                };
                return Err(SuiteError::Violation {
                    instance: id,
                    reasons,
                    replay,
                    replay_path,
                });
            }
        }
    }
    Ok(SuiteReport { certificates })
}

/// Generates one instance per config and certifies them.
pub fn run_suite(cfgs: &[GeneratorConfig], opts: &SuiteOptions) -> Result<SuiteReport, SuiteError> {
    let instances = cfgs.iter().map(generate).collect::<Result<Vec<_>, _>>()?;
    run_instances(&instances, opts)
}

/// Greedy timing on one sparse instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScalingRow {
    pub n: usize,
    pub edges: usize,
    pub check_calls: u64,
    /// Best of the repetitions; covers graph construction and the greedy.
    pub elapsed_ns: u64,
    pub drones: usize,
}

/// Sparse family used for scaling runs: about half a window per instant.
pub fn sparse_config(n: usize, seed: u64) -> GeneratorConfig {
    GeneratorConfig::new(n, 0.5, seed)
}

/// Times the greedy on sparse instances of each size, keeping the fastest of
/// `repeats` runs.
pub fn scaling_run(sizes: &[usize], seed: u64, repeats: usize) -> Vec<ScalingRow> {
    sizes
        .iter()
        .map(|&n| {
            let inst = generate(&sparse_config(n, seed)).expect("sparse config is valid");
            let mut best = u64::MAX;
            let mut last = None;
            for _ in 0..repeats.max(1) {
                let start = Instant::now();
                let sol = solve_greedy(&inst);
                best = best.min(start.elapsed().as_nanos() as u64);
                last = Some(sol);
            }
            let sol = last.expect("at least one repetition");
            ScalingRow {
                n,
                edges: build_graph(&inst).edge_count(),
                check_calls: sol.report.check_calls,
                elapsed_ns: best,
                drones: sol.drones_used(),
            }
        })
        .collect()
}

/// Least-squares slope of `log(elapsed)` against `log(n)`.
pub fn loglog_slope(rows: &[ScalingRow]) -> f64 {
    let pts: Vec<(f64, f64)> = rows
        .iter()
        .map(|r| ((r.n as f64).ln(), (r.elapsed_ns.max(1) as f64).ln()))
        .collect();
    let k = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / k;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / k;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    sxy / sxx
}

pub fn scaling_csv(rows: &[ScalingRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("csv is utf-8")
}
