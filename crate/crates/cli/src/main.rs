use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use ddp_core::exact::export_ilp;
use ddp_core::greedy::run_greedy;
use ddp_core::harness::{
    generate, loglog_slope, run_suite, scaling_csv, scaling_run, GeneratorConfig, SuiteError,
    SuiteOptions,
};
use ddp_core::io::{instance_to_json, parse_instance, parse_solution, solution_to_json};
use ddp_core::{
    bp_to_ddp, build_graph, color_intervals, solve_exact, solve_with_coloring, verify_solution,
    Algorithm, BinPackingInstance, Instance, DEFAULT_CAP,
};

#[derive(Parser)]
#[command(name = "ddp", version, about = "Drone-delivery packing solvers")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a random instance
    Gen(GenArgs),
    /// Solve an instance
    Solve {
        instance: PathBuf,
        #[arg(long, default_value = "greedy")]
        algorithm: Algorithm,
        /// Size limit for the exact solver
        #[arg(long, default_value_t = DEFAULT_CAP)]
        cap: usize,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print the final drone tree (greedy only) to stderr
        #[arg(short, long)]
        verbose: bool,
    },
    /// Check a solution against its instance
    Verify { instance: PathBuf, solution: PathBuf },
    /// Interval graph statistics
    Graph {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the integer program in LP format
    ExportLp { instance: PathBuf, out: PathBuf },
    /// Turn a bin-packing instance into a delivery instance
    ReduceBp { bp: PathBuf, ddp: PathBuf },
    /// Certify bounds on a batch of random instances
    Bench(BenchArgs),
}

#[derive(Args)]
struct GenArgs {
    #[arg(long)]
    n: usize,
    /// Average number of windows covering an instant
    #[arg(long, default_value_t = 1.0)]
    overlap: f64,
    #[arg(long, default_value_t = 100)]
    budget: u64,
    #[arg(long, default_value_t = 1)]
    cost_min: u64,
    /// Defaults to the budget
    #[arg(long)]
    cost_max: Option<u64>,
    /// Defaults to 10 * n
    #[arg(long)]
    horizon: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

impl GenArgs {
    fn config(&self, n: usize, seed: u64) -> GeneratorConfig {
        let base = GeneratorConfig::new(n, self.overlap, seed);
        GeneratorConfig {
            budget: self.budget,
            cost_min: self.cost_min,
            cost_max: self.cost_max.unwrap_or(self.budget),
            horizon: self.horizon.unwrap_or(base.horizon),
            ..base
        }
    }
}

#[derive(Args)]
struct BenchArgs {
    /// Number of instances
    #[arg(long, default_value_t = 100)]
    count: usize,
    /// Instance size
    #[arg(long, default_value_t = 10)]
    n: usize,
    #[arg(long, default_value_t = 1.0)]
    overlap: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Restrict to one algorithm; all three by default
    #[arg(long)]
    algorithm: Option<Algorithm>,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    cap: usize,
    /// JSON report destination
    #[arg(long)]
    out: Option<PathBuf>,
    /// CSV summary destination
    #[arg(long)]
    csv: Option<PathBuf>,
    /// Directory for the failing instance, if any
    #[arg(long)]
    replay_dir: Option<PathBuf>,
    /// Time the greedy on sparse instances of 10^3, 10^4 and 10^5 deliveries instead
    #[arg(long)]
    scaling: bool,
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instance(&text).with_context(|| format!("parsing {}", path.display()))
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(p) => fs::write(p, text).with_context(|| format!("writing {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn main() -> Result<()> {
    match Cli::parse().command {
        Command::Gen(args) => {
            let inst = generate(&args.config(args.n, args.seed))?;
            emit(args.out.as_deref(), &instance_to_json(&inst))
        }
        Command::Solve {
            instance,
            algorithm,
            cap,
            out,
            verbose,
        } => {
            let inst = read_instance(&instance)?;
            let sol = match algorithm {
                Algorithm::Greedy => {
                    let run = run_greedy(&inst, &build_graph(&inst), &mut ());
                    if verbose {
                        eprint!("{}", run.tree.dump());
                    }
                    run.solution
                }
                Algorithm::Coloring => solve_with_coloring(&inst),
                Algorithm::Exact => solve_exact(&inst, cap)?,
            };
            let v = verify_solution(&inst, &sol);
            if !v.passed() {
                bail!("solver produced an invalid solution: {v}");
            }
            emit(out.as_deref(), &solution_to_json(&sol))
        }
        Command::Verify { instance, solution } => {
            let inst = read_instance(&instance)?;
            let text = fs::read_to_string(&solution)
                .with_context(|| format!("reading {}", solution.display()))?;
            let sol = parse_solution(&text)?;
            let v = verify_solution(&inst, &sol);
            if v.passed() {
                println!("pass ({} drones)", sol.drones_used());
                Ok(())
            } else {
                for violation in &v.violations {
                    println!("{violation}");
                }
                bail!("{} violations", v.violations.len())
            }
        }
        Command::Graph { instance, out } => {
            let inst = read_instance(&instance)?;
            let g = build_graph(&inst);
            let coloring = color_intervals(&inst, &g);
            let sizes: Vec<usize> = coloring.classes().iter().map(Vec::len).collect();
            let report = serde_json::json!({
                "max_degree": g.max_degree(),
                "omega": g.clique_number(),
                "edges": g.edge_count(),
                "class_sizes": sizes,
            });
            emit(out.as_deref(), &format!("{}\n", serde_json::to_string_pretty(&report)?))
        }
        Command::ExportLp { instance, out } => {
            let inst = read_instance(&instance)?;
            emit(Some(&out), &export_ilp(&inst))
        }
        Command::ReduceBp { bp, ddp } => {
            let text = fs::read_to_string(&bp).with_context(|| format!("reading {}", bp.display()))?;
            let bp: BinPackingInstance =
                serde_json::from_str(&text).context("parsing bin-packing instance")?;
            emit(Some(&ddp), &instance_to_json(&bp_to_ddp(&bp)))
        }
        Command::Bench(args) => bench(args),
    }
}

fn bench(args: BenchArgs) -> Result<()> {
    if args.scaling {
        let rows = scaling_run(&[1_000, 10_000, 100_000], args.seed, 3);
        if let Some(p) = &args.csv {
            emit(Some(p), &scaling_csv(&rows))?;
        }
        for r in &rows {
            println!(
                "n={:>6} n_e={:>6} checks={:>7} drones={:>6} {:>9.3} ms",
                r.n,
                r.edges,
                r.check_calls,
                r.drones,
                r.elapsed_ns as f64 / 1e6
            );
        }
        println!("log-log slope: {:.3}", loglog_slope(&rows));
        return Ok(());
    }

    let gen = GenArgs {
        n: args.n,
        overlap: args.overlap,
        budget: 100,
        cost_min: 1,
        cost_max: None,
        horizon: None,
        seed: args.seed,
        out: None,
    };
    let cfgs: Vec<_> = (0..args.count as u64)
        .map(|i| gen.config(args.n, args.seed + i))
        .collect();
    let opts = SuiteOptions {
        algorithms: match args.algorithm {
            Some(a) => vec![a],
            None => SuiteOptions::default().algorithms,
        },
        cap: args.cap,
        replay_dir: args.replay_dir.clone(),
    };
    match run_suite(&cfgs, &opts) {
        Ok(report) => {
            if let Some(p) = &args.out {
                emit(Some(p), &report.to_json())?;
            }
            if let Some(p) = &args.csv {
                emit(Some(p), &report.to_csv())?;
            }
            print!("{}", report.summary());
            Ok(())
        }
        Err(SuiteError::Violation {
            instance,
            reasons,
            replay,
            replay_path,
        }) => {
            eprintln!("instance {instance} failed: {}", reasons.join("; "));
            match replay_path {
                Some(p) => eprintln!("replay written to {}", p.display()),
                None => eprint!("{replay}"),
            }
            bail!("bound certification failed")
        }
        Err(e) => Err(e.into()),
    }
}
