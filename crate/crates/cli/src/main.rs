use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use slg_core::certify::{candidate_set, certificate_gap, round_to_sets};
use slg_core::harness::{
    generate_cut_problem, parse_dimacs_cut, parse_point, parse_problem, parse_subset,
    projected_subgradient, serialize_problem, write_trace,
};
use slg_core::model::{brute_force_minimize, check_submodular, DecomposableFunction, SUBMODULARITY_MAX_N};
use slg_core::reformulate::graph_cut;
use slg_core::smoothing::{coefficient_sum, effective_d};
use slg_core::solver::{slg_minimize, SolverOptions, TraceRow};

#[derive(Parser)]
#[command(name = "slg", version, about = "Decomposable submodular minimization")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Minimize with the smoothed accelerated solver
    Solve {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        /// Interpret --eps relative to the smoothing constant D
        #[arg(long)]
        eps_relative: bool,
        #[arg(long, default_value_t = 100_000)]
        max_iters: usize,
        #[arg(long, default_value_t = 10)]
        certify_every: usize,
        /// Write a CSV trace
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Override the smoothing parameter
        #[arg(long)]
        mu: Option<f64>,
        /// Worker threads for gradient evaluation
        #[arg(long, default_value_t = 1)]
        threads: usize,
    },
    /// Exhaustive minimization (n <= 24)
    Oracle {
        #[arg(long)]
        input: PathBuf,
    },
    /// Best sorted-prefix sets of a point
    Round {
        #[arg(long)]
        input: PathBuf,
        /// Comma-separated coordinates
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Optimality certificate for a set at a point
    Certify {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        #[arg(long)]
        mu: f64,
        /// Set to certify, e.g. {0,2}; defaults to the nonpositive gradient entries
        #[arg(long)]
        set: Option<String>,
    },
    /// Submodularity check (n <= 14) and instance summary
    Check {
        #[arg(long)]
        input: PathBuf,
    },
    /// Generate a random cut instance as a problem file
    GenCut {
        #[arg(long)]
        nodes: usize,
        #[arg(long)]
        density: f64,
        #[arg(long)]
        seed: u64,
        /// Unary terms uniform in [-R, R)
        #[arg(long, default_value_t = 1.0)]
        modular_range: f64,
        /// Edge weights uniform in [lo, hi)
        #[arg(long, default_value = "0.1,1")]
        weight_range: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Compare the solver against projected subgradient descent
    Bench {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 1e-3)]
        eps: f64,
        #[arg(long)]
        eps_relative: bool,
        #[arg(long, value_enum, default_value_t = Baseline::Subgradient)]
        baseline: Baseline,
        /// Trace prefix; writes <prefix>-slg.csv and <prefix>-subgradient.csv
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, default_value_t = 100_000)]
        max_iters: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Baseline {
    Subgradient,
}

fn load(path: &Path) -> Result<DecomposableFunction> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let is_dimacs = text
        .lines()
        .map(str::trim_start)
        .any(|l| l.starts_with("p cut"));
    let f = if is_dimacs {
        let g = parse_dimacs_cut(&text)?;
        graph_cut(&g, &vec![0.0; g.node_count()])?
    } else {
        parse_problem(&text)?
    };
    Ok(f)
}

fn write_trace_file(path: &Path, rows: &[TraceRow]) -> Result<()> {
    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
    write_trace(file, rows)?;
    Ok(())
}

fn absolute_eps(f: &DecomposableFunction, eps: f64, relative: bool) -> Result<f64> {
    if !(eps > 0.0) {
        bail!("--eps must be positive");
    }
    Ok(if relative { eps * effective_d(f).max(f64::MIN_POSITIVE) } else { eps })
}

fn print_value(label: &str, f: &DecomposableFunction, value: f64) {
    println!("{label} {value}");
    if f.offset() != 0.0 {
        println!("{label}_with_offset {}", value + f.offset());
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve {
            input,
            eps,
            eps_relative,
            max_iters,
            certify_every,
            trace,
            mu,
            threads,
        } => {
            let f = load(&input)?;
            let opts = SolverOptions {
                epsilon: absolute_eps(&f, eps, eps_relative)?,
                max_iters,
                certify_every,
                mu_override: mu,
                record_trace: trace.is_some(),
                parallel: threads > 1,
                certificate_tol: None,
            };
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads.max(1))
                .build()?;
            let r = pool.install(|| slg_minimize(&f, &opts))?;
            println!("set {}", r.best_set);
            print_value("value", &f, r.best_value);
            println!("termination {}", r.termination);
            println!("iterations {}", r.iterations);
            println!("smoothed_gap {}", r.smoothed_gap_final);
            if let Some(c) = &r.certificate {
                println!("certificate_gap {}", c.gap);
            }
            if let Some(path) = trace {
                write_trace_file(&path, &r.trace)?;
            }
        }
        Command::Oracle { input } => {
            let f = load(&input)?;
            let r = brute_force_minimize(&f)?;
            print_value("value", &f, r.value);
            for a in &r.argmins {
                println!("set {a}");
            }
        }
        Command::Round { input, point } => {
            let f = load(&input)?;
            let x = parse_point(&point)?;
            let r = round_to_sets(&x, &f)?;
            print_value("value", &f, r.value);
            for a in &r.sets {
                println!("set {a}");
            }
        }
        Command::Certify {
            input,
            point,
            mu,
            set,
        } => {
            let f = load(&input)?;
            let x = parse_point(&point)?;
            let a = match set {
                Some(s) => parse_subset(f.n(), &s)?,
                None => candidate_set(&f, mu, &x)?,
            };
            let c = certificate_gap(&f, mu, &x, &a)?;
            println!("set {}", c.set);
            println!("gap {}", c.gap);
            println!("gamma {}", c.gamma);
            println!("sign_stable {}", c.sign_stable);
        }
        Command::Check { input } => {
            let f = load(&input)?;
            println!("n {}", f.n());
            println!("thresholds {}", f.thresholds().len());
            println!("concaves {}", f.concaves().len());
            println!("coefficient_sum {}", coefficient_sum(&f));
            println!("effective_d {}", effective_d(&f));
            println!("offset {}", f.offset());
            if f.n() > SUBMODULARITY_MAX_N {
                println!("submodular skipped (n > {SUBMODULARITY_MAX_N})");
                return Ok(());
            }
            let r = check_submodular(&f)?;
            println!("submodular {}", r.ok);
            if let Some((a, b)) = r.witness {
                println!("witness {a} {b}");
                bail!("function is not submodular (violation {})", r.max_violation);
            }
        }
        Command::GenCut {
            nodes,
            density,
            seed,
            modular_range,
            weight_range,
            out,
        } => {
            let range = parse_point(&weight_range)?;
            let [lo, hi] = range[..] else {
                bail!("--weight-range expects `lo,hi`");
            };
            let (g, f) = generate_cut_problem(nodes, density, (lo, hi), modular_range, seed)?;
            let header = format!(
                "# cut instance: nodes={nodes} density={density} seed={seed} \
                 weight-range={lo},{hi} modular-range={modular_range} edges={}\n",
                g.edge_count()
            );
            fs::write(&out, header + &serialize_problem(&f))
                .with_context(|| format!("writing {}", out.display()))?;
            println!("edges {}", g.edge_count());
        }
        Command::Bench {
            input,
            eps,
            eps_relative,
            baseline: Baseline::Subgradient,
            trace,
            max_iters,
        } => {
            let f = load(&input)?;
            let epsilon = absolute_eps(&f, eps, eps_relative)?;
            let opts = SolverOptions {
                epsilon,
                max_iters,
                certify_every: usize::MAX,
                ..SolverOptions::default()
            };
            let r = slg_minimize(&f, &opts)?;
            let b = projected_subgradient(&f, epsilon, max_iters)?;
            let prefix = trace.to_string_lossy();
            write_trace_file(Path::new(&format!("{prefix}-slg.csv")), &r.trace)?;
            write_trace_file(Path::new(&format!("{prefix}-subgradient.csv")), &b.trace)?;
            println!("epsilon {epsilon}");
            println!(
                "slg iterations {} gradient_evals {} value {} gap {} termination {}",
                r.iterations, r.gradient_evals, r.best_value, r.smoothed_gap_final, r.termination
            );
            println!(
                "subgradient iterations {} gradient_evals {} value {} gap {} converged {}",
                b.iterations, b.iterations, b.best_value, b.best_gap, b.converged
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
