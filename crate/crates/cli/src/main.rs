//! `tww`: PACE 2023 style twin-width solver.
//!
//! Only the solution payload goes to stdout; everything else to stderr.

mod bench;

use std::fs;
use std::io::{self, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::atomic::AtomicBool;
use std::sync::Arc;
use std::time::Duration;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

use tww::exact::ExactError;
use tww::heuristic::PerturbParams;
use tww::pace_io::{read_instance, write_sequence};
use tww::reference::Oracle;
use tww::{parse_instance, parse_sequence, solve_exact, solve_heuristic, verify_sequence};
use tww::{Budget, ExactConfig, Instance, SolveResult};

const EXACT_LIMIT: f64 = 1800.0;
const HEURISTIC_LIMIT: f64 = 300.0;
// Fraction of the external limit we actually use.
const SAFETY: f64 = 0.95;
const DEFAULT_MEMORY_CAP: usize = 6 << 30;

#[derive(Parser)]
#[command(name = "tww", version, about = "Twin-width contraction sequences for PACE .gr instances")]
struct Cli {
    #[command(subcommand)]
    mode: Mode,
}

#[derive(Subcommand)]
enum Mode {
    /// Optimal sequence; exits nonzero without output if time runs out.
    Exact(SolveArgs),
    /// Best sequence found within the time limit (or until SIGTERM/SIGINT).
    Heuristic(SolveArgs),
    /// Replay a sequence and print its width.
    Verify {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Brute-force width and witness for tiny graphs.
    Oracle {
        #[arg(long)]
        input: Option<PathBuf>,
        #[arg(long, default_value_t = tww::reference::DEFAULT_ORACLE_CAP)]
        oracle_cap: usize,
    },
    /// Solve every `.gr` file in a directory and write a CSV summary.
    Bench {
        #[arg(long)]
        dir: PathBuf,
        #[arg(long)]
        csv: PathBuf,
        #[arg(long, value_enum, default_value_t = Solver::Exact)]
        solver: Solver,
        #[command(flatten)]
        opts: SolveOpts,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub(crate) enum Solver {
    Exact,
    Heuristic,
}

#[derive(Args)]
struct SolveArgs {
    #[arg(long)]
    input: Option<PathBuf>,
    #[command(flatten)]
    opts: SolveOpts,
}

#[derive(Args, Clone, Debug)]
pub(crate) struct SolveOpts {
    /// Seconds; defaults to 1800 (exact) or 300 (heuristic).
    #[arg(long)]
    time_limit: Option<f64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Share of the remaining time spent on lower bounds, in [0, 0.5].
    #[arg(long, default_value_t = 0.1)]
    lb_budget: f64,
    #[arg(long)]
    memory_cap: Option<usize>,
    /// Hill-climbing batches; fixes the work done so runs are reproducible.
    #[arg(long)]
    iterations: Option<u64>,
    /// Report the width on stderr.
    #[arg(long)]
    emit_width: bool,
}

impl SolveOpts {
    fn validate(&self, solver: Solver) -> Result<()> {
        if !(0.0..=0.5).contains(&self.lb_budget) {
            bail!("--lb-budget must be in [0, 0.5], got {}", self.lb_budget);
        }
        if let Some(t) = self.time_limit {
            if !t.is_finite() || t < 0.0 || (solver == Solver::Exact && t == 0.0) {
                bail!("--time-limit must be positive, got {t}");
            }
        }
        Ok(())
    }

    fn time_limit(&self, solver: Solver) -> Duration {
        let secs = self.time_limit.unwrap_or(match solver {
            Solver::Exact => EXACT_LIMIT,
            Solver::Heuristic => HEURISTIC_LIMIT,
        });
        Duration::from_secs_f64(secs * SAFETY)
    }

    fn exact_config(&self) -> ExactConfig {
        let mut cfg = ExactConfig::default().with_seed(self.seed);
        cfg.lb_budget_fraction = self.lb_budget;
        cfg.use_lower_bound = self.lb_budget > 0.0;
        if let Some(n) = self.iterations {
            cfg.hill_climb.max_batches = Some(n);
        }
        let cap = self.memory_cap.unwrap_or(DEFAULT_MEMORY_CAP);
        cfg.dp.memory_cap = Some(cap);
        cfg.lower_bound.memory_cap = Some(cap / 8);
        cfg
    }

    fn perturb_params(&self) -> PerturbParams {
        PerturbParams {
            rng_seed: self.seed,
            max_batches: self.iterations,
            ..PerturbParams::default()
        }
    }

    /// Runs one solver and checks the sequence against the instance.
    pub(crate) fn solve(&self, solver: Solver, inst: &Instance, stop: &Arc<AtomicBool>) -> Result<SolveResult> {
        let budget = Budget::with_timeout(self.time_limit(solver)).with_stop_flag(stop.clone());
        let result = match solver {
            Solver::Exact => solve_exact(inst, &self.exact_config(), &budget).map_err(|e| match e {
                ExactError::Timeout { .. } | ExactError::MemoryExhausted { .. } => anyhow::Error::new(e),
                other => anyhow::Error::new(other).context("solver failure"),
            })?,
            Solver::Heuristic => solve_heuristic(inst, &self.perturb_params(), &budget, |_| {}),
        };
        let report = verify_sequence(inst, &result.seq).context("internal verification")?;
        if report.width != result.width {
            bail!(
                "internal verification: reported width {} but sequence has width {}",
                result.width,
                report.width
            );
        }
        Ok(result)
    }
}

fn read_input(path: Option<&Path>) -> Result<Instance> {
    match path {
        Some(p) => {
            let text = fs::read_to_string(p).with_context(|| format!("reading {}", p.display()))?;
            parse_instance(&text).with_context(|| format!("parsing {}", p.display()))
        }
        None => read_instance(io::stdin().lock()).context("parsing stdin"),
    }
}

fn stop_flag() -> Result<Arc<AtomicBool>> {
    let flag = Arc::new(AtomicBool::new(false));
    for sig in [signal_hook::consts::SIGTERM, signal_hook::consts::SIGINT] {
        signal_hook::flag::register(sig, flag.clone()).context("installing signal handler")?;
    }
    Ok(flag)
}

fn run_solve(solver: Solver, args: SolveArgs) -> Result<()> {
    args.opts.validate(solver)?;
    let stop = stop_flag()?;
    let inst = read_input(args.input.as_deref())?;
    let result = args.opts.solve(solver, &inst, &stop)?;
    write_sequence(&mut io::stdout().lock(), &result.seq).context("writing solution")?;
    if args.opts.emit_width {
        eprintln!(
            "width {} stage {} optimal {} elapsed_ms {}",
            result.width,
            result.stage,
            result.optimal,
            result.elapsed.as_millis()
        );
    }
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    match cli.mode {
        Mode::Exact(args) => run_solve(Solver::Exact, args),
        Mode::Heuristic(args) => run_solve(Solver::Heuristic, args),
        Mode::Verify { input, solution } => {
            let inst = read_input(input.as_deref())?;
            let mut text = String::new();
            fs::File::open(&solution)
                .and_then(|mut f| f.read_to_string(&mut text))
                .with_context(|| format!("reading {}", solution.display()))?;
            let seq = parse_sequence(&text, inst.n).with_context(|| format!("parsing {}", solution.display()))?;
            let report = verify_sequence(&inst, &seq)?;
            println!("{}", report.width);
            Ok(())
        }
        Mode::Oracle { input, oracle_cap } => {
            let inst = read_input(input.as_deref())?;
            let oracle = Oracle {
                cap: oracle_cap,
                ..Oracle::default()
            };
            let (width, seq) = oracle.twinwidth(&inst)?;
            let mut out = io::stdout().lock();
            writeln!(out, "{width}")?;
            write_sequence(&mut out, &seq)?;
            Ok(())
        }
        Mode::Bench { dir, csv, solver, opts } => {
            opts.validate(solver)?;
            let stop = stop_flag()?;
            bench::run(&dir, &csv, solver, &opts, &stop)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("tww: {e:#}");
            ExitCode::FAILURE
        }
    }
}
