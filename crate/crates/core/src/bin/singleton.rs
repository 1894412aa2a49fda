//! Command-line driver for the seeded experiments.
//!
//! Exit codes: 0 on success, 1 for configuration, input or I/O errors, 2 when more trials
//! failed inside a solver than the failure budget allows.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use singleton_core::error::{Error, Result};
use singleton_core::experiments::{self, emit_plot, ExperimentConfig, ExperimentKind, Profile};
use singleton_core::records::Record;

#[derive(Parser)]
#[command(name = "singleton", version, about = "Phase-transition experiments for singleton feasible sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Singleton and L1-recovery fractions of k-sparse nonnegative vectors.
    VectorPhase(RunArgs),
    /// Singleton fraction of rank-r PSD matrices under Gaussian operators.
    MatrixPhase(RunArgs),
    /// Monte Carlo frequency of 0 in the convex hull of Gaussian columns against Wendel's formula.
    WendelMc(RunArgs),
    /// Smallest positive and negative supports of random null-space vectors.
    NullspaceSupport(RunArgs),
    /// Write a gnuplot script next to a sweep CSV.
    Plot {
        /// CSV produced by vector-phase or matrix-phase.
        csv: PathBuf,
    },
}

#[derive(Args)]
struct RunArgs {
    /// `key=value` file; command-line flags take precedence over it.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    profile: Option<Profile>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    m: Option<usize>,
    #[arg(long)]
    density: Option<f64>,
    #[arg(long)]
    ones_row: Option<bool>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    probes: Option<usize>,
    /// `lo:hi[:step]`, inclusive.
    #[arg(long)]
    grid: Option<String>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV; standard output when absent.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also run the deterministic singleton check on small instances.
    #[arg(long)]
    exact: bool,
    /// Wendel `(m, n)` pairs written as `1x2,2x4`.
    #[arg(long)]
    pairs: Option<String>,
    /// Null-space samples per draw.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    failure_budget: Option<f64>,
}

impl RunArgs {
    fn overrides(&self) -> Record {
        let mut r = Record::new();
        macro_rules! put {
            ($($field:ident),*) => {$(
                if let Some(v) = &self.$field {
                    r.push(stringify!($field), v);
                }
            )*};
        }
        put!(n, m, density, ones_row, trials, probes, grid, seed, pairs, samples, failure_budget);
        if let Some(out) = &self.out {
            r.push("out", out.display());
        }
        if self.exact {
            r.push("exact", true);
        }
        r
    }

    fn resolve(&self, kind: ExperimentKind) -> Result<ExperimentConfig> {
        let file = match &self.config {
            Some(path) => Record::parse(&fs::read_to_string(path)?)?,
            None => Record::new(),
        };
        if let Some(k) = file.get("kind") {
            if k.parse::<ExperimentKind>()? != kind {
                return Err(Error::Config(format!("config file is for `{k}`, not `{kind}`")));
            }
        }
        let profile = match (self.profile, file.get("profile")) {
            (Some(p), _) => p,
            (None, Some(p)) => p.parse()?,
            (None, None) => Profile::Desk,
        };
        let mut cfg = ExperimentConfig::defaults(kind, profile);
        cfg.apply(&file)?;
        cfg.apply(&self.overrides())?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn execute(cli: Cli) -> Result<()> {
    let (kind, args) = match cli.command {
        Command::Plot { csv } => {
            let script = emit_plot(&csv)?;
            println!("{}", script.display());
            return Ok(());
        }
        Command::VectorPhase(a) => (ExperimentKind::VectorPhase, a),
        Command::MatrixPhase(a) => (ExperimentKind::MatrixPhase, a),
        Command::WendelMc(a) => (ExperimentKind::WendelMc, a),
        Command::NullspaceSupport(a) => (ExperimentKind::NullspaceSupport, a),
    };
    let cfg = args.resolve(kind)?;
    let table = experiments::run(&cfg)?;
    match &cfg.out {
        Some(path) => {
            table.write(path)?;
            eprintln!("wrote {}", path.display());
        }
        None => print!("{}", table.to_csv()),
    }
    Ok(())
}

fn main() -> ExitCode {
    // clap reports usage errors with status 2, which is reserved for the failure budget
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::FailureBudget { .. } => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
