//! Command-line entry point: `run`, `verify` and `enumerate`.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use frustrated_anneal::harness::{self, ExperimentSpec};

#[derive(Parser)]
#[command(version, about = "Annealing simulations of the anisotropic triangular Ising antiferromagnet")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run independent annealing chains and write CSV outputs.
    Run(SpecArgs),
    /// Run the oracle-backed self-checks; exits nonzero if any fails.
    Verify(SpecArgs),
    /// Exhaustively enumerate classical configurations (at most 24 sites).
    Enumerate {
        #[arg(long, default_value_t = 6)]
        lx: usize,
        #[arg(long, default_value_t = 4)]
        ly: usize,
        #[arg(long, default_value_t = 1.0)]
        j: f64,
        #[arg(long, default_value_t = 0.9)]
        jx: f64,
    },
}

#[derive(Args)]
struct SpecArgs {
    /// key = value configuration file.
    config: Option<PathBuf>,
    /// ta, qa, qa-h, sqa or sqa-<n>.
    #[arg(long)]
    method: Option<String>,
    #[arg(long)]
    lx: Option<usize>,
    #[arg(long)]
    ly: Option<usize>,
    #[arg(long)]
    chains: Option<usize>,
    #[arg(long)]
    steps_per_window: Option<usize>,
    /// Seam count for sqa.
    #[arg(long)]
    n_cuts: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output directory.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Any other config key, as key=value (repeatable).
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
}

impl SpecArgs {
    fn resolve(&self) -> frustrated_anneal::Result<ExperimentSpec> {
        let mut spec = match &self.config {
            Some(path) => ExperimentSpec::from_file(path)?,
            None => {
                let mut s = ExperimentSpec::default();
                s.apply_env();
                s
            }
        };
        for kv in &self.set {
            let (k, v) = kv.split_once('=').ok_or_else(|| {
                frustrated_anneal::Error::Config(format!("--set expects KEY=VALUE, got {kv:?}"))
            })?;
            spec.set(k.trim(), v.trim())?;
        }
        if let Some(m) = &self.method {
            spec.set("method", m)?;
        }
        spec.lx = self.lx.unwrap_or(spec.lx);
        spec.ly = self.ly.unwrap_or(spec.ly);
        spec.chains = self.chains.unwrap_or(spec.chains);
        spec.steps_per_window = self.steps_per_window.unwrap_or(spec.steps_per_window);
        spec.n_cuts = self.n_cuts.or(spec.n_cuts);
        spec.seed = self.seed.unwrap_or(spec.seed);
        if let Some(out) = &self.out {
            spec.out = out.clone();
        }
        Ok(spec)
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> frustrated_anneal::Result<bool> {
    match cli.command {
        Command::Run(args) => {
            let spec = args.resolve()?;
            let result = harness::run_experiment(&spec)?;
            let last = result.aggregate.last();
            println!(
                "{} chains of {} ({} MCS each) in {:.1}s -> {}",
                result.chains.len(),
                result.method,
                result.total_mcs,
                result.wall_clock_seconds,
                spec.out.display()
            );
            if let Some(row) = last {
                println!("final mean energy {:.4} ± {:.4}", row.mean_energy, row.stderr_energy);
            }
            Ok(true)
        }
        Command::Verify(args) => {
            let report = harness::verify(&args.resolve()?)?;
            println!("{report}");
            Ok(report.passed())
        }
        Command::Enumerate { lx, ly, j, jx } => {
            print!("{}", harness::enumerate_report(lx, ly, j, jx)?);
            Ok(true)
        }
    }
}
