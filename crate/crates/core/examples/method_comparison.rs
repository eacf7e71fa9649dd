//! Side-by-side comparison of TA, QA, QA-h and SQA-n at a matched budget,
//! reporting mean final excess energy, ground-state fraction and modal sector.
//!
//! `cargo run --release --example method_comparison -- [budget_mcs] [chains]`

use frustrated_anneal::anneal::Method;
use frustrated_anneal::harness::{run_chains, ExperimentSpec};
use frustrated_anneal::stats::mean_stderr;
use frustrated_anneal::topology::sector_histogram;
use frustrated_anneal::Result;

pub struct Row {
    pub method: Method,
    pub mean_excess: f64,
    pub stderr: f64,
    pub ground_fraction: f64,
    pub modal_sector: Option<u32>,
}

/// Steps per window so that every method gets at least `budget` MCS.
pub fn steps_for(method: Method, budget: u64) -> usize {
    let (windows, unit) = match method {
        Method::Ta => (100, 1),
        Method::Sqa(n) => (101, n as u64),
        _ => (101, 1),
    };
    (budget.div_ceil(windows * unit) * unit) as usize
}

pub fn run_example(methods: &[Method], budget: u64, chains: usize) -> Result<Vec<Row>> {
    methods
        .iter()
        .map(|&method| {
            let spec = ExperimentSpec {
                method,
                chains,
                steps_per_window: steps_for(method, budget),
                points_per_decade: 10,
                ..Default::default()
            };
            let r = run_chains(&spec)?;
            let excess: Vec<f64> = r.final_energies().iter().map(|e| e + 39.6).collect();
            let (mean_excess, stderr) = mean_stderr(&excess);
            let sectors = r.final_sectors();
            Ok(Row {
                method,
                mean_excess,
                stderr,
                ground_fraction: excess.iter().filter(|d| d.abs() < 1e-9).count() as f64
                    / excess.len() as f64,
                modal_sector: sector_histogram(&sectors)?.mode(),
            })
        })
        .collect()
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let budget = args.first().copied().unwrap_or(20_000);
    let chains = args.get(1).copied().unwrap_or(8) as usize;
    let methods = [Method::Ta, Method::Qa, Method::QaH, Method::Sqa(1), Method::Sqa(6)];
    for r in run_example(&methods, budget, chains)? {
        println!(
            "{:<6} dE = {:.3} ± {:.3}  P(ground) = {:.2}  modal sector {:?}",
            r.method.to_string(),
            r.mean_excess,
            r.stderr,
            r.ground_fraction,
            r.modal_sector
        );
    }
    Ok(())
}
