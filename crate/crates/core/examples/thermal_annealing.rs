//! Thermal annealing (TA) of the 6×6 model from T = 5 down to T = 0.05 with
//! Metropolis sweeps, printing the energy relaxation of a few chains.
//!
//! `cargo run --release --example thermal_annealing -- [steps_per_window] [chains]`

use frustrated_anneal::anneal::{Schedule, ThermalSchedule};
use frustrated_anneal::stats::mean_stderr;
use frustrated_anneal::{Couplings, Lattice, Result, TimeSeries};

pub const GROUND_ENERGY: f64 = -39.6;

/// Runs `chains` TA chains and returns their time series.
pub fn run_example(steps_per_window: usize, chains: u64) -> Result<Vec<TimeSeries>> {
    let geom = Lattice::new(6, 6)?;
    let couplings = Couplings::new(&geom, 1.0, 0.9);
    let schedule = Schedule::Thermal(ThermalSchedule::standard(steps_per_window));
    (0..chains)
        .map(|k| Ok(schedule.run(&geom, &couplings, 10 + k, 10)?.series))
        .collect()
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let steps = args.first().copied().unwrap_or(1000);
    let chains = args.get(1).copied().unwrap_or(8) as u64;
    let runs = run_example(steps, chains)?;
    for (k, series) in runs.iter().enumerate() {
        let last = series.last().expect("non-empty series");
        println!(
            "chain {k}: final E = {:.2} (dE = {:.2}), sector {}, {} samples",
            last.energy,
            last.energy - GROUND_ENERGY,
            last.sector,
            series.len()
        );
    }
    let de: Vec<f64> = runs
        .iter()
        .filter_map(|s| s.final_energy())
        .map(|e| e - GROUND_ENERGY)
        .collect();
    let (m, e) = mean_stderr(&de);
    println!("TA, {steps} MCS per window: mean final dE = {m:.3} ± {e:.3}");
    Ok(())
}
