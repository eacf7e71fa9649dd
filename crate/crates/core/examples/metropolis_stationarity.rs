//! Fixed-temperature Metropolis sampling compared with the exact Boltzmann
//! distribution on a 4×4 lattice (total-variation distance).
//!
//! `cargo run --release --example metropolis_stationarity -- [attempts]`

use frustrated_anneal::classical_mc::stationary_estimate;
use frustrated_anneal::oracle::exact_boltzmann;
use frustrated_anneal::stats::total_variation;
use frustrated_anneal::{Couplings, Lattice, Result};

/// Returns (Rao–Blackwellised TV, raw occupancy TV).
pub fn run_example(temperature: f64, attempts: u64) -> Result<(f64, f64)> {
    let geom = Lattice::new(4, 4)?;
    let c = Couplings::new(&geom, 1.0, 0.9);
    let exact = exact_boltzmann(&geom, &c, temperature)?;
    let est = stationary_estimate(&geom, &c, temperature, attempts / 100, attempts, 1)?;
    Ok((
        total_variation(&est.rao_blackwell, &exact),
        total_variation(&est.occupancy, &exact),
    ))
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let attempts = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(10_000_000);
    for t in [1.0, 2.0, 5.0] {
        let (rb, raw) = run_example(t, attempts)?;
        println!("T={t}: TV = {rb:.5} (raw occupancy {raw:.5}) after {attempts} attempts");
    }
    Ok(())
}
