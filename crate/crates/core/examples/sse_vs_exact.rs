//! Cross-check of the SSE quantum Monte Carlo energy against exact
//! diagonalisation of the transverse-field Hamiltonian on a 3×4 lattice.
//! At small field and low temperature the cluster dynamics of the frustrated
//! model is slow (autocorrelation ~1e5 sweeps at h = 0.5, T = 0.5), so long
//! runs are needed there for a reliable error bar.
//!
//! `cargo run --release --example sse_vs_exact -- [sweeps]`

use frustrated_anneal::oracle::exact_quantum_energy;
use frustrated_anneal::sse_qmc::measure_energy;
use frustrated_anneal::{Couplings, Lattice, Result};

pub struct Point {
    pub h: f64,
    pub temperature: f64,
    pub sse: f64,
    pub stderr: f64,
    pub exact: f64,
}

pub fn run_example(points: &[(f64, f64)], sweeps: u64) -> Result<Vec<Point>> {
    let geom = Lattice::new(3, 4)?;
    points
        .iter()
        .enumerate()
        .map(|(k, &(h, temperature))| {
            let mut c = Couplings::new(&geom, 1.0, 0.9);
            c.set_uniform_field(h);
            let est = measure_energy(&geom, &c, temperature, sweeps / 10, sweeps, (sweeps / 40) as usize, k as u64)?;
            Ok(Point {
                h,
                temperature,
                sse: est.mean,
                stderr: est.stderr,
                exact: exact_quantum_energy(&geom, &c, temperature)?,
            })
        })
        .collect()
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let sweeps = std::env::args().nth(1).and_then(|a| a.parse().ok()).unwrap_or(400_000);
    let grid = [(0.5, 0.5), (0.5, 1.0), (1.5, 0.5), (1.5, 1.0), (3.0, 0.5), (3.0, 1.0)];
    for p in run_example(&grid, sweeps)? {
        println!(
            "h={:.1} T={:.1}: SSE {:+.4} ± {:.4}  exact {:+.4}  ({:+.1} sigma)",
            p.h,
            p.temperature,
            p.sse,
            p.stderr,
            p.exact,
            (p.sse - p.exact) / p.stderr
        );
    }
    Ok(())
}
