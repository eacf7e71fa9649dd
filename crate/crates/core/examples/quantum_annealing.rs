//! Quantum annealing (QA): the transverse field is lowered from h = 5 to 0 at
//! T = 0.05 with SSE quantum Monte Carlo. Chains typically freeze in the
//! N_D = 4 topological sector, 4.8 above the stripe ground state.
//!
//! `cargo run --release --example quantum_annealing -- [steps_per_window] [chains]`

use frustrated_anneal::anneal::{run_qa, FieldSchedule};
use frustrated_anneal::{Couplings, Lattice, Result, SectorLabel};

pub struct QaChain {
    pub final_energy: f64,
    pub final_sector: SectorLabel,
    pub total_mcs: u64,
}

pub fn run_example(steps_per_window: usize, chains: u64) -> Result<Vec<QaChain>> {
    let geom = Lattice::new(6, 6)?;
    let couplings = Couplings::new(&geom, 1.0, 0.9);
    let schedule = FieldSchedule::standard(steps_per_window);
    (0..chains)
        .map(|k| {
            let out = run_qa(&geom, &couplings, &schedule, 40 + k, 10)?;
            let last = out.series.last().expect("non-empty series");
            Ok(QaChain {
                final_energy: last.energy,
                final_sector: last.sector,
                total_mcs: last.mcs,
            })
        })
        .collect()
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let steps = args.first().copied().unwrap_or(200);
    let chains = args.get(1).copied().unwrap_or(4) as u64;
    for (k, c) in run_example(steps, chains)?.iter().enumerate() {
        println!(
            "chain {k}: {} MCS, final E = {:.2} (dE = {:.2}), sector {}",
            c.total_mcs,
            c.final_energy,
            c.final_energy + 39.6,
            c.final_sector
        );
    }
    Ok(())
}
