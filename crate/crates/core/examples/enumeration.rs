//! Exhaustive classical enumeration: ground energy, degeneracy, ground states
//! and the number of configurations in each topological sector.
//!
//! `cargo run --release --example enumeration -- [lx] [ly]` (at most 24 sites)

use frustrated_anneal::oracle::{enumerate_classical, EnumerationReport};
use frustrated_anneal::{Couplings, Lattice, Result};

pub fn run_example(lx: usize, ly: usize) -> Result<EnumerationReport> {
    let geom = Lattice::new(lx, ly)?;
    enumerate_classical(&geom, &Couplings::new(&geom, 1.0, 0.9))
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let args: Vec<usize> = std::env::args().skip(1).filter_map(|a| a.parse().ok()).collect();
    let (lx, ly) = (args.first().copied().unwrap_or(6), args.get(1).copied().unwrap_or(4));
    let r = run_example(lx, ly)?;
    println!("{lx}x{ly}: ground energy {}, degeneracy {}", r.ground_energy, r.degeneracy);
    if let Some(states) = &r.ground_states {
        for s in states {
            println!("  ground state bits {s:#x}");
        }
    }
    for (label, n) in &r.sector_counts {
        println!("  sector {label}: {n} configurations");
    }
    Ok(())
}
