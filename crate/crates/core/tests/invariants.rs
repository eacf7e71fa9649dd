//! Property-based invariants of the model and its diagnostics.

use frustrated_anneal::model::{delta_energy_flip, energy};
use frustrated_anneal::oracle::exact_quantum_energy;
use frustrated_anneal::sse_qmc::measure_energy;
use frustrated_anneal::topology::{dimer_mapping, sector_label};
use frustrated_anneal::{Couplings, Lattice, SpinConfig};
use proptest::prelude::*;

fn lattice() -> Lattice {
    Lattice::new(6, 4).unwrap()
}

proptest! {
    #[test]
    fn global_flip_preserves_energy_and_sector(bits in 0u64..(1 << 24)) {
        let g = lattice();
        let c = Couplings::new(&g, 1.0, 0.9);
        let s = SpinConfig::from_bits(bits, 24);
        let r = s.reversed();
        prop_assert!((energy(&s, &c, &g).unwrap() - energy(&r, &c, &g).unwrap()).abs() < 1e-12);
        prop_assert_eq!(sector_label(&s, &g), sector_label(&r, &g));
    }

    #[test]
    fn flip_delta_matches_recomputed_energy(bits in 0u64..(1 << 24), site in 0usize..24,
                                             jx in 0.0f64..2.0) {
        let g = lattice();
        let c = Couplings::new(&g, 1.0, jx);
        let s = SpinConfig::from_bits(bits, 24);
        let mut t = s.clone();
        t.flip(site);
        let direct = energy(&t, &c, &g).unwrap() - energy(&s, &c, &g).unwrap();
        prop_assert!((delta_energy_flip(&s, site, &c, &g).unwrap() - direct).abs() < 1e-12);
    }

    #[test]
    fn defined_sectors_are_perfect_matchings(bits in 0u64..(1 << 24)) {
        let g = lattice();
        let s = SpinConfig::from_bits(bits, 24);
        let defined = sector_label(&s, &g).domain_walls().is_some();
        prop_assert_eq!(defined, dimer_mapping(&s, &g).is_perfect_matching());
    }
}

#[test]
fn sse_matches_exact_diagonalisation() {
    let g = Lattice::new(3, 4).unwrap();
    let mut c = Couplings::new(&g, 1.0, 0.9);
    c.set_uniform_field(1.0);
    let exact = exact_quantum_energy(&g, &c, 0.7).unwrap();
    let est = measure_energy(&g, &c, 0.7, 20_000, 400_000, 10_000, 5).unwrap();
    assert!(
        (est.mean - exact).abs() < 4.0 * est.stderr,
        "SSE {} ± {} vs exact {exact}",
        est.mean,
        est.stderr
    );
}
