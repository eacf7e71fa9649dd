//! Topological diagnostics: domain-wall counts per row, sector labels, spinon
//! triangles and the mapping of triangle-rule states onto perfect dimer
//! matchings of the dual honeycomb lattice.
//!
//! `cargo run --example topology_sectors`

use frustrated_anneal::model::{energy, stripe_config};
use frustrated_anneal::topology::{
    dimer_mapping, row_dw_count, sector_histogram, sector_label, spinon_triangles,
};
use frustrated_anneal::{Couplings, Lattice, Result, SectorLabel, SpinConfig};

/// The stripe state with `pairs` diagonal strings of flipped spins, spaced
/// `lx / pairs` apart. Each string adds two domain walls to every row.
pub fn sector_state(geom: &Lattice, pairs: usize) -> SpinConfig {
    let lx = geom.lx();
    let mut s = stripe_config(geom).expect("even number of rows");
    for site in 0..geom.num_sites() {
        let (x, y) = geom.coords(site);
        let shifted = (x + lx - y % lx) % lx;
        if pairs > 0 && shifted % (lx / pairs) == 0 {
            s.flip(site);
        }
    }
    s
}

pub struct Diagnostics {
    pub label: SectorLabel,
    pub energy: f64,
    pub spinons: usize,
    pub row_counts: Vec<usize>,
    pub perfect_matching: bool,
}

pub fn diagnose(config: &SpinConfig, geom: &Lattice, couplings: &Couplings) -> Result<Diagnostics> {
    Ok(Diagnostics {
        label: sector_label(config, geom),
        energy: energy(config, couplings, geom)?,
        spinons: spinon_triangles(config, geom).len(),
        row_counts: (0..geom.ly()).map(|y| row_dw_count(config, y, geom)).collect(),
        perfect_matching: dimer_mapping(config, geom).is_perfect_matching(),
    })
}

pub fn run_example() -> Result<Vec<(String, Diagnostics)>> {
    let geom = Lattice::new(6, 6)?;
    let couplings = Couplings::new(&geom, 1.0, 0.9);
    let stripe = stripe_config(&geom)?;
    let mut defect = stripe.clone();
    defect.flip(geom.site(2, 2));
    let mut out = vec![
        ("stripe".to_string(), diagnose(&stripe, &geom, &couplings)?),
        ("stripe + one flip".to_string(), diagnose(&defect, &geom, &couplings)?),
    ];
    for pairs in 1..=3 {
        let s = sector_state(&geom, pairs);
        out.push((format!("{pairs} diagonal strings"), diagnose(&s, &geom, &couplings)?));
    }
    Ok(out)
}

#[allow(dead_code)]
fn main() -> Result<()> {
    let rows = run_example()?;
    for (name, d) in &rows {
        println!(
            "{name:<22} sector {:<18} E {:>7.2}  spinons {:>2}  rows {:?}  perfect matching {}",
            d.label.to_string(),
            d.energy,
            d.spinons,
            d.row_counts,
            d.perfect_matching
        );
    }
    let labels: Vec<SectorLabel> = rows.iter().map(|(_, d)| d.label).collect();
    let hist = sector_histogram(&labels)?;
    println!("histogram: {:?}, undefined {:.2}", hist.defined, hist.undefined);
    Ok(())
}
