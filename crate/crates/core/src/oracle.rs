//! Exact references for small systems: exhaustive classical enumeration,
//! the exact Boltzmann distribution and the thermal energy of the
//! transverse-field Hamiltonian from a dense spectrum.
//!
//! Configurations are indexed by bit patterns (bit `i` set ⇔ spin `i` down),
//! matching [`SpinConfig::from_bits`].

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::model::{Couplings, SpinConfig};
use crate::topology::{sector_of_slice, SectorLabel};

pub const MAX_ENUMERATION_SITES: usize = 24;
pub const MAX_BOLTZMANN_SITES: usize = 16;
pub const MAX_QUANTUM_SITES: usize = 12;

/// Energies closer than this are treated as degenerate.
const DEGENERACY_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct EnumerationReport {
    pub ground_energy: f64,
    pub degeneracy: u64,
    /// Bit patterns of the minimisers, when there are at most
    /// [`EnumerationReport::MAX_LISTED`] of them.
    pub ground_states: Option<Vec<u64>>,
    /// Number of configurations per sector label.
    pub sector_counts: BTreeMap<SectorLabel, u64>,
}

impl EnumerationReport {
    pub const MAX_LISTED: usize = 1024;
}

/// Classical energy of a bit pattern: `Σ_b J_b (1 - 2 [s_a ≠ s_b])`.
#[inline]
fn bits_energy(bits: u64, ends: &[(u32, u32, f64)], total: f64) -> f64 {
    let anti: f64 = ends
        .iter()
        .filter(|(a, b, _)| (bits >> a ^ bits >> b) & 1 == 1)
        .map(|&(_, _, j)| j)
        .sum();
    total - 2.0 * anti
}

fn bond_table(geom: &Lattice, couplings: &Couplings) -> (Vec<(u32, u32, f64)>, f64) {
    let ends: Vec<(u32, u32, f64)> = geom
        .bonds()
        .iter()
        .zip(couplings.bond_values())
        .map(|(b, &j)| (b.a as u32, b.b as u32, j))
        .collect();
    let total = ends.iter().map(|e| e.2).sum();
    (ends, total)
}

#[derive(Debug, Clone)]
struct Partial {
    ground: f64,
    degeneracy: u64,
    states: Vec<u64>,
    sectors: BTreeMap<SectorLabel, u64>,
}

impl Partial {
    fn empty() -> Self {
        Self {
            ground: f64::INFINITY,
            degeneracy: 0,
            states: Vec::new(),
            sectors: BTreeMap::new(),
        }
    }

    fn offer(&mut self, e: f64, bits: u64, mirror: u64) {
        if e < self.ground - DEGENERACY_TOLERANCE {
            self.ground = e;
            self.degeneracy = 0;
            self.states.clear();
        }
        if (e - self.ground).abs() <= DEGENERACY_TOLERANCE {
            self.degeneracy += 2;
            if self.states.len() < EnumerationReport::MAX_LISTED {
                self.states.push(bits);
                self.states.push(mirror);
            }
        }
    }

    fn merge(mut self, other: Self) -> Self {
        for (k, v) in other.sectors {
            *self.sectors.entry(k).or_default() += v;
        }
        if other.ground < self.ground - DEGENERACY_TOLERANCE {
            self.ground = other.ground;
            self.degeneracy = other.degeneracy;
            self.states = other.states;
        } else if (other.ground - self.ground).abs() <= DEGENERACY_TOLERANCE {
            self.degeneracy += other.degeneracy;
            self.states.extend(other.states);
        }
        self
    }
}

/// Exact minimum, degeneracy and sector census over all `2^N` configurations.
///
/// Only configurations with the top spin up are visited; each stands for
/// itself and its global flip, which has the same energy and sector.
pub fn enumerate_classical(geom: &Lattice, couplings: &Couplings) -> Result<EnumerationReport> {
    let n = geom.num_sites();
    if n > MAX_ENUMERATION_SITES {
        return Err(Error::TooLarge {
            n,
            max: MAX_ENUMERATION_SITES,
        });
    }
    let (ends, total) = bond_table(geom, couplings);
    let half = 1u64 << (n - 1);
    let full_mask = (1u64 << n) - 1;
    let chunk = 1u64 << 14.min(n - 1);

    let result = (0..half.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut part = Partial::empty();
            let mut spins = vec![1i8; n];
            for bits in c * chunk..((c + 1) * chunk).min(half) {
                let e = bits_energy(bits, &ends, total);
                part.offer(e, bits, bits ^ full_mask);
                for (i, s) in spins.iter_mut().enumerate() {
                    *s = if bits >> i & 1 == 1 { -1 } else { 1 };
                }
                *part.sectors.entry(sector_of_slice(&spins, geom)).or_default() += 2;
            }
            part
        })
        .reduce(Partial::empty, Partial::merge);

    let mut states = result.states;
    states.sort_unstable();
    let listed = (result.degeneracy as usize) <= EnumerationReport::MAX_LISTED;
    Ok(EnumerationReport {
        ground_energy: result.ground,
        degeneracy: result.degeneracy,
        ground_states: listed.then_some(states),
        sector_counts: result.sectors,
    })
}

/// `exp(-E(C)/T) / Z` for every configuration `C`, indexed by bit pattern.
pub fn exact_boltzmann(geom: &Lattice, couplings: &Couplings, temperature: f64) -> Result<Vec<f64>> {
    let n = geom.num_sites();
    if n > MAX_BOLTZMANN_SITES {
        return Err(Error::TooLarge {
            n,
            max: MAX_BOLTZMANN_SITES,
        });
    }
    if !(temperature > 0.0) {
        return Err(Error::NonPositiveTemperature(temperature));
    }
    let (ends, total) = bond_table(geom, couplings);
    let energies: Vec<f64> = (0..1u64 << n)
        .map(|bits| bits_energy(bits, &ends, total))
        .collect();
    let e0 = energies.iter().copied().fold(f64::INFINITY, f64::min);
    let mut weights: Vec<f64> = energies
        .iter()
        .map(|e| (-(e - e0) / temperature).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    weights.iter_mut().for_each(|w| *w /= z);
    Ok(weights)
}

/// Classical energies of all `2^N` configurations, indexed by bit pattern.
pub fn classical_energies(geom: &Lattice, couplings: &Couplings) -> Result<Vec<f64>> {
    let n = geom.num_sites();
    if n > MAX_BOLTZMANN_SITES {
        return Err(Error::TooLarge {
            n,
            max: MAX_BOLTZMANN_SITES,
        });
    }
    let (ends, total) = bond_table(geom, couplings);
    Ok((0..1u64 << n)
        .map(|bits| bits_energy(bits, &ends, total))
        .collect())
}

/// Thermal quantities of `H_A + Σ_i h_i σ^x_i` from its full spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumThermal {
    /// `Tr(H e^{-βH}) / Tr(e^{-βH})`.
    pub energy: f64,
    /// `-T ln Tr(e^{-βH})`.
    pub free_energy: f64,
    pub ground_energy: f64,
}

/// Spectrum of `H_A + Σ_i h_i σ^x_i`, with fields from `couplings`.
///
/// The global spin flip `Π_i σ^x_i` commutes with `H`, so the matrix is
/// block-diagonalised into its even and odd sectors (states
/// `(|c⟩ ± |c̄⟩)/√2`) before the dense symmetric eigensolve.
pub fn quantum_spectrum(geom: &Lattice, couplings: &Couplings) -> Result<Vec<f64>> {
    let n = geom.num_sites();
    if n > MAX_QUANTUM_SITES {
        return Err(Error::TooLarge {
            n,
            max: MAX_QUANTUM_SITES,
        });
    }
    let (ends, total) = bond_table(geom, couplings);
    let dim = 1usize << (n - 1);
    let full = (1u64 << n) - 1;
    let top = 1u64 << (n - 1);
    let mut spectrum = Vec::with_capacity(2 * dim);
    for parity in [1.0, -1.0] {
        let mut h = DMatrix::<f64>::zeros(dim, dim);
        for r in 0..dim as u64 {
            h[(r as usize, r as usize)] = bits_energy(r, &ends, total);
            for (i, &hi) in couplings.fields().iter().enumerate() {
                if hi == 0.0 {
                    continue;
                }
                let c = r ^ (1 << i);
                let (rep, sign) = if c & top == 0 {
                    (c, 1.0)
                } else {
                    (c ^ full, parity)
                };
                h[(rep as usize, r as usize)] += sign * hi;
            }
        }
        spectrum.extend(h.symmetric_eigenvalues().iter().copied());
    }
    spectrum.sort_by(f64::total_cmp);
    Ok(spectrum)
}

/// Exact thermal energy, free energy and ground energy of the
/// transverse-field Hamiltonian at temperature `temperature`.
pub fn exact_quantum_thermal(
    geom: &Lattice,
    couplings: &Couplings,
    temperature: f64,
) -> Result<QuantumThermal> {
    if !(temperature > 0.0) {
        return Err(Error::NonPositiveTemperature(temperature));
    }
    let spectrum = quantum_spectrum(geom, couplings)?;
    let e0 = spectrum[0];
    let beta = 1.0 / temperature;
    let mut z = 0.0;
    let mut ez = 0.0;
    for &e in &spectrum {
        let w = (-beta * (e - e0)).exp();
        z += w;
        ez += w * e;
    }
    Ok(QuantumThermal {
        energy: ez / z,
        free_energy: e0 - temperature * z.ln(),
        ground_energy: e0,
    })
}

/// Shorthand for [`exact_quantum_thermal`]`(..).energy`.
pub fn exact_quantum_energy(geom: &Lattice, couplings: &Couplings, temperature: f64) -> Result<f64> {
    Ok(exact_quantum_thermal(geom, couplings, temperature)?.energy)
}

/// Configuration for a bit pattern on `geom`.
pub fn config_from_bits(geom: &Lattice, bits: u64) -> SpinConfig {
    SpinConfig::from_bits(bits, geom.num_sites())
}
