//! Topological sectors of triangle-rule configurations.
//!
//! In a configuration where no triangle has three equal spins, the number of
//! antiparallel horizontal bonds is the same in every row. These bonds line up
//! into domain walls, and their count `N_D` labels the sector. Single spin flips
//! cannot change `N_D` without first creating spinons (all-equal triangles).

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::lattice::{Lattice, TriangleKind};
use crate::model::{violations_unchecked, SpinConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum UndefinedReason {
    SpinonsPresent,
    RowsInconsistent,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SectorLabel {
    /// Domain-wall count shared by every row.
    Defined(u32),
    Undefined(UndefinedReason),
}

impl SectorLabel {
    pub fn domain_walls(self) -> Option<u32> {
        match self {
            SectorLabel::Defined(d) => Some(d),
            SectorLabel::Undefined(_) => None,
        }
    }
}

impl fmt::Display for SectorLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SectorLabel::Defined(d) => write!(f, "{d}"),
            SectorLabel::Undefined(UndefinedReason::SpinonsPresent) => {
                f.write_str("U:SPINONS_PRESENT")
            }
            SectorLabel::Undefined(UndefinedReason::RowsInconsistent) => {
                f.write_str("U:ROWS_INCONSISTENT")
            }
        }
    }
}

impl FromStr for SectorLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "U:SPINONS_PRESENT" => Ok(SectorLabel::Undefined(UndefinedReason::SpinonsPresent)),
            "U:ROWS_INCONSISTENT" => {
                Ok(SectorLabel::Undefined(UndefinedReason::RowsInconsistent))
            }
            other => other
                .parse()
                .map(SectorLabel::Defined)
                .map_err(|_| Error::Config(format!("bad sector label {other:?}"))),
        }
    }
}

/// Number of sign changes around row `row`.
pub fn row_dw_count(config: &SpinConfig, row: usize, geom: &Lattice) -> usize {
    row_count_slice(config.as_slice(), row, geom)
}

fn row_count_slice(spins: &[i8], row: usize, geom: &Lattice) -> usize {
    let lx = geom.lx();
    let base = row * lx;
    (0..lx)
        .filter(|&x| spins[base + x] != spins[base + (x + 1) % lx])
        .count()
}

pub fn sector_label(config: &SpinConfig, geom: &Lattice) -> SectorLabel {
    sector_of_slice(config.as_slice(), geom)
}

pub(crate) fn sector_of_slice(spins: &[i8], geom: &Lattice) -> SectorLabel {
    if violations_unchecked(spins, geom) > 0 {
        return SectorLabel::Undefined(UndefinedReason::SpinonsPresent);
    }
    let first = row_count_slice(spins, 0, geom);
    if (1..geom.ly()).all(|y| row_count_slice(spins, y, geom) == first) {
        SectorLabel::Defined(first as u32)
    } else {
        SectorLabel::Undefined(UndefinedReason::RowsInconsistent)
    }
}

/// Indices of triangles whose three spins are equal.
pub fn spinon_triangles(config: &SpinConfig, geom: &Lattice) -> Vec<usize> {
    geom.triangles()
        .iter()
        .enumerate()
        .filter(|(_, t)| {
            let [a, b, c] = t.sites;
            config[a] == config[b] && config[b] == config[c]
        })
        .map(|(i, _)| i)
        .collect()
}

/// Dimers on the dual honeycomb lattice.
///
/// Dual sites are the triangles (up triangles form sublattice A, down
/// triangles sublattice B) and each direct bond is crossed by the dual bond
/// joining its two triangles. Dual bonds share the index of the direct bond.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DimerConfig {
    /// Direct-bond indices whose dual bond carries a dimer.
    pub dimers: Vec<usize>,
    /// Dimer count touching each dual site (triangle).
    pub coverage: Vec<u8>,
}

impl DimerConfig {
    /// Every dual site is covered by exactly one dimer.
    pub fn is_perfect_matching(&self) -> bool {
        self.coverage.iter().all(|&c| c == 1)
    }
}

/// Endpoints `(up, down)` of the dual bond crossing each direct bond.
pub fn dual_bonds(geom: &Lattice) -> Vec<(usize, usize)> {
    let mut ends = vec![(usize::MAX, usize::MAX); geom.bonds().len()];
    for (t, tri) in geom.triangles().iter().enumerate() {
        for &b in &tri.bonds {
            match tri.kind {
                TriangleKind::Up => ends[b].0 = t,
                TriangleKind::Down => ends[b].1 = t,
            }
        }
    }
    ends
}

/// Places a dimer across every bond with parallel spins.
pub fn dimer_mapping(config: &SpinConfig, geom: &Lattice) -> DimerConfig {
    let dual = dual_bonds(geom);
    let mut coverage = vec![0u8; geom.triangles().len()];
    let mut dimers = Vec::new();
    for (i, b) in geom.bonds().iter().enumerate() {
        if config[b.a] == config[b.b] {
            dimers.push(i);
            let (u, d) = dual[i];
            coverage[u] += 1;
            coverage[d] += 1;
        }
    }
    DimerConfig { dimers, coverage }
}

/// Normalised proportions of each sector label.
#[derive(Debug, Clone, PartialEq)]
pub struct SectorHistogram {
    /// Proportion of each `N_D` value that occurred.
    pub defined: BTreeMap<u32, f64>,
    /// Proportion of records with no defined sector.
    pub undefined: f64,
    pub total: usize,
}

impl SectorHistogram {
    pub fn proportion(&self, domain_walls: u32) -> f64 {
        self.defined.get(&domain_walls).copied().unwrap_or(0.0)
    }

    /// `N_D` with the largest share, ignoring undefined records.
    pub fn mode(&self) -> Option<u32> {
        self.defined
            .iter()
            .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(a.0)))
            .map(|(&d, _)| d)
    }
}

pub fn sector_histogram<'a, I>(records: I) -> Result<SectorHistogram>
where
    I: IntoIterator<Item = &'a SectorLabel>,
{
    let mut counts: BTreeMap<u32, usize> = BTreeMap::new();
    let mut undefined = 0usize;
    let mut total = 0usize;
    for label in records {
        total += 1;
        match label {
            SectorLabel::Defined(d) => *counts.entry(*d).or_default() += 1,
            SectorLabel::Undefined(_) => undefined += 1,
        }
    }
    if total == 0 {
        return Err(Error::EmptyHistogram);
    }
    let norm = total as f64;
    Ok(SectorHistogram {
        defined: counts
            .into_iter()
            .map(|(d, c)| (d, c as f64 / norm))
            .collect(),
        undefined: undefined as f64 / norm,
        total,
    })
}
