//! Per-chain time series and the sampling grid shared by every annealing
//! driver.

use crate::lattice::Lattice;
use crate::model::{energy_unchecked, violations_unchecked};
use crate::topology::{sector_of_slice, SectorLabel};

#[derive(Debug, Clone, PartialEq)]
pub struct Sample {
    /// Cumulative Monte Carlo steps at the time of the sample.
    pub mcs: u64,
    /// Temperature (thermal annealing) or transverse field (quantum annealing)
    /// of the window the sample was taken in.
    pub window_value: f64,
    /// Classical energy of the snapshot under the unmodified couplings.
    pub energy: f64,
    pub spinons: usize,
    pub sector: SectorLabel,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct TimeSeries {
    pub samples: Vec<Sample>,
}

impl TimeSeries {
    pub fn last(&self) -> Option<&Sample> {
        self.samples.last()
    }

    pub fn final_energy(&self) -> Option<f64> {
        self.last().map(|s| s.energy)
    }

    pub fn final_sector(&self) -> Option<SectorLabel> {
        self.last().map(|s| s.sector)
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    /// Distinct consecutive sector labels seen along the series.
    pub fn sector_changes(&self) -> usize {
        let defined: Vec<u32> = self
            .samples
            .iter()
            .filter_map(|s| s.sector.domain_walls())
            .collect();
        defined.windows(2).filter(|w| w[0] != w[1]).count()
    }
}

/// Monte Carlo step counts at which a chain records a sample: a logarithmic
/// grid with at most `points_per_decade` points per decade, merged with the
/// last step of every annealing window. The grid depends only on the schedule,
/// so all chains of an experiment share sample indices.
#[derive(Debug, Clone)]
pub struct SampleGrid {
    points: Vec<u64>,
    next: usize,
}

impl SampleGrid {
    pub fn new(total_mcs: u64, points_per_decade: u32, window_ends: &[u64]) -> Self {
        let mut points: Vec<u64> = Vec::new();
        if points_per_decade > 0 && total_mcs > 0 {
            let decades = (total_mcs as f64).log10();
            let steps = (decades * points_per_decade as f64).ceil() as u64;
            for k in 0..=steps {
                let m = 10f64.powf(k as f64 / points_per_decade as f64).round() as u64;
                if m >= 1 && m <= total_mcs {
                    points.push(m);
                }
            }
        }
        points.extend(window_ends.iter().copied().filter(|&m| m <= total_mcs));
        points.push(total_mcs);
        points.retain(|&m| m >= 1);
        points.sort_unstable();
        points.dedup();
        Self { points, next: 0 }
    }

    pub fn points(&self) -> &[u64] {
        &self.points
    }

    /// True exactly once for each grid point, provided `mcs` is visited in
    /// increasing order.
    #[inline]
    pub fn hit(&mut self, mcs: u64) -> bool {
        if self.points.get(self.next) == Some(&mcs) {
            self.next += 1;
            true
        } else {
            false
        }
    }
}

/// Turns spin snapshots into [`Sample`]s at grid points.
#[derive(Debug, Clone)]
pub(crate) struct Recorder {
    grid: SampleGrid,
    pristine: Vec<f64>,
    series: TimeSeries,
}

impl Recorder {
    pub(crate) fn new(grid: SampleGrid, pristine_bonds: &[f64]) -> Self {
        Self {
            series: TimeSeries {
                samples: Vec::with_capacity(grid.points().len()),
            },
            grid,
            pristine: pristine_bonds.to_vec(),
        }
    }

    #[inline]
    pub(crate) fn observe(&mut self, mcs: u64, window_value: f64, spins: &[i8], geom: &Lattice) {
        if self.grid.hit(mcs) {
            self.series.samples.push(Sample {
                mcs,
                window_value,
                energy: energy_unchecked(spins, &self.pristine, geom),
                spinons: violations_unchecked(spins, geom),
                sector: sector_of_slice(spins, geom),
            });
        }
    }

    pub(crate) fn finish(self) -> TimeSeries {
        self.series
    }
}
