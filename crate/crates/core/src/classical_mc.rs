//! Single-spin-flip Metropolis sampling and the thermal-annealing driver.
//!
//! One Monte Carlo step is `N` flip attempts, each on a uniformly random site
//! (with replacement).

use rand::{Rng, SeedableRng};

use crate::anneal::ThermalSchedule;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::model::{delta_unchecked, Couplings, SpinConfig};
use crate::oracle::MAX_BOLTZMANN_SITES;
use crate::series::{Recorder, SampleGrid, TimeSeries};
use crate::ChainRng;

/// Metropolis acceptance `min(exp(-ΔE / T), 1)`.
#[inline]
pub fn acceptance_probability(delta: f64, temperature: f64) -> f64 {
    if delta <= 0.0 {
        1.0
    } else {
        (-delta / temperature).exp()
    }
}

/// Probability that one attempt moves `from` to the configuration with `site`
/// flipped: pick the site (`1/N`) then accept.
pub fn flip_transition_probability(
    from: &SpinConfig,
    site: usize,
    couplings: &Couplings,
    geom: &Lattice,
    temperature: f64,
) -> f64 {
    let delta = delta_unchecked(from.as_slice(), site, couplings.bond_values(), geom);
    acceptance_probability(delta, temperature) / geom.num_sites() as f64
}

#[derive(Debug, Clone)]
pub struct ThermalState {
    pub config: SpinConfig,
    temperature: f64,
    pub rng: ChainRng,
    pub mcs: u64,
}

impl ThermalState {
    pub fn new(config: SpinConfig, temperature: f64, rng: ChainRng) -> Result<Self> {
        if !(temperature > 0.0) {
            return Err(Error::NonPositiveTemperature(temperature));
        }
        Ok(Self {
            config,
            temperature,
            rng,
            mcs: 0,
        })
    }

    /// Uniformly random initial spins drawn from a fresh stream seeded by `seed`.
    pub fn random(geom: &Lattice, temperature: f64, seed: u64) -> Result<Self> {
        let mut rng = ChainRng::seed_from_u64(seed);
        let config = SpinConfig::random(geom.num_sites(), &mut rng);
        Self::new(config, temperature, rng)
    }

    pub fn temperature(&self) -> f64 {
        self.temperature
    }

    pub fn set_temperature(&mut self, temperature: f64) -> Result<()> {
        if !(temperature > 0.0) {
            return Err(Error::NonPositiveTemperature(temperature));
        }
        self.temperature = temperature;
        Ok(())
    }

    /// One flip attempt; returns whether it was accepted.
    #[inline]
    pub fn attempt_flip(&mut self, bonds: &[f64], geom: &Lattice) -> bool {
        let site = self.rng.random_range(0..geom.num_sites());
        let delta = delta_unchecked(self.config.as_slice(), site, bonds, geom);
        let accept = delta <= 0.0 || self.rng.random::<f64>() < (-delta / self.temperature).exp();
        if accept {
            self.config.flip(site);
        }
        accept
    }

    /// One Monte Carlo step: `N` flip attempts.
    pub fn metropolis_sweep(&mut self, couplings: &Couplings, geom: &Lattice) {
        let bonds = couplings.bond_values();
        for _ in 0..geom.num_sites() {
            self.attempt_flip(bonds, geom);
        }
        self.mcs += 1;
    }
}

/// Estimates of the stationary distribution of a fixed-temperature Metropolis
/// chain over all `2^N` configurations, indexed by [`SpinConfig::to_bits`].
#[derive(Debug, Clone, PartialEq)]
pub struct StationaryEstimate {
    /// Fraction of attempts after which the chain sat in each configuration.
    pub occupancy: Vec<f64>,
    /// Rao–Blackwellised estimate: at every attempt the exact one-attempt
    /// transition distribution `P(C → ·)` out of the current configuration
    /// is accumulated instead of the realised successor. Because `πP = π`
    /// it converges to the same limit as the occupancy, with smaller variance.
    pub rao_blackwell: Vec<f64>,
}

/// Runs `burn_in` discarded attempts, then `attempts` recorded ones, and
/// returns both estimators of the chain's stationary distribution.
pub fn stationary_estimate(
    geom: &Lattice,
    couplings: &Couplings,
    temperature: f64,
    burn_in: u64,
    attempts: u64,
    seed: u64,
) -> Result<StationaryEstimate> {
    let n = geom.num_sites();
    if n > MAX_BOLTZMANN_SITES {
        return Err(Error::TooLarge {
            n,
            max: MAX_BOLTZMANN_SITES,
        });
    }
    let mut state = ThermalState::random(geom, temperature, seed)?;
    let bonds = couplings.bond_values();
    for _ in 0..burn_in {
        state.attempt_flip(bonds, geom);
    }
    let mut bits = state.config.to_bits();
    let mut counts = vec![0u64; 1 << n];
    let mut weights = vec![0.0f64; 1 << n];
    let mut moves = vec![0.0f64; n];
    let mut cached = u64::MAX;
    for _ in 0..attempts {
        // The successor distribution only changes when the chain moves.
        if bits != cached {
            for (site, m) in moves.iter_mut().enumerate() {
                let delta = delta_unchecked(state.config.as_slice(), site, bonds, geom);
                *m = acceptance_probability(delta, temperature) / n as f64;
            }
            cached = bits;
        }
        let mut stay = 1.0;
        for (site, &m) in moves.iter().enumerate() {
            weights[(bits ^ 1 << site) as usize] += m;
            stay -= m;
        }
        weights[bits as usize] += stay;

        let site = state.rng.random_range(0..n);
        let delta = delta_unchecked(state.config.as_slice(), site, bonds, geom);
        if delta <= 0.0 || state.rng.random::<f64>() < (-delta / temperature).exp() {
            state.config.flip(site);
            bits ^= 1 << site;
        }
        counts[bits as usize] += 1;
    }
    let total = attempts.max(1) as f64;
    Ok(StationaryEstimate {
        occupancy: counts.into_iter().map(|c| c as f64 / total).collect(),
        rao_blackwell: weights.into_iter().map(|w| w / total).collect(),
    })
}

/// Thermal annealing from `t_max` down to `t_min`, `steps_per_window` sweeps at
/// each temperature, starting from random spins.
pub fn run_ta(
    geom: &Lattice,
    couplings: &Couplings,
    schedule: &ThermalSchedule,
    seed: u64,
    points_per_decade: u32,
) -> Result<TimeSeries> {
    schedule.validate()?;
    let temperatures = schedule.temperatures();
    let steps = schedule.steps_per_window as u64;
    let window_ends: Vec<u64> = (1..=temperatures.len() as u64).map(|w| w * steps).collect();
    let total = steps * temperatures.len() as u64;
    let mut recorder = Recorder::new(
        SampleGrid::new(total, points_per_decade, &window_ends),
        couplings.bond_values(),
    );

    let mut state = ThermalState::random(geom, temperatures[0], seed)?;
    for &t in &temperatures {
        state.set_temperature(t)?;
        for _ in 0..steps {
            state.metropolis_sweep(couplings, geom);
            recorder.observe(state.mcs, t, state.config.as_slice(), geom);
        }
    }
    Ok(recorder.finish())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::energy;
    use crate::oracle;

    #[test]
    fn acceptance() {
        assert_eq!(acceptance_probability(0.0, 1.0), 1.0);
        assert_eq!(acceptance_probability(-3.0, 0.1), 1.0);
        assert!((acceptance_probability(2.0, 1.0) - 0.1353352832366127).abs() < 1e-15);
    }

    #[test]
    fn rejects_bad_temperature() {
        let g = Lattice::new(3, 3).unwrap();
        assert!(ThermalState::random(&g, 0.0, 1).is_err());
        assert!(ThermalState::random(&g, -1.0, 1).is_err());
        assert!(ThermalState::random(&g, f64::NAN, 1).is_err());
    }

    #[test]
    fn sweep_counts_mcs() {
        let g = Lattice::new(4, 4).unwrap();
        let c = Couplings::new(&g, 1.0, 0.9);
        let mut s = ThermalState::random(&g, 1.0, 9).unwrap();
        for _ in 0..7 {
            s.metropolis_sweep(&c, &g);
        }
        assert_eq!(s.mcs, 7);
    }

    #[test]
    fn ta_is_reproducible_and_bounded() {
        let g = Lattice::new(4, 4).unwrap();
        let c = Couplings::new(&g, 1.0, 0.9);
        let sched = ThermalSchedule::standard(20);
        let a = run_ta(&g, &c, &sched, 77, 20).unwrap();
        let b = run_ta(&g, &c, &sched, 77, 20).unwrap();
        assert_eq!(a, b);
        let ground = oracle::enumerate_classical(&g, &c).unwrap().ground_energy;
        assert!(a.samples.iter().all(|s| s.energy >= ground - 1e-9));
        assert!(a.samples.windows(2).all(|w| w[0].mcs < w[1].mcs));
        assert!(a
            .samples
            .windows(2)
            .all(|w| w[0].window_value >= w[1].window_value));
        assert_eq!(a.last().unwrap().mcs, 2000);
    }

    #[test]
    fn ta_rejects_bad_schedule() {
        let g = Lattice::new(4, 4).unwrap();
        let c = Couplings::new(&g, 1.0, 0.9);
        let sched = ThermalSchedule::standard(0);
        assert!(matches!(
            run_ta(&g, &c, &sched, 1, 10),
            Err(Error::InvalidSchedule(_))
        ));
    }

    #[test]
    fn short_fixed_temperature_run_tracks_boltzmann_energy() {
        // Mean energy over a modest run on 3x3 against the exact ensemble.
        let g = Lattice::new(3, 3).unwrap();
        let c = Couplings::new(&g, 1.0, 0.9);
        let t = 1.5;
        let exact = oracle::exact_boltzmann(&g, &c, t).unwrap();
        let exact_e: f64 = exact
            .iter()
            .enumerate()
            .map(|(bits, p)| p * energy(&SpinConfig::from_bits(bits as u64, 9), &c, &g).unwrap())
            .sum();
        let mut s = ThermalState::random(&g, t, 5).unwrap();
        let mut acc = 0.0;
        let sweeps = 200_000;
        for _ in 0..sweeps {
            s.metropolis_sweep(&c, &g);
            acc += energy(&s.config, &c, &g).unwrap();
        }
        let mean = acc / sweeps as f64;
        assert!((mean - exact_e).abs() < 0.05, "{mean} vs {exact_e}");
    }
}
