//! Annealing schedules and the drivers that bind them to the samplers:
//! thermal annealing (TA), uniform-field quantum annealing (QA),
//! random-field quantum annealing (QA-h) and sweeping quantum annealing
//! (SQA-n), which cuts and re-glues the lattice along `n` seams inside every
//! field window.
//!
//! Window values are always `start - k * step`, never accumulated, so the
//! endpoints are hit exactly.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};

use crate::classical_mc;
use crate::error::{Error, Result};
use crate::lattice::{Lattice, Seam};
use crate::model::{Couplings, SpinConfig};
use crate::series::{Recorder, SampleGrid, TimeSeries};
use crate::sse_qmc::SseSampler;
use crate::ChainRng;

/// Residual transverse field, in units of `J`, substituted for a zero field.
pub const RESIDUAL_FIELD: f64 = 1e-3;

/// Upper bound of the per-site initial fields in QA-h.
pub const RANDOM_FIELD_MAX: f64 = 10.0;

/// Number of `step`-sized decrements from `start` to `end`, if it is a whole
/// number.
fn window_count(start: f64, end: f64, step: f64, what: &str) -> Result<usize> {
    if !(step > 0.0) || !step.is_finite() {
        return Err(Error::InvalidSchedule(format!("{what} step must be positive")));
    }
    if !(start >= end) {
        return Err(Error::InvalidSchedule(format!(
            "{what} must decrease: start {start} < end {end}"
        )));
    }
    let k = ((start - end) / step).round();
    if ((start - end) - k * step).abs() > 1e-9 * step.max(1.0) {
        return Err(Error::InvalidSchedule(format!(
            "{what} range {start}..{end} is not a multiple of {step}"
        )));
    }
    Ok(k as usize)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ThermalSchedule {
    pub t_max: f64,
    pub t_min: f64,
    pub dt: f64,
    pub steps_per_window: usize,
}

impl ThermalSchedule {
    /// `T = 5.00 → 0.05` in steps of `0.05`.
    pub fn standard(steps_per_window: usize) -> Self {
        Self {
            t_max: 5.0,
            t_min: 0.05,
            dt: 0.05,
            steps_per_window,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps_per_window == 0 {
            return Err(Error::InvalidSchedule("steps_per_window must be >= 1".into()));
        }
        if !(self.t_min > 0.0) {
            return Err(Error::InvalidSchedule("t_min must be positive".into()));
        }
        window_count(self.t_max, self.t_min, self.dt, "temperature")?;
        Ok(())
    }

    pub fn temperatures(&self) -> Vec<f64> {
        let k = window_count(self.t_max, self.t_min, self.dt, "temperature").unwrap_or(0);
        (0..=k).map(|i| self.t_max - i as f64 * self.dt).collect()
    }

    pub fn total_mcs(&self) -> u64 {
        (self.temperatures().len() * self.steps_per_window) as u64
    }
}

/// Uniform transverse field ramp at fixed temperature.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSchedule {
    pub h_max: f64,
    pub dh: f64,
    pub temperature: f64,
    pub steps_per_window: usize,
}

impl FieldSchedule {
    /// `h = 5.00 → 0.00` in steps of `0.05` at `T = 0.05`.
    pub fn standard(steps_per_window: usize) -> Self {
        Self {
            h_max: 5.0,
            dh: 0.05,
            temperature: 0.05,
            steps_per_window,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.steps_per_window == 0 {
            return Err(Error::InvalidSchedule("steps_per_window must be >= 1".into()));
        }
        if !(self.temperature > 0.0) {
            return Err(Error::InvalidSchedule("temperature must be positive".into()));
        }
        window_count(self.h_max, 0.0, self.dh, "field")?;
        Ok(())
    }

    /// Nominal field of each window, ending at exactly zero.
    pub fn fields(&self) -> Vec<f64> {
        let k = window_count(self.h_max, 0.0, self.dh, "field").unwrap_or(0);
        (0..=k)
            .map(|i| if i == k { 0.0 } else { self.h_max - i as f64 * self.dh })
            .collect()
    }

    pub fn total_mcs(&self) -> u64 {
        (self.fields().len() * self.steps_per_window) as u64
    }
}

/// Site-random fields `h_i(0) ~ U[0, site_max]`, scaled down linearly over the
/// windows of `base`.
#[derive(Debug, Clone, PartialEq)]
pub struct RandomFieldSchedule {
    pub base: FieldSchedule,
    pub site_max: f64,
}

impl RandomFieldSchedule {
    pub fn standard(steps_per_window: usize) -> Self {
        Self {
            base: FieldSchedule::standard(steps_per_window),
            site_max: RANDOM_FIELD_MAX,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if !(self.site_max >= 0.0) {
            return Err(Error::InvalidSchedule("site_max must be non-negative".into()));
        }
        Ok(())
    }

    /// Ramp factor `1 - w / W` of each window.
    pub fn ramp(&self) -> Vec<f64> {
        let last = self.base.fields().len() - 1;
        (0..=last)
            .map(|w| {
                if last == 0 {
                    0.0
                } else {
                    1.0 - w as f64 / last as f64
                }
            })
            .collect()
    }
}

/// Uniform-field ramp with `cuts` seams swept inside every window.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSchedule {
    pub base: FieldSchedule,
    pub cuts: usize,
}

impl SweepSchedule {
    pub fn standard(steps_per_window: usize, cuts: usize) -> Self {
        Self {
            base: FieldSchedule::standard(steps_per_window),
            cuts,
        }
    }

    /// Glue sweeps per seam, `steps_per_window / cuts`.
    pub fn glue_steps(&self) -> usize {
        self.base.steps_per_window / self.cuts.max(1)
    }

    pub fn validate(&self) -> Result<()> {
        self.base.validate()?;
        if self.cuts == 0 {
            return Err(Error::InvalidSchedule("need at least one cut".into()));
        }
        if self.base.steps_per_window < self.cuts {
            return Err(Error::InvalidSchedule(format!(
                "steps_per_window {} is smaller than the cut count {}",
                self.base.steps_per_window, self.cuts
            )));
        }
        Ok(())
    }

    pub fn total_mcs(&self) -> u64 {
        (self.base.fields().len() * self.cuts * self.glue_steps()) as u64
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Ta,
    Qa,
    QaH,
    /// Sweeping annealing with this many seams.
    Sqa(usize),
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Ta => f.write_str("ta"),
            Method::Qa => f.write_str("qa"),
            Method::QaH => f.write_str("qa-h"),
            Method::Sqa(n) => write!(f, "sqa-{n}"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    /// Accepts `ta`, `qa`, `qa-h`, `sqa` (one seam) and `sqa-<n>`.
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ta" => Ok(Method::Ta),
            "qa" => Ok(Method::Qa),
            "qa-h" | "qah" => Ok(Method::QaH),
            "sqa" => Ok(Method::Sqa(1)),
            other => other
                .strip_prefix("sqa-")
                .and_then(|n| n.parse().ok())
                .map(Method::Sqa)
                .ok_or_else(|| Error::Config(format!("unknown method {s:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Schedule {
    Thermal(ThermalSchedule),
    Quantum(FieldSchedule),
    RandomField(RandomFieldSchedule),
    Sweeping(SweepSchedule),
}

impl Schedule {
    /// The standard schedule of `method` with `steps_per_window` sweeps per
    /// window.
    pub fn standard(method: Method, steps_per_window: usize) -> Self {
        match method {
            Method::Ta => Schedule::Thermal(ThermalSchedule::standard(steps_per_window)),
            Method::Qa => Schedule::Quantum(FieldSchedule::standard(steps_per_window)),
            Method::QaH => Schedule::RandomField(RandomFieldSchedule::standard(steps_per_window)),
            Method::Sqa(n) => Schedule::Sweeping(SweepSchedule::standard(steps_per_window, n)),
        }
    }

    pub fn method(&self) -> Method {
        match self {
            Schedule::Thermal(_) => Method::Ta,
            Schedule::Quantum(_) => Method::Qa,
            Schedule::RandomField(_) => Method::QaH,
            Schedule::Sweeping(s) => Method::Sqa(s.cuts),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Schedule::Thermal(s) => s.validate(),
            Schedule::Quantum(s) => s.validate(),
            Schedule::RandomField(s) => s.validate(),
            Schedule::Sweeping(s) => s.validate(),
        }
    }

    pub fn total_mcs(&self) -> u64 {
        match self {
            Schedule::Thermal(s) => s.total_mcs(),
            Schedule::Quantum(s) => s.total_mcs(),
            Schedule::RandomField(s) => s.base.total_mcs(),
            Schedule::Sweeping(s) => s.total_mcs(),
        }
    }

    /// Runs one chain.
    pub fn run(
        &self,
        geom: &Lattice,
        couplings: &Couplings,
        seed: u64,
        points_per_decade: u32,
    ) -> Result<AnnealOutcome> {
        match self {
            Schedule::Thermal(s) => Ok(AnnealOutcome {
                series: classical_mc::run_ta(geom, couplings, s, seed, points_per_decade)?,
                couplings: couplings.clone(),
            }),
            Schedule::Quantum(s) => run_qa(geom, couplings, s, seed, points_per_decade),
            Schedule::RandomField(s) => run_qa_h(geom, couplings, s, seed, points_per_decade),
            Schedule::Sweeping(s) => run_sqa(geom, couplings, s, seed, points_per_decade),
        }
    }
}

/// Result of one annealing chain.
#[derive(Debug, Clone)]
pub struct AnnealOutcome {
    pub series: TimeSeries,
    /// The chain's couplings after the run. Transverse fields are switched off
    /// at the end and every seam has been glued, so this equals the input.
    pub couplings: Couplings,
}

/// Fields applied in one window of a quantum schedule.
enum WindowFields<'a> {
    Uniform(f64),
    Scaled { initial: &'a [f64], factor: f64 },
}

struct QuantumChain<'g> {
    geom: &'g Lattice,
    couplings: Couplings,
    sampler: SseSampler,
    rng: ChainRng,
    beta: f64,
    recorder: Recorder,
    residual: f64,
}

impl<'g> QuantumChain<'g> {
    fn new(
        geom: &'g Lattice,
        couplings: &Couplings,
        temperature: f64,
        seed: u64,
        grid: SampleGrid,
    ) -> Self {
        let mut rng = ChainRng::seed_from_u64(seed);
        let alpha = SpinConfig::random(geom.num_sites(), &mut rng);
        Self {
            geom,
            sampler: SseSampler::new(geom, alpha, 4 * geom.num_sites()),
            recorder: Recorder::new(grid, couplings.bond_values()),
            residual: RESIDUAL_FIELD * couplings.j(),
            couplings: couplings.clone(),
            rng,
            beta: 1.0 / temperature,
        }
    }

    fn set_fields(&mut self, fields: &WindowFields<'_>) {
        match *fields {
            WindowFields::Uniform(h) => self.couplings.set_uniform_field(h.max(self.residual)),
            WindowFields::Scaled { initial, factor } => {
                for (i, h0) in initial.iter().enumerate() {
                    self.couplings.set_field(i, (h0 * factor).max(self.residual));
                }
            }
        }
    }

    #[inline]
    fn sweep(&mut self, window_value: f64) {
        self.sampler.sweep(&self.couplings, self.beta, &mut self.rng);
        // The field and couplings keep changing, so the cutoff follows the
        // operator count throughout the run.
        self.sampler.adjust_cutoff();
        self.recorder
            .observe(self.sampler.mcs, window_value, self.sampler.alpha(), self.geom);
    }

    fn finish(mut self, base: &Couplings) -> AnnealOutcome {
        for (i, &h) in base.fields().iter().enumerate() {
            self.couplings.set_field(i, h);
        }
        AnnealOutcome {
            series: self.recorder.finish(),
            couplings: self.couplings,
        }
    }
}

fn window_ends(windows: usize, per_window: u64) -> Vec<u64> {
    (1..=windows as u64).map(|w| w * per_window).collect()
}

/// Quantum annealing with a uniform transverse field.
pub fn run_qa(
    geom: &Lattice,
    couplings: &Couplings,
    schedule: &FieldSchedule,
    seed: u64,
    points_per_decade: u32,
) -> Result<AnnealOutcome> {
    schedule.validate()?;
    let fields = schedule.fields();
    let steps = schedule.steps_per_window as u64;
    let grid = SampleGrid::new(
        schedule.total_mcs(),
        points_per_decade,
        &window_ends(fields.len(), steps),
    );
    let mut chain = QuantumChain::new(geom, couplings, schedule.temperature, seed, grid);
    for &h in &fields {
        chain.set_fields(&WindowFields::Uniform(h));
        for _ in 0..steps {
            chain.sweep(h);
        }
    }
    Ok(chain.finish(couplings))
}

/// Draws the QA-h initial fields. They come from a stream separate from the
/// sampler's, so the sampling trajectory depends only on `seed`.
pub fn draw_random_fields(n: usize, site_max: f64, seed: u64) -> Vec<f64> {
    let mut rng = ChainRng::seed_from_u64(seed ^ 0x5151_f1e1_d5ee_d000);
    (0..n).map(|_| rng.random::<f64>() * site_max).collect()
}

/// Quantum annealing with site-random initial fields.
pub fn run_qa_h(
    geom: &Lattice,
    couplings: &Couplings,
    schedule: &RandomFieldSchedule,
    seed: u64,
    points_per_decade: u32,
) -> Result<AnnealOutcome> {
    let initial = draw_random_fields(geom.num_sites(), schedule.site_max, seed);
    run_qa_h_with_fields(geom, couplings, schedule, &initial, seed, points_per_decade)
}

/// QA-h with caller-supplied initial fields.
pub fn run_qa_h_with_fields(
    geom: &Lattice,
    couplings: &Couplings,
    schedule: &RandomFieldSchedule,
    initial: &[f64],
    seed: u64,
    points_per_decade: u32,
) -> Result<AnnealOutcome> {
    schedule.validate()?;
    if initial.len() != geom.num_sites() || initial.iter().any(|h| !(*h >= 0.0)) {
        return Err(Error::InvalidSchedule(
            "need one non-negative initial field per site".into(),
        ));
    }
    let ramp = schedule.ramp();
    let steps = schedule.base.steps_per_window as u64;
    let grid = SampleGrid::new(
        schedule.base.total_mcs(),
        points_per_decade,
        &window_ends(ramp.len(), steps),
    );
    let mut chain = QuantumChain::new(geom, couplings, schedule.base.temperature, seed, grid);
    for &factor in &ramp {
        chain.set_fields(&WindowFields::Scaled { initial, factor });
        let nominal = factor * schedule.site_max;
        for _ in 0..steps {
            chain.sweep(nominal);
        }
    }
    Ok(chain.finish(couplings))
}

/// Opens `seam` on `couplings`.
pub fn apply_cut(couplings: &mut Couplings, seam: &Seam) -> Result<()> {
    couplings.apply_cut(seam)
}

/// One step of the linear re-gluing ramp.
pub fn glue_step(couplings: &mut Couplings, seam: &Seam, ns: usize, step: usize) -> Result<()> {
    couplings.glue_step(seam, ns, step)
}

/// Sweeping quantum annealing.
///
/// For every field window, the seams are visited left to right. Each seam is
/// cut, then re-glued over `ns = steps_per_window / n` sweeps, with one sweep
/// before every glue step.
pub fn run_sqa(
    geom: &Lattice,
    couplings: &Couplings,
    schedule: &SweepSchedule,
    seed: u64,
    points_per_decade: u32,
) -> Result<AnnealOutcome> {
    schedule.validate()?;
    let seams = geom.make_seams(schedule.cuts)?;
    let fields = schedule.base.fields();
    let ns = schedule.glue_steps();
    let grid = SampleGrid::new(
        schedule.total_mcs(),
        points_per_decade,
        &window_ends(fields.len(), (ns * seams.len()) as u64),
    );
    let mut chain = QuantumChain::new(geom, couplings, schedule.base.temperature, seed, grid);
    for &h in &fields {
        chain.set_fields(&WindowFields::Uniform(h));
        for seam in &seams {
            chain.couplings.apply_cut(seam)?;
            for step in 1..=ns {
                chain.sweep(h);
                chain.couplings.glue_step(seam, ns, step)?;
            }
        }
    }
    Ok(chain.finish(couplings))
}
