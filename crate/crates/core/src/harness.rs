//! Experiment harness: configuration, parallel chain execution, CSV output and
//! the oracle-backed self-checks behind the `run`, `verify` and `enumerate`
//! subcommands.
//!
//! Configuration is a flat `key = value` file (`#` starts a comment) with
//! command-line overrides applied on top. Output goes to
//!
//! * `chains/chain_KKKK.csv` — `method,chain,mcs,window_value,energy,spinons,sector`
//! * `aggregate.csv` — `mcs,mean_energy,stderr_energy,p_sector_0,...,p_undefined`
//!   (the `stderr_energy` column is left out for a single chain)
//! * `manifest.txt` — the resolved spec, seeds, budget, version and timing.

use std::fmt::{self, Write as _};
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::{Instant, SystemTime, UNIX_EPOCH};

use rayon::prelude::*;

use crate::anneal::{
    FieldSchedule, Method, RandomFieldSchedule, Schedule, SweepSchedule, ThermalSchedule,
};
use crate::classical_mc;
use crate::error::{Error, Result};
use crate::lattice::Lattice;
use crate::model::{energy, stripe_config, stripe_energy, Couplings};
use crate::oracle;
use crate::series::TimeSeries;
use crate::sse_qmc;
use crate::stats::{mean_stderr, total_variation};
use crate::topology::SectorLabel;

/// Environment variable that overrides the output directory of a config file.
pub const OUT_DIR_ENV: &str = "FRUSTRATED_ANNEAL_OUT";

/// Per-chain seed: SplitMix64 finalizer applied to the base seed advanced by
/// `k + 1` golden-ratio increments, so neighbouring chains get unrelated
/// streams.
pub fn chain_seed(base: u64, k: u64) -> u64 {
    let mut z = base.wrapping_add((k + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Everything needed to reproduce an experiment.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    pub lx: usize,
    pub ly: usize,
    pub j: f64,
    pub jx: f64,
    pub method: Method,
    /// Seam count for sweeping annealing; overrides the `n` of `sqa-n`.
    pub n_cuts: Option<usize>,
    pub chains: usize,
    pub steps_per_window: usize,
    pub seed: u64,
    pub out: PathBuf,
    pub points_per_decade: u32,
    /// Worker threads; `None` uses the available hardware threads.
    pub threads: Option<usize>,
    pub t_max: f64,
    pub t_min: f64,
    pub dt: f64,
    pub h_max: f64,
    pub dh: f64,
    pub temperature: f64,
    pub site_max: f64,
    /// Test hook for `verify`: adds 0.5 to this bond before the checks.
    pub verify_corrupt_bond: Option<usize>,
    /// Flip attempts of the `verify` stationarity check.
    pub verify_attempts: u64,
    /// Measured sweeps of the `verify` SSE check.
    pub verify_sweeps: u64,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        Self {
            lx: 6,
            ly: 6,
            j: 1.0,
            jx: 0.9,
            method: Method::Qa,
            n_cuts: None,
            chains: 64,
            steps_per_window: 100,
            seed: 1,
            out: PathBuf::from("results"),
            points_per_decade: 50,
            threads: None,
            t_max: 5.0,
            t_min: 0.05,
            dt: 0.05,
            h_max: 5.0,
            dh: 0.05,
            temperature: 0.05,
            site_max: crate::anneal::RANDOM_FIELD_MAX,
            verify_corrupt_bond: None,
            verify_attempts: 100_000_000,
            verify_sweeps: 200_000,
        }
    }
}

fn parse<T: std::str::FromStr>(key: &str, value: &str) -> Result<T> {
    value
        .parse()
        .map_err(|_| Error::Config(format!("invalid value {value:?} for {key}")))
}

impl ExperimentSpec {
    /// Parses a `key = value` document on top of the defaults.
    pub fn from_config_str(text: &str) -> Result<Self> {
        let mut spec = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::Config(format!("line {}: expected key = value, got {raw:?}", lineno + 1))
            })?;
            spec.set(key.trim(), value.trim())?;
        }
        Ok(spec)
    }

    /// Reads a config file; the output directory may then be overridden by
    /// [`OUT_DIR_ENV`].
    pub fn from_file(path: &Path) -> Result<Self> {
        let mut spec = Self::from_config_str(&fs::read_to_string(path)?)?;
        spec.apply_env();
        Ok(spec)
    }

    /// Applies the [`OUT_DIR_ENV`] override, if set.
    pub fn apply_env(&mut self) {
        if let Some(dir) = std::env::var_os(OUT_DIR_ENV).filter(|d| !d.is_empty()) {
            self.out = PathBuf::from(dir);
        }
    }

    /// Sets one configuration key. Dashes and underscores are interchangeable.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let opt = |v: &str| -> Result<Option<usize>> {
            match v {
                "" | "none" | "auto" => Ok(None),
                v => parse(key, v).map(Some),
            }
        };
        match key.replace('-', "_").as_str() {
            "lx" => self.lx = parse(key, value)?,
            "ly" => self.ly = parse(key, value)?,
            "j" => self.j = parse(key, value)?,
            "jx" => self.jx = parse(key, value)?,
            "method" => self.method = value.parse()?,
            "n_cuts" => self.n_cuts = opt(value)?,
            "chains" => self.chains = parse(key, value)?,
            "steps_per_window" => self.steps_per_window = parse(key, value)?,
            "seed" => self.seed = parse(key, value)?,
            "out" => self.out = PathBuf::from(value),
            "points_per_decade" => self.points_per_decade = parse(key, value)?,
            "threads" => self.threads = opt(value)?,
            "t_max" => self.t_max = parse(key, value)?,
            "t_min" => self.t_min = parse(key, value)?,
            "dt" => self.dt = parse(key, value)?,
            "h_max" => self.h_max = parse(key, value)?,
            "dh" => self.dh = parse(key, value)?,
            "temperature" => self.temperature = parse(key, value)?,
            "site_max" => self.site_max = parse(key, value)?,
            "verify_corrupt_bond" => self.verify_corrupt_bond = opt(value)?,
            "verify_attempts" => self.verify_attempts = parse(key, value)?,
            "verify_sweeps" => self.verify_sweeps = parse(key, value)?,
            other => return Err(Error::Config(format!("unknown key {other:?}"))),
        }
        Ok(())
    }

    /// The method with the seam count resolved.
    pub fn resolved_method(&self) -> Method {
        match (self.method, self.n_cuts) {
            (Method::Sqa(_), Some(n)) => Method::Sqa(n),
            (m, _) => m,
        }
    }

    pub fn lattice(&self) -> Result<Lattice> {
        Lattice::new(self.lx, self.ly)
    }

    pub fn couplings(&self, geom: &Lattice) -> Couplings {
        Couplings::new(geom, self.j, self.jx)
    }

    pub fn schedule(&self) -> Schedule {
        let field = FieldSchedule {
            h_max: self.h_max,
            dh: self.dh,
            temperature: self.temperature,
            steps_per_window: self.steps_per_window,
        };
        match self.resolved_method() {
            Method::Ta => Schedule::Thermal(ThermalSchedule {
                t_max: self.t_max,
                t_min: self.t_min,
                dt: self.dt,
                steps_per_window: self.steps_per_window,
            }),
            Method::Qa => Schedule::Quantum(field),
            Method::QaH => Schedule::RandomField(RandomFieldSchedule {
                base: field,
                site_max: self.site_max,
            }),
            Method::Sqa(cuts) => Schedule::Sweeping(SweepSchedule { base: field, cuts }),
        }
    }

    /// Checks everything that can be checked before any compute starts.
    pub fn validate(&self) -> Result<()> {
        if self.chains == 0 {
            return Err(Error::Config("chains must be >= 1".into()));
        }
        if self.threads == Some(0) {
            return Err(Error::Config("threads must be >= 1".into()));
        }
        if !(self.j.is_finite() && self.jx.is_finite()) {
            return Err(Error::Config("couplings must be finite".into()));
        }
        let geom = self.lattice()?;
        let schedule = self.schedule();
        schedule.validate()?;
        if let Method::Sqa(n) = schedule.method() {
            geom.make_seams(n)?;
        }
        Ok(())
    }

    /// Every setting as `key = value` lines, in a form [`Self::from_config_str`]
    /// reads back.
    pub fn to_config_string(&self) -> String {
        let opt = |v: Option<usize>| v.map_or("none".to_string(), |n| n.to_string());
        let mut s = String::new();
        let mut kv = |k: &str, v: String| {
            let _ = writeln!(s, "{k} = {v}");
        };
        kv("method", self.method.to_string());
        kv("n_cuts", opt(self.n_cuts));
        kv("lx", self.lx.to_string());
        kv("ly", self.ly.to_string());
        kv("j", self.j.to_string());
        kv("jx", self.jx.to_string());
        kv("chains", self.chains.to_string());
        kv("steps_per_window", self.steps_per_window.to_string());
        kv("seed", self.seed.to_string());
        kv("out", self.out.display().to_string());
        kv("points_per_decade", self.points_per_decade.to_string());
        kv("threads", opt(self.threads));
        kv("t_max", self.t_max.to_string());
        kv("t_min", self.t_min.to_string());
        kv("dt", self.dt.to_string());
        kv("h_max", self.h_max.to_string());
        kv("dh", self.dh.to_string());
        kv("temperature", self.temperature.to_string());
        kv("site_max", self.site_max.to_string());
        kv("verify_corrupt_bond", opt(self.verify_corrupt_bond));
        kv("verify_attempts", self.verify_attempts.to_string());
        kv("verify_sweeps", self.verify_sweeps.to_string());
        s
    }
}

/// One finished chain.
#[derive(Debug, Clone)]
pub struct ChainResult {
    pub chain: usize,
    pub seed: u64,
    pub series: TimeSeries,
    /// Couplings at the end of the run (equal to the base couplings).
    pub couplings: Couplings,
}

/// Per-sample-index statistics across chains.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateRow {
    pub mcs: u64,
    pub mean_energy: f64,
    pub stderr_energy: f64,
    /// Proportion of chains with `N_D = 2k` at index `k`.
    pub p_sector: Vec<f64>,
    pub p_undefined: f64,
}

/// All chains of an experiment and their aggregate.
#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub spec: ExperimentSpec,
    pub method: Method,
    pub total_mcs: u64,
    pub chains: Vec<ChainResult>,
    pub aggregate: Vec<AggregateRow>,
    pub wall_clock_seconds: f64,
}

impl ExperimentResult {
    pub fn final_energies(&self) -> Vec<f64> {
        self.chains
            .iter()
            .filter_map(|c| c.series.final_energy())
            .collect()
    }

    pub fn final_sectors(&self) -> Vec<SectorLabel> {
        self.chains
            .iter()
            .filter_map(|c| c.series.final_sector())
            .collect()
    }
}

/// Runs all chains (in parallel) and aggregates them, without touching disk.
pub fn run_chains(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    let geom = spec.lattice()?;
    let base = spec.couplings(&geom);
    let schedule = spec.schedule();
    let threads = spec
        .threads
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .min(spec.chains)
        .max(1);
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;

    let started = Instant::now();
    let chains: Vec<ChainResult> = pool.install(|| {
        (0..spec.chains)
            .into_par_iter()
            .map(|k| {
                let seed = chain_seed(spec.seed, k as u64);
                let outcome = schedule.run(&geom, &base, seed, spec.points_per_decade)?;
                Ok(ChainResult {
                    chain: k,
                    seed,
                    series: outcome.series,
                    couplings: outcome.couplings,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;
    let aggregate = aggregate(&chains, spec.lx);
    Ok(ExperimentResult {
        spec: spec.clone(),
        method: schedule.method(),
        total_mcs: schedule.total_mcs(),
        chains,
        aggregate,
        wall_clock_seconds: started.elapsed().as_secs_f64(),
    })
}

/// Mean energy, its standard error and sector proportions at every sample
/// index. Chains share the sampling grid, so index `i` is the same MCS in
/// every chain. Sector columns run over `N_D = 0, 2, …, lx`.
pub fn aggregate(chains: &[ChainResult], lx: usize) -> Vec<AggregateRow> {
    let len = chains.iter().map(|c| c.series.len()).min().unwrap_or(0);
    let n = chains.len() as f64;
    (0..len)
        .map(|i| {
            let energies: Vec<f64> = chains.iter().map(|c| c.series.samples[i].energy).collect();
            let (mean_energy, stderr_energy) = mean_stderr(&energies);
            let mut p_sector = vec![0.0; lx / 2 + 1];
            let mut p_undefined = 0.0;
            for c in chains {
                match c.series.samples[i].sector {
                    SectorLabel::Defined(d) => p_sector[d as usize / 2] += 1.0 / n,
                    SectorLabel::Undefined(_) => p_undefined += 1.0 / n,
                }
            }
            AggregateRow {
                mcs: chains[0].series.samples[i].mcs,
                mean_energy,
                stderr_energy,
                p_sector,
                p_undefined,
            }
        })
        .collect()
}

/// Per-chain CSV text.
pub fn chain_csv(method: Method, chain: &ChainResult) -> String {
    let mut s = String::from("method,chain,mcs,window_value,energy,spinons,sector\n");
    for r in &chain.series.samples {
        let _ = writeln!(
            s,
            "{method},{},{},{},{},{},{}",
            chain.chain, r.mcs, r.window_value, r.energy, r.spinons, r.sector
        );
    }
    s
}

/// Aggregate CSV text; the standard-error column is omitted for one chain.
pub fn aggregate_csv(rows: &[AggregateRow], lx: usize, chains: usize) -> String {
    let with_err = chains > 1;
    let mut s = String::from("mcs,mean_energy");
    if with_err {
        s.push_str(",stderr_energy");
    }
    for d in (0..=lx).step_by(2) {
        let _ = write!(s, ",p_sector_{d}");
    }
    s.push_str(",p_undefined\n");
    for r in rows {
        let _ = write!(s, "{},{}", r.mcs, r.mean_energy);
        if with_err {
            let _ = write!(s, ",{}", r.stderr_energy);
        }
        for p in &r.p_sector {
            let _ = write!(s, ",{p}");
        }
        let _ = writeln!(s, ",{}", r.p_undefined);
    }
    s
}

fn manifest(result: &ExperimentResult) -> String {
    let spec = &result.spec;
    let mut s = String::from("# frustrated-anneal experiment manifest\n");
    s.push_str(&spec.to_config_string());
    let _ = writeln!(s, "resolved_method = {}", result.method);
    let _ = writeln!(s, "total_mcs = {}", result.total_mcs);
    let _ = writeln!(s, "code_version = {} {}", env!("CARGO_PKG_NAME"), env!("CARGO_PKG_VERSION"));
    let started = SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map_or(0.0, |d| d.as_secs_f64())
        - result.wall_clock_seconds;
    let _ = writeln!(s, "started_unix = {started:.3}");
    let _ = writeln!(s, "wall_clock_seconds = {:.3}", result.wall_clock_seconds);
    let seeds: Vec<String> = result.chains.iter().map(|c| c.seed.to_string()).collect();
    let _ = writeln!(s, "chain_seeds = {}", seeds.join(","));
    s
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(contents.as_bytes())?;
    Ok(())
}

/// Writes the per-chain CSVs, the aggregate and the manifest under
/// `result.spec.out`.
pub fn write_outputs(result: &ExperimentResult) -> Result<()> {
    let out = &result.spec.out;
    let chain_dir = out.join("chains");
    fs::create_dir_all(&chain_dir)?;
    for c in &result.chains {
        write_file(
            &chain_dir.join(format!("chain_{:04}.csv", c.chain)),
            &chain_csv(result.method, c),
        )?;
    }
    write_file(
        &out.join("aggregate.csv"),
        &aggregate_csv(&result.aggregate, result.spec.lx, result.chains.len()),
    )?;
    write_file(&out.join("manifest.txt"), &manifest(result))?;
    Ok(())
}

/// Validates the spec, runs every chain and writes all outputs.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ExperimentResult> {
    spec.validate()?;
    fs::create_dir_all(&spec.out)?;
    let result = run_chains(spec)?;
    write_outputs(&result)?;
    Ok(result)
}

/// Outcome of one self-check.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckResult {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct VerifyReport {
    pub checks: Vec<CheckResult>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    fn push(&mut self, name: &str, passed: bool, detail: String) {
        self.checks.push(CheckResult {
            name: name.to_string(),
            passed,
            detail,
        });
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.detail
            )?;
        }
        write!(
            f,
            "{}/{} checks passed",
            self.checks.iter().filter(|c| c.passed).count(),
            self.checks.len()
        )
    }
}

/// Couplings for the verify checks, with the corruption hook applied.
fn verify_couplings(spec: &ExperimentSpec, geom: &Lattice) -> Couplings {
    let mut c = spec.couplings(geom);
    if let Some(b) = spec.verify_corrupt_bond {
        if b < geom.bonds().len() {
            c.set_override(b, c.bond(b) + 0.5);
        }
    }
    c
}

/// Oracle-backed self-checks sized to the spec:
///
/// * stripe identity `E(stripe) = N (J_x - 2J)` on the spec lattice (or 6×6
///   when it has an odd number of rows);
/// * Metropolis stationarity at `T = 2` on the spec lattice if it has at most
///   16 sites, otherwise on 4×4 — total variation of the Rao–Blackwellised
///   estimate below 0.01 after `verify_attempts` attempts;
/// * SSE against exact diagonalisation at `h = 1.5`, `T = 1` on the spec
///   lattice if it has at most 12 sites, otherwise on 3×4 — within 4 standard
///   errors.
///
/// Failures are report entries, never errors; only an invalid spec errors.
pub fn verify(spec: &ExperimentSpec) -> Result<VerifyReport> {
    let mut report = VerifyReport::default();

    let geom = if spec.ly % 2 == 0 {
        spec.lattice()?
    } else {
        Lattice::new(6, 6)?
    };
    let couplings = verify_couplings(spec, &geom);
    let measured = energy(&stripe_config(&geom)?, &couplings, &geom)?;
    let expected = stripe_energy(&geom, spec.j, spec.jx);
    report.push(
        "stripe_identity",
        (measured - expected).abs() <= 1e-9 * expected.abs().max(1.0),
        format!(
            "{}x{} stripe energy {measured:.6}, expected {expected:.6}",
            geom.lx(),
            geom.ly()
        ),
    );

    let small = |max: usize, fallback: (usize, usize)| -> Result<Lattice> {
        if spec.lx * spec.ly <= max {
            spec.lattice()
        } else {
            Lattice::new(fallback.0, fallback.1)
        }
    };

    let geom = small(oracle::MAX_BOLTZMANN_SITES, (4, 4))?;
    let couplings = verify_couplings(spec, &geom);
    let temperature = 2.0;
    let exact = oracle::exact_boltzmann(&geom, &couplings, temperature)?;
    let burn_in = 1_000_000;
    let sampled = classical_mc::stationary_estimate(
        &geom,
        &couplings,
        temperature,
        burn_in,
        spec.verify_attempts,
        chain_seed(spec.seed, 0),
    )?;
    let tv = total_variation(&sampled.rao_blackwell, &exact);
    let tv_raw = total_variation(&sampled.occupancy, &exact);
    report.push(
        "metropolis_stationarity",
        tv < 0.01,
        format!(
            "{}x{} T={temperature}: total variation {tv:.5} (raw occupancy {tv_raw:.5}) over {} attempts (limit 0.01)",
            geom.lx(),
            geom.ly(),
            spec.verify_attempts
        ),
    );

    let geom = small(oracle::MAX_QUANTUM_SITES, (3, 4))?;
    let mut couplings = verify_couplings(spec, &geom);
    let (h, temperature) = (1.5, 1.0);
    couplings.set_uniform_field(h);
    let exact = oracle::exact_quantum_energy(&geom, &couplings, temperature)?;
    let est = sse_qmc::measure_energy(
        &geom,
        &couplings,
        temperature,
        10_000,
        spec.verify_sweeps,
        (spec.verify_sweeps / 40).max(1) as usize,
        chain_seed(spec.seed, 1),
    )?;
    let diff = (est.mean - exact).abs();
    report.push(
        "sse_vs_exact",
        diff < 4.0 * est.stderr && est.stderr > 0.0,
        format!(
            "{}x{} h={h} T={temperature}: SSE {:.5} ± {:.5}, exact {exact:.5}",
            geom.lx(),
            geom.ly(),
            est.mean,
            est.stderr
        ),
    );
    Ok(report)
}

/// Text report of an exhaustive classical enumeration.
pub fn enumerate_report(lx: usize, ly: usize, j: f64, jx: f64) -> Result<String> {
    let geom = Lattice::new(lx, ly)?;
    let couplings = Couplings::new(&geom, j, jx);
    let r = oracle::enumerate_classical(&geom, &couplings)?;
    let mut s = String::new();
    let _ = writeln!(s, "lattice = {lx}x{ly}");
    let _ = writeln!(s, "j = {j}");
    let _ = writeln!(s, "jx = {jx}");
    let _ = writeln!(s, "ground_energy = {}", r.ground_energy);
    let _ = writeln!(s, "degeneracy = {}", r.degeneracy);
    for (label, count) in &r.sector_counts {
        let _ = writeln!(s, "sector_count[{label}] = {count}");
    }
    if let Some(states) = &r.ground_states {
        for bits in states {
            let cfg = oracle::config_from_bits(&geom, *bits);
            let _ = writeln!(s, "ground_state bits={bits:#x}");
            for row in geom.rows().collect::<Vec<_>>().iter().rev() {
                let line: String = row
                    .iter()
                    .map(|&site| if cfg[site] > 0 { '+' } else { '-' })
                    .collect();
                let _ = writeln!(s, "  {line}");
            }
        }
    }
    Ok(s)
}
