//! Acceptance suite: one PASS/FAIL line per primary criterion.
//!
//! The oracle-backed criteria always run. The three annealing criteria (QA
//! plateau, method ordering, SQA-n monotonicity) need 64 chains of at least
//! 10^6 MCS for each of QA, TA, SQA-1, SQA-2, SQA-3 and SQA-6, roughly 50
//! CPU-hours on one core, and only run when `FA_ACCEPTANCE_HEAVY=1`.
//! Otherwise they print `NOT RUN`. `FA_ACCEPTANCE_MCS` and
//! `FA_ACCEPTANCE_CHAINS` lower the budget for exploratory runs. Results at a
//! reduced budget print as `PASS*`/`FAIL*` and never count as satisfying a
//! criterion.
//!
//! The process exits nonzero if any executed criterion fails.

use std::collections::BTreeMap;
use std::process::ExitCode;
use std::time::Instant;

use frustrated_anneal::anneal::{Method, Schedule, SweepSchedule};
use frustrated_anneal::classical_mc::{flip_transition_probability, stationary_estimate};
use frustrated_anneal::harness::{self, chain_seed, ExperimentResult, ExperimentSpec};
use frustrated_anneal::model::{energy, stripe_config, triangle_violations};
use frustrated_anneal::oracle::{
    config_from_bits, enumerate_classical, exact_boltzmann, exact_quantum_energy,
};
use frustrated_anneal::sse_qmc::measure_energy;
use frustrated_anneal::stats::{mean_stderr, total_variation};
use frustrated_anneal::topology::{dimer_mapping, row_dw_count, sector_label};
use frustrated_anneal::{ChainRng, Couplings, Lattice, SectorLabel, SpinConfig};
use rand::SeedableRng;

const E_GROUND_6X6: f64 = -39.6;
const ACCEPTANCE_MCS: u64 = 1_000_000;
const ACCEPTANCE_CHAINS: usize = 64;

#[derive(Default)]
struct Tally {
    passed: usize,
    failed: usize,
    reduced: usize,
    not_run: usize,
}

impl Tally {
    fn report(&mut self, name: &str, ok: bool, detail: String) {
        if ok {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        println!("{} {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    }

    /// A verdict obtained below the acceptance budget: shown, never counted.
    fn report_reduced(&mut self, name: &str, ok: bool, detail: String) {
        self.reduced += 1;
        println!(
            "{} {name}: {detail} [reduced budget, not an acceptance result]",
            if ok { "PASS*" } else { "FAIL*" }
        );
    }

    fn not_run(&mut self, name: &str, why: &str) {
        self.not_run += 1;
        println!("NOT RUN {name}: {why}");
    }
}

fn paper_model(lx: usize, ly: usize) -> (Lattice, Couplings) {
    let g = Lattice::new(lx, ly).unwrap();
    let c = Couplings::new(&g, 1.0, 0.9);
    (g, c)
}

fn stripe_identity(t: &mut Tally) {
    let (g, c) = paper_model(6, 6);
    let e = energy(&stripe_config(&g).unwrap(), &c, &g).unwrap();
    t.report(
        "stripe_identity",
        (e - E_GROUND_6X6).abs() < 1e-12,
        format!("E(stripe, 6x6) = {e}"),
    );
}

fn enumeration_6x4(t: &mut Tally) {
    let (g, c) = paper_model(6, 4);
    let start = Instant::now();
    let r = enumerate_classical(&g, &c).unwrap();
    let stripe = stripe_config(&g).unwrap();
    let mut expected = vec![stripe.to_bits(), stripe.reversed().to_bits()];
    expected.sort_unstable();
    let mut found = r.ground_states.clone().unwrap_or_default();
    found.sort_unstable();
    t.report(
        "oracle_enumeration_6x4",
        (r.ground_energy + 26.4).abs() < 1e-9 && r.degeneracy == 2 && found == expected,
        format!(
            "ground {:.6}, degeneracy {}, argmin = both stripes: {} ({:.1}s)",
            r.ground_energy,
            r.degeneracy,
            found == expected,
            start.elapsed().as_secs_f64()
        ),
    );
}

fn metropolis_stationarity(t: &mut Tally) {
    let (g, c) = paper_model(4, 4);
    let temperature = 2.0;
    let exact = exact_boltzmann(&g, &c, temperature).unwrap();
    let est = stationary_estimate(&g, &c, temperature, 1_000_000, 100_000_000, 2024).unwrap();
    let tv = total_variation(&est.rao_blackwell, &exact);
    let tv_raw = total_variation(&est.occupancy, &exact);
    t.report(
        "metropolis_stationarity",
        tv < 0.01,
        format!(
            "4x4 T=2, 1e8 attempts after 1e6 burn-in: TV = {tv:.5} (Rao-Blackwellised; raw occupancy {tv_raw:.5})"
        ),
    );
}

fn detailed_balance(t: &mut Tally) {
    let (g, c) = paper_model(3, 3);
    let n = g.num_sites();
    let mut worst: f64 = 0.0;
    for temperature in [0.5, 1.0, 2.0, 5.0] {
        let pi = exact_boltzmann(&g, &c, temperature).unwrap();
        for bits in 0..1u64 << n {
            let from = config_from_bits(&g, bits);
            for site in 0..n {
                let to_bits = bits ^ 1 << site;
                let to = config_from_bits(&g, to_bits);
                let fwd = pi[bits as usize] * flip_transition_probability(&from, site, &c, &g, temperature);
                let bwd = pi[to_bits as usize] * flip_transition_probability(&to, site, &c, &g, temperature);
                worst = worst.max((fwd - bwd).abs() / fwd.max(bwd));
            }
        }
    }
    t.report(
        "detailed_balance_exact",
        worst <= 1e-12,
        format!("3x3, all single-flip pairs at T in {{0.5,1,2,5}}: max relative violation {worst:.2e}"),
    );
}

fn sse_correctness(t: &mut Tally) {
    let g = Lattice::new(3, 4).unwrap();
    let mut all = true;
    let mut parts = Vec::new();
    let mut seed = 100;
    // Sweeps per point, sized from measured autocorrelation: at (h=0.5, T=0.5)
    // the frustrated cluster dynamics has τ ≈ 1e5 sweeps. Forty bins per
    // point keep every bin much longer than τ, so the error bar is honest.
    let budget = |h: f64, t: f64| -> u64 {
        match (h, t) {
            (0.5, 0.5) => 60_000_000,
            (0.5, _) => 12_000_000,
            _ => 8_000_000,
        }
    };
    for h in [0.5, 1.5, 3.0] {
        for temperature in [0.5, 1.0] {
            let mut c = Couplings::new(&g, 1.0, 0.9);
            c.set_uniform_field(h);
            let exact = exact_quantum_energy(&g, &c, temperature).unwrap();
            seed += 1;
            let sweeps = budget(h, temperature);
            let est = measure_energy(&g, &c, temperature, 1_000_000, sweeps, (sweeps / 40) as usize, seed).unwrap();
            let ok = est.stderr <= 0.01 && (est.mean - exact).abs() < 3.0 * est.stderr;
            all &= ok;
            parts.push(format!(
                "(h={h},T={temperature}) {:+.4}±{:.4} vs {exact:+.4}",
                est.mean, est.stderr
            ));
        }
    }
    t.report("sse_vs_exact_3x4", all, parts.join("; "));
}

fn topology_invariants(t: &mut Tally) {
    let g = Lattice::new(4, 4).unwrap();
    let (mut parity, mut matching, mut rows, mut flips) = (true, true, true, true);
    for bits in 0..1u64 << 16 {
        let cfg = config_from_bits(&g, bits);
        let counts: Vec<usize> = (0..4).map(|y| row_dw_count(&cfg, y, &g)).collect();
        parity &= counts.iter().all(|c| c % 2 == 0);
        let satisfied = triangle_violations(&cfg, &g).unwrap() == 0;
        matching &= satisfied == dimer_mapping(&cfg, &g).is_perfect_matching();
        if satisfied {
            rows &= counts.iter().all(|&c| c == counts[0]);
        }
        if let SectorLabel::Defined(d) = sector_label(&cfg, &g) {
            for site in 0..16 {
                let mut next = cfg.clone();
                next.flip(site);
                if let SectorLabel::Defined(e) = sector_label(&next, &g) {
                    flips &= d == e;
                }
            }
        }
    }
    t.report(
        "topology_invariants_4x4",
        parity && matching && rows && flips,
        format!(
            "row parity even: {parity}; constraint <=> perfect matching: {matching}; rows agree: {rows}; no single flip between defined sectors: {flips}"
        ),
    );
}

fn coupling_restoration(t: &mut Tally) {
    let (g, base) = paper_model(6, 6);
    let mut ok = true;
    let mut mismatches = 0;
    for cuts in [1, 2, 3, 6] {
        let schedule = Schedule::Sweeping(SweepSchedule::standard(2 * cuts, cuts));
        let out = schedule.run(&g, &base, 77 + cuts as u64, 5).unwrap();
        ok &= out.couplings == base && out.couplings.bond_values() == base.bond_values();
        let mut rng = ChainRng::seed_from_u64(cuts as u64);
        for _ in 0..100 {
            let cfg = SpinConfig::random(g.num_sites(), &mut rng);
            let after = energy(&cfg, &out.couplings, &g).unwrap();
            let pristine = energy(&cfg, &base, &g).unwrap();
            if after.to_bits() != pristine.to_bits() {
                mismatches += 1;
            }
        }
    }
    t.report(
        "coupling_restoration",
        ok && mismatches == 0,
        format!(
            "SQA-1/2/3/6 final couplings equal base: {ok}; 400 random-config energy mismatches: {mismatches}"
        ),
    );
}

/// Smallest `steps_per_window` (a multiple of the seam count) reaching
/// `budget` total MCS.
fn steps_for(method: Method, budget: u64) -> usize {
    let (windows, unit) = match method {
        Method::Ta => (100u64, 1u64),
        Method::Sqa(n) => (101, n as u64),
        _ => (101, 1),
    };
    (budget.div_ceil(windows * unit) * unit) as usize
}

struct MethodStats {
    mean: f64,
    stderr: f64,
    ground: f64,
    sectors: BTreeMap<String, usize>,
    mcs: u64,
}

impl MethodStats {
    fn from(r: &ExperimentResult) -> Self {
        let de: Vec<f64> = r.final_energies().iter().map(|e| e - E_GROUND_6X6).collect();
        let (mean, stderr) = mean_stderr(&de);
        let ground = de.iter().filter(|d| d.abs() < 1e-9).count() as f64 / de.len() as f64;
        let mut sectors = BTreeMap::new();
        for s in r.final_sectors() {
            *sectors.entry(s.to_string()).or_insert(0) += 1;
        }
        Self {
            mean,
            stderr,
            ground,
            sectors,
            mcs: r.total_mcs,
        }
    }

    fn modal_sector(&self) -> String {
        self.sectors
            .iter()
            .max_by_key(|(_, &n)| n)
            .map(|(s, _)| s.clone())
            .unwrap_or_default()
    }

    fn summary(&self) -> String {
        format!(
            "dE={:.3}±{:.3}, P(ground)={:.3}, sectors {:?}, {} MCS",
            self.mean, self.stderr, self.ground, self.sectors, self.mcs
        )
    }
}

fn combined(a: &MethodStats, b: &MethodStats) -> f64 {
    (a.stderr.powi(2) + b.stderr.powi(2)).sqrt()
}

fn env_or<T: std::str::FromStr>(key: &str, default: T) -> T {
    std::env::var(key)
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(default)
}

fn heavy_criteria(t: &mut Tally) {
    let names = ["qa_plateau", "method_ordering", "sqa_n_monotonicity"];
    if std::env::var("FA_ACCEPTANCE_HEAVY").as_deref() != Ok("1") {
        for name in names {
            t.not_run(
                name,
                "needs 64 chains x >=1e6 MCS for QA, TA, SQA-1/2/3/6 (~50 CPU-hours on one core); set FA_ACCEPTANCE_HEAVY=1",
            );
        }
        return;
    }
    let budget: u64 = env_or("FA_ACCEPTANCE_MCS", ACCEPTANCE_MCS);
    let chains: usize = env_or("FA_ACCEPTANCE_CHAINS", ACCEPTANCE_CHAINS);
    let full = budget >= ACCEPTANCE_MCS && chains >= ACCEPTANCE_CHAINS;
    let seed: u64 = env_or("FA_ACCEPTANCE_SEED", 20_240_601);

    let mut stats = BTreeMap::new();
    for method in [
        Method::Ta,
        Method::Qa,
        Method::Sqa(1),
        Method::Sqa(2),
        Method::Sqa(3),
        Method::Sqa(6),
    ] {
        let spec = ExperimentSpec {
            method,
            chains,
            steps_per_window: steps_for(method, budget),
            seed: chain_seed(seed, method_tag(method)),
            ..Default::default()
        };
        let start = Instant::now();
        let r = harness::run_chains(&spec).expect("valid acceptance spec");
        let s = MethodStats::from(&r);
        println!(
            "  {method}: {} ({:.0}s)",
            s.summary(),
            start.elapsed().as_secs_f64()
        );
        stats.insert(method.to_string(), s);
    }
    let mut emit = |name: &str, ok: bool, detail: String| {
        if full {
            t.report(name, ok, detail)
        } else {
            t.report_reduced(name, ok, detail)
        }
    };

    let qa = &stats["qa"];
    emit(
        "qa_plateau",
        (3.0..=7.0).contains(&qa.mean),
        format!("QA mean final dE = {:.3}±{:.3} (target [3,7])", qa.mean, qa.stderr),
    );

    let (ta, sqa6) = (&stats["ta"], &stats["sqa-6"]);
    let a = sqa6.mean < ta.mean - 2.0 * combined(sqa6, ta)
        && ta.mean < qa.mean - 2.0 * combined(ta, qa);
    emit(
        "method_ordering_a_energy",
        a,
        format!(
            "dE: SQA-6 {:.3}±{:.3}, TA {:.3}±{:.3}, QA {:.3}±{:.3}",
            sqa6.mean, sqa6.stderr, ta.mean, ta.stderr, qa.mean, qa.stderr
        ),
    );
    let b = qa.modal_sector() == "4" && sqa6.modal_sector() == "0";
    emit(
        "method_ordering_b_modal_sector",
        b,
        format!(
            "modal final sector QA = {}, SQA-6 = {}",
            qa.modal_sector(),
            sqa6.modal_sector()
        ),
    );
    let c = qa.ground < ta.ground && ta.ground < sqa6.ground;
    emit(
        "method_ordering_c_ground_proportion",
        c,
        format!(
            "P(ground): QA {:.3}, TA {:.3}, SQA-6 {:.3}",
            qa.ground, ta.ground, sqa6.ground
        ),
    );

    let order = ["sqa-1", "sqa-2", "sqa-3", "sqa-6"];
    let mono = order.windows(2).all(|w| {
        let (x, y) = (&stats[w[0]], &stats[w[1]]);
        y.mean <= x.mean + 2.0 * combined(x, y)
    });
    let detail: Vec<String> = order
        .iter()
        .map(|m| format!("{m} {:.3}±{:.3}", stats[*m].mean, stats[*m].stderr))
        .collect();
    emit("sqa_n_monotonicity", mono, detail.join(", "));
}

fn method_tag(m: Method) -> u64 {
    match m {
        Method::Ta => 0,
        Method::Qa => 1,
        Method::QaH => 2,
        Method::Sqa(n) => 10 + n as u64,
    }
}

fn main() -> ExitCode {
    let mut t = Tally::default();
    stripe_identity(&mut t);
    enumeration_6x4(&mut t);
    metropolis_stationarity(&mut t);
    detailed_balance(&mut t);
    sse_correctness(&mut t);
    heavy_criteria(&mut t);
    topology_invariants(&mut t);
    coupling_restoration(&mut t);
    println!(
        "acceptance: {} passed, {} failed, {} not run, {} reduced-budget verdicts",
        t.passed, t.failed, t.not_run, t.reduced
    );
    if t.failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
