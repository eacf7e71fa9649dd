//! Stochastic series expansion for `H = H_A + Σ_i h_i σ^x_i`.
//!
//! The Hamiltonian is written as `H = -Σ_b H_b - Σ_i (H_{i,0} + H_{i,1}) + const`
//! with bond vertices `H_b = J_b - J_b σ^z_a σ^z_b` (weight `2 J_b` on
//! antiparallel spins, zero on parallel ones), constant site vertices
//! `H_{i,0} = h_i` and spin-flip vertices `H_{i,1} = h_i σ^x_i`. The sign of the
//! transverse term is irrelevant: a π rotation about z maps `+h σ^x` onto
//! `-h σ^x` without touching σ^z.
//!
//! Updates are the diagonal insertion/removal pass over a fixed-length string
//! and the multibranch cluster update, in which bond vertices bind all four legs
//! and site vertices cut the world line. One sweep (one of each) counts as one
//! Monte Carlo step.

use rand::{Rng, SeedableRng};

use crate::lattice::Lattice;
use crate::model::{Couplings, SpinConfig};
use crate::stats::BinnedMean;

const NULL: u32 = 0;
const SITE_DIAG: u32 = 1;
const SITE_OFFDIAG: u32 = 2;
const BOND_DIAG: u32 = 3;
const KIND_MASK: u32 = 3;
const NONE: u32 = u32::MAX;

/// Slots added on top of `4n/3` when the cutoff grows.
const CUTOFF_PADDING: usize = 8;

/// One slot of the operator string.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Operator {
    Null,
    /// Constant site vertex `h_i`.
    SiteDiag(usize),
    /// Spin flip `h_i σ^x_i`.
    SiteOffDiag(usize),
    /// Ising vertex on a bond.
    BondDiag(usize),
}

impl Operator {
    #[inline]
    fn encode(self) -> u32 {
        match self {
            Operator::Null => NULL,
            Operator::SiteDiag(i) => (i as u32) << 2 | SITE_DIAG,
            Operator::SiteOffDiag(i) => (i as u32) << 2 | SITE_OFFDIAG,
            Operator::BondDiag(b) => (b as u32) << 2 | BOND_DIAG,
        }
    }

    #[inline]
    fn decode(code: u32) -> Self {
        let idx = (code >> 2) as usize;
        match code & KIND_MASK {
            SITE_DIAG => Operator::SiteDiag(idx),
            SITE_OFFDIAG => Operator::SiteOffDiag(idx),
            BOND_DIAG => Operator::BondDiag(idx),
            _ => Operator::Null,
        }
    }
}

/// Fixed-length operator sequence; `len()` is the cutoff `M`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OperatorString {
    slots: Vec<u32>,
    n: usize,
}

impl OperatorString {
    pub fn empty(cutoff: usize) -> Self {
        Self {
            slots: vec![NULL; cutoff.max(1)],
            n: 0,
        }
    }

    pub fn from_operators(ops: &[Operator]) -> Self {
        let slots: Vec<u32> = ops.iter().map(|o| o.encode()).collect();
        let n = slots.iter().filter(|&&s| s != NULL).count();
        Self { slots, n }
    }

    /// Cutoff `M`.
    #[inline]
    pub fn len(&self) -> usize {
        self.slots.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.slots.is_empty()
    }

    /// Number of non-null slots.
    #[inline]
    pub fn num_operators(&self) -> usize {
        self.n
    }

    pub fn num_offdiagonal(&self) -> usize {
        self.slots
            .iter()
            .filter(|&&s| s & KIND_MASK == SITE_OFFDIAG)
            .count()
    }

    pub fn get(&self, p: usize) -> Operator {
        Operator::decode(self.slots[p])
    }

    pub fn iter(&self) -> impl Iterator<Item = Operator> + '_ {
        self.slots.iter().map(|&s| Operator::decode(s))
    }

    /// Grows `M` to `ceil(4n/3) + padding` when more than three quarters of
    /// the slots are occupied. Never shrinks. Returns whether it grew.
    pub fn adjust_cutoff(&mut self) -> bool {
        let m = self.slots.len();
        if 4 * self.n > 3 * m {
            let target = (4 * self.n).div_ceil(3) + CUTOFF_PADDING;
            self.slots.resize(target.max(m), NULL);
            true
        } else {
            false
        }
    }
}

/// Scratch buffers for the cluster update, kept across sweeps.
#[derive(Debug, Clone, Default)]
struct ClusterScratch {
    /// Encoded operator of each vertex, in imaginary-time order.
    vops: Vec<u32>,
    /// Slot of each vertex in the string.
    vpos: Vec<u32>,
    links: Vec<u32>,
    leg_state: Vec<u8>,
    first: Vec<u32>,
    last: Vec<u32>,
    stack: Vec<u32>,
}

const LEG_FREE: u8 = 0;
const LEG_KEPT: u8 = 1;
const LEG_FLIPPED: u8 = 2;
const LEG_UNUSED: u8 = 3;

/// `p · 2^64` as an integer threshold, so that `next_u64() < threshold`
/// happens with probability `p` (saturating at 1).
#[inline]
fn threshold(p: f64) -> u64 {
    if p >= 1.0 {
        u64::MAX
    } else {
        (p * 18_446_744_073_709_551_616.0) as u64
    }
}

/// Vose alias table sampled with a single 64-bit draw: the high half of
/// `r · K` selects the column and the low half, which is uniform on a grid
/// of spacing `K / 2^64`, decides between the column and its alias.
#[derive(Debug, Clone, Default)]
struct AliasTable {
    keep: Vec<u64>,
    alias: Vec<u32>,
}

impl AliasTable {
    fn new(weights: &[f64]) -> Self {
        let k = weights.len();
        let total: f64 = weights.iter().sum();
        let mut scaled: Vec<f64> = weights.iter().map(|w| w * k as f64 / total).collect();
        let mut keep = vec![u64::MAX; k];
        let mut alias: Vec<u32> = (0..k as u32).collect();
        let (mut small, mut large): (Vec<usize>, Vec<usize>) =
            (0..k).partition(|&i| scaled[i] < 1.0);
        while let (Some(&s), Some(&l)) = (small.last(), large.last()) {
            small.pop();
            keep[s] = threshold(scaled[s]);
            alias[s] = l as u32;
            scaled[l] -= 1.0 - scaled[s];
            if scaled[l] < 1.0 {
                large.pop();
                small.push(l);
            }
        }
        // Leftovers are 1 up to rounding and keep their own column.
        Self { keep, alias }
    }

    #[inline]
    fn sample(&self, r: u64) -> usize {
        let prod = r as u128 * self.keep.len() as u128;
        let col = (prod >> 64) as usize;
        if (prod as u64) < self.keep[col] {
            col
        } else {
            self.alias[col] as usize
        }
    }
}

/// Alias table over site and bond vertices, rebuilt whenever the couplings
/// or fields change.
#[derive(Debug, Clone)]
struct InsertionTable {
    bonds: Vec<f64>,
    fields: Vec<f64>,
    total: f64,
    alias: Option<AliasTable>,
}

impl InsertionTable {
    fn new() -> Self {
        Self {
            bonds: Vec::new(),
            fields: Vec::new(),
            total: 0.0,
            alias: None,
        }
    }

    fn refresh(&mut self, couplings: &Couplings) {
        if self.bonds == couplings.bond_values() && self.fields == couplings.fields() {
            return;
        }
        self.bonds = couplings.bond_values().to_vec();
        self.fields = couplings.fields().to_vec();
        let weights: Vec<f64> = self
            .fields
            .iter()
            .copied()
            .chain(self.bonds.iter().map(|j| 2.0 * j))
            .collect();
        self.total = weights.iter().sum();
        self.alias = (self.total > 0.0).then(|| AliasTable::new(&weights));
    }
}

/// Sampler state for one Markov chain: the basis state at imaginary time zero
/// and the operator string.
#[derive(Debug, Clone)]
pub struct SseSampler {
    alpha: Vec<i8>,
    string: OperatorString,
    /// Bond endpoints copied out of the lattice for the inner loops.
    ends: Vec<(u32, u32)>,
    table: InsertionTable,
    scratch: ClusterScratch,
    propagated: Vec<i8>,
    /// `1 / k` for `k = 0..=M`, so the insertion ratio needs no division.
    recip: Vec<f64>,
    pub mcs: u64,
}

impl SseSampler {
    pub fn new(geom: &Lattice, alpha: SpinConfig, cutoff: usize) -> Self {
        assert_eq!(alpha.len(), geom.num_sites());
        Self::with_string(geom, alpha, OperatorString::empty(cutoff))
    }

    /// Starts from an explicit operator string. The string must be consistent
    /// with `alpha` (see [`SseSampler::is_consistent`]).
    pub fn with_string(geom: &Lattice, alpha: SpinConfig, string: OperatorString) -> Self {
        Self {
            alpha: alpha.as_slice().to_vec(),
            string,
            ends: geom
                .bonds()
                .iter()
                .map(|b| (b.a as u32, b.b as u32))
                .collect(),
            table: InsertionTable::new(),
            scratch: ClusterScratch::default(),
            propagated: Vec::with_capacity(geom.num_sites()),
            recip: Vec::new(),
            mcs: 0,
        }
    }

    /// Basis state at imaginary time zero.
    pub fn alpha(&self) -> &[i8] {
        &self.alpha
    }

    pub fn config(&self) -> SpinConfig {
        SpinConfig::new(self.alpha.clone())
    }

    pub fn string(&self) -> &OperatorString {
        &self.string
    }

    pub fn adjust_cutoff(&mut self) -> bool {
        self.string.adjust_cutoff()
    }

    /// Inserts and removes diagonal vertices in one pass over the string.
    ///
    /// An empty slot receives a vertex with probability
    /// `min(1, β W / (M - n))`, where `W = Σ h_i + Σ 2 J_b`; the vertex is
    /// drawn proportionally to those maximal weights and a bond vertex landing
    /// on parallel spins is rejected, which realises insertion proportional to
    /// the actual weight. Removal uses `min(1, (M - n + 1) / (β W))`. Vertices
    /// whose weight has dropped to zero (after a coupling change) are removed
    /// unconditionally.
    pub fn diagonal_update<R: Rng + ?Sized>(&mut self, couplings: &Couplings, beta: f64, rng: &mut R) {
        self.table.refresh(couplings);
        let n_sites = self.alpha.len();
        let bw = beta * self.table.total;
        let m = self.string.slots.len();
        let spins = &mut self.propagated;
        spins.clear();
        spins.extend_from_slice(&self.alpha);
        let bonds = &self.table.bonds;
        let fields = &self.table.fields;
        let mut n = self.string.n;
        if self.recip.len() != m + 1 {
            self.recip = (0..=m).map(|k| 1.0 / k as f64).collect();
        }
        let recip = &self.recip;
        let inv_bw = 1.0 / bw;

        for slot in self.string.slots.iter_mut() {
            let op = *slot;
            if op == NULL {
                let Some(alias) = &self.table.alias else {
                    continue;
                };
                let ratio = bw * recip[m - n];
                if ratio >= 1.0 || rng.next_u64() < threshold(ratio) {
                    let k = alias.sample(rng.next_u64());
                    if k < n_sites {
                        *slot = (k as u32) << 2 | SITE_DIAG;
                        n += 1;
                    } else {
                        let b = k - n_sites;
                        let (a, c) = self.ends[b];
                        if spins[a as usize] != spins[c as usize] {
                            *slot = (b as u32) << 2 | BOND_DIAG;
                            n += 1;
                        }
                    }
                }
                continue;
            }
            let idx = (op >> 2) as usize;
            match op & KIND_MASK {
                SITE_OFFDIAG => spins[idx] = -spins[idx],
                kind => {
                    let weight = if kind == BOND_DIAG {
                        bonds[idx]
                    } else {
                        fields[idx]
                    };
                    if weight <= 0.0 {
                        *slot = NULL;
                        n -= 1;
                        continue;
                    }
                    let ratio = (m - n + 1) as f64 * inv_bw;
                    if ratio >= 1.0 || rng.next_u64() < threshold(ratio) {
                        *slot = NULL;
                        n -= 1;
                    }
                }
            }
        }
        self.string.n = n;
    }

    /// Multibranch cluster update.
    ///
    /// Each leg of a site vertex ends a cluster; bond vertices join their four
    /// legs. Every cluster is flipped with probability 1/2, toggling the type of
    /// each site vertex it touches (constant ↔ flip) and the spins along it.
    /// Sites without any vertex are flipped with probability 1/2.
    pub fn cluster_update<R: Rng + ?Sized>(&mut self, rng: &mut R) {
        let n_sites = self.alpha.len();
        let sc = &mut self.scratch;
        let slots = &mut self.string.slots;

        sc.vops.clear();
        sc.vpos.clear();
        for (p, &s) in slots.iter().enumerate() {
            if s != NULL {
                sc.vops.push(s);
                sc.vpos.push(p as u32);
            }
        }
        let nv = sc.vops.len();
        // Every used leg gets a link below, so stale contents never leak.
        if sc.links.len() < 4 * nv {
            sc.links.resize(4 * nv, NONE);
        }
        sc.leg_state.clear();
        sc.leg_state.resize(4 * nv, LEG_FREE);
        sc.first.clear();
        sc.first.resize(n_sites, NONE);
        sc.last.clear();
        sc.last.resize(n_sites, NONE);

        {
            let ClusterScratch {
                vops,
                links,
                leg_state,
                first,
                last,
                ..
            } = sc;
            let mut join = |site: usize, below: u32, above: u32| {
                let prev = last[site];
                if prev == NONE {
                    first[site] = below;
                } else {
                    links[prev as usize] = below;
                    links[below as usize] = prev;
                }
                last[site] = above;
            };
            for (v, &op) in vops.iter().enumerate() {
                let leg = 4 * v as u32;
                let idx = (op >> 2) as usize;
                if op & KIND_MASK == BOND_DIAG {
                    let (a, b) = self.ends[idx];
                    join(a as usize, leg, leg + 2);
                    join(b as usize, leg + 1, leg + 3);
                } else {
                    join(idx, leg, leg + 2);
                    leg_state[leg as usize + 1] = LEG_UNUSED;
                    leg_state[leg as usize + 3] = LEG_UNUSED;
                }
            }
            for s in 0..n_sites {
                if first[s] != NONE {
                    links[first[s] as usize] = last[s];
                    links[last[s] as usize] = first[s];
                }
            }
        }

        let ClusterScratch {
            vops,
            links,
            leg_state,
            stack,
            ..
        } = sc;
        for start in 0..4 * nv {
            if leg_state[start] != LEG_FREE {
                continue;
            }
            let flip = rng.next_u32() & 1 == 1;
            let mark = if flip { LEG_FLIPPED } else { LEG_KEPT };
            stack.push(start as u32);
            while let Some(leg) = stack.pop() {
                let leg = leg as usize;
                if leg_state[leg] != LEG_FREE {
                    continue;
                }
                let v = leg / 4;
                let op = vops[v];
                if op & KIND_MASK == BOND_DIAG {
                    let base = 4 * v;
                    leg_state[base..base + 4].fill(mark);
                    stack.extend_from_slice(&links[base..base + 4]);
                } else {
                    leg_state[leg] = mark;
                    if flip {
                        vops[v] = op ^ KIND_MASK;
                    }
                    stack.push(links[leg]);
                }
            }
        }

        for (&op, &p) in vops.iter().zip(&sc.vpos) {
            slots[p as usize] = op;
        }

        for s in 0..n_sites {
            let f = sc.first[s];
            let flip = if f == NONE {
                rng.next_u32() & 1 == 1
            } else {
                sc.leg_state[f as usize] == LEG_FLIPPED
            };
            if flip {
                self.alpha[s] = -self.alpha[s];
            }
        }
    }

    /// One Monte Carlo step: a diagonal pass followed by a cluster pass.
    pub fn sweep<R: Rng + ?Sized>(&mut self, couplings: &Couplings, beta: f64, rng: &mut R) {
        self.diagonal_update(couplings, beta, rng);
        self.cluster_update(rng);
        self.mcs += 1;
    }

    /// Single-configuration energy estimator `-n/β + Σ_b J_b + Σ_i h_i`.
    pub fn energy_sample(&self, couplings: &Couplings, beta: f64) -> f64 {
        energy_from_operator_count(self.string.n as f64, couplings, beta)
    }

    /// Single-configuration estimator of `Σ_i h_i σ^x_i`.
    pub fn transverse_sample(&self, beta: f64) -> f64 {
        -(self.string.num_offdiagonal() as f64) / beta
    }

    /// Checks imaginary-time periodicity and that every bond vertex sits on
    /// antiparallel spins with a positive coupling.
    pub fn is_consistent(&self, couplings: &Couplings) -> bool {
        let mut spins = self.alpha.clone();
        for op in self.string.iter() {
            match op {
                Operator::Null | Operator::SiteDiag(_) => {}
                Operator::SiteOffDiag(i) => spins[i] = -spins[i],
                Operator::BondDiag(b) => {
                    let (a, c) = self.ends[b];
                    if spins[a as usize] == spins[c as usize] || couplings.bond(b) <= 0.0 {
                        return false;
                    }
                }
            }
        }
        spins == self.alpha
            && self.string.n == self.string.iter().filter(|o| *o != Operator::Null).count()
    }
}

/// `⟨H⟩ = -⟨n⟩/β + Σ_b J_b + Σ_i h_i` from a mean operator count.
pub fn energy_from_operator_count(mean_n: f64, couplings: &Couplings, beta: f64) -> f64 {
    let shift: f64 =
        couplings.bond_values().iter().sum::<f64>() + couplings.fields().iter().sum::<f64>();
    -mean_n / beta + shift
}

/// Thermal energy estimate from a fixed-`(h, T)` SSE run.
#[derive(Debug, Clone, PartialEq)]
pub struct EnergyEstimate {
    pub mean: f64,
    /// Standard error from the spread of bin means.
    pub stderr: f64,
    pub bins: usize,
}

/// Runs `thermalization` sweeps (growing the cutoff as needed), then
/// `sweeps` measured sweeps with a frozen cutoff, and bins the energy
/// estimator in blocks of `bin_size` sweeps.
pub fn measure_energy(
    geom: &Lattice,
    couplings: &Couplings,
    temperature: f64,
    thermalization: u64,
    sweeps: u64,
    bin_size: usize,
    seed: u64,
) -> crate::Result<EnergyEstimate> {
    if !(temperature > 0.0) {
        return Err(crate::Error::NonPositiveTemperature(temperature));
    }
    let beta = 1.0 / temperature;
    let mut rng = crate::ChainRng::seed_from_u64(seed);
    let alpha = SpinConfig::random(geom.num_sites(), &mut rng);
    let mut s = SseSampler::new(geom, alpha, 4 * geom.num_sites());
    for _ in 0..thermalization {
        s.sweep(couplings, beta, &mut rng);
        s.adjust_cutoff();
    }
    let mut acc = BinnedMean::new(bin_size);
    for _ in 0..sweeps {
        s.sweep(couplings, beta, &mut rng);
        acc.push(s.string.n as f64);
    }
    let (mean_n, err_n) = acc.result();
    Ok(EnergyEstimate {
        mean: energy_from_operator_count(mean_n, couplings, beta),
        stderr: err_n / beta,
        bins: acc.bins().len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::stripe_config;
    use crate::lattice::BondClass;
    use crate::ChainRng;
    use rand::RngCore;

    #[test]
    fn encode_round_trip() {
        for op in [
            Operator::Null,
            Operator::SiteDiag(7),
            Operator::SiteOffDiag(0),
            Operator::BondDiag(107),
        ] {
            assert_eq!(Operator::decode(op.encode()), op);
        }
    }

    #[test]
    fn alias_table_matches_weights() {
        let w = [0.5, 0.0, 3.0, 1.5, 1.0];
        let t = AliasTable::new(&w);
        let mut rng = ChainRng::seed_from_u64(11);
        let draws = 600_000;
        let mut counts = [0usize; 5];
        for _ in 0..draws {
            counts[t.sample(rng.next_u64())] += 1;
        }
        for (c, wi) in counts.iter().zip(w) {
            let f = *c as f64 / draws as f64;
            assert!((f - wi / 6.0).abs() < 3e-3, "{counts:?}");
        }
        assert_eq!(counts[1], 0);
    }

    #[test]
    fn cutoff_growth() {
        let mut s = OperatorString::empty(100);
        assert!(!s.adjust_cutoff());
        assert_eq!(s.len(), 100);
        let mut ops = vec![Operator::SiteDiag(0); 90];
        ops.extend(vec![Operator::Null; 10]);
        let mut s = OperatorString::from_operators(&ops);
        assert!(s.adjust_cutoff());
        assert!(s.len() >= 120);
        assert_eq!(s.num_operators(), 90);
    }

    #[test]
    fn zero_field_stripe_only_loads_antiparallel_bonds() {
        let g = Lattice::new(6, 6).unwrap();
        let c = Couplings::new(&g, 1.0, 0.9);
        let mut rng = ChainRng::seed_from_u64(1);
        let mut s = SseSampler::new(&g, stripe_config(&g).unwrap(), 64);
        for _ in 0..50 {
            s.diagonal_update(&c, 5.0, &mut rng);
            s.adjust_cutoff();
        }
        assert!(s.string().num_operators() > 0);
        for op in s.string().iter() {
            match op {
                Operator::BondDiag(b) => assert_eq!(g.bonds()[b].class, BondClass::Interchain),
                Operator::Null => {}
                other => panic!("unexpected {other:?}"),
            }
        }
        assert!(s.is_consistent(&c));
    }

    #[test]
    fn vanishing_beta_inserts_nothing() {
        let g = Lattice::new(4, 4).unwrap();
        let mut c = Couplings::new(&g, 1.0, 0.9);
        c.set_uniform_field(1.0);
        let mut rng = ChainRng::seed_from_u64(2);
        let mut s = SseSampler::new(&g, SpinConfig::random(16, &mut rng), 32);
        for _ in 0..100 {
            s.diagonal_update(&c, 1e-12, &mut rng);
        }
        assert_eq!(s.string().num_operators(), 0);
    }

    #[test]
    fn empty_string_randomises_every_spin() {
        let g = Lattice::new(4, 4).unwrap();
        let mut rng = ChainRng::seed_from_u64(3);
        let mut s = SseSampler::new(&g, SpinConfig::all_up(16), 8);
        let mut ups = [0usize; 16];
        let trials = 4000;
        for _ in 0..trials {
            s.cluster_update(&mut rng);
            for (i, &sp) in s.alpha().iter().enumerate() {
                if sp > 0 {
                    ups[i] += 1;
                }
            }
        }
        for u in ups {
            let f = u as f64 / trials as f64;
            assert!((f - 0.5).abs() < 0.05, "{f}");
        }
    }

    #[test]
    fn site_vertex_pair_toggles_together() {
        // Two constant vertices on site 0 cut its world line into two
        // segments; flipping the inner one converts both into spin flips.
        let g = Lattice::new(3, 3).unwrap();
        let ops = [
            Operator::Null,
            Operator::SiteDiag(0),
            Operator::Null,
            Operator::SiteDiag(0),
        ];
        let mut rng = ChainRng::seed_from_u64(4);
        let mut seen_offdiag = false;
        let mut seen_diag = false;
        let c = Couplings::new(&g, 1.0, 0.9);
        for _ in 0..200 {
            let mut s =
                SseSampler::with_string(&g, SpinConfig::all_up(9), OperatorString::from_operators(&ops));
            s.cluster_update(&mut rng);
            assert!(s.is_consistent(&c));
            match (s.string().get(1), s.string().get(3)) {
                (Operator::SiteOffDiag(0), Operator::SiteOffDiag(0)) => seen_offdiag = true,
                (Operator::SiteDiag(0), Operator::SiteDiag(0)) => seen_diag = true,
                other => panic!("vertices must toggle together, got {other:?}"),
            }
        }
        assert!(seen_offdiag && seen_diag);
    }

    #[test]
    fn single_site_vertex_stays_diagonal() {
        let g = Lattice::new(3, 3).unwrap();
        let ops = [Operator::SiteDiag(4), Operator::Null];
        let mut rng = ChainRng::seed_from_u64(5);
        let mut flipped = 0;
        for _ in 0..400 {
            let mut s =
                SseSampler::with_string(&g, SpinConfig::all_up(9), OperatorString::from_operators(&ops));
            s.cluster_update(&mut rng);
            assert_eq!(s.string().get(0), Operator::SiteDiag(4));
            if s.alpha()[4] < 0 {
                flipped += 1;
            }
        }
        assert!((150..250).contains(&flipped));
    }

    #[test]
    fn sweeps_preserve_consistency_and_reproduce() {
        let g = Lattice::new(4, 4).unwrap();
        let mut c = Couplings::new(&g, 1.0, 0.9);
        c.set_uniform_field(1.2);
        let run = |seed| {
            let mut rng = ChainRng::seed_from_u64(seed);
            let mut s = SseSampler::new(&g, SpinConfig::random(16, &mut rng), 16);
            for _ in 0..300 {
                s.sweep(&c, 2.0, &mut rng);
                s.adjust_cutoff();
                assert!(s.is_consistent(&c));
            }
            (s.alpha().to_vec(), s.string().clone(), s.mcs)
        };
        let a = run(9);
        assert_eq!(a, run(9));
        assert_eq!(a.2, 300);
    }

    #[test]
    fn zero_coupling_vertices_are_dropped() {
        let g = Lattice::new(6, 6).unwrap();
        let mut c = Couplings::new(&g, 1.0, 0.9);
        c.set_uniform_field(0.5);
        let mut rng = ChainRng::seed_from_u64(6);
        let mut s = SseSampler::new(&g, SpinConfig::random(36, &mut rng), 64);
        for _ in 0..200 {
            s.sweep(&c, 4.0, &mut rng);
            s.adjust_cutoff();
        }
        let seam = g.seam(2);
        c.apply_cut(&seam).unwrap();
        s.sweep(&c, 4.0, &mut rng);
        assert!(s.is_consistent(&c));
        for op in s.string().iter() {
            if let Operator::BondDiag(b) = op {
                assert!(!seam.severed.contains(&b));
            }
        }
    }
}
