//! The anisotropic triangular Ising antiferromagnet
//! `H = J_x Σ_horizontal s_i s_j + J Σ_interchain s_i s_j`, with per-bond
//! coupling overrides (used while a seam is cut) and per-site transverse fields
//! (consumed only by the quantum sampler).

use std::ops::Index;

use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::{BondClass, Lattice, Seam};

/// Classical Ising configuration, one `±1` entry per site.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SpinConfig(Vec<i8>);

impl SpinConfig {
    pub fn new(spins: Vec<i8>) -> Self {
        debug_assert!(spins.iter().all(|&s| s == 1 || s == -1));
        Self(spins)
    }

    pub fn all_up(n: usize) -> Self {
        Self(vec![1; n])
    }

    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        Self((0..n).map(|_| if rng.random() { 1 } else { -1 }).collect())
    }

    /// Bit `i` set means spin `i` is down.
    pub fn from_bits(bits: u64, n: usize) -> Self {
        Self((0..n).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect())
    }

    pub fn to_bits(&self) -> u64 {
        self.0
            .iter()
            .enumerate()
            .filter(|(_, &s)| s < 0)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.0.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn flip(&mut self, site: usize) {
        self.0[site] = -self.0[site];
    }

    #[inline]
    pub fn set(&mut self, site: usize, spin: i8) {
        self.0[site] = spin;
    }

    pub fn as_slice(&self) -> &[i8] {
        &self.0
    }

    /// Globally flipped copy.
    pub fn reversed(&self) -> Self {
        Self(self.0.iter().map(|s| -s).collect())
    }

    fn check(&self, geom: &Lattice) -> Result<()> {
        if self.len() != geom.num_sites() {
            return Err(Error::SizeMismatch {
                expected: geom.num_sites(),
                got: self.len(),
            });
        }
        Ok(())
    }
}

impl Index<usize> for SpinConfig {
    type Output = i8;

    #[inline]
    fn index(&self, site: usize) -> &i8 {
        &self.0[site]
    }
}

/// Base couplings, per-bond overrides and transverse fields.
///
/// All couplings are antiferromagnetic magnitudes (`>= 0`). The effective value
/// of every bond is cached, so [`Couplings::bond`] is a plain load.
#[derive(Debug, Clone, PartialEq)]
pub struct Couplings {
    j: f64,
    jx: f64,
    classes: Vec<BondClass>,
    overrides: Vec<Option<f64>>,
    effective: Vec<f64>,
    fields: Vec<f64>,
    open_seam: Option<usize>,
}

impl Couplings {
    /// Uniform couplings with zero transverse field.
    pub fn new(geom: &Lattice, j: f64, jx: f64) -> Self {
        assert!(j >= 0.0 && jx >= 0.0, "couplings must be non-negative");
        let classes: Vec<BondClass> = geom.bonds().iter().map(|b| b.class).collect();
        let effective = classes
            .iter()
            .map(|c| match c {
                BondClass::Horizontal => jx,
                BondClass::Interchain => j,
            })
            .collect();
        Self {
            j,
            jx,
            overrides: vec![None; classes.len()],
            classes,
            effective,
            fields: vec![0.0; geom.num_sites()],
            open_seam: None,
        }
    }

    #[inline]
    pub fn j(&self) -> f64 {
        self.j
    }

    #[inline]
    pub fn jx(&self) -> f64 {
        self.jx
    }

    fn base(&self, bond: usize) -> f64 {
        match self.classes[bond] {
            BondClass::Horizontal => self.jx,
            BondClass::Interchain => self.j,
        }
    }

    /// Effective coupling of `bond`.
    #[inline]
    pub fn bond(&self, bond: usize) -> f64 {
        self.effective[bond]
    }

    /// Effective couplings of all bonds, indexed like [`Lattice::bonds`].
    #[inline]
    pub fn bond_values(&self) -> &[f64] {
        &self.effective
    }

    pub fn override_of(&self, bond: usize) -> Option<f64> {
        self.overrides[bond]
    }

    pub fn has_overrides(&self) -> bool {
        self.overrides.iter().any(Option::is_some)
    }

    pub fn set_override(&mut self, bond: usize, value: f64) {
        assert!(value >= 0.0, "coupling override must be non-negative");
        self.overrides[bond] = Some(value);
        self.effective[bond] = value;
    }

    pub fn clear_override(&mut self, bond: usize) {
        self.overrides[bond] = None;
        self.effective[bond] = self.base(bond);
    }

    #[inline]
    pub fn field(&self, site: usize) -> f64 {
        self.fields[site]
    }

    #[inline]
    pub fn fields(&self) -> &[f64] {
        &self.fields
    }

    pub fn set_field(&mut self, site: usize, h: f64) {
        assert!(h >= 0.0, "transverse field must be non-negative");
        self.fields[site] = h;
    }

    pub fn set_uniform_field(&mut self, h: f64) {
        assert!(h >= 0.0, "transverse field must be non-negative");
        self.fields.fill(h);
    }

    /// Column of the currently cut seam, if any.
    pub fn open_seam(&self) -> Option<usize> {
        self.open_seam
    }

    /// Opens `seam`: severed bonds drop to zero and softened bonds to `J_x / 2`.
    pub fn apply_cut(&mut self, seam: &Seam) -> Result<()> {
        if let Some(open) = self.open_seam {
            return Err(Error::SeamAlreadyOpen {
                open,
                requested: seam.column,
            });
        }
        for &b in &seam.severed {
            self.set_override(b, 0.0);
        }
        let soft = self.jx / 2.0;
        for &b in &seam.softened {
            self.set_override(b, soft);
        }
        self.open_seam = Some(seam.column);
        Ok(())
    }

    /// Step `step` of `ns` in the linear ramp that glues `seam` back together.
    ///
    /// Severed bonds sit at `step * J_x / ns` and softened bonds at
    /// `J_x / 2 + step * (J - J_x / 2) / ns` after the call. The values are
    /// computed from the step index rather than accumulated, and the final step
    /// clears the overrides so the couplings compare equal to their pre-cut
    /// state.
    pub fn glue_step(&mut self, seam: &Seam, ns: usize, step: usize) -> Result<()> {
        if self.open_seam != Some(seam.column) {
            return Err(Error::SeamNotOpen(seam.column));
        }
        if ns == 0 || step == 0 || step > ns {
            return Err(Error::GlueStep { step, ns });
        }
        if step == ns {
            for &b in seam.severed.iter().chain(&seam.softened) {
                self.clear_override(b);
            }
            self.open_seam = None;
            return Ok(());
        }
        let frac = step as f64 / ns as f64;
        let severed = self.jx * frac;
        let softened = self.jx / 2.0 + (self.j - self.jx / 2.0) * frac;
        for &b in &seam.severed {
            self.set_override(b, severed);
        }
        for &b in &seam.softened {
            self.set_override(b, softened);
        }
        Ok(())
    }
}

/// Classical (σ^z) energy `Σ_b J_b s_a s_b` with effective couplings.
pub fn energy(config: &SpinConfig, couplings: &Couplings, geom: &Lattice) -> Result<f64> {
    config.check(geom)?;
    Ok(energy_unchecked(config.as_slice(), couplings.bond_values(), geom))
}

#[inline]
pub(crate) fn energy_unchecked(spins: &[i8], bonds: &[f64], geom: &Lattice) -> f64 {
    geom.bonds()
        .iter()
        .zip(bonds)
        .map(|(b, &j)| j * f64::from(spins[b.a] * spins[b.b]))
        .sum()
}

/// `E(config with site flipped) - E(config)`, from the six bonds of `site`.
pub fn delta_energy_flip(
    config: &SpinConfig,
    site: usize,
    couplings: &Couplings,
    geom: &Lattice,
) -> Result<f64> {
    config.check(geom)?;
    if site >= geom.num_sites() {
        return Err(Error::SizeMismatch {
            expected: geom.num_sites(),
            got: site,
        });
    }
    Ok(delta_unchecked(
        config.as_slice(),
        site,
        couplings.bond_values(),
        geom,
    ))
}

#[inline]
pub(crate) fn delta_unchecked(spins: &[i8], site: usize, bonds: &[f64], geom: &Lattice) -> f64 {
    let local: f64 = geom
        .neighbors(site)
        .iter()
        .map(|&(o, b)| bonds[b] * f64::from(spins[o]))
        .sum();
    -2.0 * f64::from(spins[site]) * local
}

/// Number of triangles with three equal spins.
pub fn triangle_violations(config: &SpinConfig, geom: &Lattice) -> Result<usize> {
    config.check(geom)?;
    Ok(violations_unchecked(config.as_slice(), geom))
}

pub(crate) fn violations_unchecked(spins: &[i8], geom: &Lattice) -> usize {
    geom.triangles()
        .iter()
        .filter(|t| {
            let [a, b, c] = t.sites;
            spins[a] == spins[b] && spins[b] == spins[c]
        })
        .count()
}

/// Uniform rows of alternating sign, `s(x, y) = (-1)^y`.
pub fn stripe_config(geom: &Lattice) -> Result<SpinConfig> {
    if geom.ly() % 2 != 0 {
        return Err(Error::OddRows(geom.ly()));
    }
    Ok(SpinConfig(
        (0..geom.num_sites())
            .map(|s| if geom.coords(s).1 % 2 == 0 { 1 } else { -1 })
            .collect(),
    ))
}

/// Closed-form stripe energy `N (J_x - 2 J)` for uniform couplings.
pub fn stripe_energy(geom: &Lattice, j: f64, jx: f64) -> f64 {
    let n = geom.num_sites() as f64;
    n * jx - 2.0 * n * j
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_xoshiro::Xoshiro256PlusPlus;

    fn paper_model(lx: usize, ly: usize) -> (Lattice, Couplings) {
        let g = Lattice::new(lx, ly).unwrap();
        let c = Couplings::new(&g, 1.0, 0.9);
        (g, c)
    }

    // Independent bond sum straight from the lattice geometry: no cached
    // couplings, no shared helper.
    fn brute_energy(spins: &SpinConfig, g: &Lattice, c: &Couplings) -> f64 {
        let mut e = 0.0;
        for y in 0..g.ly() {
            for x in 0..g.lx() {
                let s = spins[g.site(x, y)] as f64;
                for (k, (dx, dy)) in [(1, 0), (0, 1), (1, 1)].into_iter().enumerate() {
                    let t = spins[g.site(x + dx, y + dy)] as f64;
                    let j = c.override_of(g.bond_index(x, y, k)).unwrap_or(if k == 0 {
                        c.jx()
                    } else {
                        c.j()
                    });
                    e += j * s * t;
                }
            }
        }
        e
    }

    #[test]
    fn stripe_and_all_up() {
        let (g, c) = paper_model(6, 6);
        let stripe = stripe_config(&g).unwrap();
        assert!((energy(&stripe, &c, &g).unwrap() - (-39.6)).abs() < 1e-12);
        assert_eq!(triangle_violations(&stripe, &g).unwrap(), 0);
        let up = SpinConfig::all_up(36);
        assert!((energy(&up, &c, &g).unwrap() - 104.4).abs() < 1e-12);
        assert_eq!(triangle_violations(&up, &g).unwrap(), 72);
        for s in [0, 7, 35] {
            assert!((delta_energy_flip(&up, s, &c, &g).unwrap() + 11.6).abs() < 1e-12);
        }
        let (g4, c4) = paper_model(4, 4);
        let e4 = energy(&stripe_config(&g4).unwrap(), &c4, &g4).unwrap();
        assert!((e4 + 17.6).abs() < 1e-12);
    }

    #[test]
    fn stripe_single_flip_breaks_two_triangles() {
        // Of the six triangles around a site, only the two in which it is the
        // lone member of its row become all-equal.
        let (g, _) = paper_model(6, 6);
        for site in 0..36 {
            let mut cfg = stripe_config(&g).unwrap();
            cfg.flip(site);
            let mut scan = 0;
            for y in 0..6 {
                for x in 0..6 {
                    for tri in [
                        [(x, y), (x + 1, y), (x + 1, y + 1)],
                        [(x, y), (x, y + 1), (x + 1, y + 1)],
                    ] {
                        let s: Vec<i8> = tri.iter().map(|&(a, b)| cfg[g.site(a, b)]).collect();
                        if s[0] == s[1] && s[1] == s[2] {
                            scan += 1;
                        }
                    }
                }
            }
            assert_eq!(scan, 2);
            assert_eq!(triangle_violations(&cfg, &g).unwrap(), scan);
        }
    }

    #[test]
    fn stripe_with_open_seam() {
        let (g, mut c) = paper_model(6, 6);
        let seam = g.seam(0);
        c.apply_cut(&seam).unwrap();
        let stripe = stripe_config(&g).unwrap();
        let e = energy(&stripe, &c, &g).unwrap();
        assert!((e - brute_energy(&stripe, &g, &c)).abs() < 1e-12);
        // 30 FM horizontal bonds at 0.9, 30 softened AF bonds at 0.45, 42 AF at 1
        assert!((e - (-28.5)).abs() < 1e-12);
    }

    #[test]
    fn decoupled_site_costs_nothing() {
        let (g, mut c) = paper_model(4, 4);
        let site = 5;
        for &(_, b) in g.neighbors(site) {
            c.set_override(b, 0.0);
        }
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(3);
        let cfg = SpinConfig::random(16, &mut rng);
        assert_eq!(delta_energy_flip(&cfg, site, &c, &g).unwrap(), 0.0);
    }

    #[test]
    fn delta_matches_full_reevaluation() {
        let (g, c) = paper_model(6, 6);
        let mut rng = Xoshiro256PlusPlus::seed_from_u64(11);
        for _ in 0..50 {
            let cfg = SpinConfig::random(36, &mut rng);
            let site = rng.random_range(0..36);
            let mut flipped = cfg.clone();
            flipped.flip(site);
            let full = brute_energy(&flipped, &g, &c) - brute_energy(&cfg, &g, &c);
            let delta = delta_energy_flip(&cfg, site, &c, &g).unwrap();
            assert!((full - delta).abs() < 1e-12, "{full} vs {delta}");
        }
    }

    #[test]
    fn size_mismatch_and_odd_rows() {
        let (g, c) = paper_model(4, 4);
        let cfg = SpinConfig::all_up(15);
        assert!(matches!(
            energy(&cfg, &c, &g),
            Err(Error::SizeMismatch { .. })
        ));
        assert!(triangle_violations(&cfg, &g).is_err());
        let g3 = Lattice::new(4, 3).unwrap();
        assert!(matches!(stripe_config(&g3), Err(Error::OddRows(3))));
    }

    #[test]
    fn cut_and_glue() {
        let (g, mut c) = paper_model(6, 6);
        let pristine = c.clone();
        let seams = g.make_seams(2).unwrap();
        c.apply_cut(&seams[0]).unwrap();
        assert_eq!(c.bond(seams[0].softened[0]), 0.45);
        assert_eq!(c.bond(seams[0].severed[0]), 0.0);
        assert!(matches!(
            c.apply_cut(&seams[1]),
            Err(Error::SeamAlreadyOpen { .. })
        ));
        assert!(matches!(
            c.glue_step(&seams[1], 10, 1),
            Err(Error::SeamNotOpen(_))
        ));
        assert!(matches!(
            c.glue_step(&seams[0], 10, 11),
            Err(Error::GlueStep { .. })
        ));
        c.glue_step(&seams[0], 10, 1).unwrap();
        assert!((c.bond(seams[0].severed[0]) - 0.09).abs() < 1e-15);
        assert!((c.bond(seams[0].softened[0]) - (0.45 + 0.055)).abs() < 1e-15);
        c.glue_step(&seams[0], 10, 2).unwrap();
        assert!((c.bond(seams[0].severed[0]) - 0.18).abs() < 1e-15);
        assert!((c.bond(seams[0].softened[0]) - 0.56).abs() < 1e-15);
        for step in 3..=10 {
            c.glue_step(&seams[0], 10, step).unwrap();
        }
        assert_eq!(c, pristine);

        let mut once = pristine.clone();
        once.apply_cut(&seams[1]).unwrap();
        once.glue_step(&seams[1], 1, 1).unwrap();
        assert_eq!(once, pristine);
    }
}
