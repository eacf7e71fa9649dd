//! Periodic triangular lattice with classified bonds, elementary triangles and
//! the vertical seams used when sweeping cuts across the system.
//!
//! Site `(x, y)` has index `y * lx + x`. Every site owns three bonds: a
//! horizontal bond to `(x+1, y)`, a vertical interchain bond to `(x, y+1)` and a
//! diagonal interchain bond to `(x+1, y+1)`, so bond `3 * site + k` with
//! `k = 0, 1, 2` respectively. The diagonal direction is fixed to `(+1, +1)`;
//! the dual honeycomb lattice used by [`crate::topology`] relies on it.

use crate::error::{Error, Result};

/// The two coupling classes of the anisotropic model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BondClass {
    /// Intra-row bond, coupling `J_x`.
    Horizontal,
    /// Bond between neighbouring rows, coupling `J`.
    Interchain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Bond {
    /// Smaller site index.
    pub a: usize,
    /// Larger site index.
    pub b: usize,
    pub class: BondClass,
}

impl Bond {
    /// The site at the other end of the bond.
    #[inline]
    pub fn other(&self, site: usize) -> usize {
        if site == self.a {
            self.b
        } else {
            self.a
        }
    }

    #[inline]
    pub fn contains(&self, site: usize) -> bool {
        self.a == site || self.b == site
    }
}

/// Whether a triangle points up (`(x,y),(x+1,y),(x+1,y+1)`) or down
/// (`(x,y),(x,y+1),(x+1,y+1)`). These are the two sublattices of the dual
/// honeycomb lattice.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TriangleKind {
    Up,
    Down,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Triangle {
    pub sites: [usize; 3],
    /// Bond indices; exactly one is horizontal.
    pub bonds: [usize; 3],
    pub kind: TriangleKind,
}

/// A cut position: the horizontal bonds crossing the vertical line between
/// column `column` and `column + 1` are severed, and every interchain bond
/// touching either of those two columns is softened.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Seam {
    pub column: usize,
    pub severed: Vec<usize>,
    pub softened: Vec<usize>,
}

#[derive(Debug, Clone)]
pub struct Lattice {
    lx: usize,
    ly: usize,
    bonds: Vec<Bond>,
    triangles: Vec<Triangle>,
    /// `(neighbour, bond)` for the six bonds of each site.
    neighbors: Vec<[(usize, usize); 6]>,
    /// The six triangles sharing each site.
    site_triangles: Vec<[usize; 6]>,
}

pub const HORIZONTAL: usize = 0;
pub const VERTICAL: usize = 1;
pub const DIAGONAL: usize = 2;

impl Lattice {
    /// Builds an `lx` by `ly` periodic triangular lattice. Both dimensions must
    /// be at least 3, otherwise bonds double up and triangles degenerate.
    pub fn new(lx: usize, ly: usize) -> Result<Self> {
        if lx < 3 || ly < 3 {
            return Err(Error::LatticeTooSmall { lx, ly });
        }
        let n = lx * ly;
        let idx = |x: usize, y: usize| (y % ly) * lx + (x % lx);

        let mut bonds = Vec::with_capacity(3 * n);
        for y in 0..ly {
            for x in 0..lx {
                let s = idx(x, y);
                for (k, t) in [idx(x + 1, y), idx(x, y + 1), idx(x + 1, y + 1)]
                    .into_iter()
                    .enumerate()
                {
                    let class = if k == HORIZONTAL {
                        BondClass::Horizontal
                    } else {
                        BondClass::Interchain
                    };
                    bonds.push(Bond {
                        a: s.min(t),
                        b: s.max(t),
                        class,
                    });
                }
            }
        }

        let bond = |x: usize, y: usize, k: usize| 3 * idx(x, y) + k;
        let mut triangles = Vec::with_capacity(2 * n);
        for y in 0..ly {
            for x in 0..lx {
                triangles.push(Triangle {
                    sites: [idx(x, y), idx(x + 1, y), idx(x + 1, y + 1)],
                    bonds: [
                        bond(x, y, HORIZONTAL),
                        bond(x + 1, y, VERTICAL),
                        bond(x, y, DIAGONAL),
                    ],
                    kind: TriangleKind::Up,
                });
                triangles.push(Triangle {
                    sites: [idx(x, y), idx(x, y + 1), idx(x + 1, y + 1)],
                    bonds: [
                        bond(x, y + 1, HORIZONTAL),
                        bond(x, y, VERTICAL),
                        bond(x, y, DIAGONAL),
                    ],
                    kind: TriangleKind::Down,
                });
            }
        }

        let mut neighbors = vec![[(0, 0); 6]; n];
        let mut fill = vec![0usize; n];
        for (i, b) in bonds.iter().enumerate() {
            for (s, o) in [(b.a, b.b), (b.b, b.a)] {
                neighbors[s][fill[s]] = (o, i);
                fill[s] += 1;
            }
        }
        debug_assert!(fill.iter().all(|&f| f == 6));

        let mut site_triangles = vec![[0; 6]; n];
        let mut fill = vec![0usize; n];
        for (t, tri) in triangles.iter().enumerate() {
            for &s in &tri.sites {
                site_triangles[s][fill[s]] = t;
                fill[s] += 1;
            }
        }
        debug_assert!(fill.iter().all(|&f| f == 6));

        Ok(Self {
            lx,
            ly,
            bonds,
            triangles,
            neighbors,
            site_triangles,
        })
    }

    #[inline]
    pub fn lx(&self) -> usize {
        self.lx
    }

    #[inline]
    pub fn ly(&self) -> usize {
        self.ly
    }

    #[inline]
    pub fn num_sites(&self) -> usize {
        self.lx * self.ly
    }

    #[inline]
    pub fn site(&self, x: usize, y: usize) -> usize {
        (y % self.ly) * self.lx + (x % self.lx)
    }

    #[inline]
    pub fn coords(&self, site: usize) -> (usize, usize) {
        (site % self.lx, site / self.lx)
    }

    /// Index of the bond of class `k` ([`HORIZONTAL`], [`VERTICAL`],
    /// [`DIAGONAL`]) owned by site `(x, y)`.
    #[inline]
    pub fn bond_index(&self, x: usize, y: usize, k: usize) -> usize {
        3 * self.site(x, y) + k
    }

    #[inline]
    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    #[inline]
    pub fn triangles(&self) -> &[Triangle] {
        &self.triangles
    }

    #[inline]
    pub fn neighbors(&self, site: usize) -> &[(usize, usize); 6] {
        &self.neighbors[site]
    }

    #[inline]
    pub fn site_triangles(&self, site: usize) -> &[usize; 6] {
        &self.site_triangles[site]
    }

    /// Sites of row `y` in increasing `x`.
    pub fn row(&self, y: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.lx).map(move |x| self.site(x, y))
    }

    pub fn rows(&self) -> impl Iterator<Item = Vec<usize>> + '_ {
        (0..self.ly).map(|y| self.row(y).collect())
    }

    /// Seam at a single column.
    pub fn seam(&self, column: usize) -> Seam {
        let c = column % self.lx;
        let severed = (0..self.ly)
            .map(|y| self.bond_index(c, y, HORIZONTAL))
            .collect();
        let edge = [c, (c + 1) % self.lx];
        let softened = self
            .bonds
            .iter()
            .enumerate()
            .filter(|(_, b)| b.class == BondClass::Interchain)
            .filter(|(_, b)| {
                edge.contains(&self.coords(b.a).0) || edge.contains(&self.coords(b.b).0)
            })
            .map(|(i, _)| i)
            .collect();
        Seam {
            column: c,
            severed,
            softened,
        }
    }

    /// `n` equally spaced seams at columns `k * lx / n`, in left-to-right order.
    pub fn make_seams(&self, n: usize) -> Result<Vec<Seam>> {
        if n == 0 || n > self.lx || self.lx % n != 0 {
            return Err(Error::SeamCount { n, lx: self.lx });
        }
        let spacing = self.lx / n;
        Ok((0..n).map(|k| self.seam(k * spacing)).collect())
    }
}
