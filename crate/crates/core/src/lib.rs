//! Annealing toolkit for the anisotropic triangular Ising antiferromagnet.
//!
//! The model `H_A = J_x Σ_horizontal s_i s_j + J Σ_interchain s_i s_j` has a
//! stripe ground state, but every local move out of a wrong topological sector
//! must break the triangle rule. The crate provides four annealing protocols
//! for it:
//!
//! * thermal annealing with single-spin Metropolis ([`classical_mc`]),
//! * quantum annealing in a uniform transverse field, sampled with stochastic
//!   series expansion ([`sse_qmc`], [`anneal::run_qa`]),
//! * quantum annealing with site-random fields ([`anneal::run_qa_h`]),
//! * sweeping quantum annealing, which repeatedly cuts the lattice open along a
//!   seam and glues it back while the field is lowered ([`anneal::run_sqa`]),
//!
//! together with sector diagnostics ([`topology`]), exact references for small
//! lattices ([`oracle`]) and a multi-chain experiment runner ([`harness`]).
//!
//! Time is measured in Monte Carlo steps: `N` flip attempts for the classical
//! sampler, one diagonal plus one cluster pass for the quantum one.

pub mod anneal;
pub mod classical_mc;
pub mod error;
pub mod harness;
pub mod lattice;
pub mod model;
pub mod oracle;
pub mod series;
pub mod sse_qmc;
pub mod stats;
pub mod topology;

pub use anneal::{Method, Schedule};
pub use error::{Error, Result};
pub use lattice::{BondClass, Lattice, Seam};
pub use model::{Couplings, SpinConfig};
pub use series::{Sample, TimeSeries};
pub use topology::SectorLabel;

/// Random number generator used by every chain.
pub type ChainRng = rand_xoshiro::Xoshiro256PlusPlus;
