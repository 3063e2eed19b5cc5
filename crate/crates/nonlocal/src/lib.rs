//! Analysis toolkit for bipartite 2-input/2-output ("2222") nonlocal boxes.
//!
//! A *box* is the conditional behavior p(a,b|x,y) of two spacelike separated
//! parties, each with a binary setting and a binary outcome. This crate
//! constructs and validates boxes, computes their CHSH values, finds the
//! minimal-L1-norm joint quasi-probability distribution reproducing a box via
//! linear programming, and decides membership or violation for a family of
//! physical principles: no-signaling, locality, Uffink, TLM (the NPA level-1
//! set), Information Causality, Macroscopic Locality, Local Orthogonality,
//! and non-trivial communication complexity (inner-product game).
//!
//! Layout conventions, fixed throughout the crate:
//!
//! * Box tables index rows by the input pair (x,y) in order
//!   (0,0),(0,1),(1,0),(1,1) and columns by the outcome pair (a,b) in the
//!   same bit order.
//! * Quasi-probability atoms are indexed by the four hidden bits
//!   (a0,a1,b0,b1) in lexicographic order, a0 most significant.
//!
//! All values are immutable after construction and every operation is a pure
//! function, so concurrent use needs no coordination.

pub mod boxes;
pub mod optim;
pub mod principles;
pub mod quasiprob;
pub mod report;

mod error;

pub use boxes::{Behavior, Correlators, SliceSpec};
pub use error::Error;
pub use optim::{min_l1, solve_lp, L1Result, LpProblem, LpSolution, LpStatus};
pub use quasiprob::{Jqpd, MultiJqpd};

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Default tolerance for construction-time validation (row sums, ranges).
pub const VALIDATION_TOL: f64 = 1e-12;

/// Default tolerance for equality checks (marginal consistency, verdicts).
pub const EQUALITY_TOL: f64 = 1e-9;
