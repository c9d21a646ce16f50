//! Nonconvex ADMM solvers for low-rank semidefinite reformulations of
//! quadratic combinatorial problems (MAX-CUT, community detection, image
//! segmentation, partially observed nonnegative factorization).
//!
//! The solvers:
//!
//! * [`admm_matrix`]: linearized ADMM on `Z = (XYᵀ)_Ω, X = Y, Y ∈ C` with the
//!   closed-form `(X, Z)` update.
//! * [`admm_vector`]: two-block ADMM on `min g(x) s.t. x = y, y ∈ C`.
//! * [`sdr`]: Douglas–Rachford splitting on the convex relaxation (baseline).
//!
//! [`rounding`] turns their output into sign vectors and [`diagnostics`]
//! evaluates augmented Lagrangians and the descent-lemma constants.

pub mod admm_matrix;
pub mod admm_vector;
pub mod cli;
pub mod constraints;
pub mod diagnostics;
pub mod error;
pub mod linalg;
pub mod linmaps;
pub mod problems;
pub mod rounding;
pub mod sdr;

pub use constraints::ConstraintSet;
pub use error::{Error, Result};
pub use linalg::{Factor, ShiftedSym, SparsityPattern, SymSparse};
pub use linmaps::{LinearMap, MapKind};
