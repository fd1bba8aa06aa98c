//! Soliton solutions of abelian twisted loop Toda equations for `GL_n(ℂ)`.
//!
//! Two families are covered, `n = 2s - 1` and `n = 2s`, both twisted by an
//! outer automorphism of order `2(2s - 1)`. Solutions are produced two ways:
//!
//! * [`dressing`] runs rational dressing of the vacuum with rank-one
//!   residues and reads the fields off as ratios of `r x r` determinants;
//! * [`closed_forms`] evaluates the explicit one- and two-soliton formulas,
//!   including the Dodd–Bullough–Mikhailov (Tzitzéica) case `s = 2`.
//!
//! [`verification`] holds the numerical oracles (finite-difference PDE
//! residuals, zero curvature, algebraic invariants) and [`cli`] the
//! command-line front end.

pub mod algebra;
pub mod cli;
pub mod closed_forms;
pub mod dressing;
pub mod error;
pub mod linalg;
pub mod verification;

pub use algebra::{ClassKind, LoopStructure, TodaClass};
pub use error::{Result, TodaError};
pub use linalg::{ComplexMatrix, ComplexVector};
