//! Rational dressing of the vacuum with rank-one residues.
//!
//! For poles `μ_i` the dressing matrix has the form
//! `ψ(λ) = I + Σ_i Σ_k λ/(λ - ε^{2k} μ_i) h^{2k} u_i ᵗw_i h^{-2k}`.
//! The vectors `u_i` follow the linear flow generated by `c±`; the `w_i`
//! are fixed by requiring `ψ⁻¹ψ = I`, which reduces to `r x r` linear systems
//! with the matrices `R̃_α`. The solution is `γ = ψ(∞)`, whose diagonal
//! entries are ratios of consecutive `det R̃_α`.

mod gamma;
mod loop_matrix;
mod spec;
mod state;

use num_complex::Complex64;

pub use gamma::{gamma_from_dressing, gamma_from_residues, lead_block, GammaField, LeadField};
pub use loop_matrix::{LoopMatrixSampler, POLE_EXCLUSION};
pub use spec::{Soliton, SolitonSpec, DEGENERACY_THRESHOLD};
pub use state::{
    block_of, build_r_tilde, compute_w, evolve_u, factor_family, inverse_residue, mode_phase, scaled_component,
    scaled_lead, DressingState, RTildeFamily, SINGULAR_THRESHOLD,
};

use crate::algebra::residue_mod;
use crate::error::{Result, TodaError};

/// Dress the vacuum at one point and return `γ`.
pub fn dress(spec: &SolitonSpec, z_minus: f64, z_plus: f64) -> Result<GammaField> {
    let state = DressingState::new(spec, z_minus, z_plus)?;
    gamma_from_dressing(spec, &state)
}

/// Both sides of `Σ_{k=1}^{N} z ε_{2N}^{-2kj} / (z - ε_{2N}^{2k}) = N z^{N-|j|_N} / (z^N - 1)`.
pub fn geometric_sum_identity_check(z: Complex64, j: i64, n: u32) -> Result<(Complex64, Complex64)> {
    if n == 0 {
        return Err(TodaError::InvalidSpec("N must be positive".into()));
    }
    let zn = z.powi(n as i32);
    let gap = (zn - 1.0).norm();
    if gap < 1e-12 {
        return Err(TodaError::DegenerateParameters {
            quantity: "z^N - 1".into(),
            value: gap,
        });
    }
    let order = 2 * n;
    let lhs: Complex64 = (1..=n as i64)
        .map(|k| z * crate::algebra::root_of_unity(order, -2 * k * j) / (z - crate::algebra::root_of_unity(order, 2 * k)))
        .sum();
    let rhs = z.powi((n as i64 - residue_mod(j, n)) as i32) * n as f64 / (zn - 1.0);
    Ok((lhs, rhs))
}
