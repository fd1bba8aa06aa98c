use num_complex::Complex64;

use crate::algebra::TodaClass;
use crate::error::{Result, TodaError};
use crate::linalg::{pairwise_sum, ComplexMatrix, ONE};

use super::spec::SolitonSpec;
use super::state::DressingState;

/// Minimum distance from a pole at which `ψ` or `ψ⁻¹` is evaluated.
pub const POLE_EXCLUSION: f64 = 1e-9;

/// Evaluates the dressing matrix
///
/// `ψ(λ) = I + Σ_i Σ_{k=1}^{N} λ/(λ - ε^{2k} μ_i) h^{2k} P_i h^{-2k}`
///
/// and its inverse (same form with `ν_i`, `Q_i`) at one spacetime point.
#[derive(Debug, Clone)]
pub struct LoopMatrixSampler {
    class: TodaClass,
    poles: Vec<Complex64>,
    inverse_poles: Vec<Complex64>,
    p: Vec<ComplexMatrix>,
    q: Vec<ComplexMatrix>,
}

impl LoopMatrixSampler {
    pub fn new(spec: &SolitonSpec, state: &DressingState) -> Self {
        LoopMatrixSampler {
            class: spec.class(),
            poles: spec.poles(),
            inverse_poles: spec.inverse_poles(),
            p: state.p.clone(),
            q: state.q.clone(),
        }
    }

    /// All poles `ε^{2k} μ_i` of `ψ`.
    pub fn psi_poles(&self) -> Vec<Complex64> {
        self.orbit(&self.poles)
    }

    /// All poles `ε^{2k} ν_i` of `ψ⁻¹`.
    pub fn psi_inv_poles(&self) -> Vec<Complex64> {
        self.orbit(&self.inverse_poles)
    }

    fn orbit(&self, base: &[Complex64]) -> Vec<Complex64> {
        let nb = self.class.blocks() as i64;
        base.iter()
            .flat_map(|mu| (1..=nb).map(move |k| (k, *mu)))
            .map(|(k, mu)| self.class.eps(2 * k) * mu)
            .collect()
    }

    pub fn psi(&self, lambda: Complex64) -> Result<ComplexMatrix> {
        self.evaluate(Some(lambda), &self.poles, &self.p)
    }

    pub fn psi_inv(&self, lambda: Complex64) -> Result<ComplexMatrix> {
        self.evaluate(Some(lambda), &self.inverse_poles, &self.q)
    }

    /// `ψ_∞ = γ`: every `λ/(λ - pole)` factor replaced by its limit 1.
    pub fn psi_infinity(&self) -> ComplexMatrix {
        self.evaluate(None, &self.poles, &self.p).expect("no poles at infinity")
    }

    pub fn psi_inv_infinity(&self) -> ComplexMatrix {
        self.evaluate(None, &self.inverse_poles, &self.q).expect("no poles at infinity")
    }

    fn evaluate(&self, lambda: Option<Complex64>, poles: &[Complex64], residues: &[ComplexMatrix]) -> Result<ComplexMatrix> {
        let n = self.class.dim();
        let nb = self.class.blocks() as i64;
        let mut total = ComplexMatrix::identity(n);
        for (mu, res) in poles.iter().zip(residues) {
            let mut terms = Vec::with_capacity(nb as usize);
            for k in 1..=nb {
                let pole = self.class.eps(2 * k) * mu;
                let factor = match lambda {
                    None => ONE,
                    Some(l) => {
                        let distance = (l - pole).norm();
                        if distance < POLE_EXCLUSION {
                            return Err(TodaError::NearPole {
                                lambda_re: l.re,
                                lambda_im: l.im,
                                distance,
                            });
                        }
                        l / (l - pole)
                    }
                };
                terms.push(self.conjugate_by_h(res, 2 * k).scale(factor));
            }
            if let Some(orbit) = pairwise_sum(terms) {
                total = &total + &orbit;
            }
        }
        Ok(total)
    }

    /// `h^p X h^{-p}` from the integer exponents of `h`.
    fn conjugate_by_h(&self, x: &ComplexMatrix, p: i64) -> ComplexMatrix {
        let c = &self.class;
        ComplexMatrix::from_fn(x.rows(), x.cols(), |i, j| {
            x[(i, j)] * c.eps(p * (c.h_exponent(i) - c.h_exponent(j)))
        })
    }
}
