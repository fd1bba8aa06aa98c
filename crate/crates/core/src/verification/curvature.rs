use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::LoopStructure;
use crate::dressing::{gamma_from_dressing, DressingState, LoopMatrixSampler, SolitonSpec, POLE_EXCLUSION};
use crate::error::Result;
use crate::linalg::ComplexMatrix;

use super::fd::{Stencil, STENCIL};
use super::{GridSpec, ResidualReport, CURVATURE_TOLERANCE};

/// `count` points on `|λ| = 1`, equally spaced and rotated by a phase
/// drawn from `seed`.
pub fn default_lambda_samples(count: usize, seed: u64) -> Vec<Complex64> {
    let phase: f64 = ChaCha8Rng::seed_from_u64(seed).gen_range(0.0..2.0 * PI / count.max(1) as f64);
    (0..count)
        .map(|k| Complex64::from_polar(1.0, phase + 2.0 * PI * k as f64 / count as f64))
        .collect()
}

fn derivative(samples: impl Fn(i32) -> ComplexMatrix, h: f64) -> ComplexMatrix {
    let mut acc: Option<ComplexMatrix> = None;
    for &(k, w) in &STENCIL {
        let term = samples(k).scale(Complex64::new(w / (12.0 * h), 0.0));
        acc = Some(match acc {
            Some(a) => &a + &term,
            None => term,
        });
    }
    acc.expect("stencil is non-empty")
}

fn near_pole(lambda: Complex64, poles: &[Complex64]) -> bool {
    poles.iter().any(|p| (lambda - p).norm() < POLE_EXCLUSION)
}

fn all_poles(spec: &SolitonSpec) -> Vec<Complex64> {
    let class = spec.class();
    let nb = class.blocks() as i64;
    spec.poles()
        .into_iter()
        .chain(spec.inverse_poles())
        .flat_map(|mu| (1..=nb).map(move |k| class.eps(2 * k) * mu))
        .collect()
}

/// Zero-curvature residual of the connection built from `γ`:
///
/// `ω₋ = γ⁻¹∂₋γ + λ⁻¹c₋`, `ω₊ = λ γ⁻¹c₊γ`,
/// `F = ∂₊ω₋ - ∂₋ω₊ + [ω₊, ω₋]`,
///
/// reported as `max |F_ij|` over the grid and the `λ` samples. Samples of
/// `λ` within the pole exclusion radius are dropped and counted.
pub fn zero_curvature_residual(spec: &SolitonSpec, grid: &GridSpec, lambdas: &[Complex64]) -> Result<ResidualReport> {
    let structure = LoopStructure::new(spec.class(), spec.m())?;
    let poles = all_poles(spec);
    let usable: Vec<Complex64> = lambdas.iter().copied().filter(|l| !near_pole(*l, &poles)).collect();
    let mut report = ResidualReport::new("zero_curvature", vec!["F".into()], CURVATURE_TOLERANCE, Some(grid.step_factor));
    report.skipped_lambdas = lambdas.len() - usable.len();
    for (zm, zp) in grid.points() {
        report.total_points += 1;
        let (hm, hp) = (grid.step_at(zm), grid.step_at(zp));
        let gammas = Stencil::collect(|a, b| {
            let state = DressingState::with_structure(spec, &structure, zm + a as f64 * hm, zp + b as f64 * hp).ok()?;
            let g = gamma_from_dressing(spec, &state).ok()?.assemble();
            let g_inv = g.inverse().ok()?;
            Some((g, g_inv))
        });
        let Some(gammas) = gammas else {
            report.skipped_points += 1;
            continue;
        };
        // A(b) = γ⁻¹∂₋γ along the z⁺ column, C(a) = γ⁻¹c₊γ along the z⁻ row.
        let pull_minus = |b: i32| &gammas.at(0, b).1 * &derivative(|a| gammas.at(a, b).0.clone(), hm);
        let dressed_plus = |a: i32| {
            let (g, g_inv) = gammas.at(a, 0);
            &(g_inv * &structure.c_plus) * g
        };
        let a0 = pull_minus(0);
        let c0 = dressed_plus(0);
        let d_plus_a = derivative(pull_minus, hp);
        let d_minus_c = derivative(dressed_plus, hm);
        for &lambda in &usable {
            let omega_minus = &a0 + &structure.c_minus.scale(lambda.inv());
            let omega_plus = c0.scale(lambda);
            let f = &(&d_plus_a - &d_minus_c.scale(lambda)) + &ComplexMatrix::commutator(&omega_plus, &omega_minus);
            let r = f.max_abs();
            if r.is_finite() {
                report.equations[0].record(r, (zm, zp));
            }
        }
    }
    Ok(report.finish())
}

/// `ψ` samplers on the two one-dimensional stencils through a point.
struct PsiStencil {
    centre: LoopMatrixSampler,
    minus: Vec<LoopMatrixSampler>,
    plus: Vec<LoopMatrixSampler>,
    steps: (f64, f64),
}

impl PsiStencil {
    fn new(spec: &SolitonSpec, structure: &LoopStructure, zm: f64, zp: f64, step_factor: f64) -> Result<Self> {
        let (hm, hp) = (step_factor * (1.0 + zm.abs()), step_factor * (1.0 + zp.abs()));
        let at = |a: f64, b: f64| -> Result<LoopMatrixSampler> {
            let state = DressingState::with_structure(spec, structure, a, b)?;
            Ok(LoopMatrixSampler::new(spec, &state))
        };
        let mut minus = Vec::with_capacity(4);
        let mut plus = Vec::with_capacity(4);
        for &(k, _) in &STENCIL {
            minus.push(at(zm + k as f64 * hm, zp)?);
            plus.push(at(zm, zp + k as f64 * hp)?);
        }
        Ok(PsiStencil {
            centre: at(zm, zp)?,
            minus,
            plus,
            steps: (hm, hp),
        })
    }

    /// `(ω₋, ω₊)` from `ψ`: `ω± = ψ⁻¹∂±ψ + λ^{∓1} ψ⁻¹c±ψ`.
    fn connection(&self, structure: &LoopStructure, lambda: Complex64) -> Result<(ComplexMatrix, ComplexMatrix)> {
        let psi = self.centre.psi(lambda)?;
        let psi_inv = self.centre.psi_inv(lambda)?;
        let side = |samplers: &[LoopMatrixSampler], h: f64| -> Result<ComplexMatrix> {
            let values = samplers.iter().map(|s| s.psi(lambda)).collect::<Result<Vec<_>>>()?;
            Ok(derivative(|k| values[STENCIL.iter().position(|&(o, _)| o == k).expect("stencil offset")].clone(), h))
        };
        let d_minus = side(&self.minus, self.steps.0)?;
        let d_plus = side(&self.plus, self.steps.1)?;
        let sandwich = |c: &ComplexMatrix| &(&psi_inv * c) * &psi;
        let omega_minus = &(&psi_inv * &d_minus) + &sandwich(&structure.c_minus).scale(lambda.inv());
        let omega_plus = &(&psi_inv * &d_plus) + &sandwich(&structure.c_plus).scale(lambda);
        Ok((omega_minus, omega_plus))
    }
}

/// Largest difference between the connections built from `ψ` and from `γ`
/// at one point, over the given `λ`.
pub fn connection_agreement(spec: &SolitonSpec, z_minus: f64, z_plus: f64, lambdas: &[Complex64]) -> Result<f64> {
    let structure = LoopStructure::new(spec.class(), spec.m())?;
    let step = 1e-3;
    let psi = PsiStencil::new(spec, &structure, z_minus, z_plus, step)?;
    let hm = psi.steps.0;
    let gamma = |a: f64, b: f64| -> Result<ComplexMatrix> {
        let state = DressingState::with_structure(spec, &structure, a, b)?;
        Ok(gamma_from_dressing(spec, &state)?.assemble())
    };
    let g = gamma(z_minus, z_plus)?;
    let g_inv = g.inverse()?;
    let mut minus_samples = Vec::with_capacity(4);
    for &(k, _) in &STENCIL {
        minus_samples.push(gamma(z_minus + k as f64 * hm, z_plus)?);
    }
    let d_minus = derivative(|k| minus_samples[STENCIL.iter().position(|&(o, _)| o == k).expect("offset")].clone(), hm);
    let pulled = &g_inv * &d_minus;
    let dressed_plus = &(&g_inv * &structure.c_plus) * &g;
    let mut worst = 0.0f64;
    for &lambda in lambdas {
        let (om, op) = psi.connection(&structure, lambda)?;
        let expected_minus = &pulled + &structure.c_minus.scale(lambda.inv());
        let expected_plus = dressed_plus.scale(lambda);
        worst = worst.max((&om - &expected_minus).max_abs()).max((&op - &expected_plus).max_abs());
    }
    Ok(worst)
}

/// `(λ - p) ω±(λ)` extrapolated to `λ → p` at every pole `p = μ_i, ν_i`
/// of the dressing; returns the largest entry. The `ψ`-built connection
/// has no poles there, so the result is zero up to discretization error.
pub fn connection_residues(spec: &SolitonSpec, z_minus: f64, z_plus: f64) -> Result<f64> {
    let structure = LoopStructure::new(spec.class(), spec.m())?;
    let psi = PsiStencil::new(spec, &structure, z_minus, z_plus, 1e-4)?;
    let poles = all_poles(spec);
    let mut worst = 0.0f64;
    for (idx, &p) in spec.poles().iter().chain(spec.inverse_poles().iter()).enumerate() {
        let gap = poles
            .iter()
            .filter(|q| (**q - p).norm() > POLE_EXCLUSION)
            .map(|q| (q - p).norm())
            .fold(f64::INFINITY, f64::min);
        let radius = (1e-2f64).min(0.1 * gap);
        let direction = Complex64::from_polar(1.0, 0.3 + 0.7 * idx as f64);
        let scaled = |rho: f64| -> Result<(ComplexMatrix, ComplexMatrix)> {
            let offset = direction * rho;
            let (om, op) = psi.connection(&structure, p + offset)?;
            Ok((om.scale(offset), op.scale(offset)))
        };
        let samples = [scaled(radius)?, scaled(radius / 2.0)?, scaled(radius / 4.0)?];
        for pick in [0usize, 1] {
            let get = |k: usize| if pick == 0 { &samples[k].0 } else { &samples[k].1 };
            // Two Richardson levels on R(ρ) = R₀ + aρ + bρ² + ...
            let level1 = |k: usize| &get(k + 1).scale(Complex64::new(2.0, 0.0)) - get(k);
            let l0 = level1(0);
            let l1 = level1(1);
            let extrapolated = (&l1.scale(Complex64::new(4.0, 0.0)) - &l0).scale(Complex64::new(1.0 / 3.0, 0.0));
            worst = worst.max(extrapolated.max_abs());
        }
    }
    Ok(worst)
}
