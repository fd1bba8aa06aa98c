use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{ClassKind, TodaClass};
use crate::error::{Result, TodaError};

use super::fd::{central_first, Stencil};
use super::{GridSpec, ResidualReport, PDE_TOLERANCE};

/// Labels of the equations checked for a class: `α = 2..=s` for the odd
/// family, `α = 1..=s` for the even one.
fn equation_alphas(class: &TodaClass) -> std::ops::RangeInclusive<usize> {
    match class.kind() {
        ClassKind::Odd => 2..=class.s(),
        ClassKind::Even => 1..=class.s(),
    }
}

/// Right-hand side of the scalar Toda equation for `α`, from the fields
/// `f[α-1] = Γ_α`.
fn toda_rhs(class: &TodaClass, m2: Complex64, f: &[Complex64], alpha: usize) -> Complex64 {
    let generic = |a: usize| -m2 * (f[a] / f[a - 1] - f[a - 1] / f[a - 2]);
    match (class.kind(), alpha) {
        (ClassKind::Even, 1) => -m2 * 0.5 * (1.0 / f[0] - f[0]) * f[1],
        (ClassKind::Even, 2) => -m2 * f[2] / f[1] + m2 * 0.5 * (1.0 / f[0] + f[0]) * f[1],
        _ => generic(alpha),
    }
}

/// Residuals `|∂₊(Γ_α⁻¹ ∂₋Γ_α) - rhs_α|` at one point, or `None` if any
/// stencil sample is singular or non-finite.
fn point_residuals<F>(class: &TodaClass, m: Complex64, sampler: &F, zm: f64, zp: f64, step_factor: f64) -> Option<Vec<f64>>
where
    F: Fn(f64, f64) -> Option<Vec<Complex64>>,
{
    let (hm, hp) = (step_factor * (1.0 + zm.abs()), step_factor * (1.0 + zp.abs()));
    let nb = class.blocks();
    let stencil = Stencil::collect(|a, b| {
        let f = sampler(zm + a as f64 * hm, zp + b as f64 * hp)?;
        (f.len() == nb && f.iter().all(|x| x.is_finite() && x.norm() > 0.0)).then_some(f)
    })?;
    let m2 = m * m;
    let centre = stencil.at(0, 0);
    let out: Vec<f64> = equation_alphas(class)
        .map(|alpha| {
            let idx = alpha - 1;
            let inner = |b: i32| central_first(|a| stencil.at(a, b)[idx], hm) / stencil.at(0, b)[idx];
            let lhs = central_first(inner, hp);
            (lhs - toda_rhs(class, m2, centre, alpha)).norm()
        })
        .collect();
    out.iter().all(|x| x.is_finite()).then_some(out)
}

/// Finite-difference residual of the scalar Toda system over a grid.
///
/// `sampler(z⁻, z⁺)` returns the unknowns `α = 1..=2s-1` (see
/// [`crate::dressing::GammaField::toda_fields`]) or `None` at a
/// singularity; points whose stencil touches a singularity are skipped.
pub fn toda_residual<F>(class: &TodaClass, m: Complex64, sampler: F, grid: &GridSpec) -> ResidualReport
where
    F: Fn(f64, f64) -> Option<Vec<Complex64>>,
{
    let labels = equation_alphas(class).map(|a| format!("alpha={a}")).collect();
    let mut report = ResidualReport::new("toda", labels, PDE_TOLERANCE, Some(grid.step_factor));
    for (zm, zp) in grid.points() {
        report.total_points += 1;
        match point_residuals(class, m, &sampler, zm, zp, grid.step_factor) {
            Some(res) => {
                for (eq, r) in report.equations.iter_mut().zip(res) {
                    eq.record(r, (zm, zp));
                }
            }
            None => report.skipped_points += 1,
        }
    }
    report.finish()
}

/// Finite-difference residual of `∂₊∂₋F = -m²(e^{-2F} - e^{F})`.
///
/// `sampler` returns `F` on any branch; each stencil is unwrapped relative
/// to its centre before differencing.
pub fn dbm_residual<F>(m: Complex64, sampler: F, grid: &GridSpec) -> ResidualReport
where
    F: Fn(f64, f64) -> Option<Complex64>,
{
    let mut report = ResidualReport::new("dbm", vec!["F".into()], PDE_TOLERANCE, Some(grid.step_factor));
    let m2 = m * m;
    for (zm, zp) in grid.points() {
        report.total_points += 1;
        let (hm, hp) = (grid.step_at(zm), grid.step_at(zp));
        let Some(centre) = sampler(zm, zp).filter(|f| f.is_finite()) else {
            report.skipped_points += 1;
            continue;
        };
        let stencil = Stencil::collect(|a, b| {
            let f = sampler(zm + a as f64 * hm, zp + b as f64 * hp).filter(|f| f.is_finite())?;
            let turns = ((centre.im - f.im) / (2.0 * PI)).round();
            Some(f + Complex64::new(0.0, 2.0 * PI * turns))
        });
        let Some(stencil) = stencil else {
            report.skipped_points += 1;
            continue;
        };
        let inner = |b: i32| central_first(|a| *stencil.at(a, b), hm);
        let lhs = central_first(inner, hp);
        let f = *stencil.at(0, 0);
        let rhs = -m2 * ((-2.0 * f).exp() - f.exp());
        let r = (lhs - rhs).norm();
        if r.is_finite() {
            report.equations[0].record(r, (zm, zp));
        } else {
            report.skipped_points += 1;
        }
    }
    report.finish()
}

/// Observed order of the Toda residual under step halving.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceEstimate {
    pub step_factors: [f64; 2],
    pub residuals: [f64; 2],
    pub order: f64,
}

/// Max Toda residual over `points` at `step_factor` and `step_factor / 2`,
/// and `log₂` of their ratio. The step must be coarse enough that
/// truncation error dominates rounding.
pub fn convergence_order<F>(
    class: &TodaClass,
    m: Complex64,
    sampler: F,
    points: &[(f64, f64)],
    step_factor: f64,
) -> Result<ConvergenceEstimate>
where
    F: Fn(f64, f64) -> Option<Vec<Complex64>>,
{
    let factors = [step_factor, step_factor / 2.0];
    let mut residuals = [0.0; 2];
    for (slot, &h) in residuals.iter_mut().zip(&factors) {
        for &(zm, zp) in points {
            let res = point_residuals(class, m, &sampler, zm, zp, h).ok_or(TodaError::SolutionSingular {
                alpha: 0,
                z_minus: zm,
                z_plus: zp,
            })?;
            *slot = res.into_iter().fold(*slot, f64::max);
        }
    }
    if !(residuals[1] > 0.0) {
        return Err(TodaError::DegenerateParameters {
            quantity: "fine-step residual".into(),
            value: residuals[1],
        });
    }
    Ok(ConvergenceEstimate {
        step_factors: factors,
        residuals,
        order: (residuals[0] / residuals[1]).log2(),
    })
}
