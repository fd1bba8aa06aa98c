//! Numerical oracles for the constructed solutions.
//!
//! Everything here treats a solution as a black-box sampler of fields on
//! the `(z⁻, z⁺)` plane and checks it against an equation or identity:
//! finite-difference residuals of the Toda systems and the DBM equation,
//! the zero-curvature condition on the circle `|λ| = 1`, and the algebraic
//! invariants of the dressing construction.

mod curvature;
mod fd;
mod invariants;
mod pde;
pub mod regular;

use num_complex::Complex64;
use serde::Serialize;

use crate::dressing::{dress, SolitonSpec};
use crate::error::{Result, TodaError};

pub use curvature::{connection_agreement, connection_residues, default_lambda_samples, zero_curvature_residual};
pub use fd::{central_first, STENCIL};
pub use invariants::{even_odd_correspondence, invariant_suite, random_points, random_spec};
pub use pde::{convergence_order, dbm_residual, toda_residual, ConvergenceEstimate};

/// Absolute tolerance for finite-difference residuals.
pub const PDE_TOLERANCE: f64 = 1e-6;
/// Tolerance for algebraic identities.
pub const ALGEBRAIC_TOLERANCE: f64 = 1e-9;
/// Tolerance for the zero-curvature residual.
pub const CURVATURE_TOLERANCE: f64 = 1e-5;
/// Default finite-difference step factor: `h = factor · (1 + |z|)`.
pub const DEFAULT_STEP_FACTOR: f64 = 1e-3;

/// A rectangular grid in `(z⁻, z⁺)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridSpec {
    pub z_minus: [f64; 2],
    pub z_plus: [f64; 2],
    pub n_minus: usize,
    pub n_plus: usize,
    pub step_factor: f64,
}

impl GridSpec {
    pub fn new(z_minus: [f64; 2], z_plus: [f64; 2], n_minus: usize, n_plus: usize, step_factor: f64) -> Result<Self> {
        let bad = |msg: String| Err(TodaError::InvalidSpec(format!("grid: {msg}")));
        if !(z_minus[1] > z_minus[0]) || !z_minus.iter().all(|x| x.is_finite()) {
            return bad(format!("z_minus range {z_minus:?} must be increasing"));
        }
        if !(z_plus[1] > z_plus[0]) || !z_plus.iter().all(|x| x.is_finite()) {
            return bad(format!("z_plus range {z_plus:?} must be increasing"));
        }
        for (name, n) in [("n_minus", n_minus), ("n_plus", n_plus)] {
            if n < 5 || n % 2 == 0 {
                return bad(format!("{name} = {n} must be odd and at least 5"));
            }
        }
        if !(step_factor > 0.0) || !step_factor.is_finite() {
            return bad(format!("step factor {step_factor} must be positive"));
        }
        Ok(GridSpec {
            z_minus,
            z_plus,
            n_minus,
            n_plus,
            step_factor,
        })
    }

    /// Square grid `[lo, hi]²` with `n x n` points and the default step.
    pub fn square(lo: f64, hi: f64, n: usize) -> Result<Self> {
        Self::new([lo, hi], [lo, hi], n, n, DEFAULT_STEP_FACTOR)
    }

    pub fn with_step_factor(&self, step_factor: f64) -> Result<Self> {
        Self::new(self.z_minus, self.z_plus, self.n_minus, self.n_plus, step_factor)
    }

    pub fn z_minus_values(&self) -> Vec<f64> {
        linspace(self.z_minus, self.n_minus)
    }

    pub fn z_plus_values(&self) -> Vec<f64> {
        linspace(self.z_plus, self.n_plus)
    }

    /// All grid points, `z⁺` in the outer loop.
    pub fn points(&self) -> Vec<(f64, f64)> {
        let zm = self.z_minus_values();
        self.z_plus_values()
            .into_iter()
            .flat_map(|zp| zm.iter().map(move |&z| (z, zp)))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.n_minus * self.n_plus
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Step used at coordinate `z`.
    pub fn step_at(&self, z: f64) -> f64 {
        self.step_factor * (1.0 + z.abs())
    }
}

fn linspace(range: [f64; 2], n: usize) -> Vec<f64> {
    let d = (range[1] - range[0]) / (n - 1) as f64;
    (0..n)
        .map(|k| if k == n - 1 { range[1] } else { range[0] + d * k as f64 })
        .collect()
}

/// Statistics of one equation or identity.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EquationStat {
    pub label: String,
    pub max_abs: f64,
    pub mean_abs: f64,
    /// Where the maximum was attained.
    pub worst_at: Option<[f64; 2]>,
    pub samples: usize,
}

impl EquationStat {
    pub fn new(label: impl Into<String>) -> Self {
        EquationStat {
            label: label.into(),
            max_abs: 0.0,
            mean_abs: 0.0,
            worst_at: None,
            samples: 0,
        }
    }

    /// Fold in one residual value; the mean is kept as a running sum until
    /// [`ResidualReport::finish`].
    pub fn record(&mut self, value: f64, at: (f64, f64)) {
        if value > self.max_abs || self.worst_at.is_none() {
            self.max_abs = value.max(self.max_abs);
            self.worst_at = Some([at.0, at.1]);
        }
        self.mean_abs += value;
        self.samples += 1;
    }
}

/// Result of one check over a set of points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResidualReport {
    pub check: String,
    pub equations: Vec<EquationStat>,
    pub total_points: usize,
    pub skipped_points: usize,
    /// Loop-parameter samples dropped for lying on a dressing pole.
    pub skipped_lambdas: usize,
    pub step_factor: Option<f64>,
    pub tolerance: f64,
    pub max_abs: f64,
    pub passed: bool,
}

impl ResidualReport {
    pub fn new(check: impl Into<String>, labels: Vec<String>, tolerance: f64, step_factor: Option<f64>) -> Self {
        ResidualReport {
            check: check.into(),
            equations: labels.into_iter().map(EquationStat::new).collect(),
            total_points: 0,
            skipped_points: 0,
            skipped_lambdas: 0,
            step_factor,
            tolerance,
            max_abs: 0.0,
            passed: false,
        }
    }

    /// Replace the tolerance and redo the verdict of a finished report.
    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        let evaluated = self.equations.iter().any(|e| e.samples > 0);
        self.passed = evaluated && self.max_abs < tolerance;
        self
    }

    /// Turn running sums into means and set the verdict. A report in which
    /// every point was skipped fails.
    pub fn finish(mut self) -> Self {
        for eq in &mut self.equations {
            if eq.samples > 0 {
                eq.mean_abs /= eq.samples as f64;
            }
        }
        self.max_abs = self.equations.iter().map(|e| e.max_abs).fold(0.0, f64::max);
        let evaluated = self.equations.iter().any(|e| e.samples > 0);
        self.passed = evaluated && self.max_abs < self.tolerance;
        self
    }
}

/// Field sampler from the dressing: the scalar Toda unknowns
/// (`Γ₁` normalized, see [`crate::dressing::GammaField::toda_fields`]),
/// or `None` at solution singularities.
pub fn dressed_fields(spec: &SolitonSpec) -> impl Fn(f64, f64) -> Option<Vec<Complex64>> + '_ {
    move |zm, zp| dress(spec, zm, zp).ok().map(|g| g.toda_fields())
}
