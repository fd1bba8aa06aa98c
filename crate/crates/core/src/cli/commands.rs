use num_complex::Complex64;
use serde::Serialize;

use crate::algebra::{ClassKind, TodaClass};
use crate::closed_forms::{
    odd_gamma_field, one_soliton_even, two_soliton_even, EvenSolitonParams, OddSolitonParams,
};
use crate::dressing::{dress, evolve_u, GammaField, RTildeFamily, SolitonSpec};
use crate::error::{Result, TodaError};
use crate::verification::{
    connection_agreement, connection_residues, convergence_order, dbm_residual, default_lambda_samples, dressed_fields,
    invariant_suite, random_points, toda_residual, zero_curvature_residual, ConvergenceEstimate, GridSpec,
    ResidualReport,
};

use super::output::FieldRow;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Relative tolerance for dressing against closed forms.
pub const COMPARE_TOLERANCE: f64 = 1e-8;
/// Tolerance on the connection checks at isolated points.
pub const CONNECTION_TOLERANCE: f64 = 1e-6;
/// Step factor of the coarse step used to measure the convergence order.
pub const CONVERGENCE_STEP: f64 = 0.04;
pub const EXPECTED_ORDER: f64 = 4.0;
pub const ORDER_TOLERANCE: f64 = 0.3;
/// Largest side of the grid used for the zero-curvature check.
pub const CURVATURE_GRID_MAX: usize = 9;

/// Closed-form evaluator for `r ≤ 2`.
#[derive(Debug, Clone)]
pub enum ClosedForm {
    Vacuum(TodaClass),
    Odd(OddSolitonParams),
    Even(EvenSolitonParams),
}

impl ClosedForm {
    pub fn from_spec(spec: &SolitonSpec) -> Result<Self> {
        if spec.rank() > 2 {
            return Err(TodaError::InvalidSpec(format!(
                "closed forms cover r <= 2, got r = {}; use `dress`",
                spec.rank()
            )));
        }
        if spec.rank() == 0 {
            return Ok(ClosedForm::Vacuum(spec.class()));
        }
        Ok(match spec.class().kind() {
            ClassKind::Odd => ClosedForm::Odd(OddSolitonParams::from_spec(spec)?),
            ClassKind::Even => ClosedForm::Even(EvenSolitonParams::from_spec(spec)?),
        })
    }

    pub fn gamma(&self, z_minus: f64, z_plus: f64) -> Result<GammaField> {
        match self {
            ClosedForm::Vacuum(class) => Ok(GammaField::identity(*class)),
            ClosedForm::Odd(p) => odd_gamma_field(p, z_minus, z_plus),
            ClosedForm::Even(p) if p.modes.len() == 1 => one_soliton_even(p, z_minus, z_plus),
            ClosedForm::Even(p) => two_soliton_even(p, z_minus, z_plus),
        }
    }
}

/// The independent scalar unknowns written to data files: `α = 2..=s`
/// for the odd family, `α = 1..=s` for the even one.
pub fn output_alphas(class: &TodaClass) -> Vec<usize> {
    match class.kind() {
        ClassKind::Odd => (2..=class.s()).collect(),
        ClassKind::Even => (1..=class.s()).collect(),
    }
}

fn rows_at(
    alphas: &[usize],
    z_minus: f64,
    z_plus: f64,
    gamma: Result<GammaField>,
    out: &mut Vec<FieldRow>,
) -> Result<()> {
    let fields = match gamma {
        Ok(g) => Some(g.toda_fields()),
        Err(TodaError::SolutionSingular { .. }) => None,
        Err(e) => return Err(e),
    };
    for &alpha in alphas {
        out.push(FieldRow::new(z_minus, z_plus, alpha, fields.as_ref().map(|f| f[alpha - 1])));
    }
    Ok(())
}

/// Closed-form fields over the grid.
pub fn evaluate_rows(spec: &SolitonSpec, grid: &GridSpec) -> Result<Vec<FieldRow>> {
    let closed = ClosedForm::from_spec(spec)?;
    let alphas = output_alphas(&spec.class());
    let mut rows = Vec::with_capacity(grid.len() * alphas.len());
    for (zm, zp) in grid.points() {
        rows_at(&alphas, zm, zp, closed.gamma(zm, zp), &mut rows)?;
    }
    Ok(rows)
}

/// `log₁₀ |det R̃_α|`, `α = 1..=2s`, at one grid point (`None` for an
/// exactly vanishing determinant).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeterminantRow {
    pub z_minus: f64,
    pub z_plus: f64,
    pub log10_abs_det: Vec<Option<f64>>,
}

/// Dressed fields over the grid, with determinant diagnostics.
pub fn dress_rows(spec: &SolitonSpec, grid: &GridSpec) -> Result<(Vec<FieldRow>, Vec<DeterminantRow>)> {
    let alphas = output_alphas(&spec.class());
    let mut rows = Vec::with_capacity(grid.len() * alphas.len());
    let mut dets = Vec::with_capacity(grid.len());
    for (zm, zp) in grid.points() {
        rows_at(&alphas, zm, zp, dress(spec, zm, zp), &mut rows)?;
        let family = RTildeFamily::new(spec, &evolve_u(spec, zm, zp));
        let log10_abs_det = (1..=family.len())
            .map(|a| {
                let d = family.get(a).det().ok()?.norm();
                (d > 0.0 && d.is_finite()).then(|| d.log10())
            })
            .collect();
        dets.push(DeterminantRow {
            z_minus: zm,
            z_plus: zp,
            log10_abs_det,
        });
    }
    Ok((rows, dets))
}

/// Deviation of the dressing from the closed forms: per field, the largest
/// `|a - b| / max(|a|, |b|)` over the grid. In the even family `alpha=1`
/// compares the whole lead block after the torus adjustment.
pub fn compare_report(spec: &SolitonSpec, closed: &ClosedForm, grid: &GridSpec, tolerance: f64) -> Result<ResidualReport> {
    let class = spec.class();
    let alphas: Vec<usize> = match class.kind() {
        ClassKind::Odd => (2..=class.blocks()).collect(),
        ClassKind::Even => (1..=class.blocks()).collect(),
    };
    let labels = alphas.iter().map(|a| format!("alpha={a}")).collect();
    let mut report = ResidualReport::new("compare", labels, tolerance, None);
    for (zm, zp) in grid.points() {
        report.total_points += 1;
        let pair = (dress(spec, zm, zp), closed.gamma(zm, zp));
        let (dressed, formula) = match pair {
            (Ok(a), Ok(b)) => (a, b),
            (Err(TodaError::SolutionSingular { .. }), _) | (_, Err(TodaError::SolutionSingular { .. })) => {
                report.skipped_points += 1;
                continue;
            }
            (Err(e), _) | (_, Err(e)) => return Err(e),
        };
        let (fa, fb) = (dressed.toda_fields(), formula.toda_fields());
        for (eq, &alpha) in report.equations.iter_mut().zip(&alphas) {
            let dev = if alpha == 1 {
                let (a, b) = (dressed.lead().as_matrix(), formula.lead().as_matrix());
                (&a - &b).max_abs() / a.max_abs().max(b.max_abs())
            } else {
                let (a, b) = (fa[alpha - 1], fb[alpha - 1]);
                (a - b).norm() / a.norm().max(b.norm())
            };
            if dev.is_finite() {
                eq.record(dev, (zm, zp));
            }
        }
    }
    Ok(report.finish())
}

/// Convergence-order check in the verify report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceCheck {
    pub expected_order: f64,
    pub tolerance: f64,
    pub estimate: Option<ConvergenceEstimate>,
    pub note: Option<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    pub version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub lambda_samples: usize,
    pub checks: Vec<ResidualReport>,
    pub convergence: ConvergenceCheck,
    pub passed: bool,
}

/// Settings of a verify run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VerifySettings {
    pub seed: u64,
    pub lambda_samples: usize,
    pub invariant_points: usize,
    /// Replaces every check's own tolerance when set.
    pub tolerance: Option<f64>,
}

fn coarse(grid: &GridSpec) -> Result<GridSpec> {
    let shrink = |n: usize| if n > CURVATURE_GRID_MAX { CURVATURE_GRID_MAX } else { n };
    GridSpec::new(grid.z_minus, grid.z_plus, shrink(grid.n_minus), shrink(grid.n_plus), grid.step_factor)
}

/// Fixed interior points of the grid rectangle.
fn interior_points(grid: &GridSpec) -> Vec<(f64, f64)> {
    let at = |r: [f64; 2], t: f64| r[0] + t * (r[1] - r[0]);
    [(0.5, 0.5), (0.3, 0.6), (0.7, 0.35)]
        .iter()
        .map(|&(a, b)| (at(grid.z_minus, a), at(grid.z_plus, b)))
        .collect()
}

fn point_check(
    name: &str,
    points: &[(f64, f64)],
    tolerance: f64,
    f: impl Fn(f64, f64) -> Result<f64>,
) -> Result<ResidualReport> {
    let mut report = ResidualReport::new(name, vec!["max".into()], tolerance, None);
    for &(zm, zp) in points {
        report.total_points += 1;
        match f(zm, zp) {
            Ok(v) => report.equations[0].record(v, (zm, zp)),
            Err(TodaError::SolutionSingular { .. }) | Err(TodaError::NearPole { .. }) => report.skipped_points += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(report.finish())
}

/// Every check on one spec: PDE residuals, zero curvature, connection
/// checks, the invariant suite and the convergence order.
pub fn verify_report(spec: &SolitonSpec, grid: &GridSpec, settings: &VerifySettings) -> Result<VerifyReport> {
    let class = spec.class();
    let lambdas = default_lambda_samples(settings.lambda_samples, settings.seed);
    let mut checks = vec![toda_residual(&class, spec.m(), dressed_fields(spec), grid)];
    if class.kind() == ClassKind::Odd && class.s() == 2 {
        let log_field = |zm, zp| dress(spec, zm, zp).ok().map(|g| g.toda_fields()[1].ln());
        checks.push(dbm_residual(spec.m(), log_field, grid));
    }
    checks.push(zero_curvature_residual(spec, &coarse(grid)?, &lambdas)?);
    let probes = interior_points(grid);
    checks.push(point_check("connection_agreement", &probes, CONNECTION_TOLERANCE, |zm, zp| {
        connection_agreement(spec, zm, zp, &lambdas)
    })?);
    checks.push(point_check("connection_residues", &probes, CONNECTION_TOLERANCE, |zm, zp| {
        connection_residues(spec, zm, zp)
    })?);
    let points = random_points(settings.seed, settings.invariant_points, grid.z_minus, grid.z_plus);
    checks.push(invariant_suite(spec, &points, &lambdas)?);
    if let Some(t) = settings.tolerance {
        checks = checks.into_iter().map(|c| c.with_tolerance(t)).collect();
    }

    let convergence = match convergence_order(&class, spec.m(), dressed_fields(spec), &probes, CONVERGENCE_STEP) {
        Ok(est) => ConvergenceCheck {
            expected_order: EXPECTED_ORDER,
            tolerance: ORDER_TOLERANCE,
            passed: (est.order - EXPECTED_ORDER).abs() <= ORDER_TOLERANCE,
            estimate: Some(est),
            note: None,
        },
        Err(TodaError::DegenerateParameters { .. }) if spec.rank() == 0 => ConvergenceCheck {
            expected_order: EXPECTED_ORDER,
            tolerance: ORDER_TOLERANCE,
            estimate: None,
            note: Some("vacuum: the residual vanishes identically".into()),
            passed: true,
        },
        Err(e) => ConvergenceCheck {
            expected_order: EXPECTED_ORDER,
            tolerance: ORDER_TOLERANCE,
            estimate: None,
            note: Some(e.to_string()),
            passed: false,
        },
    };
    let passed = checks.iter().all(|c| c.passed) && convergence.passed;
    Ok(VerifyReport {
        version: VERSION,
        command: "verify",
        seed: settings.seed,
        lambda_samples: settings.lambda_samples,
        checks,
        convergence,
        passed,
    })
}

/// Data file in JSON form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FieldFile<'a> {
    pub version: &'static str,
    pub command: &'static str,
    pub kind: ClassKind,
    pub s: usize,
    pub alphas: Vec<usize>,
    pub rows: &'a [FieldRow],
}

/// Sidecar written next to `dress` output.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DeterminantFile<'a> {
    pub version: &'static str,
    pub alphas: Vec<usize>,
    pub points: &'a [DeterminantRow],
}

/// Report of `compare`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompareFile {
    pub version: &'static str,
    pub command: &'static str,
    pub report: ResidualReport,
    pub passed: bool,
}

/// Shorthand used by tests and the CLI for a complex `[re, im]` pair.
pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}
