use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::{lead_exchange, ClassKind, LoopStructure, TodaClass};
use crate::dressing::{
    gamma_from_dressing, gamma_from_residues, lead_block, scaled_component, DressingState, LoopMatrixSampler, Soliton,
    SolitonSpec,
};
use crate::error::{Result, TodaError};
use crate::linalg::{ComplexMatrix, ONE};

use super::{ResidualReport, ALGEBRAIC_TOLERANCE};

const LABELS: [&str; 10] = [
    "psi_inverse",
    "equivariance",
    "residue_mu",
    "residue_nu",
    "rank_one_condition",
    "recurrence",
    "transposition",
    "conjugation",
    "lead_block",
    "route_agreement",
];

fn rel(diff: f64, scale: f64) -> f64 {
    diff / scale.max(1.0)
}

/// `I + Σ_j Σ_k x/(x - ε^{shift+2k} μ_j) h^{shift+2k} M_j h^{-shift-2k}`
/// evaluated term by term from the structure matrices.
fn literal_loop(
    structure: &LoopStructure,
    poles: &[Complex64],
    residues: &[ComplexMatrix],
    x: Complex64,
    shift: i64,
) -> ComplexMatrix {
    let class = structure.class;
    let nb = class.blocks() as i64;
    let mut out = ComplexMatrix::identity(class.dim());
    for (mu, res) in poles.iter().zip(residues) {
        for k in 1..=nb {
            let p = shift + 2 * k;
            let coeff = x / (x - class.eps(p) * mu);
            out = &out + &structure.h_conjugate(res, p).scale(coeff);
        }
    }
    out
}

fn evaluate_point(spec: &SolitonSpec, structure: &LoopStructure, state: &DressingState, lambdas: &[Complex64]) -> Result<Vec<f64>> {
    let class = spec.class();
    let s = class.s();
    let n = class.dim();
    let nb = class.blocks();
    let identity = ComplexMatrix::identity(n);
    let sampler = LoopMatrixSampler::new(spec, state);
    let mut v = vec![0.0f64; LABELS.len()];

    for &lambda in lambdas {
        let psi = sampler.psi(lambda)?;
        let psi_inv = sampler.psi_inv(lambda)?;
        let scale = psi.max_abs() * psi_inv.max_abs();
        v[0] = v[0].max(rel((&(&psi_inv * &psi) - &identity).max_abs(), scale));
        let rotated = sampler.psi(class.eps(1) * lambda)?;
        let image = &(&(&(&structure.h * &structure.b_inv) * &psi_inv.transpose()) * &structure.b) * &structure.h_inv;
        v[1] = v[1].max(rel((&rotated - &image).max_abs(), rotated.max_abs()));
    }

    // ψ⁻¹ at μ_i and ψ at ν_i, written out with the residues of the other factor.
    let poles = spec.poles();
    let inverse_poles = spec.inverse_poles();
    let transposed: Vec<ComplexMatrix> = state
        .p
        .iter()
        .map(|p| &(&structure.b_inv * &p.transpose()) * &structure.b)
        .collect();
    for i in 0..spec.rank() {
        let at_mu = literal_loop(structure, &poles, &transposed, poles[i], -1);
        let p_i = &state.p[i];
        v[2] = v[2].max(rel((&at_mu * p_i).max_abs(), at_mu.max_abs() * p_i.max_abs()));
        let killed = at_mu.mul_vec(&state.u[i]);
        v[4] = v[4].max(rel(killed.max_abs(), at_mu.max_abs() * state.u[i].max_abs()));

        let at_nu = literal_loop(structure, &poles, &state.p, inverse_poles[i], 0);
        let q_i = &state.q[i];
        v[3] = v[3].max(rel((q_i * &at_nu).max_abs(), q_i.max_abs() * at_nu.max_abs()));
    }

    // Recurrences and transpositions of the R̃ family.
    let fam = &state.r_tilde;
    let r_scale = (1..=2 * s).map(|a| fam.get(a).max_abs()).fold(0.0, f64::max);
    for alpha in 2..2 * s {
        let a = scaled_component(spec, &state.u, 2 * s + 1 - alpha);
        let b = scaled_component(spec, &state.u, alpha);
        let outer = ComplexMatrix::outer(&a, &b);
        let expected = if alpha <= s { outer } else { -&outer };
        let step = fam.get(alpha + 1) - fam.get(alpha);
        v[5] = v[5].max(rel((&step - &expected).max_abs(), r_scale));
        let t = fam.get(alpha) - &fam.get(2 * s + 2 - alpha).transpose();
        v[6] = v[6].max(rel(t.max_abs(), r_scale));
    }
    v[6] = v[6].max(rel((fam.get(1) + &fam.get(2).transpose()).max_abs(), r_scale));

    // γ through the determinant ratios and through ψ(∞).
    let by_det = gamma_from_dressing(spec, state)?;
    let by_res = gamma_from_residues(spec, state)?;
    for alpha in 2..=nb {
        let (a, b) = (by_res.field(alpha), by_res.field(2 * s + 1 - alpha));
        v[7] = v[7].max(rel((a * b - ONE).norm(), (a * b).norm()));
        let d = by_det.field(alpha);
        v[9] = v[9].max(rel((d - a).norm(), a.norm()));
    }
    let lead = lead_block(spec, state);
    v[8] = match class.kind() {
        ClassKind::Odd => {
            let sign = if spec.rank() % 2 == 0 { ONE } else { -ONE };
            (lead[(0, 0)] - sign).norm()
        }
        ClassKind::Even => {
            let j = lead_exchange(&class);
            let twisted = &(&(&j * &lead.transpose()) * &j) * &lead;
            rel((&twisted - &ComplexMatrix::identity(2)).max_abs(), lead.max_abs().powi(2))
        }
    };
    let raw = by_res.lead_raw().as_matrix();
    v[9] = v[9].max(rel((&raw - &lead).max_abs(), lead.max_abs()));
    Ok(v)
}

/// Run every algebraic invariant of the dressing at the given points.
///
/// Violations are scale-relative: each difference is divided by the size
/// of the quantities it compares (or 1, whichever is larger). Points on a
/// solution singularity are skipped and counted.
pub fn invariant_suite(spec: &SolitonSpec, points: &[(f64, f64)], lambdas: &[Complex64]) -> Result<ResidualReport> {
    let structure = LoopStructure::new(spec.class(), spec.m())?;
    let labels = LABELS.iter().map(|s| s.to_string()).collect();
    let mut report = ResidualReport::new("invariants", labels, ALGEBRAIC_TOLERANCE, None);
    for &(zm, zp) in points {
        report.total_points += 1;
        let state = match DressingState::with_structure(spec, &structure, zm, zp) {
            Ok(state) => state,
            Err(TodaError::SolutionSingular { .. }) => {
                report.skipped_points += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        match evaluate_point(spec, &structure, &state, lambdas) {
            Ok(v) => {
                for (eq, x) in report.equations.iter_mut().zip(v) {
                    eq.record(x, (zm, zp));
                }
            }
            Err(TodaError::NearPole { .. }) => report.skipped_points += 1,
            Err(e) => return Err(e),
        }
    }
    Ok(report.finish())
}

/// `count` points drawn uniformly from the rectangle `z_minus x z_plus`.
pub fn random_points(seed: u64, count: usize, z_minus: [f64; 2], z_plus: [f64; 2]) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (rng.gen_range(z_minus[0]..z_minus[1]), rng.gen_range(z_plus[0]..z_plus[1])))
        .collect()
}

/// A random admissible spec: poles with modulus in `[0.6, 1.6]`, and per
/// soliton two nonzero coefficients (odd: modes `J ≠ K`; even: mode 0 and
/// one mode `I ≥ 1`) with modulus in `[0.5, 1.5]`. Redraws on degeneracy.
pub fn random_spec(rng: &mut impl Rng, class: TodaClass, rank: usize, m: Complex64) -> Result<SolitonSpec> {
    let nb = class.blocks();
    for _ in 0..100 {
        let mut solitons = Vec::with_capacity(rank);
        for _ in 0..rank {
            let pole = draw(rng, 0.6, 1.6);
            let (a, b) = (draw(rng, 0.5, 1.5), draw(rng, 0.5, 1.5));
            let j = rng.gen_range(1..=nb);
            let sol = match class.kind() {
                ClassKind::Odd => {
                    let k = 1 + (j - 1 + rng.gen_range(1..nb)) % nb;
                    Soliton::odd(pole, j, k, a, b)?
                }
                ClassKind::Even => Soliton::even(pole, j, a, b)?,
            };
            solitons.push(sol);
        }
        match SolitonSpec::new(class, m, solitons) {
            Ok(spec) => return Ok(spec),
            Err(TodaError::DegenerateParameters { .. }) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(TodaError::DegenerateParameters {
        quantity: "random spec draws".into(),
        value: 0.0,
    })
}

fn draw(rng: &mut impl Rng, lo: f64, hi: f64) -> Complex64 {
    Complex64::from_polar(rng.gen_range(lo..hi), rng.gen_range(0.0..std::f64::consts::TAU))
}

/// Compare an odd-family spec with the even-family spec of the same `s`
/// carrying the same poles and coefficients and no null-vector component.
/// Returns the largest relative difference of `Γ_α`, `α ≥ 2`, together
/// with the distance of the even lead block from `(-1)^r J₂^r`.
pub fn even_odd_correspondence(odd: &SolitonSpec, points: &[(f64, f64)]) -> Result<(f64, f64)> {
    let class = odd.class();
    if class.kind() != ClassKind::Odd {
        return Err(TodaError::InvalidClass("expected an odd-family spec".into()));
    }
    let even_class = TodaClass::even(class.s())?;
    let solitons = odd
        .solitons()
        .iter()
        .map(|s| Soliton::with_coefficients(s.pole(), s.coefficients().to_vec()))
        .collect::<Result<Vec<_>>>()?;
    let even = SolitonSpec::new(even_class, odd.m(), solitons)?;
    let r = odd.rank();
    let j = lead_exchange(&even_class);
    let mut expected_lead = ComplexMatrix::identity(2);
    for _ in 0..r {
        expected_lead = &expected_lead * &j;
    }
    if r % 2 == 1 {
        expected_lead = -&expected_lead;
    }
    let (mut fields, mut lead) = (0.0f64, 0.0f64);
    for &(zm, zp) in points {
        let go = gamma_from_dressing(odd, &DressingState::new(odd, zm, zp)?)?;
        let ge = gamma_from_dressing(&even, &DressingState::new(&even, zm, zp)?)?;
        for alpha in 2..=class.blocks() {
            let (a, b) = (go.field(alpha), ge.field(alpha));
            fields = fields.max(rel((a - b).norm(), a.norm()));
        }
        lead = lead.max((&ge.lead_raw().as_matrix() - &expected_lead).max_abs());
    }
    Ok((fields, lead))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::verification::default_lambda_samples;

    #[test]
    fn random_odd_spec_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let spec = random_spec(&mut rng, TodaClass::odd(3).unwrap(), 2, Complex64::new(1.0, 0.0)).unwrap();
        let report = invariant_suite(&spec, &random_points(2, 6, [-1.0, 1.0], [-1.0, 1.0]), &default_lambda_samples(8, 2)).unwrap();
        assert!(report.passed, "{report:#?}");
    }

    #[test]
    fn random_even_spec_passes() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let spec = random_spec(&mut rng, TodaClass::even(3).unwrap(), 3, Complex64::new(0.8, 0.0)).unwrap();
        let report = invariant_suite(&spec, &random_points(3, 6, [-1.0, 1.0], [-1.0, 1.0]), &default_lambda_samples(8, 3)).unwrap();
        assert!(report.passed, "{report:#?}");
    }

    #[test]
    fn random_specs_are_deterministic_and_valid() {
        for kind in [ClassKind::Odd, ClassKind::Even] {
            let class = TodaClass::new(kind, 4).unwrap();
            let a = random_spec(&mut ChaCha8Rng::seed_from_u64(5), class, 3, ONE).unwrap();
            let b = random_spec(&mut ChaCha8Rng::seed_from_u64(5), class, 3, ONE).unwrap();
            assert_eq!(a, b);
            for s in a.solitons() {
                assert_eq!(s.coefficients().len(), 2);
                if kind == ClassKind::Even {
                    assert!(s.coefficient(0).is_some());
                }
            }
        }
    }

    #[test]
    fn even_without_null_component_matches_odd() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for r in 1..=3 {
            let odd = random_spec(&mut rng, TodaClass::odd(3).unwrap(), r, ONE).unwrap();
            let (fields, lead) = even_odd_correspondence(&odd, &random_points(4, 4, [-1.0, 1.0], [-1.0, 1.0])).unwrap();
            assert!(fields < 1e-9 && lead < 1e-9, "r = {r}: {fields:e} {lead:e}");
        }
    }
}
