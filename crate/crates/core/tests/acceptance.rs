//! Acceptance criteria. Runs without the libtest harness so that every
//! criterion prints one PASS/FAIL line; exits nonzero if any fails.

use std::path::PathBuf;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use loop_toda::algebra::{
    apply_algebra_automorphism, build_c, build_h, c_minus_eigenvalue, c_plus_eigenvalue, eigenvector, Sign,
};
use loop_toda::cli::commands::ClosedForm;
use loop_toda::closed_forms::two_soliton_even;
use loop_toda::dressing::{dress, SolitonSpec};
use loop_toda::verification::{
    convergence_order, dbm_residual, default_lambda_samples, dressed_fields, even_odd_correspondence, invariant_suite,
    random_points, random_spec, regular, toda_residual, zero_curvature_residual, GridSpec,
};
use loop_toda::{ClassKind, ComplexMatrix, TodaClass, TodaError};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const STRUCTURE_TOL: f64 = 1e-11;
const DRESSING_TOL: f64 = 1e-9;
const ORACLE_TOL: f64 = 1e-8;
const PDE_TOL: f64 = 1e-6;
const ORDER: f64 = 4.0;
const ORDER_TOL: f64 = 0.3;
const CURVATURE_TOL: f64 = 1e-5;
const VACUUM_CURVATURE_TOL: f64 = 1e-12;
const SWAP_TOL: f64 = 1e-10;
const CORRESPONDENCE_TOL: f64 = 1e-9;

const SEED: u64 = 20;

struct Outcome {
    passed: bool,
    detail: String,
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn classes(s_range: std::ops::RangeInclusive<usize>) -> Vec<TodaClass> {
    s_range
        .flat_map(|s| [TodaClass::odd(s).unwrap(), TodaClass::even(s).unwrap()])
        .collect()
}

fn structure_algebra() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut worst = 0.0f64;
    let m = c(0.8, 0.3);
    for class in classes(2..=4) {
        let n = class.dim();
        let order = class.automorphism_order() as usize;
        let eps = class.eps(1);
        let eye = ComplexMatrix::identity(n);

        let h = build_h(&class);
        let mut power = eye.clone();
        for _ in 0..order {
            power = &power * &h;
        }
        worst = worst.max((&power - &eye).max_abs());

        let x = ComplexMatrix::from_fn(n, n, |_, _| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
        let mut y = x.clone();
        for _ in 0..order {
            y = apply_algebra_automorphism(&class, &y).unwrap();
        }
        worst = worst.max((&y - &x).max_abs());

        let cp = build_c(&class, m, Sign::Plus).unwrap();
        let cm = build_c(&class, m, Sign::Minus).unwrap();
        let ap = apply_algebra_automorphism(&class, &cp).unwrap();
        let am = apply_algebra_automorphism(&class, &cm).unwrap();
        worst = worst.max((&ap - &cp.scale(eps)).max_abs());
        worst = worst.max((&am - &cm.scale(eps.inv())).max_abs());
        worst = worst.max(ComplexMatrix::commutator(&cm, &cp).max_abs());

        for rho in 1..=class.blocks() {
            let v = eigenvector(&class, rho).unwrap();
            let lm = cm.mul_vec(&v);
            let lp = cp.mul_vec(&v);
            let (em, ep) = (c_minus_eigenvalue(&class, m, rho), c_plus_eigenvalue(&class, m, rho));
            for k in 0..n {
                worst = worst.max((lm[k] - em * v[k]).norm()).max((lp[k] - ep * v[k]).norm());
            }
        }
        if class.kind() == ClassKind::Even {
            let null = eigenvector(&class, 0).unwrap();
            worst = worst.max(cm.mul_vec(&null).max_abs()).max(cp.mul_vec(&null).max_abs());
        }
    }
    Outcome {
        passed: worst < STRUCTURE_TOL,
        detail: format!("worst violation {worst:.3e} (tol {STRUCTURE_TOL:.0e}), s = 2..4, both classes"),
    }
}

fn dressing_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let lambdas = default_lambda_samples(8, SEED);
    let points = random_points(SEED, 8, [-1.0, 1.0], [-1.0, 1.0]);
    let mut worst = 0.0f64;
    let mut worst_label = String::new();
    let (mut evaluated, mut skipped) = (0, 0);
    for i in 0..20 {
        let s = 2 + i % 3;
        let rank = 1 + (i / 3) % 3;
        let class = if i % 2 == 0 { TodaClass::odd(s) } else { TodaClass::even(s) }.unwrap();
        let spec = random_spec(&mut rng, class, rank, c(1.0, 0.2)).unwrap();
        let report = invariant_suite(&spec, &points, &lambdas).unwrap();
        evaluated += report.total_points - report.skipped_points;
        skipped += report.skipped_points;
        for eq in &report.equations {
            if eq.max_abs > worst {
                worst = eq.max_abs;
                worst_label = eq.label.clone();
            }
        }
    }
    Outcome {
        passed: worst < DRESSING_TOL && evaluated > 0,
        detail: format!(
            "worst {worst:.3e} ({worst_label}), tol {DRESSING_TOL:.0e}; 20 specs, {evaluated} points evaluated, {skipped} skipped"
        ),
    }
}

fn relative(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(1.0)
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 3);
    let mut worst = 0.0f64;
    let (mut specs, mut evaluated, mut skipped) = (0, 0, 0);
    for class in classes(2..=4) {
        for rank in 1..=2 {
            let spec = random_spec(&mut rng, class, rank, c(1.0, -0.3)).unwrap();
            let closed = ClosedForm::from_spec(&spec).unwrap();
            specs += 1;
            let points = random_points(SEED + specs, 50, [-1.0, 1.0], [-1.0, 1.0]);
            for (zm, zp) in points {
                let (a, b) = match (dress(&spec, zm, zp), closed.gamma(zm, zp)) {
                    (Ok(a), Ok(b)) => (a, b),
                    (Err(TodaError::SolutionSingular { .. }), _) | (_, Err(TodaError::SolutionSingular { .. })) => {
                        skipped += 1;
                        continue;
                    }
                    (Err(e), _) | (_, Err(e)) => panic!("{e}"),
                };
                evaluated += 1;
                let (fa, fb) = (a.toda_fields(), b.toda_fields());
                for alpha in 2..=class.blocks() {
                    worst = worst.max(relative(fa[alpha - 1], fb[alpha - 1]));
                }
                // Odd closed forms are normalized to Γ₁ = 1, so only the even lead block is compared.
                if class.kind() == ClassKind::Even {
                    let (la, lb) = (a.lead().as_matrix(), b.lead().as_matrix());
                    worst = worst.max((&la - &lb).max_abs() / lb.max_abs().max(1.0));
                }
            }
        }
    }
    Outcome {
        passed: worst < ORACLE_TOL && evaluated > 0,
        detail: format!(
            "worst relative deviation {worst:.3e} (tol {ORACLE_TOL:.0e}); {specs} specs, {evaluated} points, {skipped} singular"
        ),
    }
}

fn regular_specs() -> Vec<(String, SolitonSpec)> {
    let mut out = Vec::new();
    for zetas in [&[1.0][..], &[1.0, 2.0][..]] {
        let r = zetas.len();
        out.push((format!("odd s=2 r={r}"), regular::odd_params(2, 1.0, (1, 2), zetas).unwrap().to_spec().unwrap()));
        out.push((format!("odd s=3 r={r}"), regular::odd_params(3, 1.0, (1, 3), zetas).unwrap().to_spec().unwrap()));
        out.push((format!("even s=2 r={r}"), regular::even_params(2, 1.0, zetas).unwrap().to_spec().unwrap()));
        out.push((format!("even s=3 r={r}"), regular::even_params(3, 1.0, zetas).unwrap().to_spec().unwrap()));
    }
    out
}

fn pde_residuals() -> Outcome {
    let grid = GridSpec::square(-1.0, 1.0, 41).unwrap();
    let mut notes = Vec::new();
    let mut passed = true;

    let mut worst = 0.0f64;
    for (name, spec) in regular_specs() {
        let report = toda_residual(&spec.class(), spec.m(), dressed_fields(&spec), &grid);
        passed &= report.passed && report.max_abs < PDE_TOL;
        if report.max_abs > worst || !report.passed {
            worst = worst.max(report.max_abs);
            if !report.passed {
                notes.push(format!("{name} fails ({:.3e})", report.max_abs));
            }
        }
    }
    notes.insert(0, format!("toda max {worst:.3e}"));

    let mut dbm_worst = 0.0f64;
    for zetas in [&[1.0][..], &[1.0, 2.0][..]] {
        let spec = regular::odd_params(2, 1.0, (1, 2), zetas).unwrap().to_spec().unwrap();
        let report = dbm_residual(spec.m(), |zm, zp| dress(&spec, zm, zp).ok().map(|g| g.toda_fields()[1].ln()), &grid);
        passed &= report.passed;
        dbm_worst = dbm_worst.max(report.max_abs);
    }
    notes.push(format!("dbm max {dbm_worst:.3e}"));

    let probes = [(0.1, -0.2), (0.4, 0.3), (-0.3, 0.5)];
    let mut orders = Vec::new();
    for (name, spec) in regular_specs().into_iter().filter(|(_, s)| s.rank() == 1) {
        let est = convergence_order(&spec.class(), spec.m(), dressed_fields(&spec), &probes, 0.04).unwrap();
        passed &= (est.order - ORDER).abs() <= ORDER_TOL;
        orders.push(format!("{name}: {:.3}", est.order));
    }
    notes.push(format!("orders [{}]", orders.join(", ")));
    Outcome {
        passed,
        detail: format!("{} (tol {PDE_TOL:.0e}, order {ORDER} ± {ORDER_TOL}, 41x41 grids)", notes.join("; ")),
    }
}

fn zero_curvature() -> Outcome {
    let grid = GridSpec::square(-1.0, 1.0, 9).unwrap();
    let lambdas = default_lambda_samples(8, SEED);
    let mut worst = 0.0f64;
    let mut passed = true;
    for (_, spec) in regular_specs().into_iter().filter(|(_, s)| s.rank() == 1) {
        let report = zero_curvature_residual(&spec, &grid, &lambdas).unwrap();
        passed &= report.passed && report.max_abs < CURVATURE_TOL;
        worst = worst.max(report.max_abs);
    }
    let mut vacuum = 0.0f64;
    for class in [TodaClass::odd(3).unwrap(), TodaClass::even(2).unwrap()] {
        let spec = SolitonSpec::vacuum(class, c(1.0, 0.0)).unwrap();
        let report = zero_curvature_residual(&spec, &grid, &lambdas).unwrap();
        passed &= report.max_abs < VACUUM_CURVATURE_TOL && report.skipped_points == 0;
        vacuum = vacuum.max(report.max_abs);
    }
    Outcome {
        passed,
        detail: format!(
            "one-soliton max {worst:.3e} (tol {CURVATURE_TOL:.0e}); vacuum {vacuum:.3e} (tol {VACUUM_CURVATURE_TOL:.0e}); 8 λ x 9x9"
        ),
    }
}

fn symmetry_claims() -> Outcome {
    let points = random_points(SEED, 30, [-1.0, 1.0], [-1.0, 1.0]);
    let (mut lead_dev, mut field_dev, mut relabel_dev) = (0.0f64, 0.0f64, 0.0f64);
    for s in 2..=3 {
        let p = regular::even_params(s, 1.0, &[1.0, 2.0]).unwrap();
        // Exchanging the solitons at fixed shifted exponentials.
        let mut q = p.clone();
        q.modes.swap(0, 1);
        let relabelled = q.to_spec().unwrap();
        for m in &mut q.modes {
            m.delta += c(0.0, std::f64::consts::PI);
        }
        let (spec_p, spec_q) = (p.to_spec().unwrap(), q.to_spec().unwrap());
        for &(zm, zp) in &points {
            let (a, b) = (dress(&spec_p, zm, zp).unwrap(), dress(&spec_q, zm, zp).unwrap());
            lead_dev = lead_dev.max((a.lead().first() * b.lead().first() - 1.0).norm());
            for (x, y) in a.fields().iter().zip(b.fields()) {
                field_dev = field_dev.max((x - y).norm() / x.norm().max(1.0));
            }
            let closed = two_soliton_even(&q, zm, zp).unwrap();
            lead_dev = lead_dev.max((closed.lead().first() * a.lead().first() - 1.0).norm());
            let plain = dress(&relabelled, zm, zp).unwrap();
            relabel_dev = relabel_dev.max((&plain.lead_raw().as_matrix() - &a.lead_raw().as_matrix()).max_abs());
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(SEED + 6);
    let corr_points = random_points(SEED + 6, 10, [-1.0, 1.0], [-1.0, 1.0]);
    let mut corr = 0.0f64;
    for s in 2..=4 {
        for rank in 1..=3 {
            let spec = random_spec(&mut rng, TodaClass::odd(s).unwrap(), rank, c(1.0, 0.1)).unwrap();
            let (f, l) = even_odd_correspondence(&spec, &corr_points).unwrap();
            corr = corr.max(f).max(l);
        }
    }
    Outcome {
        passed: lead_dev < SWAP_TOL && field_dev < SWAP_TOL && relabel_dev < SWAP_TOL && corr < CORRESPONDENCE_TOL,
        detail: format!(
            "swap: lead Γ·Γ' - 1 {lead_dev:.3e}, other fields {field_dev:.3e}, plain relabelling {relabel_dev:.3e} (tol {SWAP_TOL:.0e}); \
             null-free even vs odd {corr:.3e} (tol {CORRESPONDENCE_TOL:.0e})"
        ),
    }
}

fn determinism() -> Outcome {
    let bin = env!("CARGO_BIN_EXE_loop-toda");
    let config = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../configs/dbm_one_soliton.json");
    let dir = tempfile::tempdir().unwrap();
    let mut outputs = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("report{run}.json"));
        let status = Command::new(bin)
            .args(["verify", "--seed", "11", "--config"])
            .arg(&config)
            .arg("--out")
            .arg(&out)
            .status()
            .unwrap();
        outputs.push((status.code(), std::fs::read(&out).unwrap_or_default()));
    }
    let same = outputs[0].1 == outputs[1].1 && !outputs[0].1.is_empty();
    Outcome {
        passed: same && outputs[0].0 == Some(0),
        detail: format!(
            "two verify runs, seed 11: {} bytes, identical = {same}, exit {:?}",
            outputs[0].1.len(),
            outputs[0].0
        ),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome, Duration); 7] = [
        ("structure algebra", structure_algebra, Duration::from_secs(5)),
        ("dressing identities", dressing_identities, Duration::from_secs(60)),
        ("oracle equivalence", oracle_equivalence, Duration::from_secs(60)),
        ("PDE residuals", pde_residuals, Duration::from_secs(120)),
        ("zero curvature", zero_curvature, Duration::from_secs(60)),
        ("symmetry claims", symmetry_claims, Duration::from_secs(60)),
        ("determinism", determinism, Duration::from_secs(60)),
    ];
    let mut all = true;
    for (i, (name, run, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let elapsed = start.elapsed();
        let passed = outcome.passed && elapsed <= *budget;
        all &= passed;
        println!(
            "{} {}. {name}: {}; {:.2} s (budget {} s)",
            if passed { "PASS" } else { "FAIL" },
            i + 1,
            outcome.detail,
            elapsed.as_secs_f64(),
            budget.as_secs()
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
