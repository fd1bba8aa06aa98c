//! Explicit one- and two-soliton solutions.
//!
//! Odd family (`n = 2s - 1`): each soliton is labelled by a mode pair
//! `J ≠ K` and carries
//!
//! * `ζ = i ε^{s+J+K} μ`, `θ = π(J - K)/(2s - 1)`, `κ = 2 sin θ`,
//! * `e^δ = C_K / C_J`, and the phase `Z = mκ(z⁻/ζ + ζ z⁺)`.
//!
//! The fields are `Γ_α = T_{α+1} / T_α` with `T` quadratic in each
//! `e^{Z + δ - 2iθ}`. These are the fields of the dressing divided by the
//! constant `Γ₁ = (-1)^r`, i.e. they solve the scalar system with `Γ₁ = 1`.
//!
//! Even family (`n = 2s`): each soliton couples the null vector to a mode
//! `I`, with `ζ = ε^{s+2I} μ`, `θ = π(s + 2I)/(2s - 1)`, `e^δ = C_I / C_0`
//! and `Z' = m(z⁻/ζ + ζ z⁺) - δ - iθ`. Here the dressing fields are
//! reproduced exactly, including the `2x2` block `Γ₁`.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;

use crate::algebra::{lead_exchange, ClassKind, TodaClass};
use crate::dressing::{GammaField, LeadField, Soliton, SolitonSpec, DEGENERACY_THRESHOLD};
use crate::error::{Result, TodaError};
use crate::linalg::{ComplexMatrix, ONE, ZERO};

/// A closed-form value is singular when `|T| < SINGULAR_RATIO · Σ|terms of T|`.
pub const SINGULAR_RATIO: f64 = 1e-12;

fn check_nonzero(quantity: impl Into<String>, value: Complex64, scale: f64) -> Result<()> {
    let rel = value.norm() / scale.max(f64::MIN_POSITIVE);
    if !(rel >= DEGENERACY_THRESHOLD) {
        return Err(TodaError::DegenerateParameters {
            quantity: quantity.into(),
            value: rel,
        });
    }
    Ok(())
}

/// One odd-family soliton.
#[derive(Debug, Clone, PartialEq)]
pub struct OddMode {
    pub j: usize,
    pub k: usize,
    pub zeta: Complex64,
    /// `ρ = J - K`.
    pub rho: i64,
    pub theta: f64,
    pub kappa: f64,
    /// `δ = log(C_K / C_J)`, principal branch.
    pub delta: Complex64,
}

impl OddMode {
    pub fn from_pole(class: &TodaClass, pole: Complex64, j: usize, k: usize, c_j: Complex64, c_k: Complex64) -> Result<Self> {
        if class.kind() != ClassKind::Odd {
            return Err(TodaError::InvalidClass("odd-family soliton on an even class".into()));
        }
        let nb = class.blocks();
        for (name, v) in [("J", j), ("K", k)] {
            if !(1..=nb).contains(&v) {
                return Err(TodaError::OutOfRange {
                    name: if name == "J" { "J" } else { "K" },
                    value: v as i64,
                    lo: 1,
                    hi: nb as i64,
                });
            }
        }
        if j == k {
            return Err(TodaError::InvalidSpec(format!("mode indices must differ (J = K = {j})")));
        }
        if c_j.norm() == 0.0 || c_k.norm() == 0.0 || pole.norm() == 0.0 {
            return Err(TodaError::InvalidSpec("pole and constants must be nonzero".into()));
        }
        let rho = j as i64 - k as i64;
        let theta = PI * rho as f64 / nb as f64;
        Ok(OddMode {
            j,
            k,
            zeta: Complex64::i() * class.eps((class.s() + j + k) as i64) * pole,
            rho,
            theta,
            kappa: 2.0 * theta.sin(),
            delta: (c_k / c_j).ln(),
        })
    }

    /// Mode with rapidity `ζ` and phase `δ` given directly.
    pub fn from_rapidity(class: &TodaClass, zeta: Complex64, j: usize, k: usize, delta: Complex64) -> Result<Self> {
        let pole = zeta / (Complex64::i() * class.eps((class.s() + j + k) as i64));
        let mut mode = Self::from_pole(class, pole, j, k, ONE, ONE)?;
        mode.zeta = zeta;
        mode.delta = delta;
        Ok(mode)
    }

    /// `μ = ζ / (i ε^{s+J+K})`.
    pub fn pole(&self, class: &TodaClass) -> Complex64 {
        self.zeta / (Complex64::i() * class.eps((class.s() + self.j + self.k) as i64))
    }

    /// Back to dressing data with `C_J = 1`, `C_K = e^δ`.
    pub fn to_soliton(&self, class: &TodaClass) -> Result<Soliton> {
        Soliton::odd(self.pole(class), self.j, self.k, ONE, self.delta.exp())
    }

    /// `cos((2α - 1)θ) / cos θ` scaled by 2.
    fn weight(&self, alpha: i64) -> f64 {
        2.0 * ((2 * alpha - 1) as f64 * self.theta).cos() / self.theta.cos()
    }
}

/// Parameters of an odd-family multi-soliton.
#[derive(Debug, Clone, PartialEq)]
pub struct OddSolitonParams {
    pub class: TodaClass,
    pub m: Complex64,
    pub modes: Vec<OddMode>,
}

impl OddSolitonParams {
    pub fn new(class: TodaClass, m: Complex64, modes: Vec<OddMode>) -> Result<Self> {
        if class.kind() != ClassKind::Odd {
            return Err(TodaError::InvalidClass("odd closed forms need the odd family".into()));
        }
        if m.norm() == 0.0 {
            return Err(TodaError::InvalidSpec("coupling m must be nonzero".into()));
        }
        Ok(OddSolitonParams { class, m, modes })
    }

    /// Read the modes off a spec whose solitons each carry two coefficients,
    /// taken in the order `(J, C_J), (K, C_K)`.
    pub fn from_spec(spec: &SolitonSpec) -> Result<Self> {
        let class = spec.class();
        let modes = spec
            .solitons()
            .iter()
            .enumerate()
            .map(|(i, sol)| match sol.coefficients() {
                [(j, cj), (k, ck)] => OddMode::from_pole(&class, sol.pole(), *j, *k, *cj, *ck),
                _ => Err(TodaError::InvalidSpec(format!(
                    "soliton {}: closed forms need exactly two modes (J, K)",
                    i + 1
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(class, spec.m(), modes)
    }

    pub fn to_spec(&self) -> Result<SolitonSpec> {
        let solitons = self.modes.iter().map(|m| m.to_soliton(&self.class)).collect::<Result<Vec<_>>>()?;
        SolitonSpec::new(self.class, self.m, solitons)
    }
}

/// `Z_i = m κ_i (z⁻/ζ_i + ζ_i z⁺)`.
pub fn z_phase_odd(params: &OddSolitonParams, i: usize, z_minus: f64, z_plus: f64) -> Complex64 {
    let mode = &params.modes[i];
    params.m * mode.kappa * (z_minus / mode.zeta + mode.zeta * z_plus)
}

/// Polynomial `Σ c_{ab} x^a y^b` with `a, b ≤ 2`.
#[derive(Debug, Clone, Copy)]
struct BiPoly {
    c: [[Complex64; 3]; 3],
}

impl BiPoly {
    fn zero() -> Self {
        BiPoly { c: [[ZERO; 3]; 3] }
    }
}

/// `p(x, y) / q(x, y)` for `x = e^{lx}`, `y = e^{ly}`, evaluated without
/// overflow: a variable with `|x| > 1` is replaced by `1/x` and both
/// polynomials are multiplied by `x^deg`. `None` marks a zero of `q`.
fn ratio(p: &BiPoly, q: &BiPoly, deg: usize, lx: Complex64, ly: Complex64) -> Option<Complex64> {
    let (fx, x) = if lx.re > 0.0 { (true, (-lx).exp()) } else { (false, lx.exp()) };
    let (fy, y) = if ly.re > 0.0 { (true, (-ly).exp()) } else { (false, ly.exp()) };
    let eval = |poly: &BiPoly| -> (Complex64, f64) {
        let mut total = ZERO;
        let mut size = 0.0;
        for a in 0..=deg {
            for b in 0..=deg {
                let c = poly.c[a][b];
                if c == ZERO {
                    continue;
                }
                let ea = if fx { deg - a } else { a } as i32;
                let eb = if fy { deg - b } else { b } as i32;
                let t = c * x.powi(ea) * y.powi(eb);
                total += t;
                size += t.norm();
            }
        }
        (total, size)
    };
    let (num, _) = eval(p);
    let (den, size) = eval(q);
    if den.norm() <= SINGULAR_RATIO * size || den.norm() == 0.0 {
        return None;
    }
    Some(num / den)
}

fn odd_tau(params: &OddSolitonParams, a: i64, two: Option<&OddPair>) -> BiPoly {
    // T_a with α = a - 1 in the weights cos((2α - 1)θ).
    let alpha = a - 1;
    let mut p = BiPoly::zero();
    let m1 = &params.modes[0];
    p.c[0][0] = ONE;
    p.c[1][0] = Complex64::from(m1.weight(alpha));
    p.c[2][0] = ONE;
    if let Some(pair) = two {
        let m2 = &params.modes[1];
        let (t1, t2) = (m1.theta, m2.theta);
        let k = (2 * alpha - 1) as f64;
        let prod = pair.eta_plus * pair.eta_minus;
        p.c[0][1] = Complex64::from(m2.weight(alpha));
        p.c[0][2] = ONE;
        p.c[1][1] = (pair.eta_plus * 2.0 * (k * (t1 - t2)).cos() + pair.eta_minus * 2.0 * (k * (t1 + t2)).cos())
            / (t1.cos() * t2.cos());
        p.c[1][2] = prod * m1.weight(alpha);
        p.c[2][1] = prod * m2.weight(alpha);
        p.c[2][2] = prod * prod;
    }
    p
}

/// Interaction data of an odd two-soliton.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OddPair {
    pub eta_plus: Complex64,
    pub eta_minus: Complex64,
    /// `e^{δ'_1}`, `e^{δ'_2}`.
    pub shift: [Complex64; 2],
}

impl OddPair {
    pub fn new(params: &OddSolitonParams) -> Result<Self> {
        if params.modes.len() != 2 {
            return Err(TodaError::InvalidSpec("two-soliton formula needs r = 2".into()));
        }
        let class = params.class;
        let (a, b) = (&params.modes[0], &params.modes[1]);
        let q = a.zeta / b.zeta + b.zeta / a.zeta;
        let scale = q.norm() + 2.0;
        let (cm, cp) = (2.0 * (a.theta - b.theta).cos(), 2.0 * (a.theta + b.theta).cos());
        check_nonzero("zeta1/zeta2 + zeta2/zeta1 + 2cos(theta1 - theta2)", q + cm, scale)?;
        check_nonzero("zeta1/zeta2 + zeta2/zeta1 - 2cos(theta1 + theta2)", q - cp, scale)?;
        let f1 = class.eps(a.rho) * a.zeta;
        let f2 = class.eps(b.rho) * b.zeta;
        let g1 = class.eps(-a.rho) * a.zeta;
        let g2 = class.eps(-b.rho) * b.zeta;
        let fs = f1.norm() + f2.norm();
        check_nonzero("f1 - f2", f1 - f2, fs)?;
        check_nonzero("f~1 + f2", g1 + f2, fs)?;
        check_nonzero("f1 + f~2", f1 + g2, fs)?;
        Ok(OddPair {
            eta_plus: (q + cp) / (q + cm),
            eta_minus: (q - cm) / (q - cp),
            shift: [
                (f1 + f2) * (g1 - f2) / ((f1 - f2) * (g1 + f2)),
                (f1 + f2) * (f1 - g2) / ((f1 - f2) * (f1 + g2)),
            ],
        })
    }
}

/// `log` of the exponential variables: `Z_i + δ_i (+ δ'_i) - 2iθ_i`.
fn odd_logs(params: &OddSolitonParams, pair: Option<&OddPair>, z_minus: f64, z_plus: f64) -> [Complex64; 2] {
    let mut out = [ZERO; 2];
    for (i, mode) in params.modes.iter().enumerate().take(2) {
        let mut x = z_phase_odd(params, i, z_minus, z_plus) + mode.delta - Complex64::new(0.0, 2.0 * mode.theta);
        if let Some(p) = pair {
            x += p.shift[i].ln();
        }
        out[i] = x;
    }
    out
}

fn odd_field(params: &OddSolitonParams, pair: Option<&OddPair>, alpha: usize, z_minus: f64, z_plus: f64) -> Result<Complex64> {
    let nb = params.class.blocks();
    if !(1..=nb).contains(&alpha) {
        return Err(TodaError::OutOfRange {
            name: "alpha",
            value: alpha as i64,
            lo: 1,
            hi: nb as i64,
        });
    }
    let logs = odd_logs(params, pair, z_minus, z_plus);
    let a = alpha as i64;
    let num = odd_tau(params, a + 1, pair);
    let den = odd_tau(params, a, pair);
    let singular = |which| TodaError::SolutionSingular {
        alpha: which,
        z_minus,
        z_plus,
    };
    // A zero of T_{α+1} is also a singularity of the field Γ_{α+1}.
    if ratio(&den, &num, 2, logs[0], logs[1]).is_none() {
        return Err(singular(alpha + 1));
    }
    ratio(&num, &den, 2, logs[0], logs[1]).ok_or_else(|| singular(alpha))
}

/// One-soliton field `Γ_α = T_{α+1} / T_α`, `α = 1..=2s-1` (`Γ₁ = 1`).
pub fn one_soliton_odd(params: &OddSolitonParams, alpha: usize, z_minus: f64, z_plus: f64) -> Result<Complex64> {
    if params.modes.len() != 1 {
        return Err(TodaError::InvalidSpec("one-soliton formula needs r = 1".into()));
    }
    odd_field(params, None, alpha, z_minus, z_plus)
}

/// Two-soliton field `Γ_α = det T_{α+1} / det T_α`.
pub fn two_soliton_odd(params: &OddSolitonParams, alpha: usize, z_minus: f64, z_plus: f64) -> Result<Complex64> {
    let pair = OddPair::new(params)?;
    odd_field(params, Some(&pair), alpha, z_minus, z_plus)
}

/// All odd fields at a point, `r ∈ {1, 2}`, with `Γ₁ = 1`.
pub fn odd_gamma_field(params: &OddSolitonParams, z_minus: f64, z_plus: f64) -> Result<GammaField> {
    let pair = match params.modes.len() {
        1 => None,
        2 => Some(OddPair::new(params)?),
        r => return Err(TodaError::InvalidSpec(format!("closed forms cover r = 1, 2 (got {r})"))),
    };
    let fields = (2..=params.class.blocks())
        .map(|alpha| odd_field(params, pair.as_ref(), alpha, z_minus, z_plus))
        .collect::<Result<Vec<_>>>()?;
    GammaField::new(params.class, LeadField::Scalar(ONE), fields)
}

/// The Dodd–Bullough–Mikhailov field `Γ = Γ₂` of the `s = 2` odd family,
/// solving `∂₊∂₋F = -m²(e^{-2F} - e^F)` for `F = log Γ`.
pub fn dbm_solution(order: usize, params: &OddSolitonParams, z_minus: f64, z_plus: f64) -> Result<Complex64> {
    if params.class.s() != 2 {
        return Err(TodaError::InvalidClass(format!("DBM needs s = 2, got s = {}", params.class.s())));
    }
    match order {
        1 => one_soliton_odd(params, 2, z_minus, z_plus),
        2 => two_soliton_odd(params, 2, z_minus, z_plus),
        _ => Err(TodaError::InvalidSpec(format!("DBM order must be 1 or 2, got {order}"))),
    }
}

/// `log` of each value, unwrapped so consecutive imaginary parts differ by
/// less than `π`. The first value uses the principal branch; `None`
/// entries (singular points) restart the unwrapping.
pub fn unwrap_log(values: &[Option<Complex64>]) -> Vec<Option<Complex64>> {
    let mut out = Vec::with_capacity(values.len());
    let mut prev: Option<Complex64> = None;
    for v in values {
        let logged = v.map(|z| {
            let mut l = z.ln();
            if let Some(p) = prev {
                let turns = ((p.im - l.im) / (2.0 * PI)).round();
                l.im += 2.0 * PI * turns;
            }
            l
        });
        prev = logged;
        out.push(logged);
    }
    out
}

/// `F = log Γ` on a grid (`rows[i][j]` at `z⁺_i`, `z⁻_j`), unwrapped along
/// the first column and then along each row, so the branch is continuous
/// from the corner `(z⁻_0, z⁺_0)`.
pub fn dbm_log_grid(order: usize, params: &OddSolitonParams, z_minus: &[f64], z_plus: &[f64]) -> Result<Vec<Vec<Option<Complex64>>>> {
    let mut values = Vec::with_capacity(z_plus.len());
    for &zp in z_plus {
        let mut row = Vec::with_capacity(z_minus.len());
        for &zm in z_minus {
            row.push(match dbm_solution(order, params, zm, zp) {
                Ok(g) => Some(g),
                Err(TodaError::SolutionSingular { .. }) => None,
                Err(e) => return Err(e),
            });
        }
        values.push(row);
    }
    let first: Vec<_> = values.iter().map(|r| r.first().copied().flatten()).collect();
    let seeds = unwrap_log(&first);
    Ok(values
        .iter()
        .zip(seeds)
        .map(|(row, seed)| {
            let mut logs = unwrap_log(row);
            if let (Some(s), Some(Some(l0))) = (seed, logs.first().copied()) {
                let shift = s.im - l0.im;
                for l in logs.iter_mut().flatten() {
                    l.im += shift;
                }
            }
            logs
        })
        .collect())
}

/// One even-family soliton.
#[derive(Debug, Clone, PartialEq)]
pub struct EvenMode {
    pub i: usize,
    pub zeta: Complex64,
    pub theta: f64,
    /// `δ = log(C_I / C_0)`.
    pub delta: Complex64,
}

impl EvenMode {
    pub fn from_pole(class: &TodaClass, pole: Complex64, i: usize, c_0: Complex64, c_i: Complex64) -> Result<Self> {
        if class.kind() != ClassKind::Even {
            return Err(TodaError::InvalidClass("even-family soliton on an odd class".into()));
        }
        let nb = class.blocks();
        if !(1..=nb).contains(&i) {
            return Err(TodaError::OutOfRange {
                name: "I",
                value: i as i64,
                lo: 1,
                hi: nb as i64,
            });
        }
        if c_0.norm() == 0.0 || c_i.norm() == 0.0 || pole.norm() == 0.0 {
            return Err(TodaError::InvalidSpec("pole and constants must be nonzero".into()));
        }
        let k = class.s() + 2 * i;
        Ok(EvenMode {
            i,
            zeta: class.eps(k as i64) * pole,
            theta: PI * k as f64 / nb as f64,
            delta: (c_i / c_0).ln(),
        })
    }

    /// Mode with rapidity `ζ` and phase `δ` given directly.
    pub fn from_rapidity(class: &TodaClass, zeta: Complex64, i: usize, delta: Complex64) -> Result<Self> {
        let pole = zeta / class.eps((class.s() + 2 * i) as i64);
        let mut mode = Self::from_pole(class, pole, i, ONE, ONE)?;
        mode.zeta = zeta;
        mode.delta = delta;
        Ok(mode)
    }

    pub fn pole(&self, class: &TodaClass) -> Complex64 {
        self.zeta / class.eps((class.s() + 2 * self.i) as i64)
    }

    pub fn to_soliton(&self, class: &TodaClass) -> Result<Soliton> {
        Soliton::even(self.pole(class), self.i, ONE, self.delta.exp())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvenSolitonParams {
    pub class: TodaClass,
    pub m: Complex64,
    pub modes: Vec<EvenMode>,
}

impl EvenSolitonParams {
    pub fn new(class: TodaClass, m: Complex64, modes: Vec<EvenMode>) -> Result<Self> {
        if class.kind() != ClassKind::Even {
            return Err(TodaError::InvalidClass("even closed forms need the even family".into()));
        }
        if m.norm() == 0.0 {
            return Err(TodaError::InvalidSpec("coupling m must be nonzero".into()));
        }
        Ok(EvenSolitonParams { class, m, modes })
    }

    /// Solitons must carry exactly the modes `(0, C_0), (I, C_I)`.
    pub fn from_spec(spec: &SolitonSpec) -> Result<Self> {
        let class = spec.class();
        let modes = spec
            .solitons()
            .iter()
            .enumerate()
            .map(|(n, sol)| match (sol.coefficient(0), sol.coefficients()) {
                (Some(c0), [_, _]) => {
                    let (i, ci) = sol.coefficients().iter().find(|(r, _)| *r != 0).copied().expect("two modes");
                    EvenMode::from_pole(&class, sol.pole(), i, c0, ci)
                }
                _ => Err(TodaError::InvalidSpec(format!(
                    "soliton {}: closed forms need exactly the modes 0 and I",
                    n + 1
                ))),
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(class, spec.m(), modes)
    }

    pub fn to_spec(&self) -> Result<SolitonSpec> {
        let solitons = self.modes.iter().map(|m| m.to_soliton(&self.class)).collect::<Result<Vec<_>>>()?;
        SolitonSpec::new(self.class, self.m, solitons)
    }

    /// `Z'_i = m(z⁻/ζ_i + ζ_i z⁺) - δ_i - iθ_i`.
    pub fn shifted_phase(&self, i: usize, z_minus: f64, z_plus: f64) -> Complex64 {
        let mode = &self.modes[i];
        self.m * (z_minus / mode.zeta + mode.zeta * z_plus) - mode.delta - Complex64::new(0.0, mode.theta)
    }
}

/// Interaction data of an even two-soliton.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EvenPair {
    pub eta: Complex64,
    /// `e^{δ'}`.
    pub shift: Complex64,
}

impl EvenPair {
    pub fn new(params: &EvenSolitonParams) -> Result<Self> {
        if params.modes.len() != 2 {
            return Err(TodaError::InvalidSpec("two-soliton formula needs r = 2".into()));
        }
        let nb = params.class.blocks() as i32;
        let (z1, z2) = (params.modes[0].zeta, params.modes[1].zeta);
        let (p1, p2) = (z1.powi(nb), z2.powi(nb));
        let zs = z1.norm() + z2.norm();
        let ps = p1.norm() + p2.norm();
        check_nonzero("zeta1 - zeta2", z1 - z2, zs)?;
        check_nonzero("zeta1 + zeta2", z1 + z2, zs)?;
        check_nonzero("zeta1^N - zeta2^N", p1 - p2, ps)?;
        check_nonzero("zeta1^N + zeta2^N", p1 + p2, ps)?;
        Ok(EvenPair {
            eta: (z1 - z2) / (z1 + z2) * (p1 - p2) / (p1 + p2),
            shift: (p1 + p2) / (p1 - p2),
        })
    }
}

/// `det T_a` (`α = a - 1`) and the lead numerator/denominator, as
/// polynomials in `e^{-Z̃_1}`, `e^{-Z̃_2}`.
fn even_tau(params: &EvenSolitonParams, a: i64, pair: Option<&EvenPair>) -> BiPoly {
    let alpha = a - 1;
    let sign = if alpha % 2 == 0 { ONE } else { -ONE };
    let mut p = BiPoly::zero();
    p.c[0][0] = ONE;
    p.c[2][0] = sign;
    if let Some(pair) = pair {
        let s = params.class.s() as i32;
        let nb = params.class.blocks() as i32;
        let (z1, z2) = (params.modes[0].zeta, params.modes[1].zeta);
        let al = alpha as i32;
        let cross = (z1.powi(al) * z2.powi(2 * s - al) + z2.powi(al) * z1.powi(2 * s - al))
            / ((z1 + z2) * (z1.powi(nb) + z2.powi(nb)));
        p.c[0][2] = sign;
        p.c[1][1] = -4.0 * sign * cross;
        p.c[2][2] = pair.eta * pair.eta;
    }
    p
}

fn even_logs(params: &EvenSolitonParams, pair: Option<&EvenPair>, z_minus: f64, z_plus: f64) -> [Complex64; 2] {
    let mut out = [ZERO; 2];
    for i in 0..params.modes.len().min(2) {
        let mut z = params.shifted_phase(i, z_minus, z_plus);
        if let Some(p) = pair {
            z -= p.shift.ln();
        }
        out[i] = -z;
    }
    out
}

fn even_field(params: &EvenSolitonParams, pair: Option<&EvenPair>, z_minus: f64, z_plus: f64) -> Result<GammaField> {
    let logs = even_logs(params, pair, z_minus, z_plus);
    let singular = |alpha| TodaError::SolutionSingular {
        alpha,
        z_minus,
        z_plus,
    };
    let nb = params.class.blocks();
    let mut taus = Vec::with_capacity(nb);
    for a in 2..=nb + 1 {
        taus.push(even_tau(params, a as i64, pair));
    }
    let mut fields = Vec::with_capacity(nb - 1);
    for alpha in 2..=nb {
        let (num, den) = (&taus[alpha - 1], &taus[alpha - 2]);
        fields.push(ratio(num, den, 2, logs[0], logs[1]).ok_or_else(|| singular(alpha))?);
        if alpha == nb && ratio(den, num, 2, logs[0], logs[1]).is_none() {
            return Err(singular(alpha));
        }
    }
    // Γ = (1 + e₁ - e₂ - η e₁e₂) / (1 - e₁ + e₂ - η e₁e₂)
    let mut num = BiPoly::zero();
    let mut den = BiPoly::zero();
    num.c[0][0] = ONE;
    den.c[0][0] = ONE;
    num.c[1][0] = ONE;
    den.c[1][0] = -ONE;
    let lead = match pair {
        None => {
            let g = ratio(&num, &den, 1, logs[0], ZERO).ok_or_else(|| singular(1))?;
            ratio(&den, &num, 1, logs[0], ZERO).ok_or_else(|| singular(1))?;
            ComplexMatrix::from_row_major(2, 2, vec![ZERO, g, g.inv(), ZERO])?
        }
        Some(p) => {
            num.c[0][1] = -ONE;
            den.c[0][1] = ONE;
            num.c[1][1] = -p.eta;
            den.c[1][1] = -p.eta;
            let g = ratio(&num, &den, 1, logs[0], logs[1]).ok_or_else(|| singular(1))?;
            ratio(&den, &num, 1, logs[0], logs[1]).ok_or_else(|| singular(1))?;
            ComplexMatrix::from_diagonal(&[g, g.inv()])
        }
    };
    GammaField::new(params.class, LeadField::Block(lead), fields)
}

/// Even one-soliton: `Γ₁` antidiagonal with `Γ = (1 + e^{-Z'})/(1 - e^{-Z'})`
/// and `Γ_α = (1 + (-1)^α e^{-2Z'})/(1 - (-1)^α e^{-2Z'})`.
pub fn one_soliton_even(params: &EvenSolitonParams, z_minus: f64, z_plus: f64) -> Result<GammaField> {
    if params.modes.len() != 1 {
        return Err(TodaError::InvalidSpec("one-soliton formula needs r = 1".into()));
    }
    even_field(params, None, z_minus, z_plus)
}

/// Even two-soliton with interaction factor `η₁₂` and shift `δ'`.
pub fn two_soliton_even(params: &EvenSolitonParams, z_minus: f64, z_plus: f64) -> Result<GammaField> {
    let pair = EvenPair::new(params)?;
    even_field(params, Some(&pair), z_minus, z_plus)
}

/// Even-family lead block for any `r` through the vectors
/// `v_i = (1 + e^{-Z'_i}, -(1 - e^{-Z'_i}))/√2`:
/// `Γ₁ = I + Σ v_i (R'⁻¹)_{ij} ᵗv_j J₂` with
/// `R'_{ij} = D_{ij}(ζ^N, ζ^N) - e^{-Z'_i} D_{ij}(ζ, ζ) e^{-Z'_j}`, `D_{ij}(f, g) = f_i/(f_i + g_j)`.
pub fn even_lead_from_v(params: &EvenSolitonParams, z_minus: f64, z_plus: f64) -> Result<ComplexMatrix> {
    let r = params.modes.len();
    let nb = params.class.blocks() as i32;
    let zeta: Vec<_> = params.modes.iter().map(|m| m.zeta).collect();
    let zn: Vec<_> = zeta.iter().map(|z| z.powi(nb)).collect();
    let e: Vec<_> = (0..r).map(|i| (-params.shifted_phase(i, z_minus, z_plus)).exp()).collect();
    let d = |f: &[Complex64], i: usize, j: usize| f[i] / (f[i] + f[j]);
    let rp = ComplexMatrix::from_fn(r, r, |i, j| d(&zn, i, j) - e[i] * d(&zeta, i, j) * e[j]);
    let inv = rp.inverse().map_err(|_| TodaError::SolutionSingular {
        alpha: 1,
        z_minus,
        z_plus,
    })?;
    let v: Vec<[Complex64; 2]> = e.iter().map(|x| [(ONE + x) / SQRT_2, -(ONE - x) / SQRT_2]).collect();
    let mut acc = ComplexMatrix::zeros(2, 2);
    for i in 0..r {
        for j in 0..r {
            for a in 0..2 {
                for b in 0..2 {
                    acc[(a, b)] += v[i][a] * inv[(i, j)] * v[j][b];
                }
            }
        }
    }
    Ok(&ComplexMatrix::identity(2) + &(&acc * &lead_exchange(&params.class)))
}
