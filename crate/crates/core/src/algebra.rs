//! Structure data of the two twisted `gl_n` families.
//!
//! Both families share `N = p = 2s - 1` diagonal blocks and an automorphism
//! of order `M = 2N`. The odd family has `n = 2s - 1` and every block of
//! size one; the even family has `n = 2s` with a leading 2x2 block.
//!
//! Block indices `α` run over `1..=N` and are 1-based throughout, matching
//! the way the block structure is usually written down. Matrix components
//! are 0-based.
//!
//! The involution matrix `B` is a signed permutation:
//!
//! | block row `α`  | nonzero entry                         |
//! |----------------|---------------------------------------|
//! | `1`            | `J_{n1}` in block `(1, 1)`            |
//! | `2..=s`        | `+1` in block column `N + 2 - α`      |
//! | `s+1..=N`      | `-1` in block column `N + 2 - α`      |
//!
//! with `J_1 = 1` and `J_2` the 2x2 exchange matrix. This is the unique
//! sign pattern for which `A(x) = -h B⁻¹ ᵗx B h⁻¹` has order dividing `2N`
//! and carries `c±` into `ε^{±1} c±`; the unit tests pin those properties.

use std::f64::consts::{PI, SQRT_2};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Result, TodaError};
use crate::linalg::{ComplexMatrix, ComplexVector, ONE, ZERO};

/// `exp(2πik/M)`, with `k` reduced modulo `M` before forming the angle.
///
/// Quarter turns are returned exactly.
pub fn root_of_unity(order: u32, k: i64) -> Complex64 {
    assert!(order >= 1, "root of unity of order zero");
    let m = order as i64;
    let k = k.rem_euclid(m);
    if (4 * k) % m == 0 {
        return match 4 * k / m {
            0 => ONE,
            1 => Complex64::new(0.0, 1.0),
            2 => -ONE,
            _ => Complex64::new(0.0, -1.0),
        };
    }
    Complex64::from_polar(1.0, 2.0 * PI * k as f64 / m as f64)
}

/// `|j|_N`: the non-negative remainder of `j` modulo `N`.
pub fn residue_mod(j: i64, n: u32) -> i64 {
    j.rem_euclid(n as i64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ClassKind {
    Odd,
    Even,
}

/// One of the two twisted families together with its size parameter `s ≥ 2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TodaClass {
    kind: ClassKind,
    s: usize,
}

impl TodaClass {
    pub fn new(kind: ClassKind, s: usize) -> Result<Self> {
        if s < 2 {
            return Err(TodaError::InvalidClass(format!("s must be at least 2, got {s}")));
        }
        Ok(TodaClass { kind, s })
    }

    pub fn odd(s: usize) -> Result<Self> {
        Self::new(ClassKind::Odd, s)
    }

    pub fn even(s: usize) -> Result<Self> {
        Self::new(ClassKind::Even, s)
    }

    pub fn kind(&self) -> ClassKind {
        self.kind
    }

    pub fn s(&self) -> usize {
        self.s
    }

    /// Matrix size `n`.
    pub fn dim(&self) -> usize {
        match self.kind {
            ClassKind::Odd => 2 * self.s - 1,
            ClassKind::Even => 2 * self.s,
        }
    }

    /// Number of diagonal blocks, `N = p = 2s - 1`.
    pub fn blocks(&self) -> usize {
        2 * self.s - 1
    }

    /// Size `n₁` of the leading block.
    pub fn lead_block_size(&self) -> usize {
        match self.kind {
            ClassKind::Odd => 1,
            ClassKind::Even => 2,
        }
    }

    /// Order `M = 2N` of the automorphism.
    pub fn automorphism_order(&self) -> u32 {
        2 * self.blocks() as u32
    }

    /// `ε_{2N}^k`.
    pub fn eps(&self, k: i64) -> Complex64 {
        root_of_unity(self.automorphism_order(), k)
    }

    /// Reduce a block index into `1..=N`.
    pub fn wrap_block(&self, alpha: i64) -> usize {
        (alpha - 1).rem_euclid(self.blocks() as i64) as usize + 1
    }

    /// First matrix component of block `α` (1-based block, 0-based component).
    pub fn block_start(&self, alpha: usize) -> usize {
        debug_assert!((1..=self.blocks()).contains(&alpha));
        match (self.kind, alpha) {
            (_, 1) => 0,
            (ClassKind::Odd, a) => a - 1,
            (ClassKind::Even, a) => a,
        }
    }

    pub fn block_size(&self, alpha: usize) -> usize {
        if alpha == 1 {
            self.lead_block_size()
        } else {
            1
        }
    }

    /// Block that owns matrix component `k`.
    pub fn block_of_component(&self, k: usize) -> usize {
        match self.kind {
            ClassKind::Odd => k + 1,
            ClassKind::Even => k.max(1),
        }
    }

    /// Exponent `e` with `h_kk = ε_{2N}^e` for matrix component `k`.
    pub fn h_exponent(&self, k: usize) -> i64 {
        (self.blocks() - self.block_of_component(k) + 1) as i64
    }

    /// Sign `±1` of the antidiagonal entry of `B` in block row `α ≥ 2`.
    pub fn b_sign(&self, alpha: usize) -> f64 {
        if alpha <= self.s {
            1.0
        } else {
            -1.0
        }
    }
}

/// `J_{n₁}`: `1` for the odd family, the 2x2 exchange matrix for the even one.
pub fn lead_exchange(class: &TodaClass) -> ComplexMatrix {
    match class.kind() {
        ClassKind::Odd => ComplexMatrix::identity(1),
        ClassKind::Even => ComplexMatrix::from_fn(2, 2, |i, j| if i != j { ONE } else { ZERO }),
    }
}

/// Diagonal grading matrix `h`.
pub fn build_h(class: &TodaClass) -> ComplexMatrix {
    let diag: Vec<_> = (0..class.dim()).map(|k| class.eps(class.h_exponent(k))).collect();
    ComplexMatrix::from_diagonal(&diag)
}

/// Involution matrix `B` (see the module table).
pub fn build_b(class: &TodaClass) -> ComplexMatrix {
    let n = class.dim();
    let nb = class.blocks();
    let mut b = ComplexMatrix::zeros(n, n);
    let j = lead_exchange(class);
    for r in 0..class.lead_block_size() {
        for c in 0..class.lead_block_size() {
            b[(r, c)] = j[(r, c)];
        }
    }
    for alpha in 2..=nb {
        let col = nb + 2 - alpha;
        b[(class.block_start(alpha), class.block_start(col))] = Complex64::from(class.b_sign(alpha));
    }
    b
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

/// Constant connection matrix `c₊` or `c₋` with coupling `m`.
///
/// `c₊` carries the block `C_{+α}` at block position `(α, α+1)` and `C_{+0}`
/// at `(N, 1)`; `c₋` is the mirror image with `C_{-α}` at `(α+1, α)` and
/// `C_{-0}` at `(1, N)`. Scalar blocks equal `m` for `α ≤ s` and `-m` for
/// `s < α < N`. In the even family the blocks touching the 2x2 block have
/// both entries `m/√2`.
pub fn build_c(class: &TodaClass, m: Complex64, sign: Sign) -> Result<ComplexMatrix> {
    if m == ZERO || !m.re.is_finite() || !m.im.is_finite() {
        return Err(TodaError::InvalidSpec(format!("coupling m must be finite and nonzero, got {m}")));
    }
    let n = class.dim();
    let nb = class.blocks();
    let s = class.s();
    let mut c = ComplexMatrix::zeros(n, n);
    let coupling = |alpha: usize| if alpha <= s { m } else { -m };
    let mut put = |row_block: usize, col_block: usize, value: Complex64| {
        let (r0, c0) = (class.block_start(row_block), class.block_start(col_block));
        for i in 0..class.block_size(row_block) {
            for j in 0..class.block_size(col_block) {
                let (r, col) = match sign {
                    Sign::Plus => (r0 + i, c0 + j),
                    Sign::Minus => (c0 + j, r0 + i),
                };
                c[(r, col)] = value;
            }
        }
    };
    let lead = match class.kind() {
        ClassKind::Odd => m,
        ClassKind::Even => m / SQRT_2,
    };
    // C_{±1} and C_{±0} couple the leading block to its neighbours.
    put(1, 2, lead);
    put(nb, 1, lead);
    for alpha in 2..nb {
        put(alpha, alpha + 1, coupling(alpha));
    }
    Ok(c)
}

/// Lie-algebra automorphism `A(x) = -h B⁻¹ ᵗx B h⁻¹`.
pub fn apply_algebra_automorphism(class: &TodaClass, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_square(class, x)?;
    let structure = Conjugator::new(class);
    Ok(structure.conjugate(&x.transpose()).scale(-ONE))
}

/// Group automorphism `a(g) = h B⁻¹ ᵗg⁻¹ B h⁻¹`.
pub fn apply_group_automorphism(class: &TodaClass, g: &ComplexMatrix) -> Result<ComplexMatrix> {
    check_square(class, g)?;
    let inv = g.transpose().inverse()?;
    Ok(Conjugator::new(class).conjugate(&inv))
}

fn check_square(class: &TodaClass, x: &ComplexMatrix) -> Result<()> {
    let n = class.dim();
    if x.rows() != n || x.cols() != n {
        return Err(TodaError::Dimension(format!(
            "expected {n}x{n}, got {}x{}",
            x.rows(),
            x.cols()
        )));
    }
    Ok(())
}

/// `y ↦ h B⁻¹ y B h⁻¹`, with `h` diagonal and `B` a signed permutation.
struct Conjugator {
    h: Vec<Complex64>,
    b: ComplexMatrix,
}

impl Conjugator {
    fn new(class: &TodaClass) -> Self {
        Conjugator {
            h: build_h(class).diagonal(),
            b: build_b(class),
        }
    }

    fn conjugate(&self, y: &ComplexMatrix) -> ComplexMatrix {
        // B is orthogonal, so B⁻¹ = ᵗB.
        let inner = &(&self.b.transpose() * y) * &self.b;
        ComplexMatrix::from_fn(inner.rows(), inner.cols(), |i, j| self.h[i] * inner[(i, j)] / self.h[j])
    }
}

/// Common eigenvector `Ψ_ρ` of `c₋`, `c₊` and their transposes.
///
/// `c₋ Ψ_ρ = m ε^{-s-2ρ} Ψ_ρ` and `c₊ Ψ_ρ = m ε^{s+2ρ} Ψ_ρ` for
/// `ρ = 1..=2s-1`. In the even family `ρ = 0` gives the shared null vector
/// `(1, -1, 0, …, 0)`.
pub fn eigenvector(class: &TodaClass, rho: usize) -> Result<ComplexVector> {
    let nb = class.blocks();
    let lo = match class.kind() {
        ClassKind::Odd => 1,
        ClassKind::Even => 0,
    };
    if rho < lo || rho > nb {
        return Err(TodaError::OutOfRange {
            name: "rho",
            value: rho as i64,
            lo: lo as i64,
            hi: nb as i64,
        });
    }
    let mut v = ComplexVector::zeros(class.dim());
    if rho == 0 {
        v[0] = ONE;
        v[1] = -ONE;
        return Ok(v);
    }
    let s = class.s() as i64;
    let phase = s + 2 * rho as i64;
    let weight = match class.kind() {
        ClassKind::Odd => 1.0,
        ClassKind::Even => SQRT_2,
    };
    for alpha in 1..=nb {
        let a = alpha as i64;
        let value = class.eps(a * phase);
        if alpha == 1 {
            for k in 0..class.lead_block_size() {
                v[k] = value;
            }
            continue;
        }
        let sign = if a <= s { 1.0 } else { (-1.0f64).powi((a - s - 1) as i32) };
        v[class.block_start(alpha)] = value * sign * weight;
    }
    Ok(v)
}

/// Eigenvalue of `c₋` on `Ψ_ρ` (`ρ ≥ 1`).
pub fn c_minus_eigenvalue(class: &TodaClass, m: Complex64, rho: usize) -> Complex64 {
    m * class.eps(-(class.s() as i64) - 2 * rho as i64)
}

/// Eigenvalue of `c₊` on `Ψ_ρ` (`ρ ≥ 1`).
pub fn c_plus_eigenvalue(class: &TodaClass, m: Complex64, rho: usize) -> Complex64 {
    m * class.eps(class.s() as i64 + 2 * rho as i64)
}

/// All structure data of a class at coupling `m`, built once.
#[derive(Debug, Clone)]
pub struct LoopStructure {
    pub class: TodaClass,
    pub m: Complex64,
    pub h: ComplexMatrix,
    pub h_inv: ComplexMatrix,
    pub b: ComplexMatrix,
    pub b_inv: ComplexMatrix,
    pub c_minus: ComplexMatrix,
    pub c_plus: ComplexMatrix,
}

impl LoopStructure {
    pub fn new(class: TodaClass, m: Complex64) -> Result<Self> {
        let h = build_h(&class);
        let h_inv = ComplexMatrix::from_diagonal(&h.diagonal().iter().map(|x| x.inv()).collect::<Vec<_>>());
        let b = build_b(&class);
        let b_inv = b.transpose();
        Ok(LoopStructure {
            class,
            m,
            h,
            h_inv,
            b,
            b_inv,
            c_minus: build_c(&class, m, Sign::Minus)?,
            c_plus: build_c(&class, m, Sign::Plus)?,
        })
    }

    /// `(h^p)_kk`, evaluated from the reduced integer exponent.
    pub fn h_power(&self, k: usize, p: i64) -> Complex64 {
        self.class.eps(p * self.class.h_exponent(k))
    }

    /// `h^p X h^{-p}`.
    pub fn h_conjugate(&self, x: &ComplexMatrix, p: i64) -> ComplexMatrix {
        ComplexMatrix::from_fn(x.rows(), x.cols(), |i, j| {
            x[(i, j)] * self.class.eps(p * (self.class.h_exponent(i) - self.class.h_exponent(j)))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn classes() -> Vec<TodaClass> {
        let mut v = Vec::new();
        for s in 2..=4 {
            v.push(TodaClass::odd(s).unwrap());
            v.push(TodaClass::even(s).unwrap());
        }
        v
    }

    fn pseudo_random(n: usize, seed: u64) -> ComplexMatrix {
        let mut state = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let mut next = || {
            state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
        };
        ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(next(), next()))
    }

    #[test]
    fn roots_of_unity_examples() {
        assert_eq!(root_of_unity(4, 1), Complex64::new(0.0, 1.0));
        assert_eq!(root_of_unity(6, 3), -ONE);
        assert_eq!(root_of_unity(6, 7), root_of_unity(6, 1));
        assert_eq!(root_of_unity(6, -5), root_of_unity(6, 1));
        assert!((root_of_unity(6, 1) - Complex64::new(0.5, 3f64.sqrt() / 2.0)).norm() < 1e-15);
    }

    #[test]
    fn residue_mod_identity() {
        for n in [3u32, 5, 7] {
            for k in 1..=3 * n as i64 {
                assert_eq!(residue_mod(-k, n), n as i64 - 1 - residue_mod(k - 1, n));
            }
        }
    }

    #[test]
    fn class_rejects_small_s() {
        assert!(TodaClass::odd(1).is_err());
        assert!(TodaClass::even(0).is_err());
        let c = TodaClass::even(3).unwrap();
        assert_eq!((c.dim(), c.blocks(), c.lead_block_size(), c.automorphism_order()), (6, 5, 2, 10));
    }

    #[test]
    fn h_odd_s2_entries() {
        // h_kk = ε_6^{4-k}: -1, ε_6², ε_6
        let h = build_h(&TodaClass::odd(2).unwrap());
        let expected = [
            -ONE,
            Complex64::from_polar(1.0, 2.0 * PI / 3.0),
            Complex64::from_polar(1.0, PI / 3.0),
        ];
        for (k, e) in expected.iter().enumerate() {
            assert!((h[(k, k)] - e).norm() < 1e-15);
        }
    }

    #[test]
    fn scalar_rescaling_of_h_is_invisible() {
        // Only conjugation by h enters, so h and ε h define the same maps.
        let class = TodaClass::odd(3).unwrap();
        let x = pseudo_random(class.dim(), 3);
        let b = build_b(&class);
        let h = build_h(&class).scale(class.eps(1));
        let direct = &(&(&h * &b.transpose()) * &x.transpose()) * &(&b * &h.inverse().unwrap());
        let expected = apply_algebra_automorphism(&class, &x).unwrap();
        assert!((&direct.scale(-ONE) - &expected).max_abs() < 1e-13);
    }

    #[test]
    fn h_even_leading_block_is_minus_one() {
        let h = build_h(&TodaClass::even(2).unwrap());
        assert_eq!(h[(0, 0)], -ONE);
        assert_eq!(h[(1, 1)], -ONE);
    }

    #[test]
    fn h_power_2n_is_identity() {
        for class in classes() {
            let h = build_h(&class);
            let mut p = ComplexMatrix::identity(class.dim());
            for _ in 0..class.automorphism_order() {
                p = &p * &h;
            }
            assert!((&p - &ComplexMatrix::identity(class.dim())).max_abs() < 1e-13);
            for d in h.diagonal() {
                assert!((d.norm() - 1.0).abs() < 1e-15);
            }
        }
    }

    #[test]
    fn b_odd_s2_entries() {
        let b = build_b(&TodaClass::odd(2).unwrap());
        let mut expected = ComplexMatrix::zeros(3, 3);
        expected[(0, 0)] = ONE;
        expected[(1, 2)] = ONE;
        expected[(2, 1)] = -ONE;
        assert_eq!(b, expected);
    }

    #[test]
    fn b_even_has_exchange_block_and_is_invertible() {
        for class in classes() {
            let b = build_b(&class);
            assert!(b.det().unwrap().norm() > 0.5);
            assert!((&(&b * &b.transpose()) - &ComplexMatrix::identity(class.dim())).max_abs() < 1e-15);
            if class.kind() == ClassKind::Even {
                assert_eq!(b.block(0, 0, 2, 2), lead_exchange(&class));
            }
        }
    }

    #[test]
    fn c_rejects_zero_coupling() {
        assert!(build_c(&TodaClass::odd(2).unwrap(), ZERO, Sign::Plus).is_err());
    }

    #[test]
    fn c_plus_odd_s2_layout() {
        let cp = build_c(&TodaClass::odd(2).unwrap(), ONE, Sign::Plus).unwrap();
        let mut expected = ComplexMatrix::zeros(3, 3);
        expected[(0, 1)] = ONE; // C_{+1}
        expected[(1, 2)] = ONE; // C_{+2} = C_{+s}
        expected[(2, 0)] = ONE; // C_{+0}
        assert_eq!(cp, expected);
    }

    #[test]
    fn grading_relations_and_commutation() {
        let m = Complex64::new(0.7, 0.2);
        for class in classes() {
            let cp = build_c(&class, m, Sign::Plus).unwrap();
            let cm = build_c(&class, m, Sign::Minus).unwrap();
            let e = class.eps(1);
            let a_cp = apply_algebra_automorphism(&class, &cp).unwrap();
            let a_cm = apply_algebra_automorphism(&class, &cm).unwrap();
            assert!((&a_cp - &cp.scale(e)).max_abs() < 1e-13, "{class:?}");
            assert!((&a_cm - &cm.scale(e.inv())).max_abs() < 1e-13, "{class:?}");
            assert!(ComplexMatrix::commutator(&cm, &cp).max_abs() < 1e-13, "{class:?}");
        }
    }

    #[test]
    fn automorphism_order_divides_2n() {
        for class in classes() {
            let x = pseudo_random(class.dim(), class.s() as u64);
            let mut y = x.clone();
            for _ in 0..class.automorphism_order() {
                y = apply_algebra_automorphism(&class, &y).unwrap();
            }
            assert!((&y - &x).max_abs() < 1e-11 * x.max_abs());
            assert_eq!(
                apply_algebra_automorphism(&class, &ComplexMatrix::zeros(class.dim(), class.dim())).unwrap(),
                ComplexMatrix::zeros(class.dim(), class.dim())
            );
        }
    }

    #[test]
    fn group_automorphism_properties() {
        for class in classes() {
            let n = class.dim();
            let id = ComplexMatrix::identity(n);
            assert!((&apply_group_automorphism(&class, &id).unwrap() - &id).max_abs() < 1e-15);

            let g1 = &pseudo_random(n, 11) + &id.scale(Complex64::new(2.0, 0.0));
            let g2 = &pseudo_random(n, 12) + &id.scale(Complex64::new(2.0, 0.0));
            let lhs = apply_group_automorphism(&class, &(&g1 * &g2)).unwrap();
            let rhs = &apply_group_automorphism(&class, &g1).unwrap() * &apply_group_automorphism(&class, &g2).unwrap();
            assert!((&lhs - &rhs).max_abs() < 1e-10);

            let mut g = g1.clone();
            for _ in 0..class.automorphism_order() {
                g = apply_group_automorphism(&class, &g).unwrap();
            }
            assert!((&g - &g1).max_abs() < 1e-10);
        }
    }

    #[test]
    fn group_automorphism_rejects_singular() {
        let class = TodaClass::odd(2).unwrap();
        assert_eq!(
            apply_group_automorphism(&class, &ComplexMatrix::zeros(3, 3)),
            Err(TodaError::SingularMatrix)
        );
    }

    #[test]
    fn group_automorphism_differential_is_algebra_automorphism() {
        // Richardson-extrapolated difference quotient of a(I + εx).
        for class in classes() {
            let n = class.dim();
            let x = pseudo_random(n, 7);
            let id = ComplexMatrix::identity(n);
            let quotient = |eps: f64| {
                let g = &id + &x.scale(Complex64::from(eps));
                (&apply_group_automorphism(&class, &g).unwrap() - &id).scale(Complex64::from(1.0 / eps))
            };
            let (d1, d2) = (quotient(1e-4), quotient(5e-5));
            let extrapolated = &d2.scale(Complex64::from(2.0)) - &d1;
            let expected = apply_algebra_automorphism(&class, &x).unwrap();
            assert!((&extrapolated - &expected).max_abs() < 1e-7);
        }
    }

    #[test]
    fn eigenrelations_hold() {
        let m = Complex64::new(1.3, -0.4);
        for class in classes() {
            let cp = build_c(&class, m, Sign::Plus).unwrap();
            let cm = build_c(&class, m, Sign::Minus).unwrap();
            for rho in 1..=class.blocks() {
                let v = eigenvector(&class, rho).unwrap();
                let lm = c_minus_eigenvalue(&class, m, rho);
                let lp = c_plus_eigenvalue(&class, m, rho);
                let checks = [
                    (cm.mul_vec(&v), lm),
                    (cp.transpose().mul_vec(&v), lm),
                    (cp.mul_vec(&v), lp),
                    (cm.transpose().mul_vec(&v), lp),
                ];
                for (mv, lambda) in checks {
                    let err = mv.iter().zip(v.iter()).map(|(a, b)| (a - lambda * b).norm()).fold(0.0, f64::max);
                    assert!(err < 1e-12, "{class:?} rho={rho} err={err}");
                }
            }
        }
    }

    #[test]
    fn even_null_vector() {
        for s in 2..=4 {
            let class = TodaClass::even(s).unwrap();
            let v = eigenvector(&class, 0).unwrap();
            for sign in [Sign::Plus, Sign::Minus] {
                let c = build_c(&class, Complex64::new(0.8, 0.3), sign).unwrap();
                assert!(c.mul_vec(&v).max_abs() < 1e-15);
                assert!(c.transpose().mul_vec(&v).max_abs() < 1e-15);
            }
        }
        assert!(eigenvector(&TodaClass::odd(2).unwrap(), 0).is_err());
        assert!(eigenvector(&TodaClass::odd(2).unwrap(), 4).is_err());
    }

    proptest! {
        #[test]
        fn root_of_unity_is_periodic(order in 1u32..40, k in -200i64..200) {
            prop_assert_eq!(root_of_unity(order, k), root_of_unity(order, k + order as i64));
            prop_assert!((root_of_unity(order, k).norm() - 1.0).abs() < 1e-15);
        }

        #[test]
        fn algebra_automorphism_is_linear(s in 2usize..5, even in any::<bool>(), seed in 0u64..1000, k in -2.0f64..2.0) {
            let class = TodaClass::new(if even { ClassKind::Even } else { ClassKind::Odd }, s).unwrap();
            let x = pseudo_random(class.dim(), seed);
            let y = pseudo_random(class.dim(), seed + 1);
            let lhs = apply_algebra_automorphism(&class, &(&x + &y.scale(Complex64::from(k)))).unwrap();
            let rhs = &apply_algebra_automorphism(&class, &x).unwrap() + &apply_algebra_automorphism(&class, &y).unwrap().scale(Complex64::from(k));
            prop_assert!((&lhs - &rhs).max_abs() < 1e-12);
        }
    }
}
