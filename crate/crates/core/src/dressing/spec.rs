use num_complex::Complex64;

use crate::algebra::{ClassKind, TodaClass};
use crate::error::{Result, TodaError};

/// Relative threshold below which pole separations count as coincident.
pub const DEGENERACY_THRESHOLD: f64 = 1e-10;

/// One rank-one dressing factor: a pole `μ` and the initial data `u(0, 0)`
/// expanded over the eigenvectors `Ψ_ρ`.
#[derive(Debug, Clone, PartialEq)]
pub struct Soliton {
    pole: Complex64,
    coefficients: Vec<(usize, Complex64)>,
}

impl Soliton {
    /// Odd-family soliton with modes `J ≠ K` and constants `C_J`, `C_K`.
    pub fn odd(pole: Complex64, j: usize, k: usize, c_j: Complex64, c_k: Complex64) -> Result<Self> {
        if j == k {
            return Err(TodaError::InvalidSpec(format!("mode indices must differ (J = K = {j})")));
        }
        Self::with_coefficients(pole, vec![(j, c_j), (k, c_k)])
    }

    /// Even-family soliton coupling the null vector (`C_0`) to mode `I`.
    pub fn even(pole: Complex64, i: usize, c_0: Complex64, c_i: Complex64) -> Result<Self> {
        if i == 0 {
            return Err(TodaError::InvalidSpec("mode index I must be at least 1".into()));
        }
        Self::with_coefficients(pole, vec![(0, c_0), (i, c_i)])
    }

    /// Arbitrary nonzero coefficients `c_ρ` on distinct modes.
    pub fn with_coefficients(pole: Complex64, coefficients: Vec<(usize, Complex64)>) -> Result<Self> {
        if !is_finite(pole) || pole.norm() == 0.0 {
            return Err(TodaError::InvalidSpec(format!("pole must be finite and nonzero, got {pole}")));
        }
        if coefficients.is_empty() {
            return Err(TodaError::InvalidSpec("a soliton needs at least one coefficient".into()));
        }
        for (idx, (rho, c)) in coefficients.iter().enumerate() {
            if !is_finite(*c) || c.norm() == 0.0 {
                return Err(TodaError::InvalidSpec(format!("coefficient for mode {rho} must be finite and nonzero")));
            }
            if coefficients[..idx].iter().any(|(r, _)| r == rho) {
                return Err(TodaError::InvalidSpec(format!("mode indices must differ (mode {rho} listed twice)")));
            }
        }
        Ok(Soliton { pole, coefficients })
    }

    pub fn pole(&self) -> Complex64 {
        self.pole
    }

    pub fn coefficients(&self) -> &[(usize, Complex64)] {
        &self.coefficients
    }

    pub fn coefficient(&self, rho: usize) -> Option<Complex64> {
        self.coefficients.iter().find(|(r, _)| *r == rho).map(|(_, c)| *c)
    }
}

/// Validated dressing data for `r` solitons.
#[derive(Debug, Clone, PartialEq)]
pub struct SolitonSpec {
    class: TodaClass,
    m: Complex64,
    solitons: Vec<Soliton>,
}

impl SolitonSpec {
    pub fn new(class: TodaClass, m: Complex64, solitons: Vec<Soliton>) -> Result<Self> {
        if !is_finite(m) || m.norm() == 0.0 {
            return Err(TodaError::InvalidSpec(format!("coupling m must be finite and nonzero, got {m}")));
        }
        let nb = class.blocks();
        let lowest = match class.kind() {
            ClassKind::Odd => 1,
            ClassKind::Even => 0,
        };
        for (i, sol) in solitons.iter().enumerate() {
            for &(rho, _) in sol.coefficients() {
                if rho < lowest || rho > nb {
                    return Err(TodaError::InvalidSpec(format!(
                        "soliton {}: mode {rho} outside {lowest}..={nb}",
                        i + 1
                    )));
                }
            }
        }
        let nn = nb as i32;
        for i in 0..solitons.len() {
            for j in 0..solitons.len() {
                let (a, b) = (solitons[i].pole.powi(nn), solitons[j].pole.powi(nn));
                let scale = a.norm().max(b.norm());
                if i < j {
                    let gap = (a * a - b * b).norm() / (scale * scale);
                    if gap < DEGENERACY_THRESHOLD {
                        return Err(TodaError::DegenerateParameters {
                            quantity: format!("mu_{}^(2N) - mu_{}^(2N) (relative)", i + 1, j + 1),
                            value: gap,
                        });
                    }
                }
                let sum = (a + b).norm() / scale;
                if sum < DEGENERACY_THRESHOLD {
                    return Err(TodaError::DegenerateParameters {
                        quantity: format!("mu_{}^N + mu_{}^N (relative)", i + 1, j + 1),
                        value: sum,
                    });
                }
            }
        }
        Ok(SolitonSpec { class, m, solitons })
    }

    /// The vacuum: no dressing factors.
    pub fn vacuum(class: TodaClass, m: Complex64) -> Result<Self> {
        Self::new(class, m, Vec::new())
    }

    pub fn class(&self) -> TodaClass {
        self.class
    }

    pub fn m(&self) -> Complex64 {
        self.m
    }

    pub fn solitons(&self) -> &[Soliton] {
        &self.solitons
    }

    /// Number of solitons `r`.
    pub fn rank(&self) -> usize {
        self.solitons.len()
    }

    pub fn poles(&self) -> Vec<Complex64> {
        self.solitons.iter().map(|s| s.pole).collect()
    }

    /// Poles `ν_i = μ_i / ε_{2N}` of the inverse dressing matrix.
    pub fn inverse_poles(&self) -> Vec<Complex64> {
        let e = self.class.eps(1);
        self.solitons.iter().map(|s| s.pole / e).collect()
    }
}

fn is_finite(z: Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn equal_modes_rejected() {
        let err = Soliton::odd(c(1.0, 0.0), 2, 2, c(1.0, 0.0), c(1.0, 0.0)).unwrap_err();
        assert!(err.to_string().contains("J = K"));
    }

    #[test]
    fn zero_pole_and_zero_constant_rejected() {
        assert!(Soliton::odd(c(0.0, 0.0), 1, 2, c(1.0, 0.0), c(1.0, 0.0)).is_err());
        assert!(Soliton::even(c(1.0, 0.0), 1, c(0.0, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn mode_range_checked_against_class() {
        let class = TodaClass::odd(2).unwrap();
        let sol = Soliton::odd(c(1.0, 0.2), 1, 4, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!(SolitonSpec::new(class, c(1.0, 0.0), vec![sol]).is_err());
        let sol = Soliton::even(c(1.0, 0.2), 1, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert!(SolitonSpec::new(class, c(1.0, 0.0), vec![sol]).is_err());
    }

    #[test]
    fn coincident_orbits_rejected() {
        let class = TodaClass::odd(3).unwrap();
        let mu = c(0.9, 0.4);
        // μ ε_{2N} has the same 2N-th power as μ.
        let other = mu * class.eps(1);
        let a = Soliton::odd(mu, 1, 2, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        let b = Soliton::odd(other, 1, 3, c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        match SolitonSpec::new(class, c(1.0, 0.0), vec![a, b]) {
            Err(TodaError::DegenerateParameters { quantity, .. }) => assert!(quantity.contains("2N")),
            other => panic!("expected degeneracy, got {other:?}"),
        }
    }

    #[test]
    fn vacuum_has_rank_zero() {
        let spec = SolitonSpec::vacuum(TodaClass::even(2).unwrap(), c(1.0, 0.0)).unwrap();
        assert_eq!(spec.rank(), 0);
    }
}
