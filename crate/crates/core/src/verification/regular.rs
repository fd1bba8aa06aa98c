//! Soliton data whose solutions stay regular on `[-1, 1]²`: real
//! rapidities with the phases chosen so that no zero of the determinants
//! comes near the real `(z⁻, z⁺)` plane.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::algebra::TodaClass;
use crate::closed_forms::{EvenMode, EvenSolitonParams, OddMode, OddSolitonParams};
use crate::error::Result;

/// Odd family, every soliton on modes `(J, K)`, real rapidities `zetas`
/// and `Im X = π/2`. Real parts of the phases step by 0.3.
pub fn odd_params(s: usize, m: f64, jk: (usize, usize), zetas: &[f64]) -> Result<OddSolitonParams> {
    let class = TodaClass::odd(s)?;
    let theta = PI * (jk.0 as f64 - jk.1 as f64) / class.blocks() as f64;
    let modes = zetas
        .iter()
        .enumerate()
        .map(|(n, &z)| {
            let delta = Complex64::new(0.3 * n as f64, 2.0 * theta + PI / 2.0);
            OddMode::from_rapidity(&class, Complex64::new(z, 0.0), jk.0, jk.1, delta)
        })
        .collect::<Result<Vec<_>>>()?;
    OddSolitonParams::new(class, Complex64::new(m, 0.0), modes)
}

/// Even family, modes `I = 1, 2, …` with real rapidities and phase
/// `Im δ = π/4 - θ`.
pub fn even_params(s: usize, m: f64, zetas: &[f64]) -> Result<EvenSolitonParams> {
    let class = TodaClass::even(s)?;
    let modes = zetas
        .iter()
        .enumerate()
        .map(|(n, &z)| {
            let i = n + 1;
            let theta = PI * (s + 2 * i) as f64 / class.blocks() as f64;
            let delta = Complex64::new(0.3 * n as f64, PI / 4.0 - theta);
            EvenMode::from_rapidity(&class, Complex64::new(z, 0.0), i, delta)
        })
        .collect::<Result<Vec<_>>>()?;
    EvenSolitonParams::new(class, Complex64::new(m, 0.0), modes)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_modes() {
        assert!(odd_params(3, 1.0, (2, 2), &[1.0]).is_err());
        assert!(even_params(1, 1.0, &[1.0]).is_err());
        assert_eq!(even_params(3, 1.0, &[1.0, 2.0]).unwrap().modes[1].i, 2);
    }
}
