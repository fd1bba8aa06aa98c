use num_complex::Complex64;

/// Fourth-order central first-derivative stencil: offsets and weights
/// (divide by `12 h`).
pub const STENCIL: [(i32, f64); 4] = [(-2, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0)];

/// `f'(x)` from the samples `f(x + k h)` for `k ∈ {-2, -1, 1, 2}`.
pub fn central_first(samples: impl Fn(i32) -> Complex64, h: f64) -> Complex64 {
    STENCIL.iter().map(|&(k, w)| samples(k) * w).sum::<Complex64>() / (12.0 * h)
}

/// Samples of a function on the `5 x 5` stencil around a point, indexed
/// by offsets `-2..=2` in each direction.
pub struct Stencil<T> {
    values: Vec<T>,
}

impl<T> Stencil<T> {
    /// Evaluate `f(a, b)` for all offsets; `None` if any evaluation fails.
    pub fn collect(mut f: impl FnMut(i32, i32) -> Option<T>) -> Option<Self> {
        let mut values = Vec::with_capacity(25);
        for a in -2..=2 {
            for b in -2..=2 {
                values.push(f(a, b)?);
            }
        }
        Some(Stencil { values })
    }

    pub fn at(&self, a: i32, b: i32) -> &T {
        &self.values[((a + 2) * 5 + (b + 2)) as usize]
    }
}
