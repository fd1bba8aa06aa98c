use num_complex::Complex64;

use crate::algebra::{eigenvector, lead_exchange, LoopStructure, TodaClass};
use crate::error::{Result, TodaError};
use crate::linalg::{ComplexMatrix, ComplexVector, Lu, ZERO};

use super::spec::SolitonSpec;

/// `|det| < SINGULAR_THRESHOLD · (Hadamard bound)` marks a solution singularity.
pub const SINGULAR_THRESHOLD: f64 = 1e-12;

/// Phase `Z_ρ(μ) = m (ε^{-s-2ρ} μ⁻¹ z⁻ + ε^{s+2ρ} μ z⁺)` of mode `ρ ≥ 1`.
pub fn mode_phase(class: &TodaClass, m: Complex64, rho: usize, pole: Complex64, z_minus: f64, z_plus: f64) -> Complex64 {
    let k = class.s() as i64 + 2 * rho as i64;
    m * (class.eps(-k) / pole * z_minus + class.eps(k) * pole * z_plus)
}

/// Rank-one data `u_i(z⁻, z⁺) = exp(-μ_i⁻¹ c₋ z⁻ - μ_i c₊ z⁺) u_i(0, 0)`,
/// evaluated mode by mode on the common eigenvectors of `c±`.
pub fn evolve_u(spec: &SolitonSpec, z_minus: f64, z_plus: f64) -> Vec<ComplexVector> {
    let class = spec.class();
    spec.solitons()
        .iter()
        .map(|sol| {
            let mut u = ComplexVector::zeros(class.dim());
            for &(rho, c) in sol.coefficients() {
                let psi = eigenvector(&class, rho).expect("mode range checked by SolitonSpec");
                let weight = if rho == 0 {
                    c
                } else {
                    c * (-mode_phase(&class, spec.m(), rho, sol.pole(), z_minus, z_plus)).exp()
                };
                for (x, p) in u.iter_mut().zip(psi.iter()) {
                    *x += weight * p;
                }
            }
            u
        })
        .collect()
}

/// Components of block `α` of `v` (one entry, or two for the even lead block).
pub fn block_of<'a>(class: &TodaClass, v: &'a [Complex64], alpha: usize) -> &'a [Complex64] {
    let start = class.block_start(alpha);
    &v[start..start + class.block_size(alpha)]
}

/// Scaled blocks `ũ_{i,α} = μ_i^α u_{i,α}` for `α = 1..=N`.
struct ScaledBlocks {
    /// `lead[i]` is `ũ_{i,1}`.
    lead: Vec<Vec<Complex64>>,
    /// `scalar[i][α]` is `ũ_{i,α}` for `α ≥ 2`; index 0 and 1 unused.
    scalar: Vec<Vec<Complex64>>,
}

impl ScaledBlocks {
    fn new(class: &TodaClass, poles: &[Complex64], u: &[ComplexVector]) -> Self {
        let nb = class.blocks();
        let mut lead = Vec::with_capacity(u.len());
        let mut scalar = Vec::with_capacity(u.len());
        for (mu, ui) in poles.iter().zip(u) {
            lead.push(block_of(class, ui, 1).iter().map(|x| x * mu).collect());
            let mut row = vec![ZERO; nb + 1];
            for (alpha, slot) in row.iter_mut().enumerate().skip(2) {
                *slot = mu.powi(alpha as i32) * ui[class.block_start(alpha)];
            }
            scalar.push(row);
        }
        ScaledBlocks { lead, scalar }
    }
}

/// Quasi-periodic matrices `R̃_α`, `α = 1..=2s`, at one spacetime point.
///
/// The last member is `R̃_{2s} = ᵗR̃₂`, which continues the recurrence
/// `R̃_{α+1} = R̃_α - ũ_{·,2s+1-α} ᵗũ_{·,α}` to `α = 2s - 1`.
#[derive(Debug, Clone)]
pub struct RTildeFamily {
    matrices: Vec<ComplexMatrix>,
}

impl RTildeFamily {
    pub fn new(spec: &SolitonSpec, u: &[ComplexVector]) -> Self {
        let class = spec.class();
        let s = class.s();
        let poles = spec.poles();
        let blocks = ScaledBlocks::new(&class, &poles, u);
        let mut matrices: Vec<_> = (1..2 * s).map(|alpha| assemble(&class, &poles, &blocks, alpha)).collect();
        matrices.push(matrices[1].transpose());
        RTildeFamily { matrices }
    }

    /// `R̃_α` for `α = 1..=2s`.
    pub fn get(&self, alpha: usize) -> &ComplexMatrix {
        &self.matrices[alpha - 1]
    }

    pub fn len(&self) -> usize {
        self.matrices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrices.is_empty()
    }
}

/// `R̃_α` alone, `α = 1..=2s`.
pub fn build_r_tilde(spec: &SolitonSpec, u: &[ComplexVector], alpha: usize) -> Result<ComplexMatrix> {
    let class = spec.class();
    let top = 2 * class.s();
    if !(1..=top).contains(&alpha) {
        return Err(TodaError::OutOfRange {
            name: "alpha",
            value: alpha as i64,
            lo: 1,
            hi: top as i64,
        });
    }
    check_u(spec, u)?;
    let poles = spec.poles();
    let blocks = ScaledBlocks::new(&class, &poles, u);
    if alpha == top {
        return Ok(assemble(&class, &poles, &blocks, 2).transpose());
    }
    Ok(assemble(&class, &poles, &blocks, alpha))
}

fn check_u(spec: &SolitonSpec, u: &[ComplexVector]) -> Result<()> {
    let n = spec.class().dim();
    if u.len() != spec.rank() || u.iter().any(|v| v.dim() != n) {
        return Err(TodaError::Dimension(format!(
            "expected {} vectors of dimension {n}",
            spec.rank()
        )));
    }
    Ok(())
}

fn assemble(class: &TodaClass, poles: &[Complex64], blocks: &ScaledBlocks, alpha: usize) -> ComplexMatrix {
    let s = class.s();
    let nb = class.blocks();
    let j_lead = lead_exchange(class);
    let r = poles.len();
    let pow_n: Vec<Complex64> = poles.iter().map(|mu| mu.powi(nb as i32)).collect();
    ComplexMatrix::from_fn(r, r, |i, j| {
        let (mi, mj) = (pow_n[i], pow_n[j]);
        let (a, b) = (&blocks.lead[i], &blocks.lead[j]);
        let mut lead = ZERO;
        for x in 0..a.len() {
            for y in 0..b.len() {
                lead += a[x] * j_lead[(x, y)] * b[y];
            }
        }
        let lead = mi * lead * mj;
        // S(lo, hi) = Σ_{β=lo}^{hi} ũ_{i,2s+1-β} ũ_{j,β}
        let sum = |lo: usize, hi: usize| -> Complex64 {
            (lo..=hi).map(|beta| blocks.scalar[i][2 * s + 1 - beta] * blocks.scalar[j][beta]).sum()
        };
        let value = if alpha == 1 {
            lead - mj * sum(2, s) + mj * sum(s + 1, nb)
        } else if alpha <= s {
            -lead + mj * sum(2, alpha - 1) - mi * sum(alpha, s) + mi * sum(s + 1, nb)
        } else {
            -lead + mj * sum(2, s) - mj * sum(s + 1, alpha - 1) + mi * sum(alpha, nb)
        };
        value / (mi + mj)
    })
}

/// `ũ_{·,α}` as a column over the solitons, `α = 2..=N`.
pub fn scaled_component(spec: &SolitonSpec, u: &[ComplexVector], alpha: usize) -> ComplexVector {
    let class = spec.class();
    let k = class.block_start(alpha);
    ComplexVector(spec.poles().iter().zip(u).map(|(mu, ui)| mu.powi(alpha as i32) * ui[k]).collect())
}

/// `ũ_{i,1}` for each soliton.
pub fn scaled_lead(spec: &SolitonSpec, u: &[ComplexVector]) -> Vec<Vec<Complex64>> {
    let class = spec.class();
    spec.poles()
        .iter()
        .zip(u)
        .map(|(mu, ui)| block_of(&class, ui, 1).iter().map(|x| x * mu).collect())
        .collect()
}

/// LU factors of `R̃_1..R̃_{2s-1}`, rejecting solution singularities.
pub fn factor_family(family: &RTildeFamily, point: (f64, f64)) -> Result<Vec<Lu>> {
    (1..family.len())
        .map(|alpha| {
            let m = family.get(alpha);
            let lu = m.lu()?;
            if lu.is_singular() || lu.det().norm() < SINGULAR_THRESHOLD * m.hadamard_bound() {
                return Err(TodaError::SolutionSingular {
                    alpha,
                    z_minus: point.0,
                    z_plus: point.1,
                });
            }
            Ok(lu)
        })
        .collect()
}

/// Recover `w_i` from the `R̃` family by the block-wise inversion formulas.
pub fn compute_w(
    spec: &SolitonSpec,
    u: &[ComplexVector],
    family: &RTildeFamily,
    point: (f64, f64),
) -> Result<Vec<ComplexVector>> {
    check_u(spec, u)?;
    let factors = factor_family(family, point)?;
    Ok(solve_w(spec, u, &factors))
}

fn solve_w(spec: &SolitonSpec, u: &[ComplexVector], factors: &[Lu]) -> Vec<ComplexVector> {
    let class = spec.class();
    let s = class.s();
    let nb = class.blocks();
    let r = spec.rank();
    let poles = spec.poles();
    let inv_n = 1.0 / nb as f64;
    let mut w = vec![ComplexVector::zeros(class.dim()); r];

    // Lead block: w_{i,1} = -(1/N) μ_i^{2s} Σ_j (R̃₁⁻¹)_{ij} J ũ_{j,1}.
    let j_lead = lead_exchange(&class);
    let lead = scaled_lead(spec, u);
    for x in 0..class.lead_block_size() {
        let rhs: Vec<Complex64> = lead
            .iter()
            .map(|v| (0..v.len()).map(|y| j_lead[(x, y)] * v[y]).sum())
            .collect();
        let sol = factors[0].solve(&rhs).expect("factor checked nonsingular");
        for i in 0..r {
            w[i][x] = -inv_n * poles[i].powi(2 * s as i32) * sol[i];
        }
    }

    // Scalar blocks: w_{i,k} = ±(1/N) μ_i^k Σ_j (R̃_k⁻¹)_{ij} ũ_{j,N+2-k}.
    for k in 2..=nb {
        let rhs = scaled_component(spec, u, nb + 2 - k);
        let sol = factors[k - 1].solve(&rhs).expect("factor checked nonsingular");
        let sign = if k <= s { inv_n } else { -inv_n };
        let comp = class.block_start(k);
        for i in 0..r {
            w[i][comp] = sign * poles[i].powi(k as i32) * sol[i];
        }
    }
    w
}

/// Everything the dressing produces at one spacetime point.
#[derive(Debug, Clone)]
pub struct DressingState {
    pub point: (f64, f64),
    pub u: Vec<ComplexVector>,
    pub w: Vec<ComplexVector>,
    pub r_tilde: RTildeFamily,
    /// `det R̃_α` for `α = 1..=2s`.
    pub determinants: Vec<Complex64>,
    /// `P_i = u_i ᵗw_i`.
    pub p: Vec<ComplexMatrix>,
    /// `Q_i = h⁻¹ B⁻¹ ᵗP_i B h`.
    pub q: Vec<ComplexMatrix>,
    pub(crate) factors: Vec<Lu>,
}

impl DressingState {
    pub fn new(spec: &SolitonSpec, z_minus: f64, z_plus: f64) -> Result<Self> {
        let structure = LoopStructure::new(spec.class(), spec.m())?;
        Self::with_structure(spec, &structure, z_minus, z_plus)
    }

    /// As [`DressingState::new`], reusing precomputed structure matrices.
    pub fn with_structure(spec: &SolitonSpec, structure: &LoopStructure, z_minus: f64, z_plus: f64) -> Result<Self> {
        let point = (z_minus, z_plus);
        let u = evolve_u(spec, z_minus, z_plus);
        let r_tilde = RTildeFamily::new(spec, &u);
        let factors = factor_family(&r_tilde, point)?;
        let w = solve_w(spec, &u, &factors);
        let mut determinants: Vec<Complex64> = factors.iter().map(|f| f.det()).collect();
        // det ᵗR̃₂ = det R̃₂
        determinants.push(determinants[1]);
        let p: Vec<_> = u.iter().zip(&w).map(|(a, b)| ComplexMatrix::outer(a, b)).collect();
        let q = p.iter().map(|pi| inverse_residue(structure, pi)).collect();
        Ok(DressingState {
            point,
            u,
            w,
            r_tilde,
            determinants,
            p,
            q,
            factors,
        })
    }

    pub fn rank(&self) -> usize {
        self.u.len()
    }

    /// `det R̃_α`, `α = 1..=2s`.
    pub fn det(&self, alpha: usize) -> Complex64 {
        self.determinants[alpha - 1]
    }

    /// `ᵗũ_{i,1}`-weighted inverse of `R̃₁`: `(R̃₁⁻¹)` applied to a column.
    pub fn solve_lead(&self, rhs: &[Complex64]) -> ComplexVector {
        self.factors[0].solve(rhs).expect("factor checked nonsingular")
    }
}

/// `Q = h⁻¹ B⁻¹ ᵗP B h`.
pub fn inverse_residue(structure: &LoopStructure, p: &ComplexMatrix) -> ComplexMatrix {
    let inner = &(&structure.b_inv * &p.transpose()) * &structure.b;
    &(&structure.h_inv * &inner) * &structure.h
}
