use num_complex::Complex64;

use crate::algebra::{lead_exchange, ClassKind, TodaClass};
use crate::error::{Result, TodaError};
use crate::linalg::{ComplexMatrix, ONE, ZERO};

use super::spec::SolitonSpec;
use super::state::{scaled_lead, DressingState};

/// The leading block `Γ₁` of `γ`.
#[derive(Debug, Clone, PartialEq)]
pub enum LeadField {
    Scalar(Complex64),
    Block(ComplexMatrix),
}

impl LeadField {
    /// The `(1, 1)` entry: the scalar itself, or the top-left entry of the block.
    pub fn first(&self) -> Complex64 {
        match self {
            LeadField::Scalar(x) => *x,
            LeadField::Block(m) => m[(0, 0)],
        }
    }

    pub fn as_matrix(&self) -> ComplexMatrix {
        match self {
            LeadField::Scalar(x) => ComplexMatrix::from_diagonal(&[*x]),
            LeadField::Block(m) => m.clone(),
        }
    }
}

/// The diagonal torus element `γ = diag(Γ₁, Γ₂, …, Γ_{2s-1})`.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaField {
    class: TodaClass,
    lead_raw: LeadField,
    lead: LeadField,
    /// `Γ_α` for `α = 2..=2s-1`.
    fields: Vec<Complex64>,
}

impl GammaField {
    pub fn new(class: TodaClass, lead_raw: LeadField, fields: Vec<Complex64>) -> Result<Self> {
        if fields.len() != class.blocks() - 1 {
            return Err(TodaError::Dimension(format!(
                "{} scalar fields for {} blocks",
                fields.len(),
                class.blocks()
            )));
        }
        let lead = match (&lead_raw, class.kind()) {
            (LeadField::Scalar(_), ClassKind::Odd) => lead_raw.clone(),
            (LeadField::Block(m), ClassKind::Even) if m.rows() == 2 && m.cols() == 2 => {
                // An antidiagonal Γ₁ is brought to the diagonal torus by J₂.
                if m[(0, 1)].norm() + m[(1, 0)].norm() > m[(0, 0)].norm() + m[(1, 1)].norm() {
                    LeadField::Block(m * &lead_exchange(&class))
                } else {
                    lead_raw.clone()
                }
            }
            _ => return Err(TodaError::Dimension("lead block does not match the class".into())),
        };
        Ok(GammaField {
            class,
            lead_raw,
            lead,
            fields,
        })
    }

    /// The vacuum `γ = I`.
    pub fn identity(class: TodaClass) -> Self {
        let lead = match class.kind() {
            ClassKind::Odd => LeadField::Scalar(ONE),
            ClassKind::Even => LeadField::Block(ComplexMatrix::identity(2)),
        };
        GammaField::new(class, lead, vec![ONE; class.blocks() - 1]).expect("shapes match")
    }

    pub fn class(&self) -> TodaClass {
        self.class
    }

    /// `Γ₁` as produced, possibly antidiagonal in the even family.
    pub fn lead_raw(&self) -> &LeadField {
        &self.lead_raw
    }

    /// `Γ₁` in the diagonal torus (`Γ₁ J₂` when the raw block is antidiagonal).
    pub fn lead(&self) -> &LeadField {
        &self.lead
    }

    /// `Γ_α` for `α = 2..=2s-1`.
    pub fn field(&self, alpha: usize) -> Complex64 {
        self.fields[alpha - 2]
    }

    pub fn fields(&self) -> &[Complex64] {
        &self.fields
    }

    /// The unknowns of the scalar Toda system, `α = 1..=2s-1`.
    ///
    /// Odd family: `γ` is divided by the scalar `Γ₁ = ±1`, so entry 0 is 1.
    /// Even family: entry 0 is `(Γ₁)₁₁` of the torus-valued lead block.
    pub fn toda_fields(&self) -> Vec<Complex64> {
        let mut out = Vec::with_capacity(self.class.blocks());
        match &self.lead {
            LeadField::Scalar(g) => {
                out.push(ONE);
                out.extend(self.fields.iter().map(|x| x / g));
            }
            LeadField::Block(m) => {
                out.push(m[(0, 0)]);
                out.extend_from_slice(&self.fields);
            }
        }
        out
    }

    /// `γ` as an `n x n` matrix, with the raw lead block.
    pub fn assemble(&self) -> ComplexMatrix {
        let n = self.class.dim();
        let mut g = ComplexMatrix::zeros(n, n);
        let lead = self.lead_raw.as_matrix();
        for i in 0..lead.rows() {
            for j in 0..lead.cols() {
                g[(i, j)] = lead[(i, j)];
            }
        }
        for alpha in 2..=self.class.blocks() {
            let k = self.class.block_start(alpha);
            g[(k, k)] = self.field(alpha);
        }
        g
    }
}

/// Fields from the determinant representation `Γ_α = det R̃_{α+1} / det R̃_α`.
///
/// The lead block is `I - Σ_{ij} μ_i^N (R̃₁⁻¹)_{ij} ũ_{i,1} ᵗũ_{j,1} J`; for
/// the odd family this is the constant `(-1)^r`, which is returned exactly.
pub fn gamma_from_dressing(spec: &SolitonSpec, state: &DressingState) -> Result<GammaField> {
    let class = spec.class();
    let fields = (2..class.blocks() + 1).map(|alpha| state.det(alpha + 1) / state.det(alpha)).collect();
    let lead = match class.kind() {
        ClassKind::Odd => LeadField::Scalar(if spec.rank() % 2 == 0 { ONE } else { -ONE }),
        ClassKind::Even => LeadField::Block(lead_block(spec, state)),
    };
    GammaField::new(class, lead, fields)
}

/// The lead block of `γ` through the `R̃₁` route, for either family.
pub fn lead_block(spec: &SolitonSpec, state: &DressingState) -> ComplexMatrix {
    let class = spec.class();
    let n1 = class.lead_block_size();
    let lead = scaled_lead(spec, &state.u);
    let pow_n: Vec<Complex64> = spec.poles().iter().map(|mu| mu.powi(class.blocks() as i32)).collect();
    // Σ_{ij} μ_i^N ũ_{i,1} (R̃₁⁻¹)_{ij} ᵗũ_{j,1} = Σ_x (μ^N ũ_{·,1})ᵗ R̃₁⁻¹ ...
    let mut acc = ComplexMatrix::zeros(n1, n1);
    for y in 0..n1 {
        let column: Vec<Complex64> = lead.iter().map(|v| v[y]).collect();
        let sol = state.solve_lead(&column);
        for x in 0..n1 {
            let mut t = ZERO;
            for i in 0..spec.rank() {
                t += pow_n[i] * lead[i][x] * sol[i];
            }
            acc[(x, y)] = t;
        }
    }
    &ComplexMatrix::identity(n1) - &(&acc * &lead_exchange(&class))
}

/// Fields read off `γ = ψ_∞` directly: `Γ_k = 1 + N Σ_i (P_i)_{kk}` and
/// the lead block `I + N Σ_i (P_i)_{lead}`.
pub fn gamma_from_residues(spec: &SolitonSpec, state: &DressingState) -> Result<GammaField> {
    let class = spec.class();
    let nb = class.blocks() as f64;
    let n1 = class.lead_block_size();
    let diag = |k: usize, l: usize| -> Complex64 {
        let extra: Complex64 = state.p.iter().map(|p| p[(k, l)]).sum();
        let delta = if k == l { ONE } else { ZERO };
        delta + extra * nb
    };
    let lead = match class.kind() {
        ClassKind::Odd => LeadField::Scalar(diag(0, 0)),
        ClassKind::Even => LeadField::Block(ComplexMatrix::from_fn(n1, n1, diag)),
    };
    let fields = (2..=class.blocks())
        .map(|alpha| {
            let k = class.block_start(alpha);
            diag(k, k)
        })
        .collect();
    GammaField::new(class, lead, fields)
}
