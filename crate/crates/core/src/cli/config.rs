use std::fs;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::Deserialize;

use crate::algebra::{ClassKind, TodaClass};
use crate::dressing::{Soliton, SolitonSpec};
use crate::error::TodaError;
use crate::verification::{GridSpec, DEFAULT_STEP_FACTOR};

use super::CliError;

/// Output format of data files.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ClassConfig {
    pub kind: ClassKind,
    pub s: usize,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientConfig {
    pub mode: usize,
    pub value: [f64; 2],
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SolitonConfig {
    pub pole: [f64; 2],
    pub coefficients: Vec<CoefficientConfig>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub z_minus: [f64; 2],
    pub z_plus: [f64; 2],
    pub n_minus: usize,
    pub n_plus: usize,
    #[serde(default = "default_step")]
    pub step_factor: f64,
}

fn default_step() -> f64 {
    DEFAULT_STEP_FACTOR
}

/// Command options; each can be overridden on the command line.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsConfig {
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
    pub tolerance: Option<f64>,
    pub lambda_samples: Option<usize>,
    pub seed: Option<u64>,
    /// Random points for the invariant suite.
    pub invariant_points: Option<usize>,
}

/// The JSON config document. Complex numbers are `[re, im]` pairs.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub class: ClassConfig,
    pub m: [f64; 2],
    #[serde(default)]
    pub solitons: Vec<SolitonConfig>,
    pub grid: GridConfig,
    #[serde(default)]
    pub options: OptionsConfig,
}

/// A config after validation.
#[derive(Debug, Clone)]
pub struct ValidatedRun {
    pub spec: SolitonSpec,
    pub grid: GridSpec,
    pub options: OptionsConfig,
}

fn complex(pair: [f64; 2]) -> Complex64 {
    Complex64::new(pair[0], pair[1])
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Config(format!("line {}, column {}: {e}", e.line(), e.column())))
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text).map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{}: {msg}", path.display())),
            other => other,
        })
    }

    /// Build the spec and grid, naming the offending field on failure.
    pub fn validate(&self) -> Result<ValidatedRun, CliError> {
        let field = |name: String| move |e: TodaError| CliError::from_toda(e).in_field(&name);
        let class = TodaClass::new(self.class.kind, self.class.s).map_err(field("class".into()))?;
        let mut solitons = Vec::with_capacity(self.solitons.len());
        for (i, sol) in self.solitons.iter().enumerate() {
            let coefficients = sol.coefficients.iter().map(|c| (c.mode, complex(c.value))).collect();
            let built = Soliton::with_coefficients(complex(sol.pole), coefficients).map_err(field(format!("solitons[{i}]")))?;
            solitons.push(built);
        }
        let spec = SolitonSpec::new(class, complex(self.m), solitons).map_err(field("solitons".into()))?;
        let g = &self.grid;
        let grid = GridSpec::new(g.z_minus, g.z_plus, g.n_minus, g.n_plus, g.step_factor).map_err(field("grid".into()))?;
        if let Some(t) = self.options.tolerance {
            if !(t > 0.0) || !t.is_finite() {
                return Err(CliError::Config(format!("options.tolerance: must be positive, got {t}")));
            }
        }
        Ok(ValidatedRun {
            spec,
            grid,
            options: self.options.clone(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const DBM: &str = r#"{
        "class": {"kind": "odd", "s": 2},
        "m": [1.0, 0.0],
        "solitons": [{"pole": [0.5, 0.8], "coefficients": [{"mode": 1, "value": [1, 0]}, {"mode": 2, "value": [0, 1]}]}],
        "grid": {"z_minus": [-1, 1], "z_plus": [-1, 1], "n_minus": 5, "n_plus": 5}
    }"#;

    #[test]
    fn parses_and_validates() {
        let run = RunConfig::from_json(DBM).unwrap().validate().unwrap();
        assert_eq!(run.spec.rank(), 1);
        assert_eq!(run.grid.step_factor, DEFAULT_STEP_FACTOR);
        assert_eq!(run.spec.solitons()[0].coefficient(2), Some(Complex64::new(0.0, 1.0)));
    }

    #[test]
    fn unknown_keys_rejected() {
        let text = DBM.replace("\"m\":", "\"mass\": 1, \"m\":");
        let err = RunConfig::from_json(&text).unwrap_err();
        assert!(matches!(err, CliError::Config(ref m) if m.contains("mass") && m.contains("line")), "{err}");
    }

    #[test]
    fn repeated_mode_names_constraint() {
        let text = DBM.replace("\"mode\": 2", "\"mode\": 1");
        let err = RunConfig::from_json(&text).unwrap().validate().unwrap_err();
        assert_eq!(err.exit_code(), 2);
        let msg = err.to_string();
        assert!(msg.contains("solitons[0]") && msg.contains("must differ"), "{msg}");
    }

    #[test]
    fn degenerate_poles_exit_three() {
        let text = DBM.replace(
            "\"solitons\": [",
            "\"solitons\": [{\"pole\": [0.5, 0.8], \"coefficients\": [{\"mode\": 1, \"value\": [1, 0]}]},",
        );
        let err = RunConfig::from_json(&text).unwrap().validate().unwrap_err();
        assert_eq!(err.exit_code(), 3, "{err}");
    }

    #[test]
    fn bad_grid_is_config_error() {
        let text = DBM.replace("\"n_minus\": 5", "\"n_minus\": 4");
        let err = RunConfig::from_json(&text).unwrap().validate().unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("grid"));
    }
}
