//! Instance files: `{"coefficients": [[re, im], ...], "holes": [...], "config": {...}}`.

use std::path::Path;

use anyhow::{bail, Context, Result};
use h1k::{AnalyticPolynomial, Complex64, SpectralHoleSet};
use serde::{Deserialize, Serialize};

/// Per-instance tolerance overrides. Command-line flags and environment
/// variables take precedence over these.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigOverrides {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quad_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dec_tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid_max: Option<usize>,
}

impl ConfigOverrides {
    /// Fields set in `self` win over `other`.
    pub fn or(self, other: ConfigOverrides) -> ConfigOverrides {
        ConfigOverrides {
            rank_tol: self.rank_tol.or(other.rank_tol),
            quad_tol: self.quad_tol.or(other.quad_tol),
            dec_tol: self.dec_tol.or(other.dec_tol),
            grid_max: self.grid_max.or(other.grid_max),
        }
    }
}

/// Recorded expectation, used by corpus runs as an extra consistency check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectation {
    pub extreme: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub coefficients: Vec<[f64; 2]>,
    #[serde(default)]
    pub holes: Vec<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<ConfigOverrides>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expect: Option<Expectation>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// A validated instance.
#[derive(Clone, Debug)]
pub struct ProblemInstance {
    pub file: InstanceFile,
    pub f: AnalyticPolynomial,
    pub holes: SpectralHoleSet,
}

impl ProblemInstance {
    pub fn parse(text: &str) -> Result<Self> {
        let file: InstanceFile = serde_json::from_str(text).context("malformed instance JSON")?;
        Self::from_file(file)
    }

    pub fn read(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .with_context(|| format!("cannot read {}", path.display()))?;
        Self::parse(&text).with_context(|| format!("in {}", path.display()))
    }

    pub fn from_file(file: InstanceFile) -> Result<Self> {
        if file.coefficients.is_empty() {
            bail!("coefficient list is empty");
        }
        if file.coefficients.iter().flatten().any(|x| !x.is_finite()) {
            bail!("coefficients must be finite");
        }
        let f = AnalyticPolynomial::new(
            file.coefficients
                .iter()
                .map(|&[re, im]| Complex64::new(re, im))
                .collect(),
        );
        if f.is_zero() {
            bail!("all coefficients are zero");
        }
        let holes = SpectralHoleSet::new(file.holes.clone())?;
        Ok(Self { file, f, holes })
    }
}

pub fn pairs(cs: &[Complex64]) -> Vec<[f64; 2]> {
    cs.iter().map(|c| [c.re, c.im]).collect()
}

pub fn pair(c: Complex64) -> [f64; 2] {
    [c.re, c.im]
}
