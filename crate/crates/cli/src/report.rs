//! Report JSON. Field names are documented in `docs/report-schema.md`.

use anyhow::{bail, Result};
use h1k::{
    CanonicalFactorization, ClassifyConfig, DecompositionCheck, ExtremalityVerdict,
    QuadratureConfig, Witness,
};
use serde::{Deserialize, Serialize};

use crate::instance::{pair, pairs, ConfigOverrides, InstanceFile};

/// Bumped whenever a field changes meaning or disappears.
pub const REPORT_VERSION: u32 = 1;

pub const DEFAULT_DEC_TOL: f64 = 1e-8;

/// Every tolerance the run used.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub rank_tol: f64,
    pub quad_tol: f64,
    pub dec_tol: f64,
    pub grid_max: usize,
    pub delta_boundary: f64,
    pub tol_root: f64,
    pub spec_tol: f64,
}

impl Tolerances {
    pub fn resolve(overrides: ConfigOverrides) -> Result<Self> {
        let base = ClassifyConfig::default();
        let tol = Self {
            rank_tol: overrides.rank_tol.unwrap_or(base.rank_tol),
            quad_tol: overrides.quad_tol.unwrap_or(base.quadrature.tol),
            dec_tol: overrides.dec_tol.unwrap_or(DEFAULT_DEC_TOL),
            grid_max: overrides.grid_max.unwrap_or(base.quadrature.n_max),
            delta_boundary: base.delta_boundary,
            tol_root: base.tol_root,
            spec_tol: base.spec_tol,
        };
        for (name, value) in [
            ("rank-tol", tol.rank_tol),
            ("quad-tol", tol.quad_tol),
            ("dec-tol", tol.dec_tol),
        ] {
            if !(value.is_finite() && value > 0.0) {
                bail!("{name} must be a positive finite number, got {value}");
            }
        }
        if tol.grid_max < 16 {
            bail!("grid-max must be at least 16, got {}", tol.grid_max);
        }
        Ok(tol)
    }

    pub fn quadrature(&self) -> QuadratureConfig {
        QuadratureConfig {
            tol: self.quad_tol,
            n_max: self.grid_max,
        }
    }

    pub fn classify(&self) -> ClassifyConfig {
        ClassifyConfig {
            rank_tol: self.rank_tol,
            quadrature: self.quadrature(),
            delta_boundary: self.delta_boundary,
            tol_root: self.tol_root,
            spec_tol: self.spec_tol,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InputEcho {
    pub coefficients: Vec<[f64; 2]>,
    pub holes: Vec<u64>,
}

impl From<&InstanceFile> for InputEcho {
    fn from(file: &InstanceFile) -> Self {
        Self {
            coefficients: file.coefficients.clone(),
            holes: file.holes.clone(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FactorizationSummary {
    pub inner_zeros: Vec<[f64; 2]>,
    pub unimodular_constant: [f64; 2],
    pub outer_coefficients: Vec<[f64; 2]>,
    /// Scale applied to the input before factoring (1 for `factorize`).
    pub normalization_scale: f64,
    /// `max|u·B·F − f|` over 128 equispaced nodes, relative to `max|f|`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub round_trip_error: Option<f64>,
}

impl FactorizationSummary {
    pub fn new(fac: &CanonicalFactorization, normalization_scale: f64) -> Self {
        Self {
            inner_zeros: pairs(fac.inner.zeros()),
            unimodular_constant: pair(fac.inner.unimodular_constant()),
            outer_coefficients: pairs(fac.outer.coeffs()),
            normalization_scale,
            round_trip_error: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleSummary {
    pub location: [f64; 2],
    pub multiplicity: u32,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessSummary {
    /// Kernel element as `(α₀..α_m, β₁..β_m)`.
    pub p_vector: Vec<f64>,
    pub epsilon: f64,
    pub centering_constant: f64,
    pub h_inf_norm: f64,
    pub h_imag_max: f64,
    /// `g` as numerator coefficients over `∏(1 − āz)^multiplicity`.
    pub g_numerator: Vec<[f64; 2]>,
    pub g_poles: Vec<PoleSummary>,
    pub check: DecompositionCheck,
}

impl WitnessSummary {
    pub fn new(w: &Witness, check: DecompositionCheck) -> Self {
        Self {
            p_vector: w.p.to_vector(),
            epsilon: w.epsilon,
            centering_constant: w.centering_constant,
            h_inf_norm: w.h_inf_norm,
            h_imag_max: w.h_imag_max,
            g_numerator: pairs(w.g.numerator().coeffs()),
            g_poles: w
                .g
                .poles()
                .iter()
                .map(|p| PoleSummary {
                    location: pair(p.a),
                    multiplicity: p.multiplicity,
                })
                .collect(),
            check,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub version: u32,
    pub tool_version: String,
    /// `check`, `factorize` or `witness`.
    pub command: String,
    pub input: InputEcho,
    pub tolerances: Tolerances,
    pub exit_code: i32,
    /// Set when the run stopped on an error; most other sections are then absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub verdict: Option<ExtremalityVerdict>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub factorization: Option<FactorizationSummary>,
    /// Row-major, `2M × (2m+1)`; only with `--emit-matrix`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<Vec<f64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessSummary>,
    /// Why no witness accompanies a non-extreme verdict.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_error: Option<String>,
    /// Wall-clock milliseconds; only with `--timing`, since it breaks determinism.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

impl Report {
    pub fn new(command: &str, input: InputEcho, tolerances: Tolerances) -> Self {
        Self {
            version: REPORT_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            input,
            tolerances,
            exit_code: 0,
            error: None,
            verdict: None,
            factorization: None,
            matrix: None,
            witness: None,
            witness_error: None,
            timing_ms: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusRow {
    pub file: String,
    /// Parse or pipeline error; the row is flagged and skipped.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub extreme: Option<bool>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hole_count: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kernel_dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub near_threshold: Option<bool>,
    /// `None` for extreme rows.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness_pass: Option<bool>,
    /// Names of the consistency checks that failed.
    pub failed_checks: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorpusSummary {
    pub version: u32,
    pub tool_version: String,
    pub tolerances_default: Tolerances,
    pub rows: Vec<CorpusRow>,
    pub total: usize,
    pub errors: usize,
    pub consistent: usize,
    pub inconsistent: usize,
    pub exit_code: i32,
}
