//! The extremality decision: factorize, assemble the matrix, read off rank
//! and kernel.
//!
//! For unit-norm `f = I·F` in `H¹_K`, `f` is extreme iff `I` has degree
//! `m ≤ M` and the `2M × (2m+1)` matrix has rank `2m`. The kernel always
//! contains the coefficient vector of `p₀ = I/Φ₀`, so rank `2m` is the same
//! as a one-dimensional kernel.

use nalgebra::{DMatrix, SVD};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle::{l1_norm, AnalyticPolynomial, QuadratureConfig, DELTA_BOUNDARY, TOL_ROOT};
use crate::error::{Error, Result};
use crate::factorization::{canonical_factorize_with, CanonicalFactorization};
use crate::spectral::{
    f0_coefficients, hole_coefficients, matrix_from_table, ExtremalityMatrix, SpectralHoleSet,
};
use crate::sympoly::{p0_polynomial, SymmetricPolynomial};

/// Singular values below this multiple of `ε·max|C_k|` are roundoff.
const ROUNDOFF_FLOOR: f64 = 1e3 * f64::EPSILON;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClassifyConfig {
    /// Singular values at or below `rank_tol·σ_max` count as zero.
    pub rank_tol: f64,
    pub quadrature: QuadratureConfig,
    pub delta_boundary: f64,
    pub tol_root: f64,
    /// Holes must satisfy `|f̂(kⱼ)| ≤ spec_tol·max|f̂|`.
    pub spec_tol: f64,
}

impl Default for ClassifyConfig {
    fn default() -> Self {
        Self {
            rank_tol: 1e-9,
            quadrature: QuadratureConfig::default(),
            delta_boundary: DELTA_BOUNDARY,
            tol_root: TOL_ROOT,
            spec_tol: 1e-10,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConditionFlag {
    WellConditioned,
    /// Some singular value lies within a factor 10 of the rank cut.
    NearThreshold,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VerdictReason {
    /// `m ≤ M` and rank `2m`.
    Extreme,
    /// The inner degree exceeds the number of holes.
    InnerDegreeExceedsHoles,
    /// `m ≤ M` but the kernel has dimension at least 2.
    RankDeficient,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExtremalityVerdict {
    pub is_extreme: bool,
    pub reason: VerdictReason,
    pub m: usize,
    pub hole_count: usize,
    pub rank: usize,
    pub kernel_dim: usize,
    pub singular_values: Vec<f64>,
    pub condition_flag: ConditionFlag,
    /// The factor that was applied to the input to reach unit norm.
    pub normalization_scale: f64,
}

/// Orthonormal basis of the kernel in `R^{2m+1}`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KernelBasis {
    pub vectors: Vec<Vec<f64>>,
}

impl KernelBasis {
    pub fn dim(&self) -> usize {
        self.vectors.len()
    }

    /// Norm of the part of `v` outside the span.
    pub fn projection_residual(&self, v: &[f64]) -> f64 {
        let mut rest = v.to_vec();
        for basis in &self.vectors {
            let coef: f64 = basis.iter().zip(v).map(|(a, b)| a * b).sum();
            for (r, b) in rest.iter_mut().zip(basis) {
                *r -= coef * b;
            }
        }
        norm(&rest)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankAnalysis {
    pub rank: usize,
    pub kernel: KernelBasis,
    /// Descending; `min(rows, cols)` entries.
    pub singular_values: Vec<f64>,
    pub condition: ConditionFlag,
}

impl RankAnalysis {
    /// Spectral norm of the analysed matrix.
    pub fn sigma_max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }
}

pub(crate) fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Numerical rank and kernel by SVD. The matrix is padded with zero rows to
/// at least square, which leaves the right singular vectors unchanged and
/// handles the `M = 0` and `m > M` shapes uniformly.
pub fn rank_and_kernel(mtx: &ExtremalityMatrix, rank_tol: f64) -> RankAnalysis {
    rank_and_kernel_with_floor(mtx, rank_tol, 0.0)
}

/// As [`rank_and_kernel`], but singular values at or below `noise_floor` never
/// count towards the rank. Without a floor a matrix that is zero up to
/// roundoff gets full rank from the noise alone.
pub fn rank_and_kernel_with_floor(
    mtx: &ExtremalityMatrix,
    rank_tol: f64,
    noise_floor: f64,
) -> RankAnalysis {
    let (rows, cols) = (mtx.rows(), mtx.cols());
    let mut padded = DMatrix::<f64>::zeros(rows.max(cols), cols);
    padded
        .view_mut((0, 0), (rows, cols))
        .copy_from(mtx.as_dmatrix());
    let svd = SVD::new(padded, false, true);
    let v_t = svd.v_t.expect("right singular vectors requested");

    let mut order: Vec<usize> = (0..cols).collect();
    order.sort_by(|&a, &b| svd.singular_values[b].total_cmp(&svd.singular_values[a]));
    let sorted: Vec<f64> = order.iter().map(|&i| svd.singular_values[i]).collect();

    let sigma_max = sorted.first().copied().unwrap_or(0.0);
    let cut = (rank_tol * sigma_max).max(noise_floor);
    let rank = if sigma_max > 0.0 {
        sorted.iter().filter(|&&s| s > cut).count()
    } else {
        0
    };
    let singular_values: Vec<f64> = sorted[..rows.min(cols)].to_vec();
    let near = sigma_max > 0.0
        && singular_values
            .iter()
            .any(|&s| s >= cut / 10.0 && s <= cut * 10.0);
    let kernel = KernelBasis {
        vectors: order[rank..]
            .iter()
            .map(|&i| v_t.row(i).iter().copied().collect())
            .collect(),
    };
    RankAnalysis {
        rank,
        kernel,
        singular_values,
        condition: if near {
            ConditionFlag::NearThreshold
        } else {
            ConditionFlag::WellConditioned
        },
    }
}

/// The same matrix as [`assemble_matrix`], built column by column: each
/// standard basis vector of `R^{2m+1}` is turned into its symmetric
/// polynomial, convolved against the coefficient table at every hole, and the
/// real and imaginary parts are stacked.
pub fn direct_constraint_matrix(
    outer: &AnalyticPolynomial,
    zeros: &[Complex64],
    holes: &SpectralHoleSet,
) -> Result<ExtremalityMatrix> {
    let m = zeros.len();
    let big_m = holes.len();
    let table = f0_coefficients(outer, zeros, holes.max_hole() as usize)?;
    let mut data = DMatrix::zeros(2 * big_m, 2 * m + 1);
    for i in 0..2 * m + 1 {
        let p = SymmetricPolynomial::unit(m, i).to_analytic();
        for (j, gamma) in hole_coefficients(&table, &p, holes).into_iter().enumerate() {
            data[(j, i)] = gamma.re;
            data[(big_m + j, i)] = gamma.im;
        }
    }
    Ok(ExtremalityMatrix::from_dmatrix(m, data))
}

/// Everything the decision produced, for reports and witness construction.
#[derive(Clone, Debug)]
pub struct Classification {
    pub verdict: ExtremalityVerdict,
    /// The input scaled to unit norm, with hole coefficients set exactly to zero.
    pub normalized: AnalyticPolynomial,
    pub factorization: CanonicalFactorization,
    pub holes: SpectralHoleSet,
    pub matrix: ExtremalityMatrix,
    pub kernel: KernelBasis,
    pub p0: SymmetricPolynomial,
}

impl Classification {
    /// `|𝔐·v₀| / (‖𝔐‖₂·|v₀|)` for the coefficient vector `v₀` of `p₀`.
    pub fn p0_kernel_residual(&self) -> f64 {
        let v = self.p0.to_vector();
        let sigma = self.verdict.singular_values.first().copied().unwrap_or(0.0);
        let image = norm(&self.matrix.apply(&v));
        if image == 0.0 {
            0.0
        } else {
            image / (sigma * norm(&v))
        }
    }
}

/// Check the hole condition, normalize, factorize and decide.
pub fn classify(
    f: &AnalyticPolynomial,
    holes: &SpectralHoleSet,
    cfg: &ClassifyConfig,
) -> Result<Classification> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("extremality test"));
    }
    let tolerance = cfg.spec_tol * f.max_abs_coeff();
    let mut coeffs = f.coeffs().to_vec();
    for &k in holes.holes() {
        let residual = f.coefficient(k as i64).norm();
        if residual > tolerance {
            return Err(Error::SpectralPrecondition {
                k,
                residual,
                tolerance,
            });
        }
        if let Some(c) = coeffs.get_mut(k as usize) {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    let projected = AnalyticPolynomial::new(coeffs);
    if projected.is_zero() {
        return Err(Error::ZeroPolynomial("extremality test"));
    }

    let scale = 1.0 / l1_norm(&projected, &cfg.quadrature)?;
    let normalized = projected.scale(Complex64::new(scale, 0.0));
    let factorization = canonical_factorize_with(&normalized, cfg.delta_boundary, cfg.tol_root)?;
    let zeros = factorization.inner.zeros();
    let m = zeros.len();
    let big_m = holes.len();

    let table = f0_coefficients(&factorization.outer, zeros, holes.max_hole() as usize)?;
    let matrix = matrix_from_table(&table, m, holes);
    let table_scale = table.values().iter().fold(0.0f64, |a, c| a.max(c.norm()));
    let analysis = rank_and_kernel_with_floor(&matrix, cfg.rank_tol, ROUNDOFF_FLOOR * table_scale);
    let kernel_dim = analysis.kernel.dim();
    let (is_extreme, reason) = if m > big_m {
        (false, VerdictReason::InnerDegreeExceedsHoles)
    } else if analysis.rank >= 2 * m {
        (true, VerdictReason::Extreme)
    } else {
        (false, VerdictReason::RankDeficient)
    };

    let verdict = ExtremalityVerdict {
        is_extreme,
        reason,
        m,
        hole_count: big_m,
        rank: analysis.rank,
        kernel_dim,
        singular_values: analysis.singular_values,
        condition_flag: analysis.condition,
        normalization_scale: scale,
    };
    let p0 = p0_polynomial(&factorization.inner);
    Ok(Classification {
        verdict,
        normalized,
        factorization,
        holes: holes.clone(),
        matrix,
        kernel: analysis.kernel,
        p0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spectral::assemble_matrix;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn empty_matrix_has_full_kernel() {
        let mtx = ExtremalityMatrix::from_dmatrix(0, DMatrix::zeros(0, 1));
        let r = rank_and_kernel(&mtx, 1e-9);
        assert_eq!(r.rank, 0);
        assert_eq!(r.kernel.dim(), 1);
        assert!(r.singular_values.is_empty());
        assert_eq!(r.condition, ConditionFlag::WellConditioned);
    }

    fn single_hole_matrix(ck: Complex64, ck2: Complex64) -> ExtremalityMatrix {
        let data = DMatrix::from_row_slice(
            2,
            3,
            &[
                0.0,
                ck.re + ck2.re,
                ck.im - ck2.im,
                0.0,
                ck.im + ck2.im,
                -ck.re + ck2.re,
            ],
        );
        ExtremalityMatrix::from_dmatrix(1, data)
    }

    #[test]
    fn roundoff_matrix_has_full_kernel_with_floor() {
        let noise = DMatrix::from_row_slice(2, 3, &[2e-16, -1e-16, 3e-17, 5e-17, 1e-16, -2e-16]);
        let mtx = ExtremalityMatrix::from_dmatrix(1, noise);
        assert_eq!(rank_and_kernel(&mtx, 1e-9).rank, 2);
        let r = rank_and_kernel_with_floor(&mtx, 1e-9, 1e-13);
        assert_eq!((r.rank, r.kernel.dim()), (0, 3));
    }

    #[test]
    fn single_hole_rank_follows_modulus_gap() {
        let r = rank_and_kernel(&single_hole_matrix(c(0.3, 0.1), c(0.2, -0.4)), 1e-9);
        assert_eq!((r.rank, r.kernel.dim()), (2, 1));
        // equal moduli, determinant −(|C_k|² − |C_{k−2}|²) = 0
        let r = rank_and_kernel(&single_hole_matrix(c(0.3, 0.0), c(0.3, 0.0)), 1e-9);
        assert!(r.rank <= 1 && r.kernel.dim() >= 2);
        let r = rank_and_kernel(&single_hole_matrix(c(0.3, 0.4), c(0.0, 0.5)), 1e-9);
        assert!(r.rank <= 1 && r.kernel.dim() >= 2);
    }

    #[test]
    fn kernel_vectors_are_orthonormal_and_annihilated() {
        let data = DMatrix::from_row_slice(2, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0]);
        let mtx = ExtremalityMatrix::from_dmatrix(1, data);
        let r = rank_and_kernel(&mtx, 1e-9);
        assert_eq!(r.rank, 1);
        for (i, v) in r.kernel.vectors.iter().enumerate() {
            assert!(norm(&mtx.apply(v)) < 1e-12);
            for (j, w) in r.kernel.vectors.iter().enumerate() {
                let dot: f64 = v.iter().zip(w).map(|(a, b)| a * b).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((dot - want).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn near_threshold_is_flagged() {
        let data = DMatrix::from_row_slice(2, 1, &[1.0, 0.0]);
        let mut padded = DMatrix::zeros(2, 3);
        padded.view_mut((0, 0), (2, 1)).copy_from(&data);
        padded[(1, 1)] = 2e-9;
        let r = rank_and_kernel(&ExtremalityMatrix::from_dmatrix(1, padded), 1e-9);
        assert_eq!(r.condition, ConditionFlag::NearThreshold);
    }

    #[test]
    fn no_hole_examples() {
        let cfg = ClassifyConfig::default();
        let outer = AnalyticPolynomial::from_real(&[1.0, -0.5]);
        let v = classify(&outer, &SpectralHoleSet::empty(), &cfg)
            .unwrap()
            .verdict;
        assert!(v.is_extreme);
        assert_eq!((v.m, v.rank, v.kernel_dim), (0, 0, 1));

        let shifted = &AnalyticPolynomial::monomial(1, c(1.0, 0.0)) * &outer;
        let v = classify(&shifted, &SpectralHoleSet::empty(), &cfg)
            .unwrap()
            .verdict;
        assert!(!v.is_extreme);
        assert_eq!(v.reason, VerdictReason::InnerDegreeExceedsHoles);
        assert_eq!(v.m, 1);
    }

    #[test]
    fn classify_errors() {
        let cfg = ClassifyConfig::default();
        let k = SpectralHoleSet::new(vec![1]).unwrap();
        assert!(matches!(
            classify(&AnalyticPolynomial::zero(), &k, &cfg),
            Err(Error::ZeroPolynomial(_))
        ));
        let f = AnalyticPolynomial::from_real(&[1.0, 0.3]);
        assert!(matches!(
            classify(&f, &k, &cfg),
            Err(Error::SpectralPrecondition { k: 1, .. })
        ));
        let boundary = AnalyticPolynomial::from_real(&[1.0, 0.0, 1.0]);
        assert!(matches!(
            classify(&boundary, &k, &cfg),
            Err(Error::BoundaryAmbiguousZero { .. })
        ));
    }

    #[test]
    fn direct_matrix_trivial_example() {
        let one = AnalyticPolynomial::constant(c(1.0, 0.0));
        let k = SpectralHoleSet::new(vec![1]).unwrap();
        let direct = direct_constraint_matrix(&one, &[], &k).unwrap();
        let closed = assemble_matrix(&one, &[], &k).unwrap();
        assert_eq!((direct.rows(), direct.cols()), (2, 1));
        assert_eq!(direct.to_rows(), vec![vec![0.0], vec![0.0]]);
        assert_eq!(direct, closed);
    }

    #[test]
    fn rescaling_reports_scale() {
        let f = AnalyticPolynomial::from_real(&[3.0]);
        let out = classify(&f, &SpectralHoleSet::empty(), &ClassifyConfig::default()).unwrap();
        assert!((out.verdict.normalization_scale - 1.0 / 3.0).abs() < 1e-14);
        assert!((out.normalized.coefficient(0).re - 1.0).abs() < 1e-14);
    }
}
