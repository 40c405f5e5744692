//! Extreme points of the unit ball of `H¹_K`.
//!
//! `H¹_K` is the subspace of the Hardy space `H¹` whose Fourier coefficients
//! vanish on a finite set `K = {k₁ < … < k_M}` of positive integers. A
//! unit-norm `f = I·F` (inner times outer) is extreme exactly when its inner
//! factor is a Blaschke product of degree `m ≤ M` and a real `2M × (2m+1)`
//! matrix built from the Taylor coefficients of `F·∏(1 − āⱼz)⁻²` has rank
//! `2m`.
//!
//! The crate decides that question for analytic polynomials and produces
//! evidence either way:
//!
//! * [`extremality::classify`] returns a verdict with the singular values,
//!   kernel and rank of the matrix;
//! * [`witness::construct_witness`] builds an explicit perturbation `g` with
//!   `f = ½((f + g) + (f − g))`, and [`witness::verify_decomposition`] checks
//!   it by quadrature without looking at the matrix.
//!
//! ```
//! use h1k::{classify, AnalyticPolynomial, ClassifyConfig, SpectralHoleSet};
//!
//! // f = 1 − z/2 is outer, so it is extreme even with no holes.
//! let f = AnalyticPolynomial::from_real(&[1.0, -0.5]);
//! let outcome = classify(&f, &SpectralHoleSet::empty(), &ClassifyConfig::default()).unwrap();
//! assert!(outcome.verdict.is_extreme);
//! ```

// `!(x <= tol)` is used on purpose: NaN must fail the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod circle;
pub mod error;
pub mod extremality;
pub mod factorization;
pub mod sample;
pub mod spectral;
pub mod sympoly;
pub mod witness;

pub use num_complex::Complex64;

pub use circle::{
    evaluate, fourier_coefficient, l1_norm, rational_taylor_coefficients, roots,
    AnalyticPolynomial, CircleFunction, CircleGrid, PoleFactor, QuadratureConfig, RationalAnalytic,
};
pub use error::{Error, Result};
pub use extremality::{
    classify, direct_constraint_matrix, rank_and_kernel, rank_and_kernel_with_floor,
    Classification, ClassifyConfig, ConditionFlag, ExtremalityVerdict, KernelBasis, RankAnalysis,
    VerdictReason,
};
pub use factorization::{
    blaschke_eval, canonical_factorize, canonical_factorize_with, is_outer, outer_log_defect,
    BlaschkeProduct, CanonicalFactorization,
};
pub use spectral::{
    assemble_matrix, constraint_residual, f0_coefficients, CoefficientTable, ExtremalityMatrix,
    SpectralHoleSet,
};
pub use sympoly::{p0_polynomial, real_ratio_check, SymmetricPolynomial};
pub use witness::{construct_witness, verify_decomposition, DecompositionCheck, Witness};
