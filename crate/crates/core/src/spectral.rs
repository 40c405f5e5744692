//! The coefficient table of `F₀ = F·∏(1 − āⱼz)⁻²` and the block matrix
//! built from it.
//!
//! With `Cₖ = F̂₀(k)`, `A(k) = Re Cₖ`, `B(k) = Im Cₖ` and `K = {k₁ < … < k_M}`,
//! the matrix has `2M` rows and `2m + 1` columns:
//!
//! ```text
//!        l = 0..m                                 l = 1..m
//! row j  A(kⱼ+l−m) + A(kⱼ−l−m)                    B(kⱼ+l−m) − B(kⱼ−l−m)
//! row M+j B(kⱼ+l−m) + B(kⱼ−l−m)                 −(A(kⱼ+l−m) − A(kⱼ−l−m))
//! ```
//!
//! Applied to the coefficient vector of an `m`-symmetric `p`, it returns the
//! real parts, then the imaginary parts, of `(F₀p)^(kⱼ)`.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle::{
    rational_taylor_coefficients, AnalyticPolynomial, PoleFactor, RationalAnalytic,
};
use crate::error::{Error, Result};
use crate::sympoly::SymmetricPolynomial;

/// The hole set `K`: strictly increasing positive integers.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "Vec<u64>", into = "Vec<u64>")]
pub struct SpectralHoleSet {
    holes: Vec<u64>,
}

impl TryFrom<Vec<u64>> for SpectralHoleSet {
    type Error = Error;

    fn try_from(holes: Vec<u64>) -> Result<Self> {
        Self::new(holes)
    }
}

impl From<SpectralHoleSet> for Vec<u64> {
    fn from(k: SpectralHoleSet) -> Self {
        k.holes
    }
}

impl SpectralHoleSet {
    pub fn new(holes: Vec<u64>) -> Result<Self> {
        if holes.first() == Some(&0) {
            return Err(Error::InvalidHoles(
                "holes must be positive integers".into(),
            ));
        }
        if let Some(w) = holes.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::InvalidHoles(format!(
                "holes must be strictly increasing ({} is followed by {})",
                w[0], w[1]
            )));
        }
        Ok(Self { holes })
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn holes(&self) -> &[u64] {
        &self.holes
    }

    /// `M = #K`.
    pub fn len(&self) -> usize {
        self.holes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.holes.is_empty()
    }

    /// `k_M`, or 0 for the empty set.
    pub fn max_hole(&self) -> u64 {
        self.holes.last().copied().unwrap_or(0)
    }
}

/// `Cₖ` for `0 ≤ k ≤ window_max`; reads at negative `k` return zero.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientTable {
    c: Vec<Complex64>,
}

impl CoefficientTable {
    pub fn window_max(&self) -> usize {
        self.c.len() - 1
    }

    /// `Cₖ`. Panics if `k` is above the computed window.
    pub fn c(&self, k: i64) -> Complex64 {
        if k < 0 {
            return Complex64::new(0.0, 0.0);
        }
        *self
            .c
            .get(k as usize)
            .unwrap_or_else(|| panic!("C_{k} read outside window 0..={}", self.window_max()))
    }

    pub fn a(&self, k: i64) -> f64 {
        self.c(k).re
    }

    pub fn b(&self, k: i64) -> f64 {
        self.c(k).im
    }

    pub fn values(&self) -> &[Complex64] {
        &self.c
    }
}

/// Taylor coefficients of `F·∏(1 − āⱼz)⁻²` through `window_max`.
pub fn f0_coefficients(
    outer: &AnalyticPolynomial,
    zeros: &[Complex64],
    window_max: usize,
) -> Result<CoefficientTable> {
    let f0 = RationalAnalytic::new(
        outer.clone(),
        zeros
            .iter()
            .map(|&a| PoleFactor { a, multiplicity: 2 })
            .collect(),
    )?;
    Ok(CoefficientTable {
        c: rational_taylor_coefficients(&f0, window_max),
    })
}

/// The real `2M × (2m+1)` extremality matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtremalityMatrix {
    m: usize,
    holes: usize,
    data: DMatrix<f64>,
}

impl ExtremalityMatrix {
    pub fn from_dmatrix(m: usize, data: DMatrix<f64>) -> Self {
        assert_eq!(data.ncols(), 2 * m + 1, "column count must be 2m+1");
        assert!(data.nrows().is_multiple_of(2), "row count must be even");
        Self {
            m,
            holes: data.nrows() / 2,
            data,
        }
    }

    /// Inner degree `m`.
    pub fn m(&self) -> usize {
        self.m
    }

    /// Hole count `M`.
    pub fn hole_count(&self) -> usize {
        self.holes
    }

    pub fn rows(&self) -> usize {
        self.data.nrows()
    }

    pub fn cols(&self) -> usize {
        self.data.ncols()
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[(i, j)]
    }

    pub fn as_dmatrix(&self) -> &DMatrix<f64> {
        &self.data
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        self.data
            .row_iter()
            .map(|r| r.iter().copied().collect())
            .collect()
    }

    pub fn apply(&self, v: &[f64]) -> Vec<f64> {
        (&self.data * DVector::from_column_slice(v))
            .iter()
            .copied()
            .collect()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.norm()
    }

    pub fn max_abs_entry(&self) -> f64 {
        self.data.amax()
    }

    /// Largest entrywise difference; infinite if the shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.data.shape() != other.data.shape() {
            return f64::INFINITY;
        }
        (&self.data - &other.data).amax()
    }
}

/// Closed-form assembly from a coefficient table.
pub fn matrix_from_table(
    table: &CoefficientTable,
    m: usize,
    holes: &SpectralHoleSet,
) -> ExtremalityMatrix {
    let big_m = holes.len();
    let mi = m as i64;
    let mut data = DMatrix::zeros(2 * big_m, 2 * m + 1);
    for (j, &k) in holes.holes().iter().enumerate() {
        let k = k as i64;
        for l in 0..=mi {
            let (hi, lo) = (k + l - mi, k - l - mi);
            data[(j, l as usize)] = table.a(hi) + table.a(lo);
            data[(big_m + j, l as usize)] = table.b(hi) + table.b(lo);
            if l > 0 {
                data[(j, m + l as usize)] = table.b(hi) - table.b(lo);
                data[(big_m + j, m + l as usize)] = -(table.a(hi) - table.a(lo));
            }
        }
    }
    ExtremalityMatrix {
        m,
        holes: big_m,
        data,
    }
}

/// The matrix for outer factor `outer`, inner zeros `zeros` and holes `holes`.
/// Any `m = zeros.len()` is accepted, including `m > M`.
pub fn assemble_matrix(
    outer: &AnalyticPolynomial,
    zeros: &[Complex64],
    holes: &SpectralHoleSet,
) -> Result<ExtremalityMatrix> {
    let table = f0_coefficients(outer, zeros, holes.max_hole() as usize)?;
    Ok(matrix_from_table(&table, zeros.len(), holes))
}

/// `(F₀p)^(kⱼ) = Σᵢ p̂(i)·C_{kⱼ−i}` for each hole, by direct convolution.
pub fn hole_coefficients(
    table: &CoefficientTable,
    p: &AnalyticPolynomial,
    holes: &SpectralHoleSet,
) -> Vec<Complex64> {
    holes
        .holes()
        .iter()
        .map(|&k| {
            p.coeffs()
                .iter()
                .enumerate()
                .map(|(i, &pi)| pi * table.c(k as i64 - i as i64))
                .sum()
        })
        .collect()
}

/// `maxⱼ |(F₀p)^(kⱼ)|`; zero when `K` is empty.
pub fn constraint_residual(
    outer: &AnalyticPolynomial,
    zeros: &[Complex64],
    holes: &SpectralHoleSet,
    p: &SymmetricPolynomial,
) -> Result<f64> {
    if p.n() != zeros.len() {
        return Err(Error::DimensionMismatch {
            expected: zeros.len(),
            got: p.n(),
        });
    }
    let table = f0_coefficients(outer, zeros, holes.max_hole() as usize)?;
    Ok(hole_coefficients(&table, &p.to_analytic(), holes)
        .iter()
        .map(|g| g.norm())
        .fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factorization::BlaschkeProduct;
    use crate::sympoly::p0_polynomial;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn hole_set_validation() {
        assert!(SpectralHoleSet::new(vec![1, 3, 7]).is_ok());
        assert!(SpectralHoleSet::new(vec![0, 2]).is_err());
        assert!(SpectralHoleSet::new(vec![3, 3]).is_err());
        assert!(SpectralHoleSet::new(vec![4, 2]).is_err());
        assert_eq!(SpectralHoleSet::empty().max_hole(), 0);
    }

    #[test]
    fn table_examples() {
        let f = AnalyticPolynomial::new(vec![c(1.0, 0.5), c(0.0, 0.0), c(-0.25, 0.1)]);
        let plain = f0_coefficients(&f, &[], 5).unwrap();
        let at_origin = f0_coefficients(&f, &[c(0.0, 0.0)], 5).unwrap();
        for k in -3..=5 {
            assert_eq!(plain.c(k), f.coefficient(k));
            assert_eq!(at_origin.c(k), f.coefficient(k));
        }
        let one = AnalyticPolynomial::constant(c(1.0, 0.0));
        let t = f0_coefficients(&one, &[c(0.5, 0.0)], 10).unwrap();
        for k in 0..=10 {
            let want = (k + 1) as f64 * 0.5f64.powi(k as i32);
            assert!((t.c(k) - c(want, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    #[should_panic(expected = "outside window")]
    fn table_reads_past_window_panic() {
        let one = AnalyticPolynomial::constant(c(1.0, 0.0));
        f0_coefficients(&one, &[], 2).unwrap().c(3);
    }

    #[test]
    fn empty_hole_set_gives_empty_matrix() {
        let f = AnalyticPolynomial::from_real(&[1.0, 0.3]);
        let mtx =
            assemble_matrix(&f, &[c(0.2, 0.1), c(-0.4, 0.0)], &SpectralHoleSet::empty()).unwrap();
        assert_eq!((mtx.rows(), mtx.cols()), (0, 5));
    }

    #[test]
    fn single_hole_layout() {
        // F̂(k−1) = 0 with k = 4, inner zero at the origin
        let f = AnalyticPolynomial::new(vec![
            c(1.0, 0.0),
            c(0.1, 0.2),
            c(0.3, -0.1),
            c(0.0, 0.0),
            c(-0.2, 0.25),
        ]);
        let k = SpectralHoleSet::new(vec![4]).unwrap();
        let mtx = assemble_matrix(&f, &[c(0.0, 0.0)], &k).unwrap();
        let (ck, ck2) = (f.coefficient(4), f.coefficient(2));
        let expected = [
            [0.0, ck.re + ck2.re, ck.im - ck2.im],
            [0.0, ck.im + ck2.im, -ck.re + ck2.re],
        ];
        for (i, row) in expected.iter().enumerate() {
            for (j, &want) in row.iter().enumerate() {
                assert!((mtx.get(i, j) - want).abs() < 1e-15, "({i},{j})");
            }
        }
    }

    #[test]
    fn real_data_kills_b_blocks() {
        let f = AnalyticPolynomial::from_real(&[1.0, -0.3, 0.2, 0.05, 0.1]);
        let zeros = [c(0.4, 0.0), c(-0.6, 0.0)];
        let k = SpectralHoleSet::new(vec![2, 5, 6]).unwrap();
        let mtx = assemble_matrix(&f, &zeros, &k).unwrap();
        let (big_m, m) = (3, 2);
        for j in 0..big_m {
            for l in 0..=m {
                assert_eq!(mtx.get(big_m + j, l), 0.0);
            }
            for l in 1..=m {
                assert_eq!(mtx.get(j, m + l), 0.0);
            }
        }
    }

    #[test]
    fn residual_examples() {
        // f = (z − 0.5)·G with Ĝ(1) − 0.5·Ĝ(2) = 0, so f̂(2) = 0
        let a = c(0.5, 0.0);
        let g = AnalyticPolynomial::from_real(&[1.0, 0.1, 0.2, 0.3]);
        let f = &AnalyticPolynomial::new(vec![-a, c(1.0, 0.0)]) * &g;
        assert!(f.coefficient(2).norm() < 1e-15);
        let outer = &g * &AnalyticPolynomial::new(vec![c(1.0, 0.0), -a.conj()]);
        let k = SpectralHoleSet::new(vec![2]).unwrap();
        let b = BlaschkeProduct::from_zeros(vec![a]).unwrap();
        let r = constraint_residual(&outer, &[a], &k, &p0_polynomial(&b)).unwrap();
        assert!(r < 1e-14, "residual {r}");

        let r = constraint_residual(&outer, &[a], &SpectralHoleSet::empty(), &p0_polynomial(&b))
            .unwrap();
        assert_eq!(r, 0.0);
    }
}
