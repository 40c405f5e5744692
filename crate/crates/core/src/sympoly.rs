//! `N`-symmetric polynomials.
//!
//! A polynomial `p` of degree at most `2N` is `N`-symmetric when `ζ̄ᴺp(ζ)` is
//! real on the circle, equivalently `p̂(N − k) = conj(p̂(N + k))`. Such `p`
//! are parameterized by a real coefficient vector
//! `(α₀, α₁, …, α_N, β₁, …, β_N)`, with
//!
//! ```text
//! p̂(N − l) = α_l − iβ_l,   p̂(N) = 2α₀,   p̂(N + l) = α_l + iβ_l   (1 ≤ l ≤ N).
//! ```
//!
//! This vector order is the column order of the extremality matrix.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle::{AnalyticPolynomial, CircleGrid};
use crate::error::{Error, Result};
use crate::factorization::BlaschkeProduct;

const SYMMETRY_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SymmetricPolynomial {
    n: usize,
    alpha: Vec<f64>,
    beta: Vec<f64>,
}

impl SymmetricPolynomial {
    pub fn new(alpha: Vec<f64>, beta: Vec<f64>) -> Result<Self> {
        let n = beta.len();
        if alpha.len() != n + 1 {
            return Err(Error::DimensionMismatch {
                expected: n + 1,
                got: alpha.len(),
            });
        }
        Ok(Self { n, alpha, beta })
    }

    /// From a coefficient vector in `R^{2N+1}`.
    pub fn from_vector(n: usize, v: &[f64]) -> Result<Self> {
        if v.len() != 2 * n + 1 {
            return Err(Error::DimensionMismatch {
                expected: 2 * n + 1,
                got: v.len(),
            });
        }
        Ok(Self {
            n,
            alpha: v[..=n].to_vec(),
            beta: v[n + 1..].to_vec(),
        })
    }

    /// The `i`-th standard basis vector of `R^{2N+1}`.
    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0.0; 2 * n + 1];
        v[i] = 1.0;
        Self::from_vector(n, &v).expect("dimension matches")
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn to_vector(&self) -> Vec<f64> {
        self.alpha.iter().chain(&self.beta).copied().collect()
    }

    pub fn to_analytic(&self) -> AnalyticPolynomial {
        to_analytic(self)
    }
}

pub fn to_analytic(p: &SymmetricPolynomial) -> AnalyticPolynomial {
    let n = p.n;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
    coeffs[n] = Complex64::new(2.0 * p.alpha[0], 0.0);
    for l in 1..=n {
        let (a, b) = (p.alpha[l], p.beta[l - 1]);
        coeffs[n - l] = Complex64::new(a, -b);
        coeffs[n + l] = Complex64::new(a, b);
    }
    AnalyticPolynomial::new(coeffs)
}

/// Inverse of [`to_analytic`]; rejects `q` of degree above `2N` or whose
/// coefficients break the symmetry by more than `10⁻¹⁰·max(1, max|q̂|)`.
pub fn from_analytic(q: &AnalyticPolynomial, n: usize) -> Result<SymmetricPolynomial> {
    if let Some(degree) = q.degree() {
        if degree > 2 * n {
            return Err(Error::DegreeOverflow { degree, max: 2 * n });
        }
    }
    let tol = SYMMETRY_TOL * q.max_abs_coeff().max(1.0);
    let at = |k: usize| q.coefficient(k as i64);
    let centre = at(n);
    if centre.im.abs() > tol {
        return Err(Error::SymmetryViolation {
            n,
            offset: 0,
            mismatch: centre.im.abs(),
        });
    }
    let mut alpha = vec![centre.re / 2.0];
    let mut beta = Vec::with_capacity(n);
    for l in 1..=n {
        let (low, high) = (at(n - l), at(n + l));
        let mismatch = (low - high.conj()).norm();
        if mismatch > tol {
            return Err(Error::SymmetryViolation {
                n,
                offset: l,
                mismatch,
            });
        }
        // average the two halves so that rounding noise is split evenly
        alpha.push((low.re + high.re) / 2.0);
        beta.push((high.im - low.im) / 2.0);
    }
    Ok(SymmetricPolynomial { n, alpha, beta })
}

impl SymmetricPolynomial {
    pub fn from_analytic(q: &AnalyticPolynomial, n: usize) -> Result<Self> {
        from_analytic(q, n)
    }
}

/// `p₀ = ∏ (z − aⱼ)(1 − āⱼz)`, the symmetric polynomial with `p₀Φ₀ = B`
/// for the constant-free Blaschke product `B`. On the circle
/// `ζ̄ᵐp₀(ζ) = ∏|ζ − aⱼ|² ≥ 0`.
///
/// The unimodular constant of `b` is not part of `p₀`; multiplying by a
/// non-real constant would break symmetry.
pub fn p0_polynomial(b: &BlaschkeProduct) -> SymmetricPolynomial {
    let one = Complex64::new(1.0, 0.0);
    let product = b
        .zeros()
        .iter()
        .fold(AnalyticPolynomial::constant(one), |acc, &a| {
            let factor = &AnalyticPolynomial::new(vec![-a, one])
                * &AnalyticPolynomial::new(vec![one, -a.conj()]);
            &acc * &factor
        });
    from_analytic(&product, b.degree()).expect("p0 is symmetric by construction")
}

/// `Φ(z) = ∏ (1 − āⱼz)⁻²`.
pub fn phi(zeros: &[Complex64], z: Complex64) -> Complex64 {
    zeros.iter().fold(Complex64::new(1.0, 0.0), |acc, &a| {
        let d = 1.0 - a.conj() * z;
        acc / (d * d)
    })
}

/// Largest `|Im(ψ/B)|` over the grid, where `ψ = p·Φ` and `B` is the
/// constant-free Blaschke product on the zeros of `b`.
pub fn real_ratio_check(p: &SymmetricPolynomial, b: &BlaschkeProduct, grid: &CircleGrid) -> f64 {
    let analytic = p.to_analytic();
    let bare = b.without_constant();
    grid.nodes()
        .map(|z| {
            let psi = analytic.eval(z) * phi(b.zeros(), z);
            (psi / bare.eval(z)).im.abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn to_analytic_examples() {
        let p = SymmetricPolynomial::from_vector(0, &[1.0]).unwrap();
        assert_eq!(p.to_analytic(), AnalyticPolynomial::constant(c(2.0, 0.0)));

        let p = SymmetricPolynomial::from_vector(1, &[0.0, 1.0, 0.0]).unwrap();
        assert_eq!(
            p.to_analytic(),
            AnalyticPolynomial::from_real(&[1.0, 0.0, 1.0])
        );

        let p = SymmetricPolynomial::from_vector(1, &[0.0, 0.0, 1.0]).unwrap();
        assert_eq!(
            p.to_analytic(),
            AnalyticPolynomial::new(vec![c(0.0, -1.0), c(0.0, 0.0), c(0.0, 1.0)])
        );
    }

    #[test]
    fn from_analytic_examples() {
        let p = from_analytic(&AnalyticPolynomial::constant(c(2.0, 0.0)), 0).unwrap();
        assert_eq!(p.to_vector(), vec![1.0]);
        let p = from_analytic(&AnalyticPolynomial::monomial(1, c(1.0, 0.0)), 1).unwrap();
        assert_eq!(p.to_vector(), vec![0.5, 0.0, 0.0]);
    }

    #[test]
    fn from_analytic_errors() {
        let asymmetric = AnalyticPolynomial::from_real(&[1.0, 0.0, 2.0]);
        assert!(matches!(
            from_analytic(&asymmetric, 1),
            Err(Error::SymmetryViolation { offset: 1, .. })
        ));
        let complex_centre = AnalyticPolynomial::monomial(1, c(0.0, 1.0));
        assert!(matches!(
            from_analytic(&complex_centre, 1),
            Err(Error::SymmetryViolation { offset: 0, .. })
        ));
        let too_long = AnalyticPolynomial::monomial(3, c(1.0, 0.0));
        assert!(matches!(
            from_analytic(&too_long, 1),
            Err(Error::DegreeOverflow { degree: 3, max: 2 })
        ));
        assert!(SymmetricPolynomial::from_vector(2, &[1.0, 2.0]).is_err());
    }

    #[test]
    fn p0_examples() {
        let none = BlaschkeProduct::from_zeros(vec![]).unwrap();
        assert_eq!(p0_polynomial(&none).to_vector(), vec![0.5]);

        let origin = BlaschkeProduct::from_zeros(vec![c(0.0, 0.0)]).unwrap();
        assert_eq!(p0_polynomial(&origin).to_vector(), vec![0.5, 0.0, 0.0]);

        let half = BlaschkeProduct::from_zeros(vec![c(0.5, 0.0)]).unwrap();
        let p0 = p0_polynomial(&half);
        let v = p0.to_vector();
        for (got, want) in v.iter().zip([0.625, -0.5, 0.0]) {
            assert!((got - want).abs() < 1e-15);
        }
        let analytic = p0.to_analytic();
        for z in CircleGrid::new(64).unwrap().nodes() {
            let value = z.conj() * analytic.eval(z);
            let expected = (z - 0.5).norm_sqr();
            assert!((value - c(expected, 0.0)).norm() < 1e-14);
        }
    }

    #[test]
    fn p0_ignores_unimodular_constant() {
        let b = BlaschkeProduct::new(vec![c(0.3, 0.4)], c(0.0, 1.0)).unwrap();
        assert_eq!(p0_polynomial(&b), p0_polynomial(&b.without_constant()));
    }

    #[test]
    fn real_ratio_examples() {
        let grid = CircleGrid::new(128).unwrap();
        let trivial = BlaschkeProduct::from_zeros(vec![]).unwrap();
        let constant = SymmetricPolynomial::from_vector(0, &[0.7]).unwrap();
        assert_eq!(real_ratio_check(&constant, &trivial, &grid), 0.0);

        let z = BlaschkeProduct::from_zeros(vec![c(0.0, 0.0)]).unwrap();
        let p = SymmetricPolynomial::from_vector(1, &[0.5, 0.0, 0.0]).unwrap();
        assert!(real_ratio_check(&p, &z, &grid) < 1e-15);

        let half = BlaschkeProduct::from_zeros(vec![c(0.5, 0.0)]).unwrap();
        let p = SymmetricPolynomial::from_vector(1, &[0.3, -1.2, 0.8]).unwrap();
        assert!(real_ratio_check(&p, &half, &grid) < 1e-10);
    }
}
