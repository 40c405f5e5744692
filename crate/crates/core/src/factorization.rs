//! Inner–outer factorization of analytic polynomials.
//!
//! A polynomial's inner factor is always a finite Blaschke product, built
//! from its zeros inside the disk. The outer factor is again a polynomial:
//! each inner zero `a` is divided out and replaced by `1 − āz`.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle::{
    roots_with_tol, AnalyticPolynomial, CircleFunction, CircleGrid, QuadratureConfig,
    DELTA_BOUNDARY, TOL_ROOT,
};
use crate::error::{Error, Result};

/// `u · ∏ (z − aⱼ)/(1 − āⱼz)` with `|u| = 1` and every `|aⱼ| ≤ 1 − δ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BlaschkeProduct {
    zeros: Vec<Complex64>,
    unimodular_constant: Complex64,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<Complex64>, unimodular_constant: Complex64) -> Result<Self> {
        for &a in &zeros {
            let r = a.norm();
            if !(r <= 1.0 - DELTA_BOUNDARY) {
                return Err(Error::PoleOutsideDisk(a, r));
            }
        }
        let unimodular_constant = unimodular_constant / unimodular_constant.norm();
        Ok(Self {
            zeros,
            unimodular_constant,
        })
    }

    /// The product with constant `1`.
    pub fn from_zeros(zeros: Vec<Complex64>) -> Result<Self> {
        Self::new(zeros, Complex64::new(1.0, 0.0))
    }

    pub fn zeros(&self) -> &[Complex64] {
        &self.zeros
    }

    pub fn unimodular_constant(&self) -> Complex64 {
        self.unimodular_constant
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// Same zeros, constant `1`.
    pub fn without_constant(&self) -> Self {
        Self {
            zeros: self.zeros.clone(),
            unimodular_constant: Complex64::new(1.0, 0.0),
        }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        blaschke_eval(self, z)
    }
}

impl CircleFunction for BlaschkeProduct {
    fn value_at(&self, zeta: Complex64) -> Complex64 {
        blaschke_eval(self, zeta)
    }

    fn bandwidth(&self) -> usize {
        16 * (self.zeros.len() + 1)
    }
}

pub fn blaschke_eval(b: &BlaschkeProduct, z: Complex64) -> Complex64 {
    b.zeros.iter().fold(b.unimodular_constant, |acc, &a| {
        acc * (z - a) / (1.0 - a.conj() * z)
    })
}

/// `f = I·F` with `I` a finite Blaschke product carrying the unimodular
/// constant and `F` an outer polynomial normalized so that `F(0) > 0`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CanonicalFactorization {
    pub inner: BlaschkeProduct,
    pub outer: AnalyticPolynomial,
}

impl CanonicalFactorization {
    /// `I(z)·F(z)`.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.inner.eval(z) * self.outer.eval(z)
    }
}

pub fn canonical_factorize(f: &AnalyticPolynomial) -> Result<CanonicalFactorization> {
    canonical_factorize_with(f, DELTA_BOUNDARY, TOL_ROOT)
}

pub fn canonical_factorize_with(
    f: &AnalyticPolynomial,
    delta_boundary: f64,
    tol_root: f64,
) -> Result<CanonicalFactorization> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("canonical factorization"));
    }
    let all_roots = roots_with_tol(f, tol_root)?;
    check_band(&all_roots, delta_boundary)?;
    let zeros: Vec<Complex64> = all_roots.into_iter().filter(|r| r.norm() < 1.0).collect();

    let mut outer = f.clone();
    for &a in &zeros {
        let (quotient, _) = outer.divide_linear(a);
        let reflected = AnalyticPolynomial::new(vec![Complex64::new(1.0, 0.0), -a.conj()]);
        outer = &quotient * &reflected;
    }

    let anchor = outer
        .coeffs()
        .iter()
        .copied()
        .find(|c| c.norm() > 0.0)
        .expect("nonzero polynomial");
    let phase = anchor / anchor.norm();
    let outer = outer.scale(phase.conj());
    let inner = BlaschkeProduct::new(zeros, phase)?;
    Ok(CanonicalFactorization { inner, outer })
}

fn check_band(roots: &[Complex64], delta_boundary: f64) -> Result<()> {
    for &root in roots {
        let distance = (root.norm() - 1.0).abs();
        if distance < delta_boundary {
            return Err(Error::BoundaryAmbiguousZero { root, distance });
        }
    }
    Ok(())
}

/// True iff no zero of `F` lies strictly inside the disk. Zeros within
/// `δ` of the circle count as boundary zeros, which outer functions may have.
pub fn is_outer(f: &AnalyticPolynomial) -> Result<bool> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("outerness test"));
    }
    Ok(roots_with_tol(f, TOL_ROOT)?
        .iter()
        .all(|r| r.norm() >= 1.0 - DELTA_BOUNDARY))
}

/// `mean(log|F(ζ)|) − log|F(0)|`, which vanishes exactly for outer `F` and
/// equals `−Σ log|aⱼ|` over the zeros inside the disk otherwise.
///
/// Nodes are offset by half a step so that boundary zeros of `F` are never
/// sampled; the grid is doubled until successive values agree to `cfg.tol`.
pub fn outer_log_defect(f: &AnalyticPolynomial, cfg: &QuadratureConfig) -> Result<f64> {
    if f.is_zero() {
        return Err(Error::ZeroPolynomial("outerness test"));
    }
    let at_origin = f.coefficient(0).norm().ln();
    let mean_log = |n: usize| {
        let shift = std::f64::consts::PI / n as f64;
        (0..n)
            .map(|t| {
                let theta = 2.0 * std::f64::consts::PI * t as f64 / n as f64 + shift;
                f.eval(Complex64::from_polar(1.0, theta)).norm().ln()
            })
            .sum::<f64>()
            / n as f64
    };
    let mut n = CircleGrid::at_least(4 * (f.coeffs().len() + 1)).len();
    let mut previous = mean_log(n);
    loop {
        n *= 2;
        if n > cfg.n_max {
            return Err(Error::QuadratureNotConverged {
                n: n / 2,
                difference: f64::NAN,
            });
        }
        let next = mean_log(n);
        let difference = (next - previous).abs();
        if difference < cfg.tol {
            return Ok(next - at_origin);
        }
        previous = next;
    }
}
