//! Analytic polynomials and rational analytic functions on the unit circle.
//!
//! Everything downstream works with two kinds of function: polynomials with
//! spectrum in `Z₊` ([`AnalyticPolynomial`]) and quotients of such a
//! polynomial by `∏(1 − āⱼz)^dⱼ` with every `|aⱼ| < 1`
//! ([`RationalAnalytic`]). Both are smooth on the closed disk, so boundary
//! integrals are taken with the periodic trapezoid rule and grid doubling.

use std::f64::consts::PI;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Half-width of the band around the unit circle in which zeros and pole
/// parameters are rejected as ambiguous.
pub const DELTA_BOUNDARY: f64 = 1e-10;

/// Root residual tolerance used by [`roots`].
pub const TOL_ROOT: f64 = 1e-10;

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// A polynomial `Σ cₖ zᵏ` with complex coefficients.
///
/// Trailing zero coefficients are trimmed on construction, so the zero
/// polynomial has an empty coefficient vector and `degree()` is `None`.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<Complex64>", into = "Vec<Complex64>")]
pub struct AnalyticPolynomial {
    coeffs: Vec<Complex64>,
}

impl From<Vec<Complex64>> for AnalyticPolynomial {
    fn from(coeffs: Vec<Complex64>) -> Self {
        Self::new(coeffs)
    }
}

impl From<AnalyticPolynomial> for Vec<Complex64> {
    fn from(p: AnalyticPolynomial) -> Self {
        p.coeffs
    }
}

impl AnalyticPolynomial {
    pub fn new(mut coeffs: Vec<Complex64>) -> Self {
        while coeffs.last().is_some_and(|c| *c == ZERO) {
            coeffs.pop();
        }
        Self { coeffs }
    }

    pub fn zero() -> Self {
        Self { coeffs: Vec::new() }
    }

    pub fn constant(c: Complex64) -> Self {
        Self::new(vec![c])
    }

    /// `c·zᵏ`.
    pub fn monomial(k: usize, c: Complex64) -> Self {
        let mut coeffs = vec![ZERO; k + 1];
        coeffs[k] = c;
        Self::new(coeffs)
    }

    pub fn from_real(coeffs: &[f64]) -> Self {
        Self::new(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    /// `lead · ∏ (z − rᵢ)`.
    pub fn from_roots(lead: Complex64, roots: &[Complex64]) -> Self {
        let mut coeffs = vec![lead];
        for &r in roots {
            coeffs.push(ZERO);
            for k in (0..coeffs.len()).rev() {
                let lower = if k > 0 { coeffs[k - 1] } else { ZERO };
                coeffs[k] = lower - r * coeffs[k];
            }
        }
        Self::new(coeffs)
    }

    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Coefficient of `zᵏ`; zero outside `0..=degree`, in particular for every `k < 0`.
    pub fn coefficient(&self, k: i64) -> Complex64 {
        usize::try_from(k)
            .ok()
            .and_then(|k| self.coeffs.get(k).copied())
            .unwrap_or(ZERO)
    }

    /// Largest coefficient modulus (zero for the zero polynomial).
    pub fn max_abs_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }

    /// Number of vanishing low-order coefficients, i.e. the order of the zero at the origin.
    pub fn order_at_origin(&self) -> usize {
        self.coeffs.iter().take_while(|c| **c == ZERO).count()
    }

    /// Horner evaluation.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        self.coeffs.iter().rev().fold(ZERO, |acc, &c| acc * z + c)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self::new(self.coeffs.iter().map(|&x| x * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| c * k as f64)
                .collect(),
        )
    }

    /// Synthetic division by `z − a`, returning `(quotient, remainder)`.
    pub fn divide_linear(&self, a: Complex64) -> (Self, Complex64) {
        let n = self.coeffs.len();
        if n == 0 {
            return (Self::zero(), ZERO);
        }
        let mut quotient = vec![ZERO; n - 1];
        let mut carry = ZERO;
        for k in (0..n).rev() {
            let value = self.coeffs[k] + carry * a;
            if k == 0 {
                return (Self::new(quotient), value);
            }
            quotient[k - 1] = value;
            carry = value;
        }
        unreachable!()
    }

    /// The polynomial with every coefficient conjugated.
    pub fn conj_coeffs(&self) -> Self {
        Self::new(self.coeffs.iter().map(|c| c.conj()).collect())
    }
}

impl Add for &AnalyticPolynomial {
    type Output = AnalyticPolynomial;

    fn add(self, rhs: Self) -> AnalyticPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        AnalyticPolynomial::new(
            (0..n as i64)
                .map(|k| self.coefficient(k) + rhs.coefficient(k))
                .collect(),
        )
    }
}

impl Sub for &AnalyticPolynomial {
    type Output = AnalyticPolynomial;

    fn sub(self, rhs: Self) -> AnalyticPolynomial {
        self + &(-rhs)
    }
}

impl Neg for &AnalyticPolynomial {
    type Output = AnalyticPolynomial;

    fn neg(self) -> AnalyticPolynomial {
        self.scale(-ONE)
    }
}

impl Mul for &AnalyticPolynomial {
    type Output = AnalyticPolynomial;

    fn mul(self, rhs: Self) -> AnalyticPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return AnalyticPolynomial::zero();
        }
        let mut out = vec![ZERO; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            for (j, &b) in rhs.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        AnalyticPolynomial::new(out)
    }
}

/// One factor `(1 − ā z)^multiplicity` of a denominator; the pole sits at `1/ā`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PoleFactor {
    pub a: Complex64,
    pub multiplicity: u32,
}

impl PoleFactor {
    /// Location of the pole, `1/ā`, or `None` when `a = 0` (no pole in the plane).
    pub fn location(&self) -> Option<Complex64> {
        (self.a != ZERO).then(|| ONE / self.a.conj())
    }
}

/// `numerator / ∏ (1 − āⱼ z)^dⱼ` with every `|aⱼ| < 1 − δ`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RationalAnalytic {
    numerator: AnalyticPolynomial,
    poles: Vec<PoleFactor>,
}

impl RationalAnalytic {
    pub fn new(numerator: AnalyticPolynomial, poles: Vec<PoleFactor>) -> Result<Self> {
        for pole in &poles {
            let r = pole.a.norm();
            if !(r <= 1.0 - DELTA_BOUNDARY) {
                return Err(Error::PoleOutsideDisk(pole.a, r));
            }
        }
        Ok(Self { numerator, poles })
    }

    pub fn polynomial(numerator: AnalyticPolynomial) -> Self {
        Self {
            numerator,
            poles: Vec::new(),
        }
    }

    pub fn numerator(&self) -> &AnalyticPolynomial {
        &self.numerator
    }

    pub fn poles(&self) -> &[PoleFactor] {
        &self.poles
    }

    pub fn eval(&self, z: Complex64) -> Result<Complex64> {
        let mut denominator = ONE;
        for pole in &self.poles {
            let factor = ONE - pole.a.conj() * z;
            if factor.norm() <= f64::EPSILON * (1.0 + (pole.a * z).norm()) {
                return Err(Error::PoleHit(z));
            }
            denominator *= factor.powu(pole.multiplicity);
        }
        Ok(self.numerator.eval(z) / denominator)
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            numerator: self.numerator.scale(c),
            poles: self.poles.clone(),
        }
    }
}

/// Evaluation of either function class.
pub trait Evaluate {
    fn evaluate(&self, z: Complex64) -> Result<Complex64>;
}

impl Evaluate for AnalyticPolynomial {
    fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        Ok(self.eval(z))
    }
}

impl Evaluate for RationalAnalytic {
    fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        self.eval(z)
    }
}

pub fn evaluate<E: Evaluate + ?Sized>(p: &E, z: Complex64) -> Result<Complex64> {
    p.evaluate(z)
}

/// `p̂(k)`; for a polynomial this is a coefficient read-off.
pub fn fourier_coefficient(p: &AnalyticPolynomial, k: i64) -> Complex64 {
    p.coefficient(k)
}

/// Taylor coefficients of `r` at the origin through index `kmax`.
///
/// Each denominator factor is removed by the recurrence `yₖ = xₖ + ā yₖ₋₁`,
/// which is series division by `1 − āz`.
pub fn rational_taylor_coefficients(r: &RationalAnalytic, kmax: usize) -> Vec<Complex64> {
    let mut series: Vec<Complex64> = (0..=kmax as i64)
        .map(|k| r.numerator.coefficient(k))
        .collect();
    for pole in &r.poles {
        let a_bar = pole.a.conj();
        for _ in 0..pole.multiplicity {
            for k in 1..=kmax {
                let prev = series[k - 1];
                series[k] += a_bar * prev;
            }
        }
    }
    series
}

/// A function that can be sampled on the unit circle.
pub trait CircleFunction {
    /// Value at `ζ` with `|ζ| = 1`.
    fn value_at(&self, zeta: Complex64) -> Complex64;

    /// Rough number of Fourier modes needed to resolve the function; used to
    /// pick the starting grid.
    fn bandwidth(&self) -> usize;
}

impl CircleFunction for AnalyticPolynomial {
    fn value_at(&self, zeta: Complex64) -> Complex64 {
        self.eval(zeta)
    }

    fn bandwidth(&self) -> usize {
        self.coeffs.len()
    }
}

impl CircleFunction for RationalAnalytic {
    fn value_at(&self, zeta: Complex64) -> Complex64 {
        // Poles lie outside the closed disk by construction.
        self.eval(zeta)
            .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
    }

    fn bandwidth(&self) -> usize {
        let decay: usize = self
            .poles
            .iter()
            .map(|p| {
                let r = p.a.norm();
                if r < 1e-3 {
                    0
                } else {
                    ((1e-16f64.ln() / r.ln()).ceil() as usize).min(1 << 14)
                        * p.multiplicity as usize
                }
            })
            .max()
            .unwrap_or(0);
        self.numerator.coeffs.len() + decay
    }
}

/// `n` equispaced nodes `ζₜ = exp(2πit/n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CircleGrid {
    n: usize,
}

impl CircleGrid {
    pub fn new(n: usize) -> Result<Self> {
        if n < 16 || !n.is_power_of_two() {
            return Err(Error::InvalidGrid(n));
        }
        Ok(Self { n })
    }

    /// Smallest admissible grid with at least `min_nodes` points.
    pub fn at_least(min_nodes: usize) -> Self {
        Self {
            n: min_nodes.max(16).next_power_of_two(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn node(&self, t: usize) -> Complex64 {
        Complex64::from_polar(1.0, 2.0 * PI * t as f64 / self.n as f64)
    }

    pub fn nodes(&self) -> impl Iterator<Item = Complex64> + '_ {
        (0..self.n).map(|t| self.node(t))
    }

    /// Trapezoid rule: the plain mean of the samples.
    pub fn mean<F: Fn(Complex64) -> f64>(&self, f: F) -> f64 {
        self.nodes().map(f).sum::<f64>() / self.n as f64
    }

    pub fn doubled(&self) -> Self {
        Self { n: self.n * 2 }
    }
}

/// Convergence controls for the grid-doubling quadrature driver.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct QuadratureConfig {
    pub tol: f64,
    pub n_max: usize,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        Self {
            tol: 1e-10,
            n_max: 1 << 20,
        }
    }
}

/// Mean of a complex-valued sample function over the circle, doubling the
/// grid until two successive trapezoid values agree to `tol·max(1, |value|)`.
/// Each doubling only evaluates the new odd-indexed nodes.
pub fn circle_mean<F>(f: F, start: CircleGrid, cfg: &QuadratureConfig) -> Result<Complex64>
where
    F: Fn(Complex64) -> Complex64,
{
    let mut grid = start;
    let mut sum: Complex64 = grid.nodes().map(&f).sum();
    let mut value = sum / grid.n as f64;
    loop {
        let finer = grid.doubled();
        if finer.n > cfg.n_max {
            return Err(Error::QuadratureNotConverged {
                n: grid.n,
                difference: f64::NAN,
            });
        }
        let odd: Complex64 = (0..grid.n).map(|t| f(finer.node(2 * t + 1))).sum();
        sum += odd;
        let next = sum / finer.n as f64;
        let difference = (next - value).norm();
        if !difference.is_finite() {
            return Err(Error::QuadratureNotConverged {
                n: finer.n,
                difference,
            });
        }
        if difference < cfg.tol * next.norm().max(1.0) {
            return Ok(next);
        }
        if finer.n == cfg.n_max {
            return Err(Error::QuadratureNotConverged {
                n: finer.n,
                difference,
            });
        }
        grid = finer;
        value = next;
    }
}

fn start_grid<P: CircleFunction + ?Sized>(p: &P) -> CircleGrid {
    CircleGrid::at_least(4 * (p.bandwidth() + 1))
}

/// `‖p‖₁ = (1/2π)∫|p(ζ)||dζ|` by adaptive trapezoid quadrature.
pub fn l1_norm<P: CircleFunction + ?Sized>(p: &P, cfg: &QuadratureConfig) -> Result<f64> {
    circle_mean(
        |z| Complex64::new(p.value_at(z).norm(), 0.0),
        start_grid(p),
        cfg,
    )
    .map(|v| v.re)
}

/// `p̂(k)` for any circle function, by quadrature projection `mean(ζ̄ᵏ p(ζ))`.
pub fn projected_fourier_coefficient<P: CircleFunction + ?Sized>(
    p: &P,
    k: i64,
    cfg: &QuadratureConfig,
) -> Result<Complex64> {
    let grid = CircleGrid::at_least(4 * (p.bandwidth() + k.unsigned_abs() as usize + 1));
    circle_mean(|z| p.value_at(z) * z.conj().powi(k as i32), grid, cfg)
}

/// All roots of `p` with multiplicity, using the default residual tolerance.
pub fn roots(p: &AnalyticPolynomial) -> Result<Vec<Complex64>> {
    roots_with_tol(p, TOL_ROOT)
}

/// Companion-matrix eigenvalues refined by Newton polishing.
///
/// Every returned root satisfies
/// `|p(r)| ≤ tol_root · max|cₖ| · (1 + |r|)^deg`.
pub fn roots_with_tol(p: &AnalyticPolynomial, tol_root: f64) -> Result<Vec<Complex64>> {
    let degree = p.degree().ok_or(Error::ZeroPolynomial("roots"))?;
    let low = p.order_at_origin();
    let mut found = vec![ZERO; low];
    let reduced = AnalyticPolynomial::new(p.coeffs[low..].to_vec());
    let d = degree - low;
    match d {
        0 => {}
        1 => found.push(-reduced.coeffs[0] / reduced.coeffs[1]),
        _ => {
            let lead = reduced.coeffs[d];
            let mut companion = DMatrix::<Complex64>::zeros(d, d);
            for i in 1..d {
                companion[(i, i - 1)] = ONE;
            }
            for i in 0..d {
                companion[(i, d - 1)] = -reduced.coeffs[i] / lead;
            }
            let derivative = reduced.derivative();
            let estimates = match Schur::try_new(companion, f64::EPSILON, 1000) {
                Some(schur) => {
                    let (_, triangular) = schur.unpack();
                    (0..d).map(|i| triangular[(i, i)]).collect()
                }
                None => aberth(&reduced, &derivative),
            };
            found.extend(
                estimates
                    .into_iter()
                    .map(|z| polish(&reduced, &derivative, z)),
            );
        }
    }

    let scale = p.max_abs_coeff();
    for &r in &found {
        let residual = p.eval(r).norm();
        let bound = tol_root * scale * (1.0 + r.norm()).powi(degree as i32);
        if !(residual <= bound) {
            return Err(Error::RootResidual {
                root: r,
                residual,
                bound,
            });
        }
    }
    Ok(found)
}

/// Aberth–Ehrlich simultaneous iteration, the fallback when the Schur
/// iteration stalls.
fn aberth(p: &AnalyticPolynomial, dp: &AnalyticPolynomial) -> Vec<Complex64> {
    let d = p.coeffs.len() - 1;
    let radius = (p.coeffs[0].norm() / p.coeffs[d].norm())
        .powf(1.0 / d as f64)
        .max(1e-3);
    let mut z: Vec<Complex64> = (0..d)
        .map(|k| Complex64::from_polar(radius, 2.0 * PI * k as f64 / d as f64 + 0.4))
        .collect();
    for _ in 0..500 {
        let mut largest_step = 0.0f64;
        for k in 0..d {
            let slope = dp.eval(z[k]);
            let value = p.eval(z[k]);
            if value == ZERO {
                continue;
            }
            let ratio = if slope == ZERO { ONE } else { value / slope };
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| ONE / (z[k] - z[j]))
                .sum();
            let step = ratio / (ONE - ratio * repulsion);
            if step.is_finite() {
                z[k] -= step;
                largest_step = largest_step.max(step.norm() / (1.0 + z[k].norm()));
            }
        }
        if largest_step < 4.0 * f64::EPSILON {
            break;
        }
    }
    z
}

fn polish(p: &AnalyticPolynomial, dp: &AnalyticPolynomial, mut z: Complex64) -> Complex64 {
    let mut residual = p.eval(z).norm();
    for _ in 0..16 {
        let slope = dp.eval(z);
        if slope == ZERO || residual == 0.0 {
            break;
        }
        let candidate = z - p.eval(z) / slope;
        let next = p.eval(candidate).norm();
        if !(next < residual) {
            break;
        }
        z = candidate;
        residual = next;
    }
    z
}
