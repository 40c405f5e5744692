//! Midpoint decompositions for non-extreme functions.
//!
//! Take a kernel vector `p` independent of `p₀`. On the circle
//! `h = p·Φ₀/B` is real (`B` the constant-free Blaschke product), so
//! `f·h = u·F₀·p` with `u` the unimodular constant of the inner factor, and
//! `f·h` has the same holes as `f`. Centring `h′ = h − c` with
//! `c = ∫|f|h` and choosing `ε ≤ 1/(2 sup|h′|)` gives `g = ε f h′` with
//!
//! ```text
//! ‖f ± g‖₁ = ∫|f|(1 ± εh′) = 1,
//! ```
//!
//! which exhibits `f` as the midpoint of `f + g` and `f − g`. The check in
//! [`verify_decomposition`] re-derives all of this by quadrature and never
//! consults the matrix.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circle::{
    circle_mean, l1_norm, projected_fourier_coefficient, AnalyticPolynomial, CircleFunction,
    CircleGrid, PoleFactor, QuadratureConfig, RationalAnalytic,
};
use crate::error::{Error, Result};
use crate::extremality::{norm, Classification};
use crate::spectral::SpectralHoleSet;
use crate::sympoly::{phi, SymmetricPolynomial};

/// Below this the kernel vector is treated as a multiple of `p₀`.
const MIN_ORTHOGONAL_PART: f64 = 1e-6;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    /// The perturbation `g = ε·(u·F₀·p − c·f)`.
    pub g: RationalAnalytic,
    pub epsilon: f64,
    /// Kernel element used, unit coefficient vector orthogonal to `p₀`.
    pub p: SymmetricPolynomial,
    pub centering_constant: f64,
    /// Sampled `sup|h − c|`.
    pub h_inf_norm: f64,
    /// Largest `|Im h|` over the sampling grid.
    pub h_imag_max: f64,
    /// Standard deviation of `h` over the sampling grid.
    pub h_std: f64,
    direction: RationalAnalytic,
}

impl Witness {
    /// The same perturbation direction with a different step. Used for
    /// negative controls: with `ε·sup|h′| > 1` the norm identity breaks.
    pub fn with_epsilon(&self, epsilon: f64) -> Self {
        Self {
            g: self.direction.scale(Complex64::new(epsilon, 0.0)),
            epsilon,
            ..self.clone()
        }
    }
}

/// Builds `g` from the kernel of a non-extreme classification.
pub fn construct_witness(cls: &Classification, cfg: &QuadratureConfig) -> Result<Witness> {
    let dim = cls.kernel.dim();
    if dim < 2 {
        return Err(Error::NoWitness(dim));
    }
    let v0 = cls.p0.to_vector();
    let v0_norm = norm(&v0);
    let unit0: Vec<f64> = v0.iter().map(|x| x / v0_norm).collect();

    // the kernel vector with the largest component orthogonal to p₀
    let (best, size) = cls
        .kernel
        .vectors
        .iter()
        .map(|v| {
            let dot: f64 = v.iter().zip(&unit0).map(|(a, b)| a * b).sum();
            let w: Vec<f64> = v.iter().zip(&unit0).map(|(a, b)| a - dot * b).collect();
            let n = norm(&w);
            (w, n)
        })
        .max_by(|a, b| a.1.total_cmp(&b.1))
        .expect("kernel has at least two vectors");
    if size < MIN_ORTHOGONAL_PART {
        return Err(Error::DegenerateKernelElement(size));
    }
    let m = cls.verdict.m;
    let direction_vec: Vec<f64> = best.iter().map(|x| x / size).collect();
    let p = SymmetricPolynomial::from_vector(m, &direction_vec)?;
    let p_analytic = p.to_analytic();

    let f = &cls.normalized;
    let inner = &cls.factorization.inner;
    let bare = inner.without_constant();
    let zeros = inner.zeros();
    let h_complex = |z: Complex64| p_analytic.eval(z) * phi(zeros, z) / bare.eval(z);

    let start = CircleGrid::at_least(8 * (f.coeffs().len() + 2 * m + 1));
    let c = circle_mean(
        |z| Complex64::new(f.eval(z).norm() * h_complex(z).re, 0.0),
        start,
        cfg,
    )?
    .re;

    let sampling = CircleGrid::at_least(64 * (f.coeffs().len() + 2 * m + 1)).doubled();
    let (mut sup, mut imag_max, mut sum, mut sum_sq) = (0.0f64, 0.0f64, 0.0, 0.0);
    for z in sampling.nodes() {
        let h = h_complex(z);
        sup = sup.max((h.re - c).abs());
        imag_max = imag_max.max(h.im.abs());
        sum += h.re;
        sum_sq += h.re * h.re;
    }
    let n = sampling.len() as f64;
    let h_std = (sum_sq / n - (sum / n).powi(2)).max(0.0).sqrt();
    let epsilon = 1.0 / (2.0 * sup);

    // u·F·p − c·f·∏(1 − āz)², over ∏(1 − āz)²
    let u = inner.unimodular_constant();
    let one = Complex64::new(1.0, 0.0);
    let squared_denominator = zeros
        .iter()
        .fold(AnalyticPolynomial::constant(one), |acc, &a| {
            let d = AnalyticPolynomial::new(vec![one, -a.conj()]);
            &(&acc * &d) * &d
        });
    let numerator = &(&cls.factorization.outer * &p_analytic).scale(u)
        - &(f * &squared_denominator).scale(Complex64::new(c, 0.0));
    let direction = RationalAnalytic::new(
        numerator,
        zeros
            .iter()
            .map(|&a| PoleFactor { a, multiplicity: 2 })
            .collect(),
    )?;
    Ok(Witness {
        g: direction.scale(Complex64::new(epsilon, 0.0)),
        epsilon,
        p,
        centering_constant: c,
        h_inf_norm: sup,
        h_imag_max: imag_max,
        h_std,
        direction,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DecompositionCheck {
    pub norm_plus: f64,
    pub norm_minus: f64,
    /// `|(f + g)^(kⱼ)|` per hole.
    pub spectral_residuals_plus: Vec<f64>,
    /// `|(f − g)^(kⱼ)|` per hole.
    pub spectral_residuals_minus: Vec<f64>,
    /// Sampled `sup|g|`; a zero perturbation certifies nothing.
    pub g_sup: f64,
    pub tol_dec: f64,
    pub passed: bool,
}

struct Shifted<'a> {
    f: &'a AnalyticPolynomial,
    g: &'a RationalAnalytic,
    sign: f64,
}

impl CircleFunction for Shifted<'_> {
    fn value_at(&self, zeta: Complex64) -> Complex64 {
        self.f.eval(zeta) + self.g.value_at(zeta) * self.sign
    }

    fn bandwidth(&self) -> usize {
        self.f.bandwidth().max(self.g.bandwidth())
    }
}

/// Checks `‖f ± g‖₁ = 1`, `(f ± g)^(kⱼ) = 0` and `g ≠ 0` by quadrature,
/// evaluating `g` pointwise.
pub fn verify_decomposition(
    f: &AnalyticPolynomial,
    witness: &Witness,
    holes: &SpectralHoleSet,
    cfg: &QuadratureConfig,
    tol_dec: f64,
) -> Result<DecompositionCheck> {
    let plus = Shifted {
        f,
        g: &witness.g,
        sign: 1.0,
    };
    let minus = Shifted {
        f,
        g: &witness.g,
        sign: -1.0,
    };
    let norm_plus = l1_norm(&plus, cfg)?;
    let norm_minus = l1_norm(&minus, cfg)?;
    let residuals = |side: &Shifted| -> Result<Vec<f64>> {
        holes
            .holes()
            .iter()
            .map(|&k| projected_fourier_coefficient(side, k as i64, cfg).map(|c| c.norm()))
            .collect()
    };
    let spectral_residuals_plus = residuals(&plus)?;
    let spectral_residuals_minus = residuals(&minus)?;
    let g_sup = CircleGrid::at_least(4 * witness.g.bandwidth())
        .nodes()
        .map(|z| witness.g.value_at(z).norm())
        .fold(0.0, f64::max);

    let passed = (norm_plus - 1.0).abs() < tol_dec
        && (norm_minus - 1.0).abs() < tol_dec
        && spectral_residuals_plus
            .iter()
            .chain(&spectral_residuals_minus)
            .all(|&r| r < tol_dec)
        && g_sup > 1e-12;
    Ok(DecompositionCheck {
        norm_plus,
        norm_minus,
        spectral_residuals_plus,
        spectral_residuals_minus,
        g_sup,
        tol_dec,
        passed,
    })
}
