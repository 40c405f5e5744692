//! Random instance generators for tests, benchmarks and corpus building.
//!
//! Every generator draws from a caller-supplied RNG, so a seeded RNG gives a
//! reproducible stream of instances.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::Rng;
use std::f64::consts::PI;

use crate::circle::{
    rational_taylor_coefficients, roots, AnalyticPolynomial, PoleFactor, RationalAnalytic,
};
use crate::spectral::SpectralHoleSet;
use crate::sympoly::SymmetricPolynomial;

/// Roots closer than this to the circle are avoided by every generator.
pub const BAND_MARGIN: f64 = 0.05;

/// A function together with the hole set it is meant to be classified in.
#[derive(Clone, Debug)]
pub struct Instance {
    pub f: AnalyticPolynomial,
    pub holes: SpectralHoleSet,
    pub label: &'static str,
}

pub fn unit_complex<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::from_polar(1.0, rng.gen_range(0.0..2.0 * PI))
}

/// Uniform modulus in `[r_min, r_max]`, uniform argument.
pub fn annulus_point<R: Rng + ?Sized>(rng: &mut R, r_min: f64, r_max: f64) -> Complex64 {
    Complex64::from_polar(rng.gen_range(r_min..=r_max), rng.gen_range(0.0..2.0 * PI))
}

pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    // Box–Muller
    let u: f64 = rng.gen_range(f64::EPSILON..1.0);
    let v: f64 = rng.gen_range(0.0..2.0 * PI);
    Complex64::from_polar((-2.0 * u.ln()).sqrt(), v)
}

/// Points strictly inside the disk, at most `r_max` in modulus.
pub fn disk_points<R: Rng + ?Sized>(rng: &mut R, count: usize, r_max: f64) -> Vec<Complex64> {
    (0..count).map(|_| annulus_point(rng, 0.0, r_max)).collect()
}

/// A random polynomial with `inside` roots in `|z| ≤ 1 − BAND_MARGIN` and
/// `outside` roots in `1 + BAND_MARGIN ≤ |z| ≤ 3`.
pub fn polynomial_with_roots<R: Rng + ?Sized>(
    rng: &mut R,
    inside: usize,
    outside: usize,
) -> AnalyticPolynomial {
    let mut rs: Vec<Complex64> = (0..inside)
        .map(|_| annulus_point(rng, 0.0, 1.0 - BAND_MARGIN))
        .collect();
    rs.extend((0..outside).map(|_| annulus_point(rng, 1.0 + BAND_MARGIN, 3.0)));
    let lead = complex_normal(rng);
    AnalyticPolynomial::from_roots(lead, &rs)
}

/// `c₀ + Σ cⱼzʲ` with `Σ_{j≥1} |cⱼ| ≤ 0.9·|c₀|`, hence zero-free on the
/// closed disk. Coefficients listed in `vanish` are zero.
pub fn dominant_outer<R: Rng + ?Sized>(
    rng: &mut R,
    degree: usize,
    vanish: &[usize],
) -> AnalyticPolynomial {
    let mut coeffs: Vec<Complex64> = (0..=degree)
        .map(|j| {
            if j > 0 && vanish.contains(&j) {
                Complex64::new(0.0, 0.0)
            } else {
                complex_normal(rng)
            }
        })
        .collect();
    let tail: f64 = coeffs[1..].iter().map(|c| c.norm()).sum();
    let budget = rng.gen_range(0.2..0.9);
    if tail > 0.0 {
        for c in &mut coeffs[1..] {
            *c *= budget / tail;
        }
    }
    coeffs[0] = unit_complex(rng);
    AnalyticPolynomial::new(coeffs)
}

/// Number of roots strictly inside the disk, or `None` if any root is within
/// `margin` of the circle.
pub fn inner_degree(f: &AnalyticPolynomial, margin: f64) -> Option<usize> {
    let rs = roots(f).ok()?;
    if rs.iter().any(|r| (r.norm() - 1.0).abs() < margin) {
        return None;
    }
    Some(rs.iter().filter(|r| r.norm() < 1.0).count())
}

/// A random hole set of size `count` inside `1..=max`.
pub fn hole_set<R: Rng + ?Sized>(rng: &mut R, count: usize, max: u64) -> SpectralHoleSet {
    let mut picked = rand::seq::index::sample(rng, max as usize, count.min(max as usize))
        .into_iter()
        .map(|i| i as u64 + 1)
        .collect::<Vec<_>>();
    picked.sort_unstable();
    SpectralHoleSet::new(picked).expect("sorted distinct positive")
}

/// `f ∈ H¹_K` with exactly `m` zeros in the disk: `∏(z − aⱼ)·G` with `G`
/// outer, hole coefficients cleared, and rejected until the zero count
/// survives the clearing.
pub fn with_inner_degree<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    holes: &SpectralHoleSet,
    outer_degree: usize,
) -> AnalyticPolynomial {
    loop {
        let zeros = disk_points(rng, m, 0.85);
        let g = dominant_outer(rng, outer_degree, &[]);
        let f = &AnalyticPolynomial::from_roots(Complex64::new(1.0, 0.0), &zeros) * &g;
        let f = clear_holes(&f, holes);
        if f.is_zero() {
            continue;
        }
        if inner_degree(&f, BAND_MARGIN) == Some(m) {
            return f;
        }
    }
}

pub fn clear_holes(f: &AnalyticPolynomial, holes: &SpectralHoleSet) -> AnalyticPolynomial {
    let mut coeffs = f.coeffs().to_vec();
    for &k in holes.holes() {
        if let Some(c) = coeffs.get_mut(k as usize) {
            *c = Complex64::new(0.0, 0.0);
        }
    }
    AnalyticPolynomial::new(coeffs)
}

/// Outer `F` with `F̂(k−1) = 0`, for the single-hole family `f = zF`, `K = {k}`.
/// With `equal_moduli` the coefficients at `k − 2` and `k` get the same
/// modulus (requires `k ≥ 3` so that neither is the dominant constant term).
pub fn single_hole_outer<R: Rng + ?Sized>(
    rng: &mut R,
    k: usize,
    equal_moduli: bool,
) -> AnalyticPolynomial {
    assert!(k >= 2);
    assert!(!equal_moduli || k >= 3, "equal moduli needs k >= 3");
    let degree = k + rng.gen_range(0..=2);
    let f = dominant_outer(rng, degree, &[k - 1]);
    if !equal_moduli {
        return f;
    }
    let mut coeffs = f.coeffs().to_vec();
    coeffs.resize(degree + 1, Complex64::new(0.0, 0.0));
    let r = coeffs[k - 2].norm();
    coeffs[k] = unit_complex(rng) * r;
    // rescale the tail so the dominance bound still holds
    let tail: f64 = coeffs[1..].iter().map(|c| c.norm()).sum();
    if tail > 0.9 {
        for c in &mut coeffs[1..] {
            *c *= 0.9 / tail;
        }
    }
    AnalyticPolynomial::new(coeffs)
}

/// A random `N`-symmetric polynomial with standard normal coordinates.
pub fn symmetric<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SymmetricPolynomial {
    let v: Vec<f64> = (0..2 * n + 1).map(|_| complex_normal(rng).re).collect();
    SymmetricPolynomial::from_vector(n, &v).expect("length 2n+1")
}

/// `f ∈ H¹_K` with `m` inner zeros whose kernel contains, besides `p₀`, the
/// vector of a random symmetric `p₁`. Requires `m ≥ 1`, `M ≥ 1` and
/// `k_M ≥ 2M`.
///
/// Writing `f = ∏(z − aⱼ)·G`, both `(F₀p₀)^(kⱼ) = f̂(kⱼ)` and `(F₀p₁)^(kⱼ)`
/// are linear in the coefficients of `G`; `2M` of them are solved for, the
/// rest are drawn small. Draws whose `G` is not outer are rejected; `None`
/// after `attempts` failures.
pub fn rank_deficient<R: Rng + ?Sized>(
    rng: &mut R,
    m: usize,
    holes: &SpectralHoleSet,
    attempts: usize,
) -> Option<AnalyticPolynomial> {
    assert!(m >= 1 && !holes.is_empty());
    let big_m = holes.len();
    let kmax = holes.max_hole() as usize;
    if kmax < 2 * big_m {
        return None;
    }
    let one = Complex64::new(1.0, 0.0);
    for _ in 0..attempts {
        let zeros = disk_points(rng, m, 0.7);
        let p1 = symmetric(rng, m).to_analytic();
        let vanishing = AnalyticPolynomial::from_roots(one, &zeros);
        // series of p₁/∏(1 − āz): F₀p₁ = G·p₁/∏(1 − āz)
        let s1 = rational_taylor_coefficients(
            &RationalAnalytic::new(
                p1,
                zeros
                    .iter()
                    .map(|&a| PoleFactor { a, multiplicity: 1 })
                    .collect(),
            )
            .ok()?,
            kmax,
        );
        let s0: Vec<Complex64> = (0..=kmax as i64)
            .map(|k| vanishing.coefficient(k))
            .collect();

        let degree = kmax + rng.gen_range(0..=2);
        let mut g: Vec<Complex64> = (0..=degree).map(|_| complex_normal(rng) * 0.1).collect();
        g[0] = one;
        let mut unknowns: Vec<usize> = rand::seq::index::sample(rng, kmax, 2 * big_m)
            .into_iter()
            .map(|i| i + 1)
            .collect();
        unknowns.sort_unstable();
        for &u in &unknowns {
            g[u] = Complex64::new(0.0, 0.0);
        }
        let n = 2 * big_m;
        let mut a = DMatrix::<Complex64>::zeros(n, n);
        let mut b = DVector::<Complex64>::zeros(n);
        for (j, &k) in holes.holes().iter().enumerate() {
            let k = k as usize;
            for (row, series) in [(j, &s0), (big_m + j, &s1)] {
                let mut rhs = Complex64::new(0.0, 0.0);
                for (i, &gi) in g.iter().enumerate().take(k + 1) {
                    rhs -= gi * series[k - i];
                }
                b[row] = rhs;
                for (col, &u) in unknowns.iter().enumerate() {
                    if u <= k {
                        a[(row, col)] = series[k - u];
                    }
                }
            }
        }
        let Some(solution) = a.lu().solve(&b) else {
            continue;
        };
        for (col, &u) in unknowns.iter().enumerate() {
            g[u] = solution[col];
        }
        let g = AnalyticPolynomial::new(g);
        if inner_degree(&g, BAND_MARGIN) != Some(0) {
            continue;
        }
        let f = clear_holes(&(&vanishing * &g), holes);
        return Some(f);
    }
    None
}

/// `f = ∏(z − aⱼ)·G ∈ H¹_K` with the given inner zeros kept exactly.
///
/// `G` gets random coefficients up to `degree`; one of them per hole,
/// within `m` below that hole, is then solved for so that every hole
/// coefficient of `f` vanishes. Returns `(f, G)`; `G` is not forced to be
/// outer. `None` if no such choice exists or the solve is singular.
pub fn with_exact_zeros<R: Rng + ?Sized>(
    rng: &mut R,
    zeros: &[Complex64],
    holes: &SpectralHoleSet,
    degree: usize,
) -> Option<(AnalyticPolynomial, AnalyticPolynomial)> {
    let one = Complex64::new(1.0, 0.0);
    let vanishing = AnalyticPolynomial::from_roots(one, zeros);
    let m = zeros.len();
    // holes above deg f need nothing
    let active: Vec<u64> = holes
        .holes()
        .iter()
        .copied()
        .filter(|&k| k as usize <= degree + m)
        .collect();
    let big_m = active.len();
    let mut g: Vec<Complex64> = (0..=degree).map(|_| complex_normal(rng)).collect();
    if big_m > 0 {
        // each hole gets its own unknown within reach of the vanishing factor
        let mut unknowns: Vec<usize> = Vec::with_capacity(big_m);
        for &k in &active {
            let k = k as usize;
            let candidates: Vec<usize> = (k.saturating_sub(m)..=k.min(degree))
                .filter(|u| !unknowns.contains(u))
                .collect();
            if candidates.is_empty() {
                return None;
            }
            unknowns.push(candidates[rng.gen_range(0..candidates.len())]);
        }
        for &u in &unknowns {
            g[u] = Complex64::new(0.0, 0.0);
        }
        let mut a = DMatrix::<Complex64>::zeros(big_m, big_m);
        let mut b = DVector::<Complex64>::zeros(big_m);
        for (j, &k) in active.iter().enumerate() {
            let k = k as i64;
            b[j] = -(0..g.len())
                .map(|i| g[i] * vanishing.coefficient(k - i as i64))
                .sum::<Complex64>();
            for (col, &u) in unknowns.iter().enumerate() {
                a[(j, col)] = vanishing.coefficient(k - u as i64);
            }
        }
        let solution = a.lu().solve(&b)?;
        for (col, &u) in unknowns.iter().enumerate() {
            g[u] = solution[col];
        }
    }
    let g = AnalyticPolynomial::new(g);
    let f = &vanishing * &g;
    Some((f, g))
}
