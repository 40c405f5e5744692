//! Test-only oracles, independent of the library code paths they check.

#![allow(dead_code)]

use h1k::{AnalyticPolynomial, Complex64, PoleFactor};

/// Taylor coefficients of `numerator / ∏(1 − āz)^d` by explicit binomial
/// series `(1 − āz)^{−d} = Σ C(k+d−1, d−1) āᵏ zᵏ` and schoolbook convolution.
pub fn brute_force_taylor(
    numerator: &AnalyticPolynomial,
    poles: &[PoleFactor],
    kmax: usize,
) -> Vec<Complex64> {
    let mut acc: Vec<Complex64> = (0..=kmax as i64)
        .map(|k| numerator.coefficient(k))
        .collect();
    for pole in poles {
        let d = pole.multiplicity as u64;
        if d == 0 {
            continue;
        }
        let series: Vec<Complex64> = (0..=kmax as u64)
            .map(|k| pole.a.conj().powu(k as u32) * binomial(k + d - 1, d - 1))
            .collect();
        let mut next = vec![Complex64::new(0.0, 0.0); kmax + 1];
        for i in 0..=kmax {
            for j in 0..=kmax - i {
                next[i + j] += acc[i] * series[j];
            }
        }
        acc = next;
    }
    acc
}

pub fn binomial(n: u64, k: u64) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// `4/π`, the norm of `1 + z`, from `|1 + e^{iθ}| = 2|cos(θ/2)|`.
pub const NORM_ONE_PLUS_Z: f64 = 4.0 / std::f64::consts::PI;

/// Composite Simpson on `[0, 2π]` with `n` (even) panels, split at the
/// supplied breakpoints so that kinks sit on panel edges.
pub fn simpson_mean<F: Fn(f64) -> f64>(f: F, breakpoints: &[f64], n: usize) -> f64 {
    let mut edges = vec![0.0];
    edges.extend(
        breakpoints
            .iter()
            .copied()
            .filter(|&b| b > 0.0 && b < 2.0 * std::f64::consts::PI),
    );
    edges.push(2.0 * std::f64::consts::PI);
    edges.sort_by(f64::total_cmp);
    let mut total = 0.0;
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let h = (b - a) / n as f64;
        let mut s = f(a) + f(b);
        for i in 1..n {
            let x = a + i as f64 * h;
            s += if i % 2 == 1 { 4.0 } else { 2.0 } * f(x);
        }
        total += s * h / 3.0;
    }
    total / (2.0 * std::f64::consts::PI)
}

pub fn vec_norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}
