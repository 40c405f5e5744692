use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("the zero polynomial has no {0}")]
    ZeroPolynomial(&'static str),

    #[error("evaluation point {0} is a pole")]
    PoleHit(Complex64),

    #[error("pole parameter {0} is not strictly inside the disk (|a| = {1})")]
    PoleOutsideDisk(Complex64, f64),

    #[error("zero {root} lies in the boundary band (||z| - 1| = {distance:e})")]
    BoundaryAmbiguousZero { root: Complex64, distance: f64 },

    #[error("root finder residual {residual:e} at {root} exceeds tolerance {bound:e}")]
    RootResidual {
        root: Complex64,
        residual: f64,
        bound: f64,
    },

    #[error("quadrature did not converge: last two values differ by {difference:e} at n = {n}")]
    QuadratureNotConverged { n: usize, difference: f64 },

    #[error("grid size {0} is not a power of two >= 16")]
    InvalidGrid(usize),

    #[error("invalid hole set: {0}")]
    InvalidHoles(String),

    #[error("f is not in H1_K: coefficient at k = {k} has modulus {residual:e} (tolerance {tolerance:e})")]
    SpectralPrecondition {
        k: u64,
        residual: f64,
        tolerance: f64,
    },

    #[error("polynomial is not {n}-symmetric: mismatch {mismatch:e} at offset {offset}")]
    SymmetryViolation {
        n: usize,
        offset: usize,
        mismatch: f64,
    },

    #[error("polynomial degree {degree} exceeds 2N = {max}")]
    DegreeOverflow { degree: usize, max: usize },

    #[error("coefficient vector has length {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("no witness exists: kernel dimension is {0}")]
    NoWitness(usize),

    #[error("kernel element is numerically parallel to p0 (orthogonal part {0:e})")]
    DegenerateKernelElement(f64),
}
