//! Fixed-seed workloads shared by the criterion benches.

use h1k::sample::{self, Instance};
use h1k::SpectralHoleSet;
use rand::rngs::StdRng;
use rand::SeedableRng;

pub const SEED: u64 = 0x0048_314b;

/// Instances with `m = M + 1` inner zeros, `M` from 1 to `max_holes`.
pub fn excess_degree(max_holes: usize) -> Vec<Instance> {
    let mut rng = StdRng::seed_from_u64(SEED);
    (1..=max_holes)
        .map(|big_m| {
            let holes = sample::hole_set(&mut rng, big_m, 4 * big_m as u64 + 4);
            Instance {
                f: sample::with_inner_degree(&mut rng, big_m + 1, &holes, 6),
                holes,
                label: "excess-degree",
            }
        })
        .collect()
}

/// Outer functions of increasing degree with no holes.
pub fn outer_only(degrees: &[usize]) -> Vec<Instance> {
    let mut rng = StdRng::seed_from_u64(SEED + 1);
    degrees
        .iter()
        .map(|&d| Instance {
            f: sample::dominant_outer(&mut rng, d, &[]),
            holes: SpectralHoleSet::empty(),
            label: "outer",
        })
        .collect()
}
