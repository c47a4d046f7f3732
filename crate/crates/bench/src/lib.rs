//! Fixtures shared by the benchmarks.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use skelflow::inverse_compact::{inverse_compact, CantorMeasure, GapTruncation, MiddleCantor};
use skelflow::{CompactSet, Interval, IntervalUnion};

pub const SEED: u64 = 0x5eed_2024;

/// `n` disjoint intervals with random lengths and gaps, starting at 0.
pub fn random_union(n: usize, seed: u64) -> IntervalUnion {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut x = 0.0;
    let mut pairs = Vec::with_capacity(n);
    for _ in 0..n {
        let len = rng.gen_range(0.01..1.0);
        pairs.push((x, x + len));
        x += len + rng.gen_range(0.01..1.0);
    }
    IntervalUnion::from_pairs(&pairs).expect("disjoint by construction")
}

pub fn triadic() -> (MiddleCantor, CantorMeasure) {
    let set = MiddleCantor::triadic(Interval::new(0.0, 1.0).expect("ordered"));
    let mu =
        CantorMeasure::new(set, 2.0, CantorMeasure::DEFAULT_RESOLUTION).expect("valid measure");
    (set, mu)
}

/// Compact preimage of the triadic Cantor measure resolved to `depth`.
pub fn cantor_k0(depth: u32) -> CompactSet {
    let (set, mu) = triadic();
    inverse_compact(&set, &mu, depth, GapTruncation::CollapseCells)
        .expect("triadic data is admissible")
        .set
}
