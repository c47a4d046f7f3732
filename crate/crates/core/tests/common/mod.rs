#![allow(dead_code)]

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use skelflow::{Atom, AtomicMeasure, IntervalUnion};

pub const SEED: u64 = 0x5eed_2024;

/// Normalized unions of at most `max_len` intervals with endpoints in
/// `[-10, 10]`.
pub fn unions(count: usize, max_len: usize, seed: u64) -> Vec<IntervalUnion> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(1..=max_len);
        let mut pts: Vec<f64> = (0..2 * n).map(|_| rng.gen_range(-10.0..=10.0)).collect();
        pts.sort_by(f64::total_cmp);
        let pairs: Vec<(f64, f64)> = pts.chunks_exact(2).map(|c| (c[0], c[1])).collect();
        if let Ok(u) = IntervalUnion::from_pairs(&pairs) {
            out.push(u);
        }
    }
    out
}

/// Atomic measures with at most `max_len` atoms in `[-10, 10]` and masses
/// in `[0.01, 3]`.
pub fn atomic_measures(count: usize, max_len: usize, seed: u64) -> Vec<AtomicMeasure> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let n = rng.gen_range(1..=max_len);
        let atoms = (0..n)
            .map(|_| Atom::new(rng.gen_range(-10.0..=10.0), rng.gen_range(0.01..=3.0)))
            .collect();
        if let Ok(m) = AtomicMeasure::from_unsorted(atoms) {
            out.push(m);
        }
    }
    out
}

pub fn dyadic(k: u32) -> f64 {
    1.0 - (-(k as f64)).exp2()
}
