//! Open initial data with a prescribed atomic skeleton.
//!
//! For atoms `c_i δ_{x_i}` with total mass `2L`, place the interval
//! `(x_i + l_i - L, x_i + l_i - L + c_i)` where `l_i` is the mass strictly
//! left of `x_i`. The gap between consecutive intervals equals the spacing of
//! the corresponding atoms, so distinct atoms always give disjoint intervals.

use serde::Serialize;

use crate::interval::{normalize, Interval, IntervalUnion};
use crate::skeleton::AtomicMeasure;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OpenPreimage {
    pub set: IntervalUnion,
    /// Atoms that could not be realized by a separate interval: `i` is
    /// listed when interval `i` touched interval `i + 1` and was merged, or
    /// when its mass is below the rounding unit at its position. Nonempty
    /// only when rounding erased an atom spacing or mass.
    pub degenerate: Vec<usize>,
}

impl OpenPreimage {
    /// True when the skeleton of `set` has one atom per requested atom.
    pub fn is_invertible(&self) -> bool {
        self.degenerate.is_empty()
    }
}

/// Build `Ω₀` whose skeleton is `mu`.
///
/// The result lies in `[c - L, d + L]` where `[c, d]` is the atom hull.
pub fn inverse_open(mu: &AtomicMeasure) -> OpenPreimage {
    let half = 0.5 * mu.total_mass();
    let mut raw: Vec<(usize, Interval)> = Vec::with_capacity(mu.len());
    let mut degenerate = Vec::new();
    let mut left_mass = 0.0;
    for (i, atom) in mu.atoms().iter().enumerate() {
        let a = atom.x + left_mass - half;
        match Interval::new(a, a + atom.mass) {
            Ok(iv) => raw.push((i, iv)),
            Err(_) => degenerate.push(i),
        }
        left_mass += atom.mass;
    }

    degenerate.extend(
        raw.windows(2)
            .filter(|w| w[0].1.right() >= w[1].1.left())
            .map(|w| w[0].0),
    );
    degenerate.sort_unstable();
    degenerate.dedup();
    OpenPreimage {
        set: normalize(raw.into_iter().map(|(_, iv)| iv)),
        degenerate,
    }
}
