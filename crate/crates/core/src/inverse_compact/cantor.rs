//! Middle-α Cantor sets and their natural self-similar measures.

use serde::{Deserialize, Serialize};

use super::{CdfMeasure, GapGenerator};
use crate::error::{Error, Result};
use crate::interval::{ClosedInterval, CompactSet, Interval, IntervalUnion};

/// Cantor set obtained by repeatedly removing the open middle fraction
/// `middle` of every remaining interval of `hull`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiddleCantor {
    hull: Interval,
    middle: f64,
}

impl MiddleCantor {
    pub fn new(hull: Interval, middle: f64) -> Result<Self> {
        if !(middle > 0.0 && middle < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "removed middle fraction {middle} must lie in (0, 1)"
            )));
        }
        Ok(Self { hull, middle })
    }

    /// Classical middle-thirds set.
    pub fn triadic(hull: Interval) -> Self {
        Self {
            hull,
            middle: 1.0 / 3.0,
        }
    }

    pub fn middle(&self) -> f64 {
        self.middle
    }

    /// Scale factor of each of the two children of a cell.
    pub fn ratio(&self) -> f64 {
        0.5 * (1.0 - self.middle)
    }

    /// Similarity dimension `ln 2 / ln(1 / ratio)`.
    pub fn dimension(&self) -> f64 {
        std::f64::consts::LN_2 / (1.0 / self.ratio()).ln()
    }

    /// The `2^depth` closed cells left after `depth` removal rounds.
    pub fn cells(&self, depth: u32) -> Vec<ClosedInterval> {
        let r = self.ratio();
        let mut cells = vec![(self.hull.left(), self.hull.right())];
        for _ in 0..depth {
            let mut next = Vec::with_capacity(cells.len() * 2);
            for (lo, hi) in cells {
                let child = (hi - lo) * r;
                next.push((lo, lo + child));
                next.push((hi - child, hi));
            }
            cells = next;
        }
        cells
            .into_iter()
            .map(|(lo, hi)| ClosedInterval::new(lo, hi).expect("cells stay ordered"))
            .collect()
    }

    /// The depth-`depth` approximation `hull \ (gaps up to depth)`.
    pub fn compact_set(&self, depth: u32) -> CompactSet {
        CompactSet::new(self.hull, self.gaps(depth)).expect("generated gaps lie inside the hull")
    }
}

impl GapGenerator for MiddleCantor {
    fn hull(&self) -> Interval {
        self.hull
    }

    fn gaps(&self, depth: u32) -> IntervalUnion {
        let cells = self.cells(depth);
        let gaps = cells
            .windows(2)
            .filter_map(|w| Interval::new(w[0].hi(), w[1].lo()).ok())
            .collect::<Vec<_>>();
        IntervalUnion::from(gaps)
    }
}

/// Natural measure of a [`MiddleCantor`] set scaled to `total_mass`.
///
/// Its CDF is the generalized devil's staircase, evaluated digit by digit:
/// each level tells whether the point lies in the left child, the right
/// child, or the removed middle of its current cell.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CantorMeasure {
    set: MiddleCantor,
    total_mass: f64,
    resolution_depth: u32,
}

impl CantorMeasure {
    pub const DEFAULT_RESOLUTION: u32 = 48;

    pub fn new(set: MiddleCantor, total_mass: f64, resolution_depth: u32) -> Result<Self> {
        if !(total_mass.is_finite() && total_mass > 0.0) {
            return Err(Error::InvalidMeasure(format!(
                "total mass {total_mass} must be positive"
            )));
        }
        if resolution_depth == 0 || resolution_depth > 1000 {
            return Err(Error::InvalidParameter(format!(
                "resolution depth {resolution_depth} must lie in 1..=1000"
            )));
        }
        Ok(Self {
            set,
            total_mass,
            resolution_depth,
        })
    }

    pub fn set(&self) -> &MiddleCantor {
        &self.set
    }

    pub fn resolution_depth(&self) -> u32 {
        self.resolution_depth
    }

    /// Staircase value in `[0, 1]` on the unit hull.
    fn unit_cdf(&self, mut u: f64) -> f64 {
        if u <= 0.0 {
            return 0.0;
        }
        if u >= 1.0 {
            return 1.0;
        }
        let r = self.set.ratio();
        let mut acc = 0.0;
        let mut weight = 1.0;
        for _ in 0..self.resolution_depth {
            weight *= 0.5;
            if u <= r {
                u /= r;
            } else if u >= 1.0 - r {
                acc += weight;
                u = (u - (1.0 - r)) / r;
            } else {
                return acc + weight;
            }
        }
        // unresolved cell: interpolate linearly
        acc + weight * u.clamp(0.0, 1.0)
    }
}

impl CdfMeasure for CantorMeasure {
    fn hull(&self) -> Interval {
        self.set.hull
    }

    fn total_mass(&self) -> f64 {
        self.total_mass
    }

    fn cdf(&self, x: f64) -> f64 {
        let h = self.set.hull;
        self.total_mass * self.unit_cdf((x - h.left()) / h.length())
    }

    fn modulus(&self) -> f64 {
        self.total_mass * (-(self.resolution_depth as f64)).exp2()
    }
}
