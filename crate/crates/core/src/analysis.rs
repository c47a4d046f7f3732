//! Grid box counting and box-dimension fits.

use serde::Serialize;

use crate::error::{finite, Error, Result};
use crate::interval::CompactSet;
use crate::skeleton::AtomicMeasure;

/// A set whose `ε`-boxes can be counted on a grid anchored at its leftmost
/// point.
pub trait BoxCountable {
    /// Number of grid boxes of side `eps` meeting the set.
    fn box_count(&self, eps: f64) -> usize;

    /// Smallest box side the representation can resolve, if limited.
    fn finest_scale(&self) -> Option<f64> {
        None
    }
}

impl BoxCountable for CompactSet {
    /// A box counts unless it lies inside the closure of one gap.
    fn box_count(&self, eps: f64) -> usize {
        let hull = self.hull();
        let a = hull.left();
        let tol = 1e-9 * eps;
        let total = ((hull.length() / eps) - 1e-9).ceil().max(1.0) as usize;
        let mut covered = 0usize;
        for g in self.gaps().iter() {
            let first = ((g.left() - tol - a) / eps).ceil();
            let last = ((g.right() + tol - a) / eps).floor() - 1.0;
            if last >= first {
                covered += (last - first + 1.0) as usize;
            }
        }
        total - covered.min(total)
    }

    fn finest_scale(&self) -> Option<f64> {
        self.min_gap()
    }
}

/// Finitely many points.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointSet(Vec<f64>);

impl PointSet {
    pub fn new(mut points: Vec<f64>) -> Result<Self> {
        for &x in &points {
            finite(x)?;
        }
        points.sort_by(f64::total_cmp);
        Ok(Self(points))
    }

    pub fn points(&self) -> &[f64] {
        &self.0
    }
}

impl From<&AtomicMeasure> for PointSet {
    fn from(mu: &AtomicMeasure) -> Self {
        Self(mu.positions())
    }
}

impl BoxCountable for PointSet {
    fn box_count(&self, eps: f64) -> usize {
        count_points(&self.0, eps)
    }
}

impl BoxCountable for AtomicMeasure {
    fn box_count(&self, eps: f64) -> usize {
        count_points(&self.positions(), eps)
    }
}

fn count_points(sorted: &[f64], eps: f64) -> usize {
    let Some(&min) = sorted.first() else {
        return 0;
    };
    let mut count = 0;
    let mut last = None;
    for &x in sorted {
        let b = ((x - min) / eps + 1e-9).floor() as i64;
        if last != Some(b) {
            count += 1;
            last = Some(b);
        }
    }
    count
}

/// Count boxes of side `eps > 0`.
pub fn box_count<S: BoxCountable + ?Sized>(set: &S, eps: f64) -> Result<usize> {
    if !(eps.is_finite() && eps > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "box size {eps} must be positive"
        )));
    }
    Ok(set.box_count(eps))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScaleCount {
    pub eps: f64,
    pub count: usize,
}

/// Least-squares slope of `log N(ε)` against `log(1/ε)`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionFit {
    pub estimate: f64,
    /// Root-mean-square deviation of the points from the fitted line.
    pub residual: f64,
    pub counts: Vec<ScaleCount>,
}

pub fn box_dimension<S: BoxCountable + ?Sized>(set: &S, ladder: &[f64]) -> Result<DimensionFit> {
    if ladder.len() < 3 {
        return Err(Error::TooFewScales {
            needed: 3,
            got: ladder.len(),
        });
    }
    let finest = set.finest_scale();
    let mut counts = Vec::with_capacity(ladder.len());
    for &eps in ladder {
        if let Some(f) = finest {
            if eps < f * (1.0 - 1e-9) {
                return Err(Error::ScaleBeyondDepth { eps, finest: f });
            }
        }
        counts.push(ScaleCount {
            eps,
            count: box_count(set, eps)?,
        });
    }
    let (estimate, residual) = fit(&counts);
    Ok(DimensionFit {
        estimate,
        residual,
        counts,
    })
}

fn fit(counts: &[ScaleCount]) -> (f64, f64) {
    let pts: Vec<(f64, f64)> = counts
        .iter()
        .map(|c| ((1.0 / c.eps).ln(), (c.count.max(1) as f64).ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    let rss: f64 = pts
        .iter()
        .map(|p| (p.1 - my - slope * (p.0 - mx)).powi(2))
        .sum();
    (slope, (rss / n).sqrt())
}

/// Fits over every run of `window` consecutive ladder scales.
pub fn windowed_dimensions<S: BoxCountable + ?Sized>(
    set: &S,
    ladder: &[f64],
    window: usize,
) -> Result<Vec<DimensionFit>> {
    if window < 3 {
        return Err(Error::TooFewScales {
            needed: 3,
            got: window,
        });
    }
    ladder
        .windows(window)
        .map(|w| box_dimension(set, w))
        .collect()
}

/// Fits over the ladder tails `ladder[j..]`, coarse end moving finer, for
/// every tail with at least 3 scales.
pub fn refined_dimensions<S: BoxCountable + ?Sized>(
    set: &S,
    ladder: &[f64],
) -> Result<Vec<DimensionFit>> {
    if ladder.len() < 3 {
        return Err(Error::TooFewScales {
            needed: 3,
            got: ladder.len(),
        });
    }
    (0..=ladder.len() - 3)
        .map(|j| box_dimension(set, &ladder[j..]))
        .collect()
}

/// `base^{-k}` for `k` in `lo..=hi`.
pub fn geometric_ladder(base: f64, lo: u32, hi: u32) -> Vec<f64> {
    (lo..=hi).map(|k| base.powi(-(k as i32))).collect()
}
