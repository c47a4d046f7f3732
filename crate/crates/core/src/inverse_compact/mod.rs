//! Compact initial data collapsing onto a prescribed measure on a null set.
//!
//! Given a compact `K₁ ⊂ [c, d]` of zero length and a measure `μ₁` on it
//! with total mass `2L`, every gap `(a_j, b_j)` of `K₁` is assigned the
//! velocity `v_j = L - μ₁((-∞, m_j])` at its midpoint `m_j` and moved back
//! by that velocity. The hull `[c - L, d + L]` minus the moved gaps is `K₀`.
//! Under the patch flow, `K₀` collapses at `t = 1` through the limit map
//! `X₁(x) = x + v(x)` and `(X₁)_# (Lebesgue on K₀) = μ₁`.
//!
//! Only finitely many gaps can be enumerated. [`GapTruncation`] selects how
//! the unresolved cells of `K₁` are treated at a finite depth.

pub mod cantor;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::velocity;
use crate::interval::{normalize, CompactSet, Interval, IntervalUnion};
use crate::inverse_open::inverse_open;
use crate::skeleton::{Atom, AtomicMeasure};

pub use cantor::{CantorMeasure, MiddleCantor};

/// A finite measure on a hull, known through its CDF.
pub trait CdfMeasure {
    fn hull(&self) -> Interval;
    fn total_mass(&self) -> f64;
    /// `μ((-∞, x])`.
    fn cdf(&self, x: f64) -> f64;
    /// Largest mass a cell the oracle does not resolve can carry.
    fn modulus(&self) -> f64;
}

/// Enumerates the open gaps of a compact set, coarse to fine.
pub trait GapGenerator {
    fn hull(&self) -> Interval;
    /// Gaps produced by the first `depth` refinement levels.
    fn gaps(&self, depth: u32) -> IntervalUnion;

    /// Length of the hull not covered by the gaps at `depth`.
    fn residual(&self, depth: u32) -> f64 {
        self.hull().length() - self.gaps(depth).measure()
    }
}

/// A fixed compact set enumerates all of its gaps at every depth.
impl GapGenerator for CompactSet {
    fn hull(&self) -> Interval {
        CompactSet::hull(self)
    }

    fn gaps(&self, _depth: u32) -> IntervalUnion {
        CompactSet::gaps(self).clone()
    }
}

/// Any monotone CDF oracle on a hull.
pub struct OracleMeasure<F> {
    hull: Interval,
    total_mass: f64,
    cdf: F,
    modulus: f64,
}

impl<F: Fn(f64) -> f64> OracleMeasure<F> {
    pub fn new(hull: Interval, total_mass: f64, cdf: F, modulus: f64) -> Result<Self> {
        if !(total_mass.is_finite() && total_mass > 0.0) {
            return Err(Error::InvalidMeasure(format!(
                "total mass {total_mass} must be positive"
            )));
        }
        if !(modulus.is_finite() && modulus >= 0.0) {
            return Err(Error::InvalidMeasure(format!(
                "modulus {modulus} must be >= 0"
            )));
        }
        Ok(Self {
            hull,
            total_mass,
            cdf,
            modulus,
        })
    }
}

impl<F: Fn(f64) -> f64> CdfMeasure for OracleMeasure<F> {
    fn hull(&self) -> Interval {
        self.hull
    }

    fn total_mass(&self) -> f64 {
        self.total_mass
    }

    fn cdf(&self, x: f64) -> f64 {
        (self.cdf)(x)
    }

    fn modulus(&self) -> f64 {
        self.modulus
    }
}

/// Velocity assigned to a gap of `K₁`: `L - μ₁((-∞, m])` at the gap midpoint.
pub fn gap_velocity<M: CdfMeasure + ?Sized>(mu: &M, gap: &Interval) -> Result<f64> {
    let hull = mu.hull();
    if !(hull.left() < gap.left() && gap.right() < hull.right()) {
        return Err(Error::GapOutsideHull {
            left: gap.left(),
            right: gap.right(),
            lo: hull.left(),
            hi: hull.right(),
        });
    }
    let at_mid = mu.cdf(gap.midpoint());
    // probe inside the gap; oracles may round at the endpoints themselves
    let inner = gap.left() + 0.25 * gap.length();
    if (at_mid - mu.cdf(inner)).abs() > mu.modulus() + 1e-12 * mu.total_mass() {
        return Err(Error::InvalidMeasure(format!(
            "measure charges the gap {gap}; cdf is not constant there"
        )));
    }
    Ok(0.5 * mu.total_mass() - at_mid)
}

/// How the cells of `K₁` left unresolved at a finite depth are handled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GapTruncation {
    /// Collapse every unresolved cell to its midpoint, carrying the cell's
    /// `μ₁` mass. The truncated `K₁` is then a finite null set and the
    /// construction is exact for it: `|K₀| = 2L` and the pushforward CDF
    /// agrees with `μ₁` at every retained gap endpoint.
    #[default]
    CollapseCells,
    /// Keep the cells as solid intervals and move only the retained gaps.
    /// `K₀` then has the extra length of the cells (`|K₀| = 2L + residual`)
    /// and its limit measure is distorted by that surplus.
    Literal,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapVelocity {
    pub gap: Interval,
    pub velocity: f64,
}

/// Result of [`inverse_compact`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CompactPreimage {
    /// The constructed `K₀`.
    pub set: CompactSet,
    /// Retained gaps of `K₁` with their velocities.
    pub gap_velocities: Vec<GapVelocity>,
    pub truncation: GapTruncation,
    /// Half the target mass.
    pub half_mass: f64,
    /// Length of the hull of `K₁` not covered by retained gaps.
    pub residual_length: f64,
    /// Largest `μ₁` mass of an unresolved cell.
    pub max_cell_mass: f64,
}

/// Build `K₀` from the first `depth` levels of gaps of `K₁` and the
/// measure `mu`.
pub fn inverse_compact<G, M>(
    generator: &G,
    mu: &M,
    depth: u32,
    truncation: GapTruncation,
) -> Result<CompactPreimage>
where
    G: GapGenerator + ?Sized,
    M: CdfMeasure + ?Sized,
{
    let hull = generator.hull();
    let mh = mu.hull();
    let tol = 1e-12 * hull.length().max(1.0);
    if (hull.left() - mh.left()).abs() > tol || (hull.right() - mh.right()).abs() > tol {
        return Err(Error::InvalidParameter(format!(
            "set hull {hull} differs from measure hull {mh}"
        )));
    }
    let total = mu.total_mass();
    let half = 0.5 * total;

    let gaps = generator.gaps(depth);
    let gap_velocities = gaps
        .iter()
        .map(|g| gap_velocity(mu, g).map(|velocity| GapVelocity { gap: *g, velocity }))
        .collect::<Result<Vec<_>>>()?;

    let cells = CompactSet::new(hull, gaps.clone())?.components();
    // cell masses from the cdf at the gap midpoints around each cell
    let mut cell_masses = Vec::with_capacity(cells.len());
    let mut below = 0.0;
    for gv in &gap_velocities {
        let upto = half - gv.velocity;
        cell_masses.push(upto - below);
        below = upto;
    }
    cell_masses.push(total - below);
    let max_cell_mass = cell_masses.iter().copied().fold(0.0, f64::max);
    let residual_length = hull.length() - gaps.measure();

    let set = match truncation {
        GapTruncation::Literal => {
            let moved = gap_velocities
                .iter()
                .map(|gv| Interval::new(gv.gap.left() - gv.velocity, gv.gap.right() - gv.velocity))
                .collect::<Result<Vec<_>>>()?;
            let k0_hull = Interval::new(hull.left() - half, hull.right() + half)?;
            if let Some(first) = moved.first() {
                if first.left() <= k0_hull.left() {
                    return Err(Error::OverlappingGaps { index: 0 });
                }
            }
            if let Some(last) = moved.last() {
                if last.right() >= k0_hull.right() {
                    return Err(Error::OverlappingGaps {
                        index: moved.len() - 1,
                    });
                }
            }
            if let Some(i) = moved.windows(2).position(|w| w[0].right() >= w[1].left()) {
                return Err(Error::OverlappingGaps { index: i });
            }
            CompactSet::new(k0_hull, normalize(moved))?
        }
        GapTruncation::CollapseCells => {
            let atoms = cells
                .iter()
                .zip(&cell_masses)
                .map(|(cell, &mass)| Atom::new(cell.midpoint(), mass))
                .collect::<Vec<_>>();
            let collapsed = AtomicMeasure::new(atoms).map_err(|e| {
                Error::InvalidMeasure(format!("cells of K1 must all carry mass ({e})"))
            })?;
            let pre = inverse_open(&collapsed);
            if let Some(&i) = pre.degenerate.first() {
                return Err(Error::OverlappingGaps { index: i });
            }
            CompactSet::closure_of(&pre.set)?
        }
    };

    Ok(CompactPreimage {
        set,
        gap_velocities,
        truncation,
        half_mass: half,
        residual_length,
        max_cell_mass,
    })
}

/// `X₁(x) = x + v(x)` with `v` generated by `k0`.
///
/// Equals `x + L` left of the hull and `x - L` right of it, with `2L = |K₀|`.
pub fn limit_map(k0: &CompactSet, x: f64) -> f64 {
    x + velocity(k0, x)
}

/// Coordinate tolerance of the fiber bisection.
pub const BISECTION_TOL: f64 = 1e-12;

/// Bracket `[lower, upper]` of the fiber `X₁⁻¹(y)`.
///
/// The fiber is a point or a closed interval. `lower` approaches its infimum
/// from below and `upper` its supremum from above, each to within
/// [`BISECTION_TOL`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Fiber {
    pub lower: f64,
    pub upper: f64,
}

pub fn fiber(k0: &CompactSet, y: f64) -> Fiber {
    let hull = k0.hull();
    let half = 0.5 * k0.measure();
    // X₁ is only monotone up to rounding on the pieces where it is flat
    let slack = 1e-12 * (1.0 + y.abs() + hull.left().abs() + hull.right().abs() + half);
    let lo = hull.left().min(y - half) - 1.0;
    let hi = hull.right().max(y + half) + 1.0;

    let upper = bisect(lo, hi, |x| limit_map(k0, x) <= y + slack).1;
    let lower = bisect(lo, hi, |x| limit_map(k0, x) < y - slack).0;
    Fiber { lower, upper }
}

// `left_side` holds at `lo` and fails at `hi`; shrink onto the switch point.
fn bisect(mut lo: f64, mut hi: f64, left_side: impl Fn(f64) -> bool) -> (f64, f64) {
    while hi - lo > BISECTION_TOL {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if left_side(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    (lo, hi)
}

/// `((X₁)_# μ₀)((-∞, y])` with `μ₀` Lebesgue measure on `k0`.
pub fn pushforward_cdf(k0: &CompactSet, y: f64) -> f64 {
    k0.mass_left_of(fiber(k0, y).upper)
}

/// The pushforward measure written out: every piece of `k0` collapses to one
/// point under `X₁`, carrying the piece's length.
pub fn limit_measure(k0: &CompactSet) -> AtomicMeasure {
    let atoms = k0
        .components()
        .into_iter()
        .filter(|c| c.length() > 0.0)
        .map(|c| Atom::new(limit_map(k0, c.midpoint()), c.length()))
        .collect();
    AtomicMeasure::from_computed(atoms)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PushforwardPoint {
    pub y: f64,
    pub pushforward: f64,
    pub target: f64,
    pub error: f64,
}

/// Comparison of the pushforward CDF against the target CDF at every
/// retained gap endpoint.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PushforwardReport {
    pub points: Vec<PushforwardPoint>,
    pub max_error: f64,
    /// Largest unresolved cell mass plus the oracle modulus plus `1e-9`.
    pub tolerance: f64,
    pub passed: bool,
}

pub fn verify_pushforward<M: CdfMeasure + ?Sized>(
    pre: &CompactPreimage,
    mu: &M,
) -> PushforwardReport {
    let mut points = Vec::with_capacity(2 * pre.gap_velocities.len());
    for gv in &pre.gap_velocities {
        for y in [gv.gap.left(), gv.gap.right()] {
            let pushforward = pushforward_cdf(&pre.set, y);
            let target = mu.cdf(y);
            points.push(PushforwardPoint {
                y,
                pushforward,
                target,
                error: (pushforward - target).abs(),
            });
        }
    }
    let max_error = points.iter().map(|p| p.error).fold(0.0, f64::max);
    let tolerance = pre.max_cell_mass + mu.modulus() + 1e-9;
    PushforwardReport {
        passed: max_error <= tolerance,
        points,
        max_error,
        tolerance,
    }
}
