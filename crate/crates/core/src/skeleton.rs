//! Blow-up skeleton of an open patch.
//!
//! Every interval `(α_i, β_i)` of a normalized union collapses at `t = 1`
//! onto the single point `x_i = α_i + v₀(α_i)`, so the limit measure is
//! `Σ |I_i| δ_{x_i}`.

use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};
use crate::flow::velocity;
use crate::interval::{ClosedInterval, IntervalUnion};

/// Point mass `mass · δ_x`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Atom {
    pub x: f64,
    pub mass: f64,
}

impl Atom {
    pub fn new(x: f64, mass: f64) -> Self {
        Self { x, mass }
    }
}

/// Finite sum of Dirac masses with positions in increasing order.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(try_from = "Vec<Atom>", into = "Vec<Atom>")]
pub struct AtomicMeasure {
    atoms: Vec<Atom>,
}

impl AtomicMeasure {
    /// Atoms must already be sorted by strictly increasing position and
    /// carry strictly positive finite mass.
    pub fn new(atoms: Vec<Atom>) -> Result<Self> {
        for a in &atoms {
            finite(a.x)?;
            if !(a.mass.is_finite() && a.mass > 0.0) {
                return Err(Error::InvalidAtom(format!(
                    "mass {} at x = {} is not strictly positive",
                    a.mass, a.x
                )));
            }
        }
        for w in atoms.windows(2) {
            if w[0].x >= w[1].x {
                return Err(Error::InvalidAtom(format!(
                    "positions {} and {} are not strictly increasing",
                    w[0].x, w[1].x
                )));
            }
        }
        Ok(Self { atoms })
    }

    /// Sort by position, then validate. Duplicate positions are rejected.
    pub fn from_unsorted(mut atoms: Vec<Atom>) -> Result<Self> {
        atoms.sort_by(|a, b| a.x.total_cmp(&b.x));
        Self::new(atoms)
    }

    /// Skip the ordering check; positions are only nondecreasing up to
    /// roundoff. Masses must still be positive.
    pub(crate) fn from_computed(atoms: Vec<Atom>) -> Self {
        debug_assert!(atoms.iter().all(|a| a.mass > 0.0));
        Self { atoms }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn positions(&self) -> Vec<f64> {
        self.atoms.iter().map(|a| a.x).collect()
    }

    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.mass).sum()
    }

    /// Smallest closed interval containing every atom.
    pub fn hull(&self) -> Result<ClosedInterval> {
        match (self.atoms.first(), self.atoms.last()) {
            (Some(first), Some(last)) => ClosedInterval::new(first.x, last.x),
            _ => Err(Error::EmptySet),
        }
    }

    /// `μ((-∞, y])`.
    pub fn cdf(&self, y: f64) -> f64 {
        self.atoms
            .iter()
            .take_while(|a| a.x <= y)
            .map(|a| a.mass)
            .sum()
    }

    /// Indices `i` where atoms `i` and `i + 1` are closer than `tol`.
    pub fn near_coincidences(&self, tol: f64) -> Vec<usize> {
        self.atoms
            .windows(2)
            .enumerate()
            .filter(|(_, w)| w[1].x - w[0].x < tol)
            .map(|(i, _)| i)
            .collect()
    }
}

impl TryFrom<Vec<Atom>> for AtomicMeasure {
    type Error = Error;

    fn try_from(atoms: Vec<Atom>) -> Result<Self> {
        AtomicMeasure::from_unsorted(atoms)
    }
}

impl From<AtomicMeasure> for Vec<Atom> {
    fn from(m: AtomicMeasure) -> Self {
        m.atoms
    }
}

/// Separation below which two skeleton atoms are reported as coincident.
pub const COINCIDENCE_TOL: f64 = 1e-12;

/// Limit measure at the blow-up time: one atom per interval.
///
/// Atoms are never merged, even if roundoff brings two of them together;
/// use [`AtomicMeasure::near_coincidences`] to detect that.
pub fn skeleton(omega: &IntervalUnion) -> Result<AtomicMeasure> {
    if omega.is_empty() {
        return Err(Error::EmptySet);
    }
    let atoms = omega
        .iter()
        .map(|iv| Atom::new(iv.left() + velocity(omega, iv.left()), iv.length()))
        .collect();
    Ok(AtomicMeasure::from_computed(atoms))
}

/// `[a + L, b - L]` where `[a, b]` is the hull and `2L` the measure.
pub fn skeleton_bounds(omega: &IntervalUnion) -> Result<ClosedInterval> {
    let hull = omega.hull()?;
    let half = 0.5 * omega.measure();
    let (lo, hi) = (hull.left() + half, hull.right() - half);
    // a single interval gives lo == hi up to rounding
    ClosedInterval::new(lo.min(hi), hi.max(lo))
}

/// JSON report `{atoms: [{x, mass}], bounds: [lo, hi], near_coincident: [...]}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SkeletonReport {
    pub atoms: AtomicMeasure,
    pub bounds: ClosedInterval,
    pub near_coincident: Vec<usize>,
}

impl SkeletonReport {
    pub fn compute(omega: &IntervalUnion) -> Result<Self> {
        let atoms = skeleton(omega)?;
        let bounds = skeleton_bounds(omega)?;
        let near_coincident = atoms.near_coincidences(COINCIDENCE_TOL);
        Ok(Self {
            atoms,
            bounds,
            near_coincident,
        })
    }
}
