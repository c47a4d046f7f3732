//! Finite unions of disjoint open intervals and compact sets built from them.
//!
//! An [`IntervalUnion`] is always kept in normal form: intervals sorted by
//! their left endpoint with a strictly positive gap between neighbours.
//! Overlapping or touching intervals are merged wherever a union is built,
//! so `(0, 1) ∪ (1, 2)` is stored as `(0, 2)`. Endpoint comparisons are exact
//! floating-point comparisons; nearly touching intervals stay separate.
//!
//! A [`CompactSet`] is a closed hull `[a, b]` with finitely many open gaps
//! removed from its interior.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};

/// Open interval `(left, right)` with `left < right`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct Interval {
    left: f64,
    right: f64,
}

impl Interval {
    pub fn new(left: f64, right: f64) -> Result<Self> {
        finite(left)?;
        finite(right)?;
        if left < right {
            Ok(Self { left, right })
        } else {
            Err(Error::DegenerateInterval { left, right })
        }
    }

    #[inline]
    pub fn left(&self) -> f64 {
        self.left
    }

    #[inline]
    pub fn right(&self) -> f64 {
        self.right
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.right - self.left
    }

    #[inline]
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.left + self.right)
    }

    /// Open-interval membership.
    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.left < x && x < self.right
    }

    pub fn closure(&self) -> ClosedInterval {
        ClosedInterval {
            lo: self.left,
            hi: self.right,
        }
    }
}

impl TryFrom<[f64; 2]> for Interval {
    type Error = Error;

    fn try_from([left, right]: [f64; 2]) -> Result<Self> {
        Interval::new(left, right)
    }
}

impl From<Interval> for [f64; 2] {
    fn from(iv: Interval) -> Self {
        [iv.left, iv.right]
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.left, self.right)
    }
}

/// Closed interval `[lo, hi]`; a single point is allowed.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct ClosedInterval {
    lo: f64,
    hi: f64,
}

impl ClosedInterval {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        finite(lo)?;
        finite(hi)?;
        if lo <= hi {
            Ok(Self { lo, hi })
        } else {
            Err(Error::DegenerateInterval {
                left: lo,
                right: hi,
            })
        }
    }

    #[inline]
    pub fn lo(&self) -> f64 {
        self.lo
    }

    #[inline]
    pub fn hi(&self) -> f64 {
        self.hi
    }

    #[inline]
    pub fn length(&self) -> f64 {
        self.hi - self.lo
    }

    #[inline]
    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lo + self.hi)
    }

    #[inline]
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

impl TryFrom<[f64; 2]> for ClosedInterval {
    type Error = Error;

    fn try_from([lo, hi]: [f64; 2]) -> Result<Self> {
        ClosedInterval::new(lo, hi)
    }
}

impl From<ClosedInterval> for [f64; 2] {
    fn from(iv: ClosedInterval) -> Self {
        [iv.lo, iv.hi]
    }
}

/// Normalized finite union of disjoint open intervals.
///
/// Serialized as a JSON array of `[left, right]` pairs. Deserialization
/// normalizes, so unsorted or overlapping input is accepted.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(from = "Vec<Interval>", into = "Vec<Interval>")]
pub struct IntervalUnion {
    intervals: Vec<Interval>,
    // prefix[i] = total length of intervals[..i]
    prefix: Vec<f64>,
}

/// Sort and merge raw intervals into a normalized union.
pub fn normalize<I>(raw: I) -> IntervalUnion
where
    I: IntoIterator<Item = Interval>,
{
    let mut raw: Vec<Interval> = raw.into_iter().collect();
    raw.sort_by(|a, b| a.left.total_cmp(&b.left));

    let mut merged: Vec<Interval> = Vec::with_capacity(raw.len());
    for iv in raw {
        match merged.last_mut() {
            Some(last) if iv.left <= last.right => {
                if iv.right > last.right {
                    last.right = iv.right;
                }
            }
            _ => merged.push(iv),
        }
    }
    IntervalUnion::from_normalized(merged)
}

impl IntervalUnion {
    pub fn empty() -> Self {
        Self {
            intervals: Vec::new(),
            prefix: vec![0.0],
        }
    }

    /// Validate `(left, right)` pairs and normalize them.
    pub fn from_pairs(pairs: &[(f64, f64)]) -> Result<Self> {
        let raw = pairs
            .iter()
            .map(|&(l, r)| Interval::new(l, r))
            .collect::<Result<Vec<_>>>()?;
        Ok(normalize(raw))
    }

    fn from_normalized(intervals: Vec<Interval>) -> Self {
        let mut prefix = Vec::with_capacity(intervals.len() + 1);
        let mut acc = 0.0;
        prefix.push(acc);
        for iv in &intervals {
            acc += iv.length();
            prefix.push(acc);
        }
        Self { intervals, prefix }
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Interval> {
        self.intervals.iter()
    }

    pub fn len(&self) -> usize {
        self.intervals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Total length.
    pub fn measure(&self) -> f64 {
        *self.prefix.last().unwrap_or(&0.0)
    }

    /// Total length of the intervals strictly before index `i`.
    pub fn mass_before(&self, i: usize) -> f64 {
        self.prefix[i.min(self.intervals.len())]
    }

    /// `|U ∩ (-∞, x)|`.
    pub fn mass_left_of(&self, x: f64) -> f64 {
        let idx = self.intervals.partition_point(|iv| iv.right <= x);
        let mut mass = self.prefix[idx];
        if let Some(iv) = self.intervals.get(idx) {
            if iv.left < x {
                mass += x - iv.left;
            }
        }
        mass
    }

    /// Smallest interval containing the union.
    pub fn hull(&self) -> Result<Interval> {
        match (self.intervals.first(), self.intervals.last()) {
            (Some(first), Some(last)) => Interval::new(first.left, last.right),
            _ => Err(Error::EmptySet),
        }
    }

    pub fn contains(&self, x: f64) -> bool {
        let idx = self.intervals.partition_point(|iv| iv.right <= x);
        self.intervals.get(idx).is_some_and(|iv| iv.contains(x))
    }

    /// The open gaps between consecutive intervals.
    pub fn interior_gaps(&self) -> IntervalUnion {
        let gaps = self
            .intervals
            .windows(2)
            .map(|w| Interval {
                left: w[0].right,
                right: w[1].left,
            })
            .collect();
        IntervalUnion::from_normalized(gaps)
    }

    /// Apply a nondecreasing map to every endpoint and renormalize.
    ///
    /// Fails if the map collapses an interval to a point.
    pub fn map_endpoints<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64,
    {
        let raw = self
            .intervals
            .iter()
            .map(|iv| Interval::new(f(iv.left), f(iv.right)))
            .collect::<Result<Vec<_>>>()?;
        Ok(normalize(raw))
    }

    /// Keep at most `policy.max_intervals` intervals (the longest ones) of
    /// length at least `policy.min_length`.
    pub fn truncate(&self, policy: &Truncation) -> Truncated<IntervalUnion> {
        let mut order: Vec<usize> = (0..self.intervals.len())
            .filter(|&i| self.intervals[i].length() >= policy.min_length)
            .collect();
        if order.len() > policy.max_intervals {
            order.sort_by(|&a, &b| {
                self.intervals[b]
                    .length()
                    .total_cmp(&self.intervals[a].length())
                    .then(a.cmp(&b))
            });
            order.truncate(policy.max_intervals);
            order.sort_unstable();
        }
        let kept: Vec<Interval> = order.iter().map(|&i| self.intervals[i]).collect();
        let value = IntervalUnion::from_normalized(kept);
        Truncated {
            dropped_intervals: self.len() - value.len(),
            dropped_mass: self.measure() - value.measure(),
            value,
        }
    }
}

impl From<Vec<Interval>> for IntervalUnion {
    fn from(raw: Vec<Interval>) -> Self {
        normalize(raw)
    }
}

impl From<IntervalUnion> for Vec<Interval> {
    fn from(u: IntervalUnion) -> Self {
        u.intervals
    }
}

impl<'a> IntoIterator for &'a IntervalUnion {
    type Item = &'a Interval;
    type IntoIter = std::slice::Iter<'a, Interval>;

    fn into_iter(self) -> Self::IntoIter {
        self.intervals.iter()
    }
}

/// Finite stand-in for a countable union.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct Truncation {
    pub max_intervals: usize,
    pub min_length: f64,
}

impl Default for Truncation {
    fn default() -> Self {
        Self {
            max_intervals: 1 << 20,
            min_length: 0.0,
        }
    }
}

/// A truncated value together with what the truncation removed.
#[derive(Debug, Clone, PartialEq)]
pub struct Truncated<T> {
    pub value: T,
    pub dropped_intervals: usize,
    pub dropped_mass: f64,
}

/// Closed hull `[a, b]` minus finitely many open gaps strictly inside it.
///
/// Serialized as `{"hull": [a, b], "gaps": [[l, r], ...]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawCompactSet")]
pub struct CompactSet {
    hull: Interval,
    gaps: IntervalUnion,
}

#[derive(Deserialize)]
struct RawCompactSet {
    hull: Interval,
    gaps: IntervalUnion,
}

impl TryFrom<RawCompactSet> for CompactSet {
    type Error = Error;

    fn try_from(raw: RawCompactSet) -> Result<Self> {
        CompactSet::new(raw.hull, raw.gaps)
    }
}

impl CompactSet {
    pub fn new(hull: Interval, gaps: IntervalUnion) -> Result<Self> {
        for g in &gaps {
            if !(hull.left < g.left && g.right < hull.right) {
                return Err(Error::GapOutsideHull {
                    left: g.left,
                    right: g.right,
                    lo: hull.left,
                    hi: hull.right,
                });
            }
        }
        Ok(Self { hull, gaps })
    }

    /// The full hull with nothing removed.
    pub fn solid(hull: Interval) -> Self {
        Self {
            hull,
            gaps: IntervalUnion::empty(),
        }
    }

    /// Closure of an open union: its hull minus the gaps between intervals.
    pub fn closure_of(u: &IntervalUnion) -> Result<Self> {
        Ok(Self {
            hull: u.hull()?,
            gaps: u.interior_gaps(),
        })
    }

    pub fn hull(&self) -> Interval {
        self.hull
    }

    pub fn gaps(&self) -> &IntervalUnion {
        &self.gaps
    }

    pub fn measure(&self) -> f64 {
        self.hull.length() - self.gaps.measure()
    }

    /// `|K ∩ (-∞, x)|`.
    pub fn mass_left_of(&self, x: f64) -> f64 {
        let clamped = x.clamp(self.hull.left, self.hull.right);
        (clamped - self.hull.left) - self.gaps.mass_left_of(clamped)
    }

    /// Maximal closed pieces of the set, left to right.
    pub fn components(&self) -> Vec<ClosedInterval> {
        let mut out = Vec::with_capacity(self.gaps.len() + 1);
        let mut lo = self.hull.left;
        for g in &self.gaps {
            out.push(ClosedInterval { lo, hi: g.left });
            lo = g.right;
        }
        out.push(ClosedInterval {
            lo,
            hi: self.hull.right,
        });
        out
    }

    /// Length of the shortest gap, if any.
    pub fn min_gap(&self) -> Option<f64> {
        self.gaps
            .iter()
            .map(Interval::length)
            .min_by(f64::total_cmp)
    }

    pub fn map_endpoints<F>(&self, f: F) -> Result<Self>
    where
        F: Fn(f64) -> f64,
    {
        let hull = Interval::new(f(self.hull.left), f(self.hull.right))?;
        let gaps = self.gaps.map_endpoints(&f)?;
        CompactSet::new(hull, gaps)
    }
}

/// A set whose characteristic function is used as a patch density.
pub trait Patch: Sized {
    /// Lebesgue measure of the set.
    fn measure(&self) -> f64;
    /// Lebesgue measure of the set left of `x`.
    fn mass_left_of(&self, x: f64) -> f64;
    fn hull(&self) -> Result<Interval>;
    /// Closed pieces whose union is the closure of the set.
    fn pieces(&self) -> Vec<ClosedInterval>;
    fn map_endpoints<F: Fn(f64) -> f64>(&self, f: F) -> Result<Self>;
}

impl Patch for IntervalUnion {
    fn measure(&self) -> f64 {
        IntervalUnion::measure(self)
    }

    fn mass_left_of(&self, x: f64) -> f64 {
        IntervalUnion::mass_left_of(self, x)
    }

    fn hull(&self) -> Result<Interval> {
        IntervalUnion::hull(self)
    }

    fn pieces(&self) -> Vec<ClosedInterval> {
        self.intervals.iter().map(Interval::closure).collect()
    }

    fn map_endpoints<F: Fn(f64) -> f64>(&self, f: F) -> Result<Self> {
        IntervalUnion::map_endpoints(self, f)
    }
}

impl Patch for CompactSet {
    fn measure(&self) -> f64 {
        CompactSet::measure(self)
    }

    fn mass_left_of(&self, x: f64) -> f64 {
        CompactSet::mass_left_of(self, x)
    }

    fn hull(&self) -> Result<Interval> {
        Ok(self.hull)
    }

    fn pieces(&self) -> Vec<ClosedInterval> {
        self.components()
    }

    fn map_endpoints<F: Fn(f64) -> f64>(&self, f: F) -> Result<Self> {
        CompactSet::map_endpoints(self, f)
    }
}
