//! Patch solutions of the one-dimensional aggregation equation
//! `ρ_t + (ρ v)_x = 0`, `v = -½ sign * ρ`, from indicator initial data up to
//! the collapse time `t = 1`.
//!
//! The forward direction evolves a set with straight characteristics and
//! reads off its limit measure. The inverse direction builds initial sets
//! that collapse onto a prescribed atomic or singular measure.

pub mod analysis;
pub mod error;
pub mod flow;
pub mod interval;
pub mod inverse_compact;
pub mod inverse_open;
pub mod measures;
pub mod oracle;
pub mod skeleton;

pub use analysis::{box_count, box_dimension, BoxCountable, DimensionFit, PointSet};
pub use error::{Error, Result};
pub use flow::{evolve, trajectory, velocity, FlowSnapshot};
pub use interval::{
    normalize, ClosedInterval, CompactSet, Interval, IntervalUnion, Patch, Truncated, Truncation,
};
pub use inverse_compact::{
    inverse_compact, limit_map, pushforward_cdf, CantorMeasure, CdfMeasure, CompactPreimage,
    GapGenerator, GapTruncation, MiddleCantor,
};
pub use inverse_open::{inverse_open, OpenPreimage};
pub use measures::{pair_atoms, pair_snapshot, weak_error, Polynomial};
pub use oracle::{cluster, discretize, integrate, ParticleSystem, Scheme};
pub use skeleton::{skeleton, skeleton_bounds, Atom, AtomicMeasure};
