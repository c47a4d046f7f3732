use thiserror::Error;

/// Domain errors raised by the patch, skeleton and measure routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate interval ({left}, {right}): left endpoint must be strictly below right")]
    DegenerateInterval { left: f64, right: f64 },

    #[error("coordinate {0} is not finite")]
    NonFinite(f64),

    #[error("operation requires a nonempty set")]
    EmptySet,

    #[error("time {t} is outside {allowed}")]
    TimeOutOfRange { t: f64, allowed: &'static str },

    #[error("invalid atom: {0}")]
    InvalidAtom(String),

    #[error("gap ({left}, {right}) is not strictly inside the hull [{lo}, {hi}]")]
    GapOutsideHull {
        left: f64,
        right: f64,
        lo: f64,
        hi: f64,
    },

    #[error("translated gaps {index} and {} overlap or leave the hull", index + 1)]
    OverlappingGaps { index: usize },

    #[error("invalid measure: {0}")]
    InvalidMeasure(String),

    #[error("box size {eps} is finer than the set resolves (finest usable scale {finest})")]
    ScaleBeyondDepth { eps: f64, finest: f64 },

    #[error("need at least {needed} ladder scales, got {got}")]
    TooFewScales { needed: usize, got: usize },

    #[error("particles {index} and {} crossed during step {step}", index + 1)]
    ParticleCrossing { step: usize, index: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn finite(x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::NonFinite(x))
    }
}
