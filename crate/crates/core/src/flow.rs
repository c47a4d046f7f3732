//! Exact characteristics of a patch `ρ₀ = χ_S` under the kernel `-½ sign`.
//!
//! The velocity a particle sees never changes along its path, so every
//! characteristic is a straight line `X(α, t) = α + v₀(α) t` and the patch at
//! time `t < 1` is the image of `S` under that map, carrying density
//! `1 / (1 - t)`.

use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};
use crate::interval::Patch;

/// Initial velocity `v₀(x) = ½ (|S ∩ (x, ∞)| - |S ∩ (-∞, x)|)`.
///
/// Equals `+L` left of the set and `-L` right of it, with `2L = |S|`.
pub fn velocity<P: Patch>(patch: &P, x: f64) -> f64 {
    0.5 * patch.measure() - patch.mass_left_of(x)
}

/// Position at time `t ∈ [0, 1]` of the particle that started at `alpha`.
pub fn trajectory<P: Patch>(patch: &P, alpha: f64, t: f64) -> Result<f64> {
    finite(alpha)?;
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::TimeOutOfRange {
            t,
            allowed: "[0, 1]",
        });
    }
    Ok(alpha + velocity(patch, alpha) * t)
}

/// The patch at time `t`: `ρ(·, t) = density · χ_support`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FlowSnapshot<S> {
    pub t: f64,
    pub density: f64,
    pub support: S,
}

impl<S: Patch> FlowSnapshot<S> {
    pub fn density_level(&self) -> f64 {
        self.density
    }

    /// Total mass `density · |support|`.
    pub fn mass(&self) -> f64 {
        self.density * self.support.measure()
    }

    /// Velocity field generated by the evolved density.
    pub fn velocity(&self, x: f64) -> f64 {
        self.density * velocity(&self.support, x)
    }
}

/// Evolve the patch to time `t ∈ [0, 1)`.
///
/// Open intervals and gaps are carried by their endpoint trajectories.
/// `t = 1` is rejected: the density is infinite there and the limit is
/// described by [`crate::skeleton`] or [`crate::inverse_compact::limit_map`].
pub fn evolve<P: Patch>(patch: &P, t: f64) -> Result<FlowSnapshot<P>> {
    if !(0.0..1.0).contains(&t) {
        return Err(Error::TimeOutOfRange {
            t,
            allowed: "[0, 1)",
        });
    }
    let support = if t == 0.0 {
        patch.map_endpoints(|x| x)?
    } else {
        patch.map_endpoints(|x| x + velocity(patch, x) * t)?
    };
    Ok(FlowSnapshot {
        t,
        density: 1.0 / (1.0 - t),
        support,
    })
}

/// One row of a trajectory dump.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryPoint {
    pub alpha: f64,
    pub t: f64,
    pub x: f64,
}

/// Sample `X(α, t)` on the product grid `alphas × times`, alpha-major.
pub fn trajectory_table<P: Patch>(
    patch: &P,
    alphas: &[f64],
    times: &[f64],
) -> Result<Vec<TrajectoryPoint>> {
    let mut out = Vec::with_capacity(alphas.len() * times.len());
    for &alpha in alphas {
        let v = velocity(patch, alpha);
        for &t in times {
            if !(0.0..=1.0).contains(&t) {
                return Err(Error::TimeOutOfRange {
                    t,
                    allowed: "[0, 1]",
                });
            }
            out.push(TrajectoryPoint {
                alpha,
                t,
                x: alpha + v * t,
            });
        }
    }
    Ok(out)
}

/// The dyadic ladder `t_k = 1 - 2^{-k}` for `k = 1..=k_max`.
pub fn dyadic_times(k_max: u32) -> Vec<f64> {
    (1..=k_max).map(|k| 1.0 - (-(k as f64)).exp2()).collect()
}
