//! Particle discretization of the patch, integrated as an ODE system.
//!
//! Each particle carries mass `w` and moves with
//! `v_k = (w / 2) (#{x_j > x_k} - #{x_j < x_k})`. Coincident particles exert
//! no force on each other, so `Σ w v_k = 0` holds exactly.

use serde::{Deserialize, Serialize};

use crate::error::{finite, Error, Result};
use crate::interval::IntervalUnion;
use crate::skeleton::{Atom, AtomicMeasure};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ParticleSystem {
    positions: Vec<f64>,
    weight: f64,
}

impl ParticleSystem {
    /// Positions must be finite and nondecreasing; `weight > 0`.
    pub fn new(positions: Vec<f64>, weight: f64) -> Result<Self> {
        for &x in &positions {
            finite(x)?;
        }
        if positions.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::InvalidParameter(
                "particle positions must be nondecreasing".into(),
            ));
        }
        if !(weight.is_finite() && weight > 0.0) {
            return Err(Error::InvalidParameter(format!(
                "particle weight {weight} must be positive"
            )));
        }
        Ok(Self { positions, weight })
    }

    pub fn positions(&self) -> &[f64] {
        &self.positions
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }

    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    pub fn total_mass(&self) -> f64 {
        self.weight * self.positions.len() as f64
    }

    pub fn velocities(&self) -> Vec<f64> {
        velocities(&self.positions, self.weight)
    }
}

/// `n` cell midpoints distributed over `omega` in proportion to length.
///
/// Interval `i` receives `round(n M_{i+1} / M) - round(n M_i / M)`
/// particles, `M_i` being the mass before it, so every interval is within
/// half a particle of its share.
pub fn discretize(omega: &IntervalUnion, n: usize) -> Result<ParticleSystem> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "particle count must be at least 1".into(),
        ));
    }
    if omega.is_empty() {
        return Err(Error::EmptySet);
    }
    let total = omega.measure();
    let share = |mass: f64| (n as f64 * mass / total).round() as usize;
    let mut positions = Vec::with_capacity(n);
    for (i, iv) in omega.iter().enumerate() {
        let before = share(omega.mass_before(i));
        let after = if i + 1 == omega.len() {
            n
        } else {
            share(omega.mass_before(i + 1))
        };
        let count = after.saturating_sub(before);
        let h = iv.length() / count as f64;
        positions.extend((0..count).map(|j| iv.left() + (j as f64 + 0.5) * h));
    }
    ParticleSystem::new(positions, total / n as f64)
}

/// Velocity of every particle, for positions in any order.
pub fn velocities(positions: &[f64], weight: f64) -> Vec<f64> {
    let n = positions.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| positions[a].total_cmp(&positions[b]));
    let mut out = vec![0.0; n];
    let mut start = 0;
    while start < n {
        let x = positions[order[start]];
        let mut end = start + 1;
        while end < n && positions[order[end]] == x {
            end += 1;
        }
        let v = 0.5 * weight * ((n - end) as f64 - start as f64);
        for &k in &order[start..end] {
            out[k] = v;
        }
        start = end;
    }
    out
}

/// Velocity of particle `k`.
pub fn particle_velocity(p: &ParticleSystem, k: usize) -> f64 {
    let x = p.positions[k];
    let right = p.positions.iter().filter(|&&y| y > x).count();
    let left = p.positions.iter().filter(|&&y| y < x).count();
    0.5 * p.weight * (right as f64 - left as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Euler,
    #[default]
    Rk4,
}

/// Positions and velocities after every step, step 0 being the initial state.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Trajectory {
    pub weight: f64,
    pub times: Vec<f64>,
    pub positions: Vec<Vec<f64>>,
    pub velocities: Vec<Vec<f64>>,
}

impl Trajectory {
    pub fn final_positions(&self) -> &[f64] {
        self.positions.last().map(Vec::as_slice).unwrap_or(&[])
    }

    /// Largest deviation of any particle path from its least-squares line.
    pub fn linear_fit_residual(&self) -> f64 {
        let m = self.times.len() as f64;
        let t_mean = self.times.iter().sum::<f64>() / m;
        let stt: f64 = self.times.iter().map(|t| (t - t_mean).powi(2)).sum();
        let n = self.positions.first().map_or(0, Vec::len);
        let mut worst: f64 = 0.0;
        for k in 0..n {
            let x_mean = self.positions.iter().map(|p| p[k]).sum::<f64>() / m;
            let slope = if stt > 0.0 {
                self.times
                    .iter()
                    .zip(&self.positions)
                    .map(|(t, p)| (t - t_mean) * (p[k] - x_mean))
                    .sum::<f64>()
                    / stt
            } else {
                0.0
            };
            for (t, p) in self.times.iter().zip(&self.positions) {
                let fit = x_mean + slope * (t - t_mean);
                worst = worst.max((p[k] - fit).abs());
            }
        }
        worst
    }
}

/// Step size used when none is given: `t_final / 100`.
pub fn default_dt(t_final: f64) -> f64 {
    t_final / 100.0
}

/// Integrate from `t = 0` to `t_final < 1` with steps of at most `dt`.
///
/// Fails with [`Error::ParticleCrossing`] if two particles change order
/// during a step.
pub fn integrate(p: &ParticleSystem, dt: f64, t_final: f64, scheme: Scheme) -> Result<Trajectory> {
    if !(dt.is_finite() && dt > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "step {dt} must be positive"
        )));
    }
    if !(0.0..1.0).contains(&t_final) {
        return Err(Error::TimeOutOfRange {
            t: t_final,
            allowed: "[0, 1)",
        });
    }
    let w = p.weight;
    let steps = (t_final / dt).ceil().max(0.0) as usize;
    let mut x = p.positions.clone();
    let mut v = velocities(&x, w);
    let mut traj = Trajectory {
        weight: w,
        times: vec![0.0],
        positions: vec![x.clone()],
        velocities: vec![v.clone()],
    };
    let add = |x: &[f64], k: &[f64], h: f64| -> Vec<f64> {
        x.iter().zip(k).map(|(a, b)| a + h * b).collect()
    };
    for step in 1..=steps {
        let t0 = traj.times[step - 1];
        let t1 = if step == steps {
            t_final
        } else {
            step as f64 * dt
        };
        let h = t1 - t0;
        x = match scheme {
            Scheme::Euler => add(&x, &v, h),
            Scheme::Rk4 => {
                let k1 = &v;
                let k2 = velocities(&add(&x, k1, 0.5 * h), w);
                let k3 = velocities(&add(&x, &k2, 0.5 * h), w);
                let k4 = velocities(&add(&x, &k3, h), w);
                x.iter()
                    .enumerate()
                    .map(|(i, xi)| xi + h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]))
                    .collect()
            }
        };
        if let Some(index) = x.windows(2).position(|w| w[1] < w[0]) {
            return Err(Error::ParticleCrossing { step, index });
        }
        v = velocities(&x, w);
        traj.times.push(t1);
        traj.positions.push(x.clone());
        traj.velocities.push(v.clone());
    }
    Ok(traj)
}

/// Group sorted-order neighbours closer than `tol` into atoms of mass
/// `weight × size` at the group mean.
pub fn cluster(positions: &[f64], weight: f64, tol: f64) -> Result<AtomicMeasure> {
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance {tol} must be positive"
        )));
    }
    for &x in positions {
        finite(x)?;
    }
    let mut sorted = positions.to_vec();
    sorted.sort_by(f64::total_cmp);
    let mut atoms = Vec::new();
    let mut group: Vec<f64> = Vec::new();
    let flush = |group: &mut Vec<f64>, atoms: &mut Vec<Atom>| {
        if !group.is_empty() {
            let mean = group.iter().sum::<f64>() / group.len() as f64;
            atoms.push(Atom::new(mean, weight * group.len() as f64));
            group.clear();
        }
    };
    for x in sorted {
        if group.last().is_some_and(|&last| x - last > tol) {
            flush(&mut group, &mut atoms);
        }
        group.push(x);
    }
    flush(&mut group, &mut atoms);
    AtomicMeasure::new(atoms)
}
