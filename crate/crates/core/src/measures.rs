//! Pairings of polynomial test functions with the evolving patch and its
//! limit measure.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::flow::{evolve, FlowSnapshot};
use crate::interval::{IntervalUnion, Patch};
use crate::skeleton::{skeleton, AtomicMeasure};

/// Highest supported degree.
pub const MAX_DEGREE: usize = 8;

/// `f(x) = Σ_k coefficients[k] x^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Polynomial {
    coefficients: Vec<f64>,
}

impl Polynomial {
    pub fn new(coefficients: Vec<f64>) -> Result<Self> {
        if coefficients.len() > MAX_DEGREE + 1 {
            return Err(Error::InvalidParameter(format!(
                "degree {} exceeds {MAX_DEGREE}",
                coefficients.len() - 1
            )));
        }
        if let Some(c) = coefficients.iter().find(|c| !c.is_finite()) {
            return Err(Error::NonFinite(*c));
        }
        Ok(Self { coefficients })
    }

    /// `x^k`.
    pub fn monomial(k: usize) -> Result<Self> {
        let mut c = vec![0.0; k + 1];
        c[k] = 1.0;
        Self::new(c)
    }

    /// Degree-8 Taylor polynomial of `cos` at 0.
    pub fn cos_surrogate() -> Self {
        let mut c = vec![0.0; 9];
        let mut fact = 1.0;
        for (k, ck) in c.iter_mut().enumerate() {
            if k > 0 {
                fact *= k as f64;
            }
            if k % 2 == 0 {
                *ck = if k % 4 == 0 { 1.0 } else { -1.0 } / fact;
            }
        }
        Self { coefficients: c }
    }

    pub fn coefficients(&self) -> &[f64] {
        &self.coefficients
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.coefficients
            .iter()
            .rev()
            .fold(0.0, |acc, &c| acc * x + c)
    }

    pub fn derivative(&self) -> Self {
        let coefficients = self
            .coefficients
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| k as f64 * c)
            .collect();
        Self { coefficients }
    }

    /// Coefficients of `u ↦ f(m + u)`.
    fn shifted(&self, m: f64) -> Vec<f64> {
        let mut c = self.coefficients.clone();
        let n = c.len();
        // repeated synthetic division by (x - m)
        for i in 0..n {
            for j in (i..n - 1).rev() {
                c[j] += m * c[j + 1];
            }
        }
        c
    }

    /// Average of `f` over `[a, b]`; `f((a + b) / 2)` when `a == b`.
    ///
    /// Expands around the midpoint, so only even powers of the half-width
    /// enter and short intervals far from the origin lose no precision.
    pub fn mean_over(&self, a: f64, b: f64) -> f64 {
        let m = 0.5 * (a + b);
        let h = 0.5 * (b - a);
        let h2 = h * h;
        let c = self.shifted(m);
        let mut acc = 0.0;
        let mut hk = 1.0;
        for (k, &ck) in c.iter().enumerate().step_by(2) {
            acc += ck * hk / (k + 1) as f64;
            hk *= h2;
        }
        acc
    }

    /// `∫_a^b f`.
    pub fn integrate(&self, a: f64, b: f64) -> f64 {
        (b - a) * self.mean_over(a, b)
    }

    /// `max |f'|` on `[lo, hi]`, sampled at `10⁴` points plus the endpoints.
    pub fn lipschitz_on(&self, lo: f64, hi: f64) -> f64 {
        const SAMPLES: usize = 10_000;
        let d = self.derivative();
        let mut best = d.eval(lo).abs().max(d.eval(hi).abs());
        for i in 0..SAMPLES {
            let x = lo + (hi - lo) * (i as f64 + 0.5) / SAMPLES as f64;
            best = best.max(d.eval(x).abs());
        }
        best
    }
}

impl TryFrom<Vec<f64>> for Polynomial {
    type Error = Error;

    fn try_from(c: Vec<f64>) -> Result<Self> {
        Polynomial::new(c)
    }
}

impl From<Polynomial> for Vec<f64> {
    fn from(p: Polynomial) -> Self {
        p.coefficients
    }
}

/// `⟨f, μ_t⟩ = density · ∫_{support} f`.
pub fn pair_snapshot<S: Patch>(f: &Polynomial, snap: &FlowSnapshot<S>) -> f64 {
    snap.support
        .pieces()
        .iter()
        .map(|p| snap.density * p.length() * f.mean_over(p.lo(), p.hi()))
        .sum()
}

/// `Σ c_i f(x_i)`.
pub fn pair_atoms(f: &Polynomial, mu: &AtomicMeasure) -> f64 {
    mu.atoms().iter().map(|a| a.mass * f.eval(a.x)).sum()
}

/// `|⟨f, μ_t⟩ - ⟨f, μ₁⟩|` for `t ∈ [0, 1)`.
pub fn weak_error(omega: &IntervalUnion, f: &Polynomial, t: f64) -> Result<f64> {
    let snap = evolve(omega, t)?;
    let limit = skeleton(omega)?;
    Ok((pair_snapshot(f, &snap) - pair_atoms(f, &limit)).abs())
}

/// `Lip(f) (1 - t) Σ |I_i|²` with `Lip(f)` taken on the hull widened by `L`.
pub fn weak_error_bound(omega: &IntervalUnion, f: &Polynomial, t: f64) -> Result<f64> {
    let hull = omega.hull()?;
    let half = 0.5 * omega.measure();
    let lip = f.lipschitz_on(hull.left() - half, hull.right() + half);
    let sq: f64 = omega.iter().map(|i| i.length() * i.length()).sum();
    Ok(lip * (1.0 - t) * sq)
}

/// One row of a weak-convergence table on `t_k = 1 - 2^{-k}`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceRow {
    pub k: u32,
    pub t: f64,
    pub f_id: String,
    pub pairing: f64,
    pub limit: f64,
    pub error: f64,
    pub bound: f64,
}

pub fn convergence_table(
    omega: &IntervalUnion,
    fs: &[(String, Polynomial)],
    ks: &[u32],
) -> Result<Vec<ConvergenceRow>> {
    let limit_measure = skeleton(omega)?;
    let mut rows = Vec::with_capacity(fs.len() * ks.len());
    for (id, f) in fs {
        let limit = pair_atoms(f, &limit_measure);
        for &k in ks {
            let t = 1.0 - (-(k as f64)).exp2();
            let snap = evolve(omega, t)?;
            let pairing = pair_snapshot(f, &snap);
            rows.push(ConvergenceRow {
                k,
                t,
                f_id: id.clone(),
                pairing,
                limit,
                error: (pairing - limit).abs(),
                bound: weak_error_bound(omega, f, t)?,
            });
        }
    }
    Ok(rows)
}
