//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! nonzero if any criterion fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use skelflow::analysis::{box_dimension, geometric_ladder, refined_dimensions, PointSet};
use skelflow::inverse_compact::{
    fiber, inverse_compact, limit_map, limit_measure, verify_pushforward, CantorMeasure,
    GapTruncation, MiddleCantor,
};
use skelflow::measures::{pair_snapshot, weak_error, weak_error_bound, Polynomial};
use skelflow::oracle::{cluster, default_dt, discretize, integrate, particle_velocity, Scheme};
use skelflow::{
    evolve, inverse_open, skeleton, skeleton_bounds, velocity, Interval, IntervalUnion,
};

use common::{atomic_measures, dyadic, unions, SEED};

struct Outcome {
    name: &'static str,
    passed: bool,
    detail: String,
}

fn outcome(name: &'static str, passed: bool, detail: String) -> Outcome {
    Outcome {
        name,
        passed,
        detail,
    }
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn mass_conservation() -> Outcome {
    let corpus = unions(200, 10, SEED);
    let (per_k, elapsed) = timed(|| {
        let mut per_k = [0.0f64; 21];
        for u in &corpus {
            let m0 = u.measure();
            for k in 1..=20 {
                let s = evolve(u, dyadic(k)).unwrap();
                let e = (s.density_level() * s.support.measure() - m0).abs();
                per_k[k as usize] = per_k[k as usize].max(e);
            }
        }
        per_k
    });
    let worst = per_k.iter().copied().fold(0.0, f64::max);
    let holds_to = (1..=20)
        .take_while(|&k| per_k[k] <= 1e-12)
        .last()
        .unwrap_or(0);
    outcome(
        "mass conservation",
        worst <= 1e-12 && elapsed < Duration::from_secs(1),
        format!(
            "max |ρ_t·|Ω_t| - |Ω₀|| = {worst:.3e} (tol 1e-12), within tol for k <= {holds_to}, {elapsed:.2?} (limit 1 s)"
        ),
    )
}

fn length_contraction() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut count_ok = true;
    for u in &unions(200, 10, SEED) {
        for k in 1..=20 {
            let t = dyadic(k);
            let s = evolve(u, t).unwrap();
            count_ok &= s.support.len() == u.len();
            for (a, b) in s.support.iter().zip(u.iter()) {
                worst = worst.max((a.length() - (1.0 - t) * b.length()).abs());
            }
        }
    }
    outcome(
        "length contraction",
        count_ok && worst <= 1e-12,
        format!("max ||I_i(t)| - (1-t)|I_i|| = {worst:.3e} (tol 1e-12), interval counts kept: {count_ok}"),
    )
}

fn skeleton_containment() -> Outcome {
    let mut outside: f64 = 0.0;
    let mut min_gap = f64::INFINITY;
    let mut mass_err: f64 = 0.0;
    for u in &unions(200, 10, SEED) {
        let mu = skeleton(u).unwrap();
        let b = skeleton_bounds(u).unwrap();
        // bounds recomputed here from the hull and the measure
        let h = u.hull().unwrap();
        let half = 0.5 * u.measure();
        let (lo, hi) = (h.left() + half, h.right() - half);
        assert!((b.lo() - lo).abs() < 1e-12 && (b.hi() - hi).abs() < 1e-12);
        for a in mu.atoms() {
            outside = outside.max(lo - a.x).max(a.x - hi);
        }
        for w in mu.atoms().windows(2) {
            min_gap = min_gap.min(w[1].x - w[0].x);
        }
        mass_err = mass_err.max((mu.total_mass() - u.measure()).abs());
    }
    outcome(
        "skeleton containment and separation",
        outside <= 1e-12 && min_gap > 0.0 && mass_err <= 1e-12,
        format!(
            "max excursion past [a+L, b-L] = {:.3e}, min atom spacing = {min_gap:.3e}, mass error = {mass_err:.3e}",
            outside.max(0.0)
        ),
    )
}

fn open_round_trip() -> Outcome {
    let mut worst: f64 = 0.0;
    let mut flagged = 0;
    let mut count_ok = true;
    for mu in &atomic_measures(200, 10, SEED ^ 1) {
        let pre = inverse_open(mu);
        if !pre.is_invertible() {
            flagged += 1;
            continue;
        }
        let back = skeleton(&pre.set).unwrap();
        count_ok &= back.len() == mu.len();
        for (a, b) in back.atoms().iter().zip(mu.atoms()) {
            worst = worst.max((a.x - b.x).abs()).max((a.mass - b.mass).abs());
        }
    }
    outcome(
        "open round trip",
        count_ok && worst <= 1e-12,
        format!("max position/mass error = {worst:.3e} (tol 1e-12), {flagged} degenerate cases excluded"),
    )
}

fn two_interval_example() -> Outcome {
    let u = IntervalUnion::from_pairs(&[(0.0, 1.0), (2.0, 3.0)]).unwrap();
    let mut notes = Vec::new();
    let mut ok = true;

    let mu = skeleton(&u).unwrap();
    let atoms: Vec<(f64, f64)> = mu.atoms().iter().map(|a| (a.x, a.mass)).collect();
    ok &= atoms == vec![(1.0, 1.0), (2.0, 1.0)];

    let s = evolve(&u, 0.5).unwrap();
    let support: Vec<(f64, f64)> = s.support.iter().map(|i| (i.left(), i.right())).collect();
    ok &= support == vec![(0.5, 1.0), (2.0, 2.5)] && s.density == 2.0;

    let x1 = Polynomial::monomial(1).unwrap();
    let x2 = Polynomial::monomial(2).unwrap();
    let mut first: f64 = 0.0;
    for k in 0..=20 {
        let t = if k == 0 { 0.0 } else { dyadic(k) };
        first = first.max((pair_snapshot(&x1, &evolve(&u, t).unwrap()) - 3.0).abs());
    }
    ok &= first <= 1e-12;
    let second = (pair_snapshot(&x2, &s) - 17.0 / 3.0).abs();
    ok &= second <= 1e-12;
    notes.push(format!(
        "⟨x,μ_t⟩ drift {first:.1e}, ⟨x²,μ_0.5⟩ error {second:.1e}"
    ));

    // particle cross-check at N = 10⁴
    let p = discretize(&u, 10_000).unwrap();
    let w = p.weight();
    let half = integrate(&p, default_dt(0.5), 0.5, Scheme::Rk4).unwrap();
    let xs = half.final_positions();
    let m1: f64 = xs.iter().map(|x| w * x).sum();
    let m2: f64 = xs.iter().map(|x| w * x * x).sum();
    let t_end = 1.0 - 1e-3;
    let late = integrate(&p, default_dt(t_end), t_end, Scheme::Rk4).unwrap();
    let emp = cluster(late.final_positions(), w, 1e-2).unwrap();
    let mut atom_err: f64 = 0.0;
    ok &= emp.len() == 2;
    for (a, b) in emp.atoms().iter().zip(mu.atoms()) {
        atom_err = atom_err.max((a.x - b.x).abs()).max((a.mass - b.mass).abs());
    }
    let particle_err = (m1 - 3.0).abs().max((m2 - 17.0 / 3.0).abs()).max(atom_err);
    ok &= particle_err <= 2e-3;
    notes.push(format!(
        "particle oracle deviation {particle_err:.2e} (tol 2e-3)"
    ));

    outcome("two-interval worked example", ok, notes.join(", "))
}

/// First-order coefficient of the weak error: the pairing over the interval
/// `[x_i - v_i s, x_i - v_i s + |I_i| s]` expands as
/// `f(x_i) + s f'(x_i) (|I_i|/2 - v_i) + O(s²)`.
fn first_order(u: &IntervalUnion, f: &Polynomial) -> f64 {
    let d = f.derivative();
    u.iter()
        .map(|iv| {
            let v = velocity(u, iv.left());
            let x = iv.left() + v;
            iv.length() * d.eval(x) * (0.5 * iv.length() - v)
        })
        .sum()
}

fn weak_convergence() -> Outcome {
    let fs = [
        ("x", Polynomial::monomial(1).unwrap()),
        ("x^2", Polynomial::monomial(2).unwrap()),
        ("x^3", Polynomial::monomial(3).unwrap()),
        ("cos", Polynomial::cos_surrogate()),
    ];
    let corpus = unions(200, 10, SEED);
    let mut violations = 0;
    let mut worst_excess: f64 = 0.0;
    let mut ratio_dev: f64 = 0.0;
    let mut ratio_cases = 0;
    for u in &corpus {
        let sq: f64 = u.iter().map(|i| i.length() * i.length()).sum();
        for (_, f) in &fs {
            let errs: Vec<f64> = (1..=20)
                .map(|k| weak_error(u, f, dyadic(k)).unwrap())
                .collect();
            for (k, e) in (1..=20).zip(&errs) {
                let bound = weak_error_bound(u, f, dyadic(k)).unwrap();
                if *e > bound {
                    violations += 1;
                    worst_excess = worst_excess.max(e / bound);
                }
            }
            // halving is asserted where the first-order term is resolved
            let h = u.hull().unwrap();
            let half = 0.5 * u.measure();
            let lip = f.lipschitz_on(h.left() - half, h.right() + half);
            if first_order(u, f).abs() > 1e-3 * lip * sq {
                ratio_cases += 1;
                for k in 10..16 {
                    let r = errs[k] / errs[k - 1];
                    ratio_dev = ratio_dev.max((r - 0.5).abs());
                }
            }
        }
    }
    outcome(
        "weak convergence rate",
        violations == 0 && ratio_dev <= 0.05,
        format!(
            "bound violations {violations}/{} (worst error/bound {worst_excess:.3}), max |ratio - 0.5| = {ratio_dev:.2e} over {ratio_cases} cases (k = 10..16)",
            corpus.len() * fs.len() * 20
        ),
    )
}

fn cantor_reproduction() -> Outcome {
    let unit = Interval::new(0.0, 1.0).unwrap();
    let set = MiddleCantor::triadic(unit);
    let mu = CantorMeasure::new(set, 2.0, CantorMeasure::DEFAULT_RESOLUTION).unwrap();
    let ((pre, report), elapsed) = timed(|| {
        let pre = inverse_compact(&set, &mu, 8, GapTruncation::CollapseCells).unwrap();
        let report = verify_pushforward(&pre, &mu);
        (pre, report)
    });
    // the g-th gap from the left has exactly g of the 256 cells of mass
    // 2/256 to its left
    let mut v_err: f64 = 0.0;
    let mut y_err: f64 = 0.0;
    for (g, gv) in pre.gap_velocities.iter().enumerate() {
        let below = 2.0 * (g + 1) as f64 / 256.0;
        v_err = v_err.max((gv.velocity - (1.0 - below)).abs());
        for y in [gv.gap.left(), gv.gap.right()] {
            let p = skelflow::pushforward_cdf(&pre.set, y);
            y_err = y_err.max((p - below).abs());
        }
    }
    let tol = 2.0 * 2f64.powi(-8) + 1e-9;
    let symmetric = pre.gap_velocities[127].velocity.abs() < 1e-12
        && (pre.gap_velocities[63].velocity - 0.5).abs() < 1e-12
        && (pre.gap_velocities[191].velocity + 0.5).abs() < 1e-12;
    outcome(
        "Cantor reproduction",
        pre.gap_velocities.len() == 255
            && symmetric
            && v_err <= 1e-12
            && report.max_error <= tol
            && y_err <= tol
            && elapsed < Duration::from_secs(5),
        format!(
            "255 gap velocities, max error vs staircase {v_err:.1e}; pushforward error {:.2e} vs Cantor cdf, {y_err:.2e} vs exact cell count (tol {tol:.4e}); {elapsed:.2?} (limit 5 s)",
            report.max_error
        ),
    )
}

fn fiber_structure() -> Outcome {
    use rand::{Rng, SeedableRng};
    let unit = Interval::new(0.0, 1.0).unwrap();
    let set = MiddleCantor::triadic(unit);
    let mu = CantorMeasure::new(set, 2.0, CantorMeasure::DEFAULT_RESOLUTION).unwrap();
    let k0 = inverse_compact(&set, &mu, 8, GapTruncation::CollapseCells)
        .unwrap()
        .set;
    let mut rng = rand::rngs::StdRng::seed_from_u64(SEED ^ 2);
    let mut ordered = true;
    let mut spread: f64 = 0.0;
    let mut widest: f64 = 0.0;
    for _ in 0..1000 {
        let y: f64 = rng.gen_range(0.0..=1.0);
        let f = fiber(&k0, y);
        ordered &= f.lower <= f.upper;
        let vals: Vec<f64> = (0..=8)
            .map(|j| limit_map(&k0, f.lower + (f.upper - f.lower) * j as f64 / 8.0))
            .collect();
        let (lo, hi) = vals
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &v| {
                (a.min(v), b.max(v))
            });
        spread = spread.max(hi - lo);
        widest = widest.max(f.upper - f.lower);
    }
    outcome(
        "pushforward fiber structure",
        ordered && spread <= 1e-10,
        format!("x⁻ <= x⁺ for all 1000 samples: {ordered}; max variation of X₁ on a fiber {spread:.2e} (tol 1e-10); widest fiber {widest:.3e}"),
    )
}

fn oracle_equivalence() -> Outcome {
    // bit-identical where every position and weight is a dyadic rational
    let mut exact = true;
    for &(l, r) in &[(0.0, 1.0), (-3.0, 5.0), (2.5, 2.75)] {
        let u = IntervalUnion::from_pairs(&[(l, r)]).unwrap();
        for n in [1, 2, 4, 16, 1024, 8192] {
            let p = discretize(&u, n).unwrap();
            let v = p.velocities();
            for (k, &x) in p.positions().iter().enumerate() {
                exact &= v[k] == velocity(&u, x) && particle_velocity(&p, k) == v[k];
            }
        }
    }
    // otherwise the two sides are separate roundings of the same number
    let mut ulps: f64 = 0.0;
    for &(l, r) in &[(0.0, 1.0), (-3.0, 5.0), (0.1, 0.7)] {
        let u = IntervalUnion::from_pairs(&[(l, r)]).unwrap();
        let scale = f64::EPSILON * l.abs().max(r.abs()).max(r - l);
        for n in [3, 7, 1000, 10_000] {
            let p = discretize(&u, n).unwrap();
            let v = p.velocities();
            for (k, &x) in p.positions().iter().enumerate() {
                ulps = ulps.max((v[k] - velocity(&u, x)).abs() / scale);
            }
        }
    }

    let t_end = 1.0 - 1e-3;
    let u = IntervalUnion::from_pairs(&[(0.0, 1.0), (2.0, 3.0)]).unwrap();
    let p = discretize(&u, 10_000).unwrap();
    let tr = integrate(&p, default_dt(t_end), t_end, Scheme::Rk4).unwrap();
    let emp = cluster(tr.final_positions(), p.weight(), 1e-2).unwrap();
    let mu = skeleton(&u).unwrap();
    let mut pos: f64 = 0.0;
    let mut mass_ok = emp.len() == mu.len();
    for (a, b) in emp.atoms().iter().zip(mu.atoms()) {
        pos = pos.max((a.x - b.x).abs());
        mass_ok &= (a.mass - b.mass).abs() <= p.weight() + 1e-12;
    }

    // a wider patch: clusters against the exact centroids of Ω_T
    let wide = IntervalUnion::from_pairs(&[(-4.0, -1.0), (0.0, 0.5), (2.0, 6.0)]).unwrap();
    let p = discretize(&wide, 10_000).unwrap();
    let tr = integrate(&p, default_dt(t_end), t_end, Scheme::Rk4).unwrap();
    let emp = cluster(tr.final_positions(), p.weight(), 1e-2).unwrap();
    let snap = evolve(&wide, t_end).unwrap();
    let mut centroid: f64 = 0.0;
    mass_ok &= emp.len() == snap.support.len();
    for (a, iv) in emp.atoms().iter().zip(snap.support.iter()) {
        centroid = centroid.max((a.x - iv.midpoint()).abs());
    }

    outcome(
        "oracle equivalence",
        exact && ulps <= 4.0 && mass_ok && pos <= 2e-3 && centroid <= 2e-3,
        format!(
            "single-interval velocities bit-identical on dyadic grids: {exact}, within {ulps:.1} ulp otherwise; two-interval clustered skeleton error {pos:.2e} (tol 2e-3), three-interval centroid error {centroid:.2e}, masses within w: {mass_ok}"
        ),
    )
}

fn dimension_distortion() -> Outcome {
    let unit = Interval::new(0.0, 1.0).unwrap();
    let set = MiddleCantor::triadic(unit);
    let mu = CantorMeasure::new(set, 2.0, CantorMeasure::DEFAULT_RESOLUTION).unwrap();
    let k0 = inverse_compact(&set, &mu, 10, GapTruncation::CollapseCells)
        .unwrap()
        .set;
    let sk = PointSet::from(&limit_measure(&k0));
    let fit = box_dimension(&sk, &geometric_ladder(3.0, 2, 7)).unwrap();
    let target = 2f64.ln() / 3f64.ln();
    let cantor_ok = (fit.estimate - target).abs() <= 0.05;

    // estimates over the ladder tails as the coarse end moves finer
    let ladder = geometric_ladder(2.0, 0, 24);
    let mut monotone = 0;
    let mut to_zero = 0;
    let corpus = unions(200, 10, SEED);
    for u in &corpus {
        let fits = refined_dimensions(&skeleton(u).unwrap(), &ladder).unwrap();
        if fits
            .windows(2)
            .all(|w| w[1].estimate <= w[0].estimate + 1e-12)
        {
            monotone += 1;
        }
        if fits.last().unwrap().estimate.abs() < 1e-12 {
            to_zero += 1;
        }
    }
    outcome(
        "dimension distortion",
        cantor_ok && monotone == corpus.len() && to_zero == corpus.len(),
        format!(
            "Cantor skeleton {:.4} vs {target:.4} (tol 0.05); open skeletons monotone {monotone}/{n}, reaching 0 {to_zero}/{n}",
            fit.estimate,
            n = corpus.len()
        ),
    )
}

fn main() -> ExitCode {
    let checks: [fn() -> Outcome; 10] = [
        mass_conservation,
        length_contraction,
        skeleton_containment,
        open_round_trip,
        two_interval_example,
        weak_convergence,
        cantor_reproduction,
        fiber_structure,
        oracle_equivalence,
        dimension_distortion,
    ];
    let mut failed = 0;
    for check in checks {
        let o = check();
        println!(
            "{} {}: {}",
            if o.passed { "PASS" } else { "FAIL" },
            o.name,
            o.detail
        );
        failed += usize::from(!o.passed);
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        checks.len() - failed
    );
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
