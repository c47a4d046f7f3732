use serde::Serialize;
use skelflow::analysis::{
    box_dimension, geometric_ladder, refined_dimensions, DimensionFit, PointSet,
};
use skelflow::inverse_compact::{inverse_compact, limit_measure, verify_pushforward, GapGenerator};
use skelflow::measures::convergence_table;
use skelflow::oracle::{cluster, default_dt, discretize, integrate};
use skelflow::skeleton::SkeletonReport;
use skelflow::{evolve, inverse_open, skeleton, AtomicMeasure, FlowSnapshot, IntervalUnion};

use crate::config::{Config, MeasureSpec};
use crate::error::CliError;
use crate::output::{fmt_f64, Sink};

fn open_set(cfg: &Config, sink: &mut Sink) -> Result<IntervalUnion, CliError> {
    let tr = cfg.open_set()?;
    sink.residual.dropped_intervals = tr.dropped_intervals;
    sink.residual.dropped_mass = tr.dropped_mass;
    Ok(tr.value)
}

#[derive(Serialize)]
struct EvolveResult {
    initial_mass: f64,
    snapshots: Vec<FlowSnapshot<IntervalUnion>>,
}

pub fn evolve_cmd(cfg: &Config, sink: &mut Sink) -> Result<(), CliError> {
    let set = open_set(cfg, sink)?;
    let snapshots = cfg
        .t_grid
        .iter()
        .map(|&t| evolve(&set, t))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows = Vec::new();
    for s in &snapshots {
        for (i, iv) in s.support.iter().enumerate() {
            rows.push(vec![
                fmt_f64(s.t),
                i.to_string(),
                fmt_f64(iv.left()),
                fmt_f64(iv.right()),
                fmt_f64(s.density),
            ]);
        }
    }
    sink.csv(
        "evolve.csv",
        &["t", "interval", "left", "right", "density"],
        &rows,
    )?;
    if cfg.outputs.plot {
        sink.plot_script("evolve.csv", "t", "left", Some("interval"))?;
    }
    sink.json(
        "evolve.json",
        &EvolveResult {
            initial_mass: set.measure(),
            snapshots,
        },
    )
}

pub fn skeleton_cmd(cfg: &Config, sink: &mut Sink) -> Result<(), CliError> {
    let set = open_set(cfg, sink)?;
    let report = SkeletonReport::compute(&set)?;
    let rows: Vec<Vec<String>> = report
        .atoms
        .atoms()
        .iter()
        .map(|a| vec![fmt_f64(a.x), fmt_f64(a.mass)])
        .collect();
    sink.csv("skeleton.csv", &["x", "mass"], &rows)?;
    if cfg.outputs.plot {
        sink.plot_script("skeleton.csv", "x", "mass", None)?;
    }
    sink.json("skeleton.json", &report)
}

#[derive(Serialize)]
struct InverseOpenResult {
    set: IntervalUnion,
    degenerate: Vec<usize>,
    /// Largest position or mass deviation of `skeleton(set)` from the input.
    round_trip_error: f64,
}

pub fn inverse_open_cmd(cfg: &Config, sink: &mut Sink) -> Result<(), CliError> {
    let mu = cfg.atoms()?;
    let pre = inverse_open(&mu);
    let back = skeleton(&pre.set)?;
    let round_trip_error = if back.len() == mu.len() {
        back.atoms()
            .iter()
            .zip(mu.atoms())
            .map(|(a, b)| (a.x - b.x).abs().max((a.mass - b.mass).abs()))
            .fold(0.0, f64::max)
    } else {
        f64::INFINITY
    };
    let rows: Vec<Vec<String>> = pre
        .set
        .iter()
        .map(|iv| vec![fmt_f64(iv.left()), fmt_f64(iv.right())])
        .collect();
    sink.csv("inverse_open.csv", &["left", "right"], &rows)?;
    let tol =
        1e-12 * (1.0 + mu.total_mass() + mu.atoms().iter().map(|a| a.x.abs()).fold(0.0, f64::max));
    let passed = !pre.is_invertible() || round_trip_error <= tol;
    sink.json(
        "inverse_open.json",
        &InverseOpenResult {
            set: pre.set,
            degenerate: pre.degenerate,
            round_trip_error: if round_trip_error.is_finite() {
                round_trip_error
            } else {
                -1.0
            },
        },
    )?;
    if passed {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "round trip error {round_trip_error:e} exceeds {tol:e}"
        )))
    }
}

fn compact(
    cfg: &Config,
    sink: &mut Sink,
) -> Result<(skelflow::CompactPreimage, skelflow::CantorMeasure), CliError> {
    let (set, mu) = cfg.cantor()?;
    let pre = inverse_compact(&set, &mu, cfg.depth, cfg.truncation)?;
    sink.residual.residual_length = set.residual(cfg.depth);
    sink.residual.unresolved_mass = pre.max_cell_mass;
    Ok((pre, mu))
}

pub fn inverse_compact_cmd(cfg: &Config, sink: &mut Sink) -> Result<(), CliError> {
    let (pre, _) = compact(cfg, sink)?;
    let rows: Vec<Vec<String>> = pre
        .gap_velocities
        .iter()
        .map(|g| {
            vec![
                fmt_f64(g.gap.left()),
                fmt_f64(g.gap.right()),
                fmt_f64(g.velocity),
            ]
        })
        .collect();
    sink.csv("gap_velocities.csv", &["left", "right", "velocity"], &rows)?;
    if cfg.outputs.plot {
        sink.plot_script("gap_velocities.csv", "left", "velocity", None)?;
    }
    sink.json("inverse_compact.json", &pre)
}

pub fn verify_pushforward_cmd(cfg: &Config, sink: &mut Sink) -> Result<(), CliError> {
    let (pre, mu) = compact(cfg, sink)?;
    let report = verify_pushforward(&pre, &mu);
    let rows: Vec<Vec<String>> = report
        .points
        .iter()
        .map(|p| {
            vec![
                fmt_f64(p.y),
                fmt_f64(p.pushforward),
                fmt_f64(p.target),
                fmt_f64(p.error),
            ]
        })
        .collect();
    sink.csv(
        "pushforward.csv",
        &["y", "pushforward", "target", "error"],
        &rows,
    )?;
    if cfg.outputs.plot {
        sink.plot_script("pushforward.csv", "y", "pushforward", None)?;
    }
    sink.json("pushforward.json", &report)?;
    if report.passed {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "pushforward error {:e} exceeds tolerance {:e}",
            report.max_error, report.tolerance
        )))
    }
}

#[derive(Serialize)]
struct OracleResult {
    particles: usize,
    weight: f64,
    t_final: f64,
    dt: f64,
    scheme: skelflow::Scheme,
    linear_fit_residual: f64,
    clusters: AtomicMeasure,
    skeleton: AtomicMeasure,
    max_position_error: Option<f64>,
    max_mass_error: Option<f64>,
}

pub fn oracle_cmd(cfg: &Config, sink: &mut Sink) -> Result<(), CliError> {
    let set = open_set(cfg, sink)?;
    let p = discretize(&set, cfg.particles)?;
    let dt = cfg.dt.unwrap_or_else(|| default_dt(cfg.t_final));
    let tr = integrate(&p, dt, cfg.t_final, cfg.scheme)?;
    let clusters = cluster(tr.final_positions(), p.weight(), cfg.cluster_tol)?;
    let exact = skeleton(&set)?;
    let (pos, mass) = if clusters.len() == exact.len() {
        let (mut pos, mut mass) = (0.0f64, 0.0f64);
        for (a, b) in clusters.atoms().iter().zip(exact.atoms()) {
            pos = pos.max((a.x - b.x).abs());
            mass = mass.max((a.mass - b.mass).abs());
        }
        (Some(pos), Some(mass))
    } else {
        (None, None)
    };

    let mut rows = Vec::with_capacity(tr.times.len() * p.len());
    for (step, ((t, xs), vs)) in tr
        .times
        .iter()
        .zip(&tr.positions)
        .zip(&tr.velocities)
        .enumerate()
    {
        for (k, (x, v)) in xs.iter().zip(vs).enumerate() {
            rows.push(vec![
                step.to_string(),
                fmt_f64(*t),
                k.to_string(),
                fmt_f64(*x),
                fmt_f64(*v),
            ]);
        }
    }
    sink.csv("oracle.csv", &["step", "t", "particle_id", "x", "v"], &rows)?;
    if cfg.outputs.plot {
        sink.plot_script("oracle.csv", "t", "x", Some("particle_id"))?;
    }
    sink.json(
        "oracle.json",
        &OracleResult {
            particles: p.len(),
            weight: p.weight(),
            t_final: cfg.t_final,
            dt,
            scheme: cfg.scheme,
            linear_fit_residual: tr.linear_fit_residual(),
            clusters,
            skeleton: exact,
            max_position_error: pos,
            max_mass_error: mass,
        },
    )
}

#[derive(Serialize)]
struct DimensionResult {
    source: &'static str,
    points: usize,
    theoretical: f64,
    fit: DimensionFit,
    /// Estimates over the ladder tails, coarse end moving finer.
    refined: Vec<f64>,
}

pub fn dimension_cmd(cfg: &Config, sink: &mut Sink) -> Result<(), CliError> {
    let (source, points, theoretical, default_ladder) = match &cfg.measure {
        MeasureSpec::Cantor(_) => {
            let (set, _) = cfg.cantor()?;
            let (pre, _) = compact(cfg, sink)?;
            let pts = PointSet::from(&limit_measure(&pre.set));
            let base = 1.0 / set.ratio();
            let hi = cfg.depth.saturating_sub(3);
            let ladder: Vec<f64> = geometric_ladder(base, 2, hi.max(2))
                .into_iter()
                .map(|e| e * set.hull().length())
                .collect();
            ("compact-skeleton", pts, set.dimension(), ladder)
        }
        MeasureSpec::Atoms(_) => {
            let mu = cfg.atoms()?;
            (
                "atoms",
                PointSet::from(&mu),
                0.0,
                geometric_ladder(2.0, 0, 20),
            )
        }
    };
    let ladder = cfg.ladder.clone().unwrap_or(default_ladder);
    let fit = box_dimension(&points, &ladder)?;
    let refined = refined_dimensions(&points, &ladder)?
        .into_iter()
        .map(|f| f.estimate)
        .collect();
    let rows: Vec<Vec<String>> = fit
        .counts
        .iter()
        .map(|c| vec![fmt_f64(c.eps), c.count.to_string()])
        .collect();
    sink.csv("dimension.csv", &["eps", "count"], &rows)?;
    if cfg.outputs.plot {
        sink.plot_script("dimension.csv", "eps", "count", None)?;
    }
    sink.json(
        "dimension.json",
        &DimensionResult {
            source,
            points: points.points().len(),
            theoretical,
            fit,
            refined,
        },
    )
}

pub fn converge_cmd(cfg: &Config, sink: &mut Sink) -> Result<(), CliError> {
    let set = open_set(cfg, sink)?;
    let fs: Vec<(String, skelflow::Polynomial)> = cfg
        .test_functions
        .iter()
        .map(|f| (f.id.clone(), f.coefficients.clone()))
        .collect();
    let ks: Vec<u32> = (1..=cfg.k_max).collect();
    let rows = convergence_table(&set, &fs, &ks)?;
    let csv_rows: Vec<Vec<String>> = rows
        .iter()
        .map(|r| {
            vec![
                r.k.to_string(),
                fmt_f64(r.t),
                r.f_id.clone(),
                fmt_f64(r.pairing),
                fmt_f64(r.limit),
                fmt_f64(r.error),
                fmt_f64(r.bound),
            ]
        })
        .collect();
    sink.csv(
        "convergence.csv",
        &["k", "t", "f-id", "pairing", "limit", "error", "bound"],
        &csv_rows,
    )?;
    if cfg.outputs.plot {
        sink.plot_script("convergence.csv", "k", "error", Some("f-id"))?;
    }
    sink.json("convergence.json", &rows)?;
    let violations = rows.iter().filter(|r| r.error > r.bound).count();
    if violations == 0 {
        Ok(())
    } else {
        Err(CliError::Verification(format!(
            "{violations} rows exceed the weak-error bound"
        )))
    }
}
