//! Scene execution: constants, engine, outputs, report.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use super::raster::{project, rasterize, write_csv, write_pgm};
use super::scene::{MapSpec, Mode, OutputSpec, SceneConfig};
use crate::error::{Error, Result};
use crate::hmodule::PointSet;
use crate::ifs::{
    attractor_chaos, attractor_deterministic, chaos_tolerance, default_burn_in, lipschitz_sampled,
    Contractivity, InvariantBall,
};
use crate::trajectory::{
    backward_attractor_points, backward_attractor_sets, backward_points_tolerance,
    depth_for_tolerance, summability_report, Schedule,
};

const ESTIMATE_SAMPLES: usize = 20_000;
const MAX_DEPTH: usize = 10_000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MapLipschitz {
    pub family: String,
    pub map: usize,
    /// `certified`, `assumed` or `unknown`.
    pub kind: &'static str,
    pub value: Option<f64>,
    /// Sampled estimate for maps without a certificate; not a bound.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub estimate: Option<f64>,
}

/// Constants available without running an engine.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LipschitzReport {
    pub lipschitz: Vec<MapLipschitz>,
    pub s: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub r: f64,
    pub certified: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verdict: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub period_product: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DepthRun {
    pub depth: usize,
    pub points: usize,
    pub tail_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_norm: Option<f64>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub mode: Mode,
    pub lipschitz: Vec<MapLipschitz>,
    pub s: f64,
    #[serde(rename = "M")]
    pub m: f64,
    pub r: f64,
    /// Last Hausdorff step of the deterministic engine.
    pub residual: Option<f64>,
    /// Distance bound to the attractor, largest over all runs.
    pub tail_bound: f64,
    pub iterations: Option<usize>,
    pub dropped_points: usize,
    pub points: usize,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub runs: Vec<DepthRun>,
    pub outputs: Vec<PathBuf>,
}

fn default_box(ball: &InvariantBall, dim: usize) -> Vec<(f64, f64)> {
    let r = if ball.r > 0.0 { ball.r } else { 1.0 };
    vec![(-r, r); dim]
}

/// Lipschitz data of every map plus the invariant ball and, for block
/// schedules, the summability verdict.
pub fn lipschitz_report(cfg: &SceneConfig) -> Result<LipschitzReport> {
    let schedule = cfg.schedule()?;
    let ball = schedule.invariant_ball()?;
    let seed = cfg.engine.seed.unwrap_or(0);
    let mut lipschitz = Vec::new();
    for (name, ifs) in schedule.families() {
        for (i, map) in ifs.maps().iter().enumerate() {
            let (kind, value) = match map.lipschitz() {
                Contractivity::Certified(v) => ("certified", Some(v)),
                Contractivity::Assumed(v) => ("assumed", Some(v)),
                Contractivity::Unknown => ("unknown", None),
            };
            let estimate = if map.affine().is_none() {
                let domain = match &cfg.families[name][i] {
                    MapSpec::ScalarPoly {
                        domain: Some(d), ..
                    } => d.iter().map(|&[lo, hi]| (lo, hi)).collect(),
                    _ => default_box(&ball, map.dim()),
                };
                Some(lipschitz_sampled(map.desc(), &domain, ESTIMATE_SAMPLES, seed)?.value)
            } else {
                None
            };
            lipschitz.push(MapLipschitz {
                family: name.clone(),
                map: i,
                kind,
                value,
                estimate,
            });
        }
    }
    let (verdict, period_product) = if schedule.families().len() > 1 || schedule.period() > 1 {
        let s = summability_report(&schedule, schedule.period())?;
        (Some(s.verdict.as_str()), s.period_product)
    } else {
        (None, None)
    };
    Ok(LipschitzReport {
        lipschitz,
        s: ball.s,
        m: ball.m,
        r: ball.r,
        certified: ball.certified,
        verdict,
        period_product,
    })
}

fn resolve(out_dir: &Path, path: &str) -> PathBuf {
    out_dir.join(path)
}

/// Runs the scene's engine inside a pool of `engine.threads` workers and
/// writes every output below `out_dir`.
pub fn run_scene(cfg: &SceneConfig, out_dir: &Path) -> Result<RunReport> {
    cfg.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(cfg.engine.threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    pool.install(|| run_in_pool(cfg, out_dir))
}

fn run_in_pool(cfg: &SceneConfig, out_dir: &Path) -> Result<RunReport> {
    let constants = lipschitz_report(cfg)?;
    let schedule = cfg.schedule()?;
    let ball = schedule.invariant_ball()?;
    let dim = schedule.dim();
    let e = &cfg.engine;
    let origin = PointSet::singleton(&vec![0.0; dim]);

    let mut residual = None;
    let mut iterations = None;
    let mut runs = Vec::new();
    // depth (0 for stationary engines) -> points
    let mut sets: BTreeMap<usize, PointSet> = BTreeMap::new();
    let mut fallback_depth = 0;
    let tail_bound;

    match e.mode {
        Mode::Deterministic | Mode::Chaos => {
            let ifs = schedule.lookup(1);
            let h = ifs.contraction_factor()?;
            let points = if e.mode == Mode::Deterministic {
                let (set, report) = attractor_deterministic(ifs, &origin, e.tol, e.cell, e.max_iter)?;
                residual = Some(report.residual);
                iterations = Some(report.iterations);
                tail_bound = report.bound;
                set
            } else {
                let burn_in = e.burn_in.unwrap_or_else(|| default_burn_in(h, ball.r, e.cell));
                tail_bound = chaos_tolerance(h, ball.r, burn_in);
                attractor_chaos(ifs, e.samples, burn_in, e.seed.expect("validated"))?
            };
            sets.insert(0, points);
        }
        Mode::BackwardSets | Mode::BackwardPoints => {
            fallback_depth = match e.depth {
                Some(d) => d,
                None => depth_for_tolerance(&schedule, e.tol, MAX_DEPTH)?,
            };
            let mut depths: Vec<usize> = cfg
                .outputs
                .iter()
                .map(|o| o.depth().unwrap_or(fallback_depth))
                .collect();
            if depths.is_empty() {
                depths.push(fallback_depth);
            }
            depths.sort_unstable();
            depths.dedup();
            let mut worst: f64 = 0.0;
            for depth in depths {
                let run = backward_run(&schedule, &origin, depth, cfg)?;
                worst = worst.max(run.1.tail_bound);
                runs.push(run.1);
                sets.insert(depth, run.0);
            }
            tail_bound = worst;
        }
    }

    let mut dropped_points = 0;
    let mut outputs = Vec::new();
    for out in &cfg.outputs {
        let set = &sets[&out.depth().unwrap_or(fallback_depth)];
        let path = resolve(out_dir, out.path());
        if let Some(parent) = path.parent() {
            std::fs::create_dir_all(parent)?;
        }
        match out {
            OutputSpec::Pgm {
                axes,
                width,
                height,
                window,
                ..
            } => {
                let window = window.unwrap_or([-ball.r, ball.r, -ball.r, ball.r]);
                let raster = rasterize(&project(set, axes)?, *width, *height, window)?;
                dropped_points += raster.dropped;
                write_pgm(&raster, &path)?;
            }
            OutputSpec::Csv { axes, .. } => match axes {
                Some(axes) => write_csv(&project(set, axes)?, &path)?,
                None => write_csv(set, &path)?,
            },
        }
        outputs.push(path);
    }

    Ok(RunReport {
        mode: e.mode,
        lipschitz: constants.lipschitz,
        s: constants.s,
        m: constants.m,
        r: constants.r,
        residual,
        tail_bound,
        iterations,
        dropped_points,
        points: sets.values().map(PointSet::len).max().unwrap_or(0),
        runs,
        outputs,
    })
}

fn backward_run(
    schedule: &Schedule,
    origin: &PointSet,
    depth: usize,
    cfg: &SceneConfig,
) -> Result<(PointSet, DepthRun)> {
    let e = &cfg.engine;
    if e.mode == Mode::BackwardSets {
        let (set, report) = backward_attractor_sets(schedule, origin, depth, e.cell)?;
        let run = DepthRun {
            depth,
            points: set.len(),
            tail_bound: report.tail_bound,
            max_norm: Some(report.max_norm),
        };
        Ok((set, run))
    } else {
        let set = backward_attractor_points(schedule, depth, e.samples, e.seed.expect("validated"))?;
        let run = DepthRun {
            depth,
            points: set.len(),
            tail_bound: backward_points_tolerance(schedule, depth)?,
            max_norm: None,
        };
        Ok((set, run))
    }
}
