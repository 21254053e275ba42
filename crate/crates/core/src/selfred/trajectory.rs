use std::fmt::Write as _;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{ProfileSetup, Profiler};
use crate::error::{Error, Result};
use crate::graph::PortedGraph;
use crate::local::{assign_inputs, run_algorithm, AlgorithmDescriptor, InputConfig};
use crate::problems::score_grabbing;
use crate::rng;

/// Two-sided 99% normal quantile.
const Z99: f64 = 2.575_829_303_548_901;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BadnessEstimate {
    pub trials: usize,
    pub mean: f64,
    pub sd: f64,
    pub ci_low: f64,
    pub ci_high: f64,
}

impl BadnessEstimate {
    pub fn from_samples(xs: &[f64]) -> Self {
        let t = xs.len();
        let mean = xs.iter().sum::<f64>() / t as f64;
        let sd = if t > 1 {
            (xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (t - 1) as f64).sqrt()
        } else {
            0.0
        };
        let half = Z99 * sd / (t as f64).sqrt();
        Self {
            trials: t,
            mean,
            sd,
            ci_low: mean - half,
            ci_high: mean + half,
        }
    }
}

/// Monte Carlo badness over `trials` fresh input draws.
pub fn measure_badness(
    g: &PortedGraph,
    cfg: &InputConfig,
    alg: &AlgorithmDescriptor,
    trials: usize,
    seed: u64,
) -> Result<BadnessEstimate> {
    let b = alg
        .grabbing_bound()
        .ok_or_else(|| Error::InvalidParameters(format!("{} is not a grabbing algorithm", alg.name)))?;
    if trials == 0 {
        return Err(Error::InvalidParameters("trials must be >= 1".into()));
    }
    let mut xs = Vec::with_capacity(trials);
    for t in 0..trials {
        let x = assign_inputs(g, rng::mix_all(&[seed, t as u64]), cfg);
        let lab = run_algorithm(g, &x, alg)?;
        xs.push(score_grabbing(g, &lab, b).p);
    }
    Ok(BadnessEstimate::from_samples(&xs))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRow {
    pub stage: usize,
    pub radius: usize,
    pub badness_mean: f64,
    pub badness_ci_low: f64,
    pub badness_ci_high: f64,
    /// `p0 * (c sqrt b)^stage`.
    pub envelope: f64,
}

/// Derives one round faster until radius 0, measuring badness at each stage
/// with fixed ports.
pub fn iterate_self_reduction(
    g: Arc<PortedGraph>,
    alg: &AlgorithmDescriptor,
    setup: &ProfileSetup,
    trials: usize,
    seed: u64,
    c_const: f64,
) -> Result<Vec<TrajectoryRow>> {
    let b = alg
        .grabbing_bound()
        .ok_or_else(|| Error::InvalidParameters(format!("{} is not a grabbing algorithm", alg.name)))?;
    let factor = c_const * (b as f64).sqrt();
    let mut rows = Vec::new();
    let mut current = alg.clone();
    let mut p0 = None;
    for stage in 0.. {
        let est = measure_badness(&g, &setup.inputs, &current, trials, seed)?;
        let p0 = *p0.get_or_insert(est.mean);
        rows.push(TrajectoryRow {
            stage,
            radius: current.radius,
            badness_mean: est.mean,
            badness_ci_low: est.ci_low,
            badness_ci_high: est.ci_high,
            envelope: p0 * factor.powi(stage as i32),
        });
        if current.radius == 0 {
            break;
        }
        current = Arc::new(Profiler::new(g.clone(), current, *setup)?).derived();
    }
    Ok(rows)
}

pub fn trajectory_csv(rows: &[TrajectoryRow]) -> String {
    let mut out = String::from("stage,radius,badness_mean,badness_ci_low,badness_ci_high,envelope\n");
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{}",
            r.stage, r.radius, r.badness_mean, r.badness_ci_low, r.badness_ci_high, r.envelope
        )
        .unwrap();
    }
    out
}

/// `min(eps/4 log_delta n, ln(1/(2p)) / ln(c sqrt b))`.
///
/// `n` is a float so that astronomically large graphs can be plugged in.
pub fn round_bound(p: f64, b: usize, delta: usize, n: f64, epsilon: f64, c_const: f64) -> Result<f64> {
    if !(p > 0.0 && p < 0.5) {
        return Err(Error::Domain(format!(
            "badness must lie in (0, 1/2), got {p}; at 1/2 the zero-round bound already applies"
        )));
    }
    let base = c_const * (b as f64).sqrt();
    if base <= 1.0 {
        return Err(Error::Domain(format!("c * sqrt(b) must exceed 1, got {base}")));
    }
    if delta < 2 || n <= 1.0 {
        return Err(Error::Domain("need delta >= 2 and n > 1".into()));
    }
    let girth_term = epsilon / 4.0 * n.ln() / (delta as f64).ln();
    let badness_term = (1.0 / (2.0 * p)).ln() / base.ln();
    Ok(girth_term.min(badness_term))
}
