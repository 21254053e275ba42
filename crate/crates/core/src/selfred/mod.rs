//! One-round-faster derivation for b-grabbing.
//!
//! A `T`-round algorithm `A0` is turned into a `(T-1)`-round algorithm `A1`
//! that, at each node, estimates how often `A0` grabs each port over all
//! extensions of the radius-`(T-1)` view and grabs the `b` most likely ports.
//! Extensions range over the ids and private bits of the nodes at distance
//! exactly `T`; topology, ports and shared bits stay fixed.

mod audit;
mod space;
mod trajectory;

pub use audit::{
    exact_expected_badness, per_node_mu_check, wrong_half_edge_audit, Audit, AuditChecks,
    PerNodeMu,
};
pub use space::InputSpace;
pub use trajectory::{
    measure_badness, round_bound, trajectory_csv, BadnessEstimate, TrajectoryRow,
    iterate_self_reduction,
};

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{extract_ball, Ball, PortedGraph};
use crate::local::{
    extract_view, labels_from_ports, AlgorithmDescriptor, AlgorithmKind, InputConfig, Inputs,
    NodeInputs, PortMode, View,
};
use crate::oracle::s_quantities;
use crate::rng;

/// Default cap on enumerated bits per exact enumeration.
pub const DEFAULT_BUDGET_CAP: u32 = 24;
pub const DEFAULT_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "kind")]
pub enum ProfileMode {
    Exact,
    MonteCarlo { samples: usize, seed: u64 },
}

/// How extensions are drawn: the input distribution, the enumeration mode
/// and the exact-mode budget.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ProfileSetup {
    pub inputs: InputConfig,
    pub mode: ProfileMode,
    pub cap: u32,
}

impl ProfileSetup {
    pub fn exact(inputs: InputConfig) -> Self {
        Self {
            inputs: inputs.with_port_mode(PortMode::Fixed),
            mode: ProfileMode::Exact,
            cap: DEFAULT_BUDGET_CAP,
        }
    }

    pub fn monte_carlo(inputs: InputConfig, samples: usize, seed: u64) -> Self {
        Self {
            inputs: inputs.with_port_mode(PortMode::Fixed),
            mode: ProfileMode::MonteCarlo { samples, seed },
            cap: DEFAULT_BUDGET_CAP,
        }
    }
}

/// Direction profile of one node under one radius-`(T-1)` view.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DirectionStats {
    /// `x[i]`: probability that `A0` grabs port `i`.
    pub x: Vec<f64>,
    pub s: f64,
    pub s_b: f64,
    /// `s - s_b`: mass outside the preferred directions.
    pub s_rest: f64,
    pub preferred: Vec<usize>,
    pub mode: ProfileMode,
    /// Per-entry standard error, Monte Carlo only.
    pub stderr: Option<Vec<f64>>,
}

impl DirectionStats {
    fn from_counts(counts: &[u64], total: u64, b: usize, mode: ProfileMode) -> Self {
        let x: Vec<f64> = counts.iter().map(|&c| c as f64 / total as f64).collect();
        let q = s_quantities(&x, b);
        let stderr = match mode {
            ProfileMode::Exact => None,
            ProfileMode::MonteCarlo { samples, .. } => Some(
                x.iter()
                    .map(|&p| (p * (1.0 - p) / samples as f64).sqrt())
                    .collect(),
            ),
        };
        Self {
            preferred: preferred_directions(&x, b),
            x,
            s: q.s,
            s_b: q.s_b,
            s_rest: q.s_rest,
            mode,
            stderr,
        }
    }
}

/// Indices of the `b` largest entries, ties toward smaller indices, sorted.
pub fn preferred_directions(x: &[f64], b: usize) -> Vec<usize> {
    assert!(b <= x.len(), "need at least b ports");
    let mut idx: Vec<usize> = (0..x.len()).collect();
    idx.sort_by(|&i, &j| x[j].total_cmp(&x[i]).then(i.cmp(&j)));
    idx.truncate(b);
    idx.sort_unstable();
    idx
}

/// Computes direction profiles of a fixed radius-`T` grabbing algorithm on a
/// fixed graph, memoised by view. Also serves as the rule of the derived
/// algorithm.
pub struct Profiler {
    graph: Arc<PortedGraph>,
    alg: AlgorithmDescriptor,
    b: usize,
    setup: ProfileSetup,
    space: InputSpace,
    balls: Vec<Arc<Ball>>,
    cache: Mutex<HashMap<Vec<u64>, Arc<DirectionStats>>>,
}

impl Profiler {
    /// Fails on `T = 0`, on non-grabbing algorithms, and in exact mode when
    /// some node's frontier exceeds the budget.
    pub fn new(graph: Arc<PortedGraph>, alg: AlgorithmDescriptor, setup: ProfileSetup) -> Result<Self> {
        let b = alg.grabbing_bound().ok_or_else(|| {
            Error::InvalidParameters(format!("{} is not a grabbing algorithm", alg.name))
        })?;
        if alg.radius == 0 {
            return Err(Error::InvalidParameters(
                "cannot remove a round from a 0-round algorithm".into(),
            ));
        }
        let space = InputSpace::new(graph.n(), &setup.inputs);
        let balls: Vec<Arc<Ball>> = (0..graph.n())
            .map(|v| Arc::new(extract_ball(&graph, v, alg.radius)))
            .collect();
        if setup.mode == ProfileMode::Exact {
            for ball in &balls {
                space.check_budget(frontier_len(ball), setup.cap)?;
            }
            space.check_shared_budget(setup.cap)?;
        }
        Ok(Self {
            graph,
            alg,
            b,
            setup,
            space,
            balls,
            cache: Mutex::new(HashMap::new()),
        })
    }

    pub fn graph(&self) -> &Arc<PortedGraph> {
        &self.graph
    }

    pub fn algorithm(&self) -> &AlgorithmDescriptor {
        &self.alg
    }

    pub fn space(&self) -> &InputSpace {
        &self.space
    }

    pub fn setup(&self) -> &ProfileSetup {
        &self.setup
    }

    /// Profile given the radius-`(T-1)` view of one of the graph's nodes.
    pub fn profile(&self, view: &View) -> Arc<DirectionStats> {
        let mut key = view.canonical_key();
        key.push(view.origin() as u64);
        if let Some(hit) = self.cache.lock().unwrap().get(&key) {
            return hit.clone();
        }
        let stats = Arc::new(self.compute(view, rng::mix_all(&key)));
        self.cache.lock().unwrap().insert(key, stats.clone());
        stats
    }

    fn compute(&self, view: &View, key_word: u64) -> DirectionStats {
        debug_assert_eq!(view.radius() + 1, self.alg.radius);
        let ball = &self.balls[view.origin()];
        // Balls list nodes by (distance, index), so the shorter view is a prefix.
        debug_assert!(ball.origin.starts_with(&view.ball.origin));
        let fixed = view.inputs.len();
        let mut ext = View {
            ball: ball.clone(),
            inputs: view.inputs.clone(),
            shared: view.shared,
        };
        ext.inputs.resize(ball.len(), NodeInputs::default());
        let ports = self.graph.delta();
        let mut counts = vec![0u64; ports];
        let mut tally = |ext: &View| {
            for (p, l) in self.alg.evaluate(ext).iter().enumerate() {
                counts[p] += l.is_m() as u64;
            }
        };
        let total = match self.setup.mode {
            ProfileMode::Exact => {
                self.space.enumerate(&mut ext, fixed, |ext| tally(ext));
                self.space.configurations(ball.len() - fixed)
            }
            ProfileMode::MonteCarlo { samples, seed } => {
                let mut r = rng::stream(seed, key_word);
                for _ in 0..samples {
                    for x in &mut ext.inputs[fixed..] {
                        *x = self.space.sample(&mut r);
                    }
                    tally(&ext);
                }
                samples as u64
            }
        };
        DirectionStats::from_counts(&counts, total, self.b, self.setup.mode)
    }

    /// The `(T-1)`-round algorithm grabbing the preferred directions.
    pub fn derived(self: &Arc<Self>) -> AlgorithmDescriptor {
        let this = self.clone();
        AlgorithmDescriptor::new(
            format!("{}-", self.alg.name),
            self.alg.radius - 1,
            AlgorithmKind::Grabbing { b: self.b },
            move |view| labels_from_ports(view.ports(), this.profile(view).preferred.iter().copied()),
        )
    }
}

pub(crate) fn frontier_len(ball: &Ball) -> usize {
    ball.dist.iter().filter(|&&d| d == ball.radius).count()
}

/// `x_i(v)` for `alg` conditioned on the inputs of `base` inside the
/// radius-`(T-1)` ball of `v` and on the shared bits. Ports are taken as
/// fixed by `g`.
pub fn estimate_direction_profile(
    g: &PortedGraph,
    base: &Inputs,
    v: usize,
    alg: &AlgorithmDescriptor,
    setup: &ProfileSetup,
) -> Result<DirectionStats> {
    let profiler = Profiler::new(Arc::new(g.clone()), alg.clone(), *setup)?;
    let view = extract_view(g, base, v, alg.radius - 1);
    Ok((*profiler.profile(&view)).clone())
}

/// The derived `(T-1)`-round algorithm for `alg` on `g`.
///
/// The returned rule locates each view in `g` by its origin, so it must be
/// run on `g` with fixed ports.
pub fn derive_one_round_faster(
    g: Arc<PortedGraph>,
    alg: &AlgorithmDescriptor,
    setup: &ProfileSetup,
) -> Result<AlgorithmDescriptor> {
    Ok(Arc::new(Profiler::new(g, alg.clone(), *setup)?).derived())
}

#[cfg(test)]
mod tests;
