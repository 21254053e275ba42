//! Exact expectations over the full input space of a small graph.
//!
//! Pairwise quantities factor through the intersection of two balls: the
//! output of `v` on port `p` depends only on the inputs inside the radius-`r`
//! ball of `v`, so conditioned on the inputs inside the intersection with the
//! neighbour's ball, the two endpoint outputs are independent. Each node's
//! ball is enumerated once and bucketed by the intersection inputs.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::{InputSpace, ProfileMode, ProfileSetup, Profiler};
use crate::error::{Error, Result};
use crate::graph::{extract_ball, PortedGraph};
use crate::local::{AlgorithmDescriptor, Label, NodeInputs, View};
use crate::par_map;

const EQ_TOL: f64 = 1e-9;
const S_TOL: f64 = 1e-12;

/// Grab counts of `v` on one port, bucketed by the inputs of the nodes in
/// `inter` (sorted by graph index) and the shared bits.
struct PortTable {
    inter: Vec<usize>,
    counts: Vec<u64>,
    per_bucket: u64,
}

impl PortTable {
    fn prob(&self, idx: usize) -> f64 {
        self.counts[idx] as f64 / self.per_bucket as f64
    }
}

struct NodeTables {
    ports: Vec<Option<PortTable>>,
    /// Sum over all configurations of half-edges grabbed by the algorithm
    /// but not by the comparison algorithm.
    wrong: u64,
    configs: u64,
}

fn bucket(space: &InputSpace, inputs: &[NodeInputs], pos: &[usize], shared: u64) -> usize {
    let k = space.states();
    let mut idx = shared;
    for &j in pos.iter().rev() {
        idx = idx * k + space.encode(&inputs[j]);
    }
    idx as usize
}

fn ball_set(g: &PortedGraph, u: usize, r: usize) -> Vec<bool> {
    g.distances_within(u, r).iter().map(|&d| d <= r).collect()
}

/// Enumerates every input assignment of `v`'s radius-`alg.radius` ball and
/// tallies per-port tables; optionally counts half-edges where `alg` grabs
/// and `other` (one round less) does not.
fn node_tables(
    g: &PortedGraph,
    v: usize,
    alg: &AlgorithmDescriptor,
    other: Option<&AlgorithmDescriptor>,
    space: &InputSpace,
    cap: u32,
) -> Result<NodeTables> {
    let r = alg.radius;
    let ball = Arc::new(extract_ball(g, v, r));
    space.check_budget(ball.len(), cap)?;
    let k = space.states();
    let mut ports = Vec::with_capacity(g.delta());
    for p in 0..g.delta() {
        ports.push(g.port(v, p).map(|far| {
            let near = ball_set(g, far.node, r);
            let mut inter: Vec<usize> = ball.origin.iter().copied().filter(|&u| near[u]).collect();
            inter.sort_unstable();
            let size = k.pow(inter.len() as u32) * space.shared_states();
            PortTable {
                per_bucket: space.configurations(ball.len() - inter.len()),
                inter,
                counts: vec![0; size as usize],
            }
        }));
    }
    let positions: Vec<Vec<usize>> = ports
        .iter()
        .map(|t| match t {
            Some(t) => t
                .inter
                .iter()
                .map(|u| ball.origin.iter().position(|w| w == u).unwrap())
                .collect(),
            None => Vec::new(),
        })
        .collect();

    let mut short = other.map(|o| View {
        ball: Arc::new(extract_ball(g, v, o.radius)),
        inputs: Vec::new(),
        shared: Default::default(),
    });
    if let Some(s) = &mut short {
        s.inputs = vec![NodeInputs::default(); s.ball.len()];
    }
    let mut wrong = 0u64;
    let mut view = View {
        ball: ball.clone(),
        inputs: vec![NodeInputs::default(); ball.len()],
        shared: Default::default(),
    };
    for sh in 0..space.shared_states() {
        view.shared = space.shared(sh);
        space.enumerate(&mut view, 0, |view| {
            let out = alg.evaluate(view);
            for (p, l) in out.iter().enumerate() {
                if l.is_m() {
                    if let Some(t) = &mut ports[p] {
                        t.counts[bucket(space, &view.inputs, &positions[p], sh)] += 1;
                    }
                }
            }
            if let (Some(o), Some(s)) = (other, &mut short) {
                let len = s.inputs.len();
                s.inputs.clone_from_slice(&view.inputs[..len]);
                s.shared = view.shared;
                let out1 = o.evaluate(s);
                wrong += out
                    .iter()
                    .zip(&out1)
                    .filter(|(a, b)| a.is_m() && **b == Label::U)
                    .count() as u64;
            }
        });
    }
    Ok(NodeTables {
        ports,
        wrong,
        configs: space.configurations(ball.len()) * space.shared_states(),
    })
}

fn all_tables(
    g: &PortedGraph,
    alg: &AlgorithmDescriptor,
    other: Option<&AlgorithmDescriptor>,
    space: &InputSpace,
    cap: u32,
) -> Result<Vec<NodeTables>> {
    space.check_shared_budget(cap)?;
    par_map(g.n(), |v| node_tables(g, v, alg, other, space, cap))
        .into_iter()
        .collect()
}

/// `(E[#MM edges], E[#MU edges])`.
fn edge_expectations(g: &PortedGraph, tables: &[NodeTables]) -> (f64, f64) {
    let (mut mm, mut mu) = (0.0, 0.0);
    for e in g.edges() {
        let a = tables[e.u].ports[e.pu].as_ref().unwrap();
        let c = tables[e.w].ports[e.pw].as_ref().unwrap();
        debug_assert_eq!(a.inter, c.inter);
        let buckets = a.counts.len() as f64;
        let (mut both, mut one) = (0.0, 0.0);
        for idx in 0..a.counts.len() {
            let (x, y) = (a.prob(idx), c.prob(idx));
            both += x * y;
            one += x + y - 2.0 * x * y;
        }
        mm += both / buckets;
        mu += one / buckets;
    }
    (mm, mu)
}

/// Exact expected badness of a grabbing algorithm run with fixed ports.
pub fn exact_expected_badness(
    g: &PortedGraph,
    alg: &AlgorithmDescriptor,
    setup: &ProfileSetup,
) -> Result<f64> {
    let b = alg
        .grabbing_bound()
        .ok_or_else(|| Error::InvalidParameters(format!("{} is not a grabbing algorithm", alg.name)))?;
    let space = InputSpace::new(g.n(), &setup.inputs);
    let tables = all_tables(g, alg, None, &space, setup.cap)?;
    let (mm, _) = edge_expectations(g, &tables);
    Ok(crate::problems::badness(mm, b, g.n()))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AuditChecks {
    /// Every profile has `|S - b| <= 1e-12`.
    #[serde(rename = "S_check")]
    pub s_check: bool,
    /// `|E[H_wrong] - E[sum S_rest]| <= 1e-9`.
    #[serde(rename = "H_wrong_eq")]
    pub h_wrong_eq: bool,
    /// `E_MM1 >= E_MM0 - H_wrong` and `E_MU0 <= b n p0`.
    #[serde(rename = "MM_chain")]
    pub mm_chain: bool,
}

/// Exact expectations relating `A0` and the derived `A1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Audit {
    pub n: usize,
    pub b: usize,
    pub e_mm0: f64,
    pub e_mm1: f64,
    pub e_mu0: f64,
    /// Expected half-edges grabbed by `A0` but not by `A1`, counted directly.
    pub h_wrong: f64,
    pub sum_s_rest: f64,
    pub p0: f64,
    pub p1: f64,
    pub max_s_deviation: f64,
    pub checks: AuditChecks,
}

fn require_exact(profiler: &Profiler) -> Result<()> {
    if profiler.setup().mode != ProfileMode::Exact {
        return Err(Error::InvalidParameters("audits need exact mode".into()));
    }
    Ok(())
}

/// Calls `f` with every radius-`(T-1)` view of `v` over all inputs.
fn for_each_short_view(profiler: &Profiler, v: usize, mut f: impl FnMut(&View)) {
    let g = profiler.graph();
    let space = profiler.space();
    let ball = Arc::new(extract_ball(g, v, profiler.algorithm().radius - 1));
    let mut view = View {
        inputs: vec![NodeInputs::default(); ball.len()],
        ball,
        shared: Default::default(),
    };
    for sh in 0..space.shared_states() {
        view.shared = space.shared(sh);
        space.enumerate(&mut view, 0, &mut f);
    }
}

/// Exact `E_MM`, `E_MU`, `H_wrong` and `sum S_rest` for the algorithm behind
/// `profiler` and its derived algorithm.
pub fn wrong_half_edge_audit(profiler: &Arc<Profiler>) -> Result<Audit> {
    require_exact(profiler)?;
    let g = profiler.graph().clone();
    let space = *profiler.space();
    let cap = profiler.setup().cap;
    let a0 = profiler.algorithm().clone();
    let a1 = profiler.derived();
    let b = a0.grabbing_bound().unwrap();
    let n = g.n();

    // Profiles first, so the derived rule hits the cache afterwards.
    let per_node: Vec<(f64, f64)> = par_map(n, |v| {
        let (mut sum, mut dev, mut count) = (0.0, 0.0f64, 0u64);
        for_each_short_view(profiler, v, |view| {
            let st = profiler.profile(view);
            sum += st.s_rest;
            dev = dev.max((st.s - b as f64).abs());
            count += 1;
        });
        (sum / count as f64, dev)
    });
    let sum_s_rest: f64 = per_node.iter().map(|x| x.0).sum();
    let max_s_deviation = per_node.iter().map(|x| x.1).fold(0.0, f64::max);

    let t0 = all_tables(&g, &a0, Some(&a1), &space, cap)?;
    let (e_mm0, e_mu0) = edge_expectations(&g, &t0);
    let h_wrong: f64 = t0.iter().map(|t| t.wrong as f64 / t.configs as f64).sum();
    let t1 = all_tables(&g, &a1, None, &space, cap)?;
    let (e_mm1, _) = edge_expectations(&g, &t1);

    let p0 = crate::problems::badness(e_mm0, b, n);
    let p1 = crate::problems::badness(e_mm1, b, n);
    let bn = (b * n) as f64;
    let checks = AuditChecks {
        s_check: max_s_deviation <= S_TOL,
        h_wrong_eq: (h_wrong - sum_s_rest).abs() <= EQ_TOL,
        mm_chain: e_mm1 >= e_mm0 - h_wrong - EQ_TOL && e_mu0 <= bn * p0 + EQ_TOL,
    };
    Ok(Audit {
        n,
        b,
        e_mm0,
        e_mm1,
        e_mu0,
        h_wrong,
        sum_s_rest,
        p0,
        p1,
        max_s_deviation,
        checks,
    })
}

/// Conditional `E[E_MU(v) | view] >= S_rest(v) / (1000 sqrt b)` over every
/// radius-`(T-1)` view of one node.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerNodeMu {
    pub node: usize,
    pub views: u64,
    pub violations: u64,
    /// Smallest `E_MU(v | view) - S_rest / (1000 sqrt b)`.
    pub min_margin: f64,
    /// Largest `S_rest` seen.
    pub max_s_rest: f64,
}

pub fn per_node_mu_check(profiler: &Arc<Profiler>) -> Result<Vec<PerNodeMu>> {
    require_exact(profiler)?;
    let g = profiler.graph().clone();
    let space = *profiler.space();
    let a0 = profiler.algorithm().clone();
    let b = a0.grabbing_bound().unwrap();
    let tables = all_tables(&g, &a0, None, &space, profiler.setup().cap)?;
    let k = space.states();
    let bound = 1000.0 * (b as f64).sqrt();

    Ok(par_map(g.n(), |v| {
        let mut out = PerNodeMu {
            node: v,
            views: 0,
            violations: 0,
            min_margin: f64::INFINITY,
            max_s_rest: 0.0,
        };
        for_each_short_view(profiler, v, |view| {
            let st = profiler.profile(view);
            let sh = view.shared.bits;
            let mut e_mu = 0.0;
            for (p, far) in g.half_edges(v) {
                let mine = tables[v].ports[p].as_ref().unwrap();
                let theirs = tables[far.node].ports[far.rev].as_ref().unwrap();
                // Intersection nodes are either inside the view (fixed) or free.
                let fixed: Vec<Option<u64>> = mine
                    .inter
                    .iter()
                    .map(|u| {
                        view.ball
                            .origin
                            .iter()
                            .position(|w| w == u)
                            .map(|j| space.encode(&view.inputs[j]))
                    })
                    .collect();
                let free = fixed.iter().filter(|s| s.is_none()).count();
                let mut free_states = vec![0u64; free];
                let mut acc = 0.0;
                let combos = k.pow(free as u32);
                for _ in 0..combos {
                    let mut it = free_states.iter();
                    let mut idx = sh;
                    let states: Vec<u64> = fixed
                        .iter()
                        .map(|s| s.unwrap_or_else(|| *it.next().unwrap()))
                        .collect();
                    for &s in states.iter().rev() {
                        idx = idx * k + s;
                    }
                    let (x, y) = (mine.prob(idx as usize), theirs.prob(idx as usize));
                    acc += x + y - 2.0 * x * y;
                    for s in free_states.iter_mut() {
                        *s += 1;
                        if *s < k {
                            break;
                        }
                        *s = 0;
                    }
                }
                e_mu += acc / combos as f64;
            }
            let margin = e_mu - st.s_rest / bound;
            out.views += 1;
            out.violations += (margin < -EQ_TOL) as u64;
            out.min_margin = out.min_margin.min(margin);
            out.max_s_rest = out.max_s_rest.max(st.s_rest);
        });
        out
    }))
}
