//! Verifiers and scoring for b-grabbing, maximal b-matching and edge
//! colouring. Witnesses are the first violation in node (or edge) order.

use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::graph::{Edge, PortedGraph};
use crate::local::{EdgeClass, HalfEdgeLabeling, Label};
use crate::rng;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Witness {
    Node(usize),
    Edge { u: usize, pu: usize, w: usize, pw: usize },
}

impl From<Edge> for Witness {
    fn from(e: Edge) -> Self {
        Witness::Edge {
            u: e.u,
            pu: e.pu,
            w: e.w,
            pw: e.pw,
        }
    }
}

/// Ok iff every node labels exactly `b` half-edges `M`.
pub fn verify_b_grabbing(lab: &HalfEdgeLabeling, b: usize) -> Result<(), Witness> {
    match (0..lab.labels.len()).find(|&v| lab.h_m(v) != b) {
        Some(v) => Err(Witness::Node(v)),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GrabbingScore {
    /// Matched (`MM`) edges.
    pub q: usize,
    /// Badness `1 - 2q / (b n)`.
    pub p: f64,
    pub saturated_count: usize,
    #[serde(skip)]
    pub saturated: Vec<bool>,
}

pub fn badness(q: f64, b: usize, n: usize) -> f64 {
    1.0 - 2.0 * q / (b as f64 * n as f64)
}

pub fn score_grabbing(g: &PortedGraph, lab: &HalfEdgeLabeling, b: usize) -> GrabbingScore {
    let mut matched = vec![0usize; g.n()];
    let mut q = 0;
    for e in g.edges() {
        if lab.edge_class(&e) == EdgeClass::MM {
            q += 1;
            matched[e.u] += 1;
            matched[e.w] += 1;
        }
    }
    let saturated: Vec<bool> = matched.iter().map(|&m| m == b).collect();
    GrabbingScore {
        q,
        p: badness(q as f64, b, g.n()),
        saturated_count: saturated.iter().filter(|&&s| s).count(),
        saturated,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MatchingFailure {
    /// `|P_v| > b`.
    Overfull,
    /// Exactly one endpoint claims the edge.
    Disagreement,
    /// Some edge outside the agreed matching joins two unsaturated nodes.
    NotMaximal,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatchingVerdict {
    pub ok: bool,
    pub failures: Vec<(MatchingFailure, Witness)>,
    /// Agreed matching: edges claimed by both endpoints.
    #[serde(skip)]
    pub matched: Vec<Edge>,
    /// Agreed-matching degree per node.
    #[serde(skip)]
    pub matched_degree: Vec<usize>,
}

/// Checks the three failure modes of a claimed maximal b-matching given as
/// per-node port sets. Reports the first witness of each mode.
pub fn verify_maximal_b_matching(
    g: &PortedGraph,
    claims: &[Vec<usize>],
    b: usize,
) -> MatchingVerdict {
    let claimed = |v: usize, p: usize| claims[v].contains(&p);
    let mut failures = Vec::new();

    if let Some(v) = (0..g.n()).find(|&v| claims[v].len() > b) {
        failures.push((MatchingFailure::Overfull, Witness::Node(v)));
    }

    let edges = g.edges();
    let mut matched = Vec::new();
    let mut matched_degree = vec![0usize; g.n()];
    let mut disagreement = None;
    for e in &edges {
        match (claimed(e.u, e.pu), claimed(e.w, e.pw)) {
            (true, true) => {
                matched.push(*e);
                matched_degree[e.u] += 1;
                matched_degree[e.w] += 1;
            }
            (false, false) => {}
            _ => {
                disagreement.get_or_insert(*e);
            }
        }
    }
    if let Some(e) = disagreement {
        failures.push((MatchingFailure::Disagreement, e.into()));
    }

    let not_maximal = edges.iter().find(|e| {
        !(claimed(e.u, e.pu) && claimed(e.w, e.pw))
            && matched_degree[e.u] < b
            && matched_degree[e.w] < b
    });
    if let Some(e) = not_maximal {
        failures.push((MatchingFailure::NotMaximal, (*e).into()));
    }

    MatchingVerdict {
        ok: failures.is_empty(),
        failures,
        matched,
        matched_degree,
    }
}

/// Nodes with fewer than `b` agreed matched edges.
pub fn unsaturated_nodes(verdict: &MatchingVerdict, b: usize) -> Vec<usize> {
    (0..verdict.matched_degree.len())
        .filter(|&v| verdict.matched_degree[v] < b)
        .collect()
}

/// Maximum degree of the subgraph induced by `nodes`.
pub fn induced_max_degree(g: &PortedGraph, nodes: &[usize]) -> usize {
    let mut inside = vec![false; g.n()];
    for &v in nodes {
        inside[v] = true;
    }
    nodes
        .iter()
        .map(|&v| g.neighbors(v).filter(|&u| inside[u]).count())
        .max()
        .unwrap_or(0)
}

/// Sequential greedy maximal b-matching over a seeded random edge order.
/// Returns claimed port sets.
pub fn greedy_maximal_b_matching(g: &PortedGraph, b: usize, seed: u64) -> Vec<Vec<usize>> {
    let mut edges = g.edges();
    edges.shuffle(&mut rng::stream(seed, 0x6d61_7463));
    let mut claims = vec![Vec::new(); g.n()];
    for e in edges {
        if claims[e.u].len() < b && claims[e.w].len() < b {
            claims[e.u].push(e.pu);
            claims[e.w].push(e.pw);
        }
    }
    for c in &mut claims {
        c.sort_unstable();
    }
    claims
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ColoringFailure {
    /// The two half-edges of an edge carry different labels.
    Disagreement,
    /// Missing colour or colour outside `0..palette`.
    OutOfPalette,
    /// Two edges at a node share a colour.
    Conflict,
}

/// Ok iff the colouring is proper with colours in `0..palette`.
pub fn verify_edge_coloring(
    g: &PortedGraph,
    lab: &HalfEdgeLabeling,
    palette: usize,
) -> Result<(), (ColoringFailure, Witness)> {
    let color = |v: usize, p: usize| match lab.label(v, p) {
        Label::Color(c) if (c as usize) < palette => Some(c),
        _ => None,
    };
    for e in g.edges() {
        if lab.label(e.u, e.pu) != lab.label(e.w, e.pw) {
            return Err((ColoringFailure::Disagreement, e.into()));
        }
        if color(e.u, e.pu).is_none() {
            return Err((ColoringFailure::OutOfPalette, e.into()));
        }
    }
    for v in 0..g.n() {
        let mut seen: Vec<u32> = g.half_edges(v).filter_map(|(p, _)| color(v, p)).collect();
        let len = seen.len();
        seen.sort_unstable();
        seen.dedup();
        if seen.len() != len {
            return Err((ColoringFailure::Conflict, Witness::Node(v)));
        }
    }
    Ok(())
}
