use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::PortedGraph;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Girth {
    Finite(usize),
    /// Acyclic graph. Serialized as `null`.
    Infinite,
}

impl Girth {
    pub fn finite(self) -> Option<usize> {
        match self {
            Girth::Finite(g) => Some(g),
            Girth::Infinite => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsConfig {
    pub rho: f64,
    pub epsilon: f64,
    /// Exact independence number is computed when `n <= exact_threshold`.
    pub exact_threshold: usize,
}

impl Default for DiagnosticsConfig {
    fn default() -> Self {
        Self {
            rho: 2.0,
            epsilon: 0.25,
            exact_threshold: 40,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndependenceBounds {
    pub lower: usize,
    pub exact: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDiagnostics {
    pub girth: Girth,
    pub independence_lower: usize,
    pub independence_exact: Option<usize>,
    /// `epsilon * log_delta(n)`, reported for reference only.
    pub girth_floor: f64,
    /// `rho * n * ln(delta) / delta`, reported for reference only.
    pub independence_ceiling: f64,
}

pub fn diagnose(g: &PortedGraph, cfg: &DiagnosticsConfig) -> GraphDiagnostics {
    let n = g.n() as f64;
    let delta = g.delta() as f64;
    let ind = independence_number(g, cfg.exact_threshold);
    GraphDiagnostics {
        girth: compute_girth(g),
        independence_lower: ind.lower,
        independence_exact: ind.exact,
        girth_floor: cfg.epsilon * n.ln() / delta.ln(),
        independence_ceiling: cfg.rho * n * delta.ln() / delta,
    }
}

pub fn compute_girth(g: &PortedGraph) -> Girth {
    match shortest_cycle(g) {
        Some(c) => Girth::Finite(c.len()),
        None => Girth::Infinite,
    }
}

/// A shortest cycle as a node sequence (consecutive nodes adjacent, last
/// adjacent to first), or `None` for a forest.
///
/// Runs a breadth-first search from every node; the best non-tree edge seen
/// from the best root closes a cycle whose two tree paths share only the
/// root.
pub fn shortest_cycle(g: &PortedGraph) -> Option<Vec<usize>> {
    let n = g.n();
    let mut best: Option<(usize, Vec<usize>, usize, usize)> = None;
    for root in 0..n {
        let mut dist = vec![usize::MAX; n];
        let mut parent = vec![usize::MAX; n];
        dist[root] = 0;
        let mut queue = VecDeque::from([root]);
        let mut found: Option<(usize, usize, usize)> = None;
        while let Some(u) = queue.pop_front() {
            if let Some((len, _, _)) = found {
                if 2 * dist[u] >= len {
                    break;
                }
            }
            for w in g.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    parent[w] = u;
                    queue.push_back(w);
                } else if parent[u] != w {
                    let len = dist[u] + dist[w] + 1;
                    if found.is_none_or(|(l, _, _)| len < l) {
                        found = Some((len, u, w));
                    }
                }
            }
        }
        if let Some((len, u, w)) = found {
            if best.as_ref().is_none_or(|(l, ..)| len < *l) {
                best = Some((len, parent, u, w));
            }
        }
    }
    let (_, parent, u, w) = best?;
    let climb = |mut x: usize| {
        let mut path = vec![x];
        while parent[x] != usize::MAX {
            x = parent[x];
            path.push(x);
        }
        path.reverse();
        path
    };
    let mut cycle = climb(u);
    let back = climb(w);
    cycle.extend(back.into_iter().skip(1).rev());
    Some(cycle)
}

/// Repeated minimum-degree selection.
pub fn greedy_independent_set(g: &PortedGraph) -> Vec<usize> {
    let n = g.n();
    let mut alive = vec![true; n];
    let mut degree: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    let mut chosen = Vec::new();
    while let Some(v) = (0..n).filter(|&v| alive[v]).min_by_key(|&v| (degree[v], v)) {
        chosen.push(v);
        let mut removed = vec![v];
        removed.extend(g.neighbors(v).filter(|&u| alive[u]));
        for &r in &removed {
            alive[r] = false;
        }
        for &r in &removed {
            for u in g.neighbors(r) {
                if alive[u] {
                    degree[u] -= 1;
                }
            }
        }
    }
    chosen.sort_unstable();
    chosen
}

/// Maximum independent set by branch and bound. `None` when `n > 128`.
pub fn max_independent_set(g: &PortedGraph) -> Option<Vec<usize>> {
    let n = g.n();
    if n > 128 {
        return None;
    }
    let adj: Vec<u128> = (0..n)
        .map(|v| g.neighbors(v).fold(0u128, |m, u| m | (1u128 << u)))
        .collect();
    let all = if n == 128 { u128::MAX } else { (1u128 << n) - 1 };
    let greedy = greedy_independent_set(g);
    let mut search = Mis {
        adj,
        best: greedy.iter().fold(0u128, |m, &v| m | (1 << v)),
    };
    search.run(all, 0);
    Some((0..n).filter(|&v| search.best >> v & 1 == 1).collect())
}

struct Mis {
    adj: Vec<u128>,
    best: u128,
}

impl Mis {
    fn run(&mut self, cand: u128, taken: u128) {
        if taken.count_ones() + cand.count_ones() <= self.best.count_ones() {
            return;
        }
        if cand == 0 {
            self.best = taken;
            return;
        }
        let mut min_v = 0;
        let mut min_d = u32::MAX;
        let mut max_v = 0;
        let mut max_d = 0;
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let d = (self.adj[v] & cand).count_ones();
            if d < min_d {
                min_d = d;
                min_v = v;
            }
            if d > max_d {
                max_d = d;
                max_v = v;
            }
        }
        if min_d <= 1 {
            // Some maximum independent set contains a vertex of degree <= 1.
            let v = min_v;
            self.run(cand & !self.adj[v] & !(1 << v), taken | 1 << v);
            return;
        }
        let v = max_v;
        self.run(cand & !self.adj[v] & !(1 << v), taken | 1 << v);
        self.run(cand & !(1 << v), taken);
    }
}

/// Greedy lower bound, plus the exact value when `n <= exact_threshold`.
pub fn independence_number(g: &PortedGraph, exact_threshold: usize) -> IndependenceBounds {
    let lower = greedy_independent_set(g).len();
    let exact = if g.n() <= exact_threshold {
        max_independent_set(g).map(|s| s.len())
    } else {
        None
    };
    IndependenceBounds { lower, exact }
}
