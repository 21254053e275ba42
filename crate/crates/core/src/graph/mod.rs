//! Port-numbered graphs: the arena every simulation runs on.
//!
//! A [`PortedGraph`] gives every node `delta` port slots. In a regular graph
//! every slot is occupied; balls and trees leave some slots empty. Port `i`
//! of `v` pointing to `(u, j)` always comes with port `j` of `u` pointing
//! back to `(v, i)`.

mod ball;
mod diagnostics;
mod generate;
pub mod fixtures;
mod io;

pub use ball::{extend_ball_to_tree, extract_ball, Ball};
pub use diagnostics::{
    compute_girth, diagnose, greedy_independent_set, independence_number, max_independent_set,
    shortest_cycle, DiagnosticsConfig, Girth, GraphDiagnostics, IndependenceBounds,
};
pub use generate::generate_regular_graph;

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The far end of a port: neighbor index and the neighbor's port back to us.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Port {
    pub node: usize,
    pub rev: usize,
}

/// One edge seen from its canonical half-edge: `(u, pu) -- (w, pw)` with
/// `(u, pu) < (w, pw)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Edge {
    pub u: usize,
    pub pu: usize,
    pub w: usize,
    pub pw: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PortedGraph {
    delta: usize,
    ports: Vec<Vec<Option<Port>>>,
}

impl PortedGraph {
    /// `n` isolated nodes with `delta` empty port slots each.
    pub fn empty(n: usize, delta: usize) -> Self {
        Self {
            delta,
            ports: vec![vec![None; delta]; n],
        }
    }

    /// Builds a graph from an edge list, filling each node's port slots in
    /// the order its edges appear.
    pub fn from_edges(n: usize, delta: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n, delta);
        for &(u, w) in edges {
            let pu = g.free_port(u).ok_or_else(|| {
                Error::InvalidParameters(format!("node {u} has more than {delta} edges"))
            })?;
            let pw = g.free_port(w).ok_or_else(|| {
                Error::InvalidParameters(format!("node {w} has more than {delta} edges"))
            })?;
            if u == w {
                return Err(Error::InvalidParameters(format!("self-loop at {u}")));
            }
            g.connect(u, pu, w, pw);
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.ports.len()
    }

    /// Port slots per node.
    pub fn delta(&self) -> usize {
        self.delta
    }

    pub fn port(&self, v: usize, p: usize) -> Option<Port> {
        self.ports[v][p]
    }

    pub fn ports(&self, v: usize) -> &[Option<Port>] {
        &self.ports[v]
    }

    /// Number of occupied slots at `v`.
    pub fn degree(&self, v: usize) -> usize {
        self.ports[v].iter().filter(|p| p.is_some()).count()
    }

    pub fn neighbors(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        self.ports[v].iter().flatten().map(|p| p.node)
    }

    /// Occupied ports of `v` as `(port index, far end)`.
    pub fn half_edges(&self, v: usize) -> impl Iterator<Item = (usize, Port)> + '_ {
        self.ports[v]
            .iter()
            .enumerate()
            .filter_map(|(i, p)| p.map(|p| (i, p)))
    }

    pub fn free_port(&self, v: usize) -> Option<usize> {
        self.ports[v].iter().position(|p| p.is_none())
    }

    /// Joins port `pu` of `u` with port `pw` of `w`. Both slots must be free.
    pub fn connect(&mut self, u: usize, pu: usize, w: usize, pw: usize) {
        debug_assert!(self.ports[u][pu].is_none() && self.ports[w][pw].is_none());
        self.ports[u][pu] = Some(Port { node: w, rev: pw });
        self.ports[w][pw] = Some(Port { node: u, rev: pu });
    }

    pub fn add_node(&mut self) -> usize {
        self.ports.push(vec![None; self.delta]);
        self.ports.len() - 1
    }

    /// Every edge exactly once, in order of its canonical half-edge.
    pub fn edges(&self) -> Vec<Edge> {
        let mut out = Vec::new();
        for u in 0..self.n() {
            for (pu, far) in self.half_edges(u) {
                if (u, pu) < (far.node, far.rev) {
                    out.push(Edge {
                        u,
                        pu,
                        w: far.node,
                        pw: far.rev,
                    });
                }
            }
        }
        out
    }

    pub fn edge_count(&self) -> usize {
        self.ports.iter().flatten().flatten().count() / 2
    }

    pub fn is_regular(&self) -> bool {
        self.ports.iter().all(|slots| slots.iter().all(Option::is_some))
    }

    /// No self-loops, no parallel edges.
    pub fn is_simple(&self) -> bool {
        (0..self.n()).all(|v| {
            let mut seen: Vec<usize> = self.neighbors(v).collect();
            let len = seen.len();
            seen.sort_unstable();
            seen.dedup();
            seen.len() == len && !seen.contains(&v)
        })
    }

    /// Full scan of the port-consistency invariant.
    pub fn check_ports(&self) -> Result<()> {
        for v in 0..self.n() {
            for (p, far) in self.half_edges(v) {
                let back = self
                    .ports
                    .get(far.node)
                    .and_then(|slots| slots.get(far.rev))
                    .copied()
                    .flatten();
                if back != Some(Port { node: v, rev: p }) {
                    return Err(Error::PortInconsistent { node: v, port: p });
                }
            }
        }
        Ok(())
    }

    pub fn is_acyclic(&self) -> bool {
        let components = self.components();
        self.edge_count() + components == self.n()
    }

    fn components(&self) -> usize {
        let mut seen = vec![false; self.n()];
        let mut count = 0;
        for s in 0..self.n() {
            if seen[s] {
                continue;
            }
            count += 1;
            seen[s] = true;
            let mut stack = vec![s];
            while let Some(u) = stack.pop() {
                for w in self.neighbors(u) {
                    if !seen[w] {
                        seen[w] = true;
                        stack.push(w);
                    }
                }
            }
        }
        count
    }

    /// Breadth-first distances from `src`; `usize::MAX` if unreachable.
    pub fn distances(&self, src: usize) -> Vec<usize> {
        self.distances_within(src, usize::MAX)
    }

    /// Distances from `src`, exploring no further than `limit`.
    pub fn distances_within(&self, src: usize, limit: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.n()];
        dist[src] = 0;
        let mut queue = VecDeque::from([src]);
        while let Some(u) = queue.pop_front() {
            if dist[u] >= limit {
                continue;
            }
            for w in self.neighbors(u) {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    /// Nodes within distance `r` of `v`, in breadth-first order.
    pub fn neighborhood(&self, v: usize, r: usize) -> Vec<usize> {
        let dist = self.distances_within(v, r);
        let mut nodes: Vec<usize> = (0..self.n()).filter(|&u| dist[u] <= r).collect();
        nodes.sort_by_key(|&u| (dist[u], u));
        nodes
    }

    /// Relabels ports locally: new port `k` of `v` is old port `perms[v][k]`.
    pub fn permute_ports(&self, perms: &[Vec<usize>]) -> PortedGraph {
        let inverse: Vec<Vec<usize>> = perms
            .iter()
            .map(|perm| {
                let mut inv = vec![0; perm.len()];
                for (k, &old) in perm.iter().enumerate() {
                    inv[old] = k;
                }
                inv
            })
            .collect();
        let ports = (0..self.n())
            .map(|v| {
                perms[v]
                    .iter()
                    .map(|&old| {
                        self.ports[v][old].map(|far| Port {
                            node: far.node,
                            rev: inverse[far.node][far.rev],
                        })
                    })
                    .collect()
            })
            .collect();
        PortedGraph {
            delta: self.delta,
            ports,
        }
    }
}
