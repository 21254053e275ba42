use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::PortedGraph;
use crate::error::{Error, Result};

/// Radius-`r` ball around a marked centre.
///
/// Node `0` is the centre and nodes are numbered in breadth-first order.
/// An edge `{u, w}` of the source graph is kept iff both endpoints lie in the
/// ball and at least one of them is at distance `<= r - 1`; edges between two
/// boundary nodes are dropped. Port numbers are inherited from the source.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ball {
    pub graph: PortedGraph,
    pub radius: usize,
    /// Distance from the centre, per local node.
    pub dist: Vec<usize>,
    /// Source-graph index of each local node.
    pub origin: Vec<usize>,
}

impl Ball {
    pub const CENTER: usize = 0;

    pub fn len(&self) -> usize {
        self.origin.len()
    }

    pub fn is_empty(&self) -> bool {
        self.origin.is_empty()
    }

    /// Canonical encoding of the port-labelled topology.
    ///
    /// Ports are part of the structure, so a centre-preserving, port-preserving
    /// isomorphism is forced once the centre is fixed: walk from the centre
    /// visiting ports in index order and number nodes by discovery. Two balls
    /// are isomorphic iff their codes agree. Also returns the discovery order
    /// (canonical index -> local index).
    pub fn canonical_order(&self) -> (Vec<u64>, Vec<usize>) {
        let g = &self.graph;
        let mut canon = vec![usize::MAX; g.n()];
        let mut order = Vec::with_capacity(g.n());
        canon[Self::CENTER] = 0;
        order.push(Self::CENTER);
        let mut queue = VecDeque::from([Self::CENTER]);
        while let Some(u) = queue.pop_front() {
            for w in g.neighbors(u) {
                if canon[w] == usize::MAX {
                    canon[w] = order.len();
                    order.push(w);
                    queue.push_back(w);
                }
            }
        }
        // Empty slots are skipped, so the slot count itself is not part of
        // the shape: a ball re-extracted from a wider tree still matches.
        let mut code = vec![g.n() as u64, self.radius as u64];
        for &u in &order {
            for (p, far) in g.half_edges(u) {
                code.extend([p as u64, canon[far.node] as u64, far.rev as u64]);
            }
            code.push(u64::MAX);
        }
        (code, order)
    }

    pub fn topology_code(&self) -> Vec<u64> {
        self.canonical_order().0
    }

    pub fn isomorphic(&self, other: &Ball) -> bool {
        self.topology_code() == other.topology_code()
    }
}

pub fn extract_ball(g: &PortedGraph, v: usize, r: usize) -> Ball {
    let origin = g.neighborhood(v, r);
    let dist_all = g.distances_within(v, r);
    let mut local = vec![usize::MAX; g.n()];
    for (i, &u) in origin.iter().enumerate() {
        local[u] = i;
    }
    let mut graph = PortedGraph::empty(origin.len(), g.delta());
    for (i, &u) in origin.iter().enumerate() {
        if dist_all[u] + 1 > r {
            continue;
        }
        for (p, far) in g.half_edges(u) {
            let j = local[far.node];
            if graph.port(i, p).is_none() {
                graph.connect(i, p, j, far.rev);
            }
        }
    }
    let dist = origin.iter().map(|&u| dist_all[u]).collect();
    Ball {
        graph,
        radius: r,
        dist,
        origin,
    }
}

/// Pads an acyclic ball into a tree of exactly `n_target` nodes with at most
/// `delta` ports per node, without changing the radius-`r` ball around the
/// centre. The centre stays node `0`; original nodes keep their indices and
/// ports. Padding nodes hang off boundary nodes (distance `>= r`) or off
/// earlier padding nodes and use port `0` toward their parent.
pub fn extend_ball_to_tree(ball: &Ball, n_target: usize, delta: usize) -> Result<PortedGraph> {
    if !ball.graph.is_acyclic() {
        return Err(Error::NotAcyclic);
    }
    if n_target < ball.len() || delta < ball.graph.delta() {
        return Err(Error::InvalidParameters(format!(
            "ball has {} nodes and {} ports per node; target {} nodes with delta {}",
            ball.len(),
            ball.graph.delta(),
            n_target,
            delta
        )));
    }
    let mut tree = PortedGraph::empty(ball.len(), delta);
    for e in ball.graph.edges() {
        tree.connect(e.u, e.pu, e.w, e.pw);
    }
    let mut anchors: VecDeque<usize> = (0..ball.len())
        .filter(|&u| ball.dist[u] >= ball.radius)
        .collect();
    while tree.n() < n_target {
        let parent = loop {
            match anchors.front() {
                Some(&a) if tree.free_port(a).is_some() => break a,
                Some(_) => {
                    anchors.pop_front();
                }
                None => {
                    return Err(Error::CannotReach {
                        target: n_target,
                        delta,
                    })
                }
            }
        };
        let p = tree.free_port(parent).expect("anchor has a free port");
        let child = tree.add_node();
        tree.connect(parent, p, child, 0);
        anchors.push_back(child);
    }
    Ok(tree)
}
