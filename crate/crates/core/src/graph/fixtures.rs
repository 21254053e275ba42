//! Small named graphs used by tests, examples and the demo.

use super::PortedGraph;

fn build(n: usize, delta: usize, edges: &[(usize, usize)]) -> PortedGraph {
    PortedGraph::from_edges(n, delta, edges).expect("fixture edge list is valid")
}

pub fn complete(n: usize) -> PortedGraph {
    let mut edges = Vec::new();
    for u in 0..n {
        for w in u + 1..n {
            edges.push((u, w));
        }
    }
    build(n, n.saturating_sub(1), &edges)
}

/// Cycle with ports assigned in edge-list order.
pub fn cycle(n: usize) -> PortedGraph {
    let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
    build(n, 2, &edges)
}

/// Cycle where port 0 always leads to the successor and port 1 to the
/// predecessor. Every node has the same port-labelled neighbourhood.
pub fn oriented_cycle(n: usize) -> PortedGraph {
    let mut g = PortedGraph::empty(n, 2);
    for i in 0..n {
        g.connect(i, 0, (i + 1) % n, 1);
    }
    g
}

pub fn path(n: usize) -> PortedGraph {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    build(n, 2, &edges)
}

/// Star with centre 0 and `leaves` leaves; slot count equals `leaves`.
pub fn star(leaves: usize) -> PortedGraph {
    let edges: Vec<_> = (1..=leaves).map(|i| (0, i)).collect();
    build(leaves + 1, leaves, &edges)
}

pub fn petersen() -> PortedGraph {
    let mut edges = Vec::new();
    for i in 0..5 {
        edges.push((i, (i + 1) % 5));
        edges.push((i, i + 5));
        edges.push((5 + i, 5 + (i + 2) % 5));
    }
    build(10, 3, &edges)
}

/// Heawood graph: 14 nodes, cubic, girth 6.
pub fn heawood() -> PortedGraph {
    let mut edges: Vec<_> = (0..14).map(|i| (i, (i + 1) % 14)).collect();
    for i in (0..14).step_by(2) {
        edges.push((i, (i + 5) % 14));
    }
    build(14, 3, &edges)
}

/// The 3-cube: 8 nodes, cubic, girth 4.
pub fn cube() -> PortedGraph {
    let mut edges = Vec::new();
    for u in 0..8usize {
        for bit in 0..3 {
            let w = u ^ (1 << bit);
            if u < w {
                edges.push((u, w));
            }
        }
    }
    build(8, 3, &edges)
}

/// Toroidal grid `C_rows x C_cols`; 4-regular when both sides are at least 3.
pub fn torus(rows: usize, cols: usize) -> PortedGraph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut edges = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            edges.push((id(r, c), id(r, (c + 1) % cols)));
            edges.push((id(r, c), id((r + 1) % rows, c)));
        }
    }
    build(rows * cols, 4, &edges)
}
