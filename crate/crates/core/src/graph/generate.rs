use rand::seq::SliceRandom;
use rand::Rng;

use super::PortedGraph;
use crate::error::{Error, Result};
use crate::rng;

/// Random simple `delta`-regular graph on `n` nodes.
///
/// Each attempt pairs the `n * delta` configuration-model points one pair at
/// a time, drawing uniformly among pairs that keep the graph simple (the
/// Steger-Wormald variant of the pairing model). An attempt is abandoned
/// when no admissible pair is left. Ports are a uniformly random permutation
/// per node. The result is a pure function of `(n, delta, seed)`.
pub fn generate_regular_graph(
    n: usize,
    delta: usize,
    seed: u64,
    max_attempts: usize,
) -> Result<PortedGraph> {
    if (n * delta) % 2 == 1 {
        return Err(Error::Parity { n, delta });
    }
    if delta < 2 || delta + 1 > n {
        return Err(Error::InvalidParameters(format!(
            "need 2 <= delta <= n - 1, got n = {n}, delta = {delta}"
        )));
    }
    if max_attempts == 0 {
        return Err(Error::InvalidParameters("max_attempts must be >= 1".into()));
    }
    for attempt in 0..max_attempts {
        let mut rng = rng::stream2(seed, 0x6e6e, attempt as u64);
        if let Some(edges) = try_pairing(n, delta, &mut rng) {
            return Ok(assign_ports(n, delta, &edges, &mut rng));
        }
    }
    Err(Error::ExhaustedAttempts {
        attempts: max_attempts,
    })
}

fn try_pairing<R: Rng>(n: usize, delta: usize, rng: &mut R) -> Option<Vec<(usize, usize)>> {
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, delta)).collect();
    let mut adjacent = vec![vec![false; n]; n];
    let mut edges = Vec::with_capacity(n * delta / 2);
    let admissible = |a: usize, b: usize, adjacent: &Vec<Vec<bool>>| a != b && !adjacent[a][b];

    while !points.is_empty() {
        let mut chosen = None;
        for _ in 0..32 {
            let i = rng.gen_range(0..points.len());
            let j = rng.gen_range(0..points.len());
            if i != j && admissible(points[i], points[j], &adjacent) {
                chosen = Some((i, j));
                break;
            }
        }
        if chosen.is_none() {
            let mut candidates = Vec::new();
            for i in 0..points.len() {
                for j in i + 1..points.len() {
                    if admissible(points[i], points[j], &adjacent) {
                        candidates.push((i, j));
                    }
                }
            }
            chosen = Some(*candidates.choose(rng)?);
        }
        let (i, j) = chosen?;
        let (u, w) = (points[i], points[j]);
        adjacent[u][w] = true;
        adjacent[w][u] = true;
        edges.push((u, w));
        let (hi, lo) = if i > j { (i, j) } else { (j, i) };
        points.swap_remove(hi);
        points.swap_remove(lo);
    }
    Some(edges)
}

fn assign_ports<R: Rng>(n: usize, delta: usize, edges: &[(usize, usize)], rng: &mut R) -> PortedGraph {
    let orders: Vec<Vec<usize>> = (0..n)
        .map(|_| {
            let mut perm: Vec<usize> = (0..delta).collect();
            perm.shuffle(rng);
            perm
        })
        .collect();
    let mut next = vec![0usize; n];
    let mut g = PortedGraph::empty(n, delta);
    for &(u, w) in edges {
        let pu = orders[u][next[u]];
        let pw = orders[w][next[w]];
        next[u] += 1;
        next[w] += 1;
        g.connect(u, pu, w, pw);
    }
    g
}
