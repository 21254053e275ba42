//! Concrete algorithms to feed the reductions and the self-reduction.
//!
//! Rules draw their randomness from node inputs (random id plus private
//! bits) through [`private_word`], so every rule stays a pure function of the
//! view and exact enumeration over inputs covers all of its randomness.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::graph::Ball;
use crate::local::{labels_from_ports, AlgorithmDescriptor, AlgorithmKind, Label, NodeInputs, View};
use crate::reductions::matching_to_grabbing;
use crate::rng;

/// Pseudo-random word derived from a node's id and private bits.
pub fn private_word(x: &NodeInputs, salt: u64) -> u64 {
    rng::mix_all(&[x.id, x.private_bits.bits, x.private_bits.len as u64, salt])
}

pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u64, |acc, i| acc * (n - i) as u64 / (i + 1) as u64)
}

/// The `rank`-th `k`-subset of `0..n` in lexicographic order.
pub fn unrank_subset(n: usize, k: usize, mut rank: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    while out.len() < k {
        let remaining = k - out.len() - 1;
        let with_next = binomial(n - next - 1, remaining);
        if rank < with_next {
            out.push(next);
        } else {
            rank -= with_next;
        }
        next += 1;
    }
    out
}

/// Grabs a pseudo-uniform `b`-subset of ports chosen from the centre's own
/// inputs; ignores everything else in the view.
pub fn uniform_grab(b: usize, radius: usize) -> AlgorithmDescriptor {
    AlgorithmDescriptor::new("uniform", radius, AlgorithmKind::Grabbing { b }, move |view| {
        let ports = view.ports();
        let rank = private_word(view.center(), 0x756e_6966) % binomial(ports, b);
        labels_from_ports(ports, unrank_subset(ports, b, rank))
    })
}

/// Ports `0..b`, always.
pub fn constant_grab(b: usize, radius: usize) -> AlgorithmDescriptor {
    AlgorithmDescriptor::new("constant", radius, AlgorithmKind::Grabbing { b }, move |view| {
        labels_from_ports(view.ports(), 0..b)
    })
}

/// Grabs `b` cyclically consecutive ports starting at
/// `(own first bit + number of neighbours whose first bit is set) mod delta`.
/// Needs `radius >= 1` to see the neighbours.
pub fn parity_grab(b: usize, radius: usize) -> AlgorithmDescriptor {
    assert!(radius >= 1, "parity rule reads neighbour bits");
    AlgorithmDescriptor::new("parity", radius, AlgorithmKind::Grabbing { b }, move |view| {
        let g = &view.ball.graph;
        let ones = g
            .neighbors(Ball::CENTER)
            .filter(|&u| view.inputs[u].private_bits.bit(0))
            .count();
        let own = view.center().private_bits.bit(0) as usize;
        let ports = view.ports();
        let start = (own + ones) % ports;
        labels_from_ports(ports, (0..b).map(|k| (start + k) % ports))
    })
}

/// `rounds`-round randomized proposal b-matching.
///
/// Each round every unsaturated node proposes along one random port that is
/// neither matched nor known to lead to a saturated neighbour; mutual
/// proposals become matched. Saturation of a neighbour is learnt one round
/// later, so a node's state after round `r` depends on radius `r` only. The
/// output is always a consistent b-matching, but not necessarily maximal.
pub fn proposal_matching(b: usize, rounds: usize) -> AlgorithmDescriptor {
    AlgorithmDescriptor::new(
        "proposal-matching",
        rounds,
        AlgorithmKind::Matching { b },
        move |view| labels_from_ports(view.ports(), simulate_proposals(view, b)),
    )
}

#[derive(Clone, Copy, Default)]
struct ProposalState {
    matched: u64,
    dead: u64,
}

fn simulate_proposals(view: &View, b: usize) -> Vec<usize> {
    let ball = &view.ball;
    let g = &ball.graph;
    let ports = g.delta();
    let t = ball.radius;
    let mut state = vec![ProposalState::default(); ball.len()];
    for round in 1..=t {
        let active = |u: usize| ball.dist[u] + round <= t + 1;
        let proposal: Vec<Option<usize>> = (0..ball.len())
            .map(|w| {
                if !active(w) {
                    return None;
                }
                let s = state[w];
                if (s.matched.count_ones() as usize) >= b {
                    return None;
                }
                let free: Vec<usize> = (0..ports)
                    .filter(|&p| (s.matched | s.dead) >> p & 1 == 0)
                    .collect();
                if free.is_empty() {
                    return None;
                }
                let word = private_word(&view.inputs[w], 0x7072_6f70 ^ round as u64);
                Some(free[(word % free.len() as u64) as usize])
            })
            .collect();
        let mut next = state.clone();
        for u in (0..ball.len()).filter(|&u| ball.dist[u] + round <= t) {
            for (p, far) in g.half_edges(u) {
                if proposal[u] == Some(p) && proposal[far.node] == Some(far.rev) {
                    next[u].matched |= 1 << p;
                }
                if (state[far.node].matched.count_ones() as usize) >= b {
                    next[u].dead |= 1 << p;
                }
            }
        }
        state = next;
    }
    let m = state[Ball::CENTER].matched;
    (0..ports).filter(|&p| m >> p & 1 == 1).collect()
}

/// Proposal matching turned into a no-error grabbing algorithm.
pub fn proposal_grab(b: usize, rounds: usize) -> AlgorithmDescriptor {
    let mut alg = matching_to_grabbing(&proposal_matching(b, rounds));
    alg.name = "proposal".into();
    alg
}

/// Radius-0 rule replaying a precomputed labelling by the centre's index in
/// the source graph. Used to feed centrally computed solutions through the
/// reductions; only meaningful with fixed ports.
pub fn table_rule(
    name: &str,
    kind: AlgorithmKind,
    table: Vec<Vec<Label>>,
) -> AlgorithmDescriptor {
    let table = Arc::new(table);
    AlgorithmDescriptor::new(name, 0, kind, move |view| table[view.origin()].clone())
}

/// The shipped baselines, by name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Baseline {
    Uniform,
    Constant,
    Parity,
    Proposal,
}

impl Baseline {
    pub const ALL: [Baseline; 4] = [
        Baseline::Uniform,
        Baseline::Constant,
        Baseline::Parity,
        Baseline::Proposal,
    ];

    /// A `radius`-round grabbing algorithm. The parity rule needs `radius >= 1`.
    pub fn build(self, b: usize, radius: usize) -> AlgorithmDescriptor {
        match self {
            Baseline::Uniform => uniform_grab(b, radius),
            Baseline::Constant => constant_grab(b, radius),
            Baseline::Parity => parity_grab(b, radius),
            Baseline::Proposal => proposal_grab(b, radius),
        }
    }

    pub fn available_at(self, radius: usize) -> bool {
        self != Baseline::Parity || radius >= 1
    }
}

impl fmt::Display for Baseline {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Baseline::Uniform => "uniform",
            Baseline::Constant => "constant",
            Baseline::Parity => "parity",
            Baseline::Proposal => "proposal",
        })
    }
}

impl FromStr for Baseline {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Baseline::ALL
            .into_iter()
            .find(|b| b.to_string() == s)
            .ok_or_else(|| format!("unknown baseline {s:?}; expected uniform, constant, parity or proposal"))
    }
}
