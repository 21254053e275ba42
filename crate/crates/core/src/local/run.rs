use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::algorithm::{AlgorithmDescriptor, AlgorithmKind, Label};
use super::inputs::Inputs;
use super::view::extract_view;
use crate::error::{Error, Result};
use crate::graph::{Edge, PortedGraph};
use crate::par_map;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EdgeClass {
    MM,
    MU,
    UU,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeCounts {
    pub mm: usize,
    pub mu: usize,
    pub uu: usize,
}

/// One label per half-edge `(v, port)`, indexed by physical port.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfEdgeLabeling {
    pub labels: Vec<Vec<Label>>,
}

impl HalfEdgeLabeling {
    pub fn label(&self, v: usize, p: usize) -> Label {
        self.labels[v][p]
    }

    pub fn edge_class(&self, e: &Edge) -> EdgeClass {
        match (self.label(e.u, e.pu).is_m(), self.label(e.w, e.pw).is_m()) {
            (true, true) => EdgeClass::MM,
            (false, false) => EdgeClass::UU,
            _ => EdgeClass::MU,
        }
    }

    pub fn edge_counts(&self, g: &PortedGraph) -> EdgeCounts {
        let mut c = EdgeCounts::default();
        for e in g.edges() {
            match self.edge_class(&e) {
                EdgeClass::MM => c.mm += 1,
                EdgeClass::MU => c.mu += 1,
                EdgeClass::UU => c.uu += 1,
            }
        }
        c
    }

    /// Half-edges at `v` labelled `M`.
    pub fn h_m(&self, v: usize) -> usize {
        self.labels[v].iter().filter(|l| l.is_m()).count()
    }

    /// Ports labelled `M`, per node.
    pub fn port_sets(&self) -> Vec<Vec<usize>> {
        self.labels
            .iter()
            .map(|ls| (0..ls.len()).filter(|&p| ls[p].is_m()).collect())
            .collect()
    }
}

impl fmt::Display for HalfEdgeLabeling {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, ls) in self.labels.iter().enumerate() {
            write!(f, "{v}:")?;
            for l in ls {
                write!(f, " {l}")?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

impl FromStr for HalfEdgeLabeling {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let mut labels = Vec::new();
        for (i, line) in s.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
            let err = |msg: String| Error::Parse { line: i + 1, msg };
            let (v, rest) = line.split_once(':').ok_or_else(|| err("missing `:`".into()))?;
            if v.trim().parse::<usize>().ok() != Some(labels.len()) {
                return Err(err(format!("expected node {}", labels.len())));
            }
            let row = rest
                .split_whitespace()
                .map(|t| t.parse::<Label>().map_err(&err))
                .collect::<Result<Vec<_>>>()?;
            labels.push(row);
        }
        Ok(Self { labels })
    }
}

/// Evaluates `alg` on every node's radius-`alg.radius` view.
///
/// Each node's port permutation is applied first, the rule sees the
/// relabelled ports, and outputs are written back on physical ports.
/// Grabbing rules that emit a number of `M` labels other than `b` surface
/// as [`Error::RuleViolation`] at the lowest offending node.
pub fn run_algorithm(
    g: &PortedGraph,
    inputs: &Inputs,
    alg: &AlgorithmDescriptor,
) -> Result<HalfEdgeLabeling> {
    let fixed = inputs.ports_fixed();
    let permuted;
    let effective = if fixed {
        g
    } else {
        permuted = g.permute_ports(&inputs.perms());
        &permuted
    };
    let logical = par_map(g.n(), |v| {
        alg.evaluate(&extract_view(effective, inputs, v, alg.radius))
    });

    if let AlgorithmKind::Grabbing { b } = alg.kind {
        for (v, ls) in logical.iter().enumerate() {
            let got = ls.iter().filter(|l| l.is_m()).count();
            if got != b {
                return Err(Error::RuleViolation {
                    node: v,
                    got,
                    expected: b,
                });
            }
        }
    }

    let labels = if fixed {
        logical
    } else {
        logical
            .into_iter()
            .enumerate()
            .map(|(v, ls)| {
                let mut physical = vec![Label::U; ls.len()];
                for (k, l) in ls.into_iter().enumerate() {
                    physical[inputs.nodes[v].port_perm[k]] = l;
                }
                physical
            })
            .collect()
    };
    Ok(HalfEdgeLabeling { labels })
}
