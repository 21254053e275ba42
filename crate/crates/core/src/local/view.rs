use std::sync::Arc;

use super::inputs::{BitString, Inputs, NodeInputs};
use crate::graph::{extract_ball, Ball, PortedGraph};

/// Everything a node can know after `radius` rounds: the ball around it,
/// the inputs of every node in the ball, and the shared bits.
#[derive(Debug, Clone, PartialEq)]
pub struct View {
    pub ball: Arc<Ball>,
    /// Inputs per ball node, indexed like `ball`.
    pub inputs: Vec<NodeInputs>,
    pub shared: BitString,
}

impl View {
    pub fn radius(&self) -> usize {
        self.ball.radius
    }

    pub fn center(&self) -> &NodeInputs {
        &self.inputs[Ball::CENTER]
    }

    /// Number of port slots at the centre.
    pub fn ports(&self) -> usize {
        self.ball.graph.delta()
    }

    /// Index of the centre in the source graph. Not part of the information
    /// carried by the view; rules derived against a fixed topology use it to
    /// locate the view inside that topology.
    pub fn origin(&self) -> usize {
        self.ball.origin[Ball::CENTER]
    }

    /// Encoding that is equal for two views iff they are isomorphic.
    pub fn canonical_key(&self) -> Vec<u64> {
        let (mut key, order) = self.ball.canonical_order();
        key.push(self.ports() as u64);
        key.push(self.shared.bits);
        key.push(self.shared.len as u64);
        for &u in &order {
            let x = &self.inputs[u];
            key.push(x.id);
            key.push(x.private_bits.bits);
            key.push(x.private_bits.len as u64);
            key.push(x.port_perm.len() as u64);
            key.extend(x.port_perm.iter().map(|&p| p as u64));
        }
        key
    }
}

/// Radius-`radius` view of `v`. Shared bits are always included.
pub fn extract_view(g: &PortedGraph, inputs: &Inputs, v: usize, radius: usize) -> View {
    let ball = extract_ball(g, v, radius);
    let node_inputs = ball.origin.iter().map(|&u| inputs.nodes[u].clone()).collect();
    View {
        ball: Arc::new(ball),
        inputs: node_inputs,
        shared: inputs.shared,
    }
}

/// True iff a centre-preserving isomorphism maps one view onto the other
/// preserving ports, ids, port permutations, private bits and shared bits.
pub fn views_isomorphic(a: &View, b: &View) -> bool {
    a.canonical_key() == b.canonical_key()
}
