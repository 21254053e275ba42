//! LOCAL-model substrate: node inputs, views, and synchronous execution of
//! an algorithm as a pure map from views to half-edge labels.

mod algorithm;
mod inputs;
mod run;
mod view;

pub use algorithm::{labels_from_ports, AlgorithmDescriptor, AlgorithmKind, Label, RuleFn};
pub use inputs::{assign_inputs, BitString, InputConfig, Inputs, NodeInputs, PortMode};
pub use run::{run_algorithm, EdgeClass, EdgeCounts, HalfEdgeLabeling};
pub use view::{extract_view, views_isomorphic, View};
