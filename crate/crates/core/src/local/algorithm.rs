use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::view::View;

/// Output on one half-edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Label {
    /// Grabbed (grabbing) or claimed for the matching (matching).
    M,
    U,
    Color(u32),
}

impl Label {
    pub fn is_m(self) -> bool {
        self == Label::M
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Label::M => f.write_str("M"),
            Label::U => f.write_str("U"),
            Label::Color(c) => write!(f, "{c}"),
        }
    }
}

impl std::str::FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "M" => Ok(Label::M),
            "U" => Ok(Label::U),
            _ => s
                .parse()
                .map(Label::Color)
                .map_err(|_| format!("bad label {s:?}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgorithmKind {
    /// Exactly `b` ports labelled `M` per node.
    Grabbing { b: usize },
    /// Ports labelled `M` form the node's claimed set `P_v`.
    Matching { b: usize },
    /// One colour in `0..palette` per port.
    EdgeColoring { palette: usize },
}

pub type RuleFn = dyn Fn(&View) -> Vec<Label> + Send + Sync;

/// A `radius`-round algorithm, written as a pure map from the centre's
/// radius-`radius` view to the labels on the centre's ports.
#[derive(Clone)]
pub struct AlgorithmDescriptor {
    pub name: String,
    pub radius: usize,
    pub kind: AlgorithmKind,
    rule: Arc<RuleFn>,
}

impl fmt::Debug for AlgorithmDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("AlgorithmDescriptor")
            .field("name", &self.name)
            .field("radius", &self.radius)
            .field("kind", &self.kind)
            .finish_non_exhaustive()
    }
}

impl AlgorithmDescriptor {
    pub fn new<F>(name: impl Into<String>, radius: usize, kind: AlgorithmKind, rule: F) -> Self
    where
        F: Fn(&View) -> Vec<Label> + Send + Sync + 'static,
    {
        Self {
            name: name.into(),
            radius,
            kind,
            rule: Arc::new(rule),
        }
    }

    /// Applies the rule. The view must have radius `self.radius`.
    pub fn evaluate(&self, view: &View) -> Vec<Label> {
        debug_assert_eq!(view.radius(), self.radius);
        (self.rule)(view)
    }

    pub fn grabbing_bound(&self) -> Option<usize> {
        match self.kind {
            AlgorithmKind::Grabbing { b } => Some(b),
            _ => None,
        }
    }
}

/// `M` on the listed ports, `U` elsewhere.
pub fn labels_from_ports(ports: usize, grabbed: impl IntoIterator<Item = usize>) -> Vec<Label> {
    let mut out = vec![Label::U; ports];
    for p in grabbed {
        out[p] = Label::M;
    }
    out
}
