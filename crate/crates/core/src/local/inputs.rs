use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::graph::PortedGraph;
use crate::rng;

const INPUT_STREAM: u64 = 0x1_0000;
const SHARED_STREAM: u64 = 0x2_0000;

/// Up to 64 random bits. Bit `i` is `(bits >> i) & 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BitString {
    pub bits: u64,
    pub len: u32,
}

impl BitString {
    pub fn new(bits: u64, len: u32) -> Self {
        assert!(len <= 64, "bit strings hold at most 64 bits");
        let mask = if len == 64 { u64::MAX } else { (1u64 << len) - 1 };
        Self {
            bits: bits & mask,
            len,
        }
    }

    pub fn bit(&self, i: u32) -> bool {
        i < self.len && (self.bits >> i) & 1 == 1
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.len == 0 {
            return f.write_str("-");
        }
        for i in 0..self.len {
            f.write_str(if self.bit(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "-" {
            return Ok(Self::default());
        }
        if s.len() > 64 {
            return Err(format!("bit string longer than 64: {s}"));
        }
        let mut bits = 0u64;
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => {}
                '1' => bits |= 1 << i,
                _ => return Err(format!("bad bit {c:?}")),
            }
        }
        Ok(Self::new(bits, s.len() as u32))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NodeInputs {
    /// Drawn uniformly from `[1, n^c]`; collisions are allowed.
    pub id: u64,
    /// Node-local port relabelling: logical port `k` is physical port
    /// `port_perm[k]`. Empty means identity.
    pub port_perm: Vec<usize>,
    pub private_bits: BitString,
}

/// Per-node inputs plus the one shared bit string.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Inputs {
    pub nodes: Vec<NodeInputs>,
    pub shared: BitString,
}

impl Inputs {
    pub fn ports_fixed(&self) -> bool {
        self.nodes
            .iter()
            .all(|x| x.port_perm.iter().enumerate().all(|(k, &p)| k == p))
    }

    pub fn perms(&self) -> Vec<Vec<usize>> {
        self.nodes.iter().map(|x| x.port_perm.clone()).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PortMode {
    /// Keep the ports chosen when the graph was built.
    Fixed,
    /// Each node relabels its ports by a fresh uniform permutation.
    #[default]
    Rerandomized,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputConfig {
    /// IDs are drawn from `[1, n^id_exponent]`.
    pub id_exponent: u32,
    pub private_bits: u32,
    pub shared_bits: u32,
    pub port_mode: PortMode,
}

impl Default for InputConfig {
    fn default() -> Self {
        Self {
            id_exponent: 1,
            private_bits: 64,
            shared_bits: 64,
            port_mode: PortMode::Rerandomized,
        }
    }
}

impl InputConfig {
    /// Small budgets for exact enumeration.
    pub fn exact() -> Self {
        Self {
            id_exponent: 1,
            private_bits: 2,
            shared_bits: 0,
            port_mode: PortMode::Fixed,
        }
    }

    pub fn id_range(&self, n: usize) -> u64 {
        (n as u64).saturating_pow(self.id_exponent).max(1)
    }

    pub fn with_bits(mut self, private_bits: u32, shared_bits: u32) -> Self {
        self.private_bits = private_bits;
        self.shared_bits = shared_bits;
        self
    }

    pub fn with_port_mode(mut self, port_mode: PortMode) -> Self {
        self.port_mode = port_mode;
        self
    }
}

/// Draws every node's inputs from its own counter-addressed substream of
/// `seed`, so the result is reproducible and node streams are independent.
pub fn assign_inputs(g: &PortedGraph, seed: u64, cfg: &InputConfig) -> Inputs {
    assert!(cfg.id_exponent >= 1, "id exponent must be >= 1");
    let id_range = cfg.id_range(g.n());
    let nodes = (0..g.n())
        .map(|v| {
            let mut r = rng::stream2(seed, INPUT_STREAM, v as u64);
            let id = r.gen_range(1..=id_range);
            let private_bits = BitString::new(r.gen(), cfg.private_bits);
            // Fixed ports leave the permutation empty, meaning identity.
            let mut port_perm = Vec::new();
            if cfg.port_mode == PortMode::Rerandomized {
                port_perm = (0..g.delta()).collect();
                port_perm.shuffle(&mut r);
            }
            NodeInputs {
                id,
                port_perm,
                private_bits,
            }
        })
        .collect();
    let mut r = rng::stream2(seed, SHARED_STREAM, 0);
    Inputs {
        nodes,
        shared: BitString::new(r.gen(), cfg.shared_bits),
    }
}

/// Sidecar format: `shared: <bits>` then `v: id perm bits`, with the
/// permutation comma-separated and `-` for an empty bit string.
impl fmt::Display for Inputs {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "shared: {}", self.shared)?;
        for (v, x) in self.nodes.iter().enumerate() {
            let perm: Vec<String> = x.port_perm.iter().map(|p| p.to_string()).collect();
            let perm = if perm.is_empty() {
                "-".to_string()
            } else {
                perm.join(",")
            };
            writeln!(f, "{v}: {} {perm} {}", x.id, x.private_bits)?;
        }
        Ok(())
    }
}

impl FromStr for Inputs {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = |line: usize, msg: String| Error::Parse { line, msg };
        let mut lines = s
            .lines()
            .enumerate()
            .map(|(i, l)| (i + 1, l.trim()))
            .filter(|(_, l)| !l.is_empty());
        let (hl, header) = lines.next().ok_or_else(|| err(1, "empty input file".into()))?;
        let shared = header
            .strip_prefix("shared:")
            .ok_or_else(|| err(hl, "expected `shared:` header".into()))?
            .trim()
            .parse()
            .map_err(|e| err(hl, e))?;
        let mut nodes = Vec::new();
        for (ln, line) in lines {
            let (v, rest) = line
                .split_once(':')
                .ok_or_else(|| err(ln, "missing `:`".into()))?;
            let v: usize = v.trim().parse().map_err(|_| err(ln, "bad node".into()))?;
            if v != nodes.len() {
                return Err(err(ln, format!("expected node {}, found {v}", nodes.len())));
            }
            let fields: Vec<&str> = rest.split_whitespace().collect();
            let [id, perm, bits] = fields[..] else {
                return Err(err(ln, "expected `id perm bits`".into()));
            };
            let id = id.parse().map_err(|_| err(ln, "bad id".into()))?;
            let port_perm = if perm == "-" {
                Vec::new()
            } else {
                perm.split(',')
                    .map(|p| p.parse().map_err(|_| err(ln, "bad permutation".into())))
                    .collect::<Result<_, _>>()?
            };
            let private_bits = bits.parse().map_err(|e| err(ln, e))?;
            nodes.push(NodeInputs {
                id,
                port_perm,
                private_bits,
            });
        }
        Ok(Inputs { nodes, shared })
    }
}
