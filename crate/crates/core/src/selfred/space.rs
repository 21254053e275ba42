use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::local::{BitString, InputConfig, NodeInputs, View};

/// The per-node input distribution: id uniform in `[1, id_range]` and
/// `private_bits` uniform bits, plus `shared_bits` uniform shared bits.
/// Exact enumeration indexes a node's inputs by a state in `0..states()`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputSpace {
    pub id_range: u64,
    pub private_bits: u32,
    pub shared_bits: u32,
}

impl InputSpace {
    pub fn new(n: usize, cfg: &InputConfig) -> Self {
        Self {
            id_range: cfg.id_range(n),
            private_bits: cfg.private_bits,
            shared_bits: cfg.shared_bits,
        }
    }

    pub fn id_bits(&self) -> u32 {
        64 - (self.id_range - 1).leading_zeros()
    }

    /// Enumerated bits per node: private bits plus id bits.
    pub fn bits_per_node(&self) -> u32 {
        self.private_bits + self.id_bits()
    }

    pub fn check_budget(&self, nodes: usize, cap: u32) -> Result<()> {
        let needed = (nodes as u64).saturating_mul(self.bits_per_node() as u64);
        if needed > cap as u64 {
            return Err(Error::BudgetTooLarge {
                needed: needed.min(u32::MAX as u64) as u32,
                cap,
            });
        }
        Ok(())
    }

    pub fn check_shared_budget(&self, cap: u32) -> Result<()> {
        if self.shared_bits > cap {
            return Err(Error::BudgetTooLarge {
                needed: self.shared_bits,
                cap,
            });
        }
        Ok(())
    }

    /// Number of input states of one node.
    pub fn states(&self) -> u64 {
        self.id_range << self.private_bits
    }

    pub fn shared_states(&self) -> u64 {
        1 << self.shared_bits
    }

    pub fn configurations(&self, nodes: usize) -> u64 {
        self.states().pow(nodes as u32)
    }

    pub fn decode(&self, state: u64) -> NodeInputs {
        NodeInputs {
            id: 1 + (state >> self.private_bits),
            port_perm: Vec::new(),
            private_bits: BitString::new(state, self.private_bits),
        }
    }

    pub fn encode(&self, x: &NodeInputs) -> u64 {
        ((x.id - 1) << self.private_bits) | x.private_bits.bits
    }

    pub fn shared(&self, state: u64) -> BitString {
        BitString::new(state, self.shared_bits)
    }

    pub fn sample<R: Rng>(&self, r: &mut R) -> NodeInputs {
        NodeInputs {
            id: r.gen_range(1..=self.id_range),
            port_perm: Vec::new(),
            private_bits: BitString::new(r.gen(), self.private_bits),
        }
    }

    /// Calls `f` once per assignment of states to `view.inputs[fixed..]`,
    /// leaving the first `fixed` entries untouched.
    pub fn enumerate(&self, view: &mut View, fixed: usize, mut f: impl FnMut(&View)) {
        let m = view.inputs.len() - fixed;
        let k = self.states();
        let mut states = vec![0u64; m];
        for j in 0..m {
            view.inputs[fixed + j] = self.decode(0);
        }
        loop {
            f(view);
            let mut j = 0;
            while j < m {
                states[j] += 1;
                if states[j] < k {
                    view.inputs[fixed + j] = self.decode(states[j]);
                    break;
                }
                states[j] = 0;
                view.inputs[fixed + j] = self.decode(0);
                j += 1;
            }
            if j == m {
                return;
            }
        }
    }
}
