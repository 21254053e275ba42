use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("n * delta = {n} * {delta} is odd; no regular graph exists")]
    Parity { n: usize, delta: usize },

    #[error("invalid graph parameters: {0}")]
    InvalidParameters(String),

    #[error("no simple pairing found within {attempts} configuration-model attempts")]
    ExhaustedAttempts { attempts: usize },

    #[error("ball contains a cycle; cannot extend it into a tree")]
    NotAcyclic,

    #[error("cannot reach {target} nodes under degree cap {delta}")]
    CannotReach { target: usize, delta: usize },

    #[error("graph file parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("graph is not port consistent at node {node}, port {port}")]
    PortInconsistent { node: usize, port: usize },

    #[error("rule at node {node} labelled {got} half-edges M, expected {expected}")]
    RuleViolation {
        node: usize,
        got: usize,
        expected: usize,
    },

    #[error("exact enumeration needs {needed} bits, cap is {cap}")]
    BudgetTooLarge { needed: u32, cap: u32 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("vector of length {len} exceeds the enumeration limit {limit}")]
    SizeTooLarge { len: usize, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
