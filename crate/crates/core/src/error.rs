use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} loci, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid symbol {0:?} in semantics string")]
    InvalidSymbol(char),

    #[error("invalid hash swap at locus {locus}")]
    InvalidSwap { locus: usize },

    #[error("controller stuck: every error table fails the ancestor inequality check for {outputs}")]
    ControllerStuck { outputs: String },

    #[error("node budget exceeded: more than {max_nodes} nodes created")]
    BudgetExceeded { max_nodes: usize },

    #[error("tree is not finished")]
    UnfinishedTree,

    #[error("arity mismatch: tree needs {tree} inputs, problem has {problem}")]
    ArityMismatch { tree: usize, problem: usize },

    #[error("invalid benchmark: {0}")]
    InvalidBenchmark(String),

    #[error("problem format: {0}")]
    ProblemFormat(String),

    #[error("invalid trace record: {0}")]
    InvalidTrace(String),

    #[error("s-expression parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },
}
