use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Error)]
pub enum CoreError {
    #[error("cap exceeded: {what} is {got}, cap is {cap}")]
    CapExceeded {
        what: &'static str,
        got: usize,
        cap: usize,
    },

    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    #[error("root list does not align with components: {0}")]
    ComponentMismatch(String),

    #[error("invalid root: {0}")]
    InvalidRoot(String),

    #[error("invariant broken: {0}")]
    InvariantBroken(String),

    #[error("bad edge: {0}")]
    Edge(String),

    #[error("pattern graph is a clique")]
    IsClique,

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },
}

pub type Result<T> = std::result::Result<T, CoreError>;
