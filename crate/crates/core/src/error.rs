use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid Cayley table: {0}")]
    InvalidTable(String),

    #[error("subgroup is not central in {group}")]
    NotCentral { group: String },

    #[error("{what}: search budget exceeded (needed {needed}, allowed {allowed})")]
    BudgetExceeded {
        what: &'static str,
        needed: String,
        allowed: String,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("no purity witness: the centre of {0} is pure")]
    NoWitness(String),

    #[error("function family certification failed: {0}")]
    Certification(String),

    #[error("variable {0} has no assigned value")]
    MissingAssignment(usize),

    #[error("assignment does not solve the equation")]
    NotASolution,

    /// A computation contradicted a theorem it relies on. Never expected.
    #[error("internal consistency failure: {0}")]
    Internal(String),
}

impl Error {
    pub(crate) fn budget(what: &'static str, needed: impl ToString, allowed: impl ToString) -> Self {
        Error::BudgetExceeded {
            what,
            needed: needed.to_string(),
            allowed: allowed.to_string(),
        }
    }

    pub fn is_budget(&self) -> bool {
        matches!(self, Error::BudgetExceeded { .. })
    }
}
