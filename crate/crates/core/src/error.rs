use thiserror::Error;

/// Errors surfaced by oracles, solvers and the samplers built on them.
#[derive(Debug, Error)]
pub enum Error {
    #[error("oracle `{oracle}` does not provide a {capability} oracle")]
    MissingCapability {
        oracle: String,
        capability: &'static str,
    },
    #[error("numerical failure: {0}")]
    Numeric(String),
    #[error("infeasible: {0}")]
    Infeasible(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("cutting-plane solve did not certify its gap (certified {certified_gap:e}, needed {required_gap:e})")]
    CpNotConverged {
        certified_gap: f64,
        required_gap: f64,
    },
    #[error("proposal budget of {budget} exhausted in rejection sampler")]
    ProposalBudget { budget: u64 },
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
