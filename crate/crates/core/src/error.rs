use thiserror::Error;

use crate::game::Diagnostic;
use crate::lp::LpError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("invalid input ({} problem(s)): {}", .0.len(), first(.0))]
    Invalid(Vec<Diagnostic>),
    #[error("{0}")]
    Domain(String),
    #[error("size limit exceeded: {0}")]
    TooLarge(String),
    #[error("core is empty")]
    EmptyCore,
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

fn first(diags: &[Diagnostic]) -> String {
    diags.first().map(|d| d.to_string()).unwrap_or_default()
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
