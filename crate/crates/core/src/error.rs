use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A caller broke an operation's precondition.
    #[error("contract violated: {0}")]
    Contract(String),

    #[error("positivity certification failed: {0}")]
    Positivity(String),

    #[error("degenerate point: {0}")]
    Degenerate(String),

    /// A replacement twistor vanished; the caller should draw another ray.
    #[error("ray is not generic for window {0}")]
    NonGenericRay(String),

    /// The origin of V_Y lies on the polytope, so the winding is not defined.
    #[error("winding number undefined: {0}")]
    WindingUndefined(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::Contract(msg.into())
}
