use thiserror::Error;

/// Error type shared by every solver module.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument fails basic validation (non-finite, out of range, wrong length).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An algebraic existence condition for a closed-form state is not satisfied.
    #[error("condition not met: {0}")]
    ConditionNotMet(String),

    /// The requested method cannot run at these parameters (degenerate couplings etc).
    #[error("method not applicable: {0}")]
    MethodNotApplicable(String),

    /// An iterative scheme failed to converge or a numerical guard tripped.
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

pub type Result<T> = std::result::Result<T, Error>;
