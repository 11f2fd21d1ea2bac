use thiserror::Error;

/// Errors raised by the model, the schedulers, the analytic engine and the
/// Monte Carlo driver.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{func} argument out of domain: {detail}")]
    Domain { func: &'static str, detail: String },

    #[error("exhaustive search needs {needed} combinations, budget is {budget}")]
    EnumerationLimit { needed: u128, budget: u64 },

    #[error("quadrature did not converge: estimated error {error:e} after {panels} panels")]
    Quadrature { error: f64, panels: usize },

    #[error("M = {pairs} exceeds the cancellation guard of {cap} for alternating sums")]
    CancellationGuard { pairs: usize, cap: usize },

    #[error("diversity fit needs at least 4 usable points, got {0}")]
    Fit(usize),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn domain(func: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            func,
            detail: detail.into(),
        }
    }
}
