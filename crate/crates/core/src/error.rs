use thiserror::Error;

use crate::lifshitz_engine::EnergyResult;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input that is well-formed but not accepted (unknown tag, unsupported model pairing).
    #[error("rejected input: {0}")]
    Rejected(String),

    /// Drude and plasma permittivities diverge at zero frequency; the caller must take the
    /// limit through the static kernel instead of evaluating ε(0).
    #[error("divergent static limit for {model} at xi = 0")]
    DivergentStaticLimit { model: &'static str },

    #[error("Drude pole at xi = {xi:e} rad/s (gamma = {gamma:e} rad/s); split the integration range")]
    Pole { xi: f64, gamma: f64 },

    #[error("kernel domain violation: {0}")]
    KernelDomain(String),

    #[error("logarithm branch is ambiguous at xi = {xi:e} rad/s, kappa = {kappa:e} rad/m; refine sampling")]
    BranchAmbiguity { xi: f64, kappa: f64 },

    #[error("mode instability: 1 ± αT <= 0 at xi = {xi:e} rad/s")]
    ModeInstability { xi: f64 },

    #[error("no convergence: {reason}")]
    Convergence {
        reason: String,
        partial: Option<Box<EnergyResult>>,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn rejected(msg: impl Into<String>) -> Self {
        Error::Rejected(msg.into())
    }

    pub(crate) fn convergence(reason: impl Into<String>) -> Self {
        Error::Convergence {
            reason: reason.into(),
            partial: None,
        }
    }
}
