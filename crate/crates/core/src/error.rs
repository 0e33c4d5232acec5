//! Error type shared by every module of the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by state constructors, evolution, measurement and
/// capacity routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Squeezing fraction outside the physical open interval `[0, 1)`.
    #[error("squeezing fraction lambda = {0} outside [0, 1)")]
    LambdaOutOfRange(f64),

    /// A rate or time that must be nonnegative was negative.
    #[error("{name} = {value} must be nonnegative")]
    NegativeParameter { name: &'static str, value: f64 },

    /// A variance that must be nonnegative (or positive) was not.
    #[error("invalid variance {name} = {value}")]
    InvalidVariance { name: &'static str, value: f64 },

    /// Covariance matrix failed a structural contract (symmetry,
    /// positive semidefiniteness, isotropy).
    #[error("covariance contract violated: {0}")]
    InvalidCovariance(String),

    /// A matrix passed as symplectic does not preserve the symplectic form.
    #[error("matrix is not symplectic (max deviation {0:.3e})")]
    NotSymplectic(f64),

    /// Squeezing photons exceed the mean-photon budget.
    #[error("power constraint violated: squeezing photons {squeeze} exceed budget N = {budget}")]
    PowerConstraint { squeeze: f64, budget: f64 },

    /// Generator conjugation requested for an asymmetric bath, where the
    /// frequency-converted master equation grows cross-mode terms.
    #[error("asymmetric bath (n_a = {n_a}, n_b = {n_b}, m_a = {m_a}, m_b = {m_b}): conjugation unsupported")]
    AsymmetricBath { n_a: f64, n_b: f64, m_a: f64, m_b: f64 },

    /// Operation defined only for the phase-insensitive generator kind.
    #[error("operation requires the phase-insensitive (pia) generator kind")]
    RequiresPiaKind,

    /// Fock-space truncation cannot represent the requested state or
    /// operator within the tail-weight bound.
    #[error("truncation tail weight {weight:.3e} exceeds bound {bound:.3e} (n_max = {n_max})")]
    TruncationTail { weight: f64, bound: f64, n_max: usize },

    /// Fixed-step Lindblad integration failed the step-halving
    /// consistency check.
    #[error("integration unstable: halving the step changed moments by {deviation:.3e} (> {tolerance:.3e}); increase steps")]
    UnstableIntegration { deviation: f64, tolerance: f64 },

    /// Objective failed the unimodality pre-scan required by the
    /// bracketed scalar optimizer.
    #[error("objective is not unimodal on the feasible interval ({0} interior local maxima)")]
    NotUnimodal(usize),

    /// Signal magnitude must be positive.
    #[error("signal magnitude {0} must be positive")]
    NonPositiveSignal(f64),
}
