//! Error types shared across the library.

use thiserror::Error;

/// Errors produced by model construction and evaluation.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum ModelError {
    /// A constructor argument violated a documented invariant.
    #[error("invalid parameter `{name}`: {reason} (got {value})")]
    InvalidParameter {
        name: &'static str,
        reason: &'static str,
        value: f64,
    },

    /// The compound-cavity loop is lossless and perfectly reflecting at this
    /// phase, so the reflection coefficient has a pole.
    #[error("reflection pole: gamma_c*r1*r2 = 1 with round-trip phase = 0 (mod 2pi)")]
    ReflectionPole,

    /// |R| exceeded unity beyond tolerance; the mirror parameters are not
    /// passive, so no real decay rate exists.
    #[error("model inconsistency: |R| = {magnitude} exceeds 1 beyond tolerance")]
    NonPassiveReflection { magnitude: f64 },

    /// Requested a spectrum at the exact threshold-on-resonance singularity.
    #[error("below-threshold violation: spectrum denominator vanished at delta = {delta}, omega = {omega}")]
    BelowThresholdViolation { delta: f64, omega: f64 },

    /// The quadrature drift matrix has an eigenvalue with non-negative real
    /// part; the linearized dynamics are not stationary.
    #[error("unstable drift: (g*beta)^2 = {pump_sq} >= gamma_s^2 + delta^2 = {bound}")]
    UnstableDrift { pump_sq: f64, bound: f64 },

    /// A curve sample violated the uncertainty-product floor.
    #[error("uncertainty violation: var_x*var_y = {product} < 1 - 1e-9 at delta = {delta}")]
    UncertaintyViolation { product: f64, delta: f64 },

    /// No off-center maximum of the input decay profile inside the window.
    #[error(
        "no mode splitting found in the search window (coupling too weak or window too narrow)"
    )]
    NoSplitting,

    /// Monte Carlo trajectory produced a non-finite sample.
    #[error("non-finite Monte Carlo sample at step {step} of trajectory seeded {seed}")]
    NonFiniteTrajectory { step: usize, seed: u64 },

    /// Scattering solve hit a singular linear system.
    #[error("singular scattering system at omega = {omega}")]
    SingularSystem { omega: f64 },
}

pub type Result<T> = std::result::Result<T, ModelError>;
