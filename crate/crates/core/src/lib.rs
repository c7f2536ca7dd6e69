//! Quadrature noise spectra of vacuum and squeezed optical fields reflected
//! from a compound (hybrid) resonant cavity containing a below-threshold
//! optical parametric amplifier.
//!
//! The library is organized around a dimensionless core (all rates per
//! inverse round-trip time):
//!
//! - [`params`]: physical symbols, validation and unit conversions
//! - [`cavity`]: compound front-reflector transfer function and the
//!   detuning-dependent input coupling it induces
//! - [`spectra`]: closed-form reflected-field quadrature noise covariances
//! - [`oracle`]: independent verifiers (frequency-domain scattering solve,
//!   stochastic Monte Carlo, Lyapunov covariance)
//! - [`analysis`]: channel detection, widths, uncertainty checks and the
//!   pump saturation scan
//!
//! Grid evaluation and Monte Carlo ensembles run data-parallel under the
//! `parallel` feature (enabled by default) with identical results to the
//! sequential fallback.

pub mod analysis;
pub mod cavity;
pub mod error;
pub mod oracle;
pub mod parallel;
pub mod params;
pub mod spectra;

pub use analysis::{
    channel_report, find_extrema, interior_dip_prominence_db, saturation_scan, uncertainty_check,
    ChannelReport, ExtremumKind, SaturationOutcome, SaturationPoint, SaturationScan,
    UncertaintyReport,
};
pub use cavity::{
    decay_profile, effective_input_decay, gamma_in_at, gamma_s_at, mode_splitting,
    reflection_coefficient, ReflectionProfile,
};
pub use error::{ModelError, Result};
pub use oracle::{
    drift_matrix, integrated_intracavity_covariance, lyapunov_covariance, mc_variance,
    mc_variance_seq, scattering_variance, DriftMatrix, McConfig, McEstimate,
};
pub use params::{
    mirror_to_decay, physical_to_units, pump_threshold, units_to_physical, CavityKind, CavityModel,
    GridSpec, MirrorSet, PumpDrive, SqueezedInput,
};
pub use spectra::{
    coefficients, denominator, quadrature_variance, spectrum_curve, spectrum_curve_seq, to_decibel,
    Quadrature, SpectrumCurve, SpectrumParams,
};
