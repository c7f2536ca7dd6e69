//! Independent verifiers of the closed-form spectra, built from the
//! quadrature Langevin equation directly: a frequency-domain scattering
//! solve, a time-domain stochastic Monte Carlo integration, and a Lyapunov
//! solve for the intracavity steady-state covariance.

mod drift;
mod lyapunov;
mod monte_carlo;
mod scattering;
mod welch;

pub use drift::{drift_matrix, DriftMatrix};
pub use lyapunov::{integrated_intracavity_covariance, lyapunov_covariance};
pub use monte_carlo::{mc_variance, mc_variance_seq, McConfig, McEstimate};
pub use scattering::scattering_variance;
pub use welch::psd_at_bin;
