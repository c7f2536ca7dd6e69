//! Quadrature drift matrix of the linearized signal-mode dynamics.
//!
//! Substituting a = (X + iY)/sqrt(2) into the Langevin equation
//! da/dt = (-i delta - gamma_s) a + p e^{i theta} a^dag + noise gives
//!
//! ```text
//! d/dt [X]   [ -gamma_s + p cos(theta)    delta + p sin(theta) ] [X]
//!      [Y] = [  p sin(theta) - delta     -gamma_s - p cos(theta)] [Y]  + noise
//! ```
//!
//! The pump term is trace-free, so trace(A) = -2 gamma_s; both eigenvalues
//! have negative real part exactly when p^2 < gamma_s^2 + delta^2.

use crate::spectra::SpectrumParams;

/// Real 2x2 drift matrix acting on the quadrature vector (X, Y).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DriftMatrix {
    pub m: [[f64; 2]; 2],
}

impl DriftMatrix {
    pub fn trace(&self) -> f64 {
        self.m[0][0] + self.m[1][1]
    }

    pub fn det(&self) -> f64 {
        self.m[0][0] * self.m[1][1] - self.m[0][1] * self.m[1][0]
    }

    /// Below-threshold (stationary) test: both eigenvalue real parts < 0.
    /// With trace fixed at -2 gamma_s this reduces to det > 0, i.e.
    /// p^2 < gamma_s^2 + delta^2.
    pub fn is_stable(&self) -> bool {
        self.trace() < 0.0 && self.det() > 0.0
    }
}

/// Build the drift matrix for a parameter point.
pub fn drift_matrix(p: &SpectrumParams) -> DriftMatrix {
    let gs = p.gamma_s();
    let (sin_t, cos_t) = p.theta.sin_cos();
    let gb = p.pump;
    DriftMatrix {
        m: [
            [-gs + gb * cos_t, p.delta + gb * sin_t],
            [gb * sin_t - p.delta, -gs - gb * cos_t],
        ],
    }
}
