//! Frequency-domain solve of the quadrature Langevin equation.
//!
//! For each analysis frequency the intracavity response is
//! x(omega) = G (sqrt(2 gamma_in) u_in + sqrt(2 gamma_out) u_v) with
//! G = (-i omega I - A)^{-1}, and the reflected field follows the standard
//! input-output relation x_out = -u_in + sqrt(2 gamma_in) x. Output variances
//! are the squared transfer magnitudes weighted by the input variances
//! exp(+-2s) on the driven port and 1 on the vacuum port. No reference to
//! the closed-form coefficient set is made anywhere in this path.

use num_complex::Complex64;

use super::drift::drift_matrix;
use crate::error::{ModelError, Result};
use crate::spectra::SpectrumParams;

/// Reflected quadrature variances (d2X, d2Y) from the scattering solve.
pub fn scattering_variance(p: &SpectrumParams) -> Result<(f64, f64)> {
    let a = drift_matrix(p);
    if !a.is_stable() {
        let gs = p.gamma_s();
        return Err(ModelError::UnstableDrift {
            pump_sq: p.pump * p.pump,
            bound: gs * gs + p.delta * p.delta,
        });
    }

    // M = -i omega I - A
    let m = [
        [
            Complex64::new(-a.m[0][0], -p.omega),
            Complex64::new(-a.m[0][1], 0.0),
        ],
        [
            Complex64::new(-a.m[1][0], 0.0),
            Complex64::new(-a.m[1][1], -p.omega),
        ],
    ];
    let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
    if det.norm() < 1e-300 {
        return Err(ModelError::SingularSystem { omega: p.omega });
    }
    // G = M^{-1}
    let g = [
        [m[1][1] / det, -m[0][1] / det],
        [-m[1][0] / det, m[0][0] / det],
    ];

    let two_gin = 2.0 * p.gamma_in;
    let cross = 2.0 * (p.gamma_in * p.gamma_out).sqrt();
    let one = Complex64::new(1.0, 0.0);

    // transfer rows: driven port (squeezed input) and vacuum port
    let t_in = [
        [two_gin * g[0][0] - one, two_gin * g[0][1]],
        [two_gin * g[1][0], two_gin * g[1][1] - one],
    ];
    let t_v = [
        [cross * g[0][0], cross * g[0][1]],
        [cross * g[1][0], cross * g[1][1]],
    ];

    let vx_in = p.input.var_x_in();
    let vy_in = p.input.var_y_in();

    let d2x = t_in[0][0].norm_sqr() * vx_in
        + t_in[0][1].norm_sqr() * vy_in
        + t_v[0][0].norm_sqr()
        + t_v[0][1].norm_sqr();
    let d2y = t_in[1][0].norm_sqr() * vx_in
        + t_in[1][1].norm_sqr() * vy_in
        + t_v[1][0].norm_sqr()
        + t_v[1][1].norm_sqr();
    Ok((d2x, d2y))
}
