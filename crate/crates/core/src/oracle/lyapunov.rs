//! Steady-state intracavity covariance from the Lyapunov equation
//! A V + V A^T + D = 0, where D is the diffusion matrix implied by the bath
//! correlations: D = diag(gamma_in e^{2s} + gamma_out,
//! gamma_in e^{-2s} + gamma_out). With the X = (a + a^dag)/sqrt(2)
//! convention the vacuum intracavity covariance is V = I/2.
//!
//! The same covariance must equal the frequency integral of the intracavity
//! spectrum G D G^dag / (2 pi) from the scattering picture; that integral is
//! provided here as a consistency check.

use num_complex::Complex64;

use super::drift::drift_matrix;
use crate::error::{ModelError, Result};
use crate::spectra::SpectrumParams;

fn diffusion(p: &SpectrumParams) -> [f64; 2] {
    [
        p.gamma_in * p.input.var_x_in() + p.gamma_out,
        p.gamma_in * p.input.var_y_in() + p.gamma_out,
    ]
}

/// Solve A V + V A^T + D = 0 for the symmetric 2x2 covariance V.
pub fn lyapunov_covariance(p: &SpectrumParams) -> Result<[[f64; 2]; 2]> {
    let drift = drift_matrix(p);
    if !drift.is_stable() {
        let gs = p.gamma_s();
        return Err(ModelError::UnstableDrift {
            pump_sq: p.pump * p.pump,
            bound: gs * gs + p.delta * p.delta,
        });
    }
    let [[a, b], [c, d]] = drift.m;
    let dm = diffusion(p);

    // unknowns (v11, v12, v22):
    //   2a v11 + 2b v12            = -D11
    //    c v11 + (a+d) v12 + b v22 = 0
    //             2c v12 + 2d v22  = -D22
    let m = [
        [2.0 * a, 2.0 * b, 0.0],
        [c, a + d, b],
        [0.0, 2.0 * c, 2.0 * d],
    ];
    let rhs = [-dm[0], 0.0, -dm[1]];
    let v = solve3(m, rhs).ok_or(ModelError::SingularSystem { omega: 0.0 })?;
    Ok([[v[0], v[1]], [v[1], v[2]]])
}

#[allow(clippy::needless_range_loop)]
fn solve3(mut m: [[f64; 3]; 3], mut b: [f64; 3]) -> Option<[f64; 3]> {
    // Gaussian elimination with partial pivoting
    for col in 0..3 {
        let mut piv = col;
        for row in col + 1..3 {
            if m[row][col].abs() > m[piv][col].abs() {
                piv = row;
            }
        }
        if m[piv][col].abs() < 1e-300 {
            return None;
        }
        m.swap(col, piv);
        b.swap(col, piv);
        for row in col + 1..3 {
            let f = m[row][col] / m[col][col];
            for k in col..3 {
                m[row][k] -= f * m[col][k];
            }
            b[row] -= f * b[col];
        }
    }
    let mut x = [0.0; 3];
    for row in (0..3).rev() {
        let mut s = b[row];
        for k in row + 1..3 {
            s -= m[row][k] * x[k];
        }
        x[row] = s / m[row][row];
    }
    Some(x)
}

/// Frequency integral of the intracavity spectrum
/// V = (1/2pi) Int G(omega) D G(omega)^dag domega, evaluated by Simpson's
/// rule on the substitution omega = sigma tan(u).
#[allow(clippy::needless_range_loop)]
pub fn integrated_intracavity_covariance(p: &SpectrumParams, n: usize) -> Result<[[f64; 2]; 2]> {
    let drift = drift_matrix(p);
    if !drift.is_stable() {
        let gs = p.gamma_s();
        return Err(ModelError::UnstableDrift {
            pump_sq: p.pump * p.pump,
            bound: gs * gs + p.delta * p.delta,
        });
    }
    let a = drift.m;
    let dm = diffusion(p);
    let sigma = p.gamma_s() + p.delta.abs() + p.pump;
    let n = if n.is_multiple_of(2) { n + 1 } else { n }; // Simpson needs an odd count
    let hu = std::f64::consts::PI / (n - 1) as f64;

    let integrand = |u: f64| -> [[f64; 2]; 2] {
        let t = u.tan();
        let omega = sigma * t;
        let jac = sigma * (1.0 + t * t);
        // G = (-i omega I - A)^{-1}
        let m00 = Complex64::new(-a[0][0], -omega);
        let m01 = Complex64::new(-a[0][1], 0.0);
        let m10 = Complex64::new(-a[1][0], 0.0);
        let m11 = Complex64::new(-a[1][1], -omega);
        let det = m00 * m11 - m01 * m10;
        let g = [[m11 / det, -m01 / det], [-m10 / det, m00 / det]];
        // S = G D G^dag (real part; the result is Hermitian)
        let mut s = [[0.0; 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..2 {
                    acc += g[i][k] * dm[k] * g[j][k].conj();
                }
                s[i][j] = acc.re * jac;
            }
        }
        s
    };

    let mut acc = [[0.0; 2]; 2];
    for i in 0..n {
        let u = -std::f64::consts::FRAC_PI_2 + i as f64 * hu;
        // avoid the exact endpoints where tan diverges; integrand ~ 1/omega^2
        let u = u.clamp(
            -std::f64::consts::FRAC_PI_2 + 1e-9,
            std::f64::consts::FRAC_PI_2 - 1e-9,
        );
        let w = if i == 0 || i == n - 1 {
            1.0
        } else if i % 2 == 1 {
            4.0
        } else {
            2.0
        };
        let s = integrand(u);
        for r in 0..2 {
            for c in 0..2 {
                acc[r][c] += w * s[r][c];
            }
        }
    }
    let scale = hu / 3.0 / (2.0 * std::f64::consts::PI);
    for r in 0..2 {
        for c in 0..2 {
            acc[r][c] *= scale;
        }
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::SqueezedInput;

    #[test]
    fn vacuum_covariance_is_half_identity() {
        let p = SpectrumParams::new(0.0, 0.0, 0.3, 0.2, 0.0, 0.0, 0.0, SqueezedInput::vacuum())
            .unwrap();
        let v = lyapunov_covariance(&p).unwrap();
        assert!((v[0][0] - 0.5).abs() < 1e-14);
        assert!((v[1][1] - 0.5).abs() < 1e-14);
        assert!(v[0][1].abs() < 1e-14);
    }

    #[test]
    fn resonant_pump_gives_diagonal_covariance() {
        let p = SpectrumParams::new(0.0, 0.0, 0.5, 0.1, 0.0, 0.3, 0.0, SqueezedInput::vacuum())
            .unwrap();
        let v = lyapunov_covariance(&p).unwrap();
        assert!(v[0][1].abs() < 1e-14);
        // hand solve: v11 = D11 / (2(gs - p)), v22 = D22 / (2(gs + p))
        let gs = p.gamma_s();
        assert!((v[0][0] - 0.6 / (2.0 * (gs - 0.3))).abs() < 1e-14);
        assert!((v[1][1] - 0.6 / (2.0 * (gs + 0.3))).abs() < 1e-14);
    }

    #[test]
    fn covariance_is_symmetric_positive() {
        let p = SpectrumParams::new(
            0.4,
            0.0,
            0.3,
            0.1,
            0.0,
            0.2,
            1.1,
            SqueezedInput::new(0.5).unwrap(),
        )
        .unwrap();
        let v = lyapunov_covariance(&p).unwrap();
        assert!((v[0][1] - v[1][0]).abs() < 1e-14);
        assert!(v[0][0] > 0.0 && v[1][1] > 0.0);
        assert!(v[0][0] * v[1][1] - v[0][1] * v[0][1] > 0.0);
    }

    #[test]
    fn frequency_integral_reproduces_lyapunov() {
        for &(d, f, th, s) in &[
            (0.0, 0.0, 0.0, 0.0),
            (0.5, 0.4, 2.0, 0.5),
            (-1.2, 0.7, 4.1, 0.2),
        ] {
            let p = SpectrumParams::new(
                d,
                0.0,
                0.3,
                0.1,
                0.05,
                f * 0.45,
                th,
                SqueezedInput::new(s).unwrap(),
            )
            .unwrap();
            let v = lyapunov_covariance(&p).unwrap();
            let vi = integrated_intracavity_covariance(&p, 20_001).unwrap();
            for r in 0..2 {
                for c in 0..2 {
                    let scale = v[0][0].abs() + v[1][1].abs();
                    assert!(
                        (v[r][c] - vi[r][c]).abs() <= 1e-4 * scale,
                        "V[{r}][{c}]: {} vs {}",
                        v[r][c],
                        vi[r][c]
                    );
                }
            }
        }
    }

    #[test]
    fn unstable_drift_is_rejected() {
        let p = SpectrumParams::new(0.0, 0.0, 0.3, 0.0, 0.0, 0.4, 0.0, SqueezedInput::vacuum())
            .unwrap();
        assert!(matches!(
            lyapunov_covariance(&p),
            Err(ModelError::UnstableDrift { .. })
        ));
    }
}
