//! Closed-form reflected-field quadrature noise covariances.
//!
//! For the intracavity signal mode with total decay gamma_s, input coupling
//! gamma_in, vacuum-port coupling gamma_out and pump coupling p = g*beta at
//! phase theta, the reflected quadrature variances normalized to the
//! shot-noise limit are
//!
//! ```text
//! d2k(omega) = (P_k V_k^in + Q_k V_k'^in + M_k + N_k) / D
//!
//! P_k = [gs(2*gin - gs) + w^2 - d^2 + p^2 +- 2*p*gin*cos(theta)]^2
//!       + 4 w^2 (gs - gin)^2
//! Q_k = 4 gin^2 (d +- p sin(theta))^2
//! M_k = 4 gin gout [(gs +- p cos(theta))^2 + w^2]
//! N_k = 4 gin gout (d +- p sin(theta))^2
//! D   = [gs^2 + d^2 - w^2 - p^2]^2 + 4 (w gs)^2
//! ```
//!
//! with d = delta*tau, w = omega*tau, upper signs for the amplitude
//! quadrature X and lower signs for the phase quadrature Y. The driven port
//! carries the squeezed input variances exp(+-2s) (exp(+2s) on X), the
//! vacuum port carries unit variances. The intracavity decay gamma_0
//! contributes to gamma_s but has no noise port in this closed form, so
//! passivity (unit output variance for a cold cavity) holds exactly only for
//! gamma_0 = 0.
//!
//! Each squared bracket is grouped before squaring, keeping the evaluation
//! free of catastrophic cancellation.

use crate::cavity;
use crate::error::{ModelError, Result};
use crate::parallel::{maybe_par_map, seq_map};
use crate::params::{CavityModel, GridSpec, PumpDrive, SqueezedInput};

/// Field quadrature selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Quadrature {
    /// Amplitude quadrature X = (a + a^dag)/sqrt(2); plus signs.
    X,
    /// Phase quadrature Y = i (a^dag - a)/sqrt(2); minus signs.
    Y,
}

impl Quadrature {
    fn sign(self) -> f64 {
        match self {
            Quadrature::X => 1.0,
            Quadrature::Y => -1.0,
        }
    }
}

/// Full dimensionless parameter set of one spectrum evaluation point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectrumParams {
    /// Detuning times tau.
    pub delta: f64,
    /// Analysis frequency times tau.
    pub omega: f64,
    pub gamma_in: f64,
    pub gamma_out: f64,
    pub gamma_0: f64,
    /// Pump coupling p = g*beta.
    pub pump: f64,
    /// Pump phase (radians).
    pub theta: f64,
    pub input: SqueezedInput,
}

impl SpectrumParams {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        delta: f64,
        omega: f64,
        gamma_in: f64,
        gamma_out: f64,
        gamma_0: f64,
        pump: f64,
        theta: f64,
        input: SqueezedInput,
    ) -> Result<Self> {
        for (name, v, min) in [
            ("gamma_in", gamma_in, 0.0),
            ("gamma_out", gamma_out, 0.0),
            ("gamma_0", gamma_0, 0.0),
            ("pump", pump, 0.0),
        ] {
            if !v.is_finite() || v < min {
                return Err(ModelError::InvalidParameter {
                    name,
                    reason: "rate must be finite and non-negative",
                    value: v,
                });
            }
        }
        if !delta.is_finite() || !omega.is_finite() || !theta.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "delta/omega/theta",
                reason: "must be finite",
                value: f64::NAN,
            });
        }
        let p = Self {
            delta,
            omega,
            gamma_in,
            gamma_out,
            gamma_0,
            pump,
            theta,
            input,
        };
        if p.gamma_s() <= 0.0 {
            return Err(ModelError::InvalidParameter {
                name: "gamma_s",
                reason: "total decay rate must be strictly positive",
                value: p.gamma_s(),
            });
        }
        Ok(p)
    }

    /// Total decay rate gamma_s = gamma_in + gamma_0 + gamma_out.
    pub fn gamma_s(&self) -> f64 {
        self.gamma_in + self.gamma_0 + self.gamma_out
    }
}

/// Numerator coefficients (P_k, Q_k, M_k, N_k) for one quadrature.
pub fn coefficients(k: Quadrature, p: &SpectrumParams) -> (f64, f64, f64, f64) {
    let sg = k.sign();
    let gs = p.gamma_s();
    let gin = p.gamma_in;
    let gout = p.gamma_out;
    let (sin_t, cos_t) = p.theta.sin_cos();
    let d = p.delta;
    let w = p.omega;
    let gb = p.pump;

    let p_bracket = gs * (2.0 * gin - gs) + w * w - d * d + gb * gb + sg * 2.0 * gb * gin * cos_t;
    let p_k = p_bracket * p_bracket + 4.0 * w * w * (gs - gin) * (gs - gin);

    let q_bracket = d + sg * gb * sin_t;
    let q_k = 4.0 * gin * gin * q_bracket * q_bracket;

    let m_bracket = gs + sg * gb * cos_t;
    let m_k = 4.0 * gin * gout * (m_bracket * m_bracket + w * w);

    let n_k = 4.0 * gin * gout * q_bracket * q_bracket;

    (p_k, q_k, m_k, n_k)
}

/// Shared denominator of both quadrature spectra; non-negative, vanishing
/// only at the exact threshold-on-resonance singularity.
pub fn denominator(p: &SpectrumParams) -> f64 {
    let gs = p.gamma_s();
    let bracket = gs * gs + p.delta * p.delta - p.omega * p.omega - p.pump * p.pump;
    bracket * bracket + 4.0 * (p.omega * gs) * (p.omega * gs)
}

/// Reflected-field noise variance of one quadrature, normalized to SNL = 1.
pub fn quadrature_variance(k: Quadrature, p: &SpectrumParams) -> Result<f64> {
    let den = denominator(p);
    if den < 1e-300 {
        return Err(ModelError::BelowThresholdViolation {
            delta: p.delta,
            omega: p.omega,
        });
    }
    let (pk, qk, mk, nk) = coefficients(k, p);
    let (v_same, v_conj) = match k {
        Quadrature::X => (p.input.var_x_in(), p.input.var_y_in()),
        Quadrature::Y => (p.input.var_y_in(), p.input.var_x_in()),
    };
    Ok((pk * v_same + qk * v_conj + mk + nk) / den)
}

/// Variance expressed in dB relative to the shot-noise limit.
pub fn to_decibel(variance: f64) -> Result<f64> {
    if !variance.is_finite() || variance <= 0.0 {
        return Err(ModelError::InvalidParameter {
            name: "variance",
            reason: "dB conversion needs a positive finite variance",
            value: variance,
        });
    }
    Ok(10.0 * variance.log10())
}

/// Sampled quadrature noise spectra over a detuning grid, with the
/// parameters that produced them.
#[derive(Debug, Clone)]
pub struct SpectrumCurve {
    pub detunings: Vec<f64>,
    pub var_x: Vec<f64>,
    pub var_y: Vec<f64>,
    pub meta: CurveMeta,
}

/// Snapshot of the inputs a curve was generated from.
#[derive(Debug, Clone)]
pub struct CurveMeta {
    pub omega: f64,
    pub pump_fraction: f64,
    pub pump_coupling: f64,
    pub theta: f64,
    pub squeeze_index: f64,
    pub gamma_s0: f64,
    pub tau: f64,
}

impl SpectrumCurve {
    pub fn len(&self) -> usize {
        self.detunings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.detunings.is_empty()
    }

    pub fn var_x_db(&self) -> Vec<f64> {
        self.var_x.iter().map(|&v| 10.0 * v.log10()).collect()
    }

    pub fn var_y_db(&self) -> Vec<f64> {
        self.var_y.iter().map(|&v| 10.0 * v.log10()).collect()
    }

    pub fn values(&self, k: Quadrature) -> &[f64] {
        match k {
            Quadrature::X => &self.var_x,
            Quadrature::Y => &self.var_y,
        }
    }
}

fn params_at(
    cavity: &CavityModel,
    pump_coupling: f64,
    theta: f64,
    input: SqueezedInput,
    omega: f64,
    delta: f64,
    gamma_in: f64,
) -> SpectrumParams {
    SpectrumParams {
        delta,
        omega,
        gamma_in,
        gamma_out: cavity.gamma_out,
        gamma_0: cavity.gamma_0,
        pump: pump_coupling,
        theta,
        input,
    }
}

fn assemble_curve(
    cavity: &CavityModel,
    pump: &PumpDrive,
    input: SqueezedInput,
    grid: &GridSpec,
    samples: Vec<Result<(f64, f64)>>,
    detunings: Vec<f64>,
    gamma_s0: f64,
) -> Result<SpectrumCurve> {
    let mut var_x = Vec::with_capacity(detunings.len());
    let mut var_y = Vec::with_capacity(detunings.len());
    for (i, s) in samples.into_iter().enumerate() {
        let (x, y) = s?;
        if !x.is_finite() || !y.is_finite() || x <= 0.0 || y <= 0.0 {
            return Err(ModelError::InvalidParameter {
                name: "variance",
                reason: "non-positive spectrum sample",
                value: x.min(y),
            });
        }
        // uncertainty floor with SNL = 1
        if x * y < 1.0 - 1e-9 {
            return Err(ModelError::UncertaintyViolation {
                product: x * y,
                delta: detunings[i],
            });
        }
        var_x.push(x);
        var_y.push(y);
    }
    Ok(SpectrumCurve {
        detunings,
        var_x,
        var_y,
        meta: CurveMeta {
            omega: grid.omega,
            pump_fraction: pump.f,
            pump_coupling: pump.coupling(gamma_s0),
            theta: pump.theta,
            squeeze_index: input.squeeze_index(),
            gamma_s0,
            tau: cavity.tau,
        },
    })
}

/// Generate both quadrature spectra across the grid.
///
/// The input decay is taken from the reflection profile pointwise and
/// gamma_s recomputed per sample; the pump coupling p = f*gamma_s(0) is
/// pinned to the on-resonance decay rate and held fixed across the sweep.
pub fn spectrum_curve(
    cavity: &CavityModel,
    pump: &PumpDrive,
    input: SqueezedInput,
    grid: &GridSpec,
) -> Result<SpectrumCurve> {
    let gamma_s0 = cavity::gamma_s_at(cavity, 0.0)?;
    let p_coupling = pump.coupling(gamma_s0);
    let profile = cavity::decay_profile(cavity, grid)?;
    let pairs: Vec<(f64, f64)> = profile
        .detunings
        .iter()
        .zip(&profile.gamma_in)
        .map(|(&d, &g)| (d, g))
        .collect();
    let samples = maybe_par_map(&pairs, |&(d, g)| {
        let sp = params_at(cavity, p_coupling, pump.theta, input, grid.omega, d, g);
        Ok((
            quadrature_variance(Quadrature::X, &sp)?,
            quadrature_variance(Quadrature::Y, &sp)?,
        ))
    });
    assemble_curve(
        cavity,
        pump,
        input,
        grid,
        samples,
        profile.detunings,
        gamma_s0,
    )
}

/// Sequential reference implementation of [`spectrum_curve`]; used by the
/// bench suite and the parallel-equivalence test.
pub fn spectrum_curve_seq(
    cavity: &CavityModel,
    pump: &PumpDrive,
    input: SqueezedInput,
    grid: &GridSpec,
) -> Result<SpectrumCurve> {
    let gamma_s0 = cavity::gamma_s_at(cavity, 0.0)?;
    let p_coupling = pump.coupling(gamma_s0);
    let profile = cavity::decay_profile(cavity, grid)?;
    let pairs: Vec<(f64, f64)> = profile
        .detunings
        .iter()
        .zip(&profile.gamma_in)
        .map(|(&d, &g)| (d, g))
        .collect();
    let samples = seq_map(&pairs, |&(d, g)| {
        let sp = params_at(cavity, p_coupling, pump.theta, input, grid.omega, d, g);
        Ok((
            quadrature_variance(Quadrature::X, &sp)?,
            quadrature_variance(Quadrature::Y, &sp)?,
        ))
    });
    assemble_curve(
        cavity,
        pump,
        input,
        grid,
        samples,
        profile.detunings,
        gamma_s0,
    )
}
