//! Physical parameters of the cavity model and the dimensionless
//! normalization used everywhere else.
//!
//! All rates and frequencies in the computational core are expressed per
//! inverse round-trip time (tau = 1 internally). The spectra depend on
//! detuning and analysis frequency only through the products delta*tau and
//! omega*tau, so the normalization removes a redundant degree of freedom;
//! [`units_to_physical`] converts back to Hz for display.

use crate::error::{ModelError, Result};

/// Speed of light in vacuum (m/s).
pub const SPEED_OF_LIGHT: f64 = 2.997_924_58e8;

const TWO_PI: f64 = std::f64::consts::TAU;

fn check_range(name: &'static str, value: f64, min: f64, max: f64) -> Result<f64> {
    if !value.is_finite() || value < min || value > max {
        return Err(ModelError::InvalidParameter {
            name,
            reason: "outside allowed range",
            value,
        });
    }
    Ok(value)
}

fn check_positive(name: &'static str, value: f64) -> Result<f64> {
    if !value.is_finite() || value <= 0.0 {
        return Err(ModelError::InvalidParameter {
            name,
            reason: "must be strictly positive",
            value,
        });
    }
    Ok(value)
}

/// Per-round-trip amplitude decay rate of a mirror with amplitude
/// transmission `t`, using the high-finesse convention gamma = t^2 / 2.
pub fn mirror_to_decay(t: f64) -> Result<f64> {
    check_range("t", t, 0.0, 1.0)?;
    Ok(t * t / 2.0)
}

/// Pump amplitude threshold for parametric oscillation,
/// beta_th = gamma_p * sqrt(gamma_s * gamma_i) / g.
pub fn pump_threshold(gamma_p: f64, gamma_s: f64, gamma_i: f64, g: f64) -> Result<f64> {
    check_positive("gamma_p", gamma_p)?;
    check_positive("gamma_s", gamma_s)?;
    check_positive("gamma_i", gamma_i)?;
    check_positive("g", g)?;
    Ok(gamma_p * (gamma_s * gamma_i).sqrt() / g)
}

/// Convert a dimensionless angular frequency (units of 1/tau) to Hz.
pub fn units_to_physical(x: f64, tau: f64) -> Result<f64> {
    check_positive("tau", tau)?;
    Ok(x / (TWO_PI * tau))
}

/// Inverse of [`units_to_physical`]; round-trips to machine precision.
pub fn physical_to_units(f_hz: f64, tau: f64) -> Result<f64> {
    check_positive("tau", tau)?;
    Ok(f_hz * TWO_PI * tau)
}

/// Amplitude reflection/transmission coefficients of the three mirrors.
///
/// `r_i^2 + t_i^2 <= 1`; any deficit is absorption in the coating.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MirrorSet {
    pub r1: f64,
    pub t1: f64,
    pub r2: f64,
    pub t2: f64,
    pub r3: f64,
    pub t3: f64,
}

impl MirrorSet {
    pub fn new(r1: f64, t1: f64, r2: f64, t2: f64, r3: f64, t3: f64) -> Result<Self> {
        for (name, v) in [
            ("r1", r1),
            ("t1", t1),
            ("r2", r2),
            ("t2", t2),
            ("r3", r3),
            ("t3", t3),
        ] {
            check_range(name, v, 0.0, 1.0)?;
        }
        for (name, r, t) in [
            ("mirror1", r1, t1),
            ("mirror2", r2, t2),
            ("mirror3", r3, t3),
        ] {
            if r * r + t * t > 1.0 + 1e-12 {
                return Err(ModelError::InvalidParameter {
                    name: match name {
                        "mirror1" => "r1^2 + t1^2",
                        "mirror2" => "r2^2 + t2^2",
                        _ => "r3^2 + t3^2",
                    },
                    reason: "mirror is not passive (r^2 + t^2 > 1)",
                    value: r * r + t * t,
                });
            }
        }
        if t1 <= 0.0 && t3 <= 0.0 {
            return Err(ModelError::InvalidParameter {
                name: "t1, t3",
                reason: "cavity needs an input or output port (t1 or t3 > 0)",
                value: 0.0,
            });
        }
        Ok(Self {
            r1,
            t1,
            r2,
            t2,
            r3,
            t3,
        })
    }

    /// Lossless mirrors specified by their transmissions: r = sqrt(1 - t^2).
    pub fn lossless_from_transmissions(t1: f64, t2: f64, t3: f64) -> Result<Self> {
        for (name, v) in [("t1", t1), ("t2", t2), ("t3", t3)] {
            check_range(name, v, 0.0, 1.0)?;
        }
        let r = |t: f64| (1.0 - t * t).max(0.0).sqrt();
        Self::new(r(t1), t1, r(t2), t2, r(t3), t3)
    }
}

/// Whether the middle mirror is present.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CavityKind {
    /// Middle mirror removed; the input coupling is flat in detuning.
    SingleCavity,
    /// Compound front reflector made of the front and middle mirrors.
    Hybrid,
}

/// Geometry, losses and decay rates of the resonator.
#[derive(Debug, Clone, PartialEq)]
pub struct CavityModel {
    pub kind: CavityKind,
    pub mirrors: MirrorSet,
    /// Round-trip time in seconds; the normalization unit of all rates.
    pub tau: f64,
    /// Equivalent front-loop length in meters; enters only the round-trip
    /// phase of the compound reflector.
    pub length: f64,
    /// Per-round-trip amplitude survival factor of the front loop
    /// ("other decay effects" of the front sub-cavity), in [0, 1].
    pub gamma_c: f64,
    /// Intracavity decay rate (dimensionless, per 1/tau). Carries no noise
    /// port in this model; see the spectra module notes.
    pub gamma_0: f64,
    /// Back-mirror decay rate (dimensionless, per 1/tau).
    pub gamma_out: f64,
}

impl CavityModel {
    pub fn new(
        kind: CavityKind,
        mirrors: MirrorSet,
        tau: f64,
        length: f64,
        gamma_c: f64,
        gamma_0: f64,
        gamma_out: f64,
    ) -> Result<Self> {
        check_positive("tau", tau)?;
        check_positive("length", length)?;
        check_range("gamma_c", gamma_c, 0.0, 1.0)?;
        check_range("gamma_0", gamma_0, 0.0, f64::INFINITY)?;
        check_range("gamma_out", gamma_out, 0.0, f64::INFINITY)?;
        Ok(Self {
            kind,
            mirrors,
            tau,
            length,
            gamma_c,
            gamma_0,
            gamma_out,
        })
    }

    /// Dimensionless round-trip phase accumulated per unit of dimensionless
    /// detuning: phi = (2 L / (c tau)) * (delta tau).
    pub fn phase_per_unit_detuning(&self) -> f64 {
        2.0 * self.length / (SPEED_OF_LIGHT * self.tau)
    }
}

/// Dimensionless pump drive: fraction of threshold and pump phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpDrive {
    /// f = g*beta / gamma_s(0), in [0, 1). The spectrum denominator vanishes
    /// at f = 1 on resonance, so below-threshold operation requires f < 1.
    pub f: f64,
    /// Pump phase in radians, canonicalized into [0, 2pi).
    pub theta: f64,
}

impl PumpDrive {
    pub fn new(f: f64, theta: f64) -> Result<Self> {
        if !f.is_finite() || !(0.0..1.0).contains(&f) {
            return Err(ModelError::InvalidParameter {
                name: "f",
                reason: "pump fraction must lie in [0, 1) (below threshold)",
                value: f,
            });
        }
        if !theta.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "theta",
                reason: "pump phase must be finite",
                value: theta,
            });
        }
        Ok(Self {
            f,
            theta: theta.rem_euclid(TWO_PI),
        })
    }

    /// Pump coupling g*beta for a given on-resonance total decay rate.
    pub fn coupling(&self, gamma_s0: f64) -> f64 {
        self.f * gamma_s0
    }

    /// Physical pump amplitude beta for given nonlinear susceptibility.
    pub fn beta(&self, gamma_s0: f64, g: f64) -> Result<f64> {
        check_positive("g", g)?;
        Ok(self.coupling(gamma_s0) / g)
    }
}

/// Broadband squeezed input field parametrized by its squeeze index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SqueezedInput {
    s: f64,
}

impl SqueezedInput {
    pub fn new(s: f64) -> Result<Self> {
        if !s.is_finite() || s < 0.0 {
            return Err(ModelError::InvalidParameter {
                name: "s",
                reason: "squeeze index must be >= 0",
                value: s,
            });
        }
        Ok(Self { s })
    }

    /// Vacuum input (s = 0).
    pub fn vacuum() -> Self {
        Self { s: 0.0 }
    }

    pub fn squeeze_index(&self) -> f64 {
        self.s
    }

    /// Bath occupation N = sinh^2 s.
    pub fn bath_occupation(&self) -> f64 {
        self.s.sinh().powi(2)
    }

    /// Input amplitude-quadrature variance, exp(+2s).
    pub fn var_x_in(&self) -> f64 {
        (2.0 * self.s).exp()
    }

    /// Input phase-quadrature variance, exp(-2s).
    pub fn var_y_in(&self) -> f64 {
        (-2.0 * self.s).exp()
    }
}

/// Detuning grid and analysis frequency, dimensionless (units of 1/tau).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridSpec {
    pub delta_min: f64,
    pub delta_max: f64,
    pub n: usize,
    pub omega: f64,
}

impl GridSpec {
    pub fn new(delta_min: f64, delta_max: f64, n: usize, omega: f64) -> Result<Self> {
        if !delta_min.is_finite() || !delta_max.is_finite() || delta_min >= delta_max {
            return Err(ModelError::InvalidParameter {
                name: "delta range",
                reason: "requires delta_min < delta_max",
                value: delta_min,
            });
        }
        if n < 2 {
            return Err(ModelError::InvalidParameter {
                name: "n",
                reason: "grid needs at least two points",
                value: n as f64,
            });
        }
        if !omega.is_finite() {
            return Err(ModelError::InvalidParameter {
                name: "omega",
                reason: "analysis frequency must be finite",
                value: omega,
            });
        }
        Ok(Self {
            delta_min,
            delta_max,
            n,
            omega,
        })
    }

    /// Sampled detunings. Uses the lerp form so a symmetric range with odd n
    /// contains delta = 0 exactly.
    pub fn detunings(&self) -> Vec<f64> {
        let m = (self.n - 1) as f64;
        (0..self.n)
            .map(|i| {
                let t = i as f64 / m;
                self.delta_min * (1.0 - t) + self.delta_max * t
            })
            .collect()
    }

    pub fn step(&self) -> f64 {
        (self.delta_max - self.delta_min) / (self.n - 1) as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mirror_decay_matches_convention() {
        assert_eq!(mirror_to_decay(0.0).unwrap(), 0.0);
        assert_eq!(mirror_to_decay(1.0).unwrap(), 0.5);
        // t2 of the compound-cavity mirror set
        let g = mirror_to_decay(0.26).unwrap();
        assert!((g - 0.0338).abs() < 1e-12, "0.26^2/2 = {g}");
        assert!(mirror_to_decay(1.5).is_err());
        assert!(mirror_to_decay(-0.1).is_err());
    }

    #[test]
    fn mirror_decay_is_monotone() {
        let mut last = -1.0;
        for i in 0..=100 {
            let t = i as f64 / 100.0;
            let g = mirror_to_decay(t).unwrap();
            assert!(g >= last);
            last = g;
        }
    }

    #[test]
    fn threshold_formula() {
        assert_eq!(pump_threshold(1.0, 1.0, 1.0, 1.0).unwrap(), 1.0);
        assert_eq!(pump_threshold(2.0, 4.0, 1.0, 1.0).unwrap(), 4.0);
        let b = pump_threshold(1.0, 0.0339, 0.0339, 1.0).unwrap();
        assert!((b - 0.0339).abs() < 1e-15);
        assert!(pump_threshold(0.0, 1.0, 1.0, 1.0).is_err());
    }

    #[test]
    fn unit_conversion_round_trips() {
        assert_eq!(units_to_physical(0.0, 1.0).unwrap(), 0.0);
        assert!((units_to_physical(TWO_PI, 1.0).unwrap() - 1.0).abs() < 1e-15);
        let tau = 6.16e-9;
        let x = 0.1234;
        let back = physical_to_units(units_to_physical(x, tau).unwrap(), tau).unwrap();
        assert!((back - x).abs() <= 1e-15 * x);
        assert!(units_to_physical(1.0, 0.0).is_err());
    }

    #[test]
    fn sideband_target_is_reachable_by_calibrating_tau() {
        // x = delta*tau placing the feature at 3.1 MHz
        let tau = 0.12 / (TWO_PI * 3.1e6);
        let f_hz = units_to_physical(0.12, tau).unwrap();
        assert!((f_hz - 3.1e6).abs() < 1e-3);
    }

    #[test]
    fn squeezed_input_is_minimum_uncertainty() {
        for s in [0.0, 0.1, 0.5, 1.0, 3.0] {
            let inp = SqueezedInput::new(s).unwrap();
            let prod = inp.var_x_in() * inp.var_y_in();
            assert!((prod - 1.0).abs() <= 1e-14, "s = {s}: product = {prod}");
        }
        let vac = SqueezedInput::vacuum();
        assert_eq!(vac.var_x_in(), 1.0);
        assert_eq!(vac.var_y_in(), 1.0);
        assert_eq!(vac.bath_occupation(), 0.0);
        assert!(SqueezedInput::new(-0.1).is_err());
    }

    #[test]
    fn pump_phase_canonicalized() {
        let p = PumpDrive::new(0.5, -std::f64::consts::PI).unwrap();
        assert!((p.theta - std::f64::consts::PI).abs() < 1e-15);
        let q = PumpDrive::new(0.5, 3.0 * TWO_PI + 1.0).unwrap();
        assert!((q.theta - 1.0).abs() < 1e-12);
        assert!(PumpDrive::new(1.0, 0.0).is_err());
        assert!(PumpDrive::new(1.2, 0.0).is_err());
    }

    #[test]
    fn mirror_set_rejects_active_coatings() {
        assert!(MirrorSet::new(0.9, 0.9, 0.0, 1.0, 0.0, 1.0).is_err());
        // both ports closed
        assert!(MirrorSet::new(1.0, 0.0, 0.0, 1.0, 1.0, 0.0).is_err());
        let m = MirrorSet::lossless_from_transmissions(0.016, 0.26, 0.002).unwrap();
        assert!((m.r1 * m.r1 + m.t1 * m.t1 - 1.0).abs() < 1e-12);
    }

    #[test]
    fn symmetric_odd_grid_contains_zero_exactly() {
        let g = GridSpec::new(-0.2, 0.2, 2001, 0.0).unwrap();
        let d = g.detunings();
        assert_eq!(d.len(), 2001);
        assert_eq!(d[1000], 0.0);
        assert_eq!(d[0], -0.2);
        assert_eq!(d[2000], 0.2);
        assert!(GridSpec::new(0.2, -0.2, 100, 0.0).is_err());
        assert!(GridSpec::new(-1.0, 1.0, 1, 0.0).is_err());
    }
}
