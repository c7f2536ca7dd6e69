//! Compound front-reflector model: the front sub-cavity (front + middle
//! mirror) acts as a frequency-dependent mirror for the parametric cavity
//! behind it.
//!
//! The complex reflection seen from inside is
//!
//! ```text
//! R(phi) = (-r2 + gamma_c r1 e^{i phi}) / (1 - gamma_c r1 r2 e^{i phi})
//! ```
//!
//! and the effective input decay rate is gamma_in = sqrt(1 - |R|^2), which is
//! an Airy-shaped function of the round-trip phase phi with maxima at the
//! front-loop resonances phi = 2 pi k.

use num_complex::Complex64;

use crate::error::{ModelError, Result};
use crate::parallel::maybe_par_map;
use crate::params::{CavityKind, CavityModel, GridSpec};

const TWO_PI: f64 = std::f64::consts::TAU;

/// Input-coupling profile of a cavity across a detuning grid.
#[derive(Debug, Clone)]
pub struct ReflectionProfile {
    /// Dimensionless detunings (delta * tau).
    pub detunings: Vec<f64>,
    /// Complex reflection coefficient of the compound front reflector. For a
    /// single cavity this is identically zero phase / unused and set to -r1.
    pub reflection: Vec<Complex64>,
    /// Effective input decay rate at each detuning.
    pub gamma_in: Vec<f64>,
}

/// Complex reflection coefficient of the front loop at round-trip phase
/// `phi` (radians).
///
/// The phase is reduced mod 2 pi first, so `R(phi + 2 pi) == R(phi)` exactly.
pub fn reflection_coefficient(r1: f64, r2: f64, gamma_c: f64, phi: f64) -> Result<Complex64> {
    for (name, v) in [("r1", r1), ("r2", r2), ("gamma_c", gamma_c)] {
        if !(0.0..=1.0).contains(&v) || !v.is_finite() {
            return Err(ModelError::InvalidParameter {
                name,
                reason: "must lie in [0, 1]",
                value: v,
            });
        }
    }
    let phase = Complex64::from_polar(1.0, phi.rem_euclid(TWO_PI));
    let loop_gain = gamma_c * r1 * r2;
    let den = Complex64::new(1.0, 0.0) - loop_gain * phase;
    if den.norm() < 1e-14 {
        // lossless perfectly reflecting loop on resonance
        return Err(ModelError::ReflectionPole);
    }
    let num = -r2 + gamma_c * r1 * phase;
    Ok(num / den)
}

/// Effective input decay rate from a reflection coefficient:
/// gamma_in = sqrt(max(0, 1 - |R|^2)).
///
/// The 1e-16-scale negative residue of 1 - |R|^2 at |R| = 1 is clamped to
/// zero; |R| > 1 beyond tolerance means the parameters are not passive.
pub fn effective_input_decay(r: Complex64) -> Result<f64> {
    let mag = r.norm();
    if mag > 1.0 + 1e-12 {
        return Err(ModelError::NonPassiveReflection { magnitude: mag });
    }
    Ok((1.0 - mag * mag).max(0.0).sqrt())
}

/// Input decay rate of `cavity` at one dimensionless detuning.
pub fn gamma_in_at(cavity: &CavityModel, delta: f64) -> Result<f64> {
    match cavity.kind {
        CavityKind::SingleCavity => crate::params::mirror_to_decay(cavity.mirrors.t1),
        CavityKind::Hybrid => {
            let phi = cavity.phase_per_unit_detuning() * delta;
            let r =
                reflection_coefficient(cavity.mirrors.r1, cavity.mirrors.r2, cavity.gamma_c, phi)?;
            effective_input_decay(r)
        }
    }
}

/// Total decay rate gamma_s(delta) = gamma_in(delta) + gamma_0 + gamma_out.
pub fn gamma_s_at(cavity: &CavityModel, delta: f64) -> Result<f64> {
    let gs = gamma_in_at(cavity, delta)? + cavity.gamma_0 + cavity.gamma_out;
    if gs <= 0.0 {
        return Err(ModelError::InvalidParameter {
            name: "gamma_s",
            reason: "total decay rate must be strictly positive at every detuning",
            value: gs,
        });
    }
    Ok(gs)
}

/// Evaluate the reflection coefficient and input decay across the grid.
///
/// SingleCavity yields a flat profile gamma_in = t1^2/2; Hybrid evaluates the
/// compound reflector with phi(delta) = (2L/(c tau)) * delta and phi = 0 at
/// joint resonance.
pub fn decay_profile(cavity: &CavityModel, grid: &GridSpec) -> Result<ReflectionProfile> {
    let detunings = grid.detunings();
    match cavity.kind {
        CavityKind::SingleCavity => {
            let g = crate::params::mirror_to_decay(cavity.mirrors.t1)?;
            let r = Complex64::new(-cavity.mirrors.r1, 0.0);
            Ok(ReflectionProfile {
                reflection: vec![r; detunings.len()],
                gamma_in: vec![g; detunings.len()],
                detunings,
            })
        }
        CavityKind::Hybrid => {
            let rho = cavity.phase_per_unit_detuning();
            let (r1, r2, gc) = (cavity.mirrors.r1, cavity.mirrors.r2, cavity.gamma_c);
            let samples: Vec<Result<(Complex64, f64)>> = maybe_par_map(&detunings, |&d| {
                let r = reflection_coefficient(r1, r2, gc, rho * d)?;
                Ok((r, effective_input_decay(r)?))
            });
            let mut reflection = Vec::with_capacity(detunings.len());
            let mut gamma_in = Vec::with_capacity(detunings.len());
            for s in samples {
                let (r, g) = s?;
                reflection.push(r);
                gamma_in.push(g);
            }
            Ok(ReflectionProfile {
                detunings,
                reflection,
                gamma_in,
            })
        }
    }
}

/// Locate the off-center supermode position: the |delta| of the gamma_in
/// maximum nearest zero, refined by golden-section search.
///
/// `window` is the largest |delta| searched. The symmetric negative-side
/// partner must match within one coarse grid step.
pub fn mode_splitting(cavity: &CavityModel, window: f64, n_coarse: usize) -> Result<f64> {
    if cavity.kind != CavityKind::Hybrid {
        return Err(ModelError::NoSplitting);
    }
    if window <= 0.0 || n_coarse < 8 {
        return Err(ModelError::InvalidParameter {
            name: "window",
            reason: "search window must be positive with at least 8 coarse points",
            value: window,
        });
    }
    let step = window / n_coarse as f64;
    let pos = off_center_maximum(&|d| gamma_in_at(cavity, d), step, n_coarse)?;
    let neg = off_center_maximum(&|d| gamma_in_at(cavity, -d), step, n_coarse)?;
    if (pos - neg).abs() > step {
        return Err(ModelError::InvalidParameter {
            name: "splitting",
            reason: "asymmetric supermode pair (phase offset in profile?)",
            value: pos - neg,
        });
    }
    Ok(pos)
}

fn off_center_maximum(g: &dyn Fn(f64) -> Result<f64>, step: f64, n: usize) -> Result<f64> {
    // coarse scan over (0, window]; skip i = 0 and i = 1 so the central
    // maximum at delta = 0 is never reported
    let mut values = Vec::with_capacity(n + 1);
    for i in 0..=n {
        values.push(g(i as f64 * step)?);
    }
    // noise floor so a flat profile never yields a spurious crest
    let scale = values.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let tol = 1e-10 * scale;
    let mut best: Option<usize> = None;
    for i in 2..n {
        if values[i] > values[i - 1] + tol && values[i] >= values[i + 1] - tol {
            best = Some(i);
            break; // nearest to zero wins ties
        }
    }
    let i = best.ok_or(ModelError::NoSplitting)?;
    golden_section_max(g, (i - 1) as f64 * step, (i + 1) as f64 * step)
}

fn golden_section_max(f: &dyn Fn(f64) -> Result<f64>, mut a: f64, mut b: f64) -> Result<f64> {
    const INV_PHI: f64 = 0.618_033_988_749_894_9;
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    for _ in 0..200 {
        if (b - a).abs() < 1e-14 * (1.0 + a.abs() + b.abs()) {
            break;
        }
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(0.5 * (a + b))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::params::MirrorSet;

    fn hybrid(gamma_c: f64, tau: f64, length: f64) -> CavityModel {
        let mirrors = MirrorSet::lossless_from_transmissions(0.016, 0.26, 0.002).unwrap();
        CavityModel::new(CavityKind::Hybrid, mirrors, tau, length, gamma_c, 0.0, 2e-6).unwrap()
    }

    #[test]
    fn front_loop_removed_gives_bare_middle_mirror() {
        for phi in [0.0, 0.4, 2.0, 6.0] {
            let r = reflection_coefficient(0.0, 0.9, 0.7, phi).unwrap();
            assert!((r - Complex64::new(-0.9, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn transparent_middle_mirror_gives_front_mirror() {
        let r = reflection_coefficient(0.7, 0.0, 1.0, 0.0).unwrap();
        assert!((r - Complex64::new(0.7, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn lossless_on_resonance_unit_reflection() {
        let r = reflection_coefficient(1.0, 0.9, 1.0, 0.0).unwrap();
        assert!((r - Complex64::new(1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn pole_detected() {
        assert_eq!(
            reflection_coefficient(1.0, 1.0, 1.0, 0.0),
            Err(ModelError::ReflectionPole)
        );
    }

    #[test]
    fn decay_from_reflection() {
        assert_eq!(
            effective_input_decay(Complex64::new(0.0, 0.0)).unwrap(),
            1.0
        );
        assert_eq!(
            effective_input_decay(Complex64::new(1.0, 0.0)).unwrap(),
            0.0
        );
        let g = effective_input_decay(Complex64::new(0.6, 0.0)).unwrap();
        assert!((g - 0.8).abs() < 1e-15);
        assert!(effective_input_decay(Complex64::new(1.1, 0.0)).is_err());
    }

    #[test]
    fn periodicity_is_exact() {
        let r_a = reflection_coefficient(0.9, 0.8, 0.95, 1.234).unwrap();
        let r_b = reflection_coefficient(0.9, 0.8, 0.95, 1.234 + TWO_PI).unwrap();
        assert_eq!(r_a, r_b);
    }

    #[test]
    fn conjugate_symmetry_under_phase_reversal() {
        let r_a = reflection_coefficient(0.9, 0.8, 0.95, 0.77).unwrap();
        let r_b = reflection_coefficient(0.9, 0.8, 0.95, -0.77).unwrap();
        assert!((r_a.conj() - r_b).norm() < 1e-15);
    }

    #[test]
    fn single_cavity_profile_is_flat() {
        let mirrors = MirrorSet::lossless_from_transmissions(0.0016, 1.0, 0.00005).unwrap();
        let cav = CavityModel::new(
            CavityKind::SingleCavity,
            mirrors,
            6.16e-9,
            0.05,
            1.0,
            0.0,
            1.25e-9,
        )
        .unwrap();
        let grid = GridSpec::new(-8e-6, 8e-6, 101, 0.0).unwrap();
        let prof = decay_profile(&cav, &grid).unwrap();
        let expected = 0.0016f64 * 0.0016 / 2.0;
        assert!(prof.gamma_in.iter().all(|&g| (g - expected).abs() < 1e-18));
    }

    #[test]
    fn transparent_middle_mirror_reduces_to_flat_profile() {
        let mirrors = MirrorSet::lossless_from_transmissions(0.016, 1.0, 0.002).unwrap();
        let cav =
            CavityModel::new(CavityKind::Hybrid, mirrors, 6.16e-9, 48.0, 1.0, 0.0, 2e-6).unwrap();
        let grid = GridSpec::new(-0.2, 0.2, 401, 0.0).unwrap();
        let prof = decay_profile(&cav, &grid).unwrap();
        let first = prof.gamma_in[0];
        assert!(prof.gamma_in.iter().all(|&g| (g - first).abs() < 1e-12));
    }

    #[test]
    fn hybrid_profile_has_three_maxima_in_window() {
        // tau chosen so the loop resonances sit at delta = 0, +/-0.12
        let tau = 0.12 / (TWO_PI * 3.1e6);
        let length = crate::params::SPEED_OF_LIGHT / (2.0 * 3.1e6);
        let cav = hybrid(0.212, tau, length);
        let grid = GridSpec::new(-0.2, 0.2, 2001, 0.0).unwrap();
        let prof = decay_profile(&cav, &grid).unwrap();
        let g = &prof.gamma_in;
        let mut maxima = Vec::new();
        for i in 1..g.len() - 1 {
            if g[i] > g[i - 1] && g[i] >= g[i + 1] {
                maxima.push(prof.detunings[i]);
            }
        }
        assert_eq!(maxima.len(), 3, "maxima at {maxima:?}");
        assert!(maxima[0] < -0.119 && maxima[0] > -0.121);
        assert!(maxima[1].abs() < 1e-9);
        assert!(maxima[2] > 0.119 && maxima[2] < 0.121);
    }

    #[test]
    fn splitting_matches_loop_resonance_and_scales_with_length() {
        let tau = 0.12 / (TWO_PI * 3.1e6);
        let length = crate::params::SPEED_OF_LIGHT / (2.0 * 3.1e6);
        let cav = hybrid(0.212, tau, length);
        let split = mode_splitting(&cav, 0.2, 400).unwrap();
        assert!((split - 0.12).abs() < 1e-6, "split = {split}");

        // doubling L halves the splitting (free-spectral-range scaling)
        let cav2 = hybrid(0.212, tau, 2.0 * length);
        let split2 = mode_splitting(&cav2, 0.2, 400).unwrap();
        assert!((split2 - 0.06).abs() < 0.01 * 0.06, "split2 = {split2}");
    }

    #[test]
    fn no_splitting_when_uncoupled() {
        let mirrors = MirrorSet::lossless_from_transmissions(0.016, 1.0, 0.002).unwrap();
        let cav =
            CavityModel::new(CavityKind::Hybrid, mirrors, 6.16e-9, 48.0, 1.0, 0.0, 2e-6).unwrap();
        assert_eq!(mode_splitting(&cav, 0.2, 400), Err(ModelError::NoSplitting));
    }

    #[test]
    fn profile_interpolation_stabilizes_under_refinement() {
        let tau = 0.10 / (TWO_PI * 3.1e6);
        let length = crate::params::SPEED_OF_LIGHT / (2.0 * 3.1e6);
        let cav = hybrid(0.212, tau, length);
        let coarse =
            decay_profile(&cav, &GridSpec::new(-0.16, 0.16, 4001, 0.0).unwrap()).unwrap();
        let fine = decay_profile(&cav, &GridSpec::new(-0.16, 0.16, 8001, 0.0).unwrap()).unwrap();
        // shared samples are bit-identical (pure function of the detuning)
        for i in 0..coarse.gamma_in.len() {
            assert_eq!(coarse.gamma_in[i], fine.gamma_in[2 * i]);
        }
        // new midpoints deviate from the linear interpolant by < 1e-6
        let mut worst = 0.0f64;
        for i in 0..coarse.gamma_in.len() - 1 {
            let mid = fine.gamma_in[2 * i + 1];
            let lin = 0.5 * (coarse.gamma_in[i] + coarse.gamma_in[i + 1]);
            worst = worst.max((mid - lin).abs());
        }
        assert!(worst < 1e-6, "interpolation defect {worst:.2e}");
    }
}
