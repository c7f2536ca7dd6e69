//! Time-domain Monte Carlo verifier: explicit first-order stochastic
//! stepping of the quadrature Langevin equation with squeezed-bath forcing,
//! output formed through the input-output relation, and the variance at the
//! analysis frequency estimated by averaged periodograms over an ensemble of
//! independently seeded trajectories.
//!
//! The broadband squeezed input is synthesized as two independent white
//! quadrature streams with variances exp(+2s) and exp(-2s); the vacuum port
//! carries unit-variance streams. A white stream of double-sided spectral
//! density S contributes samples of variance S/h at step h.

use rand::rngs::StdRng;
use rand::SeedableRng;
use rand_distr::{Distribution, StandardNormal};

use super::drift::drift_matrix;
use super::welch::psd_at_bin;
use crate::error::{ModelError, Result};
use crate::parallel::maybe_par_map;
use crate::spectra::SpectrumParams;

/// Integration and ensemble settings for [`mc_variance`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McConfig {
    /// Step size (same time units as 1/gamma).
    pub h: f64,
    /// Trajectory length in time units (before burn-in removal).
    pub duration: f64,
    /// Ensemble size.
    pub n_traj: usize,
    /// Fraction of each trajectory discarded as transient, in [0, 1).
    pub burn_in: f64,
    /// Base seed; per-trajectory seeds derive from it deterministically.
    pub seed: u64,
}

impl McConfig {
    /// Validate against the decay rate of the parameter point; the step must
    /// satisfy h <= 0.01/gamma_s for the explicit integrator.
    pub fn validate(&self, gamma_s: f64) -> Result<()> {
        if !self.h.is_finite() || self.h <= 0.0 || self.h > 0.01 / gamma_s {
            return Err(ModelError::InvalidParameter {
                name: "h",
                reason: "step must satisfy 0 < h <= 0.01/gamma_s",
                value: self.h,
            });
        }
        if self.n_traj < 1 {
            return Err(ModelError::InvalidParameter {
                name: "n_traj",
                reason: "ensemble needs at least one trajectory",
                value: self.n_traj as f64,
            });
        }
        if !(0.0..1.0).contains(&self.burn_in) {
            return Err(ModelError::InvalidParameter {
                name: "burn_in",
                reason: "burn-in fraction must lie in [0, 1)",
                value: self.burn_in,
            });
        }
        let steps = (self.duration / self.h) as usize;
        let usable = steps - (self.burn_in * steps as f64) as usize;
        if usable < 256 {
            return Err(ModelError::InvalidParameter {
                name: "duration",
                reason: "too short: fewer than 256 usable steps after burn-in",
                value: self.duration,
            });
        }
        Ok(())
    }
}

/// Monte Carlo estimate with ensemble standard errors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McEstimate {
    pub var_x: f64,
    pub var_y: f64,
    pub stderr_x: f64,
    pub stderr_y: f64,
    /// Frequency the estimator actually measured at (nearest DFT bin).
    pub effective_omega: f64,
    pub n_traj: usize,
    pub n_segments: usize,
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

struct Plan {
    steps: usize,
    burn_steps: usize,
    nperseg: usize,
    bin: usize,
}

fn plan(p: &SpectrumParams, cfg: &McConfig) -> Result<Plan> {
    cfg.validate(p.gamma_s())?;
    let steps = (cfg.duration / cfg.h).round() as usize;
    let burn_steps = (cfg.burn_in * steps as f64) as usize;
    let usable = steps - burn_steps;
    let mut nperseg = (usable / 8).max(128);
    if nperseg % 2 == 1 {
        nperseg -= 1;
    }
    let bin_f = p.omega.abs() * nperseg as f64 * cfg.h / std::f64::consts::TAU;
    let bin = bin_f.round() as usize;
    if bin >= nperseg / 2 {
        return Err(ModelError::InvalidParameter {
            name: "omega",
            reason: "analysis frequency beyond the Nyquist limit of the step size",
            value: p.omega,
        });
    }
    Ok(Plan {
        steps,
        burn_steps,
        nperseg,
        bin,
    })
}

fn run_trajectory(
    p: &SpectrumParams,
    cfg: &McConfig,
    plan: &Plan,
    seed: u64,
) -> Result<(f64, f64, usize)> {
    let a = drift_matrix(p).m;
    let mut rng = StdRng::seed_from_u64(seed);
    let mut normal = || -> f64 { StandardNormal.sample(&mut rng) };

    let h = cfg.h;
    let sqrt_h = h.sqrt();
    let es = p.input.squeeze_index().exp();
    let esi = (-p.input.squeeze_index()).exp();
    let sq_gin = p.gamma_in.sqrt();
    let sq_gout = p.gamma_out.sqrt();
    let two_gin_sqrt = (2.0 * p.gamma_in).sqrt();
    let inv_sqrt_2h = 1.0 / (2.0 * h).sqrt();

    let usable = plan.steps - plan.burn_steps;
    let mut yx = Vec::with_capacity(usable);
    let mut yy = Vec::with_capacity(usable);

    let mut x = 0.0f64;
    let mut y = 0.0f64;
    for step in 0..plan.steps {
        let z1 = normal();
        let z2 = normal();
        let z3 = normal();
        let z4 = normal();
        // input-output uses the pre-update state and this step's noise
        if step >= plan.burn_steps {
            let u_in_x = es * z1 * inv_sqrt_2h;
            let u_in_y = esi * z2 * inv_sqrt_2h;
            yx.push(-u_in_x + two_gin_sqrt * x);
            yy.push(-u_in_y + two_gin_sqrt * y);
        }
        let dx = h * (a[0][0] * x + a[0][1] * y) + sqrt_h * (sq_gin * es * z1 + sq_gout * z3);
        let dy = h * (a[1][0] * x + a[1][1] * y) + sqrt_h * (sq_gin * esi * z2 + sq_gout * z4);
        x += dx;
        y += dy;
        if !x.is_finite() || !y.is_finite() {
            return Err(ModelError::NonFiniteTrajectory { step, seed });
        }
    }

    let (px, segs) = psd_at_bin(&yx, plan.nperseg, plan.bin, h);
    let (py, _) = psd_at_bin(&yy, plan.nperseg, plan.bin, h);
    // normalize to the shot-noise limit (vacuum double-sided PSD = 1/2)
    Ok((px / 0.5, py / 0.5, segs))
}

fn mc_impl(p: &SpectrumParams, cfg: &McConfig, parallel: bool) -> Result<McEstimate> {
    let drift = drift_matrix(p);
    if !drift.is_stable() {
        let gs = p.gamma_s();
        return Err(ModelError::UnstableDrift {
            pump_sq: p.pump * p.pump,
            bound: gs * gs + p.delta * p.delta,
        });
    }
    let plan = plan(p, cfg)?;
    let seeds: Vec<u64> = (0..cfg.n_traj)
        .map(|i| splitmix64(cfg.seed ^ splitmix64(i as u64)))
        .collect();

    let results: Vec<Result<(f64, f64, usize)>> = if parallel {
        maybe_par_map(&seeds, |&s| run_trajectory(p, cfg, &plan, s))
    } else {
        seeds
            .iter()
            .map(|&s| run_trajectory(p, cfg, &plan, s))
            .collect()
    };

    let mut xs = Vec::with_capacity(cfg.n_traj);
    let mut ys = Vec::with_capacity(cfg.n_traj);
    let mut segs = 0;
    for r in results {
        let (vx, vy, s) = r?;
        xs.push(vx);
        ys.push(vy);
        segs = s;
    }
    let (mx, sx) = mean_stderr(&xs);
    let (my, sy) = mean_stderr(&ys);
    Ok(McEstimate {
        var_x: mx,
        var_y: my,
        stderr_x: sx,
        stderr_y: sy,
        effective_omega: std::f64::consts::TAU * plan.bin as f64 / (plan.nperseg as f64 * cfg.h),
        n_traj: cfg.n_traj,
        n_segments: segs,
    })
}

fn mean_stderr(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    if v.len() < 2 {
        return (mean, f64::INFINITY);
    }
    let var = v.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

/// Ensemble Monte Carlo estimate of the reflected quadrature variances at
/// the analysis frequency; parallel across trajectories when the `parallel`
/// feature is enabled. Identical seeds and configs give identical output
/// regardless of thread count.
pub fn mc_variance(p: &SpectrumParams, cfg: &McConfig) -> Result<McEstimate> {
    mc_impl(p, cfg, true)
}

/// Always-sequential variant of [`mc_variance`]; reference path for benches.
pub fn mc_variance_seq(p: &SpectrumParams, cfg: &McConfig) -> Result<McEstimate> {
    mc_impl(p, cfg, false)
}
