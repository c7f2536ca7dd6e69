//! Subcommand implementations: spectrum generation, channel reports, oracle
//! verification and the saturation scan.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use hybrid_opa::{
    channel_report, gamma_s_at, integrated_intracavity_covariance, lyapunov_covariance,
    mc_variance, mode_splitting, quadrature_variance, saturation_scan, scattering_variance,
    spectrum_curve, uncertainty_check, units_to_physical, CavityKind, McEstimate, Quadrature,
    SaturationOutcome, SpectrumCurve, SpectrumParams, SqueezedInput,
};

use crate::checkpoints::{mc_config_for, standard_checkpoints};
use crate::config::{parse_quadrature, Scenario};
use crate::error::CliError;
use crate::output;

/// Relative tolerance of the closed-form vs scattering comparison.
pub const SCATTERING_TOL: f64 = 1e-10;
/// Relative tolerance of the Lyapunov vs integrated-spectrum comparison.
pub const LYAPUNOV_TOL: f64 = 1e-4;

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, bytes)?;
    Ok(())
}

fn unix_now() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

/// Build the spectrum curve of a scenario (uncertainty floor enforced).
pub fn compute_curve(sc: &Scenario) -> Result<SpectrumCurve, CliError> {
    let curve = spectrum_curve(&sc.cavity, &sc.pump, sc.input, &sc.grid)?;
    uncertainty_check(&curve)?;
    Ok(curve)
}

pub struct SpectrumArtifacts {
    pub curve_path: PathBuf,
    pub channel_paths: Vec<PathBuf>,
    pub meta_path: PathBuf,
}

/// Generate the curve, write CSV + channel reports + metadata sidecar.
pub fn run_spectrum(
    sc: &Scenario,
    name: &str,
    out_dir: &Path,
    quiet: bool,
) -> Result<SpectrumArtifacts, CliError> {
    let curve = compute_curve(sc)?;

    let curve_path = out_dir.join(format!("{name}_curve.csv"));
    write_file(&curve_path, &output::curve_csv(&curve))?;

    let mut channel_paths = Vec::new();
    for qname in &sc.output.quadratures {
        let q = parse_quadrature(qname)?;
        let channels = channel_report(&curve, q, sc.output.min_prominence_db);
        let report = output::channels_report(&curve, q, &channels, sc.output.min_prominence_db);
        let path = out_dir.join(format!("{name}_channels_{qname}.json"));
        write_file(&path, &output::to_json_pretty(&report)?)?;
        channel_paths.push(path);
        if !quiet {
            println!(
                "{name}: {} {} channel(s) above {} dB prominence",
                report.channels.len(),
                qname,
                sc.output.min_prominence_db
            );
            for c in &report.channels {
                println!(
                    "  {:>4} at delta*tau = {:+.5} ({:+.4} MHz): {:+.2} dB, width {:.5}, prominence {:.2} dB",
                    c.kind, c.center, c.center_mhz, c.depth_db, c.width, c.prominence_db
                );
            }
        }
    }

    let splitting = match sc.cavity.kind {
        CavityKind::Hybrid => {
            mode_splitting(&sc.cavity, sc.grid.delta_max.abs().max(1e-12), 600).ok()
        }
        CavityKind::SingleCavity => None,
    };
    let meta = output::MetaSidecar {
        tool: "hybrid-opa",
        version: env!("CARGO_PKG_VERSION"),
        generated_unix_s: unix_now(),
        preset: Some(name),
        gamma_s0: gamma_s_at(&sc.cavity, 0.0)?,
        mode_splitting: splitting,
        mode_splitting_mhz: splitting
            .map(|x| units_to_physical(x, sc.cavity.tau).expect("tau validated") / 1e6),
        config: &sc.config,
    };
    let meta_path = out_dir.join(format!("{name}_meta.json"));
    write_file(&meta_path, &output::to_json_pretty(&meta)?)?;

    if !quiet {
        let u = uncertainty_check(&curve)?;
        println!(
            "{name}: {} samples, min uncertainty product {:.9} at delta*tau = {:+.5}",
            curve.len(),
            u.min_product,
            u.at_delta
        );
        println!("{name}: wrote {}", curve_path.display());
    }
    Ok(SpectrumArtifacts {
        curve_path,
        channel_paths,
        meta_path,
    })
}

/// Print channel reports to stdout as JSON.
pub fn run_channels(sc: &Scenario) -> Result<String, CliError> {
    let curve = compute_curve(sc)?;
    let mut reports = Vec::new();
    for qname in &sc.output.quadratures {
        let q = parse_quadrature(qname)?;
        let channels = channel_report(&curve, q, sc.output.min_prominence_db);
        reports.push(output::channels_report(
            &curve,
            q,
            &channels,
            sc.output.min_prominence_db,
        ));
    }
    let bytes = output::to_json_pretty(&reports)?;
    Ok(String::from_utf8(bytes).expect("json is utf-8"))
}

/// Outcome of one verification comparison.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerifyStatus {
    Pass,
    Inconclusive,
    Fail,
}

impl std::fmt::Display for VerifyStatus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            VerifyStatus::Pass => write!(f, "PASS"),
            VerifyStatus::Inconclusive => write!(f, "INCONCLUSIVE"),
            VerifyStatus::Fail => write!(f, "FAIL"),
        }
    }
}

/// Classify a Monte Carlo estimate against the closed-form value: within
/// three standard errors passes; an estimate whose standard error exceeds
/// 10% of the value cannot decide either way.
pub fn classify_mc(closed: f64, estimate: f64, stderr: f64) -> VerifyStatus {
    if !stderr.is_finite() || stderr > 0.10 * closed.abs() {
        return VerifyStatus::Inconclusive;
    }
    if (estimate - closed).abs() <= 3.0 * stderr {
        VerifyStatus::Pass
    } else {
        VerifyStatus::Fail
    }
}

/// Random valid parameter draw for the scattering equivalence sweep:
/// f in [0, 0.95], theta in [0, 2pi), s in [0, 1], a random three-way decay
/// split and delta, omega in [-5, 5].
pub fn random_params(rng: &mut StdRng) -> SpectrumParams {
    let gamma_s = (rng.gen_range(0.05f64.ln()..2.0f64.ln())).exp();
    let (a, b) = {
        let u: f64 = rng.gen();
        let v: f64 = rng.gen();
        (u.min(v), u.max(v))
    };
    let gamma_in = gamma_s * a;
    let gamma_0 = gamma_s * (b - a);
    let gamma_out = gamma_s * (1.0 - b);
    let f: f64 = rng.gen_range(0.0..0.95);
    SpectrumParams::new(
        rng.gen_range(-5.0..5.0),
        rng.gen_range(-5.0..5.0),
        gamma_in,
        gamma_out,
        gamma_0,
        f * gamma_s,
        rng.gen_range(0.0..std::f64::consts::TAU),
        SqueezedInput::new(rng.gen_range(0.0..1.0)).expect("valid squeeze index"),
    )
    .expect("draw satisfies invariants")
}

pub struct VerifySummary {
    pub draws: usize,
    pub max_rel_err: f64,
    pub worst_params: Option<SpectrumParams>,
    pub lyapunov_max_err: f64,
    pub mc_results: Vec<(String, f64, f64, McEstimate, VerifyStatus)>,
    pub overall: VerifyStatus,
}

/// Closed form vs scattering solve over random draws, Lyapunov consistency,
/// and Monte Carlo agreement at the standard checkpoints.
pub fn run_verify(
    sc: &Scenario,
    draws: usize,
    seed: u64,
    skip_mc: bool,
    quiet: bool,
) -> Result<VerifySummary, CliError> {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut max_rel_err = 0.0f64;
    let mut worst: Option<SpectrumParams> = None;
    for _ in 0..draws {
        let p = random_params(&mut rng);
        let (sx, sy) = scattering_variance(&p)?;
        let cx = quadrature_variance(Quadrature::X, &p)?;
        let cy = quadrature_variance(Quadrature::Y, &p)?;
        let ex = (sx - cx).abs() / cx.max(1e-300);
        let ey = (sy - cy).abs() / cy.max(1e-300);
        let e = ex.max(ey);
        if e > max_rel_err {
            max_rel_err = e;
            worst = Some(p);
        }
    }
    let scattering_ok = max_rel_err <= SCATTERING_TOL;
    if !quiet {
        println!(
            "scattering equivalence: {draws} draws, max relative error {max_rel_err:.3e} ({})",
            if scattering_ok { "PASS" } else { "FAIL" }
        );
    }

    // Lyapunov vs frequency-integrated intracavity spectra at a small fixed set
    let mut lyapunov_max_err = 0.0f64;
    for cp in standard_checkpoints().iter().step_by(5) {
        let v = lyapunov_covariance(&cp.params)?;
        let vi = integrated_intracavity_covariance(&cp.params, 20_001)?;
        let scale = v[0][0].abs() + v[1][1].abs();
        for r in 0..2 {
            for c in 0..2 {
                lyapunov_max_err = lyapunov_max_err.max((v[r][c] - vi[r][c]).abs() / scale);
            }
        }
    }
    let lyapunov_ok = lyapunov_max_err <= LYAPUNOV_TOL;
    if !quiet {
        println!(
            "lyapunov consistency: max relative error {lyapunov_max_err:.3e} ({})",
            if lyapunov_ok { "PASS" } else { "FAIL" }
        );
    }

    let mut mc_results = Vec::new();
    let mut mc_worst = VerifyStatus::Pass;
    if !skip_mc {
        if !quiet {
            println!("monte carlo checkpoints (3-sigma agreement, stderr target <= 3%):");
        }
        for cp in standard_checkpoints() {
            let cfg = mc_config_for(&cp.params, &sc.oracle);
            let est = mc_variance(&cp.params, &cfg)?;
            let cx = quadrature_variance(Quadrature::X, &cp.params)?;
            let cy = quadrature_variance(Quadrature::Y, &cp.params)?;
            let status_x = classify_mc(cx, est.var_x, est.stderr_x);
            let status_y = classify_mc(cy, est.var_y, est.stderr_y);
            let status = match (status_x, status_y) {
                (VerifyStatus::Fail, _) | (_, VerifyStatus::Fail) => VerifyStatus::Fail,
                (VerifyStatus::Inconclusive, _) | (_, VerifyStatus::Inconclusive) => {
                    VerifyStatus::Inconclusive
                }
                _ => VerifyStatus::Pass,
            };
            if status == VerifyStatus::Fail
                || (status == VerifyStatus::Inconclusive && mc_worst == VerifyStatus::Pass)
            {
                mc_worst = status;
            }
            if !quiet {
                println!(
                    "  {:<32} X {:.5} vs {:.5} +- {:.5} | Y {:.5} vs {:.5} +- {:.5} | {status}",
                    cp.label, cx, est.var_x, est.stderr_x, cy, est.var_y, est.stderr_y
                );
            }
            mc_results.push((cp.label, cx, cy, est, status));
        }
    }

    let overall = if !scattering_ok || !lyapunov_ok || mc_worst == VerifyStatus::Fail {
        VerifyStatus::Fail
    } else if mc_worst == VerifyStatus::Inconclusive {
        VerifyStatus::Inconclusive
    } else {
        VerifyStatus::Pass
    };
    if !quiet {
        println!("overall: {overall}");
    }
    let summary = VerifySummary {
        draws,
        max_rel_err,
        worst_params: worst,
        lyapunov_max_err,
        mc_results,
        overall,
    };
    if overall == VerifyStatus::Fail {
        let worst_desc = summary
            .worst_params
            .map(|p| format!("{p:?}"))
            .unwrap_or_else(|| "n/a".into());
        return Err(CliError::Oracle(format!(
            "verification failed: scattering max rel err {max_rel_err:.3e} (tol {SCATTERING_TOL:.0e}), \
             lyapunov max rel err {lyapunov_max_err:.3e} (tol {LYAPUNOV_TOL:.0e}); worst draw {worst_desc}"
        )));
    }
    Ok(summary)
}

/// Run the saturation scan of a scenario carrying a [saturation] section.
pub fn run_saturation(
    sc: &Scenario,
    name: &str,
    out_dir: &Path,
    quiet: bool,
) -> Result<SaturationOutcome, CliError> {
    let sat = sc
        .config
        .saturation
        .as_ref()
        .ok_or_else(|| CliError::Config("config has no [saturation] section".into()))?;
    if sat.f_count < 2 || sat.f_stop <= sat.f_start {
        return Err(CliError::Config(
            "saturation needs f_count >= 2 and f_stop > f_start".into(),
        ));
    }
    let f_grid: Vec<f64> = (0..sat.f_count)
        .map(|i| {
            let t = i as f64 / (sat.f_count - 1) as f64;
            sat.f_start * (1.0 - t) + sat.f_stop * t
        })
        .collect();
    let q = parse_quadrature(&sat.quadrature)?;
    let scan = saturation_scan(
        &sc.cavity,
        sc.input,
        sc.pump.theta,
        &f_grid,
        &sc.grid,
        q,
        sat.epsilon_db,
    )?;

    write_file(
        &out_dir.join(format!("{name}_saturation.csv")),
        &output::saturation_csv(&scan),
    )?;
    let report = output::saturation_report(&scan, sat.reference_f);
    write_file(
        &out_dir.join(format!("{name}_saturation.json")),
        &output::to_json_pretty(&report)?,
    )?;

    if !quiet {
        for row in &scan.table {
            println!(
                "  f = {:.3}: interior window prominence {:.4} dB",
                row.f, row.prominence_db
            );
        }
        match scan.outcome {
            SaturationOutcome::Saturated { f_star } => match sat.reference_f {
                Some(r) => {
                    println!("interior window closes at f* = {f_star:.4} (design reference {r})")
                }
                None => println!("interior window closes at f* = {f_star:.4}"),
            },
            SaturationOutcome::NotSaturated => {
                println!("interior window persists across the scanned range (not saturated)")
            }
        }
    }
    Ok(scan.outcome)
}
