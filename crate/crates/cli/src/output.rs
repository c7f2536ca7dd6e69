//! Serialization of curves and reports: CSV payloads (deterministic bytes
//! for a fixed config and seed), machine-readable JSON reports, and the
//! metadata sidecar that carries everything non-deterministic (timestamps).

use serde::Serialize;

use hybrid_opa::{
    units_to_physical, ChannelReport, ExtremumKind, Quadrature, SaturationOutcome, SaturationScan,
    SpectrumCurve,
};

use crate::config::ScenarioConfig;
use crate::error::CliError;

/// Fixed-column CSV payload of a spectrum curve:
/// `delta,delta_mhz,omega,var_x,var_y,var_x_db,var_y_db`.
pub fn curve_csv(curve: &SpectrumCurve) -> Vec<u8> {
    let mut out = String::with_capacity(curve.len() * 64);
    out.push_str("delta,delta_mhz,omega,var_x,var_y,var_x_db,var_y_db\n");
    let tau = curve.meta.tau;
    for i in 0..curve.len() {
        let d = curve.detunings[i];
        let d_mhz = units_to_physical(d, tau).expect("tau validated") / 1e6;
        let vx = curve.var_x[i];
        let vy = curve.var_y[i];
        out.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            d,
            d_mhz,
            curve.meta.omega,
            vx,
            vy,
            10.0 * vx.log10(),
            10.0 * vy.log10()
        ));
    }
    out.into_bytes()
}

#[derive(Debug, Serialize)]
pub struct ChannelRecord {
    pub center: f64,
    pub center_mhz: f64,
    pub depth_db: f64,
    pub width: f64,
    pub width_mhz: f64,
    pub prominence_db: f64,
    pub kind: &'static str,
}

#[derive(Debug, Serialize)]
pub struct ChannelsReport {
    pub quadrature: &'static str,
    pub min_prominence_db: f64,
    pub channels: Vec<ChannelRecord>,
}

pub fn channels_report(
    curve: &SpectrumCurve,
    quadrature: Quadrature,
    reports: &[ChannelReport],
    min_prominence_db: f64,
) -> ChannelsReport {
    let tau = curve.meta.tau;
    let to_mhz = |x: f64| units_to_physical(x, tau).expect("tau validated") / 1e6;
    ChannelsReport {
        quadrature: match quadrature {
            Quadrature::X => "x",
            Quadrature::Y => "y",
        },
        min_prominence_db,
        channels: reports
            .iter()
            .map(|r| ChannelRecord {
                center: r.center,
                center_mhz: to_mhz(r.center),
                depth_db: r.depth_db,
                width: r.width,
                width_mhz: to_mhz(r.width),
                prominence_db: r.prominence_db,
                kind: match r.kind {
                    ExtremumKind::Dip => "dip",
                    ExtremumKind::Peak => "peak",
                },
            })
            .collect(),
    }
}

#[derive(Debug, Serialize)]
pub struct SaturationReport {
    pub quadrature: &'static str,
    pub epsilon_db: f64,
    pub saturated: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub f_star: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reference_f: Option<f64>,
    pub table: Vec<SaturationRow>,
}

#[derive(Debug, Serialize)]
pub struct SaturationRow {
    pub f: f64,
    pub prominence_db: f64,
}

pub fn saturation_report(scan: &SaturationScan, reference_f: Option<f64>) -> SaturationReport {
    SaturationReport {
        quadrature: match scan.quadrature {
            Quadrature::X => "x",
            Quadrature::Y => "y",
        },
        epsilon_db: scan.epsilon_db,
        saturated: matches!(scan.outcome, SaturationOutcome::Saturated { .. }),
        f_star: match scan.outcome {
            SaturationOutcome::Saturated { f_star } => Some(f_star),
            SaturationOutcome::NotSaturated => None,
        },
        reference_f,
        table: scan
            .table
            .iter()
            .map(|p| SaturationRow {
                f: p.f,
                prominence_db: p.prominence_db,
            })
            .collect(),
    }
}

pub fn saturation_csv(scan: &SaturationScan) -> Vec<u8> {
    let mut out = String::from("f,prominence_db\n");
    for p in &scan.table {
        out.push_str(&format!("{},{}\n", p.f, p.prominence_db));
    }
    out.into_bytes()
}

/// Metadata sidecar; the only artifact carrying a timestamp.
#[derive(Debug, Serialize)]
pub struct MetaSidecar<'a> {
    pub tool: &'static str,
    pub version: &'static str,
    pub generated_unix_s: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub preset: Option<&'a str>,
    pub gamma_s0: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode_splitting: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode_splitting_mhz: Option<f64>,
    pub config: &'a ScenarioConfig,
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<Vec<u8>, CliError> {
    let mut bytes = serde_json::to_vec_pretty(value)
        .map_err(|e| CliError::Config(format!("serialization failure: {e}")))?;
    bytes.push(b'\n');
    Ok(bytes)
}
