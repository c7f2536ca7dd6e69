//! Scenario configuration: one TOML file describes one scenario. Unknown
//! keys are rejected, parse errors carry line/column positions, and every
//! physical invariant is re-checked when the config is lowered into core
//! model types.

use serde::{Deserialize, Serialize};

use hybrid_opa::{
    mirror_to_decay, CavityKind, CavityModel, GridSpec, MirrorSet, PumpDrive, SqueezedInput,
};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
    pub cavity: CavitySection,
    pub pump: PumpSection,
    pub input: InputSection,
    pub grid: GridSection,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output: Option<OutputSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleSection>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub saturation: Option<SaturationSection>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CavitySection {
    /// "single" or "hybrid"
    pub kind: String,
    pub t1: f64,
    /// Middle-mirror transmission; hybrid only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t2: Option<f64>,
    pub t3: f64,
    /// Front-loop amplitude survival factor; hybrid only, default 1.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_c: Option<f64>,
    /// Intracavity decay (dimensionless); default 0.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub gamma_0: Option<f64>,
    /// Round-trip time in seconds (the normalization unit).
    pub tau_s: f64,
    /// Front-loop equivalent length in meters; enters only the hybrid
    /// round-trip phase. Default 0.05.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub length_m: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PumpSection {
    /// Pump amplitude as a fraction of threshold, in [0, 1).
    pub f: f64,
    /// Pump phase in radians.
    pub theta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputSection {
    /// Squeeze index of the driven port; 0 is vacuum.
    pub s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSection {
    /// Dimensionless detuning range (delta * tau).
    pub delta_min: f64,
    pub delta_max: f64,
    pub n: usize,
    /// Dimensionless analysis frequency (omega * tau).
    pub omega: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    /// Which quadratures get channel reports ("x", "y").
    #[serde(default = "default_quadratures")]
    pub quadratures: Vec<String>,
    #[serde(default = "default_min_prominence")]
    pub min_prominence_db: f64,
}

fn default_quadratures() -> Vec<String> {
    vec!["x".into(), "y".into()]
}

fn default_min_prominence() -> f64 {
    0.05
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            quadratures: default_quadratures(),
            min_prominence_db: default_min_prominence(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OracleSection {
    #[serde(default = "default_n_traj")]
    pub n_traj: usize,
    /// Integrator step as a fraction of the decay time: h = step_fraction / gamma_s.
    #[serde(default = "default_step_fraction")]
    pub step_fraction: f64,
    /// Trajectory length in decay times: duration = duration_decay_times / gamma_s.
    #[serde(default = "default_duration")]
    pub duration_decay_times: f64,
    #[serde(default = "default_burn_in")]
    pub burn_in: f64,
    #[serde(default = "default_seed")]
    pub seed: u64,
}

fn default_n_traj() -> usize {
    200
}
fn default_step_fraction() -> f64 {
    0.004
}
fn default_duration() -> f64 {
    1600.0
}
fn default_burn_in() -> f64 {
    0.1
}
fn default_seed() -> u64 {
    20260808
}

impl Default for OracleSection {
    fn default() -> Self {
        Self {
            n_traj: default_n_traj(),
            step_fraction: default_step_fraction(),
            duration_decay_times: default_duration(),
            burn_in: default_burn_in(),
            seed: default_seed(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SaturationSection {
    pub f_start: f64,
    pub f_stop: f64,
    pub f_count: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon_db: f64,
    #[serde(default = "default_sat_quadrature")]
    pub quadrature: String,
    /// Optional design reference printed next to the measured closure point.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_f: Option<f64>,
}

fn default_epsilon() -> f64 {
    0.01
}
fn default_sat_quadrature() -> String {
    "x".into()
}

/// Fully validated scenario: core model types plus runner settings.
#[derive(Debug, Clone)]
pub struct Scenario {
    pub config: ScenarioConfig,
    pub cavity: CavityModel,
    pub pump: PumpDrive,
    pub input: SqueezedInput,
    pub grid: GridSpec,
    pub output: OutputSection,
    pub oracle: OracleSection,
}

pub fn parse_quadrature(name: &str) -> Result<hybrid_opa::Quadrature, CliError> {
    match name.to_ascii_lowercase().as_str() {
        "x" => Ok(hybrid_opa::Quadrature::X),
        "y" => Ok(hybrid_opa::Quadrature::Y),
        other => Err(CliError::Config(format!(
            "unknown quadrature `{other}` (use \"x\" or \"y\")"
        ))),
    }
}

impl ScenarioConfig {
    /// Parse from TOML text; parse and schema errors carry the offending
    /// span as reported by the TOML parser.
    pub fn from_toml(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(format!("config parse error: {e}")))
    }

    /// Lower into validated core types, re-checking every model invariant.
    pub fn build(&self) -> Result<Scenario, CliError> {
        let kind = match self.cavity.kind.as_str() {
            "single" => CavityKind::SingleCavity,
            "hybrid" => CavityKind::Hybrid,
            other => {
                return Err(CliError::Config(format!(
                    "cavity.kind must be \"single\" or \"hybrid\", got \"{other}\""
                )))
            }
        };
        match kind {
            CavityKind::SingleCavity => {
                if self.cavity.t2.is_some() || self.cavity.gamma_c.is_some() {
                    return Err(CliError::Config(
                        "cavity.t2 and cavity.gamma_c apply to the hybrid kind only".into(),
                    ));
                }
            }
            CavityKind::Hybrid => {
                if self.cavity.t2.is_none() {
                    return Err(CliError::Config("hybrid cavity requires cavity.t2".into()));
                }
            }
        }
        let t2 = self.cavity.t2.unwrap_or(1.0);
        let mirrors = MirrorSet::lossless_from_transmissions(self.cavity.t1, t2, self.cavity.t3)?;
        let gamma_out = mirror_to_decay(self.cavity.t3)?;
        let cavity = CavityModel::new(
            kind,
            mirrors,
            self.cavity.tau_s,
            self.cavity.length_m.unwrap_or(0.05),
            self.cavity.gamma_c.unwrap_or(1.0),
            self.cavity.gamma_0.unwrap_or(0.0),
            gamma_out,
        )?;
        let pump = PumpDrive::new(self.pump.f, self.pump.theta)?;
        let input = SqueezedInput::new(self.input.s)?;
        let grid = GridSpec::new(
            self.grid.delta_min,
            self.grid.delta_max,
            self.grid.n,
            self.grid.omega,
        )?;
        Ok(Scenario {
            config: self.clone(),
            cavity,
            pump,
            input,
            grid,
            output: self.output.clone().unwrap_or_default(),
            oracle: self.oracle.unwrap_or_default(),
        })
    }
}

/// Annotated configuration template printed by the `schema` subcommand.
pub const SCHEMA_TEMPLATE: &str = r#"# Scenario configuration (TOML). One file = one scenario.
# Unknown keys are rejected. All rates and frequencies in [grid] are
# dimensionless (multiplied by the round-trip time tau).

label = "optional human-readable description"

[cavity]
kind = "hybrid"        # "hybrid" (front + middle + back mirror) or "single"
t1 = 0.016             # front-mirror amplitude transmission, in [0, 1]
t2 = 0.26              # middle-mirror transmission; hybrid only
t3 = 0.002             # back-mirror transmission (vacuum port)
gamma_c = 0.212        # front-loop amplitude survival factor; hybrid only, default 1
gamma_0 = 0.0          # intracavity decay (no noise port); default 0. Nonzero
                       # values break the uncertainty floor of the closed form
                       # and are rejected during curve generation.
tau_s = 5.134e-9       # round-trip time in seconds (normalization unit)
length_m = 48.35       # front-loop equivalent length; sets the round-trip
                       # phase per unit detuning, phi = 2*L/(c*tau) * delta*tau

[pump]
f = 0.5                # pump amplitude as a fraction of threshold, [0, 1)
theta = 0.0            # pump phase in radians

[input]
s = 0.0                # squeeze index; 0 = vacuum, input variances exp(+-2s)

[grid]
delta_min = -0.16      # dimensionless detuning range (delta * tau)
delta_max = 0.16
n = 2001               # sample count (odd + symmetric range puts 0 on-grid)
omega = 0.0            # dimensionless analysis frequency (omega * tau)

[output]               # optional
quadratures = ["x", "y"]   # which quadratures get channel reports
min_prominence_db = 0.05   # channel detection threshold

[oracle]               # optional; Monte Carlo settings for `verify`
n_traj = 200
step_fraction = 0.004      # h = step_fraction / gamma_s
duration_decay_times = 1600.0
burn_in = 0.1
seed = 20260808

[saturation]           # optional; required by `saturation`
f_start = 0.0
f_stop = 0.75
f_count = 16
epsilon_db = 0.01
quadrature = "x"
reference_f = 0.65     # optional design value printed for comparison
"#;
