//! Bundled scenario presets. The files live under `presets/` at the
//! workspace root and are embedded at compile time; `--config` loads
//! arbitrary files instead.

use crate::config::ScenarioConfig;
use crate::error::CliError;

pub const PRESETS: &[(&str, &str)] = &[
    ("fig2a", include_str!("../../../presets/fig2a.toml")),
    ("fig2c", include_str!("../../../presets/fig2c.toml")),
    ("fig2c_f02", include_str!("../../../presets/fig2c_f02.toml")),
    ("fig2e", include_str!("../../../presets/fig2e.toml")),
    ("fig3a", include_str!("../../../presets/fig3a.toml")),
    ("fig3c", include_str!("../../../presets/fig3c.toml")),
    ("fig3e", include_str!("../../../presets/fig3e.toml")),
    ("fig4", include_str!("../../../presets/fig4.toml")),
    (
        "fig4_nopump",
        include_str!("../../../presets/fig4_nopump.toml"),
    ),
    (
        "saturation",
        include_str!("../../../presets/saturation.toml"),
    ),
];

pub fn preset_text(name: &str) -> Result<&'static str, CliError> {
    PRESETS
        .iter()
        .find(|(n, _)| *n == name)
        .map(|(_, text)| *text)
        .ok_or_else(|| {
            let names: Vec<&str> = PRESETS.iter().map(|(n, _)| *n).collect();
            CliError::Config(format!(
                "unknown preset `{name}`; available: {}",
                names.join(", ")
            ))
        })
}

pub fn load_preset(name: &str) -> Result<ScenarioConfig, CliError> {
    ScenarioConfig::from_toml(preset_text(name)?)
}
