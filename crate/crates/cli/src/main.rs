//! Command-line entry point.
//!
//! Exit codes: 0 success, 1 physics/validation error, 2 oracle failure,
//! 3 i/o error.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use hybrid_opa_cli::config::{ScenarioConfig, SCHEMA_TEMPLATE};
use hybrid_opa_cli::error::CliError;
use hybrid_opa_cli::{presets, run};

#[derive(Parser)]
#[command(
    name = "hybrid-opa",
    version,
    about = "Quadrature noise spectra of a hybrid cavity with a below-threshold parametric amplifier"
)]
struct Cli {
    /// Load a scenario from a TOML file.
    #[arg(long, global = true, value_name = "PATH")]
    config: Option<PathBuf>,

    /// Load a bundled preset by name (see `presets`).
    #[arg(long, global = true, value_name = "NAME")]
    preset: Option<String>,

    /// Output directory for generated files.
    #[arg(long, global = true, default_value = "out")]
    out_dir: PathBuf,

    /// Override the Monte Carlo base seed.
    #[arg(long, global = true)]
    seed: Option<u64>,

    /// Override the detuning grid sample count.
    #[arg(long, global = true)]
    grid_n: Option<usize>,

    /// Suppress human-readable progress output.
    #[arg(long, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the quadrature noise spectrum: CSV curve + channel reports.
    Spectrum,
    /// Print channel reports for the configured quadratures as JSON.
    Channels,
    /// Check the closed-form spectra against the independent verifiers.
    Verify {
        /// Number of random parameter draws for the scattering comparison.
        #[arg(long, default_value_t = 10_000)]
        draws: usize,
        /// Skip the Monte Carlo checkpoints (scattering + Lyapunov only).
        #[arg(long)]
        skip_mc: bool,
    },
    /// Scan pump fractions and locate where the interior window closes.
    Saturation,
    /// List bundled presets.
    Presets,
    /// Print the annotated configuration schema.
    Schema,
}

fn load_config(cli: &Cli) -> Result<(String, ScenarioConfig), CliError> {
    match (&cli.config, &cli.preset) {
        (Some(_), Some(_)) => Err(CliError::Config(
            "pass either --config or --preset, not both".into(),
        )),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path)?;
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| "scenario".into());
            Ok((name, ScenarioConfig::from_toml(&text)?))
        }
        (None, Some(name)) => Ok((name.clone(), presets::load_preset(name)?)),
        (None, None) => Err(CliError::Config(
            "a scenario is required: pass --preset NAME or --config PATH".into(),
        )),
    }
}

fn apply_overrides(cfg: &mut ScenarioConfig, cli: &Cli) {
    if let Some(n) = cli.grid_n {
        cfg.grid.n = n;
    }
    if let Some(seed) = cli.seed {
        let mut oracle = cfg.oracle.unwrap_or_default();
        oracle.seed = seed;
        cfg.oracle = Some(oracle);
    }
}

fn dispatch(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Presets => {
            for (name, text) in presets::PRESETS {
                let label = ScenarioConfig::from_toml(text)
                    .ok()
                    .and_then(|c| c.label)
                    .unwrap_or_default();
                println!("{name:<12} {label}");
            }
            Ok(())
        }
        Command::Schema => {
            print!("{SCHEMA_TEMPLATE}");
            Ok(())
        }
        Command::Spectrum => {
            let (name, mut cfg) = load_config(cli)?;
            apply_overrides(&mut cfg, cli);
            let sc = cfg.build()?;
            run::run_spectrum(&sc, &name, &cli.out_dir, cli.quiet)?;
            Ok(())
        }
        Command::Channels => {
            let (_, mut cfg) = load_config(cli)?;
            apply_overrides(&mut cfg, cli);
            let sc = cfg.build()?;
            print!("{}", run::run_channels(&sc)?);
            Ok(())
        }
        Command::Verify { draws, skip_mc } => {
            let (_, mut cfg) = load_config(cli)?;
            apply_overrides(&mut cfg, cli);
            let sc = cfg.build()?;
            let seed = cli.seed.unwrap_or(sc.oracle.seed);
            run::run_verify(&sc, *draws, seed, *skip_mc, cli.quiet)?;
            Ok(())
        }
        Command::Saturation => {
            let (name, mut cfg) = load_config(cli)?;
            apply_overrides(&mut cfg, cli);
            let sc = cfg.build()?;
            run::run_saturation(&sc, &name, &cli.out_dir, cli.quiet)?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
