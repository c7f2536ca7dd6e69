//! Fixed verification checkpoints spanning the preset regimes:
//! {single, hybrid} x {theta = 0, pi} x {s = 0, 0.5} x {f = 0.2, 0.5, 0.65},
//! all evaluated on resonance at zero analysis frequency, where every
//! combination is below threshold.

use hybrid_opa::{McConfig, SpectrumParams, SqueezedInput};

use crate::config::OracleSection;

/// Input decay of the single-cavity preset (t1 = 0.0016).
pub const SINGLE_GAMMA_IN: f64 = 0.0016 * 0.0016 / 2.0;
/// Back-mirror decay of the single-cavity preset (t3 = 0.00005).
pub const SINGLE_GAMMA_OUT: f64 = 0.00005 * 0.00005 / 2.0;
/// On-resonance input decay of the hybrid preset family
/// (t1 = 0.016, t2 = 0.26, gamma_c = 0.212).
pub const HYBRID_GAMMA_IN: f64 = 0.319_484_666_966;
/// Back-mirror decay of the hybrid preset family (t3 = 0.002).
pub const HYBRID_GAMMA_OUT: f64 = 0.002 * 0.002 / 2.0;

#[derive(Debug, Clone)]
pub struct Checkpoint {
    pub label: String,
    pub params: SpectrumParams,
}

/// The standard 24-point verification set.
pub fn standard_checkpoints() -> Vec<Checkpoint> {
    let pi = std::f64::consts::PI;
    let mut out = Vec::new();
    for (cav, gin, gout) in [
        ("single", SINGLE_GAMMA_IN, SINGLE_GAMMA_OUT),
        ("hybrid", HYBRID_GAMMA_IN, HYBRID_GAMMA_OUT),
    ] {
        for theta in [0.0, pi] {
            for s in [0.0, 0.5] {
                for f in [0.2, 0.5, 0.65] {
                    let gs = gin + gout;
                    let params = SpectrumParams::new(
                        0.0,
                        0.0,
                        gin,
                        gout,
                        0.0,
                        f * gs,
                        theta,
                        SqueezedInput::new(s).expect("valid squeeze index"),
                    )
                    .expect("checkpoint parameters are valid");
                    out.push(Checkpoint {
                        label: format!("{cav} theta={theta:.2} s={s} f={f}"),
                        params,
                    });
                }
            }
        }
    }
    out
}

/// Monte Carlo settings for one checkpoint, derived from the per-decay-time
/// fractions in the oracle config section.
pub fn mc_config_for(params: &SpectrumParams, oracle: &OracleSection) -> McConfig {
    let gs = params.gamma_s();
    McConfig {
        h: oracle.step_fraction / gs,
        duration: oracle.duration_decay_times / gs,
        n_traj: oracle.n_traj,
        burn_in: oracle.burn_in,
        seed: oracle.seed,
    }
}
