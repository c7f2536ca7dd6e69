//! Cross-checks between the three verifiers that go beyond the per-module
//! unit tests: a step-halving (Richardson) check of the stochastic
//! integrator and the parallel/sequential equivalence of the ensemble path.

use hybrid_opa::{
    lyapunov_covariance, mc_variance, mc_variance_seq, McConfig, SpectrumParams, SqueezedInput,
};

fn pumped_point() -> SpectrumParams {
    let gs = 0.3195;
    SpectrumParams::new(
        0.0,
        0.0,
        gs,
        0.0,
        0.0,
        0.5 * gs,
        std::f64::consts::PI,
        SqueezedInput::new(0.5).unwrap(),
    )
    .unwrap()
}

#[test]
fn halving_the_step_changes_estimates_by_less_than_the_error_bars() {
    let p = pumped_point();
    let gs = p.gamma_s();
    let coarse = McConfig {
        h: 0.008 / gs,
        duration: 1600.0 / gs,
        n_traj: 96,
        burn_in: 0.1,
        seed: 4242,
    };
    let fine = McConfig {
        h: 0.004 / gs,
        ..coarse
    };
    let a = mc_variance(&p, &coarse).unwrap();
    let b = mc_variance(&p, &fine).unwrap();
    let err_x = (a.stderr_x * a.stderr_x + b.stderr_x * b.stderr_x).sqrt();
    let err_y = (a.stderr_y * a.stderr_y + b.stderr_y * b.stderr_y).sqrt();
    assert!(
        (a.var_x - b.var_x).abs() <= 3.0 * err_x,
        "X drifted {} vs {} (+- {err_x})",
        a.var_x,
        b.var_x
    );
    assert!(
        (a.var_y - b.var_y).abs() <= 3.0 * err_y,
        "Y drifted {} vs {} (+- {err_y})",
        a.var_y,
        b.var_y
    );
}

#[test]
fn parallel_and_sequential_ensembles_agree_bitwise() {
    let p = pumped_point();
    let gs = p.gamma_s();
    let cfg = McConfig {
        h: 0.008 / gs,
        duration: 400.0 / gs,
        n_traj: 24,
        burn_in: 0.1,
        seed: 777,
    };
    let par = mc_variance(&p, &cfg).unwrap();
    let seq = mc_variance_seq(&p, &cfg).unwrap();
    assert_eq!(par, seq);
}

#[test]
fn intracavity_variances_shrink_below_vacuum_on_the_squeezed_axis() {
    // theta = pi deamplifies X inside the cavity as well: V_xx < 1/2 < V_yy
    let p = SpectrumParams::new(
        0.0,
        0.0,
        0.3,
        0.0,
        0.0,
        0.15,
        std::f64::consts::PI,
        SqueezedInput::vacuum(),
    )
    .unwrap();
    let v = lyapunov_covariance(&p).unwrap();
    assert!(v[0][0] < 0.5, "V_xx = {}", v[0][0]);
    assert!(v[1][1] > 0.5, "V_yy = {}", v[1][1]);
}
