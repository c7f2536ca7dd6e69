//! Integration checks of the channel analyzer against generated spectra:
//! grid-refinement stability, mirror symmetry of the channel pairs, and the
//! invariance of extremum detection under the monotone dB transform.

use hybrid_opa::{
    channel_report, find_extrema, spectrum_curve, CavityKind, CavityModel, ExtremumKind, GridSpec,
    MirrorSet, PumpDrive, Quadrature, SqueezedInput,
};

fn hybrid_cavity() -> CavityModel {
    let mirrors = MirrorSet::lossless_from_transmissions(0.016, 0.26, 0.002).unwrap();
    CavityModel::new(
        CavityKind::Hybrid,
        mirrors,
        5.134030422319e-9,
        48.353622258065,
        0.212,
        0.0,
        2e-6,
    )
    .unwrap()
}

#[test]
fn channels_stable_under_grid_refinement() {
    let cavity = hybrid_cavity();
    let pump = PumpDrive::new(0.5, 0.0).unwrap();
    let input = SqueezedInput::vacuum();
    let coarse_grid = GridSpec::new(-0.16, 0.16, 1001, 0.0).unwrap();
    let fine_grid = GridSpec::new(-0.16, 0.16, 2001, 0.0).unwrap();
    let coarse = spectrum_curve(&cavity, &pump, input, &coarse_grid).unwrap();
    let fine = spectrum_curve(&cavity, &pump, input, &fine_grid).unwrap();
    let ch_coarse = channel_report(&coarse, Quadrature::Y, 0.2);
    let ch_fine = channel_report(&fine, Quadrature::Y, 0.2);
    assert_eq!(
        ch_coarse.len(),
        ch_fine.len(),
        "channel count changed under refinement"
    );
    let step = coarse_grid.step();
    for (a, b) in ch_coarse.iter().zip(&ch_fine) {
        assert!(
            (a.center - b.center).abs() <= step,
            "center moved {} > one coarse step {step}",
            (a.center - b.center).abs()
        );
        assert!(
            (a.depth_db - b.depth_db).abs() <= 0.05,
            "depth moved {} dB",
            (a.depth_db - b.depth_db).abs()
        );
    }
}

#[test]
fn channels_come_in_mirror_pairs() {
    let cavity = hybrid_cavity();
    let input = SqueezedInput::new(0.5).unwrap();
    let grid = GridSpec::new(-0.16, 0.16, 2001, 0.0).unwrap();
    for theta in [0.0, std::f64::consts::PI] {
        let pump = PumpDrive::new(0.5, theta).unwrap();
        let curve = spectrum_curve(&cavity, &pump, input, &grid).unwrap();
        let channels = channel_report(&curve, Quadrature::X, 0.2);
        assert!(!channels.is_empty());
        let step = grid.step();
        for c in &channels {
            if c.center.abs() < step {
                continue; // the resonance channel is its own partner
            }
            let partner = channels
                .iter()
                .find(|p| p.kind == c.kind && (p.center + c.center).abs() <= step);
            let partner = partner.unwrap_or_else(|| {
                panic!(
                    "no mirror partner for channel at {} (theta = {theta})",
                    c.center
                )
            });
            assert!(
                (partner.depth_db - c.depth_db).abs() <= 0.01,
                "paired depths differ by {} dB",
                (partner.depth_db - c.depth_db).abs()
            );
        }
    }
}

#[test]
fn extrema_indices_invariant_under_db_transform() {
    let cavity = hybrid_cavity();
    let pump = PumpDrive::new(0.5, 0.0).unwrap();
    let grid = GridSpec::new(-0.16, 0.16, 801, 0.0).unwrap();
    let curve = spectrum_curve(&cavity, &pump, SqueezedInput::vacuum(), &grid).unwrap();
    let linear = find_extrema(curve.values(Quadrature::Y));
    let db = find_extrema(&curve.var_y_db());
    assert_eq!(linear, db);
    assert!(linear.iter().any(|(_, k)| *k == ExtremumKind::Dip));
}

#[test]
fn pump_off_scan_reports_not_saturated() {
    // saturation-scan calibration: wider splitting, lower-loss front loop
    let mirrors = MirrorSet::lossless_from_transmissions(0.016, 0.26, 0.002).unwrap();
    let cavity = CavityModel::new(
        CavityKind::Hybrid,
        mirrors,
        1.3889313e-8,
        48.353622258065,
        0.15,
        0.0,
        2e-6,
    )
    .unwrap();
    let grid = GridSpec::new(-0.4329, 0.4329, 801, 0.0).unwrap();
    let scan = hybrid_opa::saturation_scan(
        &cavity,
        SqueezedInput::new(0.5).unwrap(),
        std::f64::consts::PI,
        &[0.0],
        &grid,
        Quadrature::X,
        0.01,
    )
    .unwrap();
    // with the pump off the interior window is wide open
    assert_eq!(scan.outcome, hybrid_opa::SaturationOutcome::NotSaturated);
    assert!(
        scan.table[0].prominence_db > 1.0,
        "baseline window should be prominent, got {}",
        scan.table[0].prominence_db
    );
}
