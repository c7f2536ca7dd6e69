//! Extraction of observables from sampled spectra: channel (dark-window)
//! detection with prominence and half-prominence widths, the uncertainty
//! floor check, and the pump saturation scan that locates where the
//! interior window at zero detuning closes.

use crate::error::{ModelError, Result};
use crate::params::{CavityModel, GridSpec, PumpDrive, SqueezedInput};
use crate::spectra::{spectrum_curve, Quadrature, SpectrumCurve};

/// Kind of a detected channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExtremumKind {
    Dip,
    Peak,
}

/// One detected channel in a dB noise curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelReport {
    /// Center detuning (same units as the curve grid).
    pub center: f64,
    /// Signed dB value at the extremum relative to SNL; negative means
    /// suppression.
    pub depth_db: f64,
    /// Half-prominence width in detuning units.
    pub width: f64,
    pub prominence_db: f64,
    pub kind: ExtremumKind,
}

/// Interior strict local extrema with plateau handling: consecutive equal
/// samples collapse to their midpoint, endpoints are never reported.
pub fn find_extrema(values: &[f64]) -> Vec<(usize, ExtremumKind)> {
    if values.len() < 3 {
        return Vec::new();
    }
    // compress plateaus into runs
    let mut runs: Vec<(usize, usize, f64)> = Vec::new();
    let mut start = 0usize;
    for i in 1..=values.len() {
        if i == values.len() || values[i] != values[start] {
            runs.push((start, i - 1, values[start]));
            start = i;
        }
    }
    let mut out = Vec::new();
    for k in 1..runs.len().saturating_sub(1) {
        let prev = runs[k - 1].2;
        let next = runs[k + 1].2;
        let v = runs[k].2;
        let mid = (runs[k].0 + runs[k].1) / 2;
        if v > prev && v > next {
            out.push((mid, ExtremumKind::Peak));
        } else if v < prev && v < next {
            out.push((mid, ExtremumKind::Dip));
        }
    }
    out
}

/// Prominence of the extremum at `idx`: height above the higher of the two
/// bases, where each base is the lowest point between the extremum and the
/// nearest strictly higher point on that side (array edge if none).
/// For dips the sign is inverted.
fn prominence(values: &[f64], idx: usize, kind: ExtremumKind) -> f64 {
    let sgn = match kind {
        ExtremumKind::Peak => 1.0,
        ExtremumKind::Dip => -1.0,
    };
    let v0 = sgn * values[idx];
    let mut bases = [f64::NEG_INFINITY; 2];
    // left side
    let mut min_left = v0;
    for j in (0..idx).rev() {
        let v = sgn * values[j];
        if v > v0 {
            break;
        }
        min_left = min_left.min(v);
    }
    bases[0] = min_left;
    // right side
    let mut min_right = v0;
    for v in values[idx + 1..].iter().map(|&v| sgn * v) {
        if v > v0 {
            break;
        }
        min_right = min_right.min(v);
    }
    bases[1] = min_right;
    v0 - bases[0].max(bases[1])
}

/// Half-prominence width: distance between the crossings of the level
/// value -+ prominence/2 on the two flanks, linearly interpolated between
/// bracketing samples and clipped at the flank bases.
fn half_prominence_width(
    detunings: &[f64],
    values: &[f64],
    idx: usize,
    kind: ExtremumKind,
    prom: f64,
) -> f64 {
    let sgn = match kind {
        ExtremumKind::Peak => 1.0,
        ExtremumKind::Dip => -1.0,
    };
    let v0 = sgn * values[idx];
    let level = v0 - 0.5 * prom;

    let mut left = detunings[0];
    for j in (0..idx).rev() {
        let v = sgn * values[j];
        if v > v0 {
            left = detunings[j];
            break;
        }
        if v <= level {
            let v_hi = sgn * values[j + 1];
            let t = (v_hi - level) / (v_hi - v);
            left = detunings[j + 1] + t * (detunings[j] - detunings[j + 1]);
            break;
        }
        left = detunings[j];
    }
    let mut right = detunings[detunings.len() - 1];
    for j in idx + 1..values.len() {
        let v = sgn * values[j];
        if v > v0 {
            right = detunings[j];
            break;
        }
        if v <= level {
            let v_hi = sgn * values[j - 1];
            let t = (v_hi - level) / (v_hi - v);
            right = detunings[j - 1] + t * (detunings[j] - detunings[j - 1]);
            break;
        }
        right = detunings[j];
    }
    (right - left).abs()
}

/// Detect channels in one quadrature of a spectrum curve, in dB, filtered by
/// minimum prominence and sorted by |center| (resonance channel first).
pub fn channel_report(
    curve: &SpectrumCurve,
    quadrature: Quadrature,
    min_prominence_db: f64,
) -> Vec<ChannelReport> {
    let db: Vec<f64> = curve
        .values(quadrature)
        .iter()
        .map(|&v| 10.0 * v.log10())
        .collect();
    let mut reports: Vec<ChannelReport> = find_extrema(&db)
        .into_iter()
        .map(|(idx, kind)| {
            let prom = prominence(&db, idx, kind);
            let width = half_prominence_width(&curve.detunings, &db, idx, kind, prom);
            ChannelReport {
                center: curve.detunings[idx],
                depth_db: db[idx],
                width,
                prominence_db: prom,
                kind,
            }
        })
        .filter(|r| r.prominence_db >= min_prominence_db)
        .collect();
    reports.sort_by(|a, b| {
        a.center
            .abs()
            .partial_cmp(&b.center.abs())
            .unwrap()
            .then(a.center.partial_cmp(&b.center).unwrap())
    });
    reports
}

/// Worst-case uncertainty product over the curve and where it occurs.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UncertaintyReport {
    pub min_product: f64,
    pub at_delta: f64,
}

/// Minimum of var_x * var_y across the curve; errors if the floor 1 - 1e-9
/// is violated (SNL = 1 normalization).
pub fn uncertainty_check(curve: &SpectrumCurve) -> Result<UncertaintyReport> {
    let mut min_product = f64::INFINITY;
    let mut at_delta = 0.0;
    for i in 0..curve.len() {
        let prod = curve.var_x[i] * curve.var_y[i];
        if prod < min_product {
            min_product = prod;
            at_delta = curve.detunings[i];
        }
    }
    if min_product < 1.0 - 1e-9 {
        return Err(ModelError::UncertaintyViolation {
            product: min_product,
            delta: at_delta,
        });
    }
    Ok(UncertaintyReport {
        min_product,
        at_delta,
    })
}

/// Prominence (dB) of the interior extremum at the zero-detuning channel:
/// the height of the local maximum at delta = 0 above the nearer of the two
/// flanking local minima. Zero when delta = 0 is not a local maximum or a
/// flank is missing — i.e. when the interior window has closed and the
/// splitting dips are gone.
pub fn interior_dip_prominence_db(curve: &SpectrumCurve, quadrature: Quadrature) -> f64 {
    let db: Vec<f64> = curve
        .values(quadrature)
        .iter()
        .map(|&v| 10.0 * v.log10())
        .collect();
    let i0 = curve
        .detunings
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).unwrap())
        .map(|(i, _)| i)
        .unwrap_or(0);
    let extrema = find_extrema(&db);
    // the central extremum must be a peak (the bump between the two
    // interior dips); allow it to sit within one sample of delta = 0
    let central = extrema
        .iter()
        .find(|(i, k)| *k == ExtremumKind::Peak && (*i as i64 - i0 as i64).abs() <= 1);
    let Some(&(ic, _)) = central else {
        return 0.0;
    };
    let left_dip = extrema
        .iter()
        .rev()
        .find(|(i, k)| *k == ExtremumKind::Dip && *i < ic)
        .map(|&(i, _)| db[i]);
    let right_dip = extrema
        .iter()
        .find(|(i, k)| *k == ExtremumKind::Dip && *i > ic)
        .map(|&(i, _)| db[i]);
    match (left_dip, right_dip) {
        (Some(l), Some(r)) => (db[ic] - l.max(r)).max(0.0),
        _ => 0.0,
    }
}

/// One row of the saturation table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationPoint {
    pub f: f64,
    pub prominence_db: f64,
}

/// Result of a pump saturation scan.
#[derive(Debug, Clone, PartialEq)]
pub enum SaturationOutcome {
    /// Smallest pump fraction at which the interior window prominence drops
    /// below the vanishing threshold, refined by bisection.
    Saturated { f_star: f64 },
    /// The window never vanishes inside the scanned range.
    NotSaturated,
}

/// Saturation scan output: the prominence-vs-f table plus the outcome.
#[derive(Debug, Clone, PartialEq)]
pub struct SaturationScan {
    pub table: Vec<SaturationPoint>,
    pub outcome: SaturationOutcome,
    pub epsilon_db: f64,
    pub quadrature: Quadrature,
}

/// Scan pump fractions (ascending) and locate the smallest f at which the
/// interior window at the delta = 0 channel vanishes (prominence below
/// `epsilon_db`), bisecting between the bracketing grid points.
pub fn saturation_scan(
    cavity: &CavityModel,
    input: SqueezedInput,
    theta: f64,
    f_grid: &[f64],
    grid: &GridSpec,
    quadrature: Quadrature,
    epsilon_db: f64,
) -> Result<SaturationScan> {
    if f_grid.is_empty() || f_grid.windows(2).any(|w| w[0] >= w[1]) {
        return Err(ModelError::InvalidParameter {
            name: "f_grid",
            reason: "pump fractions must be non-empty and strictly ascending",
            value: f_grid.first().copied().unwrap_or(f64::NAN),
        });
    }
    let prom_at = |f: f64| -> Result<f64> {
        let pump = PumpDrive::new(f, theta)?;
        let curve = spectrum_curve(cavity, &pump, input, grid)?;
        Ok(interior_dip_prominence_db(&curve, quadrature))
    };

    let mut table = Vec::with_capacity(f_grid.len());
    for &f in f_grid {
        table.push(SaturationPoint {
            f,
            prominence_db: prom_at(f)?,
        });
    }

    let vanish_idx = table.iter().position(|p| p.prominence_db < epsilon_db);
    let outcome = match vanish_idx {
        None => SaturationOutcome::NotSaturated,
        Some(0) => SaturationOutcome::Saturated { f_star: f_grid[0] },
        Some(i) => {
            let mut lo = f_grid[i - 1]; // prominence >= epsilon here
            let mut hi = f_grid[i]; // prominence < epsilon here
            while hi - lo > 1e-4 {
                let mid = 0.5 * (lo + hi);
                if prom_at(mid)? < epsilon_db {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            SaturationOutcome::Saturated {
                f_star: 0.5 * (lo + hi),
            }
        }
    };
    Ok(SaturationScan {
        table,
        outcome,
        epsilon_db,
        quadrature,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn monotone_curve_has_no_extrema() {
        let v: Vec<f64> = (0..50).map(|i| i as f64 * 0.1).collect();
        assert!(find_extrema(&v).is_empty());
        assert!(find_extrema(&[1.0, 2.0]).is_empty());
    }

    #[test]
    fn single_gaussian_dip_found_at_center() {
        let n = 201;
        let v: Vec<f64> = (0..n)
            .map(|i| {
                let d = -3.0 + 6.0 * i as f64 / (n - 1) as f64;
                1.0 - 0.5 * (-d * d).exp()
            })
            .collect();
        let ex = find_extrema(&v);
        assert_eq!(ex.len(), 1);
        assert_eq!(ex[0], (100, ExtremumKind::Dip));
    }

    #[test]
    fn plateau_collapses_to_midpoint() {
        let v = vec![3.0, 1.0, 1.0, 1.0, 3.0, 5.0, 5.0, 3.0];
        let ex = find_extrema(&v);
        assert_eq!(ex, vec![(2, ExtremumKind::Dip), (5, ExtremumKind::Peak)]);
    }

    #[test]
    fn three_lorentzian_dips_recovered() {
        // analytic three-dip curve with known centers 0, +-2
        let n = 1001;
        let detunings: Vec<f64> = (0..n)
            .map(|i| -4.0 + 8.0 * i as f64 / (n - 1) as f64)
            .collect();
        let lorentz = |d: f64, c: f64, w: f64| 1.0 / (1.0 + ((d - c) / w).powi(2));
        let values: Vec<f64> = detunings
            .iter()
            .map(|&d| {
                1.0 - 0.5 * lorentz(d, 0.0, 0.2)
                    - 0.3 * lorentz(d, 2.0, 0.2)
                    - 0.3 * lorentz(d, -2.0, 0.2)
            })
            .collect();
        let ex = find_extrema(&values);
        let dips: Vec<f64> = ex
            .iter()
            .filter(|(_, k)| *k == ExtremumKind::Dip)
            .map(|&(i, _)| detunings[i])
            .collect();
        assert_eq!(dips.len(), 3);
        let step = 8.0 / (n - 1) as f64;
        assert!((dips[0] + 2.0).abs() <= step);
        assert!(dips[1].abs() <= step);
        assert!((dips[2] - 2.0).abs() <= step);
    }

    #[test]
    fn prominence_and_width_of_isolated_peak() {
        // triangle peak of height 1 at index 50, half-width 20
        let v: Vec<f64> = (0..101)
            .map(|i| (1.0 - (i as f64 - 50.0).abs() / 20.0).max(0.0))
            .collect();
        let ex = find_extrema(&v);
        let (idx, kind) = ex
            .into_iter()
            .find(|(_, k)| *k == ExtremumKind::Peak)
            .unwrap();
        assert_eq!(idx, 50);
        let p = prominence(&v, idx, kind);
        assert!((p - 1.0).abs() < 1e-12);
        let detunings: Vec<f64> = (0..101).map(|i| i as f64).collect();
        let w = half_prominence_width(&detunings, &v, idx, kind, p);
        // half-prominence level 0.5 crosses the triangle at +-10
        assert!((w - 20.0).abs() < 1e-9, "width = {w}");
    }

    #[test]
    fn dip_prominence_mirrors_peak_prominence() {
        let v = vec![0.0, -0.2, -1.0, -0.3, 0.0];
        let ex = find_extrema(&v);
        assert_eq!(ex, vec![(2, ExtremumKind::Dip)]);
        assert!((prominence(&v, 2, ExtremumKind::Dip) - 1.0).abs() < 1e-12);
    }
}
