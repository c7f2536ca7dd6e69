//! Single-bin Welch estimator: averaged Hann-windowed periodograms with 50%
//! overlap, evaluated at one DFT bin. Only one frequency is ever needed per
//! Monte Carlo run, so the bin is computed directly instead of via a full
//! FFT. The window's equivalent noise bandwidth divides out through the
//! sum-of-squares normalization.

/// Power spectral density (double-sided, per unit cyclic frequency times the
/// sample step) of `series` at DFT bin `bin` of segment length `nperseg`.
///
/// Returns `(psd, n_segments)`. `dt` is the sample step.
pub fn psd_at_bin(series: &[f64], nperseg: usize, bin: usize, dt: f64) -> (f64, usize) {
    assert!(nperseg >= 2 && bin < nperseg);
    assert!(series.len() >= nperseg, "series shorter than one segment");
    let hop = nperseg / 2; // 50% overlap
    let n_segments = 1 + (series.len() - nperseg) / hop;

    // Hann window (periodic form) and its sum of squares
    let mut window = Vec::with_capacity(nperseg);
    let mut wss = 0.0;
    for i in 0..nperseg {
        let w = 0.5 * (1.0 - (std::f64::consts::TAU * i as f64 / nperseg as f64).cos());
        wss += w * w;
        window.push(w);
    }

    // twiddle factors for the single bin
    let phase = -std::f64::consts::TAU * bin as f64 / nperseg as f64;
    let (dsin, dcos) = phase.sin_cos();

    let mut acc = 0.0;
    for seg in 0..n_segments {
        let start = seg * hop;
        let mut re = 0.0;
        let mut im = 0.0;
        // incremental rotation e^{i phase n}
        let mut cr = 1.0;
        let mut ci = 0.0;
        for i in 0..nperseg {
            let v = window[i] * series[start + i];
            re += v * cr;
            im += v * ci;
            let nr = cr * dcos - ci * dsin;
            ci = cr * dsin + ci * dcos;
            cr = nr;
        }
        acc += (re * re + im * im) * dt / wss;
    }
    (acc / n_segments as f64, n_segments)
}
