//! Test-only oracles, independent of the simulator's code paths.

#![allow(dead_code)]

use std::f64::consts::PI;

/// Ideal window tracker over a dense uniform sampling of `f` on `[t0, t1]`.
/// The window moves immediately by as many LSBs as needed; each boundary
/// passed counts as one crossing at the sample time where it was seen.
pub fn brute_force_crossings(
    f: impl Fn(f64) -> f64,
    bits: u32,
    v_fs: f64,
    t0: f64,
    t1: f64,
    samples: usize,
) -> Vec<f64> {
    let delta = v_fs / (1u64 << bits) as f64;
    let top = (1i64 << bits) - 1;
    let v0 = f(t0);
    let mut code = ((v0 / delta).floor() as i64).clamp(0, top);
    let mut times = Vec::new();
    for k in 1..=samples {
        let t = t0 + (t1 - t0) * k as f64 / samples as f64;
        let v = f(t);
        while code < top && v > (code + 1) as f64 * delta {
            code += 1;
            times.push(t);
        }
        while code > 0 && v < code as f64 * delta {
            code -= 1;
            times.push(t);
        }
    }
    times
}

pub struct SyntheticEcg {
    pub fs: f64,
    pub values: Vec<f64>,
    pub r_peaks: Vec<f64>,
}

/// Sum-of-Gaussians ECG (P, Q, R, S, T waves per beat) with a slowly varying
/// RR interval and mild baseline wander, in millivolts.
pub fn synthetic_ecg(seconds: f64, fs: f64) -> SyntheticEcg {
    // (offset from R peak in s, amplitude mV, width s)
    const WAVES: [(f64, f64, f64); 5] =
        [(-0.20, 0.15, 0.025), (-0.035, -0.12, 0.010), (0.0, 1.20, 0.011), (0.035, -0.25, 0.010), (0.28, 0.30, 0.045)];

    let mut r_peaks = Vec::new();
    let mut t = 0.45;
    let mut k = 0.0;
    while t < seconds + 1.0 {
        r_peaks.push(t);
        let rr = 0.83 + 0.04 * (2.0 * PI * 0.1 * t).sin() + 0.02 * (k * 1.7f64).sin();
        t += rr;
        k += 1.0;
    }

    let n = (seconds * fs).round() as usize + 1;
    let values = (0..n)
        .map(|i| {
            let t = i as f64 / fs;
            let wander = 0.05 * (2.0 * PI * 0.25 * t).sin();
            let beats: f64 = r_peaks
                .iter()
                .filter(|&&r| (t - r).abs() < 0.6)
                .map(|&r| WAVES.iter().map(|&(dt, a, w)| a * (-((t - r - dt) / w).powi(2) / 2.0).exp()).sum::<f64>())
                .sum();
            beats + wander
        })
        .collect();
    r_peaks.retain(|&r| r <= seconds);
    SyntheticEcg { fs, values, r_peaks }
}

pub fn write_single_column(path: &std::path::Path, values: &[f64]) {
    let mut text = String::from("value\n");
    for v in values {
        text.push_str(&format!("{v}\n"));
    }
    std::fs::write(path, text).unwrap();
}
