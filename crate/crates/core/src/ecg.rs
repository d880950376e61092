//! Windowed power experiment on recorded (ECG) input.
//!
//! The clock period is chosen from the signal bandwidth with the same bound
//! used for sines, the whole record is simulated, and the power reduction is
//! reported overall and over a sliding window.

use serde::Serialize;

use crate::ackgen::ClockConfig;
use crate::adc::AdcConfig;
use crate::engine::{simulate, SimTrace};
use crate::error::{invalid, Error, Result};
use crate::power::{max_clock_period, measured_power, PowerReport};
use crate::signal::SignalSource;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EcgSettings {
    /// Bandwidth bound used to size the clock, in hertz.
    pub bandwidth: f64,
    /// Sliding window length in seconds; the stride is half of it.
    pub window: f64,
    /// Seed for a random clock phase; `None` puts the first edge at t = 0.
    pub phase_seed: Option<u64>,
}

impl Default for EcgSettings {
    fn default() -> Self {
        EcgSettings { bandwidth: 150.0, window: 0.05, phase_seed: None }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct WindowReduction {
    pub start: f64,
    pub end: f64,
    pub center: f64,
    pub reduction: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EcgReport {
    pub power: PowerReport,
    pub t_clk: f64,
    pub windows: Vec<WindowReduction>,
    pub peak_reduction: f64,
    pub peak_time: f64,
    pub overloads: usize,
}

impl EcgReport {
    pub fn avg_reduction(&self) -> f64 {
        self.power.reduction
    }
}

#[derive(Debug, Clone)]
pub struct EcgRun {
    pub report: EcgReport,
    pub trace: SimTrace,
}

/// Reduction in each window `[k * stride, k * stride + window]`, clipped to
/// the trace. Trailing windows may be shorter than `window`.
pub fn windowed_reductions(
    trace: &SimTrace,
    cfg: &AdcConfig,
    window: f64,
    stride: f64,
) -> Result<Vec<WindowReduction>> {
    if !(window > 0.0) || !(stride > 0.0) {
        return Err(invalid("window and stride must be positive"));
    }
    let limit = cfg.reduction_limit();
    let mut out = Vec::new();
    let mut k = 0u64;
    loop {
        let start = k as f64 * stride;
        if start >= trace.duration {
            break;
        }
        let end = (start + window).min(trace.duration);
        let off = trace.off_time_between(start, end) / (end - start);
        out.push(WindowReduction {
            start,
            end,
            center: 0.5 * (start + end),
            reduction: (limit * off.clamp(0.0, 1.0)).clamp(0.0, limit),
        });
        k += 1;
    }
    Ok(out)
}

pub fn run_ecg(record: &SignalSource, cfg: &AdcConfig, settings: &EcgSettings) -> Result<EcgRun> {
    cfg.validate()?;
    let duration = record.end_time().ok_or_else(|| invalid("ECG experiment needs a sampled record"))?;
    if !(settings.window > 0.0) || !(settings.bandwidth > 0.0) {
        return Err(invalid("bandwidth and window must be positive"));
    }
    if duration < settings.window {
        return Err(Error::RecordTooShort { duration, window: settings.window });
    }
    let (lo, hi) = record.range();
    if lo < 0.0 || hi > cfg.v_fs {
        return Err(invalid(format!("record spans [{lo}, {hi}] V, outside the full scale")));
    }

    let t_clk = max_clock_period(settings.bandwidth, cfg.v_fs / 2.0, cfg)?;
    let clk = match settings.phase_seed {
        Some(seed) => ClockConfig::with_random_phase(t_clk, seed)?,
        None => ClockConfig::new(t_clk, 0.0)?,
    };
    let trace = simulate(record, cfg, &clk, duration)?;
    let power = measured_power(&trace, cfg)?;

    let windows = windowed_reductions(&trace, cfg, settings.window, settings.window / 2.0)?;
    let full = |w: &&WindowReduction| w.end - w.start >= settings.window * (1.0 - 1e-9);
    let peak = windows
        .iter()
        .filter(full)
        .fold(None::<&WindowReduction>, |best, w| match best {
            Some(b) if b.reduction >= w.reduction => Some(b),
            _ => Some(w),
        })
        .copied()
        .ok_or(Error::RecordTooShort { duration, window: settings.window })?;

    let report = EcgReport {
        power,
        t_clk,
        windows,
        peak_reduction: peak.reduction,
        peak_time: peak.center,
        overloads: trace.overloads.len(),
    };
    Ok(EcgRun { report, trace })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn cfg() -> AdcConfig {
        AdcConfig::default()
    }

    /// Flat at zero, with one raised-cosine spike to full scale centred at `at`.
    fn spike_record(at: f64, half_width: f64, duration: f64) -> SignalSource {
        let fs = 20_000.0;
        let n = (duration * fs) as usize + 1;
        let values = (0..n)
            .map(|k| {
                let t = k as f64 / fs;
                let x = (t - at) / half_width;
                if x.abs() < 1.0 {
                    0.5 + 0.5 * (std::f64::consts::PI * x).cos()
                } else {
                    0.0
                }
            })
            .collect();
        SignalSource::from_uniform(values, fs).unwrap()
    }

    #[test]
    fn flat_line_has_no_reduction() {
        let rec = SignalSource::from_uniform(vec![0.51; 3601], 360.0).unwrap();
        let run = run_ecg(&rec, &cfg(), &EcgSettings::default()).unwrap();
        assert_eq!(run.report.avg_reduction(), 0.0);
        assert!(run.report.windows.iter().all(|w| w.reduction == 0.0));
        assert_eq!(run.trace.events.len(), 0);
    }

    #[test]
    fn single_spike_window_off_time() {
        let c = cfg();
        let rec = spike_record(0.5, 0.01, 1.0);
        let settings = EcgSettings { bandwidth: 150.0, window: 0.05, phase_seed: Some(3) };
        let run = run_ecg(&rec, &c, &settings).unwrap();
        let tr = &run.trace;
        // every interior boundary once up and once down
        let n = tr.events.len();
        assert_eq!(n, 62);
        assert!(tr.overloads.is_empty());
        let off = tr.off_time_between(0.475, 0.525);
        let expected = 62.0 * 1.5 * run.report.t_clk;
        // 1.5 periods is a mean; 62 draws leave a few percent of spread
        assert_relative_eq!(off, expected, max_relative = 0.1);
        assert!(run.report.peak_reduction > run.report.avg_reduction());
        assert!((run.report.peak_time - 0.5).abs() <= 0.025 + 1e-9);
    }

    #[test]
    fn contiguous_windows_average_to_overall() {
        let c = cfg();
        let rec = spike_record(0.33, 0.02, 1.03);
        let run = run_ecg(&rec, &c, &EcgSettings::default()).unwrap();
        let ws = windowed_reductions(&run.trace, &c, 0.05, 0.05).unwrap();
        let weighted: f64 = ws.iter().map(|w| w.reduction * (w.end - w.start)).sum::<f64>() / run.trace.duration;
        assert_relative_eq!(weighted, run.report.avg_reduction(), max_relative = 1e-9);
        let limit = c.reduction_limit();
        assert!(run.report.windows.iter().all(|w| (0.0..=limit).contains(&w.reduction)));
    }

    #[test]
    fn short_record_rejected() {
        let rec = SignalSource::from_uniform(vec![0.2, 0.8, 0.2], 360.0).unwrap();
        assert!(matches!(run_ecg(&rec, &cfg(), &EcgSettings::default()), Err(Error::RecordTooShort { .. })));
    }
}
