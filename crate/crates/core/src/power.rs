//! Power accounting over simulated traces, plus the closed-form estimators
//! for tracking bandwidth, average power and the largest safe clock period.

use std::f64::consts::PI;

use serde::Serialize;

use crate::ackgen::{expected_off_time, ClockConfig};
use crate::adc::AdcConfig;
use crate::engine::SimTrace;
use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PowerReport {
    pub mean_power: f64,
    pub off_fraction: f64,
    /// `1 - mean_power / p_on`.
    pub reduction: f64,
    pub n_crossings: usize,
    pub duration: f64,
}

impl PowerReport {
    fn from_off_fraction(off_fraction: f64, n_crossings: usize, duration: f64, cfg: &AdcConfig) -> Self {
        let off_fraction = off_fraction.clamp(0.0, 1.0);
        let mean_power = mix_power(off_fraction, cfg);
        PowerReport { mean_power, off_fraction, reduction: 1.0 - mean_power / cfg.p_on, n_crossings, duration }
    }
}

/// Linear mix of tracking and off-state power.
pub fn mix_power(off_fraction: f64, cfg: &AdcConfig) -> f64 {
    let p = cfg.p_on * (1.0 - off_fraction) + cfg.p_off * off_fraction;
    p.clamp(cfg.p_off, cfg.p_on)
}

pub fn measured_power(trace: &SimTrace, cfg: &AdcConfig) -> Result<PowerReport> {
    if !(trace.duration > 0.0) {
        return Err(invalid("trace has zero duration"));
    }
    let off_fraction = trace.off_time() / trace.duration;
    Ok(PowerReport::from_off_fraction(off_fraction, trace.events.len(), trace.duration, cfg))
}

/// Average power predicted from a crossing count, each crossing costing the
/// expected off time of one and a half clock periods.
pub fn analytic_mean_power(n_crossings: usize, clk: &ClockConfig, t: f64, cfg: &AdcConfig) -> Result<PowerReport> {
    if !(t > 0.0) {
        return Err(invalid(format!("observation time must be positive, got {t}")));
    }
    let t_off = n_crossings as f64 * expected_off_time(clk);
    let off_fraction = t_off / t;
    if off_fraction > 1.0 {
        return Err(Error::OffFractionExceedsOne(off_fraction));
    }
    Ok(PowerReport::from_off_fraction(off_fraction, n_crossings, t, cfg))
}

/// Largest clock period for which the acknowledge round trip (at most two
/// periods) fits inside one LSB traversal of a sine at its steepest point.
pub fn max_clock_period(f_in: f64, amplitude: f64, cfg: &AdcConfig) -> Result<f64> {
    if !(f_in > 0.0) || !(amplitude > 0.0) {
        return Err(invalid(format!("f_in and amplitude must be positive, got {f_in}, {amplitude}")));
    }
    Ok(cfg.delta() / (4.0 * PI * f_in * amplitude))
}

/// Highest sine frequency the comparator decision time can follow.
pub fn max_tracking_frequency(cfg: &AdcConfig, amplitude: f64) -> Result<f64> {
    if !(amplitude > 0.0) {
        return Err(invalid(format!("amplitude must be positive, got {amplitude}")));
    }
    Ok(cfg.delta() / (amplitude * 2.0 * PI * cfg.t_comp))
}

/// Boundary crossings per period of a full-scale sine: every interior
/// boundary twice; the peaks only touch the rails.
pub fn sine_crossings_per_period(cfg: &AdcConfig) -> usize {
    2 * (cfg.levels() as usize - 1)
}

#[derive(Debug, Clone)]
pub enum ClockGrid {
    /// Explicit clock periods in seconds.
    Periods(Vec<f64>),
    /// Multiples of the bound at each input frequency.
    BoundFractions(Vec<f64>),
}

impl ClockGrid {
    fn is_empty(&self) -> bool {
        match self {
            ClockGrid::Periods(v) | ClockGrid::BoundFractions(v) => v.is_empty(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepPoint {
    pub f_in: f64,
    pub t_clk: f64,
    /// `None` when the clock period breaks the bound.
    pub off_fraction: Option<f64>,
    pub mean_power: Option<f64>,
    pub feasible: bool,
}

/// Relative slack when comparing a period to the bound, so that a period
/// computed as exactly the bound stays feasible.
const BOUND_SLACK: f64 = 1e-12;

/// Analytic off fraction over a grid of input frequencies and clock periods
/// for a sine of the given amplitude.
pub fn sweep_off_fraction(
    f_grid: &[f64],
    clk_grid: &ClockGrid,
    amplitude: f64,
    cfg: &AdcConfig,
) -> Result<Vec<SweepPoint>> {
    if f_grid.is_empty() || clk_grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let per_period = sine_crossings_per_period(cfg) as f64;
    let mut out = Vec::new();
    for &f in f_grid {
        let bound = max_clock_period(f, amplitude, cfg)?;
        let periods: Vec<f64> = match clk_grid {
            ClockGrid::Periods(p) => p.clone(),
            ClockGrid::BoundFractions(fr) => fr.iter().map(|x| x * bound).collect(),
        };
        for t_clk in periods {
            if !(t_clk > 0.0) {
                return Err(invalid(format!("clock period must be positive, got {t_clk}")));
            }
            let feasible = t_clk <= bound * (1.0 + BOUND_SLACK);
            // crossings per unit time times expected off time per crossing
            let off = per_period * f * 1.5 * t_clk;
            let (off_fraction, mean_power) =
                if feasible && off <= 1.0 { (Some(off), Some(mix_power(off, cfg))) } else { (None, None) };
            out.push(SweepPoint { f_in: f, t_clk, off_fraction, mean_power, feasible });
        }
    }
    Ok(out)
}

/// Log-spaced grid from `lo` to `hi` inclusive.
pub fn log_grid(lo: f64, hi: f64, points: usize) -> Result<Vec<f64>> {
    if !(lo > 0.0 && hi >= lo) || points == 0 {
        return Err(invalid(format!("bad log grid [{lo}, {hi}] x {points}")));
    }
    if points == 1 {
        return Ok(vec![lo]);
    }
    let (a, b) = (lo.ln(), hi.ln());
    Ok((0..points)
        .map(|i| {
            if i == 0 {
                lo
            } else if i + 1 == points {
                hi
            } else {
                (a + (b - a) * i as f64 / (points - 1) as f64).exp()
            }
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adc::Level;
    use crate::engine::{PowerSegment, PowerState};
    use approx::assert_relative_eq;

    fn cfg() -> AdcConfig {
        AdcConfig::default()
    }

    fn idle_trace(duration: f64) -> SimTrace {
        SimTrace {
            events: vec![],
            power_segments: vec![PowerSegment { start: 0.0, end: duration, state: PowerState::On }],
            overloads: vec![],
            duration,
            initial_level: Level::new(0, &cfg()).unwrap(),
        }
    }

    #[test]
    fn idle_trace_draws_tracking_power() {
        let r = measured_power(&idle_trace(1.0), &cfg()).unwrap();
        assert_eq!(r.mean_power, 12.2e-6);
        assert_eq!(r.reduction, 0.0);
        assert_eq!(r.off_fraction, 0.0);
    }

    #[test]
    fn always_off_limit() {
        let r = PowerReport::from_off_fraction(1.0, 0, 1.0, &cfg());
        assert_relative_eq!(r.mean_power, 6.7e-6, max_relative = 1e-12);
        let oracle = (12.2 - 6.7) / 12.2;
        assert_relative_eq!(r.reduction, oracle, max_relative = 1e-12);
        assert!((r.reduction - 0.4508).abs() < 1e-4);
    }

    #[test]
    fn linear_mix() {
        assert_relative_eq!(mix_power(0.4625, &cfg()), 9.65625e-6, max_relative = 1e-12);
    }

    #[test]
    fn analytic_examples() {
        let c = cfg();
        let bound = max_clock_period(1000.0, 0.5, &c).unwrap();
        let clk = ClockConfig::new(bound, 0.0).unwrap();
        let r = analytic_mean_power(62, &clk, 1e-3, &c).unwrap();
        let oracle = 93.0 / (64.0 * PI);
        assert_relative_eq!(r.off_fraction, oracle, max_relative = 1e-12);
        assert!((r.off_fraction - 0.4625).abs() < 1e-3);

        let r = analytic_mean_power(0, &clk, 1e-3, &c).unwrap();
        assert_eq!(r.mean_power, c.p_on);

        let half = ClockConfig::new(bound / 2.0, 0.0).unwrap();
        let r = analytic_mean_power(62, &half, 1e-3, &c).unwrap();
        assert_relative_eq!(r.off_fraction, oracle / 2.0, max_relative = 1e-12);
        assert!((r.off_fraction - 0.2313).abs() < 1e-4);

        let big = ClockConfig::new(1e-3, 0.0).unwrap();
        assert!(matches!(analytic_mean_power(62, &big, 1e-3, &c), Err(Error::OffFractionExceedsOne(_))));
    }

    #[test]
    fn clock_bound_examples() {
        let c = cfg();
        let b = max_clock_period(1000.0, 0.5, &c).unwrap();
        assert_relative_eq!(b, 0.03125 / (4.0 * PI * 1000.0 * 0.5), max_relative = 1e-15);
        assert!((b - 4.9736e-6).abs() < 1e-10);
        assert_relative_eq!(max_clock_period(2000.0, 0.5, &c).unwrap(), b / 2.0, max_relative = 1e-15);
        assert!((max_clock_period(100.0, 0.5, &c).unwrap() - 49.736e-6).abs() < 1e-9);
        assert!(max_clock_period(0.0, 0.5, &c).is_err());
        assert!(max_clock_period(10.0, 0.0, &c).is_err());
    }

    #[test]
    fn tracking_frequency_examples() {
        let c = cfg();
        let f = max_tracking_frequency(&c, 0.5).unwrap();
        assert!((f - 15083.0).abs() / 15083.0 < 1e-3, "{f}");
        let fast = AdcConfig { t_comp: c.t_comp / 2.0, ..c };
        assert_relative_eq!(max_tracking_frequency(&fast, 0.5).unwrap(), 2.0 * f, max_relative = 1e-12);
        let big = AdcConfig { v_fs: 3.3, ..c };
        assert_relative_eq!(max_tracking_frequency(&big, 3.3 / 2.0).unwrap(), f, max_relative = 1e-12);
        assert!(max_tracking_frequency(&c, 0.0).is_err());
    }

    #[test]
    fn sweep_examples() {
        let c = cfg();
        let f = log_grid(10.0, 1000.0, 5).unwrap();
        let pts = sweep_off_fraction(&f, &ClockGrid::BoundFractions(vec![1.0, 0.5, 2.0]), 0.5, &c).unwrap();
        let oracle = 93.0 / (64.0 * PI);
        for p in &pts {
            let b = max_clock_period(p.f_in, 0.5, &c).unwrap();
            if p.t_clk == b {
                assert_relative_eq!(p.off_fraction.unwrap(), oracle, max_relative = 1e-12);
            } else if p.t_clk < b {
                assert_relative_eq!(p.off_fraction.unwrap(), oracle / 2.0, max_relative = 1e-12);
            } else {
                assert!(!p.feasible);
                assert_eq!(p.off_fraction, None);
            }
        }
        assert_eq!(pts.len(), 15);
        assert!(matches!(sweep_off_fraction(&[], &ClockGrid::Periods(vec![1e-6]), 0.5, &c), Err(Error::EmptyGrid)));
    }

    #[test]
    fn mean_power_monotone_in_clock_period() {
        let c = cfg();
        let periods: Vec<f64> = (1..=20).map(|k| k as f64 * 0.25e-6).collect();
        let pts = sweep_off_fraction(&[1000.0], &ClockGrid::Periods(periods), 0.5, &c).unwrap();
        let feasible: Vec<f64> = pts.iter().filter_map(|p| p.mean_power).collect();
        assert!(feasible.len() > 10);
        assert!(feasible.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn reduction_is_linear_in_off_fraction() {
        let c = cfg();
        let slope = c.reduction_limit();
        for k in 0..=10 {
            let x = k as f64 / 10.0;
            let r = PowerReport::from_off_fraction(x, 0, 1.0, &c);
            assert_relative_eq!(r.reduction, slope * x, epsilon = 1e-12);
        }
    }

    #[test]
    fn log_grid_endpoints() {
        let g = log_grid(10.0, 1000.0, 3).unwrap();
        assert_eq!(g[0], 10.0);
        assert!((g[1] - 100.0).abs() < 1e-9);
        assert_eq!(g[2], 1000.0);
    }
}
