//! Staircase reconstruction from the event stream and tracking error.
//!
//! The reconstructed value is the midpoint of the current window,
//! `(level + 1/2) * delta`, and it changes when the register loads (ACK+).

use crate::adc::{AdcConfig, Level};
use crate::engine::SimTrace;
use crate::error::{invalid, Error, Result};
use crate::signal::SignalSource;

#[derive(Debug, Clone, PartialEq)]
pub struct Reconstruction {
    /// `(start_time, value)` per segment; the first starts at 0.
    pub segments: Vec<(f64, f64)>,
    pub duration: f64,
}

impl Reconstruction {
    pub fn eval(&self, t: f64) -> f64 {
        let i = self.segments.partition_point(|&(start, _)| start <= t);
        self.segments[i.saturating_sub(1)].1
    }

    pub fn values(&self) -> impl Iterator<Item = f64> + '_ {
        self.segments.iter().map(|s| s.1)
    }
}

fn midpoint(level: Level, cfg: &AdcConfig) -> f64 {
    (level.code() as f64 + 0.5) * cfg.delta()
}

pub fn reconstruct(trace: &SimTrace, cfg: &AdcConfig) -> Reconstruction {
    let mut segments = Vec::with_capacity(trace.events.len() + 1);
    segments.push((0.0, midpoint(trace.initial_level, cfg)));
    for e in &trace.events {
        segments.push((e.t_ack_rise, midpoint(e.level_after, cfg)));
    }
    Reconstruction { segments, duration: trace.duration }
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize)]
pub struct TrackingError {
    #[serde(rename = "rmse_v")]
    pub rmse: f64,
    #[serde(rename = "max_abs_v")]
    pub max_abs: f64,
}

pub fn tracking_error(src: &SignalSource, rec: &Reconstruction, grid: &[f64]) -> Result<TrackingError> {
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let (mut sq, mut max_abs) = (0.0, 0.0f64);
    for &t in grid {
        let e = src.eval(t) - rec.eval(t);
        sq += e * e;
        max_abs = max_abs.max(e.abs());
    }
    Ok(TrackingError { rmse: (sq / grid.len() as f64).sqrt(), max_abs })
}

/// `points` evenly spaced samples covering `[t0, t1]` inclusive.
pub fn uniform_grid(t0: f64, t1: f64, points: usize) -> Result<Vec<f64>> {
    if points < 2 || !(t1 > t0) {
        return Err(invalid(format!("bad grid [{t0}, {t1}] x {points}")));
    }
    let dt = (t1 - t0) / (points - 1) as f64;
    Ok((0..points).map(|k| if k + 1 == points { t1 } else { t0 + k as f64 * dt }).collect())
}

/// Grid with at least `per_interval` points per inter-event interval on average.
pub fn dense_grid(trace: &SimTrace, per_interval: usize) -> Result<Vec<f64>> {
    uniform_grid(0.0, trace.duration, per_interval.max(2) * (trace.events.len() + 1))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ackgen::ClockConfig;
    use crate::engine::simulate;
    use crate::signal::make_sine;
    use approx::assert_abs_diff_eq;

    #[test]
    fn idle_reconstruction() {
        let cfg = AdcConfig::default();
        let src = make_sine(0.0, 1.0, 16.5 / 32.0).unwrap();
        let clk = ClockConfig::new(1e-6, 0.0).unwrap();
        let tr = simulate(&src, &cfg, &clk, 0.1).unwrap();
        let rec = reconstruct(&tr, &cfg);
        assert_eq!(rec.segments, vec![(0.0, 0.515625)]);
        let grid = uniform_grid(0.0, 0.1, 100).unwrap();
        assert_eq!(tracking_error(&src, &rec, &grid).unwrap().max_abs, 0.0);
    }

    #[test]
    fn single_step() {
        let cfg = AdcConfig::default();
        let src = make_sine(0.5, 1000.0, 0.5).unwrap();
        let clk = ClockConfig::new(1e-6, 0.0).unwrap();
        let tr = simulate(&src, &cfg, &clk, 12e-6).unwrap();
        assert_eq!(tr.events.len(), 1);
        let rec = reconstruct(&tr, &cfg);
        assert_eq!(rec.segments.len(), 2);
        assert_abs_diff_eq!(rec.segments[0].1, 0.515625);
        assert_abs_diff_eq!(rec.segments[1].1, 0.546875);
        assert_eq!(rec.segments[1].0, tr.events[0].t_ack_rise);
        assert_eq!(rec.eval(tr.events[0].t_ack_rise - 1e-9), 0.515625);
        assert_eq!(rec.eval(tr.events[0].t_ack_rise), 0.546875);
    }

    #[test]
    fn empty_grid_rejected() {
        let rec = Reconstruction { segments: vec![(0.0, 0.5)], duration: 1.0 };
        let src = make_sine(0.0, 1.0, 0.5).unwrap();
        assert!(matches!(tracking_error(&src, &rec, &[]), Err(Error::EmptyGrid)));
    }
}
