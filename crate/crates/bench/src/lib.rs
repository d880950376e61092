//! Shared fixtures for the benchmarks.

use lcadc_core::{make_sine, max_clock_period, AdcConfig, ClockConfig, SignalSource};

pub struct Fixture {
    pub src: SignalSource,
    pub cfg: AdcConfig,
    pub clk: ClockConfig,
    pub duration: f64,
}

/// Full-scale sine at `f` hertz, clocked at `fraction` of its bound, run for `periods`.
pub fn sine_fixture(f: f64, fraction: f64, periods: f64) -> Fixture {
    let cfg = AdcConfig::default();
    let src = make_sine(cfg.v_fs / 2.0, f, cfg.v_fs / 2.0).expect("valid sine");
    let period = fraction * max_clock_period(f, cfg.v_fs / 2.0, &cfg).expect("valid bound");
    let clk = ClockConfig::with_random_phase(period, 1).expect("valid clock");
    Fixture { src, cfg, clk, duration: periods / f }
}
