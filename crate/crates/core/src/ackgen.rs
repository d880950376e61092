//! Clock-gated acknowledge generator, modelled at its terminals.
//!
//! ACK rises on the first rising clock edge strictly after REQ rises and falls
//! on the next rising edge. A request landing exactly on an edge waits for the
//! following one.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClockConfig {
    /// Clock period in seconds.
    pub period: f64,
    /// Time of the rising edge at index 0, in `[0, period)`.
    pub phase: f64,
}

impl ClockConfig {
    pub fn new(period: f64, phase: f64) -> Result<Self> {
        if !(period > 0.0 && period.is_finite()) {
            return Err(invalid(format!("clock period must be positive, got {period}")));
        }
        if !(0.0..period).contains(&phase) {
            return Err(invalid(format!("clock phase must lie in [0, {period}), got {phase}")));
        }
        Ok(ClockConfig { period, phase })
    }

    /// Clock with a phase drawn uniformly from `[0, period)`.
    pub fn with_random_phase(period: f64, seed: u64) -> Result<Self> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let phase = rng.random::<f64>() * period;
        // guard the open upper end against rounding
        Self::new(period, if phase < period { phase } else { 0.0 })
    }

    /// Time of rising edge `k`.
    pub fn edge(&self, k: i64) -> f64 {
        self.phase + k as f64 * self.period
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AckTiming {
    pub rise: f64,
    pub fall: f64,
}

pub fn ack_times(t_req: f64, clk: &ClockConfig) -> AckTiming {
    let mut k = ((t_req - clk.phase) / clk.period).floor() as i64 + 1;
    while clk.edge(k) <= t_req {
        k += 1;
    }
    while clk.edge(k - 1) > t_req {
        k -= 1;
    }
    let rise = clk.edge(k);
    AckTiming { rise, fall: rise + clk.period }
}

/// Mean REQ-to-ACK-fall latency for uniformly distributed requests, `1.5 * period`.
pub fn expected_off_time(clk: &ClockConfig) -> f64 {
    1.5 * clk.period
}
