//! Static converter model: LSB size, floating window, ideal DAC and the
//! increment/decrement level register.

use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Converter parameters. Times in seconds, voltages in volts, powers in watts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AdcConfig {
    pub bits: u32,
    pub v_fs: f64,
    #[serde(rename = "t_comp_s")]
    pub t_comp: f64,
    #[serde(rename = "p_on_w")]
    pub p_on: f64,
    #[serde(rename = "p_off_w")]
    pub p_off: f64,
    /// FSM plus datapath propagation between comparator decision and REQ.
    #[serde(rename = "t_dig_s")]
    pub t_dig: f64,
}

impl Default for AdcConfig {
    fn default() -> Self {
        AdcConfig { bits: 5, v_fs: 1.0, t_comp: 659.5e-9, p_on: 12.2e-6, p_off: 6.7e-6, t_dig: 0.0 }
    }
}

pub const MAX_BITS: u32 = 24;

impl AdcConfig {
    pub fn validate(&self) -> Result<()> {
        if !(1..=MAX_BITS).contains(&self.bits) {
            return Err(invalid(format!("bits must lie in [1, {MAX_BITS}], got {}", self.bits)));
        }
        if !(self.v_fs > 0.0 && self.v_fs.is_finite()) {
            return Err(invalid(format!("v_fs must be positive, got {}", self.v_fs)));
        }
        if !(self.t_comp > 0.0 && self.t_comp.is_finite()) {
            return Err(invalid(format!("t_comp must be positive, got {}", self.t_comp)));
        }
        if !(self.t_dig >= 0.0 && self.t_dig.is_finite()) {
            return Err(invalid(format!("t_dig must be non-negative, got {}", self.t_dig)));
        }
        if !(self.p_on > 0.0 && self.p_on.is_finite()) {
            return Err(invalid(format!("p_on must be positive, got {}", self.p_on)));
        }
        if !(self.p_off >= 0.0 && self.p_off <= self.p_on) {
            return Err(invalid(format!("p_off must lie in [0, p_on], got {}", self.p_off)));
        }
        Ok(())
    }

    /// Reads a JSON config; missing keys keep their defaults.
    pub fn from_json_str(text: &str) -> Result<Self> {
        let cfg: AdcConfig = serde_json::from_str(text)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
        Self::from_json_str(&text)
    }

    /// Number of codes, `2^N`.
    pub fn levels(&self) -> u32 {
        1 << self.bits
    }

    pub fn top_code(&self) -> u32 {
        self.levels() - 1
    }

    /// One LSB, `v_fs / 2^N`.
    pub fn delta(&self) -> f64 {
        self.v_fs / self.levels() as f64
    }

    /// Reduction reached if the comparators were off all the time, `1 - p_off / p_on`.
    pub fn reduction_limit(&self) -> f64 {
        1.0 - self.p_off / self.p_on
    }
}

/// Value held by the conversion register.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Level(u32);

impl Level {
    pub fn new(code: u32, cfg: &AdcConfig) -> Result<Self> {
        if code > cfg.top_code() {
            return Err(Error::CodeOutOfRange { code: code as i64, max: cfg.top_code() });
        }
        Ok(Level(code))
    }

    pub fn code(self) -> u32 {
        self.0
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Inc,
    Dec,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Inc => "inc",
            Direction::Dec => "dec",
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// The pair of DAC references straddling the input.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub lower: f64,
    pub upper: f64,
}

impl Window {
    /// Direction in which `v` has left the window, if it has. Both edges are
    /// inclusive: the comparators fire only on strict excursions.
    pub fn exit_direction(&self, v: f64) -> Option<Direction> {
        if v > self.upper {
            Some(Direction::Inc)
        } else if v < self.lower {
            Some(Direction::Dec)
        } else {
            None
        }
    }

    pub fn contains(&self, v: f64) -> bool {
        self.exit_direction(v).is_none()
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// Ideal DAC output for `code`; `code` may equal `2^N` (the upper reference of
/// the top window).
pub fn dac_voltage(code: i64, cfg: &AdcConfig) -> Result<f64> {
    if code < 0 || code > cfg.levels() as i64 {
        return Err(Error::CodeOutOfRange { code, max: cfg.levels() });
    }
    Ok(code as f64 * cfg.delta())
}

pub fn window(level: Level, cfg: &AdcConfig) -> Window {
    let code = level.code() as f64;
    let delta = cfg.delta();
    Window { lower: code * delta, upper: (code + 1.0) * delta }
}

/// Largest code whose lower reference is at or below `v`, clamped to the top code.
pub fn quantize(v: f64, cfg: &AdcConfig) -> Result<Level> {
    if !(0.0..=cfg.v_fs).contains(&v) {
        return Err(Error::VoltageOutOfRange { value: v, v_fs: cfg.v_fs });
    }
    let code = (v / cfg.delta()).floor() as u32;
    Ok(Level(code.min(cfg.top_code())))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LevelUpdate {
    pub level: Level,
    pub saturated: bool,
}

/// One register update through the ±1 datapath, saturating at the rails.
pub fn update_level(level: Level, direction: Direction, cfg: &AdcConfig) -> LevelUpdate {
    let code = level.code();
    match direction {
        Direction::Inc if code >= cfg.top_code() => LevelUpdate { level, saturated: true },
        Direction::Dec if code == 0 => LevelUpdate { level, saturated: true },
        Direction::Inc => LevelUpdate { level: Level(code + 1), saturated: false },
        Direction::Dec => LevelUpdate { level: Level(code - 1), saturated: false },
    }
}
