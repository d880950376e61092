//! Event-driven simulation of the gated-comparator tracking loop.
//!
//! One crossing is handled at a time:
//!
//! 1. With the comparators on, scan forward for the input leaving the window
//!    and bisect the exit instant.
//! 2. The comparator decides `t_comp` later; after `t_dig` the controller
//!    drops ON and raises REQ. The OFF interval starts here.
//! 3. The ACK generator answers on the next two rising clock edges. The
//!    register loads on ACK+ (window moves one LSB), ON returns on ACK-.
//! 4. The input is not observed while off. If it already sits outside the
//!    new window at re-enable, a catch-up decision starts immediately; being
//!    more than one LSB beyond is recorded as an overload.

use crate::ackgen::{ack_times, ClockConfig};
use crate::adc::{quantize, update_level, window, AdcConfig, Direction, Level, Window};
use crate::afsm::Afsm;
use crate::error::{invalid, Error, Result};
use crate::signal::SignalSource;

/// Bisection stops once the bracket is this narrow (seconds).
pub const DEFAULT_TIME_TOL: f64 = 1e-12;
pub const MAX_BISECTIONS: u32 = 200;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    /// First located instant at which the input is strictly outside the window.
    pub t: f64,
    pub direction: Direction,
}

/// Finds the earliest time in `(t_from, t_to]` at which `src` strictly leaves
/// `window`, scanning at `step` and bisecting to `tol`.
pub fn find_next_crossing(
    src: &SignalSource,
    window: Window,
    t_from: f64,
    t_to: f64,
    step: f64,
    tol: f64,
) -> Result<Option<Crossing>> {
    if !(t_from < t_to) {
        return Err(invalid(format!("empty search interval [{t_from}, {t_to}]")));
    }
    if !(step > 0.0) || !(tol > 0.0) {
        return Err(invalid("scan step and tolerance must be positive"));
    }
    if !window.contains(src.eval(t_from)) {
        return Err(invalid(format!("input at t = {t_from} s is already outside the window")));
    }

    let mut prev = t_from;
    let mut k: u64 = 1;
    loop {
        let t = (t_from + k as f64 * step).min(t_to);
        if window.exit_direction(src.eval(t)).is_some() {
            return bisect(src, window, prev, t, tol).map(Some);
        }
        if t >= t_to {
            return Ok(None);
        }
        prev = t;
        k += 1;
    }
}

/// `lo` inside, `hi` outside.
fn bisect(src: &SignalSource, window: Window, mut lo: f64, mut hi: f64, tol: f64) -> Result<Crossing> {
    let mut iterations = 0;
    while hi - lo > tol {
        if iterations >= MAX_BISECTIONS {
            return Err(Error::ToleranceUnreachable { t: hi, tol, iterations });
        }
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            return Err(Error::ToleranceUnreachable { t: hi, tol, iterations });
        }
        if window.contains(src.eval(mid)) {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let direction = window.exit_direction(src.eval(hi)).expect("bracket upper end lies outside the window");
    Ok(Crossing { t: hi, direction })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CrossingEvent {
    /// Boundary crossing instant. For catch-up events, the crossing that
    /// happened while the comparators were off (or the re-enable time if it
    /// could not be located).
    pub t_cross: f64,
    pub t_req: f64,
    pub t_ack_rise: f64,
    pub t_ack_fall: f64,
    pub direction: Direction,
    pub level_before: Level,
    pub level_after: Level,
    pub catch_up: bool,
    pub saturated: bool,
}

impl CrossingEvent {
    /// Comparator-off time attributed to this event.
    pub fn off_time(&self) -> f64 {
        self.t_ack_fall - self.t_req
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PowerState {
    On,
    Off,
}

impl PowerState {
    pub fn as_str(self) -> &'static str {
        match self {
            PowerState::On => "ON",
            PowerState::Off => "OFF",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerSegment {
    pub start: f64,
    pub end: f64,
    pub state: PowerState,
}

impl PowerSegment {
    pub fn len(&self) -> f64 {
        self.end - self.start
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OverloadRecord {
    pub time: f64,
    pub levels_behind: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimTrace {
    pub events: Vec<CrossingEvent>,
    pub power_segments: Vec<PowerSegment>,
    pub overloads: Vec<OverloadRecord>,
    pub duration: f64,
    pub initial_level: Level,
}

impl SimTrace {
    /// Total comparator-off time, summed over the power segments.
    pub fn off_time(&self) -> f64 {
        self.power_segments.iter().filter(|s| s.state == PowerState::Off).map(PowerSegment::len).sum()
    }

    pub fn catch_up_count(&self) -> usize {
        self.events.iter().filter(|e| e.catch_up).count()
    }

    pub fn saturated_count(&self) -> usize {
        self.events.iter().filter(|e| e.saturated).count()
    }

    /// Off time inside `[t0, t1]`.
    pub fn off_time_between(&self, t0: f64, t1: f64) -> f64 {
        let start = self.power_segments.partition_point(|s| s.end <= t0);
        self.power_segments[start..]
            .iter()
            .take_while(|s| s.start < t1)
            .filter(|s| s.state == PowerState::Off)
            .map(|s| (s.end.min(t1) - s.start.max(t0)).max(0.0))
            .sum()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SimOptions {
    pub time_tol: f64,
}

impl Default for SimOptions {
    fn default() -> Self {
        SimOptions { time_tol: DEFAULT_TIME_TOL }
    }
}

/// Scan step for crossing detection: a quarter of the shorter of one LSB
/// traversal at the source's peak slope and one clock period.
pub fn scan_step(src: &SignalSource, cfg: &AdcConfig, clk: &ClockConfig) -> f64 {
    let slope = src.max_slope();
    let lsb_time = if slope > 0.0 { cfg.delta() / slope } else { f64::INFINITY };
    lsb_time.min(clk.period) / 4.0
}

pub fn simulate(src: &SignalSource, cfg: &AdcConfig, clk: &ClockConfig, duration: f64) -> Result<SimTrace> {
    simulate_with(src, cfg, clk, duration, &SimOptions::default())
}

pub fn simulate_with(
    src: &SignalSource,
    cfg: &AdcConfig,
    clk: &ClockConfig,
    duration: f64,
    opts: &SimOptions,
) -> Result<SimTrace> {
    cfg.validate()?;
    if !(duration > 0.0 && duration.is_finite()) {
        return Err(invalid(format!("duration must be positive, got {duration}")));
    }
    let initial_level = quantize(src.eval(0.0), cfg)?;
    let step = scan_step(src, cfg, clk);
    let delta = cfg.delta();

    let mut events = Vec::new();
    let mut overloads = Vec::new();
    let mut segments = Vec::new();
    let mut fsm = Afsm::default();

    let mut level = initial_level;
    let mut t_on = 0.0;
    let mut anchor: Option<f64> = None;

    while t_on < duration {
        let win = window(level, cfg);
        let v_on = src.eval(t_on);

        let (t_cross, direction, catch_up, t_decision) = match win.exit_direction(v_on) {
            Some(direction) => {
                let behind = levels_behind(v_on, win, delta);
                let pinned = match direction {
                    Direction::Inc => level.code() == cfg.top_code(),
                    Direction::Dec => level.code() == 0,
                };
                if behind >= 2 && !pinned {
                    overloads.push(OverloadRecord { time: t_on, levels_behind: behind });
                }
                let t_cross = locate_missed_crossing(src, win, anchor, t_on, direction, step, opts.time_tol);
                (t_cross, direction, true, t_on + cfg.t_comp)
            }
            None => match find_next_crossing(src, win, t_on, duration, step, opts.time_tol)? {
                Some(c) => (c.t, c.direction, false, c.t + cfg.t_comp),
                None => break,
            },
        };

        let t_req = t_decision + cfg.t_dig;
        if t_req >= duration {
            break;
        }

        let load_direction = handshake(&mut fsm, direction, t_req)?;
        let ack = ack_times(t_req, clk);
        let update = update_level(level, load_direction, cfg);

        segments.push(PowerSegment { start: t_on, end: t_req, state: PowerState::On });
        segments.push(PowerSegment { start: t_req, end: ack.fall.min(duration), state: PowerState::Off });

        events.push(CrossingEvent {
            t_cross,
            t_req,
            t_ack_rise: ack.rise,
            t_ack_fall: ack.fall,
            direction,
            level_before: level,
            level_after: update.level,
            catch_up,
            saturated: update.saturated,
        });

        level = update.level;
        anchor = Some(t_cross);
        t_on = ack.fall;
    }

    if t_on < duration {
        segments.push(PowerSegment { start: t_on, end: duration, state: PowerState::On });
    }

    Ok(SimTrace { events, power_segments: segments, overloads, duration, initial_level })
}

/// Runs one crossing through the controller and returns the direction the
/// register will load, taken from SEL just before ACK rises.
fn handshake(fsm: &mut Afsm, direction: Direction, t: f64) -> Result<Direction> {
    let fail = |message: String| Error::Handshake { t, message };

    let s = fsm.drive(direction == Direction::Inc, direction == Direction::Dec, false);
    if s.on || !s.req {
        return Err(fail(format!("comparator decision did not start an update: {s}")));
    }
    // ON falling discharges the comparator outputs
    let s = fsm.drive(false, false, false);
    if s.on || !s.req {
        return Err(fail(format!("update dropped when comparator outputs reset: {s}")));
    }
    let sel = s.sel;
    let s = fsm.drive(false, false, true);
    if !s.l || s.req {
        return Err(fail(format!("ACK+ did not load the register: {s}")));
    }
    let s = fsm.drive(false, false, false);
    if !s.on || s.l {
        return Err(fail(format!("ACK- did not return to tracking: {s}")));
    }
    Ok(if sel { Direction::Dec } else { Direction::Inc })
}

fn levels_behind(v: f64, win: Window, delta: f64) -> u32 {
    let excess = if v > win.upper { v - win.upper } else { win.lower - v };
    (excess / delta).ceil().max(1.0) as u32
}

/// Best estimate of when the input left `win` while the comparators were off.
fn locate_missed_crossing(
    src: &SignalSource,
    win: Window,
    anchor: Option<f64>,
    t_on: f64,
    direction: Direction,
    step: f64,
    tol: f64,
) -> f64 {
    let Some(from) = anchor else { return t_on };
    if !(from < t_on) || !win.contains(src.eval(from)) {
        return t_on;
    }
    match find_next_crossing(src, win, from, t_on, step, tol) {
        Ok(Some(c)) if c.direction == direction => c.t,
        _ => t_on,
    }
}
