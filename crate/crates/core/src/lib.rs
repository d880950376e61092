//! Behavioral model of an asynchronous floating-window level-crossing ADC
//! whose tracking comparators are switched off while each conversion update
//! is in flight.
//!
//! The crate is organised bottom-up:
//!
//! - [`signal`]: continuous-time input sources (sine, triangle, sampled records).
//! - [`adc`]: static converter geometry (LSB, window, DAC map, level register).
//! - [`afsm`]: the burst-mode control machine and its state-graph checker.
//! - [`ackgen`]: the clock-gated acknowledge generator.
//! - [`engine`]: the event-driven simulation loop producing a [`SimTrace`].
//! - [`power`]: trace power accounting and the closed-form estimators.
//! - [`metrics`]: staircase reconstruction and tracking error.
//! - [`ecg`]: the windowed ECG power experiment.
//! - [`report`]: CSV/JSON row types shared by the CLI and tests.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod ackgen;
pub mod adc;
pub mod afsm;
pub mod ecg;
pub mod engine;
mod error;
pub mod metrics;
pub mod power;
pub mod report;
pub mod signal;

pub use ackgen::{ack_times, expected_off_time, AckTiming, ClockConfig};
pub use adc::{dac_voltage, quantize, update_level, window, AdcConfig, Direction, Level, LevelUpdate, Window};
pub use afsm::{afsm_eval, check_equivalence, graph_step, AfsmSignals, AfsmState, Equations, EquivalenceReport};
pub use ecg::{run_ecg, EcgReport, EcgRun, EcgSettings, WindowReduction};
pub use engine::{
    find_next_crossing, simulate, Crossing, CrossingEvent, OverloadRecord, PowerSegment, PowerState, SimTrace,
};
pub use error::{Error, Result};
pub use metrics::{reconstruct, tracking_error, Reconstruction, TrackingError};
pub use power::{
    analytic_mean_power, max_clock_period, max_tracking_frequency, measured_power, sweep_off_fraction, ClockGrid,
    PowerReport, SweepPoint,
};
pub use signal::{load_record, make_sine, make_triangle, scale_to_full_scale, SignalKind, SignalSource};
