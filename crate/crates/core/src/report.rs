//! Row and summary types for the CSV and JSON files the tools emit.

use std::io::{Read, Write};

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::ackgen::ClockConfig;
use crate::adc::Direction;
use crate::ecg::EcgReport;
use crate::engine::SimTrace;
use crate::error::Result;
use crate::metrics::Reconstruction;
use crate::power::{PowerReport, SweepPoint};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub t_cross_s: f64,
    pub t_req_s: f64,
    pub t_ack_rise_s: f64,
    pub t_ack_fall_s: f64,
    pub direction: Direction,
    pub level_after: u32,
    pub catch_up: bool,
    pub saturated: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerSegmentRow {
    pub t_start_s: f64,
    pub t_end_s: f64,
    pub state: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub f_in_hz: f64,
    pub t_clk_s: f64,
    pub off_fraction: Option<f64>,
    pub mean_power_w: Option<f64>,
    pub feasible: bool,
}

impl From<&SweepPoint> for SweepRow {
    fn from(p: &SweepPoint) -> Self {
        SweepRow {
            f_in_hz: p.f_in,
            t_clk_s: p.t_clk,
            off_fraction: p.off_fraction,
            mean_power_w: p.mean_power,
            feasible: p.feasible,
        }
    }
}

/// Sweep row with simulated columns appended.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalSweepRow {
    pub f_in_hz: f64,
    pub t_clk_s: f64,
    pub off_fraction: Option<f64>,
    pub mean_power_w: Option<f64>,
    pub feasible: bool,
    pub measured_off_fraction: Option<f64>,
    pub measured_mean_power_w: Option<f64>,
    pub measured_events: Option<usize>,
    pub overloads: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReconstructionRow {
    pub t_s: f64,
    pub v_hat_v: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WindowRow {
    pub t_center_s: f64,
    pub reduction: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimSummary {
    pub event_count: usize,
    pub off_fraction: f64,
    pub mean_power_w: f64,
    pub reduction: f64,
    pub overload_count: usize,
    pub catch_up_count: usize,
    pub saturated_count: usize,
    pub duration_s: f64,
    pub t_clk_s: f64,
    pub clock_phase_s: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EcgSummary {
    pub avg_reduction: f64,
    pub peak_reduction: f64,
    pub peak_time_s: f64,
    pub t_clk_s: f64,
    pub n_crossings: usize,
    pub overloads: usize,
    pub mean_power_w: f64,
    pub off_fraction: f64,
    pub duration_s: f64,
}

impl From<&EcgReport> for EcgSummary {
    fn from(r: &EcgReport) -> Self {
        EcgSummary {
            avg_reduction: r.avg_reduction(),
            peak_reduction: r.peak_reduction,
            peak_time_s: r.peak_time,
            t_clk_s: r.t_clk,
            n_crossings: r.power.n_crossings,
            overloads: r.overloads,
            mean_power_w: r.power.mean_power,
            off_fraction: r.power.off_fraction,
            duration_s: r.power.duration,
        }
    }
}

pub fn trace_rows(trace: &SimTrace) -> Vec<TraceRow> {
    trace
        .events
        .iter()
        .map(|e| TraceRow {
            t_cross_s: e.t_cross,
            t_req_s: e.t_req,
            t_ack_rise_s: e.t_ack_rise,
            t_ack_fall_s: e.t_ack_fall,
            direction: e.direction,
            level_after: e.level_after.code(),
            catch_up: e.catch_up,
            saturated: e.saturated,
        })
        .collect()
}

pub fn power_rows(trace: &SimTrace) -> Vec<PowerSegmentRow> {
    trace
        .power_segments
        .iter()
        .map(|s| PowerSegmentRow { t_start_s: s.start, t_end_s: s.end, state: s.state.as_str().to_owned() })
        .collect()
}

pub fn reconstruction_rows(rec: &Reconstruction) -> Vec<ReconstructionRow> {
    rec.segments.iter().map(|&(t_s, v_hat_v)| ReconstructionRow { t_s, v_hat_v }).collect()
}

pub fn sim_summary(trace: &SimTrace, power: &PowerReport, clk: &ClockConfig) -> SimSummary {
    SimSummary {
        event_count: trace.events.len(),
        off_fraction: power.off_fraction,
        mean_power_w: power.mean_power,
        reduction: power.reduction,
        overload_count: trace.overloads.len(),
        catch_up_count: trace.catch_up_count(),
        saturated_count: trace.saturated_count(),
        duration_s: trace.duration,
        t_clk_s: clk.period,
        clock_phase_s: clk.phase,
    }
}

pub fn write_csv<W: Write, T: Serialize>(writer: W, rows: &[T]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// Like [`write_csv`], but writes the header even when `rows` is empty.
pub fn write_csv_with_header<W: Write, T: Serialize>(writer: W, header: &[&str], rows: &[T]) -> Result<()> {
    if rows.is_empty() {
        let mut w = csv::Writer::from_writer(writer);
        w.write_record(header)?;
        w.flush().map_err(csv::Error::from)?;
        return Ok(());
    }
    write_csv(writer, rows)
}

pub fn read_csv<R: Read, T: DeserializeOwned>(reader: R) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_reader(reader);
    let rows = r.deserialize().collect::<std::result::Result<Vec<T>, _>>()?;
    Ok(rows)
}

pub const TRACE_HEADER: [&str; 8] =
    ["t_cross_s", "t_req_s", "t_ack_rise_s", "t_ack_fall_s", "direction", "level_after", "catch_up", "saturated"];
