use anyhow::{bail, Context, Result};
use rayon::prelude::*;
use serde::Serialize;

use lcadc_core::afsm::{check_equivalence_with, Equations};
use lcadc_core::metrics::dense_grid;
use lcadc_core::power::log_grid;
use lcadc_core::report::{
    power_rows, reconstruction_rows, sim_summary, trace_rows, EcgSummary, EmpiricalSweepRow, SweepRow, WindowRow,
    TRACE_HEADER,
};
use lcadc_core::{
    load_record, make_sine, make_triangle, max_clock_period, max_tracking_frequency, measured_power, reconstruct,
    run_ecg, scale_to_full_scale, simulate, sweep_off_fraction, tracking_error, AdcConfig, ClockConfig, ClockGrid,
    EcgSettings, SignalSource, SweepPoint,
};

use crate::args::{BoundsArgs, CheckAfsmArgs, EcgArgs, GlobalArgs, SignalArg, SimulateArgs, SweepArgs};
use crate::output::{print_json, print_text, OutDir};
use crate::usage;

const POWER_HEADER: [&str; 3] = ["t_start_s", "t_end_s", "state"];
const RECON_HEADER: [&str; 2] = ["t_s", "v_hat_v"];
const SWEEP_HEADER: [&str; 5] = ["f_in_hz", "t_clk_s", "off_fraction", "mean_power_w", "feasible"];
const EMPIRICAL_HEADER: [&str; 9] = [
    "f_in_hz",
    "t_clk_s",
    "off_fraction",
    "mean_power_w",
    "feasible",
    "measured_off_fraction",
    "measured_mean_power_w",
    "measured_events",
    "overloads",
];
const WINDOW_HEADER: [&str; 2] = ["t_center_s", "reduction"];

/// Config file (if any) with command-line overrides applied on top.
fn load_config(g: &GlobalArgs) -> Result<AdcConfig> {
    let mut cfg = match &g.config {
        Some(path) => AdcConfig::from_json_file(path).with_context(|| format!("loading config {}", path.display()))?,
        None => AdcConfig::default(),
    };
    if let Some(v) = g.bits {
        cfg.bits = v;
    }
    if let Some(v) = g.v_fs {
        cfg.v_fs = v;
    }
    if let Some(v) = g.t_comp_s {
        cfg.t_comp = v;
    }
    if let Some(v) = g.t_dig_s {
        cfg.t_dig = v;
    }
    if let Some(v) = g.p_on_w {
        cfg.p_on = v;
    }
    if let Some(v) = g.p_off_w {
        cfg.p_off = v;
    }
    cfg.validate().map_err(|e| usage(e.to_string()))?;
    Ok(cfg)
}

fn seed(g: &GlobalArgs) -> u64 {
    g.seed.unwrap_or(0)
}

fn build_source(a: &SimulateArgs, cfg: &AdcConfig) -> Result<(SignalSource, f64)> {
    let src = match a.signal {
        SignalArg::Sine => make_sine(a.amp, a.freq, a.offset)?,
        SignalArg::Triangle => make_triangle(a.amp, a.freq, a.offset)?,
        SignalArg::Record => {
            let path = a.record.as_ref().ok_or_else(|| usage("--signal record requires --record FILE"))?;
            let raw = load_record(path, a.fs)?;
            match a.scale_margin {
                Some(m) => scale_to_full_scale(&raw, cfg.v_fs, m)?,
                None => raw,
            }
        }
    };
    let duration = match (a.duration, src.end_time()) {
        (Some(d), _) => d,
        (None, Some(end)) => end,
        (None, None) => return Err(usage("--duration is required for sine and triangle inputs")),
    };
    Ok((src, duration))
}

#[derive(Serialize)]
struct Metrics {
    rmse_v: f64,
    max_abs_v: f64,
    grid_points: usize,
    /// Δ/2 + max_slope · (t_comp + t_dig + 2 t_clk)
    latency_bound_v: f64,
}

pub fn cmd_simulate(g: &GlobalArgs, a: &SimulateArgs) -> Result<()> {
    let cfg = load_config(g)?;
    let (src, duration) = build_source(a, &cfg)?;
    let clk = if a.random_phase {
        ClockConfig::with_random_phase(a.clock_period, seed(g))
    } else {
        ClockConfig::new(a.clock_period, a.clock_phase_s.unwrap_or(0.0))
    }
    .map_err(|e| usage(e.to_string()))?;

    let trace = simulate(&src, &cfg, &clk, duration)?;
    let power = measured_power(&trace, &cfg)?;
    let summary = sim_summary(&trace, &power, &clk);
    let rec = reconstruct(&trace, &cfg);
    let grid = dense_grid(&trace, a.metric_points)?;
    let err = tracking_error(&src, &rec, &grid)?;
    let metrics = Metrics {
        rmse_v: err.rmse,
        max_abs_v: err.max_abs,
        grid_points: grid.len(),
        latency_bound_v: cfg.delta() / 2.0 + src.max_slope() * (cfg.t_comp + cfg.t_dig + 2.0 * clk.period),
    };

    let out = OutDir::create(&g.out_dir)?;
    out.csv("trace.csv", &TRACE_HEADER, &trace_rows(&trace))?;
    out.csv("power.csv", &POWER_HEADER, &power_rows(&trace))?;
    out.csv("reconstruction.csv", &RECON_HEADER, &reconstruction_rows(&rec))?;
    out.json("summary.json", &summary)?;
    out.json("metrics.json", &metrics)?;
    print_json(&summary)?;

    if let Some(budget) = a.overload_budget {
        if trace.overloads.len() > budget {
            bail!("{} overload errors exceed the budget of {budget}", trace.overloads.len());
        }
    }
    Ok(())
}

fn empirical_row(p: &SweepPoint, amp: f64, periods: u32, seed: u64, cfg: &AdcConfig) -> Result<EmpiricalSweepRow> {
    let base = SweepRow::from(p);
    let mut row = EmpiricalSweepRow {
        f_in_hz: base.f_in_hz,
        t_clk_s: base.t_clk_s,
        off_fraction: base.off_fraction,
        mean_power_w: base.mean_power_w,
        feasible: base.feasible,
        measured_off_fraction: None,
        measured_mean_power_w: None,
        measured_events: None,
        overloads: None,
    };
    if !p.feasible {
        return Ok(row);
    }
    let src = make_sine(amp, p.f_in, cfg.v_fs / 2.0)?;
    let clk = ClockConfig::with_random_phase(p.t_clk, seed)?;
    let trace = simulate(&src, cfg, &clk, periods as f64 / p.f_in)?;
    let power = measured_power(&trace, cfg)?;
    row.measured_off_fraction = Some(power.off_fraction);
    row.measured_mean_power_w = Some(power.mean_power);
    row.measured_events = Some(trace.events.len());
    row.overloads = Some(trace.overloads.len());
    Ok(row)
}

#[derive(Serialize)]
struct SweepSummary {
    points: usize,
    feasible_points: usize,
    file: String,
}

pub fn cmd_sweep(g: &GlobalArgs, a: &SweepArgs) -> Result<()> {
    let cfg = load_config(g)?;
    let freqs = log_grid(a.f_min, a.f_max, a.f_points).map_err(|e| usage(e.to_string()))?;
    let clk_grid = match &a.clk_periods {
        Some(p) => ClockGrid::Periods(p.clone()),
        None => ClockGrid::BoundFractions(a.clk_fractions.clone()),
    };
    let amp = a.amp.unwrap_or(cfg.v_fs / 2.0);
    let points = sweep_off_fraction(&freqs, &clk_grid, amp, &cfg)?;

    let out = OutDir::create(&g.out_dir)?;
    if a.empirical {
        if a.periods == 0 {
            return Err(usage("--periods must be at least 1"));
        }
        let base = seed(g);
        let rows = points
            .par_iter()
            .enumerate()
            .map(|(i, p)| empirical_row(p, amp, a.periods, base.wrapping_add(i as u64), &cfg))
            .collect::<Result<Vec<_>>>()?;
        out.csv("sweep.csv", &EMPIRICAL_HEADER, &rows)?;
    } else {
        let rows: Vec<SweepRow> = points.iter().map(SweepRow::from).collect();
        out.csv("sweep.csv", &SWEEP_HEADER, &rows)?;
    }
    print_json(&SweepSummary {
        points: points.len(),
        feasible_points: points.iter().filter(|p| p.feasible).count(),
        file: g.out_dir.join("sweep.csv").display().to_string(),
    })
}

pub fn cmd_ecg(g: &GlobalArgs, a: &EcgArgs) -> Result<()> {
    let cfg = load_config(g)?;
    let raw = load_record(&a.record, a.fs)?;
    let record = if a.no_scale { raw } else { scale_to_full_scale(&raw, cfg.v_fs, a.margin)? };
    let settings = EcgSettings { bandwidth: a.bandwidth, window: a.window, phase_seed: g.seed };
    let run = run_ecg(&record, &cfg, &settings)?;
    let summary = EcgSummary::from(&run.report);
    let windows: Vec<WindowRow> =
        run.report.windows.iter().map(|w| WindowRow { t_center_s: w.center, reduction: w.reduction }).collect();

    let out = OutDir::create(&g.out_dir)?;
    out.json("ecg_report.json", &summary)?;
    out.csv("windows.csv", &WINDOW_HEADER, &windows)?;
    out.csv("trace.csv", &TRACE_HEADER, &trace_rows(&run.trace))?;
    print_json(&summary)
}

#[derive(Serialize)]
struct Bounds {
    f_max_hz: f64,
    t_clk_max_s: f64,
    fin_hz: f64,
    amplitude_v: f64,
    delta_v: f64,
    t_comp_s: f64,
    reduction_limit: f64,
    quoted_bandwidth_hz: f64,
    note: &'static str,
}

pub fn cmd_bounds(g: &GlobalArgs, a: &BoundsArgs) -> Result<()> {
    let cfg = load_config(g)?;
    let amp = a.amp.unwrap_or(cfg.v_fs / 2.0);
    let f_max = max_tracking_frequency(&cfg, amp).map_err(|e| usage(e.to_string()))?;
    let t_clk_max = max_clock_period(a.fin, amp, &cfg).map_err(|e| usage(e.to_string()))?;
    print_json(&Bounds {
        f_max_hz: f_max,
        t_clk_max_s: t_clk_max,
        fin_hz: a.fin,
        amplitude_v: amp,
        delta_v: cfg.delta(),
        t_comp_s: cfg.t_comp,
        reduction_limit: cfg.reduction_limit(),
        quoted_bandwidth_hz: 11e3,
        note: "f_max = delta / (2 pi A t_comp); with t_comp = 659.5 ns this gives about 15.08 kHz, \
               not the 11 kHz usually quoted for this design",
    })
}

pub fn cmd_check_afsm(a: &CheckAfsmArgs) -> Result<()> {
    let eqs = Equations::standard();
    print_text(&format!("{eqs}\n"))?;
    let report = check_equivalence_with(&eqs, a.depth);
    print_text(&report.to_string())?;
    if !report.passed() {
        bail!("equations disagree with the state graph");
    }
    if a.mutants {
        let muts = eqs.single_literal_mutations();
        let missed: Vec<_> = muts.iter().filter(|m| check_equivalence_with(&m.equations, a.depth).passed()).collect();
        print_text(&format!("mutants caught:     {}/{}", muts.len() - missed.len(), muts.len()))?;
        if let Some(m) = missed.first() {
            bail!("mutation not detected: {}", m.description);
        }
    }
    Ok(())
}
