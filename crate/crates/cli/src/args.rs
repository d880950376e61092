use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "lcadc",
    version,
    about = "Event-driven simulator for a clock-gated floating-window level-crossing ADC"
)]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct GlobalArgs {
    /// JSON converter config (keys: bits, v_fs, t_comp_s, p_on_w, p_off_w, t_dig_s)
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Directory for output files; created if missing
    #[arg(long, global = true, value_name = "DIR", default_value = ".")]
    pub out_dir: PathBuf,
    /// Seed for every random choice (clock phase)
    #[arg(long, global = true, value_name = "N")]
    pub seed: Option<u64>,

    /// Resolution in bits
    #[arg(long, global = true, help_heading = "Converter overrides")]
    pub bits: Option<u32>,
    /// Full-scale voltage
    #[arg(long, global = true, value_name = "V", help_heading = "Converter overrides")]
    pub v_fs: Option<f64>,
    /// Comparator decision time
    #[arg(long, global = true, value_name = "S", help_heading = "Converter overrides")]
    pub t_comp_s: Option<f64>,
    /// Digital update delay between decision and REQ
    #[arg(long, global = true, value_name = "S", help_heading = "Converter overrides")]
    pub t_dig_s: Option<f64>,
    /// Power with comparators on
    #[arg(long, global = true, value_name = "W", help_heading = "Converter overrides")]
    pub p_on_w: Option<f64>,
    /// Power with comparators off
    #[arg(long, global = true, value_name = "W", help_heading = "Converter overrides")]
    pub p_off_w: Option<f64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate one input and write trace, power and reconstruction files
    Simulate(SimulateArgs),
    /// Off-fraction and mean power over an input-frequency by clock grid
    Sweep(SweepArgs),
    /// Windowed power reduction on a recorded ECG
    Ecg(EcgArgs),
    /// Tracking bandwidth and clock-period bound
    Bounds(BoundsArgs),
    /// Check the FSM equations against the state graph
    CheckAfsm(CheckAfsmArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SignalArg {
    Sine,
    Triangle,
    Record,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long, value_enum, default_value = "sine")]
    pub signal: SignalArg,
    /// Input frequency in Hz (sine, triangle)
    #[arg(long, value_name = "HZ", default_value_t = 1000.0)]
    pub freq: f64,
    /// Amplitude in volts (sine, triangle)
    #[arg(long, value_name = "V", default_value_t = 0.5)]
    pub amp: f64,
    /// DC offset in volts (sine, triangle)
    #[arg(long, value_name = "V", default_value_t = 0.5)]
    pub offset: f64,
    /// CSV record for --signal record
    #[arg(long, value_name = "FILE")]
    pub record: Option<PathBuf>,
    /// Sample rate of a single-column record
    #[arg(long, value_name = "HZ")]
    pub fs: Option<f64>,
    /// Map the record onto the full scale, leaving this fraction of v_fs at each rail
    #[arg(long, value_name = "FRACTION")]
    pub scale_margin: Option<f64>,
    /// Simulated time in seconds; defaults to the record length for records
    #[arg(long, value_name = "S")]
    pub duration: Option<f64>,
    /// Clock period in seconds
    #[arg(long, visible_alias = "clock-period-s", value_name = "S")]
    pub clock_period: f64,
    /// Time of the first rising clock edge, in [0, period)
    #[arg(long, value_name = "S", conflicts_with = "random_phase")]
    pub clock_phase_s: Option<f64>,
    /// Draw the clock phase uniformly from [0, period) using --seed
    #[arg(long)]
    pub random_phase: bool,
    /// Fail with exit code 2 if more overload errors than this are recorded
    #[arg(long, value_name = "N")]
    pub overload_budget: Option<usize>,
    /// Error-metric grid points per inter-event interval
    #[arg(long, value_name = "N", default_value_t = 16)]
    pub metric_points: usize,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_name = "HZ", default_value_t = 10.0)]
    pub f_min: f64,
    #[arg(long, value_name = "HZ", default_value_t = 1000.0)]
    pub f_max: f64,
    /// Log-spaced input frequencies between --f-min and --f-max
    #[arg(long, value_name = "N", default_value_t = 21)]
    pub f_points: usize,
    /// Clock periods as fractions of each frequency's bound
    #[arg(
        long,
        value_name = "LIST",
        value_delimiter = ',',
        default_value = "1,0.5,0.25",
        conflicts_with = "clk_periods"
    )]
    pub clk_fractions: Vec<f64>,
    /// Fixed clock periods in seconds
    #[arg(long, value_name = "LIST", value_delimiter = ',')]
    pub clk_periods: Option<Vec<f64>>,
    /// Sine amplitude in volts; defaults to half the full scale
    #[arg(long, value_name = "V")]
    pub amp: Option<f64>,
    /// Also simulate every feasible point and append measured columns
    #[arg(long)]
    pub empirical: bool,
    /// Input periods simulated per point with --empirical
    #[arg(long, value_name = "N", default_value_t = 20)]
    pub periods: u32,
}

#[derive(Debug, Args)]
pub struct EcgArgs {
    /// CSV record: one column with --fs, or time,value
    #[arg(long, value_name = "FILE")]
    pub record: PathBuf,
    #[arg(long, value_name = "HZ")]
    pub fs: Option<f64>,
    /// Signal bandwidth used to size the clock
    #[arg(long, value_name = "HZ", default_value_t = 150.0)]
    pub bandwidth: f64,
    /// Sliding window in seconds; the stride is half of it
    #[arg(long, value_name = "S", default_value_t = 0.05)]
    pub window: f64,
    /// Fraction of v_fs left free at each rail when scaling
    #[arg(long, value_name = "FRACTION", default_value_t = 0.0)]
    pub margin: f64,
    /// Use the record values as volts without rescaling
    #[arg(long)]
    pub no_scale: bool,
}

#[derive(Debug, Args)]
pub struct BoundsArgs {
    /// Input frequency for the clock-period bound
    #[arg(long, value_name = "HZ", default_value_t = 1000.0)]
    pub fin: f64,
    /// Sine amplitude in volts; defaults to half the full scale
    #[arg(long, value_name = "V")]
    pub amp: Option<f64>,
}

#[derive(Debug, Args)]
pub struct CheckAfsmArgs {
    /// Number of state-graph arcs per explored sequence
    #[arg(long, default_value_t = 6)]
    pub depth: usize,
    /// Also confirm that every single-literal mutation is detected
    #[arg(long)]
    pub mutants: bool,
}
