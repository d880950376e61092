//! Continuous-time input sources.
//!
//! Analytic sources (sine, triangle) are evaluated in closed form; sampled
//! records are linearly interpolated and clamp to their end samples outside
//! the recorded span. Every source is immutable once built.

use std::f64::consts::PI;
use std::path::Path;

use crate::error::{invalid, Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SignalKind {
    Sine,
    Triangle,
    Sampled,
}

#[derive(Debug, Clone, PartialEq)]
enum Shape {
    Sine { amplitude: f64, frequency: f64, offset: f64 },
    Triangle { amplitude: f64, frequency: f64, offset: f64 },
    Sampled { times: Vec<f64>, values: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SignalSource {
    shape: Shape,
    /// Hard range applied after evaluation, set by full-scale scaling.
    clamp: Option<(f64, f64)>,
}

pub fn make_sine(amplitude: f64, frequency: f64, offset: f64) -> Result<SignalSource> {
    check_analytic(amplitude, frequency, offset)?;
    Ok(SignalSource { shape: Shape::Sine { amplitude, frequency, offset }, clamp: None })
}

pub fn make_triangle(amplitude: f64, frequency: f64, offset: f64) -> Result<SignalSource> {
    check_analytic(amplitude, frequency, offset)?;
    Ok(SignalSource { shape: Shape::Triangle { amplitude, frequency, offset }, clamp: None })
}

fn check_analytic(amplitude: f64, frequency: f64, offset: f64) -> Result<()> {
    if !(frequency > 0.0) || !frequency.is_finite() {
        return Err(invalid(format!("frequency must be positive, got {frequency}")));
    }
    if !(amplitude >= 0.0) || !amplitude.is_finite() {
        return Err(invalid(format!("amplitude must be non-negative, got {amplitude}")));
    }
    if !offset.is_finite() {
        return Err(invalid("offset must be finite"));
    }
    Ok(())
}

impl SignalSource {
    /// Builds a sampled source from explicit `(time, value)` columns.
    pub fn from_samples(times: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        if times.len() != values.len() {
            return Err(invalid("time and value columns differ in length"));
        }
        if times.len() < 2 {
            return Err(Error::TooFewSamples(times.len()));
        }
        if let Some(i) = times.iter().chain(values.iter()).position(|x| !x.is_finite()) {
            return Err(invalid(format!("non-finite sample at position {}", i % times.len())));
        }
        if let Some(i) = times.windows(2).position(|w| w[1] <= w[0]) {
            return Err(Error::NonMonotonicTime { index: i + 1 });
        }
        Ok(SignalSource { shape: Shape::Sampled { times, values }, clamp: None })
    }

    /// Builds a sampled source where sample `k` sits at `k / sample_rate`.
    pub fn from_uniform(values: Vec<f64>, sample_rate: f64) -> Result<Self> {
        if !(sample_rate > 0.0) || !sample_rate.is_finite() {
            return Err(invalid(format!("sample rate must be positive, got {sample_rate}")));
        }
        let times = (0..values.len()).map(|k| k as f64 / sample_rate).collect();
        Self::from_samples(times, values)
    }

    pub fn kind(&self) -> SignalKind {
        match self.shape {
            Shape::Sine { .. } => SignalKind::Sine,
            Shape::Triangle { .. } => SignalKind::Triangle,
            Shape::Sampled { .. } => SignalKind::Sampled,
        }
    }

    pub fn eval(&self, t: f64) -> f64 {
        let v = match &self.shape {
            Shape::Sine { amplitude, frequency, offset } => {
                offset + amplitude * (2.0 * PI * cycle_phase(t, *frequency)).sin()
            }
            Shape::Triangle { amplitude, frequency, offset } => {
                offset + amplitude * unit_triangle(cycle_phase(t, *frequency))
            }
            Shape::Sampled { times, values } => interpolate(times, values, t),
        };
        match self.clamp {
            Some((lo, hi)) => v.clamp(lo, hi),
            None => v,
        }
    }

    /// Upper bound on |d/dt eval| over all time.
    pub fn max_slope(&self) -> f64 {
        match &self.shape {
            Shape::Sine { amplitude, frequency, .. } => 2.0 * PI * frequency * amplitude,
            Shape::Triangle { amplitude, frequency, .. } => 4.0 * amplitude * frequency,
            Shape::Sampled { times, values } => times
                .windows(2)
                .zip(values.windows(2))
                .map(|(t, v)| ((v[1] - v[0]) / (t[1] - t[0])).abs())
                .fold(0.0, f64::max),
        }
    }

    /// Minimum and maximum of `eval` over all time.
    pub fn range(&self) -> (f64, f64) {
        let (lo, hi) = match &self.shape {
            Shape::Sine { amplitude, offset, .. } | Shape::Triangle { amplitude, offset, .. } => {
                (offset - amplitude, offset + amplitude)
            }
            Shape::Sampled { values, .. } => {
                values.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| (lo.min(v), hi.max(v)))
            }
        };
        match self.clamp {
            Some((clo, chi)) => (lo.clamp(clo, chi), hi.clamp(clo, chi)),
            None => (lo, hi),
        }
    }

    pub fn amplitude(&self) -> f64 {
        let (lo, hi) = self.range();
        (hi - lo) / 2.0
    }

    pub fn frequency(&self) -> Option<f64> {
        match self.shape {
            Shape::Sine { frequency, .. } | Shape::Triangle { frequency, .. } => Some(frequency),
            Shape::Sampled { .. } => None,
        }
    }

    /// Time of the last sample for records; `None` for analytic sources.
    pub fn end_time(&self) -> Option<f64> {
        match &self.shape {
            Shape::Sampled { times, .. } => times.last().copied(),
            _ => None,
        }
    }

    pub fn samples(&self) -> Option<(&[f64], &[f64])> {
        match &self.shape {
            Shape::Sampled { times, values } => Some((times, values)),
            _ => None,
        }
    }
}

/// Fractional position within the current period, in `[0, 1)`.
fn cycle_phase(t: f64, frequency: f64) -> f64 {
    let cycles = t * frequency;
    let p = cycles - cycles.floor();
    if p >= 1.0 {
        0.0
    } else {
        p
    }
}

/// Triangle in `[-1, 1]` rising from 0 at phase 0.
fn unit_triangle(p: f64) -> f64 {
    let v = if p < 0.25 {
        4.0 * p
    } else if p < 0.75 {
        2.0 - 4.0 * p
    } else {
        4.0 * p - 4.0
    };
    v.clamp(-1.0, 1.0)
}

fn interpolate(times: &[f64], values: &[f64], t: f64) -> f64 {
    let last = times.len() - 1;
    if t <= times[0] {
        return values[0];
    }
    if t >= times[last] {
        return values[last];
    }
    // first index with times[i] > t; 1 <= i <= last here
    let i = times.partition_point(|&x| x <= t);
    let (t0, t1) = (times[i - 1], times[i]);
    if t == t0 {
        return values[i - 1];
    }
    let w = (t - t0) / (t1 - t0);
    values[i - 1] + w * (values[i] - values[i - 1])
}

/// Loads a CSV record.
///
/// Two accepted layouts: `time_s,value` (explicit time column), or a single
/// `value` column which then requires `sample_rate`. A non-numeric first row
/// is treated as the header.
pub fn load_record(path: impl AsRef<Path>, sample_rate: Option<f64>) -> Result<SignalSource> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| Error::Io { path: path.to_owned(), source })?;
    read_record(file, sample_rate)
}

pub fn read_record<R: std::io::Read>(reader: R, sample_rate: Option<f64>) -> Result<SignalSource> {
    let mut rdr = csv::ReaderBuilder::new().has_headers(false).trim(csv::Trim::All).flexible(false).from_reader(reader);

    let mut rows: Vec<Vec<f64>> = Vec::new();
    let mut width = None;
    for (idx, rec) in rdr.records().enumerate() {
        let rec = rec?;
        let line = rec.position().map_or(idx as u64 + 1, |p| p.line());
        if rec.iter().all(|f| f.is_empty()) {
            continue;
        }
        let parsed: std::result::Result<Vec<f64>, _> = rec.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(row) => {
                if row.len() > 2 {
                    return Err(Error::Parse {
                        line,
                        message: format!("expected 1 or 2 columns, found {}", row.len()),
                    });
                }
                width.get_or_insert(row.len());
                rows.push(row);
            }
            // header row
            Err(_) if idx == 0 => width = Some(rec.len()),
            Err(e) => return Err(Error::Parse { line, message: e.to_string() }),
        }
    }

    match width {
        Some(1) => {
            let fs = sample_rate.ok_or_else(|| invalid("single-column record needs a sample rate"))?;
            SignalSource::from_uniform(rows.into_iter().map(|r| r[0]).collect(), fs)
        }
        Some(2) => {
            let (times, values) = rows.into_iter().map(|r| (r[0], r[1])).unzip();
            SignalSource::from_samples(times, values)
        }
        Some(n) => Err(Error::Parse { line: 1, message: format!("expected 1 or 2 columns, found {n}") }),
        None => Err(Error::TooFewSamples(0)),
    }
}

/// Affinely maps the source range onto `[margin * v_fs, (1 - margin) * v_fs]`.
pub fn scale_to_full_scale(src: &SignalSource, v_fs: f64, margin: f64) -> Result<SignalSource> {
    if !(v_fs > 0.0) {
        return Err(invalid(format!("full-scale voltage must be positive, got {v_fs}")));
    }
    if !(0.0..0.5).contains(&margin) {
        return Err(invalid(format!("margin must lie in [0, 0.5), got {margin}")));
    }
    let (lo, hi) = src.range();
    let span = hi - lo;
    if !(span > 0.0) {
        return Err(Error::ZeroSpan);
    }
    let (new_lo, new_hi) = (margin * v_fs, (1.0 - margin) * v_fs);
    let gain = (new_hi - new_lo) / span;
    let map = |v: f64| (new_lo + (v - lo) * gain).clamp(new_lo, new_hi);

    let shape = match &src.shape {
        Shape::Sine { frequency, .. } => {
            Shape::Sine { amplitude: (new_hi - new_lo) / 2.0, frequency: *frequency, offset: (new_hi + new_lo) / 2.0 }
        }
        Shape::Triangle { frequency, .. } => Shape::Triangle {
            amplitude: (new_hi - new_lo) / 2.0,
            frequency: *frequency,
            offset: (new_hi + new_lo) / 2.0,
        },
        Shape::Sampled { times, values } => {
            Shape::Sampled { times: times.clone(), values: values.iter().map(|&v| map(v)).collect() }
        }
    };
    Ok(SignalSource { shape, clamp: Some((new_lo, new_hi)) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    #[test]
    fn sine_examples() {
        let s = make_sine(0.5, 1000.0, 0.5).unwrap();
        assert_eq!(s.eval(0.0), 0.5);
        assert_abs_diff_eq!(s.eval(0.25e-3), 1.0, epsilon = 1e-12);
        // independent evaluation of 0.5 + 0.5 sin(pi/6)
        let expected = 0.5 + 0.5 * (PI / 6.0).sin();
        assert_abs_diff_eq!(expected, 0.75, epsilon = 1e-15);
        assert_abs_diff_eq!(s.eval(1.0 / 12.0 * 1e-3), 0.75, epsilon = 1e-12);
    }

    #[test]
    fn triangle_examples() {
        let s = make_triangle(0.5, 10.0, 0.5).unwrap();
        assert_eq!(s.eval(0.0), 0.5);
        assert_abs_diff_eq!(s.eval(0.025), 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.eval(0.075), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(s.eval(0.0125), 0.75, epsilon = 1e-12);
    }

    #[test]
    fn rejects_bad_frequency() {
        assert!(make_sine(0.5, 0.0, 0.5).is_err());
        assert!(make_triangle(0.5, -1.0, 0.5).is_err());
        assert!(make_sine(-0.1, 10.0, 0.5).is_err());
    }

    #[test]
    fn analytic_full_scale_stays_in_rails() {
        let s = make_triangle(0.5, 10.0, 0.5).unwrap();
        let t = make_sine(0.5, 10.0, 0.5).unwrap();
        for k in 0..100_000 {
            let x = k as f64 * 1.37e-6;
            assert!((0.0..=1.0).contains(&s.eval(x)));
            assert!((0.0..=1.0).contains(&t.eval(x)));
        }
    }

    #[test]
    fn record_interpolation_and_clamp() {
        let s = SignalSource::from_samples(vec![0.0, 1.0], vec![0.0, 1.0]).unwrap();
        assert_eq!(s.eval(0.5), 0.5);
        assert_eq!(s.eval(2.0), 1.0);
        assert_eq!(s.eval(-1.0), 0.0);
    }

    #[test]
    fn single_column_uses_sample_rate() {
        let csv = "value\n0.0\n1.0\n2.0\n";
        let s = read_record(csv.as_bytes(), Some(360.0)).unwrap();
        let (times, _) = s.samples().unwrap();
        assert_eq!(times[2], 2.0 / 360.0);
        assert_eq!(s.eval(1.0 / 360.0), 1.0);
        assert!(read_record(csv.as_bytes(), None).is_err());
    }

    #[test]
    fn two_column_record() {
        let csv = "time_s,value\n0.0,0.0\n0.5,2.0\n1.0,0.0\n";
        let s = read_record(csv.as_bytes(), None).unwrap();
        assert_eq!(s.eval(0.25), 1.0);
        assert_eq!(s.end_time(), Some(1.0));
    }

    #[test]
    fn record_errors() {
        assert!(matches!(
            read_record("time_s,value\n0,1\n0,2\n".as_bytes(), None),
            Err(Error::NonMonotonicTime { index: 1 })
        ));
        assert!(matches!(read_record("time_s,value\n0,1\n".as_bytes(), None), Err(Error::TooFewSamples(1))));
        assert!(matches!(read_record("time_s,value\n0,1\n1,abc\n".as_bytes(), None), Err(Error::Parse { .. })));
        assert!(read_record("a,b,c\n1,2,3\n".as_bytes(), None).is_err());
    }

    #[test]
    fn scaling_examples() {
        let s = SignalSource::from_samples(vec![0.0, 1.0, 2.0], vec![-1.0, 0.0, 1.0]).unwrap();
        let f = scale_to_full_scale(&s, 1.0, 0.0).unwrap();
        assert_eq!(f.range(), (0.0, 1.0));
        assert_eq!(f.eval(1.0), 0.5);

        let s = SignalSource::from_samples(vec![0.0, 1.0], vec![0.0, 2.0]).unwrap();
        let f = scale_to_full_scale(&s, 1.0, 0.05).unwrap();
        let (lo, hi) = f.range();
        assert_abs_diff_eq!(lo, 0.05, epsilon = 1e-15);
        assert_abs_diff_eq!(hi, 0.95, epsilon = 1e-15);

        let flat = SignalSource::from_samples(vec![0.0, 1.0], vec![3.0, 3.0]).unwrap();
        assert!(matches!(scale_to_full_scale(&flat, 1.0, 0.0), Err(Error::ZeroSpan)));
    }

    #[test]
    fn max_slope_of_record() {
        let s = SignalSource::from_samples(vec![0.0, 1.0, 1.5], vec![0.0, 1.0, 0.0]).unwrap();
        assert_eq!(s.max_slope(), 2.0);
    }

    proptest! {
        #[test]
        fn analytic_sources_are_periodic(
            f in 0.1f64..5000.0,
            a in 0.0f64..1.0,
            t in 0.0f64..1.0,
            k in 1u32..50,
            tri in any::<bool>(),
        ) {
            let s = if tri { make_triangle(a, f, 0.5).unwrap() } else { make_sine(a, f, 0.5).unwrap() };
            let t = t / f;
            let shifted = t + k as f64 / f;
            prop_assert!((s.eval(t) - s.eval(shifted)).abs() < 1e-9 * (1.0 + a));
        }

        #[test]
        fn scaled_record_stays_in_full_scale(
            values in prop::collection::vec(-100.0f64..100.0, 2..64),
            v_fs in 0.1f64..5.0,
            margin in 0.0f64..0.4,
            probe in -1.0f64..80.0,
        ) {
            let n = values.len();
            let src = SignalSource::from_uniform(values, 1.0).unwrap();
            let (lo, hi) = src.range();
            prop_assume!(hi > lo);
            let scaled = scale_to_full_scale(&src, v_fs, margin).unwrap();
            let v = scaled.eval(probe);
            prop_assert!(v >= 0.0 && v <= v_fs);
            for k in 0..n {
                let t = k as f64;
                let v = scaled.eval(t);
                prop_assert!(v >= margin * v_fs - 1e-12 && v <= (1.0 - margin) * v_fs + 1e-12);
            }
        }

        #[test]
        fn interpolation_hits_samples_exactly(values in prop::collection::vec(-10.0f64..10.0, 2..40), fs in 1.0f64..1000.0) {
            let src = SignalSource::from_uniform(values.clone(), fs).unwrap();
            let (times, _) = src.samples().unwrap();
            for (t, v) in times.iter().zip(&values) {
                prop_assert_eq!(src.eval(*t), *v);
            }
        }
    }
}
