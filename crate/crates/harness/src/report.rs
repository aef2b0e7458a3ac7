use std::io;

use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// Fixed CSV column order.
pub const COLUMNS: [&str; 11] = [
    "scenario",
    "mode",
    "code_rate",
    "window",
    "decoding_window",
    "runs",
    "loss_mean",
    "loss_std",
    "delay_mean_ms",
    "delay_std_ms",
    "delay_p95_ms",
];

/// Aggregate over the replicated runs of one sweep point.
///
/// Standard deviations are sample deviations across runs (zero for a single
/// run). Delay columns average the per-run statistics over the runs that
/// delivered anything; `delay_p95_ms` is the mean of per-run 95th
/// percentiles.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    pub scenario: String,
    pub mode: String,
    pub code_rate: f64,
    pub window: usize,
    pub decoding_window: usize,
    pub runs: u32,
    pub loss_mean: f64,
    pub loss_std: f64,
    pub delay_mean_ms: f64,
    pub delay_std_ms: f64,
    pub delay_p95_ms: f64,
}

/// Formats like C's `%.6g`: six significant digits, trailing zeros dropped,
/// scientific notation below 1e-4 or from 1e6 upwards.
pub fn format_sig(x: f64) -> String {
    const DIGITS: i32 = 6;
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    // exponent after rounding to six significant digits
    let sci = format!("{:.*e}", (DIGITS - 1) as usize, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..DIGITS).contains(&exp) {
        let mantissa = trim_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (DIGITS - 1 - exp).max(0) as usize;
        trim_zeros(&format!("{x:.decimals$}")).to_string()
    }
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

impl ResultRow {
    fn fields(&self) -> [String; 11] {
        [
            self.scenario.clone(),
            self.mode.clone(),
            format_sig(self.code_rate),
            self.window.to_string(),
            self.decoding_window.to_string(),
            self.runs.to_string(),
            format_sig(self.loss_mean),
            format_sig(self.loss_std),
            format_sig(self.delay_mean_ms),
            format_sig(self.delay_std_ms),
            format_sig(self.delay_p95_ms),
        ]
    }
}

pub fn write_csv<W: io::Write>(out: W, rows: &[ResultRow]) -> Result<(), HarnessError> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(COLUMNS)?;
    for row in rows {
        w.write_record(row.fields())?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

pub fn to_csv_string(rows: &[ResultRow]) -> String {
    let mut buf = Vec::new();
    write_csv(&mut buf, rows).expect("writing to memory");
    String::from_utf8(buf).expect("CSV is UTF-8")
}

pub fn read_csv<R: io::Read>(input: R) -> Result<Vec<ResultRow>, HarnessError> {
    let mut r = csv::Reader::from_reader(input);
    let headers = r.headers()?.clone();
    if headers.iter().ne(COLUMNS) {
        return Err(HarnessError::Config {
            origin: "<csv>".into(),
            message: format!("unexpected header {:?}", headers.iter().collect::<Vec<_>>()),
        });
    }
    r.deserialize().map(|row| row.map_err(HarnessError::from)).collect()
}
