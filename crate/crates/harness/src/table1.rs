//! Reads a sweep CSV and picks, per curve, the highest code rate whose mean
//! residual loss stays within a threshold.

use std::fmt::Write as _;

use crate::report::{format_sig, ResultRow};

#[derive(Clone, Debug, PartialEq)]
pub struct Table1Entry {
    pub scenario: String,
    pub mode: String,
    pub window: usize,
    /// Chosen row, or `None` when no swept rate meets the threshold.
    pub best: Option<ResultRow>,
}

/// One entry per (scenario, mode, window) curve in first-appearance order.
pub fn extract(rows: &[ResultRow], threshold: f64) -> Vec<Table1Entry> {
    let mut out: Vec<Table1Entry> = Vec::new();
    for row in rows {
        let idx = match out
            .iter()
            .position(|e| e.scenario == row.scenario && e.mode == row.mode && e.window == row.window)
        {
            Some(i) => i,
            None => {
                out.push(Table1Entry {
                    scenario: row.scenario.clone(),
                    mode: row.mode.clone(),
                    window: row.window,
                    best: None,
                });
                out.len() - 1
            }
        };
        if row.loss_mean <= threshold {
            let entry = &mut out[idx];
            if entry.best.as_ref().is_none_or(|b| row.code_rate > b.code_rate) {
                entry.best = Some(row.clone());
            }
        }
    }
    out
}

pub fn render(entries: &[Table1Entry], threshold: f64) -> String {
    let mut s = String::new();
    writeln!(s, "# highest code rate with loss_mean <= {}", format_sig(threshold)).unwrap();
    writeln!(s, "scenario,mode,window,code_rate,loss_mean,delay_mean_ms").unwrap();
    for e in entries {
        match &e.best {
            Some(r) => writeln!(
                s,
                "{},{},{},{},{},{}",
                e.scenario,
                e.mode,
                e.window,
                format_sig(r.code_rate),
                format_sig(r.loss_mean),
                format_sig(r.delay_mean_ms)
            ),
            None => writeln!(s, "{},{},{},none,,", e.scenario, e.mode, e.window),
        }
        .unwrap();
    }
    s
}
