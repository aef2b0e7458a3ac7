//! Experiment description files.
//!
//! A config is one JSON document. Unknown keys are rejected and every value
//! is range-checked while parsing, so a bad file fails with the line and
//! column of the offending object.

use std::path::Path;

use mpnc::coding::{CodeRate, EncoderConfig};
use mpnc::multipath::{delay_spread, min_decoding_window_sliding, min_generations_block, total_rate, PathSpec};
use mpnc::simnet::{SimConfig, TrafficConfig};
use serde::{Deserialize, Serialize};

use crate::HarnessError;

/// Largest decoding window "auto" may produce.
pub const MAX_AUTO_WINDOW: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Sliding,
    Block,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Sliding => "sliding",
            Mode::Block => "block",
        }
    }

    pub fn encoder(self, rate: CodeRate, window: usize) -> EncoderConfig {
        match self {
            Mode::Sliding => EncoderConfig::sliding(rate, window),
            Mode::Block => EncoderConfig::block(rate, window),
        }
    }
}

/// One path as written in a config file. Exactly one of `rate_bps` and
/// `rate_pps` must be given; bit rates are converted with the traffic's
/// wire packet size.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, try_from = "RawPath")]
pub struct PathEntry {
    pub name: Option<String>,
    pub rate_bps: Option<f64>,
    pub rate_pps: Option<f64>,
    pub delay_ms: f64,
    pub loss: f64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawPath {
    name: Option<String>,
    rate_bps: Option<f64>,
    rate_pps: Option<f64>,
    delay_ms: f64,
    loss: f64,
}

impl TryFrom<RawPath> for PathEntry {
    type Error = String;

    fn try_from(raw: RawPath) -> Result<Self, String> {
        let rate = match (raw.rate_bps, raw.rate_pps) {
            (Some(r), None) | (None, Some(r)) => r,
            _ => return Err("path needs exactly one of rate_bps and rate_pps".into()),
        };
        if !(rate.is_finite() && rate > 0.0) {
            return Err(format!("path rate must be positive, got {rate}"));
        }
        if !(raw.delay_ms.is_finite() && raw.delay_ms >= 0.0) {
            return Err(format!("delay_ms must be non-negative, got {}", raw.delay_ms));
        }
        if !(0.0..1.0).contains(&raw.loss) {
            return Err(format!("loss must be in [0, 1), got {}", raw.loss));
        }
        Ok(PathEntry {
            name: raw.name,
            rate_bps: raw.rate_bps,
            rate_pps: raw.rate_pps,
            delay_ms: raw.delay_ms,
            loss: raw.loss,
        })
    }
}

impl PathEntry {
    pub fn to_spec(&self, traffic: &TrafficConfig) -> PathSpec {
        let rate = match (self.rate_pps, self.rate_bps) {
            (Some(pps), _) => pps,
            (None, Some(bps)) => traffic.packets_per_second(bps),
            (None, None) => unreachable!("checked while parsing"),
        };
        PathSpec {
            rate,
            delay: self.delay_ms / 1e3,
            loss: self.loss,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, try_from = "RawScenario")]
pub struct Scenario {
    pub name: String,
    pub paths: Vec<PathEntry>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawScenario {
    name: String,
    paths: Vec<PathEntry>,
}

impl TryFrom<RawScenario> for Scenario {
    type Error = String;

    fn try_from(raw: RawScenario) -> Result<Self, String> {
        if raw.name.is_empty() || raw.name.contains([',', '"', '\n']) {
            return Err(format!("scenario name {:?} must be non-empty and CSV-safe", raw.name));
        }
        if raw.paths.is_empty() {
            return Err(format!("scenario {:?} has no paths", raw.name));
        }
        Ok(Scenario {
            name: raw.name,
            paths: raw.paths,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CodeSection {
    pub mode: Mode,
    pub code_rate: CodeRate,
    /// Encoding window `w_e` in sliding mode, generation size `g` in block mode.
    pub window: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum DecodingWindow {
    Fixed(usize),
    Auto(AutoTag),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AutoTag {
    Auto,
}

impl Default for DecodingWindow {
    fn default() -> Self {
        DecodingWindow::Auto(AutoTag::Auto)
    }
}

/// Either an explicit list or an inclusive `{from, to, step}` range.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RateList {
    List(Vec<CodeRate>),
    Range { from: f64, to: f64, step: f64 },
}

impl RateList {
    pub fn values(&self) -> Result<Vec<CodeRate>, String> {
        match self {
            RateList::List(v) => Ok(v.clone()),
            &RateList::Range { from, to, step } => {
                if !(step > 0.0 && from <= to) {
                    return Err(format!("bad code rate range {from}..{to} step {step}"));
                }
                let n = ((to - from) / step + 1e-9).floor() as u64;
                (0..=n)
                    .map(|i| CodeRate::from_f64(from + i as f64 * step).map_err(|e| e.to_string()))
                    .collect()
            }
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub code_rates: Option<RateList>,
    pub windows: Option<Vec<usize>>,
    pub modes: Option<Vec<Mode>>,
    /// Overrides the top-level `decoding_window` with a list.
    pub decoding_windows: Option<Vec<DecodingWindow>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub scenarios: Vec<Scenario>,
    pub traffic: TrafficConfig,
    pub code: CodeSection,
    #[serde(default)]
    pub decoding_window: DecodingWindow,
    pub runs: u32,
    pub seed: u64,
    #[serde(default)]
    pub sweep: Sweep,
}

/// 1-based line of the first occurrence of `"key"`, if any.
fn line_of(text: &str, key: &str) -> Option<usize> {
    let pos = text.find(&format!("\"{key}\""))?;
    Some(text[..pos].matches('\n').count() + 1)
}

/// One (scenario, mode, R, window) cell of the sweep.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepPoint {
    pub scenario: String,
    pub paths: Vec<PathSpec>,
    pub mode: Mode,
    pub rate: CodeRate,
    pub window: usize,
    pub decoding_window: DecodingWindow,
}

impl SweepPoint {
    pub fn encoder(&self) -> EncoderConfig {
        self.mode.encoder(self.rate, self.window)
    }
}

/// Decoding window implied by the buffer analysis for `paths`.
///
/// Sliding mode gets the minimum window plus one extra encoding window of
/// slack; block mode gets `g` times the minimum number of generations.
pub fn auto_decoding_window(paths: &[PathSpec], mode: Mode, rate: CodeRate, window: usize) -> Result<usize, HarnessError> {
    let r = total_rate(paths);
    let dd = delay_spread(paths);
    let w = window as u64;
    let needed = match mode {
        Mode::Sliding => min_decoding_window_sliding(r, 0.0, rate.as_f64(), dd, w) as f64 + w as f64,
        Mode::Block => min_generations_block(r, 0.0, rate.as_f64(), dd, w) as f64 * w as f64,
    };
    if !needed.is_finite() || needed > MAX_AUTO_WINDOW as f64 {
        return Err(HarnessError::InfeasibleWindow {
            mode: mode.name(),
            needed,
            limit: MAX_AUTO_WINDOW,
        });
    }
    Ok(needed as usize)
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<ExperimentConfig, HarnessError> {
        let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io {
            path: path.display().to_string(),
            source,
        })?;
        Self::parse(&text).map_err(|e| match e {
            HarnessError::Config { message, .. } => HarnessError::Config {
                origin: path.display().to_string(),
                message,
            },
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<ExperimentConfig, HarnessError> {
        let error = |message: String| HarnessError::Config {
            origin: "<config>".into(),
            message,
        };
        let cfg: ExperimentConfig = serde_json::from_str(text).map_err(|e| error(e.to_string()))?;
        cfg.validate().map_err(|(key, message)| match line_of(text, key) {
            Some(line) => error(format!("{message} at line {line} (\"{key}\")")),
            None => error(format!("{message} (\"{key}\" missing)")),
        })?;
        Ok(cfg)
    }

    /// Cross-field checks. Errors name the top-level key they concern.
    pub fn validate(&self) -> Result<(), (&'static str, String)> {
        if self.scenarios.is_empty() {
            return Err(("scenarios", "at least one scenario is required".into()));
        }
        if self.runs == 0 {
            return Err(("runs", "runs must be at least 1".into()));
        }
        self.traffic.validate().map_err(|e| ("traffic", e.to_string()))?;
        if self.decoding_window == DecodingWindow::Fixed(0) {
            return Err(("decoding_window", "decoding_window must be positive".into()));
        }
        if let Some(rates) = &self.sweep.code_rates {
            if rates.values().map_err(|e| ("code_rates", e))?.is_empty() {
                return Err(("code_rates", "sweep.code_rates is empty".into()));
            }
        }
        if self.sweep.windows.as_ref().is_some_and(Vec::is_empty) {
            return Err(("windows", "sweep.windows is empty".into()));
        }
        if self.sweep.modes.as_ref().is_some_and(Vec::is_empty) {
            return Err(("modes", "sweep.modes is empty".into()));
        }
        match &self.sweep.decoding_windows {
            Some(v) if v.is_empty() => return Err(("decoding_windows", "sweep.decoding_windows is empty".into())),
            Some(v) if v.contains(&DecodingWindow::Fixed(0)) => {
                return Err(("decoding_windows", "decoding windows must be positive".into()))
            }
            _ => {}
        }
        for point in self.points().map_err(|e| ("code_rates", e))? {
            point.encoder().validate().map_err(|e| {
                let key = if self.sweep.windows.is_some() { "windows" } else { "window" };
                (key, format!("{} window {}: {e}", point.mode.name(), point.window))
            })?;
        }
        Ok(())
    }

    pub fn code_rates(&self) -> Result<Vec<CodeRate>, String> {
        match &self.sweep.code_rates {
            Some(list) => list.values(),
            None => Ok(vec![self.code.code_rate]),
        }
    }

    pub fn windows(&self) -> Vec<usize> {
        self.sweep.windows.clone().unwrap_or_else(|| vec![self.code.window])
    }

    pub fn modes(&self) -> Vec<Mode> {
        self.sweep.modes.clone().unwrap_or_else(|| vec![self.code.mode])
    }

    pub fn decoding_windows(&self) -> Vec<DecodingWindow> {
        self.sweep
            .decoding_windows
            .clone()
            .unwrap_or_else(|| vec![self.decoding_window])
    }

    /// Sweep points in output order: scenario, then mode, window, decoding
    /// window and rate.
    pub fn points(&self) -> Result<Vec<SweepPoint>, String> {
        let rates = self.code_rates()?;
        let mut out = Vec::new();
        for scenario in &self.scenarios {
            let paths: Vec<PathSpec> = scenario.paths.iter().map(|p| p.to_spec(&self.traffic)).collect();
            for mode in self.modes() {
                for window in self.windows() {
                    for decoding_window in self.decoding_windows() {
                        for &rate in &rates {
                            out.push(SweepPoint {
                                scenario: scenario.name.clone(),
                                paths: paths.clone(),
                                mode,
                                rate,
                                window,
                                decoding_window,
                            });
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// Resolves a sweep point into a runnable simulation config.
    pub fn sim_config(&self, point: &SweepPoint) -> Result<SimConfig, HarnessError> {
        let decoding_window = match point.decoding_window {
            DecodingWindow::Fixed(w) => w,
            DecodingWindow::Auto(_) => auto_decoding_window(&point.paths, point.mode, point.rate, point.window)?,
        };
        Ok(SimConfig {
            paths: point.paths.clone(),
            traffic: self.traffic.clone(),
            code: point.encoder(),
            decoding_window,
        })
    }
}
