//! JSON run configuration.
//!
//! ```json
//! {
//!   "model": {"pspin": {"N": [20, 30]}},
//!   "protocol": ["qa", "cd1", "cd2"],
//!   "frame": "lab",
//!   "tau": {"min": 0.1, "max": 1e5, "points": 25},
//!   "gamma_init": 0.1,
//!   "p_r": 0.99,
//!   "integrator": {"method": "magnus4", "steps": "auto", "norm_tolerance": 1e-6},
//!   "outputs": {"fidelity": true, "residual": true, "tts": true, "spectrum": {"samples": 11}}
//! }
//! ```
//!
//! `N`, `protocol` and `tau` each take a scalar or a list; `tau` also takes
//! a log-spaced `{min, max, points}` grid. Unknown keys are rejected.

use serde::Deserialize;

use crate::dynamics::{IntegratorConfig, Method, StepCount};
use crate::error::{Error, Result};
use crate::metrics::DEFAULT_SUCCESS_PROBABILITY;
use crate::model::{Frame, Model, Protocol, ProtocolSpec};
use crate::schedules::ScheduleSpec;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany<T> {
    One(T),
    Many(Vec<T>),
}

impl<T: Clone> OneOrMany<T> {
    pub fn to_vec(&self) -> Vec<T> {
        match self {
            OneOrMany::One(v) => vec![v.clone()],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PSpinConfig {
    #[serde(rename = "N")]
    pub n: OneOrMany<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LzConfig {
    pub h: f64,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelConfig {
    Pspin(PSpinConfig),
    Lz(LzConfig),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LogGrid {
    pub min: f64,
    pub max: f64,
    pub points: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum TauConfig {
    One(f64),
    Many(Vec<f64>),
    Grid(LogGrid),
}

impl TauConfig {
    pub fn values(&self) -> Result<Vec<f64>> {
        let taus = match self {
            TauConfig::One(t) => vec![*t],
            TauConfig::Many(v) => v.clone(),
            TauConfig::Grid(g) => log_grid(g.min, g.max, g.points)?,
        };
        if taus.is_empty() {
            return Err(Error::Config("tau list is empty".into()));
        }
        if let Some(bad) = taus.iter().find(|t| !(t.is_finite() && **t > 0.0)) {
            return Err(Error::Config(format!("tau values must be positive, got {bad}")));
        }
        Ok(taus)
    }
}

/// `points` values from `min` to `max`, evenly spaced in `log10`.
/// The end points are returned exactly.
pub fn log_grid(min: f64, max: f64, points: usize) -> Result<Vec<f64>> {
    if !(min > 0.0 && max >= min && min.is_finite() && max.is_finite()) {
        return Err(Error::Config(format!("invalid log grid [{min}, {max}]")));
    }
    match points {
        0 => Err(Error::Config("log grid needs at least one point".into())),
        1 => Ok(vec![min]),
        _ => {
            let (a, b) = (min.log10(), max.log10());
            let last = points - 1;
            Ok((0..points)
                .map(|k| match k {
                    0 => min,
                    k if k == last => max,
                    k => 10f64.powf(a + (b - a) * k as f64 / last as f64),
                })
                .collect())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(untagged)]
pub enum StepsConfig {
    Fixed(usize),
    Keyword(StepsKeyword),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum StepsKeyword {
    Auto,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IntegratorSection {
    #[serde(default = "default_method")]
    pub method: Method,
    #[serde(default = "default_steps")]
    pub steps: StepsConfig,
    #[serde(default = "default_norm_tolerance")]
    pub norm_tolerance: f64,
    #[serde(default)]
    pub convergence_check: bool,
}

fn default_method() -> Method {
    Method::FixedStepRk4
}

fn default_steps() -> StepsConfig {
    StepsConfig::Keyword(StepsKeyword::Auto)
}

fn default_norm_tolerance() -> f64 {
    1e-6
}

impl Default for IntegratorSection {
    fn default() -> Self {
        Self {
            method: default_method(),
            steps: default_steps(),
            norm_tolerance: default_norm_tolerance(),
            convergence_check: false,
        }
    }
}

impl IntegratorSection {
    pub fn to_config(&self) -> Result<IntegratorConfig> {
        let cfg = IntegratorConfig {
            method: self.method,
            steps: match self.steps {
                StepsConfig::Fixed(n) => StepCount::Fixed(n),
                StepsConfig::Keyword(StepsKeyword::Auto) => StepCount::Auto,
            },
            norm_tolerance: self.norm_tolerance,
            convergence_check: self.convergence_check,
        };
        cfg.validate().map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg)
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpectrumOutput {
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsSection {
    #[serde(default = "yes")]
    pub fidelity: bool,
    #[serde(default = "yes")]
    pub residual: bool,
    #[serde(default = "yes")]
    pub tts: bool,
    #[serde(default)]
    pub spectrum: Option<SpectrumOutput>,
}

fn yes() -> bool {
    true
}

impl Default for OutputsSection {
    fn default() -> Self {
        Self {
            fidelity: true,
            residual: true,
            tts: true,
            spectrum: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub protocol: OneOrMany<Protocol>,
    #[serde(default = "default_frame")]
    pub frame: Frame,
    pub tau: TauConfig,
    /// Defaults to 0.1 for the p-spin model and 1 for Landau–Zener.
    #[serde(default)]
    pub gamma_init: Option<f64>,
    #[serde(default = "default_p_r")]
    pub p_r: f64,
    #[serde(default)]
    pub integrator: IntegratorSection,
    #[serde(default)]
    pub outputs: OutputsSection,
}

fn default_frame() -> Frame {
    Frame::Lab
}

fn default_p_r() -> f64 {
    DEFAULT_SUCCESS_PROBABILITY
}

/// One simulation cell of a configuration grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cell {
    pub schedule: ScheduleSpec,
    pub protocol: ProtocolSpec,
}

impl Cell {
    pub fn sort_key(&self) -> (Protocol, usize, f64) {
        (self.protocol.protocol, self.protocol.model.sites(), self.schedule.total_time())
    }
}

impl RunConfig {
    /// Parses and validates a JSON document. Errors carry line and column.
    pub fn from_json(text: &str) -> Result<Self> {
        // serde_json messages end with "at line L column C"
        let cfg: RunConfig = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.cells()?;
        cfg.integrator.to_config()?;
        if !(cfg.p_r > 0.0 && cfg.p_r < 1.0) {
            return Err(Error::Config(format!("p_r must lie in (0, 1), got {}", cfg.p_r)));
        }
        if let Some(s) = &cfg.outputs.spectrum {
            if s.samples < 2 {
                return Err(Error::Config(format!("spectrum needs at least 2 samples, got {}", s.samples)));
            }
        }
        Ok(cfg)
    }

    pub fn from_path(path: &std::path::Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn models(&self) -> Result<Vec<Model>> {
        match &self.model {
            ModelConfig::Pspin(p) => {
                let ns = p.n.to_vec();
                if ns.is_empty() {
                    return Err(Error::Config("N list is empty".into()));
                }
                Ok(ns.into_iter().map(|n| Model::PSpin { n }).collect())
            }
            ModelConfig::Lz(l) => Ok(vec![Model::LandauZener { h: l.h }]),
        }
    }

    pub fn gamma_init(&self) -> f64 {
        self.gamma_init.unwrap_or(match self.model {
            ModelConfig::Pspin(_) => 0.1,
            ModelConfig::Lz(_) => 1.0,
        })
    }

    /// All (protocol, N, τ) cells in output order.
    pub fn cells(&self) -> Result<Vec<Cell>> {
        let protocols = self.protocol.to_vec();
        if protocols.is_empty() {
            return Err(Error::Config("protocol list is empty".into()));
        }
        let taus = self.tau.values()?;
        let mut cells = Vec::new();
        for &protocol in &protocols {
            for model in self.models()? {
                for &tau in &taus {
                    let mode = protocol.default_gamma_mode(model);
                    let schedule = ScheduleSpec::new(tau, mode, self.gamma_init()).map_err(|e| Error::Config(e.to_string()))?;
                    let spec = ProtocolSpec::new(protocol, self.frame, model);
                    spec.validate(&schedule).map_err(|e| Error::Config(e.to_string()))?;
                    cells.push(Cell { schedule, protocol: spec });
                }
            }
        }
        cells.sort_by(|a, b| {
            let (pa, na, ta) = a.sort_key();
            let (pb, nb, tb) = b.sort_key();
            pa.cmp(&pb).then(na.cmp(&nb)).then(ta.total_cmp(&tb))
        });
        Ok(cells)
    }
}
