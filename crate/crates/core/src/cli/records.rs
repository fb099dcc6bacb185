//! Per-cell execution and CSV / JSON-lines records.

use std::fmt::Write as _;

use rayon::prelude::*;
use serde_json::{json, Map, Value};

use super::config::{Cell, OutputsSection, RunConfig};
use crate::dynamics::{run_protocol_with, IntegratorConfig};
use crate::error::{Error, Result};
use crate::metrics::RunResult;

pub const CSV_HEADER: &str = "protocol,frame,N,tau,gamma_init,fidelity,residual_energy,tts,norm_drift,steps";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Outcome of one (protocol, N, τ) cell.
#[derive(Debug, Clone)]
pub struct Record {
    pub cell: Cell,
    pub outcome: std::result::Result<RunResult, Error>,
}

impl Record {
    pub fn result(&self) -> Option<&RunResult> {
        self.outcome.as_ref().ok()
    }

    pub fn failed(&self) -> bool {
        self.outcome.is_err()
    }
}

/// Runs every cell on a pool of `jobs` threads. Output order is the cell
/// order, independent of scheduling.
pub fn execute(cells: &[Cell], integrator: &IntegratorConfig, p_r: f64, jobs: usize) -> Result<Vec<Record>> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(format!("cannot start worker pool: {e}")))?;
    Ok(pool.install(|| {
        cells
            .par_iter()
            .map(|cell| Record {
                cell: *cell,
                outcome: run_protocol_with(&cell.schedule, &cell.protocol, integrator, p_r),
            })
            .collect()
    }))
}

pub fn execute_config(cfg: &RunConfig, jobs: usize) -> Result<Vec<Record>> {
    execute(&cfg.cells()?, &cfg.integrator.to_config()?, cfg.p_r, jobs)
}

/// Seventeen significant digits; `nan`, `inf`, `-inf` otherwise.
pub fn num(x: f64) -> String {
    if x.is_finite() {
        format!("{x:.16e}")
    } else if x.is_nan() {
        "nan".into()
    } else if x > 0.0 {
        "inf".into()
    } else {
        "-inf".into()
    }
}

fn json_num(x: f64) -> Value {
    serde_json::Number::from_f64(x).map_or(Value::Null, Value::Number)
}

struct Fields {
    fidelity: Option<f64>,
    residual: Option<f64>,
    tts: Option<f64>,
    norm_drift: f64,
    steps: Option<usize>,
}

fn fields(record: &Record, outputs: &OutputsSection) -> Fields {
    match &record.outcome {
        Ok(r) => Fields {
            fidelity: outputs.fidelity.then_some(r.fidelity),
            residual: outputs.residual.then_some(r.residual_energy),
            tts: outputs.tts.then_some(r.tts),
            norm_drift: r.diagnostics.norm_drift,
            steps: Some(r.diagnostics.steps),
        },
        Err(Error::Integration { norm_drift, steps, .. }) => Fields {
            fidelity: outputs.fidelity.then_some(f64::NAN),
            residual: outputs.residual.then_some(f64::NAN),
            tts: outputs.tts.then_some(f64::NAN),
            norm_drift: *norm_drift,
            steps: Some(*steps),
        },
        Err(_) => Fields {
            fidelity: outputs.fidelity.then_some(f64::NAN),
            residual: outputs.residual.then_some(f64::NAN),
            tts: outputs.tts.then_some(f64::NAN),
            norm_drift: f64::NAN,
            steps: None,
        },
    }
}

/// Disabled outputs leave their CSV column empty and are omitted from JSON.
/// Failed cells carry `nan` values (`null` in JSON) and an `error` key.
pub fn render(records: &[Record], outputs: &OutputsSection, format: Format) -> String {
    let mut out = String::new();
    if format == Format::Csv {
        out.push_str(CSV_HEADER);
        out.push('\n');
    }
    for record in records {
        let c = &record.cell;
        let f = fields(record, outputs);
        match format {
            Format::Csv => {
                let opt = |v: Option<f64>| v.map(num).unwrap_or_default();
                let _ = writeln!(
                    out,
                    "{},{},{},{},{},{},{},{},{},{}",
                    c.protocol.protocol,
                    c.protocol.effective_frame(),
                    c.protocol.model.sites(),
                    num(c.schedule.total_time()),
                    num(c.schedule.gamma_init()),
                    opt(f.fidelity),
                    opt(f.residual),
                    opt(f.tts),
                    num(f.norm_drift),
                    f.steps.map(|s| s.to_string()).unwrap_or_else(|| "nan".into()),
                );
            }
            Format::Json => {
                let mut m = Map::new();
                m.insert("protocol".into(), json!(c.protocol.protocol.label()));
                m.insert("frame".into(), json!(c.protocol.effective_frame().label()));
                m.insert("N".into(), json!(c.protocol.model.sites()));
                m.insert("tau".into(), json_num(c.schedule.total_time()));
                m.insert("gamma_init".into(), json_num(c.schedule.gamma_init()));
                if let Some(v) = f.fidelity {
                    m.insert("fidelity".into(), json_num(v));
                }
                if let Some(v) = f.residual {
                    m.insert("residual_energy".into(), json_num(v));
                }
                if let Some(v) = f.tts {
                    m.insert("tts".into(), json_num(v));
                }
                m.insert("norm_drift".into(), json_num(f.norm_drift));
                m.insert("steps".into(), f.steps.map_or(Value::Null, |s| json!(s)));
                if let Err(e) = &record.outcome {
                    m.insert("error".into(), json!(e.to_string()));
                }
                out.push_str(&Value::Object(m).to_string());
                out.push('\n');
            }
        }
    }
    out
}

/// One stderr line per failed cell.
pub fn failure_messages(records: &[Record]) -> Vec<String> {
    records
        .iter()
        .filter_map(|r| {
            r.outcome.as_ref().err().map(|e| {
                format!(
                    "cell protocol={} N={} tau={} failed: {e}",
                    r.cell.protocol.protocol,
                    r.cell.protocol.model.sites(),
                    r.cell.schedule.total_time()
                )
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(text: &str) -> RunConfig {
        RunConfig::from_json(text).unwrap()
    }

    #[test]
    fn csv_shape_and_determinism() {
        let cfg = config(r#"{"model": {"pspin": {"N": 3}}, "protocol": ["cd2", "qa"], "tau": [0.5, 0.1],
                             "integrator": {"method": "magnus4", "steps": 200}}"#);
        let a = render(&execute_config(&cfg, 2).unwrap(), &cfg.outputs, Format::Csv);
        let b = render(&execute_config(&cfg, 1).unwrap(), &cfg.outputs, Format::Csv);
        assert_eq!(a, b);
        let lines: Vec<&str> = a.lines().collect();
        assert_eq!(lines[0], CSV_HEADER);
        assert_eq!(lines.len(), 5);
        assert!(lines[1].starts_with("qa,lab,3,1.0000000000000001e-1,"), "{}", lines[1]);
        assert!(lines[3].starts_with("cd2,lab,3,1.0000000000000001e-1,"), "{}", lines[3]);
        assert!(lines.iter().skip(1).all(|l| l.split(',').count() == 10));
    }

    #[test]
    fn json_lines_round_trip() {
        let cfg = config(r#"{"model": {"lz": {"h": 0.1}}, "protocol": "cd1", "tau": 1,
                             "outputs": {"residual": false}}"#);
        let text = render(&execute_config(&cfg, 1).unwrap(), &cfg.outputs, Format::Json);
        let v: Value = serde_json::from_str(text.trim()).unwrap();
        assert_eq!(v["protocol"], "cd1");
        assert_eq!(v["N"], 1);
        assert!(v.get("residual_energy").is_none());
        assert!((v["fidelity"].as_f64().unwrap() - 1.0).abs() < 1e-6);
    }

    #[test]
    fn failed_cell_is_marked() {
        let cfg = config(r#"{"model": {"pspin": {"N": 6}}, "protocol": "qa", "tau": 50,
                             "integrator": {"method": "rk4", "steps": 100, "norm_tolerance": 1e-12}}"#);
        let records = execute_config(&cfg, 1).unwrap();
        assert!(records[0].failed());
        let csv = render(&records, &cfg.outputs, Format::Csv);
        assert!(csv.lines().nth(1).unwrap().contains("nan"));
        assert_eq!(failure_messages(&records).len(), 1);
    }
}
