//! Time-to-solution tables built from a τ sweep.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::records::{num, Record};
use crate::model::Protocol;

/// τ at or below which the short-time minimum is taken.
pub const SHORT_TIME_MAX_TAU: f64 = 1.0;
/// τ at or above which long-time local minima are reported.
pub const LONG_TIME_MIN_TAU: f64 = 10.0;
/// Fidelities below this make the repetition count numerically meaningless.
pub const MIN_RESOLVED_FIDELITY: f64 = 1e-8;
/// Largest accepted step-doubling change relative to F.
pub const MAX_RELATIVE_CONVERGENCE_DELTA: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub tau: f64,
    pub fidelity: f64,
    pub tts: f64,
    pub precision_warning: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    pub protocol: Protocol,
    pub n: usize,
    /// Ascending in τ. Failed cells have NaN entries.
    pub points: Vec<CurvePoint>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShortTimeMinimum {
    pub tau: f64,
    pub tts: f64,
    /// The minimum sits on the edge of the τ ≤ 1 window.
    pub boundary: bool,
}

fn precision_warning(record: &Record) -> bool {
    match record.result() {
        None => true,
        Some(r) => {
            r.fidelity < MIN_RESOLVED_FIDELITY
                || r.diagnostics
                    .convergence_delta
                    .is_some_and(|d| d > MAX_RELATIVE_CONVERGENCE_DELTA * r.fidelity)
        }
    }
}

/// Groups records by (protocol, N); records must already be sorted.
pub fn curves(records: &[Record]) -> Vec<Curve> {
    let mut groups: BTreeMap<(Protocol, usize), Vec<CurvePoint>> = BTreeMap::new();
    for r in records {
        let key = (r.cell.protocol.protocol, r.cell.protocol.model.sites());
        let (fidelity, tts) = r.result().map_or((f64::NAN, f64::NAN), |x| (x.fidelity, x.tts));
        groups.entry(key).or_default().push(CurvePoint {
            tau: r.cell.schedule.total_time(),
            fidelity,
            tts,
            precision_warning: precision_warning(r),
        });
    }
    groups
        .into_iter()
        .map(|((protocol, n), mut points)| {
            points.sort_by(|a, b| a.tau.total_cmp(&b.tau));
            Curve { protocol, n, points }
        })
        .collect()
}

impl Curve {
    /// Global minimum of TTS over τ ≤ 1; NaN cells are skipped.
    pub fn short_time_minimum(&self) -> Option<ShortTimeMinimum> {
        let window: Vec<&CurvePoint> = self.points.iter().filter(|p| p.tau <= SHORT_TIME_MAX_TAU).collect();
        let (k, best) = window
            .iter()
            .enumerate()
            .filter(|(_, p)| !p.tts.is_nan())
            .min_by(|a, b| a.1.tts.total_cmp(&b.1.tts))?;
        Some(ShortTimeMinimum {
            tau: best.tau,
            tts: best.tts,
            boundary: k == 0 || k + 1 == window.len(),
        })
    }

    /// Interior grid points with τ ≥ 10 whose TTS is strictly below the left
    /// neighbour and no larger than the right one.
    pub fn long_time_minima(&self) -> Vec<CurvePoint> {
        self.points
            .windows(3)
            .filter(|w| w[1].tau >= LONG_TIME_MIN_TAU && w[1].tts < w[0].tts && w[1].tts <= w[2].tts)
            .map(|w| w[1])
            .collect()
    }
}

/// The three tables, keyed by name, as CSV text.
pub fn tables(curves: &[Curve]) -> Vec<(&'static str, String)> {
    let mut curve = String::from("protocol,N,tau,fidelity,tts,precision_warning\n");
    let mut short = String::from("protocol,N,tau,tts,boundary\n");
    let mut long = String::from("protocol,N,tau,tts,precision_warning\n");
    for c in curves {
        for p in &c.points {
            let _ = writeln!(curve, "{},{},{},{},{},{}", c.protocol, c.n, num(p.tau), num(p.fidelity), num(p.tts), p.precision_warning);
        }
        if let Some(m) = c.short_time_minimum() {
            let _ = writeln!(short, "{},{},{},{},{}", c.protocol, c.n, num(m.tau), num(m.tts), m.boundary);
        }
        for p in c.long_time_minima() {
            let _ = writeln!(long, "{},{},{},{},{}", c.protocol, c.n, num(p.tau), num(p.tts), p.precision_warning);
        }
    }
    vec![("tts_curve", curve), ("short_time_minimum", short), ("long_time_minimum", long)]
}
