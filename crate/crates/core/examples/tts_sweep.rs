//! Time-to-solution over a log-spaced τ grid, with the short-time minimum
//! (τ ≤ 1) and long-time local minima (τ ≥ 10) per protocol.
//!
//! `cargo run --release --example tts_sweep -- [N] [points]`
//! (defaults N = 12, 17 points from 0.1 to 1e4).

use cdqa::cli::config::{log_grid, Cell};
use cdqa::cli::{records, sweep};
use cdqa::{Frame, IntegratorConfig, Method, Model, Protocol, ProtocolSpec, ScheduleSpec};

fn main() -> cdqa::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(12, |s| s.parse().expect("N must be an integer"));
    let points: usize = args.next().map_or(17, |s| s.parse().expect("points must be an integer"));
    let model = Model::PSpin { n };

    let mut cells = Vec::new();
    for protocol in Protocol::ALL {
        for &tau in &log_grid(0.1, 1e4, points)? {
            cells.push(Cell {
                schedule: ScheduleSpec::new(tau, protocol.default_gamma_mode(model), 0.1)?,
                protocol: ProtocolSpec::new(protocol, Frame::Lab, model),
            });
        }
    }
    let jobs = std::thread::available_parallelism().map_or(1, |j| j.get());
    let records = records::execute(&cells, &IntegratorConfig::with_method(Method::Magnus4), 0.99, jobs)?;

    for curve in sweep::curves(&records) {
        println!("{} N = {}", curve.protocol, curve.n);
        for p in &curve.points {
            let flag = if p.precision_warning { "  (low precision)" } else { "" };
            println!("  tau = {:>10.4e}  F = {:.6e}  TTS = {:.6e}{flag}", p.tau, p.fidelity, p.tts);
        }
        if let Some(m) = curve.short_time_minimum() {
            println!("  short-time minimum: TTS = {:.4e} at tau = {:.4e}{}", m.tts, m.tau, if m.boundary { " (boundary)" } else { "" });
        }
        for m in curve.long_time_minima() {
            println!("  long-time local minimum: TTS = {:.4e} at tau = {:.4e}", m.tts, m.tau);
        }
    }
    Ok(())
}
