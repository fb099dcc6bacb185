//! Fidelity and residual energy of the three protocols on the p-spin model.
//!
//! `cargo run --release --example protocol_comparison -- [N] [tau]`
//! (defaults N = 30, tau = 300).

use cdqa::{run_protocol, Frame, IntegratorConfig, Method, Model, Protocol, ProtocolSpec, ScheduleSpec};

fn main() -> cdqa::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(30, |s| s.parse().expect("N must be an integer"));
    let tau: f64 = args.next().map_or(300.0, |s| s.parse().expect("tau must be a number"));
    let model = Model::PSpin { n };
    let cfg = IntegratorConfig::with_method(Method::Magnus4);

    println!("N = {n}, tau = {tau}, gamma_init = 0.1");
    println!("{:>4} {:>20} {:>20} {:>20} {:>8}", "", "fidelity", "residual energy", "TTS", "steps");
    for protocol in Protocol::ALL {
        let spec = ScheduleSpec::new(tau, protocol.default_gamma_mode(model), 0.1)?;
        let r = run_protocol(&spec, &ProtocolSpec::new(protocol, Frame::Lab, model), &cfg)?;
        println!(
            "{:>4} {:>20.12} {:>20.12e} {:>20.12e} {:>8}",
            protocol, r.fidelity, r.residual_energy, r.tts, r.diagnostics.steps
        );
    }
    Ok(())
}
