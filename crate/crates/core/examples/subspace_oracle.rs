//! Symmetric-subspace dynamics against the full 2^N Hilbert space.

use cdqa::oracle::full_space_evolve;
use cdqa::{run_protocol, Frame, IntegratorConfig, Model, Protocol, ProtocolSpec, ScheduleSpec};

fn main() -> cdqa::Result<()> {
    let cfg = IntegratorConfig::default();
    for n in [2, 4, 6] {
        let model = Model::PSpin { n };
        for protocol in Protocol::ALL {
            let spec = ScheduleSpec::new(1.0, protocol.default_gamma_mode(model), 0.1)?;
            let p = ProtocolSpec::new(protocol, Frame::Lab, model);
            let sub = run_protocol(&spec, &p, &cfg)?;
            let full = full_space_evolve(&spec, &p, &cfg)?;
            println!(
                "N = {n}, {protocol:>3}: F = {:.12} (subspace) {:.12} (full), |dE| = {:.1e}",
                sub.fidelity,
                full.fidelity,
                (sub.residual_energy - full.residual_energy).abs()
            );
        }
    }
    Ok(())
}
