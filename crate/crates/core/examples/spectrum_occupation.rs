//! Occupations of the instantaneous eigenstates during an anneal.
//!
//! Traditional annealing leaks out of the ground state around the minimum
//! gap; two-parameter CD keeps the weight in the lowest levels.
//!
//! `cargo run --release --example spectrum_occupation -- [N] [tau]`

use cdqa::metrics::spectrum_trace;
use cdqa::model::TimeDependentHamiltonian;
use cdqa::{ground_state, Basis, Frame, Hamiltonian, IntegratorConfig, Method, Model, Protocol, ProtocolSpec, ScheduleSpec, StateVector};

fn main() -> cdqa::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(30, |s| s.parse().expect("N must be an integer"));
    let tau: f64 = args.next().map_or(300.0, |s| s.parse().expect("tau must be a number"));
    let model = Model::PSpin { n };
    let cfg = IntegratorConfig::with_method(Method::Magnus4);

    for protocol in Protocol::ALL {
        let spec = ScheduleSpec::new(tau, protocol.default_gamma_mode(model), 0.1)?;
        let h = Hamiltonian::new(spec, ProtocolSpec::new(protocol, Frame::Lab, model))?;
        let psi0 = StateVector::new(ground_state(&h.matrix(0.0)?)?.state, Basis::for_model(model))?;
        let (trace, _) = spectrum_trace(&h, &psi0, 11, &cfg)?;
        println!("{protocol}: t/tau, ground occupation, most occupied level (occupation)");
        for s in &trace {
            let (level, top) = s
                .occupations
                .iter()
                .enumerate()
                .max_by(|a, b| a.1.total_cmp(b.1))
                .expect("non-empty spectrum");
            println!("  {:.1}  {:.6}  {level:>2} ({top:.4})", s.time / tau, s.occupations[0]);
        }
    }
    Ok(())
}
