//! Instantaneous spectrum and occupation table for a single cell.

use std::fmt::Write as _;

use super::config::RunConfig;
use super::records::num;
use crate::dynamics::{ground_state, Basis, StateVector};
use crate::error::{Error, Result};
use crate::metrics::{spectrum_trace, SpectrumSample};
use crate::model::{Hamiltonian, TimeDependentHamiltonian};

pub const DEFAULT_SAMPLES: usize = 11;
pub const HEADER: &str = "t_over_tau,index,eigenvalue,occupation";

/// Samples from `outputs.spectrum.samples`, else [`DEFAULT_SAMPLES`].
pub fn compute(cfg: &RunConfig) -> Result<Vec<SpectrumSample>> {
    let cells = cfg.cells()?;
    let [cell] = cells.as_slice() else {
        return Err(Error::Config(format!("spectrum needs exactly one (protocol, N, tau) cell, got {}", cells.len())));
    };
    let samples = cfg.outputs.spectrum.as_ref().map_or(DEFAULT_SAMPLES, |s| s.samples);
    let h = Hamiltonian::new(cell.schedule, cell.protocol)?;
    let psi0 = StateVector::new(ground_state(&h.matrix(0.0)?)?.state, Basis::for_model(cell.protocol.model))?;
    let (trace, _) = spectrum_trace(&h, &psi0, samples, &cfg.integrator.to_config()?)?;
    Ok(trace)
}

pub fn render(trace: &[SpectrumSample], tau: f64) -> String {
    let mut out = format!("{HEADER}\n");
    for s in trace {
        for (k, (e, p)) in s.eigenvalues.iter().zip(&s.occupations).enumerate() {
            let _ = writeln!(out, "{},{k},{},{}", num(s.time / tau), num(*e), num(*p));
        }
    }
    out
}
