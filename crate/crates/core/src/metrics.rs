//! Fidelity, residual energy, time to solution and spectrum occupations.

use serde::{Deserialize, Serialize};

use crate::dynamics::{evolve_sampled, Diagnostics, IntegratorConfig, StateVector};
use crate::error::{Error, Result};
use crate::linalg::{eigh, expectation, CMatrix};
use crate::model::TimeDependentHamiltonian;

pub const DEFAULT_SUCCESS_PROBABILITY: f64 = 0.99;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub tau: f64,
    /// `F = |⟨ψ(τ)|φ₀⟩|²`.
    pub fidelity: f64,
    /// `1 − F`, computed from the orthogonal component to keep precision
    /// when F is close to one.
    pub infidelity: f64,
    /// `⟨ψ(τ)|Hp|ψ(τ)⟩ − E₀`.
    pub residual_energy: f64,
    /// Time to solution; `+∞` when F = 0, never below τ.
    pub tts: f64,
    pub success_probability: f64,
    pub final_energy: f64,
    pub ground_energy: f64,
    pub diagnostics: Diagnostics,
}

fn same_basis(a: &StateVector, b: &StateVector) -> Result<()> {
    if a.basis != b.basis || a.dim() != b.dim() {
        return Err(Error::BasisMismatch {
            left: a.basis.to_string(),
            right: b.basis.to_string(),
        });
    }
    Ok(())
}

/// `|⟨ψ|φ⟩|²`.
pub fn fidelity(psi: &StateVector, phi: &StateVector) -> Result<f64> {
    same_basis(psi, phi)?;
    Ok(phi.amplitudes.dotc(&psi.amplitudes).norm_sqr())
}

/// `‖ψ − ⟨φ|ψ⟩φ‖²`, equal to `1 − F` for unit vectors.
pub fn infidelity(psi: &StateVector, phi: &StateVector) -> Result<f64> {
    same_basis(psi, phi)?;
    let overlap = phi.amplitudes.dotc(&psi.amplitudes);
    Ok((&psi.amplitudes - &phi.amplitudes * overlap).norm_squared())
}

/// `⟨ψ|Hp|ψ⟩ − E₀`.
pub fn residual_energy(psi: &StateVector, problem: &CMatrix, ground_energy: f64) -> f64 {
    expectation(problem, &psi.amplitudes) - ground_energy
}

/// Time to solution `τ·R` with `R = ln(1 − p_r) / ln(1 − F)` repetitions.
///
/// `R` is floored at one run, so `F ≥ p_r` (including F = 1) gives τ.
/// F = 0 gives `+∞`.
pub fn tts(tau: f64, fidelity: f64, success_probability: f64) -> f64 {
    tts_from_infidelity(tau, 1.0 - fidelity, success_probability)
}

/// [`tts`] parametrised by `1 − F` directly.
pub fn tts_from_infidelity(tau: f64, infidelity: f64, success_probability: f64) -> f64 {
    tau * repetitions(infidelity, success_probability)
}

/// `max(1, ln(1 − p_r) / ln(1 − F))`, `+∞` when F = 0.
pub fn repetitions(infidelity: f64, success_probability: f64) -> f64 {
    if infidelity >= 1.0 {
        return f64::INFINITY;
    }
    if infidelity <= 0.0 {
        return 1.0;
    }
    ((-success_probability).ln_1p() / infidelity.ln()).max(1.0)
}

/// One sample of the instantaneous spectrum and its occupations.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumSample {
    pub time: f64,
    pub eigenvalues: Vec<f64>,
    /// `|⟨e_n(t)|ψ(t)⟩|²`, same order as `eigenvalues`.
    pub occupations: Vec<f64>,
}

/// Diagonalises `H(t)` at each sample and projects the matching state.
pub fn spectrum_occupations(
    h: &dyn TimeDependentHamiltonian,
    trajectory: &[StateVector],
    sample_times: &[f64],
) -> Result<Vec<SpectrumSample>> {
    if trajectory.len() != sample_times.len() {
        return Err(Error::InvalidParameter(format!(
            "{} states for {} sample times",
            trajectory.len(),
            sample_times.len()
        )));
    }
    sample_times
        .iter()
        .zip(trajectory)
        .map(|(&t, psi)| {
            let (values, vectors) = eigh(&h.matrix(t)?);
            let coeffs = vectors.ad_mul(&psi.amplitudes);
            Ok(SpectrumSample {
                time: t,
                eigenvalues: values,
                occupations: coeffs.iter().map(|c| c.norm_sqr()).collect(),
            })
        })
        .collect()
}

/// Evolves from the ground state of `H(0)` and records the spectrum at
/// `samples` evenly spaced times including both ends.
pub fn spectrum_trace(
    h: &dyn TimeDependentHamiltonian,
    psi0: &StateVector,
    samples: usize,
    cfg: &IntegratorConfig,
) -> Result<(Vec<SpectrumSample>, Diagnostics)> {
    if samples < 2 {
        return Err(Error::InvalidParameter(format!("need at least 2 spectrum samples, got {samples}")));
    }
    let tau = h.total_time();
    let times: Vec<f64> = (0..samples)
        .map(|k| if k + 1 == samples { tau } else { tau * k as f64 / (samples - 1) as f64 })
        .collect();
    let (states, diagnostics) = evolve_sampled(h, psi0, &times, cfg)?;
    Ok((spectrum_occupations(h, &states, &times)?, diagnostics))
}
