//! Oracle-backed self-checks over N ∈ {2, 3, 4}.

use crate::dynamics::{run_protocol, IntegratorConfig};
use crate::error::Result;
use crate::gauge;
use crate::model::{Frame, Model, Protocol, ProtocolSpec};
use crate::oracle::{self, Driving, FullSpaceOperators};
use crate::schedules::ScheduleSpec;

pub const SIZES: [usize; 3] = [2, 3, 4];
/// Deterministic (λ, γ) probe points.
pub const PROBES: [(f64, f64); 4] = [(0.2, 0.3), (0.5, 0.6), (0.8, 0.9), (0.35, 1.4)];

const SUBSPACE_TOL: f64 = 1e-8;
const FRAME_TOL: f64 = 1e-6;
const CASIMIR_TOL: f64 = 1e-10;
const GRADIENT_REL_TOL: f64 = 1e-6;
const MINIMIZER_TOL: f64 = 1e-6;
const DUAL_PATH_TOL: f64 = 1e-12;
const TRACE_REL_TOL: f64 = 1e-9;

/// `(λ, γ, N) → (α, β)`; the closed forms in normal use.
pub type CoefficientFn<'a> = &'a dyn Fn(f64, f64, usize) -> Result<(f64, f64)>;

pub fn closed_form(lambda: f64, gamma: f64, n: usize) -> Result<(f64, f64)> {
    let c = gauge::pspin_coefficients(lambda, gamma, n)?;
    Ok((c.alpha, c.beta))
}

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: &'static str,
    pub n: usize,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn check<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a Check> {
        self.checks.iter().filter(move |c| c.name == name)
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!("{} {:<18} N={} {}\n", if c.passed { "PASS" } else { "FAIL" }, c.name, c.n, c.detail));
        }
        let failed = self.checks.iter().filter(|c| !c.passed).count();
        out.push_str(&format!("{} checks, {} failed\n", self.checks.len(), failed));
        out
    }

    fn push(&mut self, name: &'static str, n: usize, outcome: Result<(bool, String)>) {
        let (passed, detail) = outcome.unwrap_or_else(|e| (false, format!("error: {e}")));
        self.checks.push(Check { name, n, passed, detail });
    }
}

/// Runs every check with the closed-form coefficients.
pub fn run() -> Report {
    run_with(&closed_form)
}

/// Runs every check, taking the gauge coefficients used by the stationarity
/// check from `coefficients`.
pub fn run_with(coefficients: CoefficientFn) -> Report {
    let mut report = Report::default();
    for n in SIZES {
        report.push("subspace", n, subspace(n));
        report.push("frame", n, frame(n));
        report.push("casimir", n, casimir(n));
        report.push("stationarity", n, stationarity(n, coefficients));
        report.push("minimizer", n, minimizer(n));
        report.push("dual_path_g", n, dual_path(n));
        report.push("trace", n, trace(n));
    }
    report
}

fn schedule(protocol: Protocol, n: usize, tau: f64) -> Result<ScheduleSpec> {
    ScheduleSpec::new(tau, protocol.default_gamma_mode(Model::PSpin { n }), 0.1)
}

fn subspace(n: usize) -> Result<(bool, String)> {
    let cfg = IntegratorConfig::default();
    let mut worst: f64 = 0.0;
    for protocol in Protocol::ALL {
        for frame in [Frame::Lab, Frame::Rotated] {
            let spec = schedule(protocol, n, 1.0)?;
            let p = ProtocolSpec::new(protocol, frame, Model::PSpin { n });
            let sub = run_protocol(&spec, &p, &cfg)?;
            let full = oracle::full_space_evolve(&spec, &p, &cfg)?;
            worst = worst
                .max((sub.fidelity - full.fidelity).abs())
                .max((sub.residual_energy - full.residual_energy).abs());
        }
    }
    Ok((worst < SUBSPACE_TOL, format!("max |dF|, |dE| = {worst:.3e}")))
}

fn frame(n: usize) -> Result<(bool, String)> {
    let cfg = IntegratorConfig::default();
    let mut worst: f64 = 0.0;
    for tau in [1.0, 10.0] {
        let spec = schedule(Protocol::TwoParamCd, n, tau)?;
        let lab = run_protocol(&spec, &ProtocolSpec::new(Protocol::TwoParamCd, Frame::Lab, Model::PSpin { n }), &cfg)?;
        let rot = run_protocol(&spec, &ProtocolSpec::new(Protocol::TwoParamCd, Frame::Rotated, Model::PSpin { n }), &cfg)?;
        worst = worst
            .max((lab.fidelity - rot.fidelity).abs())
            .max((lab.residual_energy - rot.residual_energy).abs());
    }
    Ok((worst < FRAME_TOL, format!("max |dF|, |dE| = {worst:.3e}")))
}

fn casimir(n: usize) -> Result<(bool, String)> {
    let ops = FullSpaceOperators::new(n)?;
    let c = ops.casimir();
    let spec = schedule(Protocol::TwoParamCd, n, 1.0)?;
    let lab = ProtocolSpec::new(Protocol::TwoParamCd, Frame::Lab, Model::PSpin { n });
    let mut worst: f64 = 0.0;
    for t in [0.0, 0.3, 0.7, 1.0] {
        for h in [
            oracle::full_h0(t, &spec, &ops)?,
            oracle::full_h_lab_cd(t, &spec, &lab, &ops)?,
            oracle::full_h_rotated(t, &spec, &ops)?,
        ] {
            worst = worst.max(oracle::commutator_norm(&h, &c));
        }
    }
    Ok((worst < CASIMIR_TOL, format!("max ||[H, C]|| = {worst:.3e}")))
}

/// Central-difference gradient at the supplied coefficients, plus a
/// positive-definite Hessian.
fn stationarity(n: usize, coefficients: CoefficientFn) -> Result<(bool, String)> {
    let ops = FullSpaceOperators::new(n)?;
    let d = 1e-3;
    let mut worst_gradient: f64 = 0.0;
    let mut convex = true;
    for (lambda, gamma) in PROBES {
        let (a, b) = coefficients(lambda, gamma, n)?;
        let s = |x: f64, y: f64| oracle::action_trace(lambda, gamma, x, y, &ops);
        let s0 = s(a, b)?;
        let (sap, sam) = (s(a + d, b)?, s(a - d, b)?);
        let (sbp, sbm) = (s(a, b + d)?, s(a, b - d)?);
        let ga = (sap - sam) / (2.0 * d);
        let gb = (sbp - sbm) / (2.0 * d);
        worst_gradient = worst_gradient.max(ga.hypot(gb) / s0.abs());
        let haa = (sap - 2.0 * s0 + sam) / (d * d);
        let hbb = (sbp - 2.0 * s0 + sbm) / (d * d);
        let hab = (s(a + d, b + d)? - s(a + d, b - d)? - s(a - d, b + d)? + s(a - d, b - d)?) / (4.0 * d * d);
        convex &= haa > 0.0 && hbb > 0.0 && haa * hbb - hab * hab > 0.0;
    }
    Ok((
        worst_gradient < GRADIENT_REL_TOL && convex,
        format!("max |grad S|/|S| = {worst_gradient:.3e}, convex = {convex}"),
    ))
}

/// Nelder–Mead on the explicit matrix trace, from the origin, lands on the
/// closed form.
fn minimizer(n: usize) -> Result<(bool, String)> {
    let ops = FullSpaceOperators::new(n)?;
    let mut worst: f64 = 0.0;
    for (lambda, gamma) in PROBES {
        let (a, b) = closed_form(lambda, gamma, n)?;
        let f = |p: [f64; 2]| oracle::action_trace(lambda, gamma, p[0], p[1], &ops).unwrap_or(f64::INFINITY);
        let (best, _) = oracle::nelder_mead_2d(f, [0.0, 0.0], 0.5, 1e-15, 5000);
        worst = worst.max((best[0] - a).abs()).max((best[1] - b).abs());
    }
    Ok((worst < MINIMIZER_TOL, format!("max |(a, b) - closed form| = {worst:.3e}")))
}

fn dual_path(n: usize) -> Result<(bool, String)> {
    let ops = FullSpaceOperators::new(n)?;
    let mut worst: f64 = 0.0;
    for (lambda, gamma) in PROBES {
        for (coeff, which) in [(0.37, Driving::Lambda), (-0.81, Driving::Gamma), (0.0, Driving::Lambda)] {
            let a = oracle::hermitian_g(lambda, gamma, coeff, which, &ops)?;
            let b = oracle::hermitian_g_expanded(lambda, gamma, coeff, which, &ops)?;
            worst = (a - b).iter().map(|z| z.norm()).fold(worst, f64::max);
        }
    }
    Ok((worst < DUAL_PATH_TOL, format!("max entry difference = {worst:.3e}")))
}

fn trace(n: usize) -> Result<(bool, String)> {
    let ops = FullSpaceOperators::new(n)?;
    let mut worst: f64 = 0.0;
    for (lambda, gamma) in PROBES {
        for (alpha, beta) in [(0.0, 0.0), (0.4, -0.7)] {
            let explicit = oracle::action_trace(lambda, gamma, alpha, beta, &ops)?;
            let closed = oracle::action_closed_form(lambda, gamma, alpha, beta, n);
            worst = worst.max((explicit - closed).abs() / explicit.abs());
        }
    }
    Ok((worst < TRACE_REL_TOL, format!("max relative difference = {worst:.3e}")))
}
