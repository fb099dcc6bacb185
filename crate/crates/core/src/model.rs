//! Hamiltonian construction.
//!
//! p-spin matrices live in the (N+1)-dimensional maximal-spin sector, basis
//! index `k` holding `k` flipped spins, so index 0 is the all-up state and
//! `Mz = diag(N, N−2, …, −N)`. The Landau–Zener model uses bare 2×2 Pauli
//! matrices with the same ordering.

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gauge;
use crate::linalg::{real_diagonal, CMatrix, Tridiagonal, I};
use crate::schedules::{GammaMode, ScheduleSpec, ScheduleValues};

/// Below this value of X² + Y² the rotation angle is treated as undefined.
pub const DEGENERATE_RADIUS_SQ: f64 = 1e-12;

/// Largest p-spin size accepted by [`CollectiveOperators::new`].
pub const MAX_COLLECTIVE_N: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Model {
    /// p = 3 p-spin model on `n` sites.
    PSpin { n: usize },
    /// Single-qubit avoided crossing with longitudinal field `h`.
    LandauZener { h: f64 },
}

impl Model {
    /// Number of sites (1 for Landau–Zener).
    pub fn sites(&self) -> usize {
        match *self {
            Model::PSpin { n } => n,
            Model::LandauZener { .. } => 1,
        }
    }

    pub fn dim(&self) -> usize {
        self.sites() + 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Protocol {
    #[serde(rename = "qa")]
    TraditionalQa,
    #[serde(rename = "cd1")]
    SingleParamCd,
    #[serde(rename = "cd2")]
    TwoParamCd,
}

impl Protocol {
    pub const ALL: [Protocol; 3] = [Protocol::TraditionalQa, Protocol::SingleParamCd, Protocol::TwoParamCd];

    pub fn label(&self) -> &'static str {
        match self {
            Protocol::TraditionalQa => "qa",
            Protocol::SingleParamCd => "cd1",
            Protocol::TwoParamCd => "cd2",
        }
    }

    pub fn is_cd(&self) -> bool {
        !matches!(self, Protocol::TraditionalQa)
    }

    /// γ mode a protocol runs with by default for the given model.
    pub fn default_gamma_mode(&self, model: Model) -> GammaMode {
        match (self, model) {
            (Protocol::TwoParamCd, Model::PSpin { .. }) => GammaMode::LinkedPSpin,
            (Protocol::TwoParamCd, Model::LandauZener { .. }) => GammaMode::LinkedLz,
            _ => GammaMode::Constant,
        }
    }
}

impl fmt::Display for Protocol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Frame {
    Lab,
    Rotated,
}

impl Frame {
    pub fn label(&self) -> &'static str {
        match self {
            Frame::Lab => "lab",
            Frame::Rotated => "rotated",
        }
    }
}

impl fmt::Display for Frame {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProtocolSpec {
    pub protocol: Protocol,
    pub frame: Frame,
    pub model: Model,
}

impl ProtocolSpec {
    pub fn new(protocol: Protocol, frame: Frame, model: Model) -> Self {
        Self { protocol, frame, model }
    }

    /// Frame actually simulated: traditional annealing has no CD term to
    /// rotate away, so it always runs in the lab frame.
    pub fn effective_frame(&self) -> Frame {
        if self.protocol.is_cd() {
            self.frame
        } else {
            Frame::Lab
        }
    }

    /// Checks the protocol/schedule pairing and the model parameters.
    pub fn validate(&self, spec: &ScheduleSpec) -> Result<()> {
        match self.model {
            Model::PSpin { n } if n < 2 => {
                return Err(Error::InvalidParameter(format!("p-spin model needs N >= 2, got {n}")))
            }
            Model::LandauZener { h } if !(h.is_finite() && h != 0.0) => {
                return Err(Error::InvalidParameter(format!(
                    "Landau-Zener field h must be finite and nonzero, got {h}"
                )))
            }
            _ => {}
        }
        match (self.protocol, spec.gamma_mode()) {
            (Protocol::SingleParamCd, GammaMode::Constant) => Ok(()),
            (Protocol::SingleParamCd, mode) => Err(Error::InvalidParameter(format!(
                "single-parameter CD needs a constant gamma, got {mode:?}"
            ))),
            (Protocol::TwoParamCd, GammaMode::Constant) => Err(Error::InvalidParameter(
                "two-parameter CD needs a linked gamma schedule".into(),
            )),
            _ => Ok(()),
        }
    }
}

/// Collective spin operators on the maximal-spin sector of `n` spins-½.
#[derive(Debug, Clone)]
pub struct CollectiveOperators {
    n: usize,
    /// Σσˣ
    pub mx: CMatrix,
    /// Σσʸ
    pub my: CMatrix,
    /// Σσᶻ
    pub mz: CMatrix,
    /// (Σσᶻ)³
    pub mz3: CMatrix,
    /// Σ_{i<j<k} σᶻσᶻσᶻ = (M³ − (3N−2)M) / 6
    pub three_body: CMatrix,
    bands: Bands,
}

/// Banded copies of the collective operators, for the integrators.
#[derive(Debug, Clone)]
struct Bands {
    mx: Tridiagonal,
    my: Tridiagonal,
    mz: Tridiagonal,
    mz3: Tridiagonal,
    three_body: Tridiagonal,
}

impl CollectiveOperators {
    pub fn new(n: usize) -> Result<Self> {
        if !(2..=MAX_COLLECTIVE_N).contains(&n) {
            return Err(Error::InvalidParameter(format!(
                "collective operators need 2 <= N <= {MAX_COLLECTIVE_N}, got {n}"
            )));
        }
        let dim = n + 1;
        let s = n as f64 / 2.0;
        let m_of = |k: usize| s - k as f64;

        // S⁺|S,m⟩ = √(S(S+1) − m(m+1)) |S,m+1⟩; index k−1 has m one higher.
        let mut raise = CMatrix::zeros(dim, dim);
        for k in 1..dim {
            let m = m_of(k);
            raise[(k - 1, k)] = C64::new((s * (s + 1.0) - m * (m + 1.0)).sqrt(), 0.0);
        }
        let lower = raise.adjoint();
        let mx = &raise + &lower;
        let my = (&raise - &lower) * (-I);

        let mz_diag: Vec<f64> = (0..dim).map(|k| 2.0 * m_of(k)).collect();
        let cube: Vec<f64> = mz_diag.iter().map(|&v| v * v * v).collect();
        let w = 3.0 * n as f64 - 2.0;
        let triple: Vec<f64> = mz_diag.iter().map(|&v| (v * v * v - w * v) / 6.0).collect();

        let mz = real_diagonal(&mz_diag);
        let mz3 = real_diagonal(&cube);
        let three_body = real_diagonal(&triple);
        let band = |m: &CMatrix| Tridiagonal::from_dense(m).expect("collective operators are tridiagonal");
        let bands = Bands {
            mx: band(&mx),
            my: band(&my),
            mz: band(&mz),
            mz3: band(&mz3),
            three_body: band(&three_body),
        };
        Ok(Self {
            n,
            mx,
            my,
            mz,
            mz3,
            three_body,
            bands,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.n + 1
    }

    /// Problem Hamiltonian `−N (Σσᶻ/N)³ = −Mz3/N²`.
    pub fn problem_hamiltonian(&self) -> CMatrix {
        let n2 = (self.n * self.n) as f64;
        &self.mz3 * C64::new(-1.0 / n2, 0.0)
    }
}

/// Rotating-frame bookkeeping: `X = −(1−λ)γ`, `Y = λ̇α + γ̇β`,
/// `θ = atan2(Y, X)`, `θ̇ = (XẎ − YẊ)/(X² + Y²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameCoefficients {
    pub x: f64,
    pub y: f64,
    pub x_dot: f64,
    pub y_dot: f64,
    pub theta: f64,
    pub theta_dot: f64,
    /// `X² + Y²` fell below [`DEGENERATE_RADIUS_SQ`]. Informational: θ̇ is
    /// still evaluated there and only falls back to 0 where `X = Y = 0`.
    pub degenerate: bool,
}

impl FrameCoefficients {
    pub fn radius(&self) -> f64 {
        self.x.hypot(self.y)
    }
}

pub fn frame_coefficients(t: f64, spec: &ScheduleSpec, model: Model) -> Result<FrameCoefficients> {
    let s = spec.evaluate(t)?;
    frame_from_values(model, &s)
}

fn frame_from_values(model: Model, s: &ScheduleValues) -> Result<FrameCoefficients> {
    let x = -s.one_minus_lambda * s.gamma;
    let x_dot = s.lambda_dot * s.gamma - s.one_minus_lambda * s.gamma_dot;
    let y = gauge::y_from_values(model, s)?;
    let y_dot = gauge::y_rate_from_values(model, s)?;
    let r2 = x * x + y * y;
    let degenerate = r2 < DEGENERATE_RADIUS_SQ;
    // θ̇ tends to a finite limit at t = τ, so only the exact 0/0 is special
    let theta_dot = if r2 > 0.0 { (x * y_dot - y * x_dot) / r2 } else { 0.0 };
    Ok(FrameCoefficients {
        x,
        y,
        x_dot,
        y_dot,
        theta: y.atan2(x),
        theta_dot,
        degenerate,
    })
}

fn require_n(ops: &CollectiveOperators, protocol: &ProtocolSpec) -> Result<()> {
    match protocol.model {
        Model::PSpin { n } if n == ops.n => Ok(()),
        other => Err(Error::InvalidParameter(format!(
            "operators built for N={} cannot serve {other:?}",
            ops.n
        ))),
    }
}

fn pspin_h0_from_values(s: &ScheduleValues, ops: &CollectiveOperators) -> CMatrix {
    let n2 = (ops.n * ops.n) as f64;
    &ops.mx * C64::new(-s.one_minus_lambda * s.gamma, 0.0) + &ops.mz3 * C64::new(-s.lambda / n2, 0.0)
}

/// `−(1−λ)γ Mx − (λ/N²) Mz3`.
pub fn h0_pspin(t: f64, spec: &ScheduleSpec, ops: &CollectiveOperators) -> Result<CMatrix> {
    Ok(pspin_h0_from_values(&spec.evaluate(t)?, ops))
}

/// Lab-frame CD Hamiltonian `H0 + Y·My`.
pub fn h_lab_cd(t: f64, spec: &ScheduleSpec, protocol: &ProtocolSpec, ops: &CollectiveOperators) -> Result<CMatrix> {
    require_n(ops, protocol)?;
    if !protocol.protocol.is_cd() {
        return Err(Error::InvalidParameter("lab CD Hamiltonian requested for traditional annealing".into()));
    }
    protocol.validate(spec)?;
    let s = spec.evaluate(t)?;
    let y = gauge::y_from_values(protocol.model, &s)?;
    Ok(pspin_h0_from_values(&s, ops) + &ops.my * C64::new(y, 0.0))
}

/// Rotated-frame Hamiltonian
/// `R·Mx − λ(6/N²)·T − [θ̇/2 + λ(3N−2)/N²]·Mz` with `R = √(X²+Y²)`.
pub fn h_rotated(t: f64, spec: &ScheduleSpec, ops: &CollectiveOperators) -> Result<CMatrix> {
    let s = spec.evaluate(t)?;
    let f = frame_from_values(Model::PSpin { n: ops.n }, &s)?;
    Ok(rotated_from_parts(&s, &f, ops))
}

fn rotated_from_parts(s: &ScheduleValues, f: &FrameCoefficients, ops: &CollectiveOperators) -> CMatrix {
    let nf = ops.n as f64;
    let n2 = nf * nf;
    let x_coef = f.radius();
    let z_coef = -(0.5 * f.theta_dot + s.lambda * (3.0 * nf - 2.0) / n2);
    &ops.mx * C64::new(x_coef, 0.0)
        + &ops.three_body * C64::new(-s.lambda * 6.0 / n2, 0.0)
        + &ops.mz * C64::new(z_coef, 0.0)
}

/// Pauli matrices in the (up, down) basis.
pub fn pauli() -> [CMatrix; 3] {
    let z = C64::new(0.0, 0.0);
    let one = C64::new(1.0, 0.0);
    [
        CMatrix::from_row_slice(2, 2, &[z, one, one, z]),
        CMatrix::from_row_slice(2, 2, &[z, -I, I, z]),
        CMatrix::from_row_slice(2, 2, &[one, z, z, -one]),
    ]
}

/// Landau–Zener Hamiltonian for any protocol and frame.
pub fn h_lz(t: f64, spec: &ScheduleSpec, protocol: &ProtocolSpec) -> Result<CMatrix> {
    let Model::LandauZener { h } = protocol.model else {
        return Err(Error::InvalidParameter("h_lz needs the Landau-Zener model".into()));
    };
    protocol.validate(spec)?;
    let s = spec.evaluate(t)?;
    let [sx, sy, sz] = pauli();
    match (protocol.protocol.is_cd(), protocol.effective_frame()) {
        (false, _) => Ok(lz_h0(&s, h)),
        (true, Frame::Lab) => {
            let y = gauge::y_from_values(protocol.model, &s)?;
            Ok(lz_h0(&s, h) + sy * C64::new(y, 0.0))
        }
        (true, Frame::Rotated) => {
            let f = frame_from_values(protocol.model, &s)?;
            let x_coef = f.radius();
            Ok(sx * C64::new(x_coef, 0.0) + sz * C64::new(-(0.5 * f.theta_dot + h * s.lambda), 0.0))
        }
    }
}

fn lz_h0(s: &ScheduleValues, h: f64) -> CMatrix {
    let [sx, _, sz] = pauli();
    sx * C64::new(-s.one_minus_lambda * s.gamma, 0.0) + sz * C64::new(-s.lambda * h, 0.0)
}

/// A Hamiltonian `H(t)` on `[0, τ]` that the integrators can drive.
pub trait TimeDependentHamiltonian: Sync {
    fn dim(&self) -> usize;
    fn total_time(&self) -> f64;
    fn matrix(&self, t: f64) -> Result<CMatrix>;
    /// Cheap upper bound on the spectral norm of `H(t)`.
    fn norm_bound(&self, t: f64) -> Result<f64>;
    /// `H(t)` in banded form when it is tridiagonal in the working basis.
    fn tridiagonal(&self, _t: f64) -> Result<Option<Tridiagonal>> {
        Ok(None)
    }
}

#[derive(Debug, Clone)]
enum Operators {
    Collective(Arc<CollectiveOperators>),
    TwoLevel,
}

/// `H(t)` for one (schedule, protocol, frame, model) combination.
#[derive(Debug, Clone)]
pub struct Hamiltonian {
    schedule: ScheduleSpec,
    protocol: ProtocolSpec,
    ops: Operators,
}

impl Hamiltonian {
    /// Builds the collective operators itself for p-spin models.
    pub fn new(schedule: ScheduleSpec, protocol: ProtocolSpec) -> Result<Self> {
        protocol.validate(&schedule)?;
        let ops = match protocol.model {
            Model::PSpin { n } => Operators::Collective(Arc::new(CollectiveOperators::new(n)?)),
            Model::LandauZener { .. } => Operators::TwoLevel,
        };
        Ok(Self { schedule, protocol, ops })
    }

    /// Shares an existing operator set.
    pub fn with_operators(schedule: ScheduleSpec, protocol: ProtocolSpec, ops: Arc<CollectiveOperators>) -> Result<Self> {
        protocol.validate(&schedule)?;
        require_n(&ops, &protocol)?;
        Ok(Self {
            schedule,
            protocol,
            ops: Operators::Collective(ops),
        })
    }

    pub fn schedule(&self) -> &ScheduleSpec {
        &self.schedule
    }

    pub fn protocol(&self) -> &ProtocolSpec {
        &self.protocol
    }

    /// The final Hamiltonian `H(τ)`, identical in every protocol and frame.
    pub fn problem_hamiltonian(&self) -> CMatrix {
        match (&self.ops, self.protocol.model) {
            (Operators::Collective(ops), _) => ops.problem_hamiltonian(),
            (Operators::TwoLevel, Model::LandauZener { h }) => pauli()[2].clone() * C64::new(-h, 0.0),
            (Operators::TwoLevel, Model::PSpin { .. }) => unreachable!("p-spin always carries operators"),
        }
    }

    pub fn frame_coefficients(&self, t: f64) -> Result<FrameCoefficients> {
        frame_coefficients(t, &self.schedule, self.protocol.model)
    }
}

/// Coefficients of the collective operators in `H(t)`.
#[derive(Debug, Clone, Copy, Default)]
struct CollectiveTerms {
    mx: f64,
    my: f64,
    mz: f64,
    mz3: f64,
    three_body: f64,
}

impl Hamiltonian {
    fn collective_terms(&self, t: f64, ops: &CollectiveOperators) -> Result<CollectiveTerms> {
        let s = self.schedule.evaluate(t)?;
        let nf = ops.n as f64;
        let n2 = nf * nf;
        Ok(match (self.protocol.protocol.is_cd(), self.protocol.effective_frame()) {
            (false, _) => CollectiveTerms {
                mx: -s.one_minus_lambda * s.gamma,
                mz3: -s.lambda / n2,
                ..Default::default()
            },
            (true, Frame::Lab) => CollectiveTerms {
                mx: -s.one_minus_lambda * s.gamma,
                my: gauge::y_from_values(self.protocol.model, &s)?,
                mz3: -s.lambda / n2,
                ..Default::default()
            },
            (true, Frame::Rotated) => {
                let f = frame_from_values(self.protocol.model, &s)?;
                CollectiveTerms {
                    mx: f.radius(),
                    mz: -(0.5 * f.theta_dot + s.lambda * (3.0 * nf - 2.0) / n2),
                    three_body: -s.lambda * 6.0 / n2,
                    ..Default::default()
                }
            }
        })
    }
}

impl TimeDependentHamiltonian for Hamiltonian {
    fn dim(&self) -> usize {
        self.protocol.model.dim()
    }

    fn total_time(&self) -> f64 {
        self.schedule.total_time()
    }

    fn matrix(&self, t: f64) -> Result<CMatrix> {
        match &self.ops {
            Operators::TwoLevel => h_lz(t, &self.schedule, &self.protocol),
            Operators::Collective(ops) => {
                let c = self.collective_terms(t, ops)?;
                let n = ops.dim();
                let mut m = CMatrix::zeros(n, n);
                for (coef, op) in [(c.mx, &ops.mx), (c.my, &ops.my), (c.mz, &ops.mz), (c.mz3, &ops.mz3), (c.three_body, &ops.three_body)] {
                    if coef != 0.0 {
                        m += op * C64::new(coef, 0.0);
                    }
                }
                Ok(m)
            }
        }
    }

    fn tridiagonal(&self, t: f64) -> Result<Option<Tridiagonal>> {
        let Operators::Collective(ops) = &self.ops else {
            return Ok(None);
        };
        let c = self.collective_terms(t, ops)?;
        let b = &ops.bands;
        let mut band = Tridiagonal::zeros(ops.dim());
        for (coef, op) in [(c.mx, &b.mx), (c.my, &b.my), (c.mz, &b.mz), (c.mz3, &b.mz3), (c.three_body, &b.three_body)] {
            if coef != 0.0 {
                band.add_scaled(coef, op);
            }
        }
        Ok(Some(band))
    }

    fn norm_bound(&self, t: f64) -> Result<f64> {
        let s = self.schedule.evaluate(t)?;
        let nf = self.protocol.model.sites() as f64;
        let problem = match self.protocol.model {
            Model::PSpin { .. } => s.lambda * nf,
            Model::LandauZener { h } => s.lambda * h.abs(),
        };
        let x = s.one_minus_lambda * s.gamma.abs();
        Ok(match (self.protocol.protocol.is_cd(), self.protocol.effective_frame()) {
            (false, _) => x * nf + problem,
            (true, Frame::Lab) => (x + gauge::y_from_values(self.protocol.model, &s)?.abs()) * nf + problem,
            (true, Frame::Rotated) => {
                let f = frame_from_values(self.protocol.model, &s)?;
                // the rotated problem part is split into T and Mz pieces; bound both
                let split = match self.protocol.model {
                    Model::PSpin { .. } => s.lambda * (3.0 * nf - 2.0) / nf,
                    Model::LandauZener { .. } => 0.0,
                };
                (f.radius() + 0.5 * f.theta_dot.abs()) * nf + problem + 2.0 * split
            }
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{commutator, eigvalsh, hermiticity_error, max_abs_diff};
    use approx::assert_relative_eq;

    #[test]
    fn mz_diagonal_for_two_spins() {
        let ops = CollectiveOperators::new(2).unwrap();
        let d: Vec<f64> = (0..3).map(|k| ops.mz[(k, k)].re).collect();
        assert_eq!(d, vec![2.0, 0.0, -2.0]);
    }

    #[test]
    fn spin_algebra() {
        for n in [2, 3, 7, 20] {
            let ops = CollectiveOperators::new(n).unwrap();
            let c = commutator(&ops.mx, &ops.my);
            let expected = &ops.mz * C64::new(0.0, 2.0);
            assert!(max_abs_diff(&c, &expected) < 1e-10 * n as f64);
            assert!(max_abs_diff(&(&ops.mz * &ops.mz * &ops.mz), &ops.mz3) == 0.0);
            for m in [&ops.mx, &ops.my, &ops.mz] {
                assert!(hermiticity_error(m) < 1e-14);
            }
            // Casimir (Mx² + My² + Mz²)/4 = S(S+1)
            let s = n as f64 / 2.0;
            let cas = (&ops.mx * &ops.mx + &ops.my * &ops.my + &ops.mz * &ops.mz) * C64::new(0.25, 0.0);
            let id = CMatrix::identity(n + 1, n + 1) * C64::new(s * (s + 1.0), 0.0);
            assert!(max_abs_diff(&cas, &id) < 1e-9 * n as f64 * n as f64);
        }
    }

    #[test]
    fn size_limits() {
        assert!(CollectiveOperators::new(1).is_err());
        assert!(CollectiveOperators::new(MAX_COLLECTIVE_N + 1).is_err());
    }

    #[test]
    fn h0_limits() {
        let ops2 = CollectiveOperators::new(2).unwrap();
        let spec = ScheduleSpec::linked_pspin(1.0, 0.1).unwrap();
        let e = eigvalsh(&h0_pspin(1.0, &spec, &ops2).unwrap());
        assert_relative_eq!(e[0], -2.0, epsilon = 1e-12);

        let ops4 = CollectiveOperators::new(4).unwrap();
        let e = eigvalsh(&h0_pspin(0.0, &spec, &ops4).unwrap());
        assert_relative_eq!(e[0], -0.4, epsilon = 1e-12);
    }

    #[test]
    fn lab_cd_boundaries() {
        let ops = Arc::new(CollectiveOperators::new(5).unwrap());
        let spec = ScheduleSpec::linked_pspin(2.0, 0.1).unwrap();
        let p = ProtocolSpec::new(Protocol::TwoParamCd, Frame::Lab, Model::PSpin { n: 5 });
        assert_eq!(h_lab_cd(0.0, &spec, &p, &ops).unwrap(), h0_pspin(0.0, &spec, &ops).unwrap());
        assert_eq!(h_lab_cd(2.0, &spec, &p, &ops).unwrap(), ops.problem_hamiltonian());
        let qa = ProtocolSpec::new(Protocol::TraditionalQa, Frame::Lab, Model::PSpin { n: 5 });
        assert!(h_lab_cd(1.0, &spec, &qa, &ops).is_err());
    }

    #[test]
    fn single_param_is_two_param_with_frozen_gamma() {
        let n = 6;
        let ops = CollectiveOperators::new(n).unwrap();
        let model = Model::PSpin { n };
        let constant = ScheduleSpec::constant(3.0, 0.1).unwrap();
        let single = ProtocolSpec::new(Protocol::SingleParamCd, Frame::Lab, model);
        for t in [0.2, 1.3, 2.8] {
            let got = h_lab_cd(t, &constant, &single, &ops).unwrap();
            // two-parameter formula evaluated by hand with γ = γ_init, γ̇ = 0
            let s = constant.evaluate(t).unwrap();
            let c = gauge::pspin_coefficients(s.lambda, 0.1, n).unwrap();
            let y = s.lambda_dot * c.alpha + 0.0 * c.beta;
            let want = h0_pspin(t, &constant, &ops).unwrap() + &ops.my * C64::new(y, 0.0);
            assert!(max_abs_diff(&got, &want) < 1e-14);
        }
    }

    #[test]
    fn protocol_schedule_pairing() {
        let model = Model::PSpin { n: 4 };
        let linked = ScheduleSpec::linked_pspin(1.0, 0.1).unwrap();
        let constant = ScheduleSpec::constant(1.0, 0.1).unwrap();
        let cd1 = ProtocolSpec::new(Protocol::SingleParamCd, Frame::Lab, model);
        let cd2 = ProtocolSpec::new(Protocol::TwoParamCd, Frame::Lab, model);
        assert!(cd1.validate(&constant).is_ok());
        assert!(cd1.validate(&linked).is_err());
        assert!(cd2.validate(&linked).is_ok());
        assert!(cd2.validate(&constant).is_err());
        let qa = ProtocolSpec::new(Protocol::TraditionalQa, Frame::Rotated, model);
        assert_eq!(qa.effective_frame(), Frame::Lab);
    }

    #[test]
    fn frame_coefficients_at_ends() {
        let spec = ScheduleSpec::linked_pspin(4.0, 0.1).unwrap();
        let model = Model::PSpin { n: 8 };
        let f0 = frame_coefficients(0.0, &spec, model).unwrap();
        assert_eq!(f0.y, 0.0);
        assert_relative_eq!(f0.x, -0.1);
        assert_relative_eq!(f0.theta.abs(), std::f64::consts::PI);
        assert!(!f0.degenerate);
        let f1 = frame_coefficients(4.0, &spec, model).unwrap();
        assert!(f1.degenerate);
        assert_eq!(f1.theta_dot, 0.0);
    }

    #[test]
    fn x_dot_at_midpoint() {
        let tau = 4.0;
        let spec = ScheduleSpec::linked_pspin(tau, 0.1).unwrap();
        let f = frame_coefficients(tau / 2.0, &spec, Model::PSpin { n: 8 }).unwrap();
        let pi2 = std::f64::consts::PI.powi(2);
        assert_relative_eq!(f.x_dot, pi2 / (40.0 * tau), max_relative = 1e-12);
    }

    #[test]
    fn theta_dot_identity() {
        let spec = ScheduleSpec::linked_pspin(10.0, 0.1).unwrap();
        let model = Model::PSpin { n: 12 };
        for k in 1..50 {
            let t = 10.0 * k as f64 / 50.0;
            let f = frame_coefficients(t, &spec, model).unwrap();
            let lhs = f.theta_dot * (f.x * f.x + f.y * f.y);
            let rhs = f.x * f.y_dot - f.y * f.x_dot;
            assert!((lhs - rhs).abs() <= 1e-12 * rhs.abs().max(1e-12));
        }
    }

    #[test]
    fn rotated_x_coefficient_at_start() {
        let ops = CollectiveOperators::new(5).unwrap();
        let spec = ScheduleSpec::linked_pspin(3.0, 0.1).unwrap();
        let h = h_rotated(0.0, &spec, &ops).unwrap();
        // only Mx survives at t = 0, with coefficient γ_init
        let want = &ops.mx * C64::new(0.1, 0.0);
        assert!(max_abs_diff(&h, &want) < 1e-15);
    }

    #[test]
    fn rotated_end_is_problem_hamiltonian() {
        let ops = CollectiveOperators::new(7).unwrap();
        let spec = ScheduleSpec::linked_pspin(3.0, 0.1).unwrap();
        let h = h_rotated(3.0, &spec, &ops).unwrap();
        assert!(max_abs_diff(&h, &ops.problem_hamiltonian()) < 1e-14);
    }

    #[test]
    fn lz_spectra() {
        let model = Model::LandauZener { h: 0.1 };
        let spec = ScheduleSpec::linked_lz(1.0).unwrap();
        let qa = ProtocolSpec::new(Protocol::TraditionalQa, Frame::Lab, model);
        let e = eigvalsh(&h_lz(0.0, &spec, &qa).unwrap());
        assert_relative_eq!(e[0], -1.0, epsilon = 1e-14);
        assert_relative_eq!(e[1], 1.0, epsilon = 1e-14);
        let e = eigvalsh(&h_lz(1.0, &spec, &qa).unwrap());
        assert_relative_eq!(e[0], -0.1, epsilon = 1e-14);
        assert_relative_eq!(e[1], 0.1, epsilon = 1e-14);
    }

    #[test]
    fn lz_gap_minimum_is_interior() {
        // γ = 1 − λ: gap = 2√((1−λ)⁴ + λ²h²); scan λ on a grid of schedule times
        let model = Model::LandauZener { h: 0.1 };
        let spec = ScheduleSpec::linked_lz(1.0).unwrap();
        let qa = ProtocolSpec::new(Protocol::TraditionalQa, Frame::Lab, model);
        let mut best = (f64::INFINITY, 0.0);
        for k in 0..=2000 {
            let t = k as f64 / 2000.0;
            let e = eigvalsh(&h_lz(t, &spec, &qa).unwrap());
            let l = spec.lambda(t).unwrap();
            let gap = e[1] - e[0];
            let closed = 2.0 * ((1.0 - l).powi(4) + l * l * 0.01).sqrt();
            assert_relative_eq!(gap, closed, max_relative = 1e-12);
            if gap < best.0 {
                best = (gap, l);
            }
        }
        assert!(best.1 > 0.1 && best.1 < 0.99, "gap minimum at lambda={}", best.1);
    }

    #[test]
    fn builder_is_hermitian_everywhere() {
        let n = 9;
        let model = Model::PSpin { n };
        let ops = Arc::new(CollectiveOperators::new(n).unwrap());
        for protocol in Protocol::ALL {
            let spec = ScheduleSpec::new(2.0, protocol.default_gamma_mode(model), 0.1).unwrap();
            for frame in [Frame::Lab, Frame::Rotated] {
                let h = Hamiltonian::with_operators(spec, ProtocolSpec::new(protocol, frame, model), ops.clone()).unwrap();
                for k in 0..=20 {
                    let m = h.matrix(2.0 * k as f64 / 20.0).unwrap();
                    assert!(hermiticity_error(&m) < 1e-12);
                }
                assert!(max_abs_diff(&h.matrix(2.0).unwrap(), &h.problem_hamiltonian()) < 1e-14);
            }
        }
    }
}
