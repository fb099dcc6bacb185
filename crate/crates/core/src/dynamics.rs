//! Schrödinger-equation integration and protocol runs.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{self, eigh, expectation, CMatrix, CVector, Tridiagonal, I};
use crate::metrics::{self, RunResult, DEFAULT_SUCCESS_PROBABILITY};
use crate::model::{Hamiltonian, Model, ProtocolSpec, TimeDependentHamiltonian};
use crate::schedules::ScheduleSpec;
use num_complex::Complex64 as C64;

/// Ground levels closer than this are reported as degenerate.
pub const DEGENERACY_GAP: f64 = 1e-10;

/// Which Hilbert space a state vector lives in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Basis {
    /// Maximal-spin sector of `n` spins, dimension `n + 1`.
    Symmetric(usize),
    /// Full tensor-product space of `n` spins, dimension `2ⁿ`.
    Full(usize),
    TwoLevel,
}

impl Basis {
    pub fn dim(&self) -> usize {
        match *self {
            Basis::Symmetric(n) => n + 1,
            Basis::Full(n) => 1 << n,
            Basis::TwoLevel => 2,
        }
    }

    pub fn for_model(model: Model) -> Self {
        match model {
            Model::PSpin { n } => Basis::Symmetric(n),
            Model::LandauZener { .. } => Basis::TwoLevel,
        }
    }
}

impl fmt::Display for Basis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Basis::Symmetric(n) => write!(f, "symmetric(N={n})"),
            Basis::Full(n) => write!(f, "full(N={n})"),
            Basis::TwoLevel => f.write_str("two-level"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub amplitudes: CVector,
    pub basis: Basis,
}

impl StateVector {
    pub fn new(amplitudes: CVector, basis: Basis) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::InvalidParameter(format!(
                "{} amplitudes do not fit basis {basis}",
                amplitudes.len()
            )));
        }
        Ok(Self { amplitudes, basis })
    }

    /// Computational basis state `index`.
    pub fn basis_state(index: usize, basis: Basis) -> Result<Self> {
        let mut v = CVector::zeros(basis.dim());
        if index >= v.len() {
            return Err(Error::InvalidParameter(format!("basis index {index} out of range for {basis}")));
        }
        v[index] = C64::new(1.0, 0.0);
        Self::new(v, basis)
    }

    pub fn norm(&self) -> f64 {
        self.amplitudes.norm()
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    /// Classic fourth-order Runge–Kutta on `ψ̇ = −iHψ`.
    #[serde(alias = "rk4")]
    FixedStepRk4,
    /// `exp(−i H(t + dt/2) dt)` per step; unitary, second order.
    #[serde(alias = "exponential")]
    PiecewiseExponential,
    /// Two-exponential commutator-free Magnus scheme at the Gauss nodes;
    /// unitary, fourth order. Suited to long annealing times.
    Magnus4,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StepCount {
    Auto,
    Fixed(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IntegratorConfig {
    pub method: Method,
    pub steps: StepCount,
    pub norm_tolerance: f64,
    /// Re-run with twice the steps and require the fidelity to move by less
    /// than [`CONVERGENCE_TOLERANCE`].
    pub convergence_check: bool,
}

pub const CONVERGENCE_TOLERANCE: f64 = 1e-6;
pub const MIN_EXPLICIT_STEPS: usize = 100;

impl Default for IntegratorConfig {
    fn default() -> Self {
        Self {
            method: Method::FixedStepRk4,
            steps: StepCount::Auto,
            norm_tolerance: 1e-6,
            convergence_check: false,
        }
    }
}

impl IntegratorConfig {
    pub fn with_method(method: Method) -> Self {
        Self {
            method,
            ..Self::default()
        }
    }

    pub fn steps(mut self, steps: usize) -> Self {
        self.steps = StepCount::Fixed(steps);
        self
    }

    pub fn checked(mut self) -> Self {
        self.convergence_check = true;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let StepCount::Fixed(s) = self.steps {
            if s < MIN_EXPLICIT_STEPS {
                return Err(Error::InvalidParameter(format!(
                    "explicit step counts must be >= {MIN_EXPLICIT_STEPS}, got {s}"
                )));
            }
        }
        if !(self.norm_tolerance > 0.0) {
            return Err(Error::InvalidParameter("norm tolerance must be positive".into()));
        }
        Ok(())
    }

    /// Step count over `[0, τ]` for `h`.
    ///
    /// RK4 uses `max(2·10⁴, ⌈50 τ B⌉)` with `B` the sampled maximum of
    /// [`TimeDependentHamiltonian::norm_bound`]. The exponential schemes are
    /// unitary for any step: Magnus4 uses `max(2·10³, ⌈τ B / 10⌉)`, the
    /// second-order midpoint rule `max(2·10⁴, ⌈τ B⌉)`.
    pub fn resolve_steps(&self, h: &dyn TimeDependentHamiltonian) -> Result<usize> {
        if let StepCount::Fixed(s) = self.steps {
            return Ok(s);
        }
        let tau = h.total_time();
        let bound = max_norm_bound(h)?;
        Ok(match self.method {
            Method::FixedStepRk4 => rk4_steps(tau, bound),
            Method::PiecewiseExponential => midpoint_steps(tau, bound),
            Method::Magnus4 => magnus_steps(tau, bound),
        })
    }
}

fn rk4_steps(tau: f64, bound: f64) -> usize {
    (50.0 * tau * bound).ceil().max(20_000.0) as usize
}

fn magnus_steps(tau: f64, bound: f64) -> usize {
    (0.1 * tau * bound).ceil().max(2_000.0) as usize
}

fn midpoint_steps(tau: f64, bound: f64) -> usize {
    (tau * bound).ceil().max(20_000.0) as usize
}

/// Largest [`TimeDependentHamiltonian::norm_bound`] over a uniform grid.
pub fn max_norm_bound(h: &dyn TimeDependentHamiltonian) -> Result<f64> {
    let tau = h.total_time();
    let samples = 1024;
    let mut worst = 0.0_f64;
    for k in 0..=samples {
        worst = worst.max(h.norm_bound(tau * k as f64 / samples as f64)?);
    }
    Ok(worst)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroundState {
    pub energy: f64,
    pub state: CVector,
    /// Gap to the first excited level (∞ for a 1×1 matrix).
    pub gap: f64,
    pub degenerate: bool,
}

/// Lowest eigenpair of a Hermitian matrix.
///
/// The phase is fixed so the largest-magnitude amplitude (first one on ties)
/// is real and positive. A degenerate ground level is resolved by projecting
/// the lowest-index basis vector with nonzero weight onto the ground space.
pub fn ground_state(h: &CMatrix) -> Result<GroundState> {
    if h.nrows() != h.ncols() || h.nrows() == 0 {
        return Err(Error::InvalidParameter("ground_state needs a non-empty square matrix".into()));
    }
    let (values, vectors) = eigh(h);
    let energy = values[0];
    let gap = values.get(1).map_or(f64::INFINITY, |e| e - energy);
    let degenerate = gap < DEGENERACY_GAP;
    let mut state = if degenerate {
        let level: Vec<usize> = (0..values.len()).filter(|&k| values[k] - energy < DEGENERACY_GAP).collect();
        let mut picked = None;
        for basis_index in 0..h.nrows() {
            let mut proj = CVector::zeros(h.nrows());
            for &k in &level {
                let col = vectors.column(k);
                proj += col * col[basis_index].conj();
            }
            if proj.norm() > 1e-6 {
                picked = Some(proj.normalize());
                break;
            }
        }
        picked.expect("a ground space always overlaps some basis vector")
    } else {
        vectors.column(0).into_owned()
    };
    fix_phase(&mut state);
    Ok(GroundState {
        energy,
        state,
        gap,
        degenerate,
    })
}

fn fix_phase(v: &mut CVector) {
    let mut best = 0;
    let mut best_mag = -1.0;
    for (k, z) in v.iter().enumerate() {
        // ties within round-off go to the lower index
        if z.norm() > best_mag * (1.0 + 1e-12) {
            best_mag = z.norm();
            best = k;
        }
    }
    if best_mag > 0.0 {
        let phase = v[best] / best_mag;
        let rot = phase.conj();
        for z in v.iter_mut() {
            *z *= rot;
        }
        v[best] = C64::new(v[best].re, 0.0);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Diagnostics {
    pub method: Method,
    pub steps: usize,
    /// `|‖ψ(τ)‖ − 1|`.
    pub norm_drift: f64,
    /// `|F(steps) − F(2·steps)|` when the convergence check ran.
    pub convergence_delta: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct Evolution {
    pub state: StateVector,
    pub diagnostics: Diagnostics,
}

/// Integrates `iψ̇ = H(t)ψ` over `[0, τ]`.
///
/// Fails when the norm drifts beyond the configured tolerance or an amplitude
/// goes non-finite. The state is never renormalised.
pub fn evolve(h: &dyn TimeDependentHamiltonian, psi0: &StateVector, cfg: &IntegratorConfig) -> Result<Evolution> {
    cfg.validate()?;
    check_input(h, psi0)?;
    let steps = cfg.resolve_steps(h)?;
    let psi = propagate(h, &psi0.amplitudes, 0.0, h.total_time(), steps, cfg.method)?;
    let norm_drift = check_norm(&psi, cfg, steps)?;
    Ok(Evolution {
        state: StateVector {
            amplitudes: psi,
            basis: psi0.basis,
        },
        diagnostics: Diagnostics {
            method: cfg.method,
            steps,
            norm_drift,
            convergence_delta: None,
        },
    })
}

/// Like [`evolve`], but also returns the state at each of `sample_times`
/// (ascending, within `[0, τ]`). Steps are shared out in proportion to the
/// segment lengths.
pub fn evolve_sampled(
    h: &dyn TimeDependentHamiltonian,
    psi0: &StateVector,
    sample_times: &[f64],
    cfg: &IntegratorConfig,
) -> Result<(Vec<StateVector>, Diagnostics)> {
    cfg.validate()?;
    check_input(h, psi0)?;
    let tau = h.total_time();
    if sample_times.windows(2).any(|w| w[1] < w[0]) {
        return Err(Error::InvalidParameter("sample times must be ascending".into()));
    }
    if sample_times.iter().any(|&t| !(0.0..=tau).contains(&t)) {
        return Err(Error::InvalidParameter("sample times must lie in [0, tau]".into()));
    }
    let total = cfg.resolve_steps(h)?;
    let mut out = Vec::with_capacity(sample_times.len());
    let mut psi = psi0.amplitudes.clone();
    let mut t = 0.0;
    let mut used = 0;
    for &target in sample_times {
        if target > t {
            let steps = ((total as f64) * (target - t) / tau).ceil().max(1.0) as usize;
            psi = propagate(h, &psi, t, target, steps, cfg.method)?;
            used += steps;
            t = target;
        }
        out.push(StateVector {
            amplitudes: psi.clone(),
            basis: psi0.basis,
        });
    }
    let norm_drift = check_norm(&psi, cfg, used)?;
    Ok((
        out,
        Diagnostics {
            method: cfg.method,
            steps: used,
            norm_drift,
            convergence_delta: None,
        },
    ))
}

fn check_input(h: &dyn TimeDependentHamiltonian, psi0: &StateVector) -> Result<()> {
    if psi0.dim() != h.dim() {
        return Err(Error::InvalidParameter(format!(
            "state of dimension {} does not match Hamiltonian dimension {}",
            psi0.dim(),
            h.dim()
        )));
    }
    if (psi0.norm() - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidParameter(format!("initial state is not normalised (norm {})", psi0.norm())));
    }
    Ok(())
}

fn check_norm(psi: &CVector, cfg: &IntegratorConfig, steps: usize) -> Result<f64> {
    let norm = psi.norm();
    if !norm.is_finite() || psi.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
        return Err(Error::Integration {
            reason: "non-finite amplitude".into(),
            norm_drift: f64::NAN,
            steps,
        });
    }
    let drift = (norm - 1.0).abs();
    if drift > cfg.norm_tolerance {
        return Err(Error::Integration {
            reason: format!("norm drift exceeds tolerance {:.1e}", cfg.norm_tolerance),
            norm_drift: drift,
            steps,
        });
    }
    Ok(drift)
}

/// Advances `psi` from `t0` to `t1` in `steps` equal steps.
pub fn propagate(
    h: &dyn TimeDependentHamiltonian,
    psi: &CVector,
    t0: f64,
    t1: f64,
    steps: usize,
    method: Method,
) -> Result<CVector> {
    let steps = steps.max(1);
    let dt = (t1 - t0) / steps as f64;
    let mut psi = psi.clone();
    for k in 0..steps {
        let t = t0 + k as f64 * dt;
        // last step lands exactly on t1
        let step = if k + 1 == steps { t1 - t } else { dt };
        psi = match method {
            Method::FixedStepRk4 => rk4_step(h, &psi, t, step)?,
            Method::PiecewiseExponential => Generator::at(h, t + 0.5 * step)?.exp_apply(&psi, step),
            Method::Magnus4 => magnus4_step(h, &psi, t, step)?,
        };
    }
    Ok(psi)
}

/// `H(t)` in whichever storage the Hamiltonian offers.
enum Generator {
    Dense(CMatrix),
    Band(Tridiagonal),
}

impl Generator {
    fn at(h: &dyn TimeDependentHamiltonian, t: f64) -> Result<Self> {
        Ok(match h.tridiagonal(t)? {
            Some(b) => Generator::Band(b),
            None => Generator::Dense(h.matrix(t)?),
        })
    }

    /// `−i H ψ`.
    fn derivative(&self, psi: &CVector) -> CVector {
        let h_psi = match self {
            Generator::Dense(m) => m * psi,
            Generator::Band(b) => b.mul_vec(psi),
        };
        h_psi * (-I)
    }

    fn exp_apply(&self, psi: &CVector, dt: f64) -> CVector {
        match self {
            Generator::Dense(m) => linalg::apply_exp_hermitian(m, psi, dt),
            Generator::Band(b) => b.apply_exp(psi, dt),
        }
    }

    /// `a·self + b·other`.
    fn combine(&self, a: f64, other: &Generator, b: f64) -> Generator {
        match (self, other) {
            (Generator::Band(x), Generator::Band(y)) => {
                let mut out = Tridiagonal::zeros(x.dim());
                out.add_scaled(a, x);
                out.add_scaled(b, y);
                Generator::Band(out)
            }
            _ => Generator::Dense(self.dense() * C64::new(a, 0.0) + other.dense() * C64::new(b, 0.0)),
        }
    }

    fn dense(&self) -> CMatrix {
        match self {
            Generator::Dense(m) => m.clone(),
            Generator::Band(b) => b.to_dense(),
        }
    }
}

fn rk4_step(h: &dyn TimeDependentHamiltonian, psi: &CVector, t: f64, dt: f64) -> Result<CVector> {
    let h0 = Generator::at(h, t)?;
    let hm = Generator::at(h, t + 0.5 * dt)?;
    let h1 = Generator::at(h, t + dt)?;
    let half = C64::new(0.5 * dt, 0.0);
    let k1 = h0.derivative(psi);
    let k2 = hm.derivative(&(psi + &k1 * half));
    let k3 = hm.derivative(&(psi + &k2 * half));
    let k4 = h1.derivative(&(psi + &k3 * C64::new(dt, 0.0)));
    Ok(psi + (k1 + k2 * C64::new(2.0, 0.0) + k3 * C64::new(2.0, 0.0) + k4) * C64::new(dt / 6.0, 0.0))
}

/// Fourth-order commutator-free Magnus step: two exponentials of fixed
/// combinations of `H` at the Gauss–Legendre nodes.
fn magnus4_step(h: &dyn TimeDependentHamiltonian, psi: &CVector, t: f64, dt: f64) -> Result<CVector> {
    let r3 = 3.0_f64.sqrt();
    let h1 = Generator::at(h, t + (0.5 - r3 / 6.0) * dt)?;
    let h2 = Generator::at(h, t + (0.5 + r3 / 6.0) * dt)?;
    let a1 = (3.0 - 2.0 * r3) / 12.0;
    let a2 = (3.0 + 2.0 * r3) / 12.0;
    let mid = h1.combine(a2, &h2, a1).exp_apply(psi, dt);
    Ok(h1.combine(a1, &h2, a2).exp_apply(&mid, dt))
}

/// Prepares the ground state of `H(0)`, evolves to `τ` and scores the result
/// against the ground state of `H(τ)`, the problem Hamiltonian.
pub fn run_hamiltonian(
    h: &dyn TimeDependentHamiltonian,
    problem: &CMatrix,
    basis: Basis,
    cfg: &IntegratorConfig,
    success_probability: f64,
) -> Result<RunResult> {
    let tau = h.total_time();
    let initial = ground_state(&h.matrix(0.0)?)?;
    let psi0 = StateVector::new(initial.state, basis)?;
    let target = ground_state(problem)?;
    let phi0 = StateVector::new(target.state, basis)?;

    let score = |evo: &Evolution| -> Result<(f64, f64, f64)> {
        let psi = &evo.state.amplitudes;
        let unit = StateVector::new(psi.unscale(psi.norm()), basis)?;
        let f = metrics::fidelity(&unit, &phi0)?;
        let infidelity = metrics::infidelity(&unit, &phi0)?;
        let de = metrics::residual_energy(&unit, problem, target.energy);
        Ok((f, infidelity, de))
    };

    let evo = evolve(h, &psi0, cfg)?;
    let (fidelity, infidelity, residual_energy) = score(&evo)?;
    let mut diagnostics = evo.diagnostics;
    if cfg.convergence_check {
        let doubled = IntegratorConfig {
            steps: StepCount::Fixed(2 * diagnostics.steps),
            convergence_check: false,
            ..*cfg
        };
        let (f2, _, _) = score(&evolve(h, &psi0, &doubled)?)?;
        let delta = (f2 - fidelity).abs();
        diagnostics.convergence_delta = Some(delta);
        if delta >= CONVERGENCE_TOLERANCE {
            return Err(Error::Integration {
                reason: format!("fidelity moved by {delta:.3e} when the step count was doubled"),
                norm_drift: diagnostics.norm_drift,
                steps: diagnostics.steps,
            });
        }
    }
    Ok(RunResult {
        tau,
        fidelity,
        infidelity,
        residual_energy,
        tts: metrics::tts_from_infidelity(tau, infidelity, success_probability),
        success_probability,
        final_energy: expectation(problem, &evo.state.amplitudes) / evo.state.norm().powi(2),
        ground_energy: target.energy,
        diagnostics,
    })
}

/// Runs one protocol with the default success probability 0.99.
pub fn run_protocol(spec: &ScheduleSpec, protocol: &ProtocolSpec, cfg: &IntegratorConfig) -> Result<RunResult> {
    run_protocol_with(spec, protocol, cfg, DEFAULT_SUCCESS_PROBABILITY)
}

pub fn run_protocol_with(
    spec: &ScheduleSpec,
    protocol: &ProtocolSpec,
    cfg: &IntegratorConfig,
    success_probability: f64,
) -> Result<RunResult> {
    let h = Hamiltonian::new(*spec, *protocol)?;
    run_hamiltonian(&h, &h.problem_hamiltonian(), Basis::for_model(protocol.model), cfg, success_probability)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{CollectiveOperators, Frame, Protocol};
    use approx::assert_relative_eq;

    /// H(t) = H constant.
    struct Frozen(CMatrix, f64);

    impl TimeDependentHamiltonian for Frozen {
        fn dim(&self) -> usize {
            self.0.nrows()
        }
        fn total_time(&self) -> f64 {
            self.1
        }
        fn matrix(&self, _t: f64) -> Result<CMatrix> {
            Ok(self.0.clone())
        }
        fn norm_bound(&self, _t: f64) -> Result<f64> {
            Ok(self.0.norm())
        }
    }

    #[test]
    fn transverse_ground_state_energy() {
        let ops = CollectiveOperators::new(6).unwrap();
        let g = ground_state(&(&ops.mx * C64::new(-0.3, 0.0))).unwrap();
        assert_relative_eq!(g.energy, -1.8, epsilon = 1e-12);
        assert!(!g.degenerate);
    }

    #[test]
    fn problem_ground_state_is_all_up() {
        let ops = CollectiveOperators::new(5).unwrap();
        let g = ground_state(&ops.problem_hamiltonian()).unwrap();
        assert_relative_eq!(g.energy, -5.0, epsilon = 1e-12);
        assert_relative_eq!(g.state[0].re, 1.0, epsilon = 1e-12);
        assert_eq!(g.state[0].im, 0.0);
    }

    #[test]
    fn lz_final_ground_energy() {
        let sz = crate::model::pauli()[2].clone();
        let g = ground_state(&(sz * C64::new(-0.1, 0.0))).unwrap();
        assert_relative_eq!(g.energy, -0.1, epsilon = 1e-15);
    }

    #[test]
    fn degenerate_ground_level_is_deterministic() {
        // −|0⟩⟨0| − |2⟩⟨2| is doubly degenerate; basis order picks |0⟩
        let h = crate::linalg::real_diagonal(&[-1.0, 0.5, -1.0]);
        let g = ground_state(&h).unwrap();
        assert!(g.degenerate);
        assert_relative_eq!(g.state[0].re, 1.0, epsilon = 1e-12);
        assert!(g.state[2].norm() < 1e-12);
    }

    #[test]
    fn stationary_state_stays_put() {
        let ops = CollectiveOperators::new(4).unwrap();
        let hp = ops.problem_hamiltonian();
        let g = ground_state(&hp).unwrap();
        let psi0 = StateVector::new(g.state.clone(), Basis::Symmetric(4)).unwrap();
        for method in [Method::FixedStepRk4, Method::PiecewiseExponential, Method::Magnus4] {
            let evo = evolve(&Frozen(hp.clone(), 37.0), &psi0, &IntegratorConfig::with_method(method)).unwrap();
            let f = metrics::fidelity(&evo.state, &psi0).unwrap();
            assert!((1.0 - f).abs() < 1e-9, "{method:?}: {f}");
        }
    }

    #[test]
    fn explicit_step_floor() {
        let cfg = IntegratorConfig::default().steps(99);
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn mismatched_state_is_rejected() {
        let ops = CollectiveOperators::new(3).unwrap();
        let psi = StateVector::basis_state(0, Basis::Symmetric(4)).unwrap();
        assert!(evolve(&Frozen(ops.mx.clone(), 1.0), &psi, &IntegratorConfig::default()).is_err());
    }

    #[test]
    fn norm_drift_is_reported_not_hidden() {
        // RK4 with dt‖H‖ ≈ 2 loses norm quickly
        let ops = CollectiveOperators::new(4).unwrap();
        let h = Frozen(&ops.mx * C64::new(50.0, 0.0), 1.0);
        let psi = StateVector::basis_state(0, Basis::Symmetric(4)).unwrap();
        let err = evolve(&h, &psi, &IntegratorConfig::default().steps(100)).unwrap_err();
        assert!(matches!(err, Error::Integration { .. }), "{err}");
    }

    #[test]
    fn schemes_have_expected_order() {
        let n = 4;
        let model = Model::PSpin { n };
        let spec = ScheduleSpec::linked_pspin(2.0, 0.1).unwrap();
        let h = Hamiltonian::new(spec, ProtocolSpec::new(Protocol::TwoParamCd, Frame::Lab, model)).unwrap();
        let psi0 = StateVector::new(ground_state(&h.matrix(0.0).unwrap()).unwrap().state, Basis::Symmetric(n)).unwrap();
        let reference = propagate(&h, &psi0.amplitudes, 0.0, 2.0, 20_000, Method::Magnus4).unwrap();
        for (method, order) in [(Method::PiecewiseExponential, 2.0), (Method::Magnus4, 4.0), (Method::FixedStepRk4, 4.0)] {
            let e1 = (propagate(&h, &psi0.amplitudes, 0.0, 2.0, 200, method).unwrap() - &reference).norm();
            let e2 = (propagate(&h, &psi0.amplitudes, 0.0, 2.0, 400, method).unwrap() - &reference).norm();
            let observed = (e1 / e2).log2();
            assert!((observed - order).abs() < 0.3, "{method:?}: observed order {observed}");
        }
    }
}
