//! Brute-force reference backend on the full 2ᴺ-dimensional space.
//!
//! Everything here is built from explicit Pauli strings, independently of
//! the collective-spin matrices in [`crate::model`], so the two can be
//! checked against each other. Bit `i` of a basis index is site `i`, with
//! 0 meaning spin up.

use num_complex::Complex64 as C64;

use crate::dynamics::{run_hamiltonian, Basis, IntegratorConfig, StateVector};
use crate::error::{Error, Result};
use crate::gauge;
use crate::linalg::{CMatrix, CVector, I};
use crate::metrics::RunResult;
use crate::model::{pauli, Frame, Model, Protocol, ProtocolSpec, TimeDependentHamiltonian};
use crate::schedules::{ScheduleSpec, ScheduleValues};

pub const MAX_STATIC_N: usize = 12;
pub const MAX_DYNAMIC_N: usize = 10;
pub const MAX_ACTION_N: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pauli {
    X,
    Y,
    Z,
}

fn check_size(n: usize, max: usize) -> Result<()> {
    if n > max {
        return Err(Error::SizeLimit { n, max });
    }
    if n == 0 {
        return Err(Error::InvalidParameter("need at least one site".into()));
    }
    Ok(())
}

/// Dense matrix of the Pauli string `⊗ factors` on `n` sites (identity elsewhere).
pub fn pauli_string(n: usize, factors: &[(usize, Pauli)]) -> CMatrix {
    let dim = 1usize << n;
    let mut flip = 0usize;
    for &(site, p) in factors {
        if matches!(p, Pauli::X | Pauli::Y) {
            flip ^= 1 << site;
        }
    }
    let mut m = CMatrix::zeros(dim, dim);
    for col in 0..dim {
        let mut amp = C64::new(1.0, 0.0);
        for &(site, p) in factors {
            let down = (col >> site) & 1 == 1;
            amp *= match (p, down) {
                (Pauli::X, _) => C64::new(1.0, 0.0),
                // σʸ|↑⟩ = i|↓⟩, σʸ|↓⟩ = −i|↑⟩
                (Pauli::Y, false) => I,
                (Pauli::Y, true) => -I,
                (Pauli::Z, false) => C64::new(1.0, 0.0),
                (Pauli::Z, true) => C64::new(-1.0, 0.0),
            };
        }
        m[(col ^ flip, col)] += amp;
    }
    m
}

/// Sums of Pauli strings needed for the p-spin model on the full space.
#[derive(Debug, Clone)]
pub struct FullSpaceOperators {
    n: usize,
    pub sx: CMatrix,
    pub sy: CMatrix,
    pub sz: CMatrix,
    /// Σ_{i<j<k} σᶻᵢσᶻⱼσᶻₖ
    pub zzz: CMatrix,
    /// Number of triple products summed into `zzz`.
    pub triple_count: usize,
}

impl FullSpaceOperators {
    pub fn new(n: usize) -> Result<Self> {
        check_size(n, MAX_STATIC_N)?;
        let dim = 1usize << n;
        let site_sum = |p: Pauli| {
            (0..n).fold(CMatrix::zeros(dim, dim), |acc, i| acc + pauli_string(n, &[(i, p)]))
        };
        let mut zzz = CMatrix::zeros(dim, dim);
        let mut triple_count = 0;
        for_each_triple(n, |i, j, k| {
            zzz += pauli_string(n, &[(i, Pauli::Z), (j, Pauli::Z), (k, Pauli::Z)]);
            triple_count += 1;
        });
        Ok(Self {
            n,
            sx: site_sum(Pauli::X),
            sy: site_sum(Pauli::Y),
            sz: site_sum(Pauli::Z),
            zzz,
            triple_count,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        1 << self.n
    }

    pub fn site(&self, i: usize, p: Pauli) -> CMatrix {
        pauli_string(self.n, &[(i, p)])
    }

    /// Total-spin Casimir `S² = (Σσˣ)²/4 + (Σσʸ)²/4 + (Σσᶻ)²/4`.
    pub fn casimir(&self) -> CMatrix {
        (&self.sx * &self.sx + &self.sy * &self.sy + &self.sz * &self.sz) * C64::new(0.25, 0.0)
    }

    /// Problem Hamiltonian `−(6 Σσᶻσᶻσᶻ + (3N−2) Σσᶻ)/N²`.
    pub fn problem_hamiltonian(&self) -> CMatrix {
        let nf = self.n as f64;
        (&self.zzz * C64::new(6.0, 0.0) + &self.sz * C64::new(3.0 * nf - 2.0, 0.0)) * C64::new(-1.0 / (nf * nf), 0.0)
    }

    /// Σ_{i<j<k} (σˣσᶻσᶻ + σᶻσˣσᶻ + σᶻσᶻσˣ), built string by string.
    pub fn mixed_xzz(&self) -> CMatrix {
        let n = self.n;
        let dim = self.dim();
        let mut acc = CMatrix::zeros(dim, dim);
        for_each_triple(n, |i, j, k| {
            for x_at in [i, j, k] {
                let f: Vec<(usize, Pauli)> = [i, j, k]
                    .iter()
                    .map(|&s| (s, if s == x_at { Pauli::X } else { Pauli::Z }))
                    .collect();
                acc += pauli_string(n, &f);
            }
        });
        acc
    }

    /// Isometry whose column `k` is the normalised Dicke state with `k` spins down.
    pub fn symmetric_embedding(&self) -> CMatrix {
        let dim = self.dim();
        let mut v = CMatrix::zeros(dim, self.n + 1);
        for idx in 0..dim {
            v[(idx, idx.count_ones() as usize)] = C64::new(1.0, 0.0);
        }
        for k in 0..=self.n {
            let norm = v.column(k).norm();
            v.column_mut(k).unscale_mut(norm);
        }
        v
    }
}

fn for_each_triple(n: usize, mut f: impl FnMut(usize, usize, usize)) {
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                f(i, j, k);
            }
        }
    }
}

fn scaled(m: &CMatrix, c: f64) -> CMatrix {
    m * C64::new(c, 0.0)
}

/// `−(1−λ)γ Σσˣ + λ Hp` at explicit (λ, γ).
pub fn full_h0_at(lambda: f64, gamma: f64, ops: &FullSpaceOperators) -> CMatrix {
    scaled(&ops.sx, -(1.0 - lambda) * gamma) + scaled(&ops.problem_hamiltonian(), lambda)
}

pub fn full_h0(t: f64, spec: &ScheduleSpec, ops: &FullSpaceOperators) -> Result<CMatrix> {
    let s = spec.evaluate(t)?;
    Ok(full_h0_at(s.lambda, s.gamma, ops))
}

pub fn full_h_lab_cd(t: f64, spec: &ScheduleSpec, protocol: &ProtocolSpec, ops: &FullSpaceOperators) -> Result<CMatrix> {
    protocol.validate(spec)?;
    let s = spec.evaluate(t)?;
    let y = y_coefficient(&s, ops.n)?;
    Ok(full_h0_at(s.lambda, s.gamma, ops) + scaled(&ops.sy, y))
}

fn y_coefficient(s: &ScheduleValues, n: usize) -> Result<f64> {
    if s.lambda_dot == 0.0 && s.gamma_dot == 0.0 {
        return Ok(0.0);
    }
    let c = gauge::pspin_coefficients(s.lambda, s.gamma, n)?;
    Ok(s.lambda_dot * c.alpha + s.gamma_dot * c.beta)
}

/// Rotated-frame Hamiltonian on the full space.
pub fn full_h_rotated(t: f64, spec: &ScheduleSpec, ops: &FullSpaceOperators) -> Result<CMatrix> {
    let s = spec.evaluate(t)?;
    let f = crate::model::frame_coefficients(t, spec, Model::PSpin { n: ops.n })?;
    let nf = ops.n as f64;
    let r = f.radius();
    Ok(scaled(&ops.sx, r) + scaled(&ops.zzz, -s.lambda * 6.0 / (nf * nf))
        - scaled(&ops.sz, 0.5 * f.theta_dot + s.lambda * (3.0 * nf - 2.0) / (nf * nf)))
}

/// Full-space counterpart of [`crate::model::Hamiltonian`].
pub struct FullHamiltonian {
    schedule: ScheduleSpec,
    protocol: ProtocolSpec,
    ops: FullSpaceOperators,
}

impl FullHamiltonian {
    pub fn new(schedule: ScheduleSpec, protocol: ProtocolSpec) -> Result<Self> {
        let Model::PSpin { n } = protocol.model else {
            return Err(Error::InvalidParameter("full-space oracle covers the p-spin model only".into()));
        };
        check_size(n, MAX_DYNAMIC_N)?;
        protocol.validate(&schedule)?;
        Ok(Self {
            schedule,
            protocol,
            ops: FullSpaceOperators::new(n)?,
        })
    }

    pub fn operators(&self) -> &FullSpaceOperators {
        &self.ops
    }
}

impl TimeDependentHamiltonian for FullHamiltonian {
    fn dim(&self) -> usize {
        self.ops.dim()
    }

    fn total_time(&self) -> f64 {
        self.schedule.total_time()
    }

    fn matrix(&self, t: f64) -> Result<CMatrix> {
        match (self.protocol.protocol, self.protocol.effective_frame()) {
            (Protocol::TraditionalQa, _) => full_h0(t, &self.schedule, &self.ops),
            (_, Frame::Lab) => full_h_lab_cd(t, &self.schedule, &self.protocol, &self.ops),
            (_, Frame::Rotated) => full_h_rotated(t, &self.schedule, &self.ops),
        }
    }

    fn norm_bound(&self, t: f64) -> Result<f64> {
        Ok(self.matrix(t)?.norm())
    }
}

/// Same contract as [`crate::dynamics::run_protocol`], on the 2ᴺ basis.
pub fn full_space_evolve(spec: &ScheduleSpec, protocol: &ProtocolSpec, cfg: &IntegratorConfig) -> Result<RunResult> {
    let h = FullHamiltonian::new(*spec, *protocol)?;
    let n = h.ops.n;
    let problem = h.ops.problem_hamiltonian();
    run_hamiltonian(&h, &problem, Basis::Full(n), cfg, crate::metrics::DEFAULT_SUCCESS_PROBABILITY)
}

/// Embeds a symmetric-sector state into the full space.
pub fn embed_symmetric(state: &StateVector, ops: &FullSpaceOperators) -> Result<StateVector> {
    if state.basis != Basis::Symmetric(ops.n) {
        return Err(Error::BasisMismatch {
            left: state.basis.to_string(),
            right: Basis::Symmetric(ops.n).to_string(),
        });
    }
    StateVector::new(ops.symmetric_embedding() * &state.amplitudes, Basis::Full(ops.n))
}

/// Which driving parameter a Hermitian G operator belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Driving {
    Lambda,
    Gamma,
}

/// `G = ∂H₀ + i[A, H₀]` with `A = coeff·Σσʸ`, from explicit commutators.
/// H₀ is linear in each of λ and γ, so the symmetric difference quotient
/// below is exact up to rounding.
pub fn hermitian_g(lambda: f64, gamma: f64, coeff: f64, which: Driving, ops: &FullSpaceOperators) -> Result<CMatrix> {
    check_size(ops.n, MAX_ACTION_N)?;
    let d = 0.5;
    let derivative = match which {
        Driving::Lambda => (full_h0_at(lambda + d, gamma, ops) - full_h0_at(lambda - d, gamma, ops)) * C64::new(1.0 / (2.0 * d), 0.0),
        Driving::Gamma => (full_h0_at(lambda, gamma + d, ops) - full_h0_at(lambda, gamma - d, ops)) * C64::new(1.0 / (2.0 * d), 0.0),
    };
    let h0 = full_h0_at(lambda, gamma, ops);
    let a = scaled(&ops.sy, coeff);
    Ok(derivative + (&a * &h0 - &h0 * &a) * I)
}

/// The same operator from its expansion in Pauli strings:
///
/// `G_λ = [γ + 2αλ(3N−2)/N²]Σσˣ − (6/N²)Σσᶻσᶻσᶻ − [(3N−2)/N² + 2α(1−λ)γ]Σσᶻ + (12λα/N²)Σ(σˣσᶻσᶻ + …)`
///
/// `G_γ = [2βλ(3N−2)/N² − (1−λ)]Σσˣ − 2β(1−λ)γΣσᶻ + (12λβ/N²)Σ(σˣσᶻσᶻ + …)`
pub fn hermitian_g_expanded(lambda: f64, gamma: f64, coeff: f64, which: Driving, ops: &FullSpaceOperators) -> Result<CMatrix> {
    check_size(ops.n, MAX_ACTION_N)?;
    let nf = ops.n as f64;
    let n2 = nf * nf;
    let w = 3.0 * nf - 2.0;
    let mixed = scaled(&ops.mixed_xzz(), 12.0 * lambda * coeff / n2);
    Ok(match which {
        Driving::Lambda => {
            scaled(&ops.sx, gamma + 2.0 * coeff * lambda * w / n2) - scaled(&ops.zzz, 6.0 / n2)
                - scaled(&ops.sz, w / n2 + 2.0 * coeff * (1.0 - lambda) * gamma)
                + mixed
        }
        Driving::Gamma => {
            scaled(&ops.sx, 2.0 * coeff * lambda * w / n2 - (1.0 - lambda)) - scaled(&ops.sz, 2.0 * coeff * (1.0 - lambda) * gamma)
                + mixed
        }
    })
}

/// `Tr[G²]` for Hermitian `G` (Frobenius norm squared).
pub fn trace_square(g: &CMatrix) -> f64 {
    g.norm_squared()
}

/// `S = Tr[G_λ²] + Tr[G_γ²]` from explicit matrices.
pub fn action_trace(lambda: f64, gamma: f64, alpha: f64, beta: f64, ops: &FullSpaceOperators) -> Result<f64> {
    Ok(trace_square(&hermitian_g(lambda, gamma, alpha, Driving::Lambda, ops)?)
        + trace_square(&hermitian_g(lambda, gamma, beta, Driving::Gamma, ops)?))
}

/// Closed form of the same action, from orthogonality of Pauli strings:
///
/// `S/2ᴺ = N[γ + 2αλw/N²]² + N[w/N² + 2α(1−λ)γ]² + 72λ²(N−1)(N−2)α²/N³ + 6(N−1)(N−2)/N³`
/// `     + N[2βλw/N² − (1−λ)]² + N[2β(1−λ)γ]² + 72λ²(N−1)(N−2)β²/N³`, `w = 3N−2`.
pub fn action_closed_form(lambda: f64, gamma: f64, alpha: f64, beta: f64, n: usize) -> f64 {
    let nf = n as f64;
    let n2 = nf * nf;
    let n3 = n2 * nf;
    let w = 3.0 * nf - 2.0;
    let pairs = (nf - 1.0) * (nf - 2.0);
    let om = 1.0 - lambda;
    let g_lambda = nf * (gamma + 2.0 * alpha * lambda * w / n2).powi(2)
        + nf * (w / n2 + 2.0 * alpha * om * gamma).powi(2)
        + 72.0 * lambda * lambda * pairs * alpha * alpha / n3
        + 6.0 * pairs / n3;
    let g_gamma = nf * (2.0 * beta * lambda * w / n2 - om).powi(2)
        + nf * (2.0 * beta * om * gamma).powi(2)
        + 72.0 * lambda * lambda * pairs * beta * beta / n3;
    2f64.powi(n as i32) * (g_lambda + g_gamma)
}

/// Landau–Zener G operators from the definition.
pub fn lz_hermitian_g(lambda: f64, gamma: f64, h: f64, coeff: f64, which: Driving) -> CMatrix {
    let [sx, sy, sz] = pauli();
    let h0 = |l: f64, g: f64| scaled(&sx, -(1.0 - l) * g) - scaled(&sz, l * h);
    let d = 0.5;
    let derivative = match which {
        Driving::Lambda => (h0(lambda + d, gamma) - h0(lambda - d, gamma)) * C64::new(1.0 / (2.0 * d), 0.0),
        Driving::Gamma => (h0(lambda, gamma + d) - h0(lambda, gamma - d)) * C64::new(1.0 / (2.0 * d), 0.0),
    };
    let a = scaled(&sy, coeff);
    let hm = h0(lambda, gamma);
    derivative + (&a * &hm - &hm * &a) * I
}

/// Landau–Zener action `Tr[G_λ²] + Tr[G_γ²]` from explicit 2×2 matrices.
pub fn lz_action_trace(lambda: f64, gamma: f64, h: f64, alpha: f64, beta: f64) -> f64 {
    trace_square(&lz_hermitian_g(lambda, gamma, h, alpha, Driving::Lambda))
        + trace_square(&lz_hermitian_g(lambda, gamma, h, beta, Driving::Gamma))
}

/// Derivative-free 2-d minimiser (Nelder–Mead) used to locate the action
/// optimum independently of the closed forms.
pub fn nelder_mead_2d(f: impl Fn([f64; 2]) -> f64, start: [f64; 2], scale: f64, tol: f64, max_iter: usize) -> ([f64; 2], f64) {
    let mut simplex = [start, [start[0] + scale, start[1]], [start[0], start[1] + scale]];
    let mut values = simplex.map(&f);
    for _ in 0..max_iter {
        let mut order = [0usize, 1, 2];
        order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
        simplex = order.map(|k| simplex[k]);
        values = order.map(|k| values[k]);

        let spread = (0..2)
            .map(|d| (simplex[1][d] - simplex[0][d]).abs().max((simplex[2][d] - simplex[0][d]).abs()))
            .fold(0.0, f64::max);
        if spread < tol {
            break;
        }

        let centroid = [(simplex[0][0] + simplex[1][0]) / 2.0, (simplex[0][1] + simplex[1][1]) / 2.0];
        let along = |c: f64| [centroid[0] + c * (simplex[2][0] - centroid[0]), centroid[1] + c * (simplex[2][1] - centroid[1])];

        let reflected = along(-1.0);
        let fr = f(reflected);
        if fr < values[0] {
            let expanded = along(-2.0);
            let fe = f(expanded);
            if fe < fr {
                simplex[2] = expanded;
                values[2] = fe;
            } else {
                simplex[2] = reflected;
                values[2] = fr;
            }
        } else if fr < values[1] {
            simplex[2] = reflected;
            values[2] = fr;
        } else {
            let contracted = if fr < values[2] { along(-0.5) } else { along(0.5) };
            let fc = f(contracted);
            if fc < values[2].min(fr) {
                simplex[2] = contracted;
                values[2] = fc;
            } else {
                for k in 1..3 {
                    simplex[k] = [
                        simplex[0][0] + 0.5 * (simplex[k][0] - simplex[0][0]),
                        simplex[0][1] + 0.5 * (simplex[k][1] - simplex[0][1]),
                    ];
                    values[k] = f(simplex[k]);
                }
            }
        }
    }
    let best = (0..3).min_by(|&a, &b| values[a].total_cmp(&values[b])).unwrap();
    (simplex[best], values[best])
}

/// `‖[A, B]‖_F`.
pub fn commutator_norm(a: &CMatrix, b: &CMatrix) -> f64 {
    (a * b - b * a).norm()
}

/// Restriction `V† M V` onto the symmetric sector.
pub fn restrict_to_symmetric(m: &CMatrix, ops: &FullSpaceOperators) -> CMatrix {
    let v = ops.symmetric_embedding();
    v.adjoint() * m * v
}

pub fn basis_vector(dim: usize, index: usize) -> CVector {
    let mut v = CVector::zeros(dim);
    v[index] = C64::new(1.0, 0.0);
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eigvalsh, max_abs_diff};
    use crate::model::{h0_pspin, h_lab_cd, h_rotated, CollectiveOperators};
    use approx::assert_relative_eq;

    #[test]
    fn ferromagnet_ground_state() {
        let ops = FullSpaceOperators::new(2).unwrap();
        let h = full_h0_at(1.0, 0.5, &ops);
        let e = eigvalsh(&h);
        assert_relative_eq!(e[0], -2.0, epsilon = 1e-12);
        // |↑↑⟩ is index 0
        assert_relative_eq!(h[(0, 0)].re, -2.0, epsilon = 1e-12);
    }

    #[test]
    fn triple_identity_n4() {
        let ops = FullSpaceOperators::new(4).unwrap();
        assert_eq!(ops.triple_count, 4);
        let m = &ops.sz;
        let want = (m * m * m - scaled(m, 10.0)) * C64::new(1.0 / 6.0, 0.0);
        assert!(max_abs_diff(&ops.zzz, &want) < 1e-12);
    }

    #[test]
    fn symmetric_restriction_matches_collective() {
        for n in [2, 3, 4, 5] {
            let full = FullSpaceOperators::new(n).unwrap();
            let coll = CollectiveOperators::new(n).unwrap();
            for (f, c) in [(&full.sx, &coll.mx), (&full.sy, &coll.my), (&full.sz, &coll.mz), (&full.zzz, &coll.three_body)] {
                assert!(max_abs_diff(&restrict_to_symmetric(f, &full), c) < 1e-12);
            }
            let spec = ScheduleSpec::linked_pspin(2.0, 0.1).unwrap();
            let model = Model::PSpin { n };
            let p = ProtocolSpec::new(Protocol::TwoParamCd, Frame::Lab, model);
            for t in [0.0, 0.3, 1.0, 1.7, 2.0] {
                let pairs = [
                    (full_h0(t, &spec, &full).unwrap(), h0_pspin(t, &spec, &coll).unwrap()),
                    (full_h_lab_cd(t, &spec, &p, &full).unwrap(), h_lab_cd(t, &spec, &p, &coll).unwrap()),
                    (full_h_rotated(t, &spec, &full).unwrap(), h_rotated(t, &spec, &coll).unwrap()),
                ];
                for (f, c) in pairs {
                    assert!(max_abs_diff(&restrict_to_symmetric(&f, &full), &c) < 1e-12);
                    assert!(commutator_norm(&f, &full.casimir()) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn subspace_spectrum_is_contained_in_full_spectrum() {
        let n = 3;
        let full = FullSpaceOperators::new(n).unwrap();
        let coll = CollectiveOperators::new(n).unwrap();
        let h_full = full_h0_at(0.5, 0.6, &full);
        let h_sub = crate::model::h0_pspin(0.0, &ScheduleSpec::constant(1.0, 0.6).unwrap(), &coll).unwrap();
        let _ = h_sub;
        // evaluate the collective matrix at λ = 0.5 directly
        let n2 = (n * n) as f64;
        let sub = &coll.mx * C64::new(-0.5 * 0.6, 0.0) + &coll.mz3 * C64::new(-0.5 / n2, 0.0);
        let full_e = eigvalsh(&h_full);
        for e in eigvalsh(&sub) {
            assert!(full_e.iter().any(|f| (f - e).abs() < 1e-10), "{e} missing");
        }
        assert!((eigvalsh(&sub)[0] - full_e[0]).abs() < 1e-10);
    }

    #[test]
    fn size_limits() {
        assert!(matches!(FullSpaceOperators::new(13), Err(Error::SizeLimit { .. })));
        let spec = ScheduleSpec::constant(1.0, 0.1).unwrap();
        let p = ProtocolSpec::new(Protocol::TraditionalQa, Frame::Lab, Model::PSpin { n: 11 });
        assert!(matches!(FullHamiltonian::new(spec, p), Err(Error::SizeLimit { .. })));
        let ops = FullSpaceOperators::new(9).unwrap();
        assert!(hermitian_g(0.1, 0.2, 0.3, Driving::Lambda, &ops).is_err());
    }

    #[test]
    fn g_without_gauge_is_plain_derivative() {
        let ops = FullSpaceOperators::new(3).unwrap();
        let g = hermitian_g(0.4, 0.7, 0.0, Driving::Lambda, &ops).unwrap();
        let want = scaled(&ops.sx, 0.7) + ops.problem_hamiltonian();
        assert!(max_abs_diff(&g, &want) < 1e-13);
    }

    #[test]
    fn g_two_paths_agree() {
        for n in [2, 3, 4] {
            let ops = FullSpaceOperators::new(n).unwrap();
            for (l, g, c) in [(0.3, 0.8, -1.7), (0.9, 0.15, 0.4), (0.05, 1.3, 2.2)] {
                for which in [Driving::Lambda, Driving::Gamma] {
                    let a = hermitian_g(l, g, c, which, &ops).unwrap();
                    let b = hermitian_g_expanded(l, g, c, which, &ops).unwrap();
                    assert!(max_abs_diff(&a, &b) < 1e-12, "N={n} {which:?}");
                }
            }
        }
    }

    #[test]
    fn lz_g_matches_pauli_expansion() {
        let [sx, _, sz] = pauli();
        let (l, g, h, a, b) = (0.35, 0.8, 0.1, -0.7, 0.25);
        let gl = lz_hermitian_g(l, g, h, a, Driving::Lambda);
        let want = scaled(&sx, g + 2.0 * l * h * a) - scaled(&sz, h + 2.0 * (1.0 - l) * g * a);
        assert!(max_abs_diff(&gl, &want) < 1e-14);
        let gg = lz_hermitian_g(l, g, h, b, Driving::Gamma);
        let want = scaled(&sx, 2.0 * l * h * b - (1.0 - l)) - scaled(&sz, 2.0 * (1.0 - l) * g * b);
        assert!(max_abs_diff(&gg, &want) < 1e-14);
    }

    #[test]
    fn lz_minimiser_matches_closed_form() {
        let (l, g, h) = (0.5, 0.5, 0.1);
        let (best, _) = nelder_mead_2d(|p| lz_action_trace(l, g, h, p[0], p[1]), [0.0, 0.0], 0.5, 1e-10, 5000);
        let c = gauge::lz_coefficients(l, g, h).unwrap();
        assert!((best[0] - c.alpha).abs() < 1e-6 && (best[1] - c.beta).abs() < 1e-6, "{best:?} vs {c:?}");
    }

    #[test]
    fn action_closed_form_matches_trace() {
        for n in [2, 3, 4, 5] {
            let ops = FullSpaceOperators::new(n).unwrap();
            for (l, g, a, b) in [(0.0, 1.0, 0.0, 0.0), (0.3, 0.6, -0.4, 0.2), (0.95, 0.12, 1.3, -2.0)] {
                let explicit = action_trace(l, g, a, b, &ops).unwrap();
                let closed = action_closed_form(l, g, a, b, n);
                assert_relative_eq!(explicit, closed, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn casimir_of_initial_state() {
        let n = 5;
        let ops = FullSpaceOperators::new(n).unwrap();
        let g = crate::dynamics::ground_state(&scaled(&ops.sx, -0.1)).unwrap();
        let s = n as f64 / 2.0;
        let c = crate::linalg::expectation(&ops.casimir(), &g.state);
        assert_relative_eq!(c, s * (s + 1.0), epsilon = 1e-10);
    }
}
