//! Small dense helpers on top of `nalgebra` for Hermitian matrices.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64 as C64;

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

pub const I: C64 = C64 { re: 0.0, im: 1.0 };

/// Eigen-decomposition of a Hermitian matrix with eigenvalues sorted ascending.
///
/// Column `k` of the returned matrix is the eigenvector for `values[k]`.
pub fn eigh(h: &CMatrix) -> (Vec<f64>, CMatrix) {
    let n = h.nrows();
    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Ascending eigenvalues only.
pub fn eigvalsh(h: &CMatrix) -> Vec<f64> {
    let mut v: Vec<f64> = h.clone().symmetric_eigenvalues().iter().copied().collect();
    v.sort_by(f64::total_cmp);
    v
}

/// `exp(-i h dt)` for Hermitian `h`.
pub fn expm_hermitian(h: &CMatrix, dt: f64) -> CMatrix {
    let (vals, vecs) = eigh(h);
    let mut scaled = vecs.clone();
    for (k, &e) in vals.iter().enumerate() {
        let phase = C64::from_polar(1.0, -e * dt);
        for z in scaled.column_mut(k).iter_mut() {
            *z *= phase;
        }
    }
    scaled * vecs.adjoint()
}

/// `exp(-i h dt) ψ` for Hermitian `h`.
///
/// Tridiagonal input (every collective-spin Hamiltonian here) goes through a
/// Chebyshev expansion that needs only matrix-vector products; anything else
/// is exponentiated in its eigenbasis.
pub fn apply_exp_hermitian(h: &CMatrix, psi: &CVector, dt: f64) -> CVector {
    if let Some(t) = Tridiagonal::from_dense(h) {
        return t.apply_exp(psi, dt);
    }
    let (values, vectors) = eigh(h);
    let mut coeffs = vectors.ad_mul(psi);
    for (c, &e) in coeffs.iter_mut().zip(values.iter()) {
        *c *= C64::from_polar(1.0, -e * dt);
    }
    vectors * coeffs
}

/// Hermitian tridiagonal matrix: real diagonal and sub-diagonal `h[k+1, k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct Tridiagonal {
    pub diag: Vec<f64>,
    pub lower: Vec<C64>,
}

/// Chebyshev terms below this magnitude are dropped.
const CHEBYSHEV_CUTOFF: f64 = 1e-18;

impl Tridiagonal {
    /// `None` when `h` has any nonzero entry off the three central diagonals.
    pub fn from_dense(h: &CMatrix) -> Option<Self> {
        let n = h.nrows();
        for j in 0..n {
            for i in 0..n {
                if i.abs_diff(j) > 1 && h[(i, j)] != C64::new(0.0, 0.0) {
                    return None;
                }
            }
        }
        Some(Self {
            diag: (0..n).map(|k| h[(k, k)].re).collect(),
            lower: (1..n).map(|k| h[(k, k - 1)]).collect(),
        })
    }

    pub fn zeros(n: usize) -> Self {
        Self {
            diag: vec![0.0; n],
            lower: vec![C64::new(0.0, 0.0); n.saturating_sub(1)],
        }
    }

    pub fn dim(&self) -> usize {
        self.diag.len()
    }

    /// `self += a·other`.
    pub fn add_scaled(&mut self, a: f64, other: &Tridiagonal) {
        for (d, o) in self.diag.iter_mut().zip(&other.diag) {
            *d += a * o;
        }
        for (l, o) in self.lower.iter_mut().zip(&other.lower) {
            *l += o * a;
        }
    }

    pub fn mul_vec(&self, x: &CVector) -> CVector {
        let mut out = CVector::zeros(self.dim());
        self.apply_scaled(x.as_slice(), 0.0, 1.0, out.as_mut_slice());
        out
    }

    pub fn to_dense(&self) -> CMatrix {
        let n = self.dim();
        let mut m = CMatrix::zeros(n, n);
        for k in 0..n {
            m[(k, k)] = C64::new(self.diag[k], 0.0);
            if k + 1 < n {
                m[(k + 1, k)] = self.lower[k];
                m[(k, k + 1)] = self.lower[k].conj();
            }
        }
        m
    }

    /// `out = (self − shift)·x / scale`.
    fn apply_scaled(&self, x: &[C64], shift: f64, scale: f64, out: &mut [C64]) {
        let n = self.dim();
        for k in 0..n {
            let mut acc = x[k] * (self.diag[k] - shift);
            if k > 0 {
                acc += self.lower[k - 1] * x[k - 1];
            }
            if k + 1 < n {
                acc += self.lower[k].conj() * x[k + 1];
            }
            out[k] = acc / scale;
        }
    }

    /// Gershgorin enclosure of the spectrum.
    fn spectral_bounds(&self) -> (f64, f64) {
        let n = self.dim();
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for k in 0..n {
            let mut radius = 0.0;
            if k > 0 {
                radius += self.lower[k - 1].norm();
            }
            if k + 1 < n {
                radius += self.lower[k].norm();
            }
            lo = lo.min(self.diag[k] - radius);
            hi = hi.max(self.diag[k] + radius);
        }
        (lo, hi)
    }

    /// `exp(-i self dt) ψ` by Chebyshev expansion on the Gershgorin interval.
    pub fn apply_exp(&self, psi: &CVector, dt: f64) -> CVector {
        let n = self.dim();
        let (lo, hi) = self.spectral_bounds();
        let center = 0.5 * (lo + hi);
        let half_width = 0.5 * (hi - lo);
        let global = C64::from_polar(1.0, -center * dt);
        let z = half_width * dt.abs();
        if z == 0.0 {
            return psi * global;
        }
        let bessel = bessel_j_sequence(z, (2.0 * z).ceil() as usize + 40);
        // exp(-i x z) = J₀(z) + 2 Σ_k (−i)^k J_k(z) T_k(x), sign of dt folded into the phase
        let minus_i = if dt >= 0.0 { -I } else { I };

        let mut prev: Vec<C64> = psi.iter().copied().collect();
        let mut curr = vec![C64::new(0.0, 0.0); n];
        self.apply_scaled(&prev, center, half_width, &mut curr);
        let mut out: Vec<C64> = prev.iter().map(|&v| v * bessel[0]).collect();
        let mut phase = minus_i;
        let mut next = vec![C64::new(0.0, 0.0); n];
        for (k, &jk) in bessel.iter().enumerate().skip(1) {
            let c = phase * (2.0 * jk);
            for (o, &v) in out.iter_mut().zip(&curr) {
                *o += c * v;
            }
            if k as f64 > z && jk.abs() < CHEBYSHEV_CUTOFF {
                break;
            }
            self.apply_scaled(&curr, center, half_width, &mut next);
            for (nx, &pv) in next.iter_mut().zip(&prev) {
                *nx = 2.0 * *nx - pv;
            }
            std::mem::swap(&mut prev, &mut curr);
            std::mem::swap(&mut curr, &mut next);
            phase *= minus_i;
        }
        CVector::from_iterator(n, out.into_iter().map(|v| v * global))
    }
}

/// `J_0(z) … J_kmax(z)` for `z > 0` by Miller's backward recurrence,
/// normalised with `J₀ + 2 Σ J_{2k} = 1`.
pub fn bessel_j_sequence(z: f64, kmax: usize) -> Vec<f64> {
    let mut out = vec![0.0; kmax + 1];
    if z < 1e-300 {
        out[0] = 1.0;
        return out;
    }
    let top = kmax.max(z.ceil() as usize) + 30 + (160.0 * (kmax as f64 + z)).sqrt() as usize;
    let start = top + top % 2;
    let mut above = 0.0_f64;
    let mut here = 1e-300_f64;
    let mut even_sum = 0.0_f64;
    for k in (1..=start).rev() {
        let below = 2.0 * k as f64 / z * here - above;
        above = here;
        here = below;
        let idx = k - 1;
        if idx <= kmax {
            out[idx] = here;
        }
        if idx % 2 == 0 && idx > 0 {
            even_sum += here;
        }
        if here.abs() > 1e250 {
            here *= 1e-250;
            above *= 1e-250;
            even_sum *= 1e-250;
            for v in out.iter_mut() {
                *v *= 1e-250;
            }
        }
    }
    let norm = here + 2.0 * even_sum;
    for v in out.iter_mut() {
        *v /= norm;
    }
    out
}

pub fn commutator(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a * b - b * a
}

/// Largest entrywise deviation from Hermiticity.
pub fn hermiticity_error(h: &CMatrix) -> f64 {
    let mut worst = 0.0_f64;
    for i in 0..h.nrows() {
        for j in 0..h.ncols() {
            worst = worst.max((h[(i, j)] - h[(j, i)].conj()).norm());
        }
    }
    worst
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// `Tr[a b]` without forming the product.
pub fn trace_product(a: &CMatrix, b: &CMatrix) -> C64 {
    let n = a.nrows();
    let mut acc = C64::new(0.0, 0.0);
    for i in 0..n {
        for k in 0..n {
            acc += a[(i, k)] * b[(k, i)];
        }
    }
    acc
}

pub fn real_diagonal(values: &[f64]) -> CMatrix {
    CMatrix::from_diagonal(&CVector::from_iterator(
        values.len(),
        values.iter().map(|&v| C64::new(v, 0.0)),
    ))
}

/// Expectation value `<psi|h|psi>` (real part; `h` is Hermitian).
pub fn expectation(h: &CMatrix, psi: &CVector) -> f64 {
    psi.dotc(&(h * psi)).re
}
