//! Dense complex matrices and the few factorizations the state engine needs:
//! a Hermitian eigensolver, a positive-semidefinite square root, and
//! Haar-distributed random unitaries.
//!
//! Matrices here are small (reduced densities of desk-scale states), so the
//! implementations favor robustness over asymptotics: the eigensolver is a
//! cyclic complex Jacobi iteration, which is simple, unconditionally stable,
//! and accurate to working precision for Hermitian input.

use crate::error::{Error, Result};
use crate::rng::Rng;
use num_complex::Complex64;

/// Dense row-major complex matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    /// Zero matrix of the given shape.
    pub fn zero(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    /// Identity matrix.
    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zero(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    /// Build from a function of (row, col).
    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Self {
        let mut m = CMatrix::zero(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Build from row-major data.
    pub fn from_data(rows: usize, cols: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::DimensionMismatch(format!(
                "matrix data length {} does not match shape {rows}x{cols}",
                data.len()
            )));
        }
        Ok(CMatrix { rows, cols, data })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    /// Borrow the row-major data.
    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    /// Matrix product.
    pub fn mul(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = CMatrix::zero(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Entrywise difference.
    pub fn sub(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix shapes differ".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        CMatrix::from_data(self.rows, self.cols, data)
    }

    /// Entrywise sum.
    pub fn add(&self, other: &CMatrix) -> Result<CMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::DimensionMismatch("matrix shapes differ".into()));
        }
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        CMatrix::from_data(self.rows, self.cols, data)
    }

    /// Trace (sum of diagonal entries).
    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Frobenius norm.
    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry magnitude.
    pub fn max_abs_entry(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    /// Maximum deviation from the conjugate transpose.
    pub fn hermiticity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if j >= self.rows || i >= self.cols {
                    continue;
                }
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    /// Maximum entry deviation from the identity.
    pub fn identity_error(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in 0..self.cols {
                let target = if i == j { 1.0 } else { 0.0 };
                worst = worst.max((self[(i, j)] - target).norm());
            }
        }
        worst
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Eigendecomposition of a Hermitian matrix: ascending real eigenvalues and a
/// unitary whose columns are the matching eigenvectors.
///
/// Cyclic complex Jacobi: each off-diagonal entry is phased to be real and
/// annihilated by a plane rotation; sweeps repeat until the off-diagonal mass
/// is negligible relative to the matrix scale.
pub fn hermitian_eigen(m: &CMatrix) -> Result<(Vec<f64>, CMatrix)> {
    if m.rows != m.cols {
        return Err(Error::DimensionMismatch(
            "eigendecomposition needs a square matrix".into(),
        ));
    }
    let n = m.rows;
    if n == 0 {
        return Ok((Vec::new(), CMatrix::zero(0, 0)));
    }
    let mut a = m.clone();
    let mut v = CMatrix::identity(n);
    let scale = m.frobenius_norm().max(1.0);
    let tol = 1e-14 * scale;

    let off = |a: &CMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let max_sweeps = 64;
    let mut converged = false;
    for _ in 0..max_sweeps {
        if off(&a) <= tol {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.norm() <= tol / (n as f64) {
                    continue;
                }
                // Phase the pivot to a nonnegative real, then rotate.
                let alpha = apq.arg();
                let beta = apq.norm();
                let app = a[(p, p)].re;
                let aqq = a[(q, q)].re;
                let tau = (aqq - app) / (2.0 * beta);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // 2x2 unitary G = diag(1, e^{-i alpha}) * [[c, s], [-s, c]].
                let g_pp = Complex64::new(c, 0.0);
                let g_pq = Complex64::new(s, 0.0);
                let phase = Complex64::from_polar(1.0, -alpha);
                let g_qp = -Complex64::new(s, 0.0) * phase;
                let g_qq = Complex64::new(c, 0.0) * phase;
                // A <- G† A G: columns then rows.
                for i in 0..n {
                    let aip = a[(i, p)];
                    let aiq = a[(i, q)];
                    a[(i, p)] = aip * g_pp + aiq * g_qp;
                    a[(i, q)] = aip * g_pq + aiq * g_qq;
                }
                for j in 0..n {
                    let apj = a[(p, j)];
                    let aqj = a[(q, j)];
                    a[(p, j)] = g_pp.conj() * apj + g_qp.conj() * aqj;
                    a[(q, j)] = g_pq.conj() * apj + g_qq.conj() * aqj;
                }
                // V <- V G.
                for i in 0..n {
                    let vip = v[(i, p)];
                    let viq = v[(i, q)];
                    v[(i, p)] = vip * g_pp + viq * g_qp;
                    v[(i, q)] = vip * g_pq + viq * g_qq;
                }
            }
        }
    }
    if !converged && off(&a) > tol {
        return Err(Error::Numerical(
            "Jacobi eigensolver did not converge".into(),
        ));
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
    order.sort_by(|&i, &j| diag[i].partial_cmp(&diag[j]).expect("finite eigenvalues"));
    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let vectors = CMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok((values, vectors))
}

/// Eigenvalues only, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Result<Vec<f64>> {
    Ok(hermitian_eigen(m)?.0)
}

/// Eigenvalues whose magnitude is at most this are flattened to exact zero
/// before taking square roots. The square root is not Lipschitz at zero, so
/// noise-scale eigenvalues would otherwise be amplified from `ε` to `√ε` and
/// contaminate everything downstream.
pub const SQRT_ZERO_CLAMP: f64 = 1e-12;

/// Positive-semidefinite square root via eigendecomposition.
///
/// Eigenvalues in `[floor, SQRT_ZERO_CLAMP]` are treated as numerical zeros;
/// anything below `floor` is rejected as genuinely negative input.
pub fn sqrt_psd(m: &CMatrix, floor: f64) -> Result<CMatrix> {
    let (values, vectors) = hermitian_eigen(m)?;
    let n = values.len();
    let mut roots = Vec::with_capacity(n);
    for &lam in &values {
        if lam < floor {
            return Err(Error::Numerical(format!(
                "matrix is not positive semidefinite: eigenvalue {lam:.3e} below floor {floor:.1e}"
            )));
        }
        roots.push(if lam <= SQRT_ZERO_CLAMP { 0.0 } else { lam.sqrt() });
    }
    // V diag(sqrt) V†.
    let mut out = CMatrix::zero(n, n);
    for i in 0..n {
        for j in 0..n {
            let mut s = Complex64::new(0.0, 0.0);
            for k in 0..n {
                s += vectors[(i, k)] * roots[k] * vectors[(j, k)].conj();
            }
            out[(i, j)] = s;
        }
    }
    Ok(out)
}

/// Haar-distributed random unitary: complex Gaussian matrix, orthonormalized
/// by modified Gram-Schmidt with positive normalization factors.
pub fn random_unitary(n: usize, rng: &mut Rng) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| Complex64::new(rng.gaussian(), rng.gaussian()) / 2f64.sqrt())
                .collect()
        })
        .collect();
    for j in 0..n {
        // Two orthogonalization passes for numerical safety.
        for _ in 0..2 {
            for k in 0..j {
                let proj: Complex64 = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
                for i in 0..n {
                    let c = cols[k][i];
                    cols[j][i] -= proj * c;
                }
            }
        }
        let norm: f64 = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in &mut cols[j] {
            *z /= norm;
        }
    }
    CMatrix::from_fn(n, n, |i, j| cols[j][i])
}
