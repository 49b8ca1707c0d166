//! Dense complex linear algebra sized for few-qubit operators.
//!
//! Matrices are square and stored row-major. Basis labels follow the
//! most-significant-bit-first convention: qubit 0 is the leftmost symbol of
//! `|b0 b1 ... b(N-1)>`, so `|01>` is index 1 and `|10>` is index 2.

mod eigen;
mod trace;

use std::fmt;
use std::ops::{Index, IndexMut};

pub use num_complex::Complex64 as C64;

pub use eigen::{hermitian_eig, singular_values, Spectrum};
pub use trace::{partial_trace, reduce};

use crate::error::{Error, Result};

/// Relative tolerance for the Hermiticity check.
pub const HERMITIAN_TOL: f64 = 1e-12;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Square complex matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    dim: usize,
    data: Vec<C64>,
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_fn(dim: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut data = Vec::with_capacity(dim * dim);
        for i in 0..dim {
            for j in 0..dim {
                data.push(f(i, j));
            }
        }
        Matrix { dim, data }
    }

    /// Builds a matrix from row-major real entries.
    ///
    /// Panics if `entries.len()` is not a perfect square.
    pub fn from_real(entries: &[f64]) -> Self {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        assert_eq!(dim * dim, entries.len(), "entry count must be a square");
        Matrix {
            dim,
            data: entries.iter().map(|&x| C64::new(x, 0.0)).collect(),
        }
    }

    /// Builds a matrix from row-major complex entries.
    pub fn from_complex(entries: Vec<C64>) -> Self {
        let dim = (entries.len() as f64).sqrt().round() as usize;
        assert_eq!(dim * dim, entries.len(), "entry count must be a square");
        Matrix { dim, data: entries }
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len());
        for (i, &x) in values.iter().enumerate() {
            m[(i, i)] = C64::new(x, 0.0);
        }
        m
    }

    /// Outer product `|a><b|`.
    pub fn outer(a: &[C64], b: &[C64]) -> Self {
        assert_eq!(a.len(), b.len());
        Self::from_fn(a.len(), |i, j| a[i] * b[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[C64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.dim, |i, j| self[(j, i)])
    }

    pub fn conj(&self) -> Self {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z.conj()).collect(),
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim, "matmul dimension mismatch");
        let n = self.dim;
        let mut out = Matrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let row = other.row(k);
                let dst = &mut out.data[i * n..(i + 1) * n];
                for (d, &b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(v.len(), self.dim);
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn scale(&self, s: C64) -> Matrix {
        Matrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim);
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.dim, other.dim);
        Matrix {
            dim: self.dim,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> f64 {
        assert_eq!(self.dim, other.dim);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// Largest imaginary part in magnitude.
    pub fn max_imag(&self) -> f64 {
        self.data.iter().map(|z| z.im.abs()).fold(0.0, f64::max)
    }

    /// `(A + A†) / 2`.
    pub fn hermitian_part(&self) -> Matrix {
        Self::from_fn(self.dim, |i, j| (self[(i, j)] + self[(j, i)].conj()) * 0.5)
    }

    /// Commutator `AB - BA`.
    pub fn commutator(&self, other: &Matrix) -> Matrix {
        self.matmul(other).sub(&other.matmul(self))
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = C64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.dim + j]
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for z in self.row(i) {
                write!(f, "{:>10.6}{:+.6}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product `a ⊗ b`.
pub fn kron(a: &Matrix, b: &Matrix) -> Matrix {
    let (na, nb) = (a.dim(), b.dim());
    let n = na * nb;
    let mut out = Matrix::zeros(n);
    for i in 0..na {
        for j in 0..na {
            let aij = a[(i, j)];
            for k in 0..nb {
                for l in 0..nb {
                    out[(i * nb + k, j * nb + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Pauli matrices in the basis where `|0>` is the `σᶻ = +1` state.
pub mod pauli {
    use super::{Matrix, C64};

    pub fn identity() -> Matrix {
        Matrix::identity(2)
    }

    pub fn x() -> Matrix {
        Matrix::from_real(&[0.0, 1.0, 1.0, 0.0])
    }

    pub fn y() -> Matrix {
        Matrix::from_complex(vec![
            C64::new(0.0, 0.0),
            C64::new(0.0, -1.0),
            C64::new(0.0, 1.0),
            C64::new(0.0, 0.0),
        ])
    }

    pub fn z() -> Matrix {
        Matrix::from_real(&[1.0, 0.0, 0.0, -1.0])
    }
}

/// Embeds a single-qubit operator at `site` of an `n`-qubit register.
pub fn site_operator(op: &Matrix, site: usize, n_qubits: usize) -> Matrix {
    assert_eq!(op.dim(), 2);
    assert!(site < n_qubits);
    (0..n_qubits).fold(Matrix::identity(1), |acc, k| {
        if k == site {
            kron(&acc, op)
        } else {
            kron(&acc, &pauli::identity())
        }
    })
}

/// Computational basis vector `|label>` of dimension `dim`.
pub fn basis_vector(dim: usize, label: usize) -> Vec<C64> {
    let mut v = vec![ZERO; dim];
    v[label] = ONE;
    v
}

/// A square matrix that satisfied the Hermiticity check at construction.
#[derive(Clone, Debug, PartialEq)]
pub struct HermitianOperator(Matrix);

impl HermitianOperator {
    /// Validates finiteness and `a[i][j] = conj(a[j][i])` to within
    /// [`HERMITIAN_TOL`] relative to the largest entry.
    pub fn new(m: Matrix) -> Result<Self> {
        check_hermitian(&m)?;
        Ok(HermitianOperator(m))
    }

    /// Takes the Hermitian part of `m` without validation beyond finiteness.
    pub(crate) fn from_hermitian_part(m: &Matrix) -> Self {
        HermitianOperator(m.hermitian_part())
    }

    pub fn dim(&self) -> usize {
        self.0.dim()
    }

    pub fn as_matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn into_matrix(self) -> Matrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.trace().re
    }
}

impl Index<(usize, usize)> for HermitianOperator {
    type Output = C64;

    fn index(&self, idx: (usize, usize)) -> &C64 {
        &self.0[idx]
    }
}

fn check_hermitian(m: &Matrix) -> Result<()> {
    if m.dim() == 0 {
        return Err(Error::DimensionMismatch { expected: 1, found: 0 });
    }
    let n = m.dim();
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            if !z.re.is_finite() || !z.im.is_finite() {
                return Err(Error::NonFinite { row: i, col: j });
            }
        }
    }
    let scale = m.max_abs();
    let mut worst = (0, 0, 0.0);
    for i in 0..n {
        for j in i..n {
            let dev = (m[(i, j)] - m[(j, i)].conj()).norm();
            if dev > worst.2 {
                worst = (i, j, dev);
            }
        }
    }
    if worst.2 > HERMITIAN_TOL * scale {
        return Err(Error::NotHermitian {
            row: worst.0,
            col: worst.1,
            deviation: worst.2,
        });
    }
    Ok(())
}
