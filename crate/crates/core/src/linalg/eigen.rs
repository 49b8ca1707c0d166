use super::{HermitianOperator, Matrix, C64, ZERO};
use crate::error::{Error, Result};

/// Sweep cap for the cyclic Jacobi eigensolver.
pub const MAX_SWEEPS: usize = 100;

/// Stop once the off-diagonal Frobenius norm drops below this fraction of
/// the full Frobenius norm.
pub const CONVERGENCE_TOL: f64 = 1e-12;

/// Eigendecomposition of a Hermitian operator.
///
/// Eigenvalues are ascending; column `k` of `eigenvectors` belongs to
/// `eigenvalues[k]`. Within a degenerate cluster only the spanned subspace is
/// meaningful.
#[derive(Clone, Debug)]
pub struct Spectrum {
    pub eigenvalues: Vec<f64>,
    pub eigenvectors: Matrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn eigenvector(&self, k: usize) -> Vec<C64> {
        self.eigenvectors.column(k)
    }

    /// Projector onto the span of the listed eigenvectors.
    pub fn projector(&self, indices: &[usize]) -> Matrix {
        let n = self.dim();
        let mut p = Matrix::zeros(n);
        for &k in indices {
            p = p.add(&Matrix::outer(&self.eigenvector(k), &self.eigenvector(k)));
        }
        p
    }

    /// `V · diag(f(λ)) · V†`.
    pub fn map_eigenvalues(&self, f: impl Fn(f64) -> f64) -> Matrix {
        self.map_eigenvalues_indexed(|k| f(self.eigenvalues[k]))
    }

    /// `V · diag(w) · V†` with `w_k = weight(k)`.
    pub fn map_eigenvalues_indexed(&self, weight: impl Fn(usize) -> f64) -> Matrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let weights: Vec<f64> = (0..n).map(weight).collect();
        let mut out = Matrix::zeros(n);
        for (k, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = v[(i, k)] * w;
                if vik == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += vik * v[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> Matrix {
        self.map_eigenvalues(|x| x)
    }

    /// Indices whose eigenvalue lies within `tol` of the minimum.
    pub fn ground_cluster(&self, tol: f64) -> Vec<usize> {
        let e0 = self.eigenvalues[0];
        (0..self.dim())
            .take_while(|&k| self.eigenvalues[k] - e0 <= tol)
            .collect()
    }
}

fn off_diagonal_norm(m: &Matrix) -> f64 {
    let n = m.dim();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += m[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Plane rotation `(c, s, phase)` that annihilates the `(p, q)` entry of the
/// Hermitian 2×2 block `[[app, apq], [conj(apq), aqq]]`.
///
/// The unitary acts on columns as
/// `col_p' = c·col_p − s·conj(phase)·col_q`, `col_q' = s·col_p + c·conj(phase)·col_q`.
#[inline]
fn jacobi_rotation(app: f64, aqq: f64, apq: C64) -> (f64, f64, C64) {
    // Rescale first: for subnormal apq, apq / |apq| need not have unit modulus.
    let scale = apq.re.abs().max(apq.im.abs());
    let unit = apq / scale;
    let phase = unit / unit.norm();
    let b = scale * unit.norm();
    let theta = (aqq - app) / (2.0 * b);
    let t = if theta.abs() > 1e150 {
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    (c, t * c, phase)
}

#[inline]
fn rotate_columns(m: &mut Matrix, p: usize, q: usize, c: f64, s: f64, phase: C64) {
    let cp = phase.conj();
    for k in 0..m.dim() {
        let akp = m[(k, p)];
        let akq = m[(k, q)];
        m[(k, p)] = akp * c - akq * cp * s;
        m[(k, q)] = akp * s + akq * cp * c;
    }
}

#[inline]
fn rotate_rows(m: &mut Matrix, p: usize, q: usize, c: f64, s: f64, phase: C64) {
    for k in 0..m.dim() {
        let apk = m[(p, k)];
        let aqk = m[(q, k)];
        m[(p, k)] = apk * c - aqk * phase * s;
        m[(q, k)] = apk * s + aqk * phase * c;
    }
}

/// Cyclic Jacobi eigensolver for Hermitian matrices.
///
/// Pivots are visited in fixed row-major order and exact zeros are never
/// rotated, so block structure in the input (e.g. conserved parity) survives
/// exactly and repeated calls are bitwise identical.
pub fn hermitian_eig(a: &HermitianOperator) -> Result<Spectrum> {
    let n = a.dim();
    let mut m = a.as_matrix().clone();
    let mut v = Matrix::identity(n);
    let threshold = CONVERGENCE_TOL * m.frobenius_norm();

    let mut off = off_diagonal_norm(&m);
    let mut sweeps = 0;
    // One extra sweep after the criterion is met: convergence is quadratic,
    // so this takes eigenvector errors from ~1e-12 relative down to roundoff.
    let mut polished = false;
    loop {
        let converged = off <= threshold;
        if converged && (polished || off == 0.0) {
            break;
        }
        polished |= converged;
        if sweeps == MAX_SWEEPS {
            if converged {
                break;
            }
            return Err(Error::NoConvergence {
                sweeps,
                off_diagonal: off,
            });
        }
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let apq = m[(p, q)];
                if apq == ZERO {
                    continue;
                }
                let (c, s, phase) = jacobi_rotation(m[(p, p)].re, m[(q, q)].re, apq);
                rotate_columns(&mut m, p, q, c, s, phase);
                rotate_rows(&mut m, p, q, c, s, phase);
                rotate_columns(&mut v, p, q, c, s, phase);
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
                m[(p, p)].im = 0.0;
                m[(q, q)].im = 0.0;
            }
        }
        sweeps += 1;
        off = off_diagonal_norm(&m);
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let eigenvalues = order.iter().map(|&k| m[(k, k)].re).collect();
    let eigenvectors = Matrix::from_fn(n, |i, j| v[(i, order[j])]);
    Ok(Spectrum {
        eigenvalues,
        eigenvectors,
    })
}

/// Singular values of a square complex matrix, descending.
///
/// One-sided (Hestenes) Jacobi: columns are rotated pairwise until mutually
/// orthogonal; the singular values are then the column norms. Small singular
/// values come out with absolute accuracy near machine epsilon times the
/// matrix norm, which a square root of Gram-matrix eigenvalues cannot give.
pub fn singular_values(a: &Matrix) -> Result<Vec<f64>> {
    const ORTHO_TOL: f64 = 1e-15;
    let n = a.dim();
    let mut u = a.clone();
    let mut sweeps = 0;
    loop {
        let mut worst: f64 = 0.0;
        for p in 0..n.saturating_sub(1) {
            for q in p + 1..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, ZERO);
                for k in 0..n {
                    let (x, y) = (u[(k, p)], u[(k, q)]);
                    alpha += x.norm_sqr();
                    beta += y.norm_sqr();
                    gamma += x.conj() * y;
                }
                let g = gamma.norm();
                // Below this the inner product has no relative precision left.
                if g < 1e-280 || alpha == 0.0 || beta == 0.0 {
                    continue;
                }
                let rel = g / (alpha.sqrt() * beta.sqrt());
                worst = worst.max(rel);
                if rel <= ORTHO_TOL {
                    continue;
                }
                let (c, s, phase) = jacobi_rotation(alpha, beta, gamma);
                rotate_columns(&mut u, p, q, c, s, phase);
            }
        }
        sweeps += 1;
        if worst <= ORTHO_TOL {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_diagonal: worst,
            });
        }
    }
    let mut sv: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|i| u[(i, j)].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    sv.sort_by(|a, b| b.total_cmp(a));
    Ok(sv)
}
