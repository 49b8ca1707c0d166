use super::{HermitianOperator, Matrix, ZERO};
use crate::error::{Error, Result};

/// Trace tolerance required of a density matrix before reduction.
pub const TRACE_TOL: f64 = 1e-12;

fn validate_keep(n_qubits: usize, keep: &[usize]) -> Result<()> {
    for (i, &q) in keep.iter().enumerate() {
        if q >= n_qubits {
            return Err(Error::QubitOutOfRange { index: q, n_qubits });
        }
        if keep[..i].contains(&q) {
            return Err(Error::DuplicateQubit(q));
        }
    }
    Ok(())
}

/// Reduces `rho` onto the qubits in `keep`, tracing out all others.
///
/// The result uses `keep[0]` as its most significant qubit, so the order of
/// `keep` fixes the qubit order of the reduced operator. No trace condition
/// is imposed.
pub fn reduce(rho: &Matrix, n_qubits: usize, keep: &[usize]) -> Result<Matrix> {
    let expected = 1usize << n_qubits;
    if rho.dim() != expected {
        return Err(Error::DimensionMismatch {
            expected,
            found: rho.dim(),
        });
    }
    validate_keep(n_qubits, keep)?;

    let traced: Vec<usize> = (0..n_qubits).filter(|q| !keep.contains(q)).collect();
    let bit = |q: usize| 1usize << (n_qubits - 1 - q);
    let spread = |label: usize, qubits: &[usize]| -> usize {
        let k = qubits.len();
        qubits
            .iter()
            .enumerate()
            .filter(|(m, _)| (label >> (k - 1 - m)) & 1 == 1)
            .map(|(_, &q)| bit(q))
            .sum()
    };

    let kept_dim = 1usize << keep.len();
    let kept_index: Vec<usize> = (0..kept_dim).map(|r| spread(r, keep)).collect();
    let env_index: Vec<usize> = (0..1usize << traced.len()).map(|e| spread(e, &traced)).collect();

    let mut out = Matrix::zeros(kept_dim);
    for (r, &ri) in kept_index.iter().enumerate() {
        for (c, &ci) in kept_index.iter().enumerate() {
            let mut acc = ZERO;
            for &e in &env_index {
                acc += rho[(ri | e, ci | e)];
            }
            out[(r, c)] = acc;
        }
    }
    Ok(out)
}

/// Two-qubit reduced density matrix of the ordered pair `keep`.
pub fn partial_trace(rho: &HermitianOperator, n_qubits: usize, keep: (usize, usize)) -> Result<HermitianOperator> {
    let dev = (rho.as_matrix().trace() - 1.0).norm();
    if dev > TRACE_TOL {
        return Err(Error::TraceDeviation(dev));
    }
    let m = reduce(rho.as_matrix(), n_qubits, &[keep.0, keep.1])?;
    Ok(HermitianOperator::from_hermitian_part(&m))
}
