//! Two-qubit concurrence.
//!
//! Three independent routes are provided and cross-checked in tests:
//!
//! * [`concurrence_wootters`] works on any two-qubit density matrix;
//! * [`concurrence_x_state`] uses the closed form for states whose only
//!   non-zero entries lie on the diagonal and anti-diagonal;
//! * [`two_qubit_thermal_lambdas`] evaluates the thermal two-qubit chain
//!   without building any matrix.
//!
//! [`zero_t_concurrence`] gives the piecewise ground-state value.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, partial_trace, singular_values, HermitianOperator, Matrix, C64};
use crate::model::{build_hamiltonian, two_qubit_spectrum, ChainParams};
use crate::thermal::{gibbs_from_spectrum, two_qubit_log_partition};

/// Roundoff allowance: density-matrix eigenvalues in `(−CLAMP_TOL, 0)` are
/// treated as zero, anything more negative is an error.
pub const CLAMP_TOL: f64 = 1e-10;

/// Largest tolerated entry outside the X pattern.
pub const X_RESIDUAL_TOL: f64 = 1e-9;

/// Largest tolerated imaginary part of an X-position coherence.
pub const X_IMAG_TOL: f64 = 1e-12;

/// The five independent entries of an X-form two-qubit density matrix
///
/// ```text
/// [u1 0 0 v ]
/// [0  w z 0 ]
/// [0  z w 0 ]
/// [v  0 0 u2]
/// ```
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XStateElements {
    pub u1: f64,
    pub u2: f64,
    pub w: f64,
    pub v: f64,
    pub z: f64,
}

impl XStateElements {
    /// Checks unit trace and positivity of both 2×2 blocks to within `1e-10`.
    pub fn validate(&self) -> Result<()> {
        let tol = 1e-10;
        let trace = self.u1 + self.u2 + 2.0 * self.w;
        if (trace - 1.0).abs() > tol {
            return Err(Error::TraceDeviation((trace - 1.0).abs()));
        }
        let bad = [
            (self.u1 >= -tol, self.u1),
            (self.u2 >= -tol, self.u2),
            (self.w >= -tol, self.w),
            (
                self.v.abs() <= (self.u1 * self.u2).max(0.0).sqrt() + tol,
                (self.u1 * self.u2).max(0.0).sqrt() - self.v.abs(),
            ),
            (self.z.abs() <= self.w + tol, self.w - self.z.abs()),
        ];
        match bad.iter().find(|(ok, _)| !ok) {
            Some(&(_, value)) => Err(Error::InvalidDensityMatrix(value)),
            None => Ok(()),
        }
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_real(&[
            self.u1, 0.0, 0.0, self.v, //
            0.0, self.w, self.z, 0.0, //
            0.0, self.z, self.w, 0.0, //
            self.v, 0.0, 0.0, self.u2,
        ])
    }
}

/// Result of [`extract_x_elements`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct XExtraction {
    pub elements: XStateElements,
    /// Largest entry outside the X pattern, including any mismatch between
    /// the two central populations.
    pub off_x_residual: f64,
}

#[inline]
fn on_x_pattern(i: usize, j: usize) -> bool {
    i == j || i + j == 3
}

/// `u1 = <00|ρ|00>`, `u2 = <11|ρ|11>`, `w = <01|ρ|01>`, `v = <00|ρ|11>`,
/// `z = <01|ρ|10>`.
pub fn extract_x_elements(rho4: &HermitianOperator) -> Result<XExtraction> {
    if rho4.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho4.dim(),
        });
    }
    let m = rho4.as_matrix();
    let mut residual = (m[(1, 1)] - m[(2, 2)]).norm();
    for i in 0..4 {
        for j in 0..4 {
            if !on_x_pattern(i, j) {
                residual = residual.max(m[(i, j)].norm());
            }
        }
    }
    if residual > X_RESIDUAL_TOL {
        return Err(Error::NotXForm { residual });
    }
    let imag = m[(0, 3)].im.abs().max(m[(1, 2)].im.abs());
    if imag > X_IMAG_TOL {
        return Err(Error::ComplexCoherence(imag));
    }
    Ok(XExtraction {
        elements: XStateElements {
            u1: m[(0, 0)].re,
            u2: m[(3, 3)].re,
            w: m[(1, 1)].re,
            v: m[(0, 3)].re,
            z: m[(1, 2)].re,
        },
        off_x_residual: residual,
    })
}

/// Concurrence `max(0, 2 max λ − Σ λ)` together with its `λ`s, sorted
/// descending.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ConcurrenceValue {
    pub c: f64,
    pub lambdas: [f64; 4],
}

pub fn concurrence_from_lambdas(lambdas: [f64; 4]) -> ConcurrenceValue {
    let mut l = lambdas;
    l.sort_by(|a, b| b.total_cmp(a));
    let sum: f64 = l.iter().sum();
    ConcurrenceValue {
        c: (2.0 * l[0] - sum).max(0.0),
        lambdas: l,
    }
}

/// Spin-flip matrix `σʸ ⊗ σʸ`.
fn spin_flip() -> Matrix {
    Matrix::from_real(&[
        0.0, 0.0, 0.0, -1.0, //
        0.0, 0.0, 1.0, 0.0, //
        0.0, 1.0, 0.0, 0.0, //
        -1.0, 0.0, 0.0, 0.0,
    ])
}

/// Wootters concurrence of an arbitrary two-qubit density matrix.
///
/// The `λ`s are the square roots of the eigenvalues of `R = ρ S ρ* S`. With
/// `ρ = A A†`, `A = V √P`, those equal the singular values of `τ = Aᵀ S A`,
/// which is how they are computed here.
pub fn concurrence_wootters(rho4: &HermitianOperator) -> Result<ConcurrenceValue> {
    if rho4.dim() != 4 {
        return Err(Error::DimensionMismatch {
            expected: 4,
            found: rho4.dim(),
        });
    }
    let spec = hermitian_eig(rho4)?;
    if let Some(&worst) = spec.eigenvalues.first() {
        if worst < -CLAMP_TOL {
            return Err(Error::InvalidDensityMatrix(worst));
        }
    }
    let roots: Vec<f64> = spec.eigenvalues.iter().map(|&p| p.max(0.0).sqrt()).collect();
    let a = Matrix::from_fn(4, |i, k| spec.eigenvectors[(i, k)] * roots[k]);
    let tau = a.transpose().matmul(&spin_flip()).matmul(&a);
    let sv = singular_values(&tau)?;
    Ok(concurrence_from_lambdas([sv[0], sv[1], sv[2], sv[3]]))
}

/// `λ₁,₂ = |w ± z|`, `λ₃,₄ = |√(u₁u₂) ± v|`.
pub fn concurrence_x_state(x: &XStateElements) -> ConcurrenceValue {
    let r = (x.u1 * x.u2).max(0.0).sqrt();
    concurrence_from_lambdas([(x.w + x.z).abs(), (x.w - x.z).abs(), (r + x.v).abs(), (r - x.v).abs()])
}

/// `asinh(|s|)` given `ln |s|`, for `|s|` far beyond `f64` range.
fn asinh_from_ln(ln_s: f64) -> f64 {
    if ln_s < 18.0 {
        ln_s.exp().asinh()
    } else {
        // asinh(s) = ln(2s) + 1/(4s²) + …
        ln_s + LN_2
    }
}

/// `ln sinh(x)` for `x > 0`.
fn ln_sinh(x: f64) -> f64 {
    if x < 18.0 {
        x.sinh().ln()
    } else {
        x - LN_2 + (-(-2.0 * x).exp()).ln_1p()
    }
}

/// Closed-form thermal `λ`s of the two-qubit chain, in the order
///
/// ```text
/// λ₁,₂ = Z⁻¹ e^{βJz/2} e^{±βJ}
/// λ₃,₄ = Z⁻¹ e^{−βJz/2} |√(1 + s²) ∓ s|,   s = (Jγ/η) sinh βη
/// ```
///
/// All factors are combined in log space, so any `t > 0` is safe.
pub fn two_qubit_thermal_lambdas(p: &ChainParams, t: f64) -> Result<[f64; 4]> {
    let spec = two_qubit_spectrum(p)?;
    if t.is_nan() || t <= 0.0 {
        return Err(Error::NonPositiveTemperature(t));
    }
    let beta = 1.0 / t;
    let j = p.j_mean();
    let jg = p.j_gamma();
    let log_z = two_qubit_log_partition(p, t)?;

    // ln(√(1+s²) + |s|) = asinh|s|; η ≥ |Jγ| so η > 0 whenever Jγ ≠ 0.
    let asinh_s = if jg == 0.0 {
        0.0
    } else {
        asinh_from_ln((jg.abs() / spec.eta).ln() + ln_sinh(beta * spec.eta))
    };
    let signed = asinh_s.copysign(jg);

    let half_jz = 0.5 * beta * p.j_z;
    Ok([
        (half_jz + beta * j - log_z).exp(),
        (half_jz - beta * j - log_z).exp(),
        (-half_jz - signed - log_z).exp(),
        (-half_jz + signed - log_z).exp(),
    ])
}

/// Thermal concurrence from [`two_qubit_thermal_lambdas`].
pub fn thermal_concurrence_closed_form(p: &ChainParams, t: f64) -> Result<ConcurrenceValue> {
    Ok(concurrence_from_lambdas(two_qubit_thermal_lambdas(p, t)?))
}

/// Whether the piecewise ground-state formula applies: `J > 0`,
/// `0 < γ < 1` and `Jz ≤ J`.
pub fn zero_t_closed_form_applies(p: &ChainParams) -> bool {
    let j = p.j_mean();
    matches!(p.gamma(), Some(g) if g > 0.0 && g < 1.0) && j > 0.0 && p.j_z <= j
}

/// Two-qubit concurrence at `T = 0`:
///
/// ```text
/// 1                  η < J + Jz
/// (1 − Jγ/η) / 2     η = J + Jz
/// Jγ/η               η > J + Jz
/// ```
///
/// The equality branch is taken within `1e-9 · max(1, spectral range)`.
/// Outside [`zero_t_closed_form_applies`] the ground-space mixture is
/// evaluated numerically instead.
pub fn zero_t_concurrence(p: &ChainParams) -> Result<f64> {
    let spec = two_qubit_spectrum(p)?;
    if !zero_t_closed_form_applies(p) {
        return Ok(pairwise_concurrence(p, 0.0, (0, 1))?.c);
    }
    let e = spec.energies();
    let range = e.iter().copied().fold(f64::NEG_INFINITY, f64::max) - e.iter().copied().fold(f64::INFINITY, f64::min);
    let tol = 1e-9 * range.max(1.0);

    let j = p.j_mean();
    let crossing = j + p.j_z;
    let ratio = p.j_gamma() / spec.eta;
    Ok(if (spec.eta - crossing).abs() <= tol {
        0.5 * (1.0 - ratio)
    } else if spec.eta < crossing {
        1.0
    } else {
        ratio
    })
}

/// Full numerical evaluation for one pair of sites.
#[derive(Clone, Debug)]
pub struct PairEvaluation {
    pub concurrence: ConcurrenceValue,
    pub reduced: HermitianOperator,
    pub log_partition: f64,
}

/// Hamiltonian, Gibbs state, reduction onto `pair`, then Wootters.
pub fn evaluate_pair(p: &ChainParams, t: f64, pair: (usize, usize)) -> Result<PairEvaluation> {
    let h = build_hamiltonian(p)?;
    let spectrum = hermitian_eig(&h)?;
    let state = gibbs_from_spectrum(&spectrum, t)?;
    let reduced = partial_trace(&state.rho, p.n_sites, pair)?;
    let concurrence = concurrence_wootters(&reduced)?;
    Ok(PairEvaluation {
        concurrence,
        reduced,
        log_partition: state.log_partition,
    })
}

pub fn pairwise_concurrence(p: &ChainParams, t: f64, pair: (usize, usize)) -> Result<ConcurrenceValue> {
    Ok(evaluate_pair(p, t, pair)?.concurrence)
}

/// Reduced state of a Bell pair `(|01> + |10>)/√2`; handy in tests.
pub fn bell_psi_plus() -> HermitianOperator {
    let a = std::f64::consts::FRAC_1_SQRT_2;
    let v = [
        C64::new(0.0, 0.0),
        C64::new(a, 0.0),
        C64::new(a, 0.0),
        C64::new(0.0, 0.0),
    ];
    HermitianOperator::new(Matrix::outer(&v, &v)).expect("outer product is Hermitian")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::basis_vector;
    use crate::thermal::gibbs_state;

    fn two(j: f64, gamma: f64, jz: f64, b: f64) -> ChainParams {
        ChainParams::from_j_gamma(2, j, gamma, jz, b).unwrap()
    }

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn extract_bell_and_mixed() {
        let x = extract_x_elements(&bell_psi_plus()).unwrap().elements;
        assert!(close(x.u1, 0.0, 1e-16) && close(x.u2, 0.0, 1e-16));
        assert!(close(x.w, 0.5, 1e-15) && close(x.z, 0.5, 1e-15) && x.v == 0.0);

        let mixed = HermitianOperator::new(Matrix::identity(4).scale(C64::new(0.25, 0.0))).unwrap();
        let x = extract_x_elements(&mixed).unwrap().elements;
        assert_eq!(
            x,
            XStateElements {
                u1: 0.25,
                u2: 0.25,
                w: 0.25,
                v: 0.0,
                z: 0.0
            }
        );
    }

    #[test]
    fn extract_rejects_non_x() {
        let v = [
            C64::new(0.5, 0.0),
            C64::new(0.5, 0.0),
            C64::new(0.5, 0.0),
            C64::new(0.5, 0.0),
        ];
        let plus_plus = HermitianOperator::new(Matrix::outer(&v, &v)).unwrap();
        assert!(matches!(extract_x_elements(&plus_plus), Err(Error::NotXForm { .. })));
        // |01><01| has unequal central populations.
        let e = basis_vector(4, 1);
        let p01 = HermitianOperator::new(Matrix::outer(&e, &e)).unwrap();
        assert!(matches!(extract_x_elements(&p01), Err(Error::NotXForm { .. })));
    }

    #[test]
    fn extract_rejects_complex_coherence() {
        let mut m = Matrix::identity(4).scale(C64::new(0.25, 0.0));
        m[(0, 3)] = C64::new(0.0, 0.1);
        m[(3, 0)] = C64::new(0.0, -0.1);
        let rho = HermitianOperator::new(m).unwrap();
        assert!(matches!(extract_x_elements(&rho), Err(Error::ComplexCoherence(_))));
    }

    #[test]
    fn gibbs_central_populations_equal() {
        for p in [two(1.0, 0.3, 0.9, 1.1), two(-2.0, 0.7, -1.3, 3.0)] {
            let rho = gibbs_state(&build_hamiltonian(&p).unwrap(), 0.4).unwrap().rho;
            assert!((rho[(1, 1)] - rho[(2, 2)]).norm() < 1e-12);
        }
    }

    #[test]
    fn wootters_trivial_states() {
        let bell = concurrence_wootters(&bell_psi_plus()).unwrap();
        assert!(close(bell.c, 1.0, 1e-14));
        let e = basis_vector(4, 0);
        let prod = HermitianOperator::new(Matrix::outer(&e, &e)).unwrap();
        assert_eq!(concurrence_wootters(&prod).unwrap().c, 0.0);
    }

    #[test]
    fn wootters_handles_complex_non_x_input() {
        // (|00> + i|11>)/√2 is maximally entangled; mix with 1/4 white noise.
        let a = std::f64::consts::FRAC_1_SQRT_2;
        let v = [
            C64::new(a, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, 0.0),
            C64::new(0.0, a),
        ];
        let pure = Matrix::outer(&v, &v);
        let noisy = pure
            .scale(C64::new(0.75, 0.0))
            .add(&Matrix::identity(4).scale(C64::new(0.0625, 0.0)));
        let c = concurrence_wootters(&HermitianOperator::new(noisy).unwrap()).unwrap();
        // Werner-type state: C = (3p − 1)/2 with p = 0.75.
        assert!(close(c.c, 0.625, 1e-14), "{c:?}");

        // A product of two mixed single-qubit states with complex coherences is separable.
        let a1 = Matrix::from_complex(vec![
            C64::new(0.6, 0.0),
            C64::new(0.1, 0.2),
            C64::new(0.1, -0.2),
            C64::new(0.4, 0.0),
        ]);
        let prod = crate::linalg::kron(&a1, &a1.conj());
        let c = concurrence_wootters(&HermitianOperator::new(prod).unwrap()).unwrap();
        assert_eq!(c.c, 0.0);
    }

    #[test]
    fn wootters_rejects_negative_density() {
        let rho = HermitianOperator::new(Matrix::diagonal(&[0.6, 0.6, 0.0, -0.2])).unwrap();
        assert!(matches!(
            concurrence_wootters(&rho),
            Err(Error::InvalidDensityMatrix(_))
        ));
        let small = HermitianOperator::new(Matrix::identity(2)).unwrap();
        assert!(matches!(
            concurrence_wootters(&small),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn x_state_closed_form_examples() {
        let bell = concurrence_x_state(&XStateElements {
            u1: 0.0,
            u2: 0.0,
            w: 0.5,
            v: 0.0,
            z: 0.5,
        });
        assert_eq!(bell.lambdas, [1.0, 0.0, 0.0, 0.0]);
        assert_eq!(bell.c, 1.0);

        let mixed = concurrence_x_state(&XStateElements {
            u1: 0.25,
            u2: 0.25,
            w: 0.25,
            v: 0.0,
            z: 0.0,
        });
        assert_eq!(mixed.lambdas, [0.25; 4]);
        assert_eq!(mixed.c, 0.0);

        let diag = concurrence_x_state(&XStateElements {
            u1: 0.7,
            u2: 0.1,
            w: 0.1,
            v: 0.0,
            z: 0.0,
        });
        assert_eq!(diag.c, 0.0);
    }

    #[test]
    fn x_state_agrees_with_wootters_on_reconstruction() {
        let x = XStateElements {
            u1: 0.4,
            u2: 0.2,
            w: 0.2,
            v: -0.25,
            z: 0.05,
        };
        x.validate().unwrap();
        let a = concurrence_x_state(&x);
        let b = concurrence_wootters(&HermitianOperator::new(x.to_matrix()).unwrap()).unwrap();
        assert!(close(a.c, b.c, 1e-12));
        for (p, q) in a.lambdas.iter().zip(b.lambdas) {
            assert!(close(*p, q, 1e-12));
        }
    }

    #[test]
    fn x_state_validation() {
        let bad_trace = XStateElements {
            u1: 0.5,
            u2: 0.5,
            w: 0.1,
            v: 0.0,
            z: 0.0,
        };
        assert!(bad_trace.validate().is_err());
        let bad_block = XStateElements {
            u1: 0.25,
            u2: 0.25,
            w: 0.25,
            v: 0.3,
            z: 0.0,
        };
        assert!(bad_block.validate().is_err());
    }

    #[test]
    fn closed_form_matches_generic_pipeline() {
        let p = two(1.0, 0.3, 0.9, 1.1);
        let t = 1.0;
        let closed = two_qubit_thermal_lambdas(&p, t).unwrap();
        let rho = gibbs_state(&build_hamiltonian(&p).unwrap(), t).unwrap().rho;
        let x = extract_x_elements(&rho).unwrap().elements;
        let via_x = concurrence_x_state(&x);
        let closed_sorted = concurrence_from_lambdas(closed);
        for (a, b) in closed_sorted.lambdas.iter().zip(via_x.lambdas) {
            assert!(close(*a, b, 1e-10));
        }
        let t = 0.5;
        let a = thermal_concurrence_closed_form(&p, t).unwrap().c;
        let b = pairwise_concurrence(&p, t, (0, 1)).unwrap().c;
        assert!(close(a, b, 1e-10), "{a} {b}");
    }

    #[test]
    fn xy_special_case_has_unit_jz_factors() {
        // Jz = 0: λ₁λ₂ = Z⁻², λ₃λ₄ = Z⁻².
        let p = two(1.0, 0.3, 0.0, 1.1);
        for t in [0.1, 0.7, 2.0] {
            let l = two_qubit_thermal_lambdas(&p, t).unwrap();
            let z = crate::thermal::two_qubit_partition_function(&p, t).unwrap();
            assert!(close(l[0] * l[1] * z * z, 1.0, 1e-12));
            assert!(close(l[2] * l[3] * z * z, 1.0, 1e-12));
        }
    }

    #[test]
    fn infinite_temperature_lambdas_quarter() {
        let p = two(1.0, 0.3, 0.9, 1.1);
        let l = two_qubit_thermal_lambdas(&p, 1e9).unwrap();
        for x in l {
            assert!(close(x, 0.25, 1e-8));
        }
        assert_eq!(concurrence_from_lambdas(l).c, 0.0);
    }

    #[test]
    fn closed_form_lambdas_finite_at_tiny_temperature() {
        let p = two(1.0, 0.3, 0.9, 3.0);
        let l = two_qubit_thermal_lambdas(&p, 1e-4).unwrap();
        assert!(l.iter().all(|x| x.is_finite() && *x >= 0.0));
        let c = concurrence_from_lambdas(l).c;
        let expect = zero_t_concurrence(&p).unwrap();
        assert!(close(c, expect, 1e-10), "{c} vs {expect}");
        assert!(two_qubit_thermal_lambdas(&p, 0.0).is_err());
    }

    #[test]
    fn zero_t_branches() {
        assert_eq!(zero_t_concurrence(&two(1.0, 0.3, 0.0, 0.0)).unwrap(), 1.0);

        let c = zero_t_concurrence(&two(1.0, 0.3, 0.0, 2.0)).unwrap();
        assert!(close(c, 0.3 / 4.09f64.sqrt(), 1e-15));
        assert!(close(c, 0.148341, 1e-6));
        let numeric = pairwise_concurrence(&two(1.0, 0.3, 0.0, 2.0), 1e-6, (0, 1)).unwrap().c;
        assert!(close(c, numeric, 1e-9));

        let b = (2.25f64 - 0.09).sqrt();
        let p = two(1.0, 0.3, 0.5, b);
        assert!(close(zero_t_concurrence(&p).unwrap(), 0.4, 1e-12));
        let mixture = pairwise_concurrence(&p, 0.0, (0, 1)).unwrap().c;
        assert!(close(mixture, 0.4, 1e-9), "{mixture}");
    }

    #[test]
    fn zero_t_falls_back_outside_region() {
        // Jz > J: closed form not used, numeric ground-space path instead.
        let p = two(1.0, 0.3, 1.5, 0.5);
        assert!(!zero_t_closed_form_applies(&p));
        let direct = pairwise_concurrence(&p, 0.0, (0, 1)).unwrap().c;
        assert_eq!(zero_t_concurrence(&p).unwrap(), direct);
    }

    #[test]
    fn ring_pairs_agree() {
        let p = ChainParams::from_j_gamma(3, 1.0, 0.3, 0.9, 1.0).unwrap();
        let a = pairwise_concurrence(&p, 0.6, (0, 1)).unwrap().c;
        let b = pairwise_concurrence(&p, 0.6, (1, 2)).unwrap().c;
        let c = pairwise_concurrence(&p, 0.6, (2, 0)).unwrap().c;
        assert!(close(a, b, 1e-10) && close(b, c, 1e-10));
        assert!(a > 0.0);
    }

    #[test]
    fn three_site_zero_field_unentangled() {
        let p = ChainParams::from_j_gamma(3, 1.0, 0.3, 0.9, 0.0).unwrap();
        assert!(pairwise_concurrence(&p, 0.6, (0, 1)).unwrap().c <= CLAMP_TOL);
    }

    #[test]
    fn three_site_reduced_state_is_x_form() {
        let p = ChainParams::from_j_gamma(3, 1.0, 0.3, 0.9, 1.0).unwrap();
        let e = evaluate_pair(&p, 1.0, (0, 1)).unwrap();
        let x = extract_x_elements(&e.reduced).unwrap();
        assert!(x.off_x_residual < 1e-12);
    }
}
