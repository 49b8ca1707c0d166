use proptest::prelude::*;

use xyzchain_core::critical::{find_critical_field_zero_t, scan_temperature, ScanOptions};
use xyzchain_core::entanglement::{concurrence_x_state, extract_x_elements, thermal_concurrence_closed_form};
use xyzchain_core::linalg::{kron, pauli, reduce, site_operator};
use xyzchain_core::model::{cyclic_shift_operator, two_qubit_spectrum};
use xyzchain_core::*;

fn hermitian(n: usize, raw: &[f64]) -> HermitianOperator {
    let m = Matrix::from_fn(n, |i, j| C64::new(raw[2 * (i * n + j)], raw[2 * (i * n + j) + 1]));
    HermitianOperator::new(m.add(&m.adjoint()).scale(C64::new(0.5, 0.0))).unwrap()
}

fn random_hermitian() -> impl Strategy<Value = HermitianOperator> {
    (1usize..=64)
        .prop_flat_map(|n| prop::collection::vec(-1.0f64..1.0, 2 * n * n).prop_map(move |raw| hermitian(n, &raw)))
}

/// Density matrix `M M† / Tr` on `n` qubits.
fn random_density(n: usize) -> impl Strategy<Value = HermitianOperator> {
    let d = 1usize << n;
    prop::collection::vec(-1.0f64..1.0, 2 * d * d).prop_map(move |raw| {
        let m = Matrix::from_fn(d, |i, j| C64::new(raw[2 * (i * d + j)], raw[2 * (i * d + j) + 1]));
        let g = m.matmul(&m.adjoint());
        let tr = g.trace().re;
        HermitianOperator::new(g.scale(C64::new(1.0 / tr, 0.0)).hermitian_part()).unwrap()
    })
}

fn small_matrix(d: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-2.0f64..2.0, 2 * d * d)
        .prop_map(move |raw| Matrix::from_fn(d, |i, j| C64::new(raw[2 * (i * d + j)], raw[2 * (i * d + j) + 1])))
}

fn integer_matrix(d: usize) -> impl Strategy<Value = Matrix> {
    prop::collection::vec(-4i32..=4, 2 * d * d).prop_map(move |raw| {
        Matrix::from_fn(d, |i, j| {
            C64::new(raw[2 * (i * d + j)] as f64, raw[2 * (i * d + j) + 1] as f64)
        })
    })
}

/// `(p, T)` with `J ∈ (0,3]`, `γ ∈ (0,1)`, `Jz ∈ [−3,3]`, `B ∈ [−4,4]`, `T ∈ (0,5]`.
fn two_qubit_draw() -> impl Strategy<Value = (ChainParams, f64)> {
    (1e-6f64..=3.0, 1e-6f64..1.0, -3.0f64..=3.0, -4.0f64..=4.0, 1e-3f64..=5.0)
        .prop_map(|(j, g, jz, b, t)| (ChainParams::from_j_gamma(2, j, g, jz, b).unwrap(), t))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn jacobi_reconstructs(a in random_hermitian()) {
        let s = hermitian_eig(&a).unwrap();
        let scale = a.as_matrix().max_abs();
        prop_assert!(s.reconstruct().max_abs_diff(a.as_matrix()) < 1e-9 * scale);
        prop_assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
        let v = &s.eigenvectors;
        prop_assert!(v.adjoint().matmul(v).max_abs_diff(&Matrix::identity(a.dim())) < 1e-10);
    }

    #[test]
    fn jacobi_is_repeatable(a in random_hermitian()) {
        let x = hermitian_eig(&a).unwrap();
        let y = hermitian_eig(&a).unwrap();
        prop_assert_eq!(x.eigenvalues, y.eigenvalues);
        prop_assert_eq!(x.eigenvectors, y.eigenvectors);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn partial_trace_preserves_trace(rho in random_density(3), a in 0usize..3, b in 0usize..3) {
        prop_assume!(a != b);
        let r = partial_trace(&rho, 3, (a, b)).unwrap();
        prop_assert!((r.trace() - rho.trace()).abs() < 1e-12);
    }

    #[test]
    fn sequential_tracing_commutes(rho in random_density(3)) {
        let m = rho.as_matrix();
        let once = reduce(m, 3, &[0]).unwrap();
        let two_then_one = reduce(&reduce(m, 3, &[0, 1]).unwrap(), 2, &[0]).unwrap();
        let one_then_two = reduce(&reduce(m, 3, &[0, 2]).unwrap(), 2, &[0]).unwrap();
        prop_assert!(once.max_abs_diff(&two_then_one) < 1e-12);
        prop_assert!(once.max_abs_diff(&one_then_two) < 1e-12);
    }

    #[test]
    fn kron_is_exactly_associative_when_products_are_exact(
        a in integer_matrix(2), b in integer_matrix(3), c in integer_matrix(2),
    ) {
        prop_assert_eq!(kron(&kron(&a, &b), &c), kron(&a, &kron(&b, &c)));
    }

    #[test]
    fn kron_is_associative_to_rounding(a in small_matrix(2), b in small_matrix(2), c in small_matrix(2)) {
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        let scale = left.max_abs().max(f64::MIN_POSITIVE);
        prop_assert!(left.max_abs_diff(&right) <= 4.0 * f64::EPSILON * scale);
    }

    #[test]
    fn hamiltonian_is_real_symmetric(
        n in 2usize..=5, jx in -3.0f64..3.0, jy in -3.0f64..3.0, jz in -3.0f64..3.0, b in -3.0f64..3.0,
    ) {
        let p = ChainParams::new(n, jx, jy, jz, b, Boundary::default_for(n)).unwrap();
        let h = build_hamiltonian(&p).unwrap();
        prop_assert_eq!(h.as_matrix().max_imag(), 0.0);
        prop_assert_eq!(h.as_matrix().max_abs_diff(&h.as_matrix().transpose()), 0.0);
    }

    #[test]
    fn ring_commutes_with_cyclic_shift(
        jx in -3.0f64..3.0, jy in -3.0f64..3.0, jz in -3.0f64..3.0, b in -3.0f64..3.0,
    ) {
        let p = ChainParams::new(3, jx, jy, jz, b, Boundary::Periodic).unwrap();
        let h = build_hamiltonian(&p).unwrap();
        let shift = cyclic_shift_operator(3);
        prop_assert!(h.as_matrix().commutator(&shift).max_abs() < 1e-12);
    }

    #[test]
    fn magnetisation_conserved_without_anisotropy(
        n in 2usize..=4, j in -3.0f64..3.0, jz in -3.0f64..3.0, b in -3.0f64..3.0,
    ) {
        let p = ChainParams::from_j_gamma(n, j, 0.0, jz, b).unwrap();
        let h = build_hamiltonian(&p).unwrap();
        let mz = (0..n).fold(Matrix::zeros(1 << n), |acc, q| acc.add(&site_operator(&pauli::z(), q, n)));
        prop_assert!(h.as_matrix().commutator(&mz).max_abs() < 1e-12);
    }

    #[test]
    fn gibbs_commutes_with_hamiltonian(
        n in 2usize..=4, jx in -3.0f64..3.0, jy in -3.0f64..3.0, jz in -3.0f64..3.0, b in -3.0f64..3.0,
        t in 0.0f64..5.0,
    ) {
        let p = ChainParams::new(n, jx, jy, jz, b, Boundary::default_for(n)).unwrap();
        let h = build_hamiltonian(&p).unwrap();
        let rho = gibbs_state(&h, t).unwrap().rho;
        prop_assert!(rho.as_matrix().commutator(h.as_matrix()).max_abs() < 1e-10);
        prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn purity_non_increasing_in_temperature((p, _) in two_qubit_draw(), ts in prop::collection::vec(1e-3f64..5.0, 2..12)) {
        let mut ts = ts;
        ts.sort_by(f64::total_cmp);
        let h = build_hamiltonian(&p).unwrap();
        let purity = |t: f64| {
            let rho = gibbs_state(&h, t).unwrap().rho;
            rho.as_matrix().matmul(rho.as_matrix()).trace().re
        };
        let values: Vec<f64> = ts.iter().map(|&t| purity(t)).collect();
        for w in values.windows(2) {
            prop_assert!(w[1] <= w[0] + 1e-12, "{values:?} at {ts:?}");
        }
    }

    #[test]
    fn concurrence_and_lambdas_in_range(n in 2usize..=4, (p2, t) in two_qubit_draw()) {
        let p = ChainParams::from_j_gamma(n, p2.j_mean(), p2.gamma().unwrap(), p2.j_z, p2.b_field).unwrap();
        let c = pairwise_concurrence(&p, t, (0, 1)).unwrap();
        prop_assert!((0.0..=1.0).contains(&c.c));
        prop_assert!(c.lambdas.iter().all(|&l| l >= 0.0));
        prop_assert!(c.lambdas.windows(2).all(|w| w[0] >= w[1]));
    }

    #[test]
    fn x_form_of_chain_reduced_states(n in 2usize..=4, (p2, t) in two_qubit_draw(), a in 0usize..4, b in 0usize..4) {
        prop_assume!(a < n && b < n && a != b);
        let p = ChainParams::from_j_gamma(n, p2.j_mean(), p2.gamma().unwrap(), p2.j_z, p2.b_field).unwrap();
        let h = build_hamiltonian(&p).unwrap();
        let rho = gibbs_state(&h, t).unwrap().rho;
        let m = partial_trace(&rho, n, (a, b)).unwrap();
        // Parity blocks survive exactly; only the population symmetry is approximate.
        let x = extract_x_elements(&m);
        if n == 2 || p.boundary == Boundary::Periodic {
            prop_assert!(x.unwrap().off_x_residual < 1e-12);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    #[test]
    fn two_qubit_spectrum_matches_diagonalisation(
        jx in -3.0f64..=3.0, jy in -3.0f64..=3.0, jz in -3.0f64..=3.0, b in -3.0f64..=3.0,
    ) {
        let p = ChainParams::new(2, jx, jy, jz, b, Boundary::Open).unwrap();
        let mut analytic = two_qubit_spectrum(&p).unwrap().energies();
        analytic.sort_by(f64::total_cmp);
        let numeric = hermitian_eig(&build_hamiltonian(&p).unwrap()).unwrap().eigenvalues;
        for (a, n) in analytic.iter().zip(&numeric) {
            prop_assert!((a - n).abs() < 1e-10);
        }
    }

    #[test]
    fn oracle_triangle((p, t) in two_qubit_draw()) {
        let generic = pairwise_concurrence(&p, t, (0, 1)).unwrap();
        let rho = gibbs_state(&build_hamiltonian(&p).unwrap(), t).unwrap().rho;
        let x = concurrence_x_state(&extract_x_elements(&rho).unwrap().elements);
        let closed = thermal_concurrence_closed_form(&p, t).unwrap();
        for (u, v) in [(&generic, &x), (&generic, &closed), (&x, &closed)] {
            prop_assert!((u.c - v.c).abs() < 1e-9);
            for k in 0..4 {
                prop_assert!((u.lambdas[k] - v.lambdas[k]).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn substitution_invariances((p, t) in two_qubit_draw()) {
        let (j, g) = (p.j_mean(), p.gamma().unwrap());
        let c = pairwise_concurrence(&p, t, (0, 1)).unwrap().c;
        for q in [
            ChainParams::from_j_gamma(2, -j, g, p.j_z, p.b_field).unwrap(),
            ChainParams::from_j_gamma(2, j, -g, p.j_z, p.b_field).unwrap(),
            p.with_b(-p.b_field),
        ] {
            prop_assert!((pairwise_concurrence(&q, t, (0, 1)).unwrap().c - c).abs() < 1e-10);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn critical_field_matches_crossing(j in 1e-3f64..=3.0, g in 1e-3f64..0.85, frac in 1e-3f64..=1.0) {
        let jz = frac * j;
        let p = ChainParams::from_j_gamma(2, j, g, jz, 0.0).unwrap();
        let exact = ((j + jz).powi(2) - (j * g).powi(2)).sqrt();
        let tol = 1e-6;
        let found = find_critical_field_zero_t(&p, 0.0, 2.0 * exact + 1.0, tol).unwrap();
        prop_assert!((found.location - exact).abs() <= 10.0 * tol);
        prop_assert!(found.bracket_width <= tol);
    }

    #[test]
    fn sweep_bits_independent_of_threads(
        n in 2usize..=3, jz in -1.0f64..1.5, steps_b in 2usize..6, steps_t in 2usize..6, threads in 2usize..6,
    ) {
        let spec = SweepSpec::new(
            ChainParams::from_j_gamma(n, 1.0, 0.3, jz, 0.0).unwrap(),
            vec![
                Axis::new(SweepParam::B, 0.0, 4.0, steps_b).unwrap(),
                Axis::new(SweepParam::T, 0.01, 2.0, steps_t).unwrap(),
            ],
            0.0,
        );
        let a = run_sweep(&spec, Some(1)).unwrap();
        let b = run_sweep(&spec, Some(threads)).unwrap();
        prop_assert_eq!(a.records.len(), steps_b * steps_t);
        for (x, y) in a.records.iter().zip(&b.records) {
            prop_assert_eq!(x.concurrence.to_bits(), y.concurrence.to_bits());
            prop_assert_eq!(x.log_partition.to_bits(), y.log_partition.to_bits());
        }
    }
}

#[test]
fn jz_sign_flip_is_not_a_symmetry() {
    let p = ChainParams::from_j_gamma(2, 1.0, 0.3, 0.9, 1.1).unwrap();
    let a = pairwise_concurrence(&p, 1.0, (0, 1)).unwrap().c;
    let b = pairwise_concurrence(&p.with_jz(-0.9), 1.0, (0, 1)).unwrap().c;
    assert!((a - b).abs() > 1e-3, "{a} vs {b}");
}

#[test]
fn zero_temperature_limit_consistency() {
    for (jz, b) in [(0.0, 0.5), (0.9, 1.1), (0.5, 3.0), (-0.7, 2.0)] {
        let h = build_hamiltonian(&ChainParams::from_j_gamma(2, 1.0, 0.3, jz, b).unwrap()).unwrap();
        let zero = gibbs_state(&h, 0.0).unwrap().rho;
        let small = gibbs_state(&h, 1e-6).unwrap().rho;
        assert!(zero.as_matrix().max_abs_diff(small.as_matrix()) < 1e-4);
    }
}

#[test]
fn interval_counts_stable_under_eps_zero_scaling() {
    for (jz, b) in [(0.0, 1.1), (0.9, 1.1), (0.0, 4.0), (0.9, 4.0), (0.5, 2.0)] {
        let p = ChainParams::from_j_gamma(2, 1.0, 0.3, jz, b).unwrap();
        let counts: Vec<usize> = [1e-7, 1e-6, 1e-5]
            .iter()
            .map(|&eps| {
                let opts = ScanOptions {
                    eps_zero: eps,
                    ..ScanOptions::default()
                };
                scan_temperature(&p, 0.01, 3.0, &opts).unwrap().intervals.len()
            })
            .collect();
        assert!(counts.windows(2).all(|w| w[0] == w[1]), "Jz={jz} B={b}: {counts:?}");
    }
}

#[test]
fn revival_boundaries_agree_with_critical_temperatures() {
    for (jz, b) in [(0.0, 1.1), (0.9, 4.0), (0.2, 1.1)] {
        let p = ChainParams::from_j_gamma(2, 1.0, 0.3, jz, b).unwrap();
        let (lo, hi) = (0.01, 3.0);
        let resolution = 200;
        let spacing = (hi - lo) / (resolution - 1) as f64;
        let intervals = detect_revival(&p, (lo, hi), resolution).unwrap();
        let first = find_critical_temperature(&p, lo, hi, 1e-6, Which::FirstAbove).unwrap();
        let last = find_critical_temperature(&p, lo, hi, 1e-6, Which::LastBelow).unwrap();
        assert!((intervals[0].end - first.location).abs() <= spacing);
        assert!((intervals.last().unwrap().end - last.location).abs() <= spacing);
    }
}
