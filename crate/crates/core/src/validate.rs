//! Seeded self-consistency suites.
//!
//! Every suite draws its own parameters from a ChaCha8 stream derived from
//! the run seed, so a report depends only on `(seed, draws)`.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::critical::{find_critical_field_zero_t, DEFAULT_TOL};
use crate::entanglement::{
    concurrence_x_state, evaluate_pair, extract_x_elements, pairwise_concurrence, thermal_concurrence_closed_form,
    zero_t_concurrence, ConcurrenceValue,
};
use crate::error::Result;
use crate::linalg::hermitian_eig;
use crate::model::{build_hamiltonian, reconcile_three_qubit, two_qubit_spectrum, ChainParams};
use crate::thermal::{gibbs_state, log_sum_exp, two_qubit_log_partition, two_qubit_partition_function};

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_DRAWS: usize = 1000;

/// Agreement required between the three concurrence routes.
pub const TRIANGLE_TOL: f64 = 1e-9;
pub const ZERO_T_LIMIT_TEMPERATURE: f64 = 1e-3;
pub const ZERO_T_LIMIT_TOL: f64 = 5e-3;
/// Ground gaps below this many `T` are too close to a level crossing for
/// the low-temperature comparison.
pub const CROSSING_GUARD: f64 = 20.0;
pub const MIDDLE_BRANCH_TOL: f64 = 1e-6;
pub const SPECTRUM_TOL: f64 = 1e-10;
pub const PARTITION_REL_TOL: f64 = 1e-10;
pub const SYMMETRY_TOL: f64 = 1e-10;
/// Smallest `Jz → −Jz` change that counts as a witnessed violation.
pub const JZ_VIOLATION_MIN: f64 = 1e-3;
pub const X_FORM_TOL: f64 = 1e-12;
pub const RING_TOL: f64 = 1e-10;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ValidateOptions {
    pub seed: u64,
    pub draws: usize,
    /// Negative control: the closed-form routes silently use `−Jz`.
    pub inject_fault: bool,
}

impl Default for ValidateOptions {
    fn default() -> Self {
        ValidateOptions {
            seed: DEFAULT_SEED,
            draws: DEFAULT_DRAWS,
            inject_fault: false,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SuiteResult {
    pub name: &'static str,
    pub passed: bool,
    pub max_deviation: f64,
    pub tolerance: f64,
    /// Extra lines printed under the status line.
    pub notes: Vec<String>,
}

impl fmt::Display for SuiteResult {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}: {} (max dev {:.1e}, tol {:.0e})",
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            self.max_deviation,
            self.tolerance
        )?;
        for n in &self.notes {
            write!(f, "\n  {n}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ValidationReport {
    pub options: ValidateOptions,
    pub suites: Vec<SuiteResult>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.suites.iter().all(|s| s.passed)
    }

    pub fn suite(&self, name: &str) -> Option<&SuiteResult> {
        self.suites.iter().find(|s| s.name == name)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "validate: seed={} draws={}{}",
            self.options.seed,
            self.options.draws,
            if self.options.inject_fault {
                " (fault injected)"
            } else {
                ""
            }
        )?;
        for s in &self.suites {
            writeln!(f, "{s}")?;
        }
        write!(f, "overall: {}", if self.passed() { "PASS" } else { "FAIL" })
    }
}

/// Uniform in `(0, hi]`.
fn open_closed(rng: &mut ChaCha8Rng, hi: f64) -> f64 {
    hi * (1.0 - rng.gen::<f64>())
}

/// Uniform in the open interval `(0, 1)`.
fn open_unit(rng: &mut ChaCha8Rng) -> f64 {
    loop {
        let u: f64 = rng.gen();
        if u > 0.0 {
            return u;
        }
    }
}

fn suite_rng(opts: &ValidateOptions, k: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(opts.seed.wrapping_mul(0x9E37_79B9_7F4A_7C15).wrapping_add(k))
}

/// `(p, T)` drawn from `J ∈ (0,3]`, `γ ∈ (0,1)`, `Jz ∈ [−3,3]`, `B ∈ [−4,4]`,
/// `T ∈ (0,5]`.
pub fn draw_two_qubit_thermal(rng: &mut ChaCha8Rng) -> (ChainParams, f64) {
    let j = open_closed(rng, 3.0);
    let gamma = open_unit(rng);
    let jz = rng.gen_range(-3.0..=3.0);
    let b = rng.gen_range(-4.0..=4.0);
    let t = open_closed(rng, 5.0);
    (ChainParams::from_j_gamma(2, j, gamma, jz, b).expect("finite draw"), t)
}

fn faulty(p: &ChainParams, fault: bool) -> ChainParams {
    if fault {
        p.with_jz(-p.j_z)
    } else {
        *p
    }
}

fn lambda_dev(a: &ConcurrenceValue, b: &ConcurrenceValue) -> f64 {
    a.lambdas
        .iter()
        .zip(&b.lambdas)
        .map(|(x, y)| (x - y).abs())
        .fold((a.c - b.c).abs(), f64::max)
}

/// Generic Wootters, X-state closed form and the thermal closed form agree
/// on concurrence and on every `λ`.
pub fn oracle_triangle(opts: &ValidateOptions) -> Result<SuiteResult> {
    let mut rng = suite_rng(opts, 1);
    let mut dev: f64 = 0.0;
    for _ in 0..opts.draws {
        let (p, t) = draw_two_qubit_thermal(&mut rng);
        let generic = pairwise_concurrence(&p, t, (0, 1))?;
        let rho = gibbs_state(&build_hamiltonian(&p)?, t)?.rho;
        let x = concurrence_x_state(&extract_x_elements(&rho)?.elements);
        let closed = thermal_concurrence_closed_form(&faulty(&p, opts.inject_fault), t)?;
        dev = dev
            .max(lambda_dev(&generic, &x))
            .max(lambda_dev(&generic, &closed))
            .max(lambda_dev(&x, &closed));
    }
    Ok(SuiteResult {
        name: "oracle-triangle",
        passed: dev <= TRIANGLE_TOL,
        max_deviation: dev,
        tolerance: TRIANGLE_TOL,
        notes: vec![],
    })
}

/// Piecewise ground-state concurrence against the thermal pipeline at low
/// temperature, plus the exact middle branch.
///
/// Draws whose lowest gap is under [`CROSSING_GUARD`]` · T` are skipped and
/// counted: there the low-temperature state still mixes the two lowest
/// levels and the limit is not yet reached.
pub fn zero_t_limit(opts: &ValidateOptions) -> Result<SuiteResult> {
    let mut rng = suite_rng(opts, 2);
    let mut dev: f64 = 0.0;
    let mut excluded = 0usize;
    for _ in 0..opts.draws {
        let j = open_closed(&mut rng, 3.0);
        let gamma = open_unit(&mut rng);
        let jz = open_closed(&mut rng, j);
        let b = rng.gen_range(-4.0..=4.0);
        let p = ChainParams::from_j_gamma(2, j, gamma, jz, b)?;
        let mut e = two_qubit_spectrum(&p)?.energies();
        e.sort_by(f64::total_cmp);
        if e[1] - e[0] < CROSSING_GUARD * ZERO_T_LIMIT_TEMPERATURE {
            excluded += 1;
            continue;
        }
        let analytic = zero_t_concurrence(&faulty(&p, opts.inject_fault))?;
        let thermal = pairwise_concurrence(&p, ZERO_T_LIMIT_TEMPERATURE, (0, 1))?.c;
        dev = dev.max((analytic - thermal).abs());
    }
    let b_mid = (2.25f64 - 0.09).sqrt();
    let mid = ChainParams::from_j_gamma(2, 1.0, 0.3, 0.5, b_mid)?;
    let mixture = pairwise_concurrence(&mid, 0.0, (0, 1))?.c;
    let mid_dev = (mixture - 0.4).abs();
    Ok(SuiteResult {
        name: "zero-t-limit",
        passed: dev <= ZERO_T_LIMIT_TOL && mid_dev <= MIDDLE_BRANCH_TOL,
        max_deviation: dev,
        tolerance: ZERO_T_LIMIT_TOL,
        notes: vec![
            format!("draws within {CROSSING_GUARD}T of a level crossing skipped: {excluded}"),
            format!("middle branch B={b_mid:.6}: C={mixture:.9} (dev {mid_dev:.1e}, tol {MIDDLE_BRANCH_TOL:.0e})"),
        ],
    })
}

/// Closed-form `Z` against the Boltzmann sum over the numerical spectrum.
pub fn partition_function(opts: &ValidateOptions) -> Result<SuiteResult> {
    let mut rng = suite_rng(opts, 3);
    let mut dev: f64 = 0.0;
    for _ in 0..opts.draws {
        let (p, t) = draw_two_qubit_thermal(&mut rng);
        let spectrum = hermitian_eig(&build_hamiltonian(&p)?)?;
        let q = faulty(&p, opts.inject_fault);
        let brute: f64 = spectrum.eigenvalues.iter().map(|e| (-e / t).exp()).sum();
        let closed = two_qubit_partition_function(&q, t)?;
        let rel = if brute.is_finite() && closed.is_finite() {
            ((closed - brute) / brute).abs()
        } else {
            // Overflow at very low T: compare ln Z instead.
            let exponents: Vec<f64> = spectrum.eigenvalues.iter().map(|e| -e / t).collect();
            (two_qubit_log_partition(&q, t)? - log_sum_exp(&exponents))
                .exp_m1()
                .abs()
        };
        dev = dev.max(rel);
    }
    Ok(SuiteResult {
        name: "partition-function",
        passed: dev <= PARTITION_REL_TOL,
        max_deviation: dev,
        tolerance: PARTITION_REL_TOL,
        notes: vec![],
    })
}

/// Analytic two-site energies against exact diagonalisation for couplings
/// and field in `[−3, 3]`.
pub fn two_qubit_energies(opts: &ValidateOptions) -> Result<SuiteResult> {
    let mut rng = suite_rng(opts, 4);
    let mut dev: f64 = 0.0;
    for _ in 0..opts.draws {
        let mut x = [0.0; 4];
        for v in &mut x {
            *v = rng.gen_range(-3.0..=3.0);
        }
        let p = ChainParams::new(2, x[0], x[1], x[2], x[3], crate::model::Boundary::Open)?;
        let mut analytic = two_qubit_spectrum(&faulty(&p, opts.inject_fault))?.energies();
        analytic.sort_by(f64::total_cmp);
        let numeric = hermitian_eig(&build_hamiltonian(&p)?)?.eigenvalues;
        for (a, n) in analytic.iter().zip(&numeric) {
            dev = dev.max((a - n).abs());
        }
    }
    Ok(SuiteResult {
        name: "two-qubit-spectrum",
        passed: dev <= SPECTRUM_TOL,
        max_deviation: dev,
        tolerance: SPECTRUM_TOL,
        notes: vec![],
    })
}

/// Closed-form three-site eigensystem against exact diagonalisation; the
/// reconciliation table is carried in the notes.
pub fn three_qubit_eigensystem(opts: &ValidateOptions) -> Result<SuiteResult> {
    let mut rng = suite_rng(opts, 5);
    let reference = ChainParams::from_j_gamma(3, 1.0, 0.3, 0.9, 4.0)?;
    let report = reconcile_three_qubit(&reference)?;
    let mut dev = report
        .energy_max_dev
        .max(report.residual_complemented_labels)
        .max(report.orthonormality_dev);
    for _ in 0..opts.draws.min(100) {
        let (p2, _) = draw_two_qubit_thermal(&mut rng);
        let p = ChainParams::from_j_gamma(3, p2.j_mean(), p2.gamma().unwrap_or(0.0), p2.j_z, p2.b_field)?;
        let r = reconcile_three_qubit(&p)?;
        dev = dev
            .max(r.energy_max_dev)
            .max(r.residual_complemented_labels)
            .max(r.orthonormality_dev);
    }
    Ok(SuiteResult {
        name: "three-qubit-eigensystem",
        passed: dev <= SPECTRUM_TOL,
        max_deviation: dev,
        tolerance: SPECTRUM_TOL,
        notes: report.to_string().lines().map(str::to_owned).collect(),
    })
}

/// Invariance under `J → −J`, `γ → −γ`, `B → −B`, and a witnessed
/// violation for `Jz → −Jz`.
pub fn symmetry(opts: &ValidateOptions) -> Result<SuiteResult> {
    let mut rng = suite_rng(opts, 6);
    let mut dev: f64 = 0.0;
    let mut jz_witness: f64 = 0.0;
    for _ in 0..opts.draws {
        let (p, t) = draw_two_qubit_thermal(&mut rng);
        let j = p.j_mean();
        let gamma = p.gamma().unwrap_or(0.0);
        let c = |q: &ChainParams| -> Result<f64> { Ok(pairwise_concurrence(q, t, (0, 1))?.c) };
        let closed = |q: &ChainParams| -> Result<f64> {
            Ok(thermal_concurrence_closed_form(&faulty(q, opts.inject_fault), t)?.c)
        };
        let base = c(&p)?;
        for q in [
            ChainParams::from_j_gamma(2, -j, gamma, p.j_z, p.b_field)?,
            ChainParams::from_j_gamma(2, j, -gamma, p.j_z, p.b_field)?,
            p.with_b(-p.b_field),
        ] {
            dev = dev.max((closed(&q)? - base).abs());
        }
        jz_witness = jz_witness.max((c(&p.with_jz(-p.j_z))? - base).abs());
    }
    Ok(SuiteResult {
        name: "symmetry",
        passed: dev <= SYMMETRY_TOL && jz_witness > JZ_VIOLATION_MIN,
        max_deviation: dev,
        tolerance: SYMMETRY_TOL,
        notes: vec![format!(
            "Jz -> -Jz largest change: {jz_witness:.3e} (must exceed {JZ_VIOLATION_MIN:.0e})"
        )],
    })
}

/// Three-site ring: X-form reduced states, ring symmetry of the pair
/// concurrence, and no entanglement at zero field.
pub fn three_qubit_structure(opts: &ValidateOptions) -> Result<SuiteResult> {
    let mut rng = suite_rng(opts, 7);
    let mut x_residual: f64 = 0.0;
    let mut ring_dev: f64 = 0.0;
    for _ in 0..opts.draws.min(200) {
        let (p2, t) = draw_two_qubit_thermal(&mut rng);
        let p = ChainParams::from_j_gamma(3, p2.j_mean(), p2.gamma().unwrap_or(0.0), p2.j_z, p2.b_field)?;
        let pairs = [(0, 1), (1, 2), (2, 0)];
        let mut cs = [0.0; 3];
        for (k, pair) in pairs.into_iter().enumerate() {
            let e = evaluate_pair(&p, t, pair)?;
            x_residual = x_residual.max(extract_x_elements(&e.reduced)?.off_x_residual);
            cs[k] = e.concurrence.c;
        }
        ring_dev = ring_dev
            .max((cs[0] - cs[1]).abs())
            .max((cs[1] - cs[2]).abs())
            .max((cs[2] - cs[0]).abs());
    }
    let mut zero_field: f64 = 0.0;
    for k in 0..20 {
        let jz = 1.5 * k as f64 / 19.0;
        let p = ChainParams::from_j_gamma(3, 1.0, 0.3, jz, 0.0)?;
        zero_field = zero_field.max(pairwise_concurrence(&p, 0.6, (0, 1))?.c);
    }
    let passed = x_residual < X_FORM_TOL && ring_dev <= RING_TOL && zero_field == 0.0;
    Ok(SuiteResult {
        name: "three-qubit-structure",
        passed,
        max_deviation: ring_dev.max(x_residual),
        tolerance: RING_TOL,
        notes: vec![
            format!("off-X residual: {x_residual:.1e} (tol {X_FORM_TOL:.0e})"),
            format!("ring pair spread: {ring_dev:.1e} (tol {RING_TOL:.0e})"),
            format!("max concurrence at B=0, T=0.6: {zero_field:.1e}"),
        ],
    })
}

/// Bisected critical field against `√((J+Jz)² − (Jγ)²)` for `0 < Jz ≤ J`.
///
/// `γ` is drawn below 0.85 so the jump at the critical field exceeds the
/// discontinuity threshold.
pub fn critical_field(opts: &ValidateOptions) -> Result<SuiteResult> {
    let mut rng = suite_rng(opts, 8);
    let mut dev: f64 = 0.0;
    for _ in 0..opts.draws.min(200) {
        let j = open_closed(&mut rng, 3.0);
        let gamma = 0.85 * open_unit(&mut rng);
        let jz = open_closed(&mut rng, j);
        let p = ChainParams::from_j_gamma(2, j, gamma, jz, 0.0)?;
        let jg = j * gamma;
        let exact = ((j + jz).powi(2) - jg * jg).sqrt();
        let found = find_critical_field_zero_t(&faulty(&p, opts.inject_fault), 0.0, 2.0 * exact + 1.0, DEFAULT_TOL);
        dev = dev.max(match found {
            Ok(c) => (c.location - exact).abs(),
            Err(_) => f64::INFINITY,
        });
    }
    Ok(SuiteResult {
        name: "critical-field",
        passed: dev <= 10.0 * DEFAULT_TOL,
        max_deviation: dev,
        tolerance: 10.0 * DEFAULT_TOL,
        notes: vec![],
    })
}

/// Runs every suite in a fixed order.
pub fn run_all(opts: &ValidateOptions) -> Result<ValidationReport> {
    let suites = vec![
        oracle_triangle(opts)?,
        zero_t_limit(opts)?,
        partition_function(opts)?,
        two_qubit_energies(opts)?,
        three_qubit_eigensystem(opts)?,
        symmetry(opts)?,
        three_qubit_structure(opts)?,
        critical_field(opts)?,
    ];
    Ok(ValidationReport { options: *opts, suites })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> ValidateOptions {
        ValidateOptions {
            seed: 7,
            draws: 50,
            inject_fault: false,
        }
    }

    #[test]
    fn small_run_passes_and_repeats() {
        let a = run_all(&small()).unwrap();
        assert!(a.passed(), "{a}");
        let b = run_all(&small()).unwrap();
        assert_eq!(a.to_string(), b.to_string());
    }

    #[test]
    fn injected_fault_fails() {
        let opts = ValidateOptions {
            inject_fault: true,
            ..small()
        };
        let r = run_all(&opts).unwrap();
        assert!(!r.passed());
        assert!(!r.suite("oracle-triangle").unwrap().passed);
        assert!(r.to_string().contains("oracle-triangle: FAIL"));
    }

    #[test]
    fn report_format() {
        let r = run_all(&small()).unwrap();
        let text = r.to_string();
        assert!(text.contains("oracle-triangle: PASS (max dev "), "{text}");
        assert!(text.contains("convention map"));
        assert!(text.ends_with("overall: PASS"));
    }

    #[test]
    fn draws_are_in_range() {
        let mut rng = suite_rng(&small(), 0);
        for _ in 0..1000 {
            let (p, t) = draw_two_qubit_thermal(&mut rng);
            let g = p.gamma().unwrap();
            assert!(p.j_mean() > 0.0 && p.j_mean() <= 3.0 + 1e-12);
            assert!(g > 0.0 && g < 1.0 + 1e-12);
            assert!(t > 0.0 && t <= 5.0);
        }
    }
}
