//! Anisotropic Heisenberg XYZ chains in a longitudinal field.
//!
//! Each bond `(i, j)` contributes
//!
//! ```text
//! ½ [Jx σˣᵢσˣⱼ + Jy σʸᵢσʸⱼ + Jz σᶻᵢσᶻⱼ + B (σᶻᵢ + σᶻⱼ)]
//! ```
//!
//! Two sites form a single open bond. Three or more sites default to a
//! ring. `|0>` is the `σᶻ = +1` state and qubit 0 is the leftmost label bit.
//!
//! The analytic spectra below are written the way they are usually printed,
//! where `|0>` denotes spin *down*. [`complement_label`] maps those labels
//! into this crate's basis; energies are unaffected because a global spin
//! flip together with `B → −B` is a symmetry and the spectrum is even in `B`.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, HermitianOperator, Matrix, C64, ZERO};

/// Largest supported chain length.
pub const MAX_SITES: usize = 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Boundary {
    Open,
    Periodic,
}

impl Boundary {
    /// Open for two sites, periodic otherwise.
    pub fn default_for(n_sites: usize) -> Self {
        if n_sites == 2 {
            Boundary::Open
        } else {
            Boundary::Periodic
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Boundary::Open => "open",
            Boundary::Periodic => "periodic",
        }
    }
}

impl fmt::Display for Boundary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Boundary {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "open" => Ok(Boundary::Open),
            "periodic" | "ring" => Ok(Boundary::Periodic),
            _ => Err(Error::InvalidParams(format!(
                "unknown boundary {s:?} (expected open or periodic)"
            ))),
        }
    }
}

/// Physical parameters of a uniform XYZ chain.
///
/// Couplings are stored as `(j_x, j_y)`; the `(J, γ)` view is derived.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ChainParams {
    pub n_sites: usize,
    pub j_x: f64,
    pub j_y: f64,
    pub j_z: f64,
    pub b_field: f64,
    pub boundary: Boundary,
}

impl ChainParams {
    pub fn new(n_sites: usize, j_x: f64, j_y: f64, j_z: f64, b_field: f64, boundary: Boundary) -> Result<Self> {
        let p = ChainParams {
            n_sites,
            j_x,
            j_y,
            j_z,
            b_field,
            boundary,
        };
        p.validate()?;
        Ok(p)
    }

    /// Parameters from the mean coupling `J` and anisotropy `γ`:
    /// `j_x = J(1+γ)`, `j_y = J(1−γ)`. Boundary follows [`Boundary::default_for`].
    pub fn from_j_gamma(n_sites: usize, j: f64, gamma: f64, j_z: f64, b_field: f64) -> Result<Self> {
        Self::new(
            n_sites,
            j * (1.0 + gamma),
            j * (1.0 - gamma),
            j_z,
            b_field,
            Boundary::default_for(n_sites),
        )
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_sites < 2 || self.n_sites > MAX_SITES {
            return Err(Error::InvalidParams(format!(
                "n_sites must be in 2..={MAX_SITES}, got {}",
                self.n_sites
            )));
        }
        if self.n_sites == 2 && self.boundary == Boundary::Periodic {
            return Err(Error::InvalidParams(
                "two sites share a single bond; a periodic boundary would count it twice".into(),
            ));
        }
        for (name, x) in [
            ("j_x", self.j_x),
            ("j_y", self.j_y),
            ("j_z", self.j_z),
            ("b_field", self.b_field),
        ] {
            if !x.is_finite() {
                return Err(Error::InvalidParams(format!("{name} is not finite")));
            }
        }
        Ok(())
    }

    /// `J = (j_x + j_y) / 2`.
    pub fn j_mean(&self) -> f64 {
        0.5 * (self.j_x + self.j_y)
    }

    /// `γ = (j_x − j_y) / (j_x + j_y)`, undefined when `j_x + j_y = 0`.
    pub fn gamma(&self) -> Option<f64> {
        let s = self.j_x + self.j_y;
        (s != 0.0).then(|| (self.j_x - self.j_y) / s)
    }

    /// The product `Jγ = (j_x − j_y) / 2`, defined for all couplings.
    pub fn j_gamma(&self) -> f64 {
        0.5 * (self.j_x - self.j_y)
    }

    pub fn dim(&self) -> usize {
        1 << self.n_sites
    }

    pub fn with_b(mut self, b: f64) -> Self {
        self.b_field = b;
        self
    }

    pub fn with_jz(mut self, j_z: f64) -> Self {
        self.j_z = j_z;
        self
    }

    /// Replaces `J` keeping `γ`.
    pub fn with_j(self, j: f64) -> Result<Self> {
        let gamma = self
            .gamma()
            .ok_or_else(|| Error::InvalidParams("gamma undefined for j_x + j_y = 0".into()))?;
        Ok(ChainParams {
            j_x: j * (1.0 + gamma),
            j_y: j * (1.0 - gamma),
            ..self
        })
    }

    /// Replaces `γ` keeping `J`.
    pub fn with_gamma(self, gamma: f64) -> Self {
        let j = self.j_mean();
        ChainParams {
            j_x: j * (1.0 + gamma),
            j_y: j * (1.0 - gamma),
            ..self
        }
    }

    /// Bonds `(i, i+1)`, closing the ring when periodic.
    pub fn bonds(&self) -> Vec<(usize, usize)> {
        let n = self.n_sites;
        let mut bonds: Vec<_> = (0..n - 1).map(|i| (i, i + 1)).collect();
        if self.boundary == Boundary::Periodic {
            bonds.push((n - 1, 0));
        }
        bonds
    }
}

/// Builds the chain Hamiltonian in the computational basis.
///
/// The result is exactly real-symmetric. A two-site ring is rejected since
/// it would count the single bond twice.
pub fn build_hamiltonian(p: &ChainParams) -> Result<HermitianOperator> {
    p.validate()?;
    let n = p.n_sites;
    let dim = p.dim();
    let bit = |q: usize| 1usize << (n - 1 - q);
    let spin = |x: usize, q: usize| if x & bit(q) == 0 { 1.0 } else { -1.0 };

    let mut h = Matrix::zeros(dim);
    for (a, b) in p.bonds() {
        let flip = bit(a) | bit(b);
        for x in 0..dim {
            let (sa, sb) = (spin(x, a), spin(x, b));
            h[(x, x)].re += 0.5 * (p.j_z * sa * sb + p.b_field * (sa + sb));
            // σʸσʸ|ab> = −sₐs_b |āb̄>
            h[(x ^ flip, x)].re += 0.5 * (p.j_x - p.j_y * sa * sb);
        }
    }
    HermitianOperator::new(h)
}

/// Basis label with every bit inverted, mapping spin-down-as-zero labels
/// into this crate's convention and back.
pub fn complement_label(label: usize, n_qubits: usize) -> usize {
    label ^ ((1usize << n_qubits) - 1)
}

/// Cyclic right shift `|b0 b1 … b(N−1)> → |b(N−1) b0 … b(N−2)>`.
pub fn cyclic_shift(label: usize, n_qubits: usize) -> Result<usize> {
    if n_qubits == 0 || n_qubits >= usize::BITS as usize || label >> n_qubits != 0 {
        return Err(Error::LabelOutOfRange { label, n_qubits });
    }
    Ok((label >> 1) | ((label & 1) << (n_qubits - 1)))
}

/// Permutation matrix of [`cyclic_shift`].
pub fn cyclic_shift_operator(n_qubits: usize) -> Matrix {
    let dim = 1 << n_qubits;
    let mut m = Matrix::zeros(dim);
    for x in 0..dim {
        m[(cyclic_shift(x, n_qubits).unwrap(), x)] = C64::new(1.0, 0.0);
    }
    m
}

/// Eigenvector of the real symmetric block `[[d, off], [off, −d]]` for the
/// eigenvalue `sign · √(d² + off²)`, via the rotation angle. Used where the
/// closed-form normalisation vanishes.
fn block_eigvec(d: f64, off: f64, upper: bool) -> (f64, f64) {
    let theta = 0.5 * off.atan2(d);
    let (s, c) = theta.sin_cos();
    if upper {
        (c, s)
    } else {
        (-s, c)
    }
}

/// Normalised `(d + s·η) e₁ + off e₂` with `η = √(d² + off²)`, falling back
/// to [`block_eigvec`] when `2η(η + s·d)` underflows.
///
/// `η + s·d` cancels when `s·d ≈ −η`; it is then taken as
/// `off² / (η − s·d)`, and `d + s·η = s(η + s·d)` reuses it.
fn closed_form_block_vector(d: f64, off: f64, eta: f64, upper: bool) -> (f64, f64) {
    let s = if upper { 1.0 } else { -1.0 };
    let t = if s * d >= 0.0 {
        eta + s * d
    } else {
        off * off / (eta - s * d)
    };
    let norm_sq = 2.0 * eta * t;
    if norm_sq > f64::MIN_POSITIVE && t > 0.0 {
        let inv = 1.0 / norm_sq.sqrt();
        (s * t * inv, off * inv)
    } else {
        block_eigvec(d, off, upper)
    }
}

/// Closed-form two-qubit energies `−Jz/2 ± J` (`|Ψ±>`) and `Jz/2 ± η` (`|Σ±>`)
/// with `η = √(B² + (Jγ)²)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AnalyticTwoQubitSpectrum {
    pub e_psi_plus: f64,
    pub e_psi_minus: f64,
    pub e_sigma_plus: f64,
    pub e_sigma_minus: f64,
    pub eta: f64,
    j_gamma: f64,
    b_field: f64,
}

impl AnalyticTwoQubitSpectrum {
    /// The four energies in the order `Ψ+, Ψ−, Σ+, Σ−`.
    pub fn energies(&self) -> [f64; 4] {
        [self.e_psi_plus, self.e_psi_minus, self.e_sigma_plus, self.e_sigma_minus]
    }

    /// `|Ψ±> = (|01> ± |10>)/√2`.
    pub fn psi(&self, plus: bool) -> [C64; 4] {
        let a = std::f64::consts::FRAC_1_SQRT_2;
        let s = if plus { a } else { -a };
        [ZERO, C64::new(a, 0.0), C64::new(s, 0.0), ZERO]
    }

    /// `|Σ±> ∝ (η ∓ B)|↓↓> ± Jγ|↑↑>`; in this crate's basis `|↑↑> = |00>`.
    pub fn sigma(&self, plus: bool) -> [C64; 4] {
        // Block on (|00>, |11>) is Jz/2 + [[B, Jγ], [Jγ, −B]].
        let (c00, c11) = closed_form_block_vector(self.b_field, self.j_gamma, self.eta, plus);
        [C64::new(c00, 0.0), ZERO, ZERO, C64::new(c11, 0.0)]
    }

    /// `(energy, state)` pairs in the order `Ψ+, Ψ−, Σ+, Σ−`.
    pub fn eigenpairs(&self) -> [(f64, [C64; 4]); 4] {
        [
            (self.e_psi_plus, self.psi(true)),
            (self.e_psi_minus, self.psi(false)),
            (self.e_sigma_plus, self.sigma(true)),
            (self.e_sigma_minus, self.sigma(false)),
        ]
    }
}

pub fn two_qubit_spectrum(p: &ChainParams) -> Result<AnalyticTwoQubitSpectrum> {
    if p.n_sites != 2 {
        return Err(Error::InvalidParams(format!(
            "two-qubit spectrum needs n_sites = 2, got {}",
            p.n_sites
        )));
    }
    let j = p.j_mean();
    let jg = p.j_gamma();
    let eta = p.b_field.hypot(jg);
    Ok(AnalyticTwoQubitSpectrum {
        e_psi_plus: -0.5 * p.j_z + j,
        e_psi_minus: -0.5 * p.j_z - j,
        e_sigma_plus: 0.5 * p.j_z + eta,
        e_sigma_minus: 0.5 * p.j_z - eta,
        eta,
        j_gamma: jg,
        b_field: p.b_field,
    })
}

/// Closed-form spectrum of the three-site ring.
///
/// `energies[k]` and `states[k]` correspond to `E_{k+1}` and `|Φ_{k+1}>` of
/// the printed table. `states` are expressed in this crate's basis.
#[derive(Clone, Debug)]
pub struct AnalyticThreeQubitSpectrum {
    pub energies: [f64; 8],
    pub states: [[C64; 8]; 8],
    pub eta_plus: f64,
    pub eta_minus: f64,
}

pub fn three_qubit_spectrum(p: &ChainParams) -> Result<AnalyticThreeQubitSpectrum> {
    if p.n_sites != 3 || p.boundary != Boundary::Periodic {
        return Err(Error::InvalidParams(
            "three-qubit spectrum needs a periodic chain of 3 sites".into(),
        ));
    }
    let j = p.j_mean();
    let jg = p.j_gamma();
    let (jz, b) = (p.j_z, p.b_field);
    let sqrt3 = 3f64.sqrt();
    let delta_minus = jz - 2.0 * b - j;
    let delta_plus = jz + 2.0 * b - j;
    let eta_minus = delta_minus.hypot(sqrt3 * jg);
    let eta_plus = delta_plus.hypot(sqrt3 * jg);

    // Labels below are spin-down-as-zero, as printed.
    let mut printed = [[0.0f64; 8]; 8];

    // Φ1,2 / Φ5,6: the two non-symmetric combinations in a fixed-weight sector,
    //   ±½(1 ∓ 1/√3)|x> + (1/√3)|y> ∓ ½(1 ± 1/√3)|z>
    let twisted = |out: &mut [f64; 8], upper: bool, x: usize, y: usize, z: usize| {
        let s = if upper { 1.0 } else { -1.0 };
        out[x] = s * 0.5 * (1.0 - s / sqrt3);
        out[y] = 1.0 / sqrt3;
        out[z] = -s * 0.5 * (1.0 + s / sqrt3);
    };
    twisted(&mut printed[0], true, 0b110, 0b101, 0b011);
    twisted(&mut printed[1], false, 0b110, 0b101, 0b011);
    twisted(&mut printed[4], true, 0b010, 0b100, 0b001);
    twisted(&mut printed[5], false, 0b010, 0b100, 0b001);

    // Φ3,4 / Φ7,8: [(δ ± η)|pole> + Jγ Σₙ Υⁿ|seed>] / √(2η(η ± δ)).
    // In the (|pole>, W) basis with W = Σₙ Υⁿ|seed>/√3 the block is
    // mean + [[δ, √3Jγ], [√3Jγ, −δ]].
    let mut polar = |k: usize, upper: bool, delta: f64, eta: f64, pole: usize, seed: usize| {
        let (c_pole, c_w) = closed_form_block_vector(delta, sqrt3 * jg, eta, upper);
        printed[k][pole] = c_pole;
        let mut label = seed;
        for _ in 0..3 {
            printed[k][label] = c_w / sqrt3;
            label = cyclic_shift(label, 3).unwrap();
        }
    };
    polar(2, true, delta_minus, eta_minus, 0b000, 0b110);
    polar(3, false, delta_minus, eta_minus, 0b000, 0b110);
    polar(6, true, delta_plus, eta_plus, 0b111, 0b010);
    polar(7, false, delta_plus, eta_plus, 0b111, 0b010);

    let energies = [
        -j - 0.5 * jz + b,
        -j - 0.5 * jz + b,
        j + 0.5 * jz - b + eta_minus,
        j + 0.5 * jz - b - eta_minus,
        -j - 0.5 * jz - b,
        -j - 0.5 * jz - b,
        j + 0.5 * jz + b + eta_plus,
        j + 0.5 * jz + b - eta_plus,
    ];

    let mut states = [[ZERO; 8]; 8];
    for (k, v) in printed.iter().enumerate() {
        for (label, &amp) in v.iter().enumerate() {
            states[k][complement_label(label, 3)] = C64::new(amp, 0.0);
        }
    }
    Ok(AnalyticThreeQubitSpectrum {
        energies,
        states,
        eta_plus,
        eta_minus,
    })
}

/// Comparison of the closed-form three-site spectrum against exact
/// diagonalisation of [`build_hamiltonian`].
#[derive(Clone, Debug)]
pub struct ReconciliationReport {
    pub params: ChainParams,
    /// Sorted closed-form energies.
    pub analytic: Vec<f64>,
    /// Ascending numerical eigenvalues.
    pub numeric: Vec<f64>,
    pub energy_max_dev: f64,
    /// `max_k ‖H φ_k − E_k φ_k‖∞` with the printed labels read literally.
    pub residual_printed_labels: f64,
    /// Same, after complementing every label.
    pub residual_complemented_labels: f64,
    /// `max |<φ_i|φ_j> − δ_ij|` of the closed-form states.
    pub orthonormality_dev: f64,
}

impl ReconciliationReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.energy_max_dev <= tol && self.residual_complemented_labels <= tol && self.orthonormality_dev <= tol
    }
}

impl fmt::Display for ReconciliationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let p = &self.params;
        writeln!(
            f,
            "three-site closed form vs exact diagonalisation (J={}, gamma={}, Jz={}, B={})",
            p.j_mean(),
            p.gamma().unwrap_or(f64::NAN),
            p.j_z,
            p.b_field
        )?;
        writeln!(
            f,
            "  convention map: printed |0> is spin down; complement every label bit; energies and B used as printed"
        )?;
        writeln!(f, "  energy multiset max deviation: {:.3e}", self.energy_max_dev)?;
        writeln!(
            f,
            "  eigen-equation residual, labels as printed: {:.3e}",
            self.residual_printed_labels
        )?;
        writeln!(
            f,
            "  eigen-equation residual, complemented labels: {:.3e}",
            self.residual_complemented_labels
        )?;
        writeln!(f, "  orthonormality deviation: {:.3e}", self.orthonormality_dev)?;
        write!(f, "  k  analytic            numeric")?;
        for (k, (a, n)) in self.analytic.iter().zip(&self.numeric).enumerate() {
            write!(f, "\n  {k}  {a:<+18.12} {n:<+18.12}")?;
        }
        Ok(())
    }
}

fn eigen_residual(h: &Matrix, energy: f64, v: &[C64]) -> f64 {
    h.apply(v)
        .iter()
        .zip(v)
        .map(|(hv, x)| (hv - x * energy).norm())
        .fold(0.0, f64::max)
}

pub fn reconcile_three_qubit(p: &ChainParams) -> Result<ReconciliationReport> {
    let analytic = three_qubit_spectrum(p)?;
    let h = build_hamiltonian(p)?;
    let spectrum = hermitian_eig(&h)?;

    let mut sorted = analytic.energies.to_vec();
    sorted.sort_by(f64::total_cmp);
    let energy_max_dev = sorted
        .iter()
        .zip(&spectrum.eigenvalues)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);

    let hm = h.as_matrix();
    let mut res_complemented: f64 = 0.0;
    let mut res_printed: f64 = 0.0;
    let mut ortho: f64 = 0.0;
    for (k, state) in analytic.states.iter().enumerate() {
        res_complemented = res_complemented.max(eigen_residual(hm, analytic.energies[k], state));
        let printed: Vec<C64> = (0..8).map(|l| state[complement_label(l, 3)]).collect();
        res_printed = res_printed.max(eigen_residual(hm, analytic.energies[k], &printed));
        for (m, other) in analytic.states.iter().enumerate() {
            let dot: C64 = state.iter().zip(other).map(|(a, b)| a.conj() * b).sum();
            let target = if k == m { 1.0 } else { 0.0 };
            ortho = ortho.max((dot - target).norm());
        }
    }

    Ok(ReconciliationReport {
        params: *p,
        analytic: sorted,
        numeric: spectrum.eigenvalues,
        energy_max_dev,
        residual_printed_labels: res_printed,
        residual_complemented_labels: res_complemented,
        orthonormality_dev: ortho,
    })
}
