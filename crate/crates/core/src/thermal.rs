//! Gibbs states `ρ = exp(−H/T) / Z` with `k_B = 1`.

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, HermitianOperator, Spectrum};
use crate::model::{two_qubit_spectrum, ChainParams};

/// Positive temperatures below this are evaluated on the `T = 0` path.
pub const MIN_TEMPERATURE: f64 = 1e-8;

/// Ground-state grouping tolerance `1e-9 · max(1, spectral range)`.
pub fn degeneracy_tolerance(spectrum: &Spectrum) -> f64 {
    let ev = &spectrum.eigenvalues;
    let range = ev[ev.len() - 1] - ev[0];
    1e-9 * range.max(1.0)
}

/// Eigenvalues closer than this are treated as one level when weighting:
/// `1e-12 · max(1, spectral range)`, comfortably above solver roundoff.
pub fn roundoff_tolerance(spectrum: &Spectrum) -> f64 {
    let ev = &spectrum.eigenvalues;
    1e-12 * (ev[ev.len() - 1] - ev[0]).max(1.0)
}

/// Replaces each cluster of ascending `levels` spanning at most `tol` by its
/// mean, so that exactly degenerate levels get identical Boltzmann weights.
/// Otherwise roundoff splittings, amplified by `1/T`, break symmetries of
/// the state at low temperature.
fn snap_degenerate(levels: &[f64], tol: f64) -> Vec<f64> {
    let mut out = levels.to_vec();
    let mut start = 0;
    while start < levels.len() {
        let mut end = start + 1;
        while end < levels.len() && levels[end] - levels[start] <= tol {
            end += 1;
        }
        if end - start > 1 {
            let mean = levels[start..end].iter().sum::<f64>() / (end - start) as f64;
            out[start..end].fill(mean);
        }
        start = end;
    }
    out
}

#[derive(Clone, Debug)]
pub struct ThermalState {
    pub rho: HermitianOperator,
    pub temperature: f64,
    /// `ln Z`. On the zero-temperature path this is `ln g` for a `g`-fold
    /// ground space, i.e. `ln Σ exp(−(E − E₀)/T)` in the limit `T → 0⁺`.
    pub log_partition: f64,
    pub ground_energy: f64,
    /// Set when a positive temperature below [`MIN_TEMPERATURE`] was
    /// evaluated as `T = 0`.
    pub zero_temperature_fallback: bool,
}

/// Gibbs state of `h` at temperature `t`.
///
/// `t = 0` gives the equal mixture over the ground eigenspace, the
/// `T → 0⁺` limit of the Gibbs state.
pub fn gibbs_state(h: &HermitianOperator, t: f64) -> Result<ThermalState> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::NegativeTemperature(t));
    }
    let spectrum = hermitian_eig(h)?;
    gibbs_from_spectrum(&spectrum, t)
}

pub fn gibbs_from_spectrum(spectrum: &Spectrum, t: f64) -> Result<ThermalState> {
    if t.is_nan() || t < 0.0 {
        return Err(Error::NegativeTemperature(t));
    }
    let e0 = spectrum.eigenvalues[0];
    if t < MIN_TEMPERATURE {
        let ground = spectrum.ground_cluster(degeneracy_tolerance(spectrum));
        let g = ground.len() as f64;
        let rho = spectrum.map_eigenvalues_indexed(|k| if k < ground.len() { 1.0 / g } else { 0.0 });
        return Ok(ThermalState {
            rho: HermitianOperator::from_hermitian_part(&rho),
            temperature: t,
            log_partition: g.ln(),
            ground_energy: e0,
            zero_temperature_fallback: t > 0.0,
        });
    }

    let levels = snap_degenerate(&spectrum.eigenvalues, roundoff_tolerance(spectrum));
    let e0 = levels[0];
    let weights: Vec<f64> = levels.iter().map(|&e| (-(e - e0) / t).exp()).collect();
    let z_shifted: f64 = weights.iter().sum();
    let rho = spectrum.map_eigenvalues_indexed(|k| weights[k] / z_shifted);
    Ok(ThermalState {
        rho: HermitianOperator::from_hermitian_part(&rho),
        temperature: t,
        log_partition: z_shifted.ln() - e0 / t,
        ground_energy: e0,
        zero_temperature_fallback: false,
    })
}

/// Closed-form two-qubit partition function
/// `Z = 2(e^{−Jz/2T} cosh(η/T) + e^{Jz/2T} cosh(J/T))`.
///
/// Overflows to infinity for very small `t`; see
/// [`two_qubit_log_partition`] for a safe variant.
pub fn two_qubit_partition_function(p: &ChainParams, t: f64) -> Result<f64> {
    let spec = two_qubit_spectrum(p)?;
    if t.is_nan() || t <= 0.0 {
        return Err(Error::NonPositiveTemperature(t));
    }
    let beta = 1.0 / t;
    let j = p.j_mean();
    Ok(2.0 * ((-0.5 * beta * p.j_z).exp() * (beta * spec.eta).cosh() + (0.5 * beta * p.j_z).exp() * (beta * j).cosh()))
}

/// `ln Z` of the closed form, evaluated without overflow.
pub fn two_qubit_log_partition(p: &ChainParams, t: f64) -> Result<f64> {
    let spec = two_qubit_spectrum(p)?;
    if t.is_nan() || t <= 0.0 {
        return Err(Error::NonPositiveTemperature(t));
    }
    let beta = 1.0 / t;
    Ok(log_sum_exp(&[
        -0.5 * beta * p.j_z + beta * spec.eta,
        -0.5 * beta * p.j_z - beta * spec.eta,
        0.5 * beta * p.j_z + beta * p.j_mean(),
        0.5 * beta * p.j_z - beta * p.j_mean(),
    ]))
}

pub(crate) fn log_sum_exp(xs: &[f64]) -> f64 {
    let m = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    m + xs.iter().map(|x| (x - m).exp()).sum::<f64>().ln()
}
