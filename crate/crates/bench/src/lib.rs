//! Benchmarks only; see `benches/`. Shared inputs live here so the benches
//! and any ad-hoc profiling use the same parameter points.

use xyzchain_core::ChainParams;

/// Anisotropic chain used throughout the benches.
pub fn chain(n_sites: usize) -> ChainParams {
    ChainParams::from_j_gamma(n_sites, 1.0, 0.3, 0.9, 1.1).expect("valid parameters")
}
