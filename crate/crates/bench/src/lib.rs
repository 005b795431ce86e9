//! Shared fixtures for the criterion benches.

use aklt_lab::channels::{apply_sweep_mpo, catalog_noise};
use aklt_lab::{build_aklt, DensityMpo};

/// Pure AKLT density MPO with `n` bulk sites.
pub fn pure_state(n: usize) -> DensityMpo {
    DensityMpo::from_pure(&build_aklt(n).expect("valid size")).expect("pure MPO")
}

/// State after `steps` sweeps of catalog noise `id` at `p = 0.25`.
pub fn noisy_state(id: u8, n: usize, steps: usize) -> DensityMpo {
    let ch = catalog_noise(id, 0.25).expect("catalog noise");
    let mut s = pure_state(n);
    for _ in 0..steps {
        s = apply_sweep_mpo(&s, &ch).expect("sweep");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use aklt_lab::EdgeState;

    #[test]
    fn fixtures_are_normalized() {
        assert!((pure_state(4).trace().unwrap().re - 1.0).abs() < 1e-12);
        assert!((noisy_state(2, 3, 2).trace().unwrap().re - 1.0).abs() < 1e-12);
    }
}
