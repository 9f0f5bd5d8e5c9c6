//! Littlewood–Paley blocks, the dispersion kernel, Strichartz quadratures and
//! Bourgain norms for `S(t) = e^{-it|D|^α}`.

mod bourgain;
mod kernel;
mod strichartz;

pub use bourgain::{bourgain_norm, default_window};
pub use kernel::{dispersion_constant_fit, kernel_kappa, kernel_sup, DispersionFit};
pub use strichartz::{strichartz_corollary, strichartz_ensemble_member, strichartz_l4linf};

use crate::error::{Error, Result};
use crate::torus::TorusField;

/// Smooth dyadic bump `ψ` supported in `(½, 2)` with `Σ_{j>=1} ψ(2^{-j}x) = 1` on `[2, ∞)`.
///
/// `ψ = ψ₀ / (ψ₀(·/2) + ψ₀ + ψ₀(2·))` on `(½, 2)` with
/// `ψ₀(x) = exp(-1/((x-½)(2-x)))`. The denominator is the full dyadic sum of
/// `ψ₀` there, so the partition of unity holds identically.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct DyadicCutoff;

impl DyadicCutoff {
    fn raw(x: f64) -> f64 {
        if x > 0.5 && x < 2.0 {
            (-1.0 / ((x - 0.5) * (2.0 - x))).exp()
        } else {
            0.0
        }
    }

    pub fn psi(&self, x: f64) -> f64 {
        let r = Self::raw(x);
        if r == 0.0 {
            return 0.0;
        }
        r / (Self::raw(0.5 * x) + r + Self::raw(2.0 * x))
    }

    /// Multiplier of block `N` at frequency `|k|`; `N = 1` is the complement of all `N >= 2` blocks.
    pub fn multiplier(&self, k: u64, big_n: u64) -> f64 {
        if big_n >= 2 {
            return self.psi(k as f64 / big_n as f64);
        }
        let mut rest = 1.0;
        let mut m = 2u64;
        while m < 4 * k.max(1) {
            rest -= self.psi(k as f64 / m as f64);
            m *= 2;
        }
        rest
    }
}

fn check_dyadic(big_n: u64) -> Result<()> {
    if big_n == 0 || !big_n.is_power_of_two() {
        return Err(Error::invalid(format!(
            "block index must be a power of two, got {big_n}"
        )));
    }
    Ok(())
}

/// `Δ_N u`.
pub fn lp_block(u: &TorusField, big_n: u64) -> Result<TorusField> {
    check_dyadic(big_n)?;
    let psi = DyadicCutoff;
    Ok(u.map_modes(|k, c| c * psi.multiplier(k.unsigned_abs(), big_n)))
}

/// Block indices `1, 2, 4, ...` that can be nonzero for band limit `K`.
pub fn block_indices(max_mode: usize) -> Vec<u64> {
    let mut out = vec![1];
    let mut n = 2u64;
    while (n as usize) < 2 * max_mode {
        out.push(n);
        n *= 2;
    }
    out
}

/// `‖u‖²_{H^s} / Σ_N N^{2s}‖Δ_N u‖²`; lies in `[4^{-s}, 2·5^s]` for `s >= 0`.
pub fn lp_sobolev_ratio(u: &TorusField, s: f64) -> f64 {
    let blocks: f64 = block_indices(u.max_mode())
        .into_iter()
        .map(|n| (n as f64).powf(2.0 * s) * lp_block(u, n).expect("dyadic").l2_norm().powi(2))
        .sum();
    u.sobolev_norm(s).powi(2) / blocks
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial::random_field;
    use num_complex::Complex64;
    use proptest::prelude::*;

    #[test]
    fn bump_support_and_positivity() {
        let psi = DyadicCutoff;
        for i in 0..=1300 {
            let x = 0.6 + i as f64 * 1e-3;
            assert!(psi.psi(x) > 0.0, "{x}");
        }
        for x in [0.0, 0.25, 0.5, 2.0, 3.0, 1e9] {
            assert_eq!(psi.psi(x), 0.0);
        }
        assert_eq!(psi.psi(1.0), 1.0);
    }

    #[test]
    fn partition_of_unity() {
        let psi = DyadicCutoff;
        let mut worst: f64 = 0.0;
        let steps = 200_000;
        for i in 0..=steps {
            let x = 2f64.powf(1.0 + 15.0 * i as f64 / steps as f64);
            let sum: f64 = (1..=20).map(|j| psi.psi(x / 2f64.powi(j))).sum();
            worst = worst.max((sum - 1.0).abs());
        }
        assert!(worst < 1e-10, "{worst}");
    }

    #[test]
    fn block_examples() {
        let u = TorusField::plane_wave(4, 3, Complex64::new(1.0, 0.0));
        let b = lp_block(&u, 4).unwrap();
        assert!((b.coeff(3).re - DyadicCutoff.psi(0.75)).abs() < 1e-16);
        assert!(lp_block(&u, 3).is_err());
        assert!(lp_block(&u, 0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn blocks_telescope(seed in 0u64..1000, k in 1usize..70) {
            let u = random_field(k, 0.0, 1.0, seed);
            let mut sum = TorusField::zeros(k);
            for n in block_indices(k) {
                sum = &sum + &lp_block(&u, n).unwrap();
            }
            prop_assert!((&sum - &u).l2_norm() < 1e-14 * u.l2_norm().max(1e-300));
        }

        #[test]
        fn lp_sobolev_bounds(seed in 0u64..1000, s in 0.0f64..3.0) {
            let u = random_field(100, 0.5, 1.0, seed);
            let r = lp_sobolev_ratio(&u, s);
            prop_assert!(r >= 4f64.powf(-s) && r <= 2.0 * 5f64.powf(s), "{r}");
        }
    }
}
