//! Seeded random initial data.
//!
//! Coefficients are `u_k = λ r_k e^{iθ_k} (1 + k²)^{-σ/2}` with `r_k` and
//! `θ_k / 2π` uniform on `[0, 1)`. The generator is ChaCha8 (`rand_chacha`),
//! seeded with `seed_from_u64(seed)` and switched to stream `member` for
//! ensemble members. Modes are drawn in the order `0, 1, -1, 2, -2, ...`
//! (first `r_k`, then `θ_k`), so a field with band limit `K` is the
//! truncation of the field drawn with the same seed at any larger band limit.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::torus::TorusField;

/// Generator for ensemble member `member` of seed `seed`.
pub fn member_rng(seed: u64, member: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(member);
    rng
}

/// Draws a decaying random field from `rng`.
pub fn random_field_from(rng: &mut impl Rng, max_mode: usize, sigma: f64, amplitude: f64) -> TorusField {
    let km = max_mode as i64;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * max_mode + 1];
    let mut draw = |k: i64, coeffs: &mut Vec<Complex64>| {
        let r: f64 = rng.gen();
        let theta: f64 = rng.gen::<f64>() * 2.0 * PI;
        let decay = (1.0 + (k * k) as f64).powf(-sigma / 2.0);
        coeffs[(k + km) as usize] = Complex64::from_polar(amplitude * r * decay, theta);
    };
    draw(0, &mut coeffs);
    for k in 1..=km {
        draw(k, &mut coeffs);
        draw(-k, &mut coeffs);
    }
    TorusField::from_coeffs(max_mode, coeffs).expect("2K + 1 coefficients")
}

/// Random field with decay `sigma` and amplitude `amplitude` for `seed`.
pub fn random_field(max_mode: usize, sigma: f64, amplitude: f64, seed: u64) -> TorusField {
    random_field_from(&mut member_rng(seed, 0), max_mode, sigma, amplitude)
}
