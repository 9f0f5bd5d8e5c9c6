//! Alias-free pointwise products by zero padding.
//!
//! A product of bandwidth `B` sampled on `n` points folds mode `m` onto
//! `m mod n`; the modes `|k| <= keep` are uncontaminated as soon as
//! `n >= B + keep + 1`.

use num_complex::Complex64;

use super::TorusField;
use crate::fft::smooth_size;

/// Transform-friendly grid that reads modes `|k| <= keep` of a bandwidth-`bandwidth` product exactly.
pub fn dealias_grid(bandwidth: usize, keep: usize) -> usize {
    smooth_size(bandwidth + keep + 1)
}

fn combine(a: &TorusField, b: &TorusField, keep: usize, f: impl Fn(Complex64, Complex64) -> Complex64) -> TorusField {
    let bandwidth = a.max_mode() + b.max_mode();
    let n = dealias_grid(bandwidth, keep);
    let va = a.sample(n);
    let vb = b.sample(n);
    let prod: Vec<Complex64> = va.iter().zip(&vb).map(|(&x, &y)| f(x, y)).collect();
    TorusField::from_samples(&prod, keep).expect("dealias grid exceeds 2·keep + 1")
}

/// Exact coefficients of `a·b` (band limit `K_a + K_b`).
pub fn product(a: &TorusField, b: &TorusField) -> TorusField {
    combine(a, b, a.max_mode() + b.max_mode(), |x, y| x * y)
}

/// Exact coefficients of `a·conj(b)` (band limit `K_a + K_b`).
pub fn conj_product(a: &TorusField, b: &TorusField) -> TorusField {
    combine(a, b, a.max_mode() + b.max_mode(), |x, y| x * y.conj())
}

/// Exact coefficients of `|u|²` on `|k| <= 2K`.
pub fn modulus_squared(u: &TorusField) -> TorusField {
    let k = u.max_mode();
    let n = dealias_grid(2 * k, 2 * k);
    let vals: Vec<Complex64> = u.sample(n).iter().map(|v| Complex64::new(v.norm_sqr(), 0.0)).collect();
    TorusField::from_samples(&vals, 2 * k).expect("grid holds 4K + 1 modes")
}

fn cubic(u: &TorusField, keep: usize) -> TorusField {
    let n = dealias_grid(3 * u.max_mode(), keep);
    let vals: Vec<Complex64> = u.sample(n).iter().map(|v| v * v.norm_sqr()).collect();
    TorusField::from_samples(&vals, keep).expect("grid holds the kept band")
}

/// Coefficients of `|u|²u` on `|k| <= K` (Galerkin truncation of the exact product).
pub fn cubic_term(u: &TorusField) -> TorusField {
    cubic(u, u.max_mode())
}

/// All coefficients of `|u|²u`, band limit `3K`.
pub fn cubic_term_full(u: &TorusField) -> TorusField {
    cubic(u, 3 * u.max_mode())
}
