use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;

use super::{check_dyadic, lp_block};
use crate::dynamics::LinearPropagator;
use crate::error::{Error, Result};
use crate::inequality::InequalityVerdict;
use crate::torus::{lp_of_samples, TorusField};

/// `(∫₀¹ ‖S(t)v‖⁴_{L∞} dt)^{1/4}` by the midpoint rule, sup over `x_grid` points.
fn l4_linf(v: &TorusField, alpha: f64, t_quad: usize, x_grid: usize) -> f64 {
    let step = LinearPropagator::new(v.max_mode(), 1.0 / t_quad as f64, alpha);
    let mut w = crate::dynamics::linear_propagate(v, 0.5 / t_quad as f64, alpha);
    let mut acc = 0.0;
    for _ in 0..t_quad {
        acc += lp_of_samples(&w.sample(x_grid), f64::INFINITY).powi(4);
        w = step.apply(&w);
    }
    (acc / t_quad as f64).powf(0.25)
}

fn guards(band: usize, alpha: f64, t_quad: usize, x_grid: usize) -> Result<()> {
    if x_grid < 8 * band {
        return Err(Error::GridTooSmall {
            required: 8 * band,
            got: x_grid,
        });
    }
    let t_min = (8.0 * (band as f64).powf(alpha)).ceil() as usize;
    if t_quad < t_min {
        return Err(Error::invalid(format!(
            "time quadrature of {t_quad} points is under-resolved, need {t_min}"
        )));
    }
    Ok(())
}

/// `‖S(t)Δ_N u‖_{L⁴((0,1), L∞)}` against `N^{1/2-α/4}‖u‖_{L²}`.
///
/// Requires `x_grid >= 8N` and `t_quad >= 8N^α`.
pub fn strichartz_l4linf(
    u: &TorusField,
    big_n: u64,
    alpha: f64,
    t_quad: usize,
    x_grid: usize,
) -> Result<InequalityVerdict> {
    check_dyadic(big_n)?;
    guards(big_n as usize, alpha, t_quad, x_grid)?;
    let lhs = l4_linf(&lp_block(u, big_n)?, alpha, t_quad, x_grid);
    let rhs = (big_n as f64).powf(0.5 - alpha / 4.0) * u.l2_norm();
    Ok(InequalityVerdict::new(lhs, rhs, u.l2_norm()))
}

/// `‖S(t)u‖_{L⁴((0,1), L∞)}` against `‖u‖_{H^γ}`, for `γ > ½ - α/4`.
///
/// Requires `x_grid >= 8K` and `t_quad >= 8K^α`.
pub fn strichartz_corollary(
    u: &TorusField,
    alpha: f64,
    gamma: f64,
    t_quad: usize,
    x_grid: usize,
) -> Result<InequalityVerdict> {
    if !(gamma > 0.5 - alpha / 4.0) {
        return Err(Error::invalid(format!(
            "need gamma > 1/2 - alpha/4 = {}, got {gamma}",
            0.5 - alpha / 4.0
        )));
    }
    guards(u.max_mode().max(1), alpha, t_quad, x_grid)?;
    let lhs = l4_linf(u, alpha, t_quad, x_grid);
    Ok(InequalityVerdict::new(lhs, u.sobolev_norm(gamma), u.l2_norm()))
}

/// Member `member` of `members` unit-modulus combs on `N/2 < |k| < 2N`.
///
/// Phases are `β·2πU_k` with `β = member/(members-1)`, running from the
/// coherent comb (`β = 0`) to independent uniform phases (`β = 1`).
pub fn strichartz_ensemble_member(rng: &mut impl Rng, big_n: u64, member: usize, members: usize) -> TorusField {
    let beta = if members > 1 {
        member as f64 / (members - 1) as f64
    } else {
        0.0
    };
    let km = 2 * big_n as i64;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); (2 * km + 1) as usize];
    for k in -km..=km {
        let u: f64 = rng.gen();
        let a = k.unsigned_abs();
        if 2 * a > big_n && a < 2 * big_n {
            coeffs[(k + km) as usize] = Complex64::from_polar(1.0, beta * 2.0 * PI * u);
        }
    }
    TorusField::from_coeffs(km as usize, coeffs).expect("length 2K + 1")
}
