//! The modified energy
//! `E = ‖u‖² + ‖|D|^{α+n}u‖² + 2Re(|D|^{α+n}u, |D|^n(|u|²u)) - ½‖|D|^{α/2+n}|u|²‖²`
//! and the diagnostics built on it.

use num_complex::Complex64;

use crate::dynamics::State;
use crate::error::{Error, Result};
use crate::record::TrajectoryRecord;
use crate::torus::{self, TorusField};

/// Exponents attached to `(α, n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedEnergyParams {
    pub alpha: f64,
    pub n: u32,
    /// `min(1, 2α/(2n+α))`.
    pub eps: f64,
    /// `(α-1)/(2n+α)`.
    pub theta: f64,
}

impl ModifiedEnergyParams {
    pub fn new(alpha: f64, n: u32) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::invalid(format!("alpha must lie in (0, 2], got {alpha}")));
        }
        let d = 2.0 * n as f64 + alpha;
        Ok(ModifiedEnergyParams {
            alpha,
            n,
            eps: (2.0 * alpha / d).min(1.0),
            theta: (alpha - 1.0) / d,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModifiedEnergyReport {
    pub energy: f64,
    /// `‖u‖²_{L²}`.
    pub mass_part: f64,
    pub j0: f64,
    pub j1: f64,
    /// Carries the `-½`.
    pub j2: f64,
    /// `½‖u‖²_{H^{α+n}} <= E <= 2‖u‖²_{H^{α+n}}`.
    pub sandwich_ok: bool,
    /// `g_α(‖u‖_{H^{α+n}})` when `α > 1`; the `α = 1` gate needs data-dependent inputs, see [`growth_gate`].
    pub threshold: Option<f64>,
}

fn abs_pow(k: i64, p: f64) -> f64 {
    (k.unsigned_abs() as f64).powf(p)
}

/// Evaluates `E_{α,n}(u)` with exact spectral products.
pub fn modified_energy(u: &TorusField, alpha: f64, n: u32) -> ModifiedEnergyReport {
    let s = alpha + n as f64;
    let w = alpha + 2.0 * n as f64;
    let mass_part = u.l2_norm().powi(2);
    let j0: f64 = u.modes().map(|(k, c)| abs_pow(k, 2.0 * s) * c.norm_sqr()).sum();
    // Only |k| <= K of |u|²u meets the band-limited |D|^{α+n}u.
    let cubic = torus::cubic_term(u);
    let j1 = 2.0
        * u.modes()
            .map(|(k, c)| abs_pow(k, w) * (c * cubic.coeff(k).conj()).re)
            .sum::<f64>();
    let rho = torus::modulus_squared(u);
    let j2 = -0.5 * rho.modes().map(|(k, c)| abs_pow(k, w) * c.norm_sqr()).sum::<f64>();
    let energy = mass_part + j0 + j1 + j2;
    let norm_sq = u.sobolev_norm(s).powi(2);
    let threshold = (alpha > 1.0).then(|| {
        norm_sq
            .sqrt()
            .powf(ModifiedEnergyParams::new(alpha, n).map_or(1.0, |p| p.eps) / 2.0)
    });
    ModifiedEnergyReport {
        energy,
        mass_part,
        j0,
        j1,
        j2,
        sandwich_ok: 0.5 * norm_sq <= energy && energy <= 2.0 * norm_sq,
        threshold,
    }
}

/// Whether `½‖u‖²_{H^{α+n}} <= E_{α,n}(u) <= 2‖u‖²_{H^{α+n}}` holds for this `u`.
pub fn sandwich_check(u: &TorusField, alpha: f64, n: u32) -> bool {
    modified_energy(u, alpha, n).sandwich_ok
}

/// The gate `g_α(x)`.
///
/// `x^{ε/2}` for `α > 1`, and `x^{ε/2} / log(1 + x²/(C²‖u₀‖⁴_{H^{1/2}}))` for
/// `α = 1`, with `C = bg_constant`. At `x = 0` the `α = 1` branch takes its
/// limit `+∞`. No gate is defined for `α < 1`.
pub fn growth_gate(x: f64, alpha: f64, n: u32, u0_half_norm: f64, bg_constant: f64) -> Result<f64> {
    if !(x >= 0.0) {
        return Err(Error::invalid(format!("gate argument must be nonnegative, got {x}")));
    }
    let p = ModifiedEnergyParams::new(alpha, n)?;
    if alpha > 1.0 {
        Ok(x.powf(p.eps / 2.0))
    } else if alpha == 1.0 {
        if x == 0.0 {
            return Ok(f64::INFINITY);
        }
        let denom = bg_constant * bg_constant * u0_half_norm.powi(4);
        Ok(x.powf(p.eps / 2.0) / (x * x / denom).ln_1p())
    } else {
        Err(Error::invalid(format!(
            "the growth gate is defined for alpha >= 1, got {alpha}"
        )))
    }
}

/// Largest amplitude `λ` with `g_α(‖λp‖_{H^{α+n}}) >= margin·‖λp‖⁴_{H^{α/2}}`.
///
/// Both sides are powers (up to a logarithm) of `λ`, and the quartic side wins
/// as `λ` grows, so the admissible set is an interval `(0, λ*]`. `λ*` is found
/// by bisection in `log λ`; the data norm inside the `α = 1` gate is that of
/// `λp` itself.
pub fn gate_amplitude(profile: &TorusField, alpha: f64, n: u32, margin: f64, bg_constant: f64) -> Result<f64> {
    if profile.is_zero() {
        return Err(Error::invalid("profile must be nonzero"));
    }
    let a = profile.sobolev_norm(alpha + n as f64);
    let b = profile.sobolev_norm(alpha / 2.0);
    let ok = |log_l: f64| -> Result<bool> {
        let l = log_l.exp();
        let g = growth_gate(l * a, alpha, n, l * profile.sobolev_norm(0.5), bg_constant)?;
        Ok(g >= margin * (l * b).powi(4))
    };
    let (mut lo, mut hi) = (0.0f64, 0.0f64);
    while !ok(lo)? {
        lo -= 1.0;
        if lo < -700.0 {
            return Err(Error::invalid("gate condition fails at every amplitude"));
        }
    }
    while ok(hi)? {
        hi += 1.0;
        if hi > 700.0 {
            return Err(Error::invalid("gate condition holds at every amplitude"));
        }
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if ok(mid)? {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-13 {
            break;
        }
    }
    Ok(lo.exp())
}

/// Time derivative of `E_{α,n}` along the Galerkin flow of `i u_t = |D|^α u + |u|²u`.
pub fn energy_time_derivative(u: &TorusField, alpha: f64, n: u32) -> f64 {
    let k_max = u.max_mode();
    let s = alpha + n as f64;
    let w = alpha + 2.0 * n as f64;
    let udot = crate::dynamics::EvolutionSpec::FractionalNls { alpha }
        .rhs(&State::Scalar(u.clone()))
        .expect("scalar state")
        .as_scalar()
        .cloned()
        .expect("scalar state");

    let d_mass = 2.0 * udot.inner(u).re;
    let d_j0 = 2.0
        * u.modes()
            .map(|(k, c)| abs_pow(k, 2.0 * s) * (udot.coeff(k) * c.conj()).re)
            .sum::<f64>();

    // d/dt P_K(|u|²u) = P_K(2|u|²u̇ + u² conj(u̇)).
    let cubic = torus::cubic_term(u);
    let grid = torus::dealias_grid(3 * k_max, k_max);
    let uv = u.sample(grid);
    let dv = udot.sample(grid);
    let dc: Vec<Complex64> = uv
        .iter()
        .zip(&dv)
        .map(|(a, d)| 2.0 * a.norm_sqr() * d + a * a * d.conj())
        .collect();
    let dcubic = TorusField::from_samples(&dc, k_max).expect("dealiased grid");
    let d_j1 = 2.0
        * u.modes()
            .map(|(k, c)| abs_pow(k, w) * (udot.coeff(k) * cubic.coeff(k).conj() + c * dcubic.coeff(k).conj()).re)
            .sum::<f64>();

    // d/dt |u|² = u̇ conj(u) + u conj(u̇).
    let rho = torus::modulus_squared(u);
    let drho = &torus::conj_product(&udot, u) + &torus::conj_product(u, &udot);
    let d_j2 = -rho
        .modes()
        .map(|(k, c)| abs_pow(k, w) * (drho.coeff(k) * c.conj()).re)
        .sum::<f64>();

    d_mass + d_j0 + d_j1 + d_j2
}

/// `2Im(|D|^{α+n}u̇, |D|^n u̇)` and its natural scale `Σ|k|^{α+2n}|u̇_k|²`.
pub fn cancellation_term(udot: &TorusField, alpha: f64, n: u32) -> (f64, f64) {
    let a = udot.abs_deriv(alpha + n as f64);
    let b = udot.abs_deriv(n as f64);
    let scale: f64 = udot
        .modes()
        .map(|(k, c)| abs_pow(k, alpha + 2.0 * n as f64) * c.norm_sqr())
        .sum();
    (2.0 * a.inner(&b).im, scale)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivativeConsistency {
    /// `max |finite difference - analytic|` over interior samples.
    pub max_mismatch: f64,
    /// `max |analytic derivative|`, for scale.
    pub max_derivative: f64,
    /// `max |2Im(|D|^{α+n}u̇, |D|^n u̇)| / Σ|k|^{α+2n}|u̇_k|²`.
    pub cancellation: f64,
    pub samples: usize,
}

/// Compares a three-point finite difference of `E_{α,n}` along a fractional
/// NLS trajectory with the analytic derivative at each interior sample.
///
/// The trajectory must have been recorded with states kept.
pub fn energy_derivative_consistency(traj: &TrajectoryRecord, alpha: f64, n: u32) -> Result<DerivativeConsistency> {
    let states = traj.states();
    if states.len() < 3 {
        return Err(Error::InsufficientSamples(format!(
            "need at least 3 stored states, got {}",
            states.len()
        )));
    }
    let t = traj.times();
    let fields: Vec<&TorusField> = states
        .iter()
        .map(|s| s.as_scalar().ok_or_else(|| Error::invalid("trajectory must be scalar")))
        .collect::<Result<_>>()?;
    let e: Vec<f64> = fields.iter().map(|u| modified_energy(u, alpha, n).energy).collect();
    let spec = crate::dynamics::EvolutionSpec::FractionalNls { alpha };

    let mut report = DerivativeConsistency {
        max_mismatch: 0.0,
        max_derivative: 0.0,
        cancellation: 0.0,
        samples: 0,
    };
    for i in 1..fields.len() - 1 {
        let h1 = t[i] - t[i - 1];
        let h2 = t[i + 1] - t[i];
        let fd = -h2 / (h1 * (h1 + h2)) * e[i - 1] + (h2 - h1) / (h1 * h2) * e[i] + h1 / (h2 * (h1 + h2)) * e[i + 1];
        let exact = energy_time_derivative(fields[i], alpha, n);
        report.max_mismatch = report.max_mismatch.max((fd - exact).abs());
        report.max_derivative = report.max_derivative.max(exact.abs());
        let udot = spec.rhs(&State::Scalar(fields[i].clone()))?;
        let (term, scale) = cancellation_term(udot.as_scalar().expect("scalar"), alpha, n);
        if scale > 0.0 {
            report.cancellation = report.cancellation.max(term.abs() / scale);
        }
        report.samples += 1;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve, Sampling};
    use crate::initial::random_field;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn params() {
        let p = ModifiedEnergyParams::new(1.5, 0).unwrap();
        assert_eq!(p.eps, 1.0);
        assert_relative_eq!(p.theta, 1.0 / 3.0);
        let p = ModifiedEnergyParams::new(1.0, 2).unwrap();
        assert_eq!(p.theta, 0.0);
        assert_relative_eq!(p.eps, 0.4);
        assert!(ModifiedEnergyParams::new(0.0, 1).is_err());
    }

    #[test]
    fn energy_examples() {
        let r = modified_energy(&TorusField::zeros(4), 1.5, 1);
        assert_eq!((r.energy, r.j0, r.j1, r.j2), (0.0, 0.0, 0.0, 0.0));
        assert!(r.sandwich_ok);

        let e1 = TorusField::plane_wave(4, 1, c(1.0, 0.0));
        for (alpha, n) in [(1.0, 0), (1.5, 2), (2.0, 1)] {
            let r = modified_energy(&e1, alpha, n);
            assert_relative_eq!(r.j0, 1.0, epsilon = 1e-14);
            assert_relative_eq!(r.j1, 2.0, epsilon = 1e-14);
            assert!(r.j2.abs() < 1e-14);
            assert_relative_eq!(r.energy, 4.0, epsilon = 1e-14);
        }
    }

    // Oracle: grid quadrature of each integral from the full-bandwidth products.
    fn energy_oracle(u: &TorusField, alpha: f64, n: u32) -> f64 {
        let s = alpha + n as f64;
        let grid = 16 * u.max_mode() + 16;
        let mean = |v: Vec<Complex64>| v.iter().sum::<Complex64>() / v.len() as f64;
        let du = u.fractional_derivative(s).unwrap();
        let j0 = mean(du.sample(grid).iter().map(|z| c(z.norm_sqr(), 0.0)).collect()).re;
        let dc = torus::cubic_term_full(u).fractional_derivative(n as f64).unwrap();
        let j1 = 2.0
            * mean(
                du.sample(grid)
                    .iter()
                    .zip(dc.sample(grid))
                    .map(|(a, b)| a * b.conj())
                    .collect(),
            )
            .re;
        let rho: Vec<Complex64> = u.sample(grid).iter().map(|z| c(z.norm_sqr(), 0.0)).collect();
        let rho = TorusField::from_samples(&rho, 2 * u.max_mode()).unwrap();
        let dr = rho.fractional_derivative(alpha / 2.0 + n as f64).unwrap();
        let j2 = -0.5 * mean(dr.sample(grid).iter().map(|z| c(z.norm_sqr(), 0.0)).collect()).re;
        u.lp_norm(2.0, grid).unwrap().powi(2) + j0 + j1 + j2
    }

    #[test]
    fn energy_matches_quadrature_oracle() {
        let u = random_field(16, 1.0, 1.2, 11);
        for (alpha, n) in [(1.0, 0), (1.5, 1), (2.0, 2), (0.8, 1)] {
            let r = modified_energy(&u, alpha, n);
            assert_relative_eq!(r.energy, energy_oracle(&u, alpha, n), max_relative = 1e-11);
            let sum = r.mass_part + r.j0 + r.j1 + r.j2;
            assert!((r.energy - sum).abs() <= 1e-12 * r.energy.abs());
        }
    }

    #[test]
    fn gate_examples() {
        assert_relative_eq!(growth_gate(4.0, 1.5, 0, 1.0, 1.0).unwrap(), 2.0, epsilon = 1e-15);
        assert_eq!(growth_gate(0.0, 1.5, 0, 1.0, 1.0).unwrap(), 0.0);
        // 1/ln 2 = 1.4426950408889634 (mpmath, 30 digits).
        assert_relative_eq!(
            growth_gate(1.0, 1.0, 1, 1.0, 1.0).unwrap(),
            1.0 / std::f64::consts::LN_2,
            epsilon = 1e-15
        );
        assert!(growth_gate(1.0, 0.9, 1, 1.0, 1.0).is_err());
    }

    #[test]
    fn gate_amplitude_matches_closed_form() {
        // For α > 1 the boundary solves λ^{ε/2} A^{ε/2} = m λ⁴ B⁴.
        let p = random_field(12, 2.0, 1.0, 4);
        let (alpha, n, m) = (1.5, 1, 100.0);
        let eps = ModifiedEnergyParams::new(alpha, n).unwrap().eps;
        let a = p.sobolev_norm(alpha + n as f64);
        let b = p.sobolev_norm(alpha / 2.0);
        let expect = (a.powf(eps / 2.0) / (m * b.powi(4))).powf(1.0 / (4.0 - eps / 2.0));
        let got = gate_amplitude(&p, alpha, n, m, 1.0).unwrap();
        assert_relative_eq!(got, expect, max_relative = 1e-10);
    }

    #[test]
    fn sandwich_zero_and_tiny() {
        assert!(sandwich_check(&TorusField::zeros(3), 1.5, 0));
        let _ = sandwich_check(&TorusField::plane_wave(3, 1, c(1e-3, 0.0)), 1.5, 2);
    }

    #[test]
    fn derivative_matches_plane_wave() {
        let u = TorusField::plane_wave(4, 1, c(0.7, 0.1));
        assert!(energy_time_derivative(&u, 1.5, 1).abs() < 1e-13);
    }

    #[test]
    fn derivative_matches_fine_difference() {
        // Oracle: the derivative of E along RK4-resolved Galerkin states.
        let u0 = random_field(8, 2.0, 1.0, 9);
        let (alpha, n) = (1.5, 1);
        let spec = crate::dynamics::EvolutionSpec::FractionalNls { alpha };
        let h = 1e-4;
        let step = |u: &TorusField, dt: f64| {
            let f = |v: &TorusField| {
                spec.rhs(&State::Scalar(v.clone()))
                    .unwrap()
                    .as_scalar()
                    .unwrap()
                    .clone()
            };
            let k1 = f(u);
            let k2 = f(&(u + &(&k1 * (0.5 * dt))));
            let k3 = f(&(u + &(&k2 * (0.5 * dt))));
            let k4 = f(&(u + &(&k3 * dt)));
            let sum = &(&k1 + &(&k2 * 2.0)) + &(&(&k3 * 2.0) + &k4);
            u + &(&sum * (dt / 6.0))
        };
        let ep = modified_energy(&step(&u0, h), alpha, n).energy;
        let em = modified_energy(&step(&u0, -h), alpha, n).energy;
        let fd = (ep - em) / (2.0 * h);
        let exact = energy_time_derivative(&u0, alpha, n);
        assert!((fd - exact).abs() < 1e-6 * exact.abs().max(1.0), "{fd} vs {exact}");
    }

    #[test]
    fn consistency_needs_states() {
        let u0 = State::Scalar(random_field(4, 2.0, 1.0, 1));
        let spec = crate::dynamics::EvolutionSpec::FractionalNls { alpha: 1.5 };
        let rec = evolve(&u0, &spec, 0.01, 1e-3, 1, &Sampling::default()).unwrap();
        assert!(matches!(
            energy_derivative_consistency(&rec, 1.5, 0),
            Err(Error::InsufficientSamples(_))
        ));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn component_homogeneity(seed in 0u64..300, lambda in 0.1f64..5.0, alpha in 0.5f64..2.0, n in 0u32..3) {
            let u = random_field(6, 1.0, 1.0, seed);
            let a = modified_energy(&u, alpha, n);
            let b = modified_energy(&u.scale(c(lambda, 0.0)), alpha, n);
            let l2 = lambda * lambda;
            let l4 = l2 * l2;
            prop_assert!((b.j0 - l2 * a.j0).abs() <= 1e-12 * (l2 * a.j0).abs().max(1e-300));
            prop_assert!((b.j1 - l4 * a.j1).abs() <= 1e-11 * (l4 * a.j1).abs().max(1e-12 * l4));
            prop_assert!((b.j2 - l4 * a.j2).abs() <= 1e-12 * (l4 * a.j2).abs().max(1e-300));
        }
    }
}
