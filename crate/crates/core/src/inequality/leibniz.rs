use num_complex::Complex64;

use super::InequalityVerdict;
use crate::error::{Error, Result};
use crate::torus::{self, lp_of_samples, TorusField};

/// `F_α(u) = ū|D|^α u + u|D|^α ū - |D|^α|u|²`, exact on `|k| <= 2K`.
///
/// Its coefficients are `Σ_l (|l|^α + |k-l|^α - |k|^α) u_l conj(u_{l-k})`.
pub fn leibniz_defect(u: &TorusField, alpha: f64) -> TorusField {
    let g = torus::conj_product(&u.abs_deriv(alpha), u);
    let sym = g.map_modes(|k, c| c + g.coeff(-k).conj());
    &sym - &torus::modulus_squared(u).abs_deriv(alpha)
}

/// Checks the fractional Leibniz estimate in `H^n`.
///
/// For `1 <= α < 2` the right side is `‖u‖^{1+θ}_{H^{α/2}} ‖u‖^{1-θ}_{H^{α+n}}`
/// with `θ = (α-1)/(2n+α)`. For `½ < α < 1` and `n >= 1` it is
/// `‖u‖^{1+e}_{H^α} ‖u‖^{1-e}_{H^{α+n}}` with `e = (α-½)/n`.
pub fn check_leibniz_lemma(u: &TorusField, alpha: f64, n: u32) -> Result<InequalityVerdict> {
    let high = u.sobolev_norm(alpha + n as f64);
    let rhs = if (1.0..2.0).contains(&alpha) {
        let theta = (alpha - 1.0) / (2.0 * n as f64 + alpha);
        u.sobolev_norm(alpha / 2.0).powf(1.0 + theta) * high.powf(1.0 - theta)
    } else if alpha > 0.5 && alpha < 1.0 {
        if n == 0 {
            return Err(Error::invalid("the alpha < 1 branch needs n >= 1"));
        }
        let e = (alpha - 0.5) / n as f64;
        u.sobolev_norm(alpha).powf(1.0 + e) * high.powf(1.0 - e)
    } else {
        return Err(Error::invalid(format!(
            "no Leibniz estimate for alpha = {alpha}; need 1/2 < alpha < 2"
        )));
    };
    let lhs = leibniz_defect(u, alpha).sobolev_norm(n as f64);
    Ok(InequalityVerdict::new(lhs, rhs, high * high))
}

/// Exponents of the commutator estimate
/// `‖f|D|^s g + g|D|^s f - |D|^s(fg)‖_{L^p} ≲ ‖|D|^{s₁}f‖_{L^{p₁}} ‖|D|^{s₂}g‖_{L^{p₂}}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KpvExponents {
    pub s: f64,
    pub s1: f64,
    pub s2: f64,
    pub p: f64,
    pub p1: f64,
    pub p2: f64,
}

impl KpvExponents {
    fn validate(&self) -> Result<()> {
        let e = |m: String| Err(Error::invalid(m));
        if !(self.s > 0.0 && self.s < 1.0) {
            return e(format!("need 0 < s < 1, got s = {}", self.s));
        }
        if self.s1 < 0.0 || self.s2 < 0.0 {
            return e(format!("need s1, s2 >= 0, got s1 = {}, s2 = {}", self.s1, self.s2));
        }
        if (self.s1 + self.s2 - self.s).abs() > 1e-12 {
            return e(format!("need s = s1 + s2, got {} != {} + {}", self.s, self.s1, self.s2));
        }
        if !(self.p > 1.0 && self.p < f64::INFINITY) {
            return e(format!("need 1 < p < inf, got p = {}", self.p));
        }
        if !(self.p1 > 1.0 && self.p2 > 1.0) {
            return e(format!("need p1, p2 > 1, got p1 = {}, p2 = {}", self.p1, self.p2));
        }
        if (1.0 / self.p - 1.0 / self.p1 - 1.0 / self.p2).abs() > 1e-12 {
            return e(format!(
                "need 1/p = 1/p1 + 1/p2, got p = {}, p1 = {}, p2 = {}",
                self.p, self.p1, self.p2
            ));
        }
        Ok(())
    }
}

/// Quadrature check of the commutator estimate on `grid` points.
pub fn check_kpv(f: &TorusField, g: &TorusField, exps: KpvExponents, grid: usize) -> Result<InequalityVerdict> {
    exps.validate()?;
    let band = f.max_mode() + g.max_mode();
    if grid < 2 * band + 2 {
        return Err(Error::GridTooSmall {
            required: 2 * band + 2,
            got: grid,
        });
    }
    let s = exps.s;
    let defect = &(&torus::product(f, &g.abs_deriv(s)) + &torus::product(g, &f.abs_deriv(s)))
        - &torus::product(f, g).abs_deriv(s);
    let lhs = lp_of_samples(&defect.sample(grid), exps.p);
    let rhs = lp_of_samples(&f.abs_deriv(exps.s1).sample(grid), exps.p1)
        * lp_of_samples(&g.abs_deriv(exps.s2).sample(grid), exps.p2);
    let scale = f.sobolev_norm(1.0) * g.sobolev_norm(1.0);
    Ok(InequalityVerdict::new(lhs, rhs, scale))
}

/// `u|D|ū - ū|D|u`, exact on `|k| <= 2K`. It is `i` times a real function.
pub fn commutator_field(u: &TorusField) -> TorusField {
    let du = u.abs_deriv(1.0);
    &torus::conj_product(u, &du) - &torus::conj_product(&du, u)
}

/// `u_N = (log N)^{-1/2} Σ_{1<=n<=N} e^{inx}/n`.
pub fn counterexample_field(big_n: usize) -> Result<TorusField> {
    if big_n < 2 {
        return Err(Error::invalid(format!("need N >= 2, got {big_n}")));
    }
    let norm = (big_n as f64).ln().sqrt();
    Ok(TorusField::from_fn(big_n, |k| {
        if k >= 1 {
            Complex64::new(1.0 / (k as f64 * norm), 0.0)
        } else {
            Complex64::new(0.0, 0.0)
        }
    }))
}

/// `u_N` and `R(N) = ‖u_N|D|ū_N - ū_N|D|u_N‖_{L²} / (‖u_N‖_{H^{1/2}} ‖u_N‖_{H¹})`.
pub fn log_counterexample(big_n: usize) -> Result<(TorusField, f64)> {
    let u = counterexample_field(big_n)?;
    let lhs = commutator_field(&u).l2_norm();
    let ratio = lhs / (u.sobolev_norm(0.5) * u.sobolev_norm(1.0));
    Ok((u, ratio))
}
