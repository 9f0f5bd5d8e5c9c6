use super::InequalityVerdict;
use crate::error::{Error, Result};
use crate::torus::{lp_of_samples, TorusField};

/// Real part `(u + ū)/2`, i.e. coefficients `(u_k + conj(u_{-k}))/2`.
pub fn real_part(u: &TorusField) -> TorusField {
    u.map_modes(|k, c| 0.5 * (c + u.coeff(-k).conj()))
}

/// `‖w‖_{L∞} / (‖w‖_{H^{1/2}} [log(1 + ‖w‖_{H^s}/‖w‖_{H^{1/2}})]^{1/2})`, sup taken on `grid` points.
pub fn brezis_gallouet_ratio(w: &TorusField, s: f64, grid: usize) -> Result<InequalityVerdict> {
    if !(s > 0.5) {
        return Err(Error::invalid(format!("need s > 1/2, got {s}")));
    }
    if w.is_zero() {
        return Err(Error::invalid("the Brezis-Gallouet ratio is undefined for w = 0"));
    }
    let sup = w.lp_norm(f64::INFINITY, grid)?;
    let half = w.sobolev_norm(0.5);
    let rhs = half * (w.sobolev_norm(s) / half).ln_1p().sqrt();
    Ok(InequalityVerdict::new(sup, rhs, half))
}

/// Empirical Brezis–Gallouët constant: the largest ratio over `fields`.
pub fn fit_brezis_gallouet_constant(fields: &[TorusField], s: f64) -> Result<f64> {
    let mut best: f64 = 0.0;
    for w in fields {
        let grid = crate::torus::default_grid(w.max_mode());
        best = best.max(brezis_gallouet_ratio(w, s, grid)?.ratio);
    }
    Ok(best)
}

/// `‖w‖_{ℓ¹} / (‖w‖_{ℓ²} ‖w‖_{h¹})^{1/2}` with `‖w‖²_{h¹} = Σ(1+k²)|w_k|²`, checked against constant 1.
pub fn l1_interpolation_check(w: &TorusField) -> Result<InequalityVerdict> {
    if w.is_zero() {
        return Err(Error::invalid("empty sequence"));
    }
    let l1: f64 = w.coeffs().iter().map(|c| c.norm()).sum();
    let rhs = (w.l2_norm() * w.sobolev_norm(1.0)).sqrt();
    Ok(InequalityVerdict::new(l1, rhs, l1).against(1.0))
}

/// `‖|D|^s f‖_{L^p}` against `‖f‖_{L∞} + ‖|D|^{sp/2}f‖^{2/p}_{L²} ‖f‖^{1-2/p}_{L∞}` for real `f`.
pub fn gagliardo_nirenberg_check(f: &TorusField, s: f64, p: f64, grid: usize) -> Result<InequalityVerdict> {
    if !(p > 2.0) {
        return Err(Error::invalid(format!("need p > 2, got {p}")));
    }
    if !(s > 0.0) {
        return Err(Error::invalid(format!("need s > 0, got {s}")));
    }
    if f.real_defect() > 1e-12 * f.l2_norm() {
        return Err(Error::invalid(
            "f must be real-valued (conjugate-symmetric coefficients)",
        ));
    }
    let required = 2 * f.max_mode() + 2;
    if grid < required {
        return Err(Error::GridTooSmall { required, got: grid });
    }
    let lhs = lp_of_samples(&f.abs_deriv(s).sample(grid), p);
    let sup = lp_of_samples(&f.sample(grid), f64::INFINITY);
    let rhs = sup + f.homogeneous_norm(s * p / 2.0).powf(2.0 / p) * sup.powf(1.0 - 2.0 / p);
    Ok(InequalityVerdict::new(lhs, rhs, f.sobolev_norm(s.max(1.0))))
}
