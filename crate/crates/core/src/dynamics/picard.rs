//! Duhamel fixed point on a short interval, as an independent check of `evolve`.
//!
//! The iteration runs in the interaction picture `v(t) = S(-t)u(t)`, where the
//! map reads `v(t) = u₀ - i∫₀ᵗ S(-s) P_K(|u|²u)(s) ds` and `v` is smooth in
//! time. The integral is taken on Chebyshev–Lobatto nodes through the exact
//! antiderivative of the interpolating polynomial.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::LinearPropagator;
use crate::error::{Error, Result};
use crate::torus::{cubic_term, TorusField};

/// Row `i` integrates the interpolant of the node values from 0 to `t_i`,
/// with nodes `t_j = T(1 - cos(πj/n))/2`, `j = 0..=n`.
pub fn chebyshev_integration_matrix(nodes: usize, t_final: f64) -> Vec<Vec<f64>> {
    assert!(nodes >= 2, "need at least two nodes");
    let n = nodes - 1;
    let x: Vec<f64> = (0..=n).map(|j| -(PI * j as f64 / n as f64).cos()).collect();
    let cheb = |m: usize, x: f64| (m as f64 * x.clamp(-1.0, 1.0).acos()).cos();

    let mut mat = vec![vec![0.0; n + 1]; n + 1];
    for j in 0..=n {
        let wj = if j == 0 || j == n { 0.5 } else { 1.0 };
        // Interpolation coefficients of the unit vector e_j.
        let a: Vec<f64> = (0..=n)
            .map(|m| {
                let scale = if m == 0 || m == n { 1.0 } else { 2.0 } / n as f64;
                scale * wj * cheb(m, x[j])
            })
            .collect();
        // Antiderivative coefficients, degree n + 1.
        let mut b = vec![0.0; n + 2];
        for (m, &am) in a.iter().enumerate() {
            match m {
                0 => b[1] += am,
                1 => b[2] += am / 4.0,
                _ => {
                    b[m + 1] += am / (2.0 * (m + 1) as f64);
                    b[m - 1] -= am / (2.0 * (m - 1) as f64);
                }
            }
        }
        let eval = |x: f64| b.iter().enumerate().map(|(m, bm)| bm * cheb(m, x)).sum::<f64>();
        let base = eval(-1.0);
        for i in 0..=n {
            mat[i][j] = 0.5 * t_final * (eval(x[i]) - base);
        }
    }
    mat
}

/// `u(T)` from the Duhamel map of `i u_t = |D|^α u + P_K(|u|²u)`.
///
/// Iterates until successive iterates differ by at most `tol·‖u₀‖` at every
/// node. Growth of that residual, or `max_iter` iterations without reaching
/// `tol`, is reported as [`Error::NonContraction`] with the residual history.
pub fn picard_iterate(
    u0: &TorusField,
    alpha: f64,
    t_final: f64,
    n_quad: usize,
    max_iter: usize,
    tol: f64,
) -> Result<TorusField> {
    if n_quad < 2 {
        return Err(Error::invalid(format!(
            "need at least 2 quadrature nodes, got {n_quad}"
        )));
    }
    if !(t_final > 0.0 && t_final.is_finite()) {
        return Err(Error::invalid(format!("final time must be positive, got {t_final}")));
    }
    let k = u0.max_mode();
    let n = n_quad - 1;
    let times: Vec<f64> = (0..=n)
        .map(|j| 0.5 * t_final * (1.0 - (PI * j as f64 / n as f64).cos()))
        .collect();
    let fwd: Vec<LinearPropagator> = times.iter().map(|&t| LinearPropagator::new(k, t, alpha)).collect();
    let back: Vec<LinearPropagator> = times.iter().map(|&t| LinearPropagator::new(k, -t, alpha)).collect();
    let mat = chebyshev_integration_matrix(n_quad, t_final);
    let scale = u0.l2_norm();
    let mi = -Complex64::i();

    let mut v: Vec<TorusField> = vec![u0.clone(); n + 1];
    let mut residuals = Vec::new();
    for _ in 0..max_iter {
        let g: Vec<TorusField> = (0..=n)
            .map(|j| back[j].apply(&cubic_term(&fwd[j].apply(&v[j]))))
            .collect();
        let next: Vec<TorusField> = (0..=n)
            .map(|i| {
                let mut acc = u0.clone();
                for (j, gj) in g.iter().enumerate() {
                    acc = &acc + &(gj * (mi * mat[i][j]));
                }
                acc
            })
            .collect();
        let res = next.iter().zip(&v).map(|(a, b)| (a - b).l2_norm()).fold(0.0, f64::max);
        residuals.push(res);
        v = next;
        if !res.is_finite() {
            return Err(Error::NonContraction { residuals });
        }
        if res <= tol * scale {
            return Ok(fwd[n].apply(&v[n]));
        }
        let m = residuals.len();
        if m >= 3 && residuals[m - 1] > residuals[m - 2] {
            return Err(Error::NonContraction { residuals });
        }
    }
    Err(Error::NonContraction { residuals })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::initial::random_field;

    #[test]
    fn integration_matrix_is_exact_on_smooth_functions() {
        let t = 2.0;
        let nodes = 24;
        let mat = chebyshev_integration_matrix(nodes, t);
        let ts: Vec<f64> = (0..nodes)
            .map(|j| 0.5 * t * (1.0 - (PI * j as f64 / (nodes - 1) as f64).cos()))
            .collect();
        for (i, ti) in ts.iter().enumerate() {
            let approx: f64 = (0..nodes).map(|j| mat[i][j] * ts[j].cos()).sum();
            assert!((approx - ti.sin()).abs() < 1e-13, "node {i}");
        }
    }

    #[test]
    fn zero_data_stays_zero() {
        let u = picard_iterate(&TorusField::zeros(4), 1.5, 0.01, 8, 10, 1e-14).unwrap();
        assert!(u.is_zero());
    }

    #[test]
    fn plane_wave_closed_form() {
        let a = Complex64::new(0.8, -0.2);
        let u0 = TorusField::plane_wave(4, 1, a);
        let t = 0.01;
        let u = picard_iterate(&u0, 2.0, t, 12, 50, 1e-14).unwrap();
        let exact = TorusField::plane_wave(4, 1, a * Complex64::from_polar(1.0, -(1.0 + a.norm_sqr()) * t));
        assert!((&u - &exact).l2_norm() < 1e-8);
    }

    #[test]
    fn divergence_is_reported() {
        let u0 = random_field(8, 0.0, 30.0, 2);
        match picard_iterate(&u0, 1.5, 1.0, 8, 40, 1e-14) {
            Err(Error::NonContraction { residuals }) => assert!(!residuals.is_empty()),
            other => panic!("expected non-contraction, got {other:?}"),
        }
    }
}
