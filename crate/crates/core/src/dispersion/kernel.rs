use std::f64::consts::PI;

use num_complex::Complex64;

use super::{check_dyadic, DyadicCutoff};
use crate::error::{Error, Result};
use crate::torus::TorusField;

fn kernel_field(big_n: u64, t: f64, alpha: f64) -> TorusField {
    let psi = DyadicCutoff;
    TorusField::from_fn(2 * big_n as usize, |k| {
        let a = k.unsigned_abs();
        Complex64::from_polar(psi.multiplier(a, big_n), -(a as f64).powf(alpha) * t)
    })
}

/// `κ_N(x_j, t) = Σ_k ψ(|k|/N) e^{i(k x_j - |k|^α t)}` at `x_j = 2πj/x_grid`.
pub fn kernel_kappa(big_n: u64, t: f64, alpha: f64, x_grid: usize) -> Result<Vec<Complex64>> {
    check_dyadic(big_n)?;
    if big_n < 2 {
        return Err(Error::invalid("the kernel is defined for N >= 2"));
    }
    Ok(kernel_field(big_n, t, alpha).sample(x_grid))
}

/// `sup_x |κ_N(x, t)|`: grid maximum on `x_grid` points, refined by golden-section search
/// around the largest grid values with direct evaluation.
pub fn kernel_sup(big_n: u64, t: f64, alpha: f64, x_grid: usize) -> Result<f64> {
    let vals = kernel_kappa(big_n, t, alpha, x_grid)?;
    let field = kernel_field(big_n, t, alpha);
    let h = 2.0 * PI / x_grid as f64;
    let mut idx: Vec<usize> = (0..x_grid).collect();
    idx.sort_by(|&a, &b| vals[b].norm().total_cmp(&vals[a].norm()));
    let mut best = vals[idx[0]].norm();
    let f = |x: f64| field.eval(x).norm();
    for &j in idx.iter().take(8) {
        let (mut a, mut b) = ((j as f64 - 1.0) * h, (j as f64 + 1.0) * h);
        let g = 0.5 * (5f64.sqrt() - 1.0);
        let mut c = b - g * (b - a);
        let mut d = a + g * (b - a);
        let (mut fc, mut fd) = (f(c), f(d));
        for _ in 0..60 {
            if fc > fd {
                b = d;
                d = c;
                fd = fc;
                c = b - g * (b - a);
                fc = f(c);
            } else {
                a = c;
                c = d;
                fc = fd;
                d = a + g * (b - a);
                fd = f(d);
            }
        }
        best = best.max(fc).max(fd);
    }
    Ok(best)
}

/// Empirical dispersion constants `C = sup_x|κ_N(·,t)| t^{1/2} / N^{1-α/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct DispersionFit {
    /// Largest ratio over all fitted `(N, t)`.
    pub constant: f64,
    /// Per `N`: largest ratio over the admitted times.
    pub per_n: Vec<(u64, f64)>,
    /// `max / min` of the per-`N` constants.
    pub variation: f64,
    /// `(N, t)` pairs left out because `t < 4/N^α`.
    pub excluded: Vec<(u64, f64)>,
}

/// Fits the dispersion constant over `ns × ts`, skipping `t < 4/N^α` where the
/// trivial bound `sup ≤ Σψ ≈ cN` is the better one.
pub fn dispersion_constant_fit(alpha: f64, ns: &[u64], ts: &[f64]) -> Result<DispersionFit> {
    if !(alpha > 2.0 / 3.0 && alpha < 1.0) {
        return Err(Error::invalid(format!("need 2/3 < alpha < 1, got {alpha}")));
    }
    if let Some(t) = ts.iter().find(|t| !(**t > 0.0 && **t <= 1.0)) {
        return Err(Error::invalid(format!("times must lie in (0, 1], got {t}")));
    }
    let mut per_n = Vec::new();
    let mut excluded = Vec::new();
    for &n in ns {
        check_dyadic(n)?;
        let cutoff = 4.0 / (n as f64).powf(alpha);
        let mut best: Option<f64> = None;
        for &t in ts {
            if t < cutoff {
                excluded.push((n, t));
                continue;
            }
            let sup = kernel_sup(n, t, alpha, 16 * n as usize)?;
            let r = sup * t.sqrt() / (n as f64).powf(1.0 - alpha / 2.0);
            best = Some(best.map_or(r, |b: f64| b.max(r)));
        }
        if let Some(b) = best {
            per_n.push((n, b));
        }
    }
    if per_n.is_empty() {
        return Err(Error::InsufficientSamples(
            "no (N, t) pair above the cutoff 4/N^alpha".into(),
        ));
    }
    let constant = per_n.iter().map(|p| p.1).fold(0.0, f64::max);
    let min = per_n.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    Ok(DispersionFit {
        constant,
        per_n,
        variation: constant / min,
        excluded,
    })
}
