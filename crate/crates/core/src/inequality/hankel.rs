use num_complex::Complex64;

use super::InequalityVerdict;
use crate::error::{Error, Result};
use crate::torus::{self, TorusField};

fn require_positive(name: &str, f: &TorusField) -> Result<()> {
    if !f.is_nonnegative_spectrum() {
        return Err(Error::invalid(format!(
            "{name} has negative modes; apply the Szego projector first"
        )));
    }
    Ok(())
}

/// `H_v(h) = Π₊(v h̄)`, exact, returned with the band limit of `v`.
pub fn hankel_apply(v: &TorusField, h: &TorusField) -> Result<TorusField> {
    require_positive("v", v)?;
    require_positive("h", h)?;
    Ok(torus::conj_product(v, h).szego_project().with_max_mode(v.max_mode()))
}

/// `(H_v h)_k = Σ_{j>=0} v_{k+j} conj(h_j)`: the Hankel matrix of `v` applied to `conj(h)`.
pub fn hankel_matrix_apply(v: &TorusField, h: &TorusField) -> TorusField {
    let kh = h.max_mode() as i64;
    TorusField::from_fn(v.max_mode(), |k| {
        if k < 0 {
            return Complex64::new(0.0, 0.0);
        }
        (0..=kh).map(|j| v.coeff(k + j) * h.coeff(j).conj()).sum()
    })
}

/// The Hankel bound under two weights.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HankelVerdict {
    /// Right side `(Σ_{k>=0}(1+k)|v_k|²)^{1/2}‖h‖`, checked against constant 1.
    pub proof_weight: InequalityVerdict,
    /// Right side `‖v‖_{H^{1/2}}‖h‖` with weight `(1+k²)^{1/2}`, checked against `2^{1/4}`.
    pub convention: InequalityVerdict,
}

pub fn hankel_bound_check(v: &TorusField, h: &TorusField) -> Result<HankelVerdict> {
    let lhs = hankel_apply(v, h)?.l2_norm();
    let hn = h.l2_norm();
    let proof = v
        .modes()
        .map(|(k, c)| (1.0 + k as f64) * c.norm_sqr())
        .sum::<f64>()
        .sqrt()
        * hn;
    let conv = v.sobolev_norm(0.5) * hn;
    let scale = v.l2_norm() * hn;
    Ok(HankelVerdict {
        proof_weight: InequalityVerdict::new(lhs, proof, scale).against(1.0),
        convention: InequalityVerdict::new(lhs, conv, scale).against(2f64.powf(0.25)),
    })
}
