//! Numerical checks of the product, commutator and interpolation estimates.
//!
//! Every check returns an [`InequalityVerdict`]: the left side, the right side
//! without its (unspecified) constant, and their ratio. Constants are only
//! compared against where one is actually known.

mod bounds;
mod hankel;
mod leibniz;
mod phi;

pub use bounds::{
    brezis_gallouet_ratio, fit_brezis_gallouet_constant, gagliardo_nirenberg_check, l1_interpolation_check, real_part,
};
pub use hankel::{hankel_apply, hankel_bound_check, hankel_matrix_apply, HankelVerdict};
pub use leibniz::{
    check_kpv, check_leibniz_lemma, commutator_field, counterexample_field, leibniz_defect, log_counterexample,
    KpvExponents,
};
pub use phi::{coefficient_identity_defect, phi_grid_max, phi_supremum, phi_symbol};

use std::io::{self, Write};

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Result;
use crate::initial::member_rng;
use crate::record::format_float;

/// Relative size below which a left side counts as zero when the right side vanishes.
const ZERO_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InequalityVerdict {
    pub lhs: f64,
    /// Right side without its constant.
    pub rhs_factor: f64,
    /// `lhs / rhs_factor`.
    pub ratio: f64,
    /// The constant the ratio was checked against, if it passed.
    pub passed_with_constant: Option<f64>,
}

impl InequalityVerdict {
    /// Verdict with `ratio = lhs / rhs_factor`.
    ///
    /// When `rhs_factor = 0` the ratio is 0 if `lhs <= 1e-12·scale` and
    /// infinite otherwise; `scale` is the size the left side would have for
    /// data of the same magnitude.
    pub fn new(lhs: f64, rhs_factor: f64, scale: f64) -> Self {
        let ratio = if rhs_factor > 0.0 {
            lhs / rhs_factor
        } else if lhs <= ZERO_TOL * scale {
            0.0
        } else {
            f64::INFINITY
        };
        InequalityVerdict {
            lhs,
            rhs_factor,
            ratio,
            passed_with_constant: None,
        }
    }

    /// Records `constant` if `ratio <= constant` (to relative roundoff).
    pub fn against(mut self, constant: f64) -> Self {
        self.passed_with_constant = (self.ratio <= constant * (1.0 + ZERO_TOL)).then_some(constant);
        self
    }

    pub fn passed(&self) -> bool {
        self.passed_with_constant.is_some()
    }
}

/// One ensemble member of a lemma check.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleRow {
    pub lemma: String,
    pub params: String,
    pub resolution: usize,
    pub member: usize,
    pub verdict: InequalityVerdict,
}

/// Evaluates `check` on members `0..members`, member `m` drawing from stream `m` of `seed`.
///
/// Members run in parallel; the output order and values do not depend on the
/// thread count.
pub fn run_ensemble<F>(members: usize, seed: u64, check: F) -> Result<Vec<InequalityVerdict>>
where
    F: Fn(&mut ChaCha8Rng, usize) -> Result<InequalityVerdict> + Sync,
{
    (0..members)
        .into_par_iter()
        .map(|m| check(&mut member_rng(seed, m as u64), m))
        .collect()
}

/// Largest ratio of an ensemble.
pub fn ensemble_max(verdicts: &[InequalityVerdict]) -> f64 {
    verdicts.iter().map(|v| v.ratio).fold(0.0, f64::max)
}

pub const ENSEMBLE_HEADER: &str = "lemma,params,resolution,member,lhs,rhs_factor,ratio";

pub fn write_ensemble_csv(rows: &[EnsembleRow], out: &mut impl Write) -> io::Result<()> {
    writeln!(out, "{ENSEMBLE_HEADER}")?;
    for r in rows {
        writeln!(
            out,
            "{},{},{},{},{},{},{}",
            r.lemma,
            r.params,
            r.resolution,
            r.member,
            format_float(r.verdict.lhs),
            format_float(r.verdict.rhs_factor),
            format_float(r.verdict.ratio)
        )?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    #[test]
    fn ratio_rules() {
        assert_eq!(InequalityVerdict::new(2.0, 4.0, 1.0).ratio, 0.5);
        assert_eq!(InequalityVerdict::new(0.0, 0.0, 1.0).ratio, 0.0);
        assert_eq!(InequalityVerdict::new(1e-20, 0.0, 1.0).ratio, 0.0);
        assert!(InequalityVerdict::new(1.0, 0.0, 1.0).ratio.is_infinite());
        assert!(InequalityVerdict::new(1.0, 1.0, 1.0).against(1.0).passed());
        assert!(!InequalityVerdict::new(1.1, 1.0, 1.0).against(1.0).passed());
    }

    #[test]
    fn ensembles_are_thread_independent() {
        let check = |rng: &mut ChaCha8Rng, _m: usize| Ok(InequalityVerdict::new(rng.gen::<f64>(), 1.0, 1.0));
        let a = run_ensemble(64, 3, check).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| run_ensemble(64, 3, check)).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn csv_layout() {
        let rows = vec![EnsembleRow {
            lemma: "hankel".into(),
            params: "k=4".into(),
            resolution: 4,
            member: 0,
            verdict: InequalityVerdict::new(1.0, 2.0, 1.0),
        }];
        let mut buf = Vec::new();
        write_ensemble_csv(&rows, &mut buf).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap(),
            format!("{ENSEMBLE_HEADER}\nhankel,k=4,4,0,1.0,2.0,0.5\n")
        );
    }
}
