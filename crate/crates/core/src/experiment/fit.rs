use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::record::{format_param, TrajectoryRecord};

/// Regressor for `log‖u(t)‖`: `log(1+|t|)`, `|t|` or `t²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GrowthModel {
    Power,
    ExpT,
    ExpT2,
}

impl GrowthModel {
    fn regressor(self, t: f64) -> f64 {
        match self {
            GrowthModel::Power => t.abs().ln_1p(),
            GrowthModel::ExpT => t.abs(),
            GrowthModel::ExpT2 => t * t,
        }
    }
}

impl FromStr for GrowthModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "power" => Ok(GrowthModel::Power),
            "exp_t" => Ok(GrowthModel::ExpT),
            "exp_t2" => Ok(GrowthModel::ExpT2),
            _ => Err(Error::invalid(format!(
                "unknown growth model {s:?} (power, exp_t, exp_t2)"
            ))),
        }
    }
}

impl fmt::Display for GrowthModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GrowthModel::Power => "power",
            GrowthModel::ExpT => "exp_t",
            GrowthModel::ExpT2 => "exp_t2",
        })
    }
}

/// Least-squares line `log‖u‖ ≈ intercept + exponent·x`.
///
/// The fit describes the observed window only; it says nothing about whether
/// any upper bound is attained.
#[derive(Debug, Clone, PartialEq)]
pub struct GrowthFit {
    pub model: GrowthModel,
    pub column: String,
    pub exponent: f64,
    pub intercept: f64,
    /// Root-mean-square residual in `log‖u‖`.
    pub residual: f64,
    pub samples: usize,
}

/// Fits column `hs_<s>`.
pub fn fit_growth(record: &TrajectoryRecord, s: f64, model: GrowthModel) -> Result<GrowthFit> {
    fit_growth_column(record, &format!("hs_{}", format_param(s)), model)
}

/// Needs at least 100 samples, or times spanning two decades.
pub fn fit_growth_column(record: &TrajectoryRecord, column: &str, model: GrowthModel) -> Result<GrowthFit> {
    let ys = record
        .column(column)
        .ok_or_else(|| Error::invalid(format!("record has no column {column:?}")))?;
    let ts = record.times();
    let positive: Vec<f64> = ts.iter().map(|t| t.abs()).filter(|t| *t > 0.0).collect();
    let decades = match (
        positive.iter().cloned().reduce(f64::min),
        positive.iter().cloned().reduce(f64::max),
    ) {
        (Some(lo), Some(hi)) => (hi / lo).log10(),
        _ => 0.0,
    };
    if ys.len() < 100 && decades < 2.0 {
        return Err(Error::InsufficientSamples(format!(
            "{} samples spanning {decades:.2} decades of t; need 100 samples or 2 decades",
            ys.len()
        )));
    }
    if let Some(y) = ys.iter().find(|y| !(**y > 0.0 && y.is_finite())) {
        return Err(Error::invalid(format!(
            "norms must be positive and finite to take logs, got {y}"
        )));
    }
    let xs: Vec<f64> = ts.iter().map(|&t| model.regressor(t)).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ly.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    if !(sxx > 0.0) {
        return Err(Error::InsufficientSamples(
            "all samples share one regressor value".into(),
        ));
    }
    let sxy: f64 = xs.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    let exponent = sxy / sxx;
    let intercept = my - exponent * mx;
    let sse: f64 = xs
        .iter()
        .zip(&ly)
        .map(|(x, y)| (y - intercept - exponent * x).powi(2))
        .sum();
    Ok(GrowthFit {
        model,
        column: column.to_string(),
        exponent,
        intercept,
        residual: (sse / n).sqrt(),
        samples: ys.len(),
    })
}

/// Polynomial growth exponent `A = (2n+α)/(α-1)` of the `H^{α+n}` bound, for `α > 1`.
pub fn theorem_exponent(alpha: f64, n: u32) -> Result<f64> {
    if !(alpha > 1.0 && alpha <= 2.0) {
        return Err(Error::invalid(format!(
            "the polynomial bound needs 1 < alpha <= 2, got {alpha}"
        )));
    }
    Ok((2.0 * n as f64 + alpha) / (alpha - 1.0))
}
