//! Time evolution for the fractional NLS family, the Szegő equation and the
//! quadratic half-wave system.
//!
//! | variant | equation |
//! |---|---|
//! | `FractionalNls { alpha }` | `i u_t = |D|^α u + |u|²u` |
//! | `HalfWave` | `i u_t = |D| u + |u|²u` |
//! | `Szego` | `i u_t = Π₊(|u|²u)` |
//! | `QuadraticPair` | `i u₁_t = |D|u₁ + u₂ conj(u₁)`, `i u₂_t = |D|u₂ + u₁²/2` |

mod conserved;
mod evolve;
mod picard;

pub use conserved::{conserved_quantities, pair_conserved, szego_conserved, ConservedReport, PairConservedReport};
pub use evolve::{evolve, Sampling};
pub use picard::{chebyshev_integration_matrix, picard_iterate};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::torus::{self, TorusField};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EvolutionSpec {
    FractionalNls { alpha: f64 },
    HalfWave,
    Szego,
    QuadraticPair,
}

impl EvolutionSpec {
    pub fn fractional_nls(alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 2.0) {
            return Err(Error::invalid(format!("alpha must lie in (0, 2], got {alpha}")));
        }
        Ok(EvolutionSpec::FractionalNls { alpha })
    }

    /// Dispersion exponent of the linear part, if any.
    pub fn alpha(&self) -> Option<f64> {
        match *self {
            EvolutionSpec::FractionalNls { alpha } => Some(alpha),
            EvolutionSpec::HalfWave | EvolutionSpec::QuadraticPair => Some(1.0),
            EvolutionSpec::Szego => None,
        }
    }

    pub fn is_pair(&self) -> bool {
        matches!(self, EvolutionSpec::QuadraticPair)
    }

    pub fn name(&self) -> &'static str {
        match self {
            EvolutionSpec::FractionalNls { .. } => "fnls",
            EvolutionSpec::HalfWave => "halfwave",
            EvolutionSpec::Szego => "szego",
            EvolutionSpec::QuadraticPair => "pair",
        }
    }

    /// Time derivative `u_t` of the (Galerkin-truncated) equation.
    pub fn rhs(&self, state: &State) -> Result<State> {
        match (self, state) {
            (EvolutionSpec::FractionalNls { .. } | EvolutionSpec::HalfWave, State::Scalar(u)) => {
                let alpha = self.alpha().expect("scalar dispersive variant");
                Ok(State::Scalar(nls_rhs(u, alpha)))
            }
            (EvolutionSpec::Szego, State::Scalar(u)) => Ok(State::Scalar(szego_rhs(u))),
            (EvolutionSpec::QuadraticPair, State::Pair(p)) => {
                let (n1, n2) = pair_nonlinear_rhs(p);
                let lin1 = p.u1.abs_deriv(1.0).scale(-Complex64::i());
                let lin2 = p.u2.abs_deriv(1.0).scale(-Complex64::i());
                Ok(State::Pair(PairField {
                    u1: &lin1 + &n1,
                    u2: &lin2 + &n2,
                }))
            }
            _ => Err(Error::invalid(format!(
                "state shape does not match variant {}",
                self.name()
            ))),
        }
    }
}

/// Phase-space point `(u₁, u₂)` of the quadratic system.
#[derive(Debug, Clone, PartialEq)]
pub struct PairField {
    pub u1: TorusField,
    pub u2: TorusField,
}

impl PairField {
    pub fn new(u1: TorusField, u2: TorusField) -> Result<Self> {
        if u1.max_mode() != u2.max_mode() {
            return Err(Error::invalid(format!(
                "pair components must share max mode ({} vs {})",
                u1.max_mode(),
                u2.max_mode()
            )));
        }
        Ok(PairField { u1, u2 })
    }

    pub fn max_mode(&self) -> usize {
        self.u1.max_mode()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum State {
    Scalar(TorusField),
    Pair(PairField),
}

impl State {
    pub fn max_mode(&self) -> usize {
        match self {
            State::Scalar(u) => u.max_mode(),
            State::Pair(p) => p.max_mode(),
        }
    }

    pub fn is_finite(&self) -> bool {
        match self {
            State::Scalar(u) => u.is_finite(),
            State::Pair(p) => p.u1.is_finite() && p.u2.is_finite(),
        }
    }

    /// Coefficient-wise conjugation, the time-reversal symmetry of every variant.
    pub fn conj_coeffs(&self) -> Self {
        match self {
            State::Scalar(u) => State::Scalar(u.conj_coeffs()),
            State::Pair(p) => State::Pair(PairField {
                u1: p.u1.conj_coeffs(),
                u2: p.u2.conj_coeffs(),
            }),
        }
    }

    pub fn as_scalar(&self) -> Option<&TorusField> {
        match self {
            State::Scalar(u) => Some(u),
            State::Pair(_) => None,
        }
    }

    pub fn as_pair(&self) -> Option<&PairField> {
        match self {
            State::Pair(p) => Some(p),
            State::Scalar(_) => None,
        }
    }

    /// `‖a - b‖_{H^s}` (summed in quadrature over pair components).
    pub fn distance(&self, other: &State, s: f64) -> f64 {
        match (self, other) {
            (State::Scalar(a), State::Scalar(b)) => (a - b).sobolev_norm(s),
            (State::Pair(a), State::Pair(b)) => {
                let d1 = (&a.u1 - &b.u1).sobolev_norm(s);
                let d2 = (&a.u2 - &b.u2).sobolev_norm(s);
                d1.hypot(d2)
            }
            _ => f64::INFINITY,
        }
    }
}

/// Free evolution `S(t) = e^{-it|D|^α}`.
#[derive(Debug, Clone)]
pub struct LinearPropagator {
    max_mode: usize,
    phases: Vec<Complex64>,
}

impl LinearPropagator {
    pub fn new(max_mode: usize, t: f64, alpha: f64) -> Self {
        let km = max_mode as i64;
        let phases = (-km..=km)
            .map(|k| Complex64::from_polar(1.0, -t * (k.unsigned_abs() as f64).powf(alpha)))
            .collect();
        LinearPropagator { max_mode, phases }
    }

    pub fn apply(&self, u: &TorusField) -> TorusField {
        assert_eq!(
            u.max_mode(),
            self.max_mode,
            "propagator built for a different band limit"
        );
        let coeffs = u.coeffs().iter().zip(&self.phases).map(|(c, p)| c * p).collect();
        TorusField::from_coeffs(self.max_mode, coeffs).expect("same length")
    }
}

/// `S(t)u`: multiplies mode `k` by `e^{-it|k|^α}`.
pub fn linear_propagate(u: &TorusField, t: f64, alpha: f64) -> TorusField {
    LinearPropagator::new(u.max_mode(), t, alpha).apply(u)
}

/// Minimum grid for [`nonlinear_phase_step`].
pub fn phase_step_grid(max_mode: usize) -> usize {
    crate::fft::smooth_size(4 * max_mode + 2)
}

/// Exact flow of `i u_t = |u|²u` over time `tau`, projected back to the band.
///
/// The flow is `u(x) e^{-i|u(x)|²τ}` pointwise; it is evaluated on `grid`
/// points and the modes `|k| <= K` are read back.
pub fn nonlinear_phase_step(u: &TorusField, tau: f64, grid: usize) -> Result<TorusField> {
    let required = 4 * u.max_mode() + 2;
    if grid < required {
        return Err(Error::GridTooSmall { required, got: grid });
    }
    Ok(phase_step_unchecked(u, tau, grid))
}

pub(crate) fn phase_step_unchecked(u: &TorusField, tau: f64, grid: usize) -> TorusField {
    let vals: Vec<Complex64> = u
        .sample(grid)
        .into_iter()
        .map(|v| v * Complex64::from_polar(1.0, -v.norm_sqr() * tau))
        .collect();
    TorusField::from_samples(&vals, u.max_mode()).expect("grid exceeds 2K + 1")
}

/// `-i(|D|^α u + P_K(|u|²u))`.
pub(crate) fn nls_rhs(u: &TorusField, alpha: f64) -> TorusField {
    let lin = u.abs_deriv(alpha);
    let nl = torus::cubic_term(u);
    (&lin + &nl).scale(-Complex64::i())
}

/// `-i Π₊ P_K(|u|²u)`.
pub(crate) fn szego_rhs(u: &TorusField) -> TorusField {
    torus::cubic_term(u).szego_project().scale(-Complex64::i())
}

/// Nonlinear part of the quadratic system: `(-i P_K(u₂ conj(u₁)), -i P_K(u₁²/2))`.
pub(crate) fn pair_nonlinear_rhs(p: &PairField) -> (TorusField, TorusField) {
    let k = p.max_mode();
    let n = torus::dealias_grid(2 * k, k);
    let v1 = p.u1.sample(n);
    let v2 = p.u2.sample(n);
    let mi = -Complex64::i();
    let a: Vec<Complex64> = v1.iter().zip(&v2).map(|(a, b)| mi * b * a.conj()).collect();
    let b: Vec<Complex64> = v1.iter().map(|a| mi * 0.5 * a * a).collect();
    (
        TorusField::from_samples(&a, k).expect("dealiased grid"),
        TorusField::from_samples(&b, k).expect("dealiased grid"),
    )
}
