//! Band-limited functions on the one-dimensional torus.
//!
//! A [`TorusField`] stores the Fourier coefficients `u_k`, `|k| <= K`, of
//! `u(x) = Σ u_k e^{ikx}`. All norms in this crate use the conventions of
//! [`NormConvention`]:
//!
//! * the torus carries the normalized measure `dx / 2π`, so
//!   `‖u‖²_{L²} = Σ |u_k|²` and `(u, v) = Σ u_k conj(v_k)`;
//! * `‖u‖²_{H^s} = Σ (1 + k²)^s |u_k|²` (inhomogeneous weight, so `k = 0`
//!   is well defined for every `s`);
//! * homogeneous seminorms are `‖|D|^s u‖_{L²}`.
//!
//! Integrals `∫_𝕋` written with the Lebesgue measure differ from these by a
//! factor `2π`; every constant reported by the crate is under the normalized
//! convention.

mod products;

pub use products::{conj_product, cubic_term, cubic_term_full, dealias_grid, modulus_squared, product};

use std::ops::{Add, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;

/// Norm and inner-product conventions shared by the whole crate.
#[derive(Debug, Clone, Copy, Default)]
pub struct NormConvention;

impl NormConvention {
    /// Sobolev weight `(1 + k²)^s` applied to `|u_k|²`.
    #[inline]
    pub fn weight(k: i64, s: f64) -> f64 {
        (1.0 + (k as f64) * (k as f64)).powf(s)
    }

    /// `(u, v) = Σ u_k conj(v_k)`, the `L²` inner product for the normalized measure.
    pub fn inner(u: &TorusField, v: &TorusField) -> Complex64 {
        u.inner(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TorusField {
    max_mode: usize,
    coeffs: Vec<Complex64>,
}

impl TorusField {
    pub fn zeros(max_mode: usize) -> Self {
        TorusField {
            max_mode,
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * max_mode + 1],
        }
    }

    /// Builds a field from `2K + 1` coefficients ordered `k = -K, ..., K`.
    pub fn from_coeffs(max_mode: usize, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len() != 2 * max_mode + 1 {
            return Err(Error::invalid(format!(
                "expected {} coefficients for max mode {}, got {}",
                2 * max_mode + 1,
                max_mode,
                coeffs.len()
            )));
        }
        Ok(TorusField { max_mode, coeffs })
    }

    pub fn from_fn(max_mode: usize, f: impl Fn(i64) -> Complex64) -> Self {
        let k = max_mode as i64;
        TorusField {
            max_mode,
            coeffs: (-k..=k).map(f).collect(),
        }
    }

    /// `amplitude · e^{ikx}`.
    pub fn plane_wave(max_mode: usize, k: i64, amplitude: Complex64) -> Self {
        assert!(
            k.unsigned_abs() as usize <= max_mode,
            "mode {k} exceeds max mode {max_mode}"
        );
        let mut u = Self::zeros(max_mode);
        u.coeffs[(k + max_mode as i64) as usize] = amplitude;
        u
    }

    pub fn constant(max_mode: usize, c: Complex64) -> Self {
        Self::plane_wave(max_mode, 0, c)
    }

    #[inline]
    pub fn max_mode(&self) -> usize {
        self.max_mode
    }

    #[inline]
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// Coefficient of `e^{ikx}`; zero outside the band.
    #[inline]
    pub fn coeff(&self, k: i64) -> Complex64 {
        let km = self.max_mode as i64;
        if k.abs() > km {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + km) as usize]
        }
    }

    /// Iterates over `(k, u_k)` for `k = -K, ..., K`.
    pub fn modes(&self) -> impl Iterator<Item = (i64, Complex64)> + '_ {
        let km = self.max_mode as i64;
        self.coeffs.iter().enumerate().map(move |(i, &c)| (i as i64 - km, c))
    }

    /// Applies `f(k, u_k)` to every coefficient.
    pub fn map_modes(&self, f: impl Fn(i64, Complex64) -> Complex64) -> Self {
        TorusField {
            max_mode: self.max_mode,
            coeffs: self.modes().map(|(k, c)| f(k, c)).collect(),
        }
    }

    /// Truncates or zero-pads to a new band limit.
    pub fn with_max_mode(&self, max_mode: usize) -> Self {
        Self::from_fn(max_mode, |k| self.coeff(k))
    }

    pub fn scale(&self, c: Complex64) -> Self {
        self.map_modes(|_, u| u * c)
    }

    /// Pointwise complex conjugate `conj(u(x))`: coefficient `k` becomes `conj(u_{-k})`.
    pub fn conj(&self) -> Self {
        Self::from_fn(self.max_mode, |k| self.coeff(-k).conj())
    }

    /// Conjugates every coefficient in place, i.e. `x ↦ conj(u(-x))`.
    ///
    /// Unlike [`TorusField::conj`] this preserves the range of the Szegő projector.
    pub fn conj_coeffs(&self) -> Self {
        self.map_modes(|_, c| c.conj())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.re == 0.0 && c.im == 0.0)
    }

    pub fn is_finite(&self) -> bool {
        self.coeffs.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    /// Largest violation of the conjugate symmetry `u_{-k} = conj(u_k)` of real functions.
    pub fn real_defect(&self) -> f64 {
        self.modes()
            .map(|(k, c)| (c - self.coeff(-k).conj()).norm())
            .fold(0.0, f64::max)
    }

    /// `(u, v) = Σ u_k conj(v_k)` over the common band.
    pub fn inner(&self, other: &TorusField) -> Complex64 {
        let k = self.max_mode.min(other.max_mode) as i64;
        (-k..=k).map(|m| self.coeff(m) * other.coeff(m).conj()).sum()
    }

    /// Value at a single point by direct summation.
    pub fn eval(&self, x: f64) -> Complex64 {
        self.modes()
            .map(|(k, c)| c * Complex64::from_polar(1.0, k as f64 * x))
            .sum()
    }

    /// Values `u(2πj/n)`, `j = 0..n`.
    ///
    /// Evaluation is exact for every `n`: modes that coincide modulo `n` are
    /// summed before the transform.
    pub fn sample(&self, n: usize) -> Vec<Complex64> {
        assert!(n > 0, "grid must be non-empty");
        let mut buf = vec![Complex64::new(0.0, 0.0); n];
        for (k, c) in self.modes() {
            buf[k.rem_euclid(n as i64) as usize] += c;
        }
        fft::inverse(&mut buf);
        buf
    }

    /// Reads the modes `|k| <= max_mode` of grid values `u(2πj/n)`.
    ///
    /// Requires `n >= 2·max_mode + 1`. Content above the band aliases into the
    /// result unless the caller's grid is large enough to keep it out.
    pub fn from_samples(values: &[Complex64], max_mode: usize) -> Result<Self> {
        let n = values.len();
        if n < 2 * max_mode + 1 {
            return Err(Error::GridTooSmall {
                required: 2 * max_mode + 1,
                got: n,
            });
        }
        let mut buf = values.to_vec();
        fft::forward(&mut buf);
        let scale = 1.0 / n as f64;
        Ok(Self::from_fn(max_mode, |k| {
            buf[k.rem_euclid(n as i64) as usize] * scale
        }))
    }

    /// `|D|^ρ u`: multiplies coefficient `k` by `|k|^ρ` (with `0^0 = 1`).
    pub fn fractional_derivative(&self, rho: f64) -> Result<Self> {
        if !(rho >= 0.0) {
            return Err(Error::invalid(format!("derivative order must be >= 0, got {rho}")));
        }
        Ok(self.abs_deriv(rho))
    }

    /// Infallible `|D|^ρ` for internal callers with `ρ >= 0` already checked.
    pub(crate) fn abs_deriv(&self, rho: f64) -> Self {
        if rho == 0.0 {
            return self.clone();
        }
        self.map_modes(|k, c| c * (k.unsigned_abs() as f64).powf(rho))
    }

    /// Szegő projector `Π₊`: keeps the modes `k >= 0`.
    pub fn szego_project(&self) -> Self {
        self.map_modes(|k, c| if k < 0 { Complex64::new(0.0, 0.0) } else { c })
    }

    /// True when every negative mode is exactly zero.
    pub fn is_nonnegative_spectrum(&self) -> bool {
        self.modes().all(|(k, c)| k >= 0 || (c.re == 0.0 && c.im == 0.0))
    }

    pub fn l2_norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `(Σ (1+k²)^s |u_k|²)^{1/2}`.
    pub fn sobolev_norm(&self, s: f64) -> f64 {
        if s == 0.0 {
            return self.l2_norm();
        }
        self.modes()
            .map(|(k, c)| NormConvention::weight(k, s) * c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// `‖|D|^s u‖_{L²}`.
    pub fn homogeneous_norm(&self, s: f64) -> f64 {
        self.modes()
            .map(|(k, c)| (k.unsigned_abs() as f64).powf(2.0 * s) * c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Equispaced quadrature of `(mean |u|^p)^{1/p}`; `p = ∞` gives the grid maximum.
    pub fn lp_norm(&self, p: f64, grid: usize) -> Result<f64> {
        let required = 2 * self.max_mode + 2;
        if grid < required {
            return Err(Error::GridTooSmall { required, got: grid });
        }
        if !(p >= 1.0) {
            return Err(Error::invalid(format!("L^p exponent must be >= 1, got {p}")));
        }
        let values = self.sample(grid);
        Ok(lp_of_samples(&values, p))
    }

    /// Grid maximum of `|u|` on the default oversampled grid.
    pub fn sup_norm(&self) -> f64 {
        let values = self.sample(default_grid(self.max_mode));
        lp_of_samples(&values, f64::INFINITY)
    }
}

/// Default quadrature grid for norms of a field with band limit `K`.
pub fn default_grid(max_mode: usize) -> usize {
    fft::smooth_size(4 * max_mode + 2)
}

pub(crate) fn lp_of_samples(values: &[Complex64], p: f64) -> f64 {
    if p.is_infinite() {
        return values.iter().map(|v| v.norm()).fold(0.0, f64::max);
    }
    let mean = values.iter().map(|v| v.norm().powf(p)).sum::<f64>() / values.len() as f64;
    mean.powf(1.0 / p)
}

impl Add for &TorusField {
    type Output = TorusField;

    fn add(self, rhs: &TorusField) -> TorusField {
        let k = self.max_mode.max(rhs.max_mode);
        TorusField::from_fn(k, |m| self.coeff(m) + rhs.coeff(m))
    }
}

impl Sub for &TorusField {
    type Output = TorusField;

    fn sub(self, rhs: &TorusField) -> TorusField {
        let k = self.max_mode.max(rhs.max_mode);
        TorusField::from_fn(k, |m| self.coeff(m) - rhs.coeff(m))
    }
}

impl Mul<Complex64> for &TorusField {
    type Output = TorusField;

    fn mul(self, rhs: Complex64) -> TorusField {
        self.scale(rhs)
    }
}

impl Mul<f64> for &TorusField {
    type Output = TorusField;

    fn mul(self, rhs: f64) -> TorusField {
        self.scale(Complex64::new(rhs, 0.0))
    }
}
