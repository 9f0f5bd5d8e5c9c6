//! `‖u‖²_{X^{s,b}} = (1/2π) Σ_k ∫ (1+k²)^s (1+|τ+|k|^α|²)^b |ℱu(τ,k)|² dτ`
//! from coefficient samples on a uniform time grid.
//!
//! With `v_k(t) = e^{i|k|^α t} u_k(t)` the transform shifts, `ℱu(τ,k) = ℱv(τ+|k|^α, k)`,
//! so each mode is transformed in the interaction picture where it varies
//! slowly. The windowed `v_k` is zero padded and transformed, and the `τ`
//! integral becomes a sum over the padded frequency grid. For `b = 0` the
//! result is exactly `(h Σ_j w_j² ‖u(t_j)‖²_{H^s})^{1/2}` by discrete Parseval.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::fft;
use crate::torus::{NormConvention, TorusField};

/// `(4r(1-r))³` on `r = j/(M-1)`: a C² bump vanishing at both ends.
pub fn default_window(samples: usize) -> Vec<f64> {
    if samples < 2 {
        return vec![1.0; samples];
    }
    (0..samples)
        .map(|j| {
            let r = j as f64 / (samples - 1) as f64;
            (4.0 * r * (1.0 - r)).powi(3)
        })
        .collect()
}

/// `X^{s,b}_α` norm of the windowed trajectory `w(t_j) u(t_j)`.
pub fn bourgain_norm(times: &[f64], samples: &[TorusField], window: &[f64], s: f64, b: f64, alpha: f64) -> Result<f64> {
    let m = times.len();
    if m < 2 || samples.len() != m || window.len() != m {
        return Err(Error::invalid(format!(
            "need matching times, samples and window of length >= 2 (got {}, {}, {})",
            m,
            samples.len(),
            window.len()
        )));
    }
    let h = (times[m - 1] - times[0]) / (m - 1) as f64;
    if !(h > 0.0) || times.windows(2).any(|w| ((w[1] - w[0]) - h).abs() > 1e-9 * h) {
        return Err(Error::invalid("time grid must be uniform and increasing"));
    }
    let km = samples[0].max_mode();
    if samples.iter().any(|u| u.max_mode() != km) {
        return Err(Error::invalid("samples must share one band limit"));
    }

    let p = fft::smooth_size(4 * m);
    let freq = |idx: usize| {
        let signed = if idx <= p / 2 {
            idx as f64
        } else {
            idx as f64 - p as f64
        };
        2.0 * std::f64::consts::PI * signed / (p as f64 * h)
    };
    let tau_weight: Vec<f64> = (0..p).map(|i| (1.0 + freq(i).powi(2)).powf(b)).collect();

    let mut total = 0.0;
    let mut buf = vec![Complex64::new(0.0, 0.0); p];
    for k in -(km as i64)..=(km as i64) {
        let disp = (k.unsigned_abs() as f64).powf(alpha);
        buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        for j in 0..m {
            buf[j] = window[j] * Complex64::from_polar(1.0, disp * times[j]) * samples[j].coeff(k);
        }
        fft::forward(&mut buf);
        let mode: f64 = buf.iter().zip(&tau_weight).map(|(z, w)| w * z.norm_sqr()).sum();
        total += NormConvention::weight(k, s) * mode;
    }
    Ok((total * h / p as f64).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{evolve, linear_propagate, EvolutionSpec, Sampling, State};
    use crate::initial::random_field;
    use approx::assert_relative_eq;

    fn free_run(u0: &TorusField, alpha: f64, m: usize, t_end: f64) -> (Vec<f64>, Vec<TorusField>) {
        let times: Vec<f64> = (0..m).map(|j| t_end * j as f64 / (m - 1) as f64).collect();
        let samples = times.iter().map(|&t| linear_propagate(u0, t, alpha)).collect();
        (times, samples)
    }

    #[test]
    fn b_zero_is_space_time_l2() {
        let u0 = random_field(8, 1.0, 1.0, 3);
        let (times, samples) = free_run(&u0, 1.5, 200, 4.0);
        let w = default_window(200);
        let h = times[1] - times[0];
        let expect = (h * samples
            .iter()
            .zip(&w)
            .map(|(u, w)| w * w * u.sobolev_norm(1.0).powi(2))
            .sum::<f64>())
        .sqrt();
        assert_relative_eq!(
            bourgain_norm(&times, &samples, &w, 1.0, 0.0, 1.5).unwrap(),
            expect,
            max_relative = 1e-13
        );
    }

    #[test]
    fn free_solutions_sit_on_the_dispersion_surface() {
        // For a free solution the b-weight only sees the window spectrum, so
        // the ratio of the b = ½ and b = 0 norms is the same for any data.
        let (m, t_end) = (400, 20.0);
        let w = default_window(m);
        let ratio = |seed| {
            let u0 = random_field(10, 1.0, 1.0, seed);
            let (times, samples) = free_run(&u0, 1.5, m, t_end);
            bourgain_norm(&times, &samples, &w, 0.5, 0.5, 1.5).unwrap()
                / bourgain_norm(&times, &samples, &w, 0.5, 0.0, 1.5).unwrap()
        };
        let (a, b) = (ratio(1), ratio(2));
        assert_relative_eq!(a, b, max_relative = 1e-10);
        assert!(a > 1.0 && a < 1.2, "{a}");
    }

    #[test]
    fn nonlinear_trajectory_is_refinement_stable() {
        let u0 = State::Scalar(random_field(16, 2.0, 1.0, 7));
        let spec = EvolutionSpec::fractional_nls(1.5).unwrap();
        let norm = |every: usize| {
            let rec = evolve(
                &u0,
                &spec,
                4.0,
                1e-3,
                every,
                &Sampling {
                    keep_states: true,
                    ..Sampling::default()
                },
            )
            .unwrap();
            let samples: Vec<TorusField> = rec.states().iter().map(|s| s.as_scalar().unwrap().clone()).collect();
            bourgain_norm(&rec.times(), &samples, &default_window(samples.len()), 0.5, 0.5, 1.5).unwrap()
        };
        let (coarse, fine) = (norm(20), norm(10));
        assert!((coarse - fine).abs() < 1e-3 * fine, "{coarse} vs {fine}");
    }

    #[test]
    fn rejects_non_uniform_grid() {
        let u = TorusField::zeros(2);
        let samples = vec![u.clone(), u.clone(), u];
        assert!(bourgain_norm(&[0.0, 1.0, 3.0], &samples, &[1.0; 3], 0.0, 0.0, 1.0).is_err());
        assert!(bourgain_norm(&[0.0, 1.0], &samples[..2], &[1.0; 3], 0.0, 0.0, 1.0).is_err());
    }
}
