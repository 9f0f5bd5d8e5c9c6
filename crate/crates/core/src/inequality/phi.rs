use std::f64::consts::FRAC_PI_2;

/// `φ(x) = (|x|^α + |1-x|^α - 1) / (|x|^{α/2} |1-x|^{α/2})` with `φ(0) = φ(1) = 0` and `φ(±∞) = 2`.
///
/// Evaluated through `φ(x) = φ(1-x)` on `x <= ½`, using `ln_1p`/`expm1` near
/// the origin and a ratio form for `|x| > 1` so that no branch cancels.
pub fn phi_symbol(x: f64, alpha: f64) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_infinite() {
        return 2.0;
    }
    let x = if x > 0.5 { 1.0 - x } else { x };
    if x == 0.0 {
        return 0.0;
    }
    let a = x.abs();
    if x > 0.0 {
        // 0 < x <= ½, partner 1 - x.
        let num = a.powf(alpha) + (alpha * (-a).ln_1p()).exp_m1();
        num / (a.powf(alpha / 2.0) * (1.0 - a).powf(alpha / 2.0))
    } else if a <= 1.0 {
        // Partner 1 + |x|.
        let num = a.powf(alpha) + (alpha * a.ln_1p()).exp_m1();
        num / (a.powf(alpha / 2.0) * (1.0 + a).powf(alpha / 2.0))
    } else {
        let la = a.ln();
        let lb = a.ln_1p();
        let h = alpha / 2.0;
        (h * (la - lb)).exp() + (h * (lb - la)).exp() - (-h * (la + lb)).exp()
    }
}

/// Grid maximum of `|φ|` over `x = tan θ`, `θ` uniform on `(-π/2, π/2)`, plus the points 0, ½, 1.
pub fn phi_grid_max(alpha: f64, points: usize) -> f64 {
    let mut best = [0.0, 0.5, 1.0]
        .iter()
        .map(|&x| phi_symbol(x, alpha).abs())
        .fold(0.0, f64::max);
    for i in 1..points {
        let theta = -FRAC_PI_2 + std::f64::consts::PI * i as f64 / points as f64;
        best = best.max(phi_symbol(theta.tan(), alpha).abs());
    }
    best
}

/// `sup |φ|` estimated from a compactified grid of 2²⁰ points and the limits at `±∞`.
pub fn phi_supremum(alpha: f64) -> f64 {
    phi_grid_max(alpha, 1 << 20).max(phi_symbol(f64::INFINITY, alpha).abs())
}

/// Largest `|(|l|^α + |k-l|^α - |k|^α) - φ(l/k)|l|^{α/2}|k-l|^{α/2}|`
/// over `0 < |k| <= max`, `|l| <= max`, relative to `|l|^α + |k-l|^α + |k|^α`.
pub fn coefficient_identity_defect(alpha: f64, max: i64) -> f64 {
    let p = |m: i64| (m.unsigned_abs() as f64).powf(alpha);
    let mut worst: f64 = 0.0;
    for k in -max..=max {
        if k == 0 {
            continue;
        }
        for l in -max..=max {
            let lhs = p(l) + p(k - l) - p(k);
            let rhs = phi_symbol(l as f64 / k as f64, alpha) * p(l).sqrt() * p(k - l).sqrt();
            let scale = p(l) + p(k - l) + p(k);
            worst = worst.max((lhs - rhs).abs() / scale);
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    // Oracle: the defining quotient, evaluated naively where it is well conditioned.
    fn naive(x: f64, alpha: f64) -> f64 {
        let a = x.abs();
        let b = (1.0 - x).abs();
        (a.powf(alpha) + b.powf(alpha) - 1.0) / (a.powf(alpha / 2.0) * b.powf(alpha / 2.0))
    }

    #[test]
    fn special_values() {
        for alpha in [0.5, 1.0, 1.5, 2.0] {
            assert_eq!(phi_symbol(0.0, alpha), 0.0);
            assert_eq!(phi_symbol(1.0, alpha), 0.0);
            assert_eq!(phi_symbol(f64::INFINITY, alpha), 2.0);
            assert_eq!(phi_symbol(f64::NEG_INFINITY, alpha), 2.0);
        }
        assert!(phi_symbol(0.5, 1.0).abs() < 1e-16);
        // α = 2: φ = -2 on (0, 1) and 2 outside.
        assert!((phi_symbol(0.3, 2.0) + 2.0).abs() < 1e-14);
        assert!((phi_symbol(-7.0, 2.0) - 2.0).abs() < 1e-14);
    }

    #[test]
    fn matches_naive_form_away_from_singular_points() {
        for alpha in [0.7, 1.0, 1.3, 2.0] {
            for x in [-5.0, -1.5, -0.4, 0.2, 0.45, 0.8, 1.7, 9.0] {
                assert!((phi_symbol(x, alpha) - naive(x, alpha)).abs() < 1e-13, "{alpha} {x}");
            }
        }
    }

    #[test]
    fn large_arguments_approach_two() {
        assert!((phi_symbol(1e12, 1.5) - 2.0).abs() < 1e-6);
        assert!((phi_symbol(-1e300, 1.0) - 2.0).abs() < 1e-12);
    }

    #[test]
    fn supremum_is_two() {
        for alpha in [1.0, 1.5, 2.0] {
            assert!((phi_supremum(alpha) - 2.0).abs() < 1e-6);
        }
    }

    #[test]
    fn identity_small_range() {
        assert!(coefficient_identity_defect(1.5, 40) < 1e-10);
    }

    proptest! {
        #[test]
        fn symmetric(x in -1e6f64..1e6, alpha in 0.1f64..2.0) {
            let a = phi_symbol(x, alpha);
            let b = phi_symbol(1.0 - x, alpha);
            prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
        }

        #[test]
        fn bounded_by_two(x in -1e8f64..1e8, alpha in 1.0f64..2.0) {
            prop_assert!(phi_symbol(x, alpha).abs() <= 2.0 + 1e-9);
        }
    }
}
