//! Two-point face averages.
//!
//! The logarithmic mean is evaluated in three regimes of
//! `z = (b - a) / (b + a)`:
//!
//! * `z^2 < 1e-4`: `(a + b) / 2 / F` with `F = 1 + z^2/3 + z^4/5 + z^6/7`,
//!   the truncated expansion of `atanh(z) / z`;
//! * `|z| <= 1/3` (ratio within a factor two): `mean * z / atanh(z)`, where
//!   `b - a` is exact;
//! * otherwise the direct quotient `(b - a) / (ln b - ln a)`.
//!
//! Every branch is symmetric in its arguments bit for bit.

use crate::error::{Error, Result};

/// Switch to the series when `z^2` falls below this.
pub const LOG_MEAN_SERIES_THRESHOLD: f64 = 1e-4;

/// Switch to the series for the `(ā - â) / Δa` ratio when `|z|` falls below this.
pub const LOG_MEAN_GAP_SERIES_THRESHOLD: f64 = 1e-2;

/// The two nodal values adjacent to a face.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FacePair {
    pub left: f64,
    pub right: f64,
}

impl FacePair {
    #[inline]
    pub fn new(left: f64, right: f64) -> Self {
        Self { left, right }
    }

    #[inline]
    pub fn arith(self) -> f64 {
        arith_mean(self.left, self.right)
    }

    #[inline]
    pub fn jump(self) -> f64 {
        self.right - self.left
    }

    /// Log mean; callers guarantee positivity.
    #[inline]
    pub fn log(self) -> f64 {
        log_mean_unchecked(self.left, self.right)
    }

    #[inline]
    pub fn geo(self) -> f64 {
        (self.left * self.right).sqrt()
    }
}

#[inline]
pub fn arith_mean(a: f64, b: f64) -> f64 {
    0.5 * (a + b)
}

/// Logarithmic mean `(b - a) / (ln b - ln a)`, equal to `a` when `a == b`.
pub fn log_mean(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0 && b > 0.0) {
        return Err(Error::Domain(format!(
            "log mean needs positive arguments, got ({a}, {b})"
        )));
    }
    Ok(log_mean_unchecked(a, b))
}

#[inline]
pub(crate) fn log_mean_unchecked(a: f64, b: f64) -> f64 {
    if a == b {
        return a;
    }
    let sum = a + b;
    let z = (b - a) / sum;
    let u = z * z;
    if u < LOG_MEAN_SERIES_THRESHOLD {
        let f = 1.0 + u * (1.0 / 3.0 + u * (1.0 / 5.0 + u * (1.0 / 7.0)));
        0.5 * sum / f
    } else if u <= 1.0 / 9.0 {
        let za = z.abs();
        0.5 * sum * za / za.atanh()
    } else {
        (b - a) / (b.ln() - a.ln())
    }
}

/// Geometric mean `sqrt(a b)`; zero is allowed.
pub fn geo_mean(a: f64, b: f64) -> Result<f64> {
    if a < 0.0 || b < 0.0 || a.is_nan() || b.is_nan() {
        return Err(Error::Domain(format!(
            "geometric mean needs non-negative arguments, got ({a}, {b})"
        )));
    }
    Ok((a * b).sqrt())
}

/// `|mean(ab) - (ā b̄ + Δa Δb / 4)|` for two face pairs.
pub fn split_average_residual(a: FacePair, b: FacePair) -> f64 {
    let lhs = arith_mean(a.left * b.left, a.right * b.right);
    let rhs = a.arith() * b.arith() + 0.25 * a.jump() * b.jump();
    (lhs - rhs).abs()
}

/// `|(ā - â) / Δa|` for positive `a`, with the limit `0` at `Δa = 0`.
///
/// Near equal arguments this is evaluated as
/// `|z| (1/3 + z^2/5 + z^4/7 + z^6/9) / (2 F)` with `z = Δa / (2ā)` and
/// `F = 1 + z^2/3 + z^4/5 + z^6/7 + z^8/9`, which avoids the cancellation in
/// `ā - â`. The value never exceeds `1/2`.
pub fn log_mean_gap_ratio(a: f64, b: f64) -> f64 {
    if a == b {
        return 0.0;
    }
    let z = (b - a) / (a + b);
    let za = z.abs();
    if za < LOG_MEAN_GAP_SERIES_THRESHOLD {
        let u = z * z;
        let num = 1.0 / 3.0 + u * (1.0 / 5.0 + u * (1.0 / 7.0 + u * (1.0 / 9.0)));
        let f = 1.0 + u * (1.0 / 3.0 + u * (1.0 / 5.0 + u * (1.0 / 7.0 + u * (1.0 / 9.0))));
        0.5 * za * num / f
    } else {
        let mean = arith_mean(a, b);
        ((mean - log_mean_unchecked(a, b)) / (b - a)).abs()
    }
}

/// `(√b − √a) / (2 (√b + √a))`, the closed form of `(ā − ǎ) / Δa`.
#[inline]
pub fn geo_gap_ratio(a: f64, b: f64) -> f64 {
    let (sa, sb) = (a.sqrt(), b.sqrt());
    (sb - sa) / (2.0 * (sb + sa))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    // Reference values from tests/oracles/means_reference.py (50-digit mpmath):
    // log_mean(a, b) = (b - a) / (ln b - ln a).
    const LOG_MEAN_REFERENCE: &[(f64, f64, f64)] = &[
        (1.0, 1.000000000001, 1.0000000000005),
        (1.0, 1.0000001, 1.0000000499999993),
        (1.0, 1.001, 1.0004999167083068),
        (1.0, 1.019, 1.0094701990650725),
        (1.0, 1.021, 1.0104636308182358),
        (1.0, 1.5, 1.2331517311882159),
        (1.0, 1.99, 1.4386719462602615),
        (1.0, 2.01, 1.4467121718339429),
        (1.0, 10.0, 3.9086503371292665),
        (1e-3, 1e3, 72.38234126812831),
        (3.7, 3.7000037, 3.700001849999692),
    ];

    // (ā - â) / Δa at the same precision.
    const GAP_REFERENCE: &[(f64, f64, f64)] = &[
        (1.0, 1.000000000001, 8.334074171515342e-14),
        (1.0, 1.0000001, 8.333332921532252e-09),
        (1.0, 1.001, 8.329169303681065e-05),
        (1.0, 1.019, 0.0015684702593421426),
        (1.0, 1.021, 0.0017318657982996358),
        (1.0, 1.5, 0.033696537623568314),
        (1.0, 1.99, 0.05689702397953384),
        (1.0, 2.01, 0.057710720956492066),
        (1.0, 10.0, 0.1768166292078593),
        (1e-3, 1e3, 0.427618586350458),
        (3.7, 3.7000037, 8.33332916603376e-08),
    ];

    #[test]
    fn log_mean_examples() {
        assert_eq!(log_mean(2.0, 2.0).unwrap(), 2.0);
        let e = std::f64::consts::E;
        assert!((log_mean(1.0, e).unwrap() - 1.718281828459045).abs() < 4e-16);
        let near = log_mean(1.0, 1.0 + 1e-12).unwrap();
        let am = arith_mean(1.0, 1.0 + 1e-12);
        assert!((near - am).abs() / am <= 1e-15);
        assert!(log_mean(0.0, 1.0).is_err());
        assert!(log_mean(-1.0, 1.0).is_err());
    }

    #[test]
    fn log_mean_matches_high_precision_reference() {
        for &(a, b, want) in LOG_MEAN_REFERENCE {
            let got = log_mean(a, b).unwrap();
            let rel = ((got - want) / want).abs();
            assert!(rel <= 1e-15, "log_mean({a}, {b}) = {got}, want {want}, rel {rel:e}");
        }
    }

    #[test]
    fn gap_ratio_matches_high_precision_reference() {
        for &(a, b, want) in GAP_REFERENCE {
            let got = log_mean_gap_ratio(a, b);
            let rel = ((got - want) / want).abs();
            // the direct branch loses digits to the cancellation in ā - â
            let z = (b - a) / (b + a);
            let tol = if z.abs() < LOG_MEAN_GAP_SERIES_THRESHOLD {
                1e-14
            } else {
                1e-10
            };
            assert!(rel <= tol, "gap({a}, {b}) = {got}, want {want}, rel {rel:e}");
        }
        assert_eq!(log_mean_gap_ratio(4.0, 4.0), 0.0);
    }

    #[test]
    fn log_mean_is_symmetric_bitwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for _ in 0..100_000 {
            let a = 10f64.powf(rng.gen_range(-3.0..3.0));
            let b = a * 10f64.powf(rng.gen_range(-3.0..3.0) * rng.gen::<f64>().powi(6));
            assert_eq!(log_mean(a, b).unwrap().to_bits(), log_mean(b, a).unwrap().to_bits());
            assert_eq!(log_mean_gap_ratio(a, b).to_bits(), log_mean_gap_ratio(b, a).to_bits());
        }
    }

    #[test]
    fn arith_and_geo_examples() {
        assert_eq!(arith_mean(1.0, 1.0), 1.0);
        assert_eq!(arith_mean(1.0, 3.0), 2.0);
        assert_eq!(arith_mean(-2.0, 2.0), 0.0);
        assert_eq!(geo_mean(4.0, 9.0).unwrap(), 6.0);
        assert_eq!(geo_mean(7.25, 7.25).unwrap(), 7.25);
        assert_eq!(geo_mean(0.0, 5.0).unwrap(), 0.0);
        assert!(geo_mean(-1.0, 5.0).is_err());
    }

    #[test]
    fn split_average_identity() {
        assert_eq!(
            split_average_residual(FacePair::new(1.0, 3.0), FacePair::new(2.0, 4.0)),
            0.0
        );
        assert_eq!(
            split_average_residual(FacePair::new(1.5, 1.5), FacePair::new(-2.0, -2.0)),
            0.0
        );
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..100_000 {
            let a = FacePair::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
            let b = FacePair::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
            let scale = a.left.abs().max(a.right.abs()).max(1.0) * b.left.abs().max(b.right.abs()).max(1.0);
            assert!(split_average_residual(a, b) <= 2.0 * f64::EPSILON * scale);
        }
    }

    #[test]
    fn geo_gap_closed_form() {
        // (ā − ǎ)/Δa computed directly loses ~2 eps/z^2 to cancellation, so the
        // comparison is restricted to ratios above e^0.5 (z > 0.24).
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut checked = 0;
        while checked < 100_000 {
            let a = 10f64.powf(rng.gen_range(-3.0..3.0));
            let b = 10f64.powf(rng.gen_range(-3.0..3.0));
            if (b / a).ln().abs() < 0.5 {
                continue;
            }
            let direct = (arith_mean(a, b) - (a * b).sqrt()) / (b - a);
            let closed = geo_gap_ratio(a, b);
            assert!(((direct - closed) / closed).abs() <= 1e-13, "{a} {b}");
            checked += 1;
        }
    }
}
