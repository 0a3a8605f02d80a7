//! Slope limiters.

/// Smaller-magnitude argument when both share a sign, else 0.
pub fn minmod(a: f64, b: f64) -> f64 {
    if a * b > 0.0 {
        if a.abs() <= b.abs() {
            a
        } else {
            b
        }
    } else {
        0.0
    }
}

/// Larger-magnitude argument when both share a sign, else 0.
pub fn maxmod(a: f64, b: f64) -> f64 {
    if a * b > 0.0 {
        if a.abs() >= b.abs() {
            a
        } else {
            b
        }
    } else {
        0.0
    }
}

/// Three-argument minmod used by the monotonized central-difference limiter:
/// 0 unless all three arguments share a strict sign, else the smallest
/// magnitude among them with that sign.
pub fn mc_limit(centered: f64, twice_upwind: f64, twice_downwind: f64) -> f64 {
    let all_positive = centered > 0.0 && twice_upwind > 0.0 && twice_downwind > 0.0;
    let all_negative = centered < 0.0 && twice_upwind < 0.0 && twice_downwind < 0.0;
    if all_positive || all_negative {
        let m = centered
            .abs()
            .min(twice_upwind.abs())
            .min(twice_downwind.abs());
        if all_positive {
            m
        } else {
            -m
        }
    } else {
        0.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn reference_cases() {
        assert_eq!(minmod(2.0, 3.0), 2.0);
        assert_eq!(minmod(-1.0, 4.0), 0.0);
        assert_eq!(maxmod(2.0, 3.0), 3.0);
        assert_eq!(maxmod(-1.0, 4.0), 0.0);
        assert_eq!(mc_limit(1.0, 2.0, 3.0), 1.0);
        assert_eq!(mc_limit(1.0, -2.0, 3.0), 0.0);
        assert_eq!(mc_limit(-1.0, -2.0, -3.0), -1.0);
    }

    #[test]
    fn zero_arguments_kill_the_slope() {
        assert_eq!(minmod(0.0, 5.0), 0.0);
        assert_eq!(maxmod(0.0, -5.0), 0.0);
        assert_eq!(mc_limit(0.0, 1.0, 2.0), 0.0);
    }

    /// Exhaustive sign-case oracle for the three-argument minmod.
    fn mc_oracle(a: f64, b: f64, c: f64) -> f64 {
        let signs = [a.signum(), b.signum(), c.signum()];
        if signs.iter().any(|&s| s == 0.0) || signs[0] != signs[1] || signs[1] != signs[2] {
            return 0.0;
        }
        signs[0] * a.abs().min(b.abs()).min(c.abs())
    }

    proptest! {
        #[test]
        fn minmod_algebra(a in -1e3f64..1e3, b in -1e3f64..1e3) {
            prop_assert_eq!(minmod(a, a), a);
            prop_assert_eq!(minmod(a, -a), 0.0);
            prop_assert_eq!(maxmod(a, a), a);
            prop_assert!(minmod(a, b).abs() <= a.abs().min(b.abs()));
            prop_assert_eq!(minmod(a, b), minmod(b, a));
            prop_assert_eq!(maxmod(a, b), maxmod(b, a));
            // Negating both arguments negates the result exactly.
            prop_assert_eq!(minmod(-a, -b), -minmod(a, b));
            prop_assert_eq!(maxmod(-a, -b), -maxmod(a, b));
        }

        #[test]
        fn mc_limit_matches_sign_case_oracle(
            a in -1e3f64..1e3,
            b in -1e3f64..1e3,
            c in -1e3f64..1e3,
        ) {
            prop_assert_eq!(mc_limit(a, b, c), mc_oracle(a, b, c));
            // Symmetric under argument permutation.
            prop_assert_eq!(mc_limit(a, b, c), mc_limit(c, a, b));
            prop_assert_eq!(mc_limit(-a, -b, -c), -mc_limit(a, b, c));
        }
    }
}
