//! Overflow- and cancellation-aware hyperbolic helpers.
//!
//! The collar surface is used along rays whose components reach several
//! thousand, far past where `cosh` overflows, and near points where
//! `arccosh` is evaluated just above 1. Everything here works with
//! logarithms of `cosh`/`sinh` or with the small quantity `cosh x - 1`.

use std::f64::consts::LN_2;

/// `cosh(x) - 1` without cancellation.
pub fn cosh_m1(x: f64) -> f64 {
    let s = (0.5 * x).sinh();
    2.0 * s * s
}

/// `ln(cosh x)`, finite for every finite `x`.
pub fn ln_cosh(x: f64) -> f64 {
    let x = x.abs();
    if x < 1.0 {
        cosh_m1(x).ln_1p()
    } else {
        x - LN_2 + (-2.0 * x).exp().ln_1p()
    }
}

/// `ln(cosh x) - |x|`, the bounded part of [`ln_cosh`]; lies in `(-ln 2, 0]`.
pub fn ln_cosh_excess(x: f64) -> f64 {
    let x = x.abs();
    (-2.0 * x).exp().ln_1p() - LN_2
}

/// `ln(sinh x)` for `x > 0`.
pub fn ln_sinh(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x < 1.0 {
        x.sinh().ln()
    } else {
        x - LN_2 + (-(-2.0 * x).exp()).ln_1p()
    }
}

/// `coth(x) - 1` for `x > 0`.
pub fn coth_m1(x: f64) -> f64 {
    2.0 / (2.0 * x).exp_m1()
}

/// `ln(coth x)` for `x > 0`.
pub fn ln_coth(x: f64) -> f64 {
    coth_m1(x).ln_1p()
}

/// `arccosh(1 + u)` for `u >= 0`, accurate when `u` is tiny.
pub fn acosh_1p(u: f64) -> f64 {
    let u = u.max(0.0);
    if u > 1e150 {
        return acosh_from_ln(u.ln_1p());
    }
    (u + (u * (2.0 + u)).sqrt()).ln_1p()
}

/// `arccosh(X)` given `ln X` (with `X >= 1`); never forms `X` when it is large.
pub fn acosh_from_ln(ln_x: f64) -> f64 {
    let ln_x = ln_x.max(0.0);
    if ln_x > 1.0 {
        ln_x + (1.0 - (-2.0 * ln_x).exp()).sqrt().ln_1p()
    } else {
        acosh_1p(ln_x.exp_m1())
    }
}

/// `arccosh(cosh(x) * coth(l))` for `l > 0`, the shape of the
/// Fenchel-Nielsen triangle-length formulas.
pub fn acosh_cosh_coth(x: f64, l: f64) -> f64 {
    let ln_arg = ln_cosh(x) + ln_coth(l);
    if ln_arg > 1.0 {
        acosh_from_ln(ln_arg)
    } else {
        let cm1 = cosh_m1(x);
        let km1 = coth_m1(l);
        // cosh x coth l - 1 = (cosh x - 1) coth l + (coth l - 1)
        acosh_1p(cm1 * (1.0 + km1) + km1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn ln_cosh_matches_direct_and_survives_overflow() {
        for &x in &[0.0, 0.3, 0.999, 1.0, 2.5, 20.0, -7.0] {
            let direct = f64::cosh(x).ln();
            assert_relative_eq!(ln_cosh(x), direct, max_relative = 1e-14, epsilon = 1e-300);
        }
        assert_relative_eq!(ln_cosh(5000.0), 5000.0 - LN_2, max_relative = 1e-15);
        assert_relative_eq!(ln_cosh(1e-8), 0.5e-16, max_relative = 1e-8);
    }

    #[test]
    fn ln_sinh_and_coth() {
        for &x in &[1e-6, 0.5, 1.0, 3.0, 30.0] {
            assert_relative_eq!(ln_sinh(x), f64::sinh(x).ln(), max_relative = 1e-13);
            assert_relative_eq!(ln_coth(x), (1.0 / f64::tanh(x)).ln(), max_relative = 1e-12);
        }
        assert_relative_eq!(ln_sinh(900.0), 900.0 - LN_2, max_relative = 1e-15);
    }

    #[test]
    fn acosh_helpers() {
        assert_eq!(acosh_1p(0.0), 0.0);
        assert_relative_eq!(acosh_1p(0.5), 1.5f64.acosh(), max_relative = 1e-15);
        // arccosh(1 + u) ~ sqrt(2u) for tiny u
        assert_relative_eq!(acosh_1p(1e-20), (2e-20f64).sqrt(), max_relative = 1e-9);
        assert_relative_eq!(
            acosh_from_ln(3.0f64.ln()),
            3.0f64.acosh(),
            max_relative = 1e-15
        );
        assert_relative_eq!(acosh_from_ln(1000.0), 1000.0 + LN_2, max_relative = 1e-15);
        assert_relative_eq!(
            acosh_from_ln(0.01),
            0.01f64.exp().acosh(),
            max_relative = 1e-12
        );
    }

    #[test]
    fn acosh_cosh_coth_regimes() {
        let direct = |x: f64, l: f64| (x.cosh() / l.tanh()).acosh();
        for &(x, l) in &[(0.0, 1.0), (0.3, 0.2), (2.0, 1.5), (-1.0, 4.0), (0.0, 0.01)] {
            assert_relative_eq!(acosh_cosh_coth(x, l), direct(x, l), max_relative = 1e-12);
        }
        // far past overflow of cosh
        assert_relative_eq!(acosh_cosh_coth(1000.0, 500.0), 1000.0, max_relative = 1e-15);
    }
}
