//! Safeguarded Newton iteration on a sign-changing bracket.

use crate::error::{Error, Result};
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, Copy)]
pub(crate) struct Root {
    pub x: f64,
    pub f: f64,
    pub iterations: usize,
}

/// Finds a zero of `f` in `[lo, hi]` where `f(lo)` and `f(hi)` have opposite
/// signs. `f` returns the value and the derivative.
///
/// Newton steps are taken while they stay inside the bracket and shrink it
/// fast enough; otherwise the bracket is bisected. When the bracket spans
/// many orders of magnitude above zero the bisection is geometric, so roots
/// as small as 1e-300 are reached in a few dozen steps.
///
/// Stops when a step is below `rel_tol * |x| + abs_floor`.
pub(crate) fn find_root<F>(
    mut f: F,
    mut lo: f64,
    mut hi: f64,
    f_lo: f64,
    abs_floor: f64,
    tol: &Tolerance,
) -> Result<Root>
where
    F: FnMut(f64) -> (f64, f64),
{
    debug_assert!(lo < hi);
    let lo_positive = f_lo > 0.0;
    let mut x = split(lo, hi);
    let mut last_step = hi - lo;

    for iteration in 1..=tol.max_iter {
        let (fx, dfx) = f(x);
        if !fx.is_finite() {
            return Err(Error::NoConvergence {
                iterations: iteration,
                last: x,
            });
        }
        if fx == 0.0 {
            return Ok(Root {
                x,
                f: fx,
                iterations: iteration,
            });
        }
        if (fx > 0.0) == lo_positive {
            lo = x;
        } else {
            hi = x;
        }

        let newton = x - fx / dfx;
        let fast = newton.is_finite()
            && newton > lo
            && newton < hi
            && (newton - x).abs() <= 0.5 * last_step;
        let next = if fast { newton } else { split(lo, hi) };
        let step = (next - x).abs();
        last_step = if fast { step } else { hi - lo };

        let scale = tol.rel_tol * next.abs() + abs_floor;
        if step <= scale || hi - lo <= scale {
            let (fn_, _) = f(next);
            return Ok(Root {
                x: next,
                f: fn_,
                iterations: iteration,
            });
        }
        x = next;
    }
    Err(Error::NoConvergence {
        iterations: tol.max_iter,
        last: x,
    })
}

fn split(lo: f64, hi: f64) -> f64 {
    if lo > 0.0 && hi > 16.0 * lo {
        (lo * hi).sqrt()
    } else {
        0.5 * (lo + hi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_sqrt_two() {
        let r = find_root(
            |x| (x * x - 2.0, 2.0 * x),
            0.0,
            2.0,
            -2.0,
            0.0,
            &Tolerance::default(),
        )
        .unwrap();
        assert!((r.x - 2f64.sqrt()).abs() < 1e-14);
    }

    #[test]
    fn reaches_tiny_roots_geometrically() {
        // K - x^2 with a root at 1e-150; plain bisection would need ~500 steps
        let k = 1e-300;
        let r = find_root(
            |x| (k - x * x, -2.0 * x),
            1e-300,
            1.0,
            k,
            0.0,
            &Tolerance::default(),
        )
        .unwrap();
        assert!((r.x / 1e-150 - 1.0).abs() < 1e-10, "{}", r.x);
        assert!(r.iterations < 100);
    }

    #[test]
    fn flat_derivative_falls_back_to_bisection() {
        let r = find_root(
            |x| ((x - 0.3).powi(3), 0.0),
            0.0,
            1.0,
            -0.027,
            1e-15,
            &Tolerance::default(),
        )
        .unwrap();
        assert!((r.x - 0.3).abs() < 1e-10);
    }

    #[test]
    fn reports_no_convergence() {
        let tol = Tolerance::new(1e-12, 1e-12, 3).unwrap();
        let err = find_root(|x| (x - 0.123, 0.0), 0.0, 1.0, -0.123, 0.0, &tol).unwrap_err();
        assert!(matches!(err, Error::NoConvergence { iterations: 3, .. }));
    }
}
