//! Conversions between collar parameters and the classical per-curve
//! coordinates: Fenchel-Nielsen `(2l, 2t)` for hyperbolic collars and
//! Dehn-Thurston `(2l, 2t)` for measured foliations.
//!
//! Coordinates are stored doubled, as `(two_ell, two_tau)`; the formulas
//! work with the halves `l` and `t`.
//!
//! Twist orientation: the formulas give `b = arccosh(cosh t coth l)` and
//! `c = arccosh(cosh(l - t) coth l)`, so a positive twist shortens `c`.
//! The mirrored convention swaps `b` and `c`, which negates `y`.

use crate::error::{Error, Result};
use crate::geometry::{invert_pi_delta, invert_pi_h, project_pi, CollarParams, TriangleLengths};
use crate::special::{acosh_cosh_coth, acosh_from_ln, cosh_m1, ln_cosh, ln_coth};
use crate::tolerance::Tolerance;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FenchelNielsen {
    pub two_ell: f64,
    pub two_tau: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DehnThurston {
    pub two_ell: f64,
    pub two_tau: f64,
}

impl FenchelNielsen {
    pub fn new(two_ell: f64, two_tau: f64) -> Self {
        FenchelNielsen { two_ell, two_tau }
    }

    /// Built from the half-length and half-twist.
    pub fn from_halves(ell: f64, tau: f64) -> Self {
        FenchelNielsen::new(2.0 * ell, 2.0 * tau)
    }

    pub fn ell(&self) -> f64 {
        0.5 * self.two_ell
    }

    pub fn tau(&self) -> f64 {
        0.5 * self.two_tau
    }
}

impl DehnThurston {
    pub fn new(two_ell: f64, two_tau: f64) -> Self {
        DehnThurston { two_ell, two_tau }
    }

    pub fn from_halves(ell: f64, tau: f64) -> Self {
        DehnThurston::new(2.0 * ell, 2.0 * tau)
    }

    pub fn ell(&self) -> f64 {
        0.5 * self.two_ell
    }

    pub fn tau(&self) -> f64 {
        0.5 * self.two_tau
    }
}

/// `a = l`, `b = arccosh(cosh t coth l)`, `c = arccosh(cosh(l - t) coth l)`.
pub fn fn_to_triangle(coords: &FenchelNielsen) -> Result<TriangleLengths> {
    let (ell, tau) = (coords.ell(), coords.tau());
    if !ell.is_finite() || !tau.is_finite() {
        return Err(Error::NonFinite);
    }
    if ell <= 0.0 {
        return Err(Error::NonPositiveLength(ell));
    }
    Ok(TriangleLengths::new(
        ell,
        acosh_cosh_coth(tau, ell),
        acosh_cosh_coth(ell - tau, ell),
    ))
}

pub fn fn_to_cp(coords: &FenchelNielsen) -> Result<CollarParams> {
    fn_to_triangle(coords).map(|t| project_pi(&t))
}

/// `a = l`, `b = |t|`, `c = |l - t|`.
pub fn dt_to_triangle(coords: &DehnThurston) -> Result<TriangleLengths> {
    let (ell, tau) = (coords.ell(), coords.tau());
    if !ell.is_finite() || !tau.is_finite() {
        return Err(Error::NonFinite);
    }
    if ell < 0.0 {
        return Err(Error::NegativeLength(ell));
    }
    Ok(TriangleLengths::new(ell, tau.abs(), (ell - tau).abs()))
}

pub fn dt_to_cp(coords: &DehnThurston) -> Result<CollarParams> {
    dt_to_triangle(coords).map(|t| project_pi(&t))
}

/// Inverse of [`fn_to_cp`].
///
/// `l = a` and `|t| = arccosh(cosh b tanh l)`. Since `cosh` is even, the
/// sign of `t` comes from whichever choice reproduces `c`; at `t = 0` both
/// agree and `+0` is returned.
pub fn cp_to_fn(p: &CollarParams, tol: &Tolerance) -> Result<FenchelNielsen> {
    let t = invert_pi_h(p, tol)?;
    let ell = t.a;
    let tau_abs = twist_magnitude(t.b, ell);
    let c_plus = acosh_cosh_coth(ell - tau_abs, ell);
    let c_minus = acosh_cosh_coth(ell + tau_abs, ell);
    let slack = 4.0 * f64::EPSILON * (1.0 + t.c);
    let tau = if (c_minus - t.c).abs() + slack < (c_plus - t.c).abs() {
        -tau_abs
    } else {
        tau_abs
    };
    Ok(FenchelNielsen::from_halves(ell, tau))
}

/// `arccosh(cosh b tanh l)`, clamped at 0 where rounding dips below 1.
fn twist_magnitude(b: f64, ell: f64) -> f64 {
    let ln_arg = ln_cosh(b) - ln_coth(ell);
    if ln_arg > 1.0 {
        return acosh_from_ln(ln_arg);
    }
    // cosh b tanh l - 1 = (cosh b - 1) tanh l - (1 - tanh l)
    let th = ell.tanh();
    let one_minus_th = 2.0 / ((2.0 * ell).exp() + 1.0);
    let u = cosh_m1(b) * th - one_minus_th;
    crate::special::acosh_1p(u.max(0.0))
}

/// Inverse of [`dt_to_cp`].
///
/// `l = a`, `t = ±b` with the sign for which `|l - t| = c`; ties go to
/// `t >= 0`. At `l = 0` the twist sign is not recoverable and `|t|` is
/// returned.
pub fn cp_to_dt(p: &CollarParams) -> Result<DehnThurston> {
    if !p.is_finite() {
        return Err(Error::NonFinite);
    }
    let t = invert_pi_delta(p);
    let miss_plus = ((t.a - t.b).abs() - t.c).abs();
    let miss_minus = ((t.a + t.b) - t.c).abs();
    let slack = 4.0 * f64::EPSILON * (1.0 + t.sum());
    let tau = if miss_plus <= miss_minus || miss_plus <= slack {
        if miss_plus > slack {
            return Err(Error::Inconsistent(miss_plus));
        }
        t.b
    } else {
        if miss_minus > slack {
            return Err(Error::Inconsistent(miss_minus));
        }
        -t.b
    };
    Ok(DehnThurston::from_halves(t.a, tau))
}

/// Distance between the hyperbolic and foliation collar parameters of the
/// same `(2l, 2t)`; tends to 0 relative to `l` as `l` grows, since
/// `coth l -> 1`.
pub fn fn_dt_degeneration_gap(coords: &FenchelNielsen) -> Result<f64> {
    let h = fn_to_cp(coords)?;
    let f = dt_to_cp(&DehnThurston::new(coords.two_ell, coords.two_tau))?;
    Ok((h.x - f.x).hypot(h.y - f.y))
}
