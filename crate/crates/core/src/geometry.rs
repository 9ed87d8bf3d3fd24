//! Triangle lengths, the collar surface `H`, the triangle-equality cone
//! `Delta`, and the projection `pi(a, b, c) = (4a - 2b - 2c, 2b - 2c)`.
//!
//! `H` is the set of positive triples with
//! `cosh^2 a + cosh^2 b + cosh^2 c = 2 cosh a cosh b cosh c`. `Delta` is the
//! boundary of the cone over the triangle with vertices `(1,1,0)`,
//! `(1,0,1)`, `(0,1,1)`. Both are graphs over the plane under `pi`: the
//! kernel of `pi` is spanned by `(1,1,1)`, and each line parallel to it
//! meets `Delta` once and `H` once, with the `H` point strictly further out.
//!
//! Points of `H` far from the origin are resolved by walking along that
//! line from the `Delta` point, with the residual evaluated in log scale.

use crate::error::{Error, Result};
use crate::solve::find_root;
use crate::special::{ln_cosh, ln_cosh_excess};
use crate::tolerance::Tolerance;

/// Side lengths `(a, b, c)` of the reference triangle.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TriangleLengths {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

/// Collar parameters `(x, y)`, the image of triangle lengths under `pi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollarParams {
    pub x: f64,
    pub y: f64,
}

impl TriangleLengths {
    pub fn new(a: f64, b: f64, c: f64) -> Self {
        TriangleLengths { a, b, c }
    }

    /// The point of `H` with `a = b = c = arccosh(3/2)`.
    pub fn symmetric() -> Self {
        let s = symmetric_length();
        TriangleLengths::new(s, s, s)
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.a, self.b, self.c]
    }

    pub fn from_array(v: [f64; 3]) -> Self {
        TriangleLengths::new(v[0], v[1], v[2])
    }

    pub fn sum(&self) -> f64 {
        self.a + self.b + self.c
    }

    pub fn max(&self) -> f64 {
        self.a.max(self.b).max(self.c)
    }

    pub fn is_finite(&self) -> bool {
        self.a.is_finite() && self.b.is_finite() && self.c.is_finite()
    }

    pub fn scaled(&self, s: f64) -> Self {
        TriangleLengths::new(s * self.a, s * self.b, s * self.c)
    }

    /// Membership in `H` up to `tol`, measured by [`relative_collar_residual`].
    pub fn in_h(&self, tol: f64) -> bool {
        self.a > 0.0 && self.b > 0.0 && self.c > 0.0 && relative_collar_residual(self) <= tol
    }

    /// Membership in `Delta` up to `tol` (absolute, relative to `1 + a + b + c`).
    pub fn in_delta(&self, tol: f64) -> bool {
        self.a >= 0.0
            && self.b >= 0.0
            && self.c >= 0.0
            && delta_defect(self) <= tol * (1.0 + self.sum())
    }
}

impl CollarParams {
    pub fn new(x: f64, y: f64) -> Self {
        CollarParams { x, y }
    }

    pub fn norm(&self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn scaled(&self, s: f64) -> Self {
        CollarParams::new(s * self.x, s * self.y)
    }

    pub fn is_finite(&self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }
}

/// The `±` attached to a collar metric or a linear foliation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// `arccosh(3/2)`, the common value of `a = b = c` on `H`.
pub fn symmetric_length() -> f64 {
    1.5f64.acosh()
}

/// Smallest value of `a + b + c` on `H`, attained at the symmetric point.
pub fn min_section_level() -> f64 {
    3.0 * symmetric_length()
}

/// Components above this are evaluated in log scale.
const LOG_SCALE_THRESHOLD: f64 = 30.0;

/// `cosh^2 a + cosh^2 b + cosh^2 c - 2 cosh a cosh b cosh c`.
///
/// Components above 30 go through the normalized log-scale residual; if the
/// result itself does not fit in a double, `DomainTooLarge` is returned.
pub fn collar_residual(t: &TriangleLengths) -> Result<f64> {
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    let big = t.a.abs().max(t.b.abs()).max(t.c.abs());
    if big <= LOG_SCALE_THRESHOLD {
        let (ca, cb, cc) = (t.a.cosh(), t.b.cosh(), t.c.cosh());
        return Ok(ca * ca + cb * cb + cc * cc - 2.0 * ca * cb * cc);
    }
    let g = normalized_collar_residual(t);
    let ln_scale = ln_cosh(t.a) + ln_cosh(t.b) + ln_cosh(t.c);
    let r = g * ln_scale.exp();
    if r.is_finite() {
        Ok(r)
    } else if g == 0.0 {
        Ok(0.0)
    } else {
        Err(Error::DomainTooLarge)
    }
}

/// The collar residual divided by `cosh a cosh b cosh c`; finite everywhere.
pub fn normalized_collar_residual(t: &TriangleLengths) -> f64 {
    let l = [ln_cosh(t.a), ln_cosh(t.b), ln_cosh(t.c)];
    let total = l[0] + l[1] + l[2];
    combine_exponents([2.0 * l[0] - total, 2.0 * l[1] - total, 2.0 * l[2] - total])
}

/// `|R| / (1 + cosh a cosh b cosh c)`, the scale-free membership measure for `H`.
pub fn relative_collar_residual(t: &TriangleLengths) -> f64 {
    let big = t.a.abs().max(t.b.abs()).max(t.c.abs());
    if big <= LOG_SCALE_THRESHOLD {
        let r = collar_residual(t).unwrap_or(f64::INFINITY);
        return r.abs() / (1.0 + t.a.cosh() * t.b.cosh() * t.c.cosh());
    }
    let ln_scale = ln_cosh(t.a) + ln_cosh(t.b) + ln_cosh(t.c);
    normalized_collar_residual(t).abs() / (1.0 + (-ln_scale).exp())
}

/// `|a + b + c - 2 max{a, b, c}|`.
pub fn delta_defect(t: &TriangleLengths) -> f64 {
    (t.sum() - 2.0 * t.max()).abs()
}

/// `exp(e0) + exp(e1) + exp(e2) - 2`, with the two largest terms taken
/// through `expm1` so that the sum is accurate near zero.
fn combine_exponents(mut e: [f64; 3]) -> f64 {
    e.sort_by(|p, q| q.total_cmp(p));
    e[0].exp_m1() + e[1].exp_m1() + e[2].exp()
}

pub fn project_pi(t: &TriangleLengths) -> CollarParams {
    CollarParams::new(4.0 * t.a - 2.0 * t.b - 2.0 * t.c, 2.0 * t.b - 2.0 * t.c)
}

/// Which component of the `Delta` preimage is the largest.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeltaRegion {
    /// `x >= |y|`
    AMax,
    /// `y >= max(0, x)`
    BMax,
    /// `y <= 0` and `x + y <= 0`
    CMax,
}

impl DeltaRegion {
    /// First region, in the order a, b, c, that contains `p`.
    pub fn of(p: &CollarParams) -> Self {
        if p.x >= p.y.abs() {
            DeltaRegion::AMax
        } else if p.y >= p.x.max(0.0) {
            DeltaRegion::BMax
        } else {
            DeltaRegion::CMax
        }
    }

    /// Coefficients `(kx, ky)` with `component_i = kx * x + ky * y`.
    fn coefficients(self) -> [[f64; 2]; 3] {
        match self {
            DeltaRegion::AMax => [[0.5, 0.0], [0.25, 0.25], [0.25, -0.25]],
            DeltaRegion::BMax => [[0.0, 0.5], [-0.25, 0.75], [-0.25, 0.25]],
            DeltaRegion::CMax => [[0.0, -0.5], [-0.25, -0.25], [-0.25, -0.75]],
        }
    }
}

/// The unique point of `Delta` over `p`.
pub fn invert_pi_delta(p: &CollarParams) -> TriangleLengths {
    let k = DeltaRegion::of(p).coefficients();
    TriangleLengths::new(
        k[0][0] * p.x + k[0][1] * p.y,
        k[1][0] * p.x + k[1][1] * p.y,
        k[2][0] * p.x + k[2][1] * p.y,
    )
}

/// The line `pi^{-1}(p)`, parameterized by the common offset `d` added to
/// each component of the `Delta` point.
struct Fiber {
    coef: [[f64; 2]; 3],
    base: [f64; 3],
    p: CollarParams,
}

impl Fiber {
    fn new(p: &CollarParams) -> Self {
        let coef = DeltaRegion::of(p).coefficients();
        let base = invert_pi_delta(p).to_array();
        Fiber { coef, base, p: *p }
    }

    fn point(&self, d: f64) -> TriangleLengths {
        TriangleLengths::new(self.base[0] + d, self.base[1] + d, self.base[2] + d)
    }

    /// Normalized residual and its derivative in `d`.
    ///
    /// Each exponent `ln cosh x_i - sum_{j != i} ln cosh x_j` is split into a
    /// linear part, taken exactly from the region coefficients, and bounded
    /// corrections. Components that start below 1 keep `ln cosh` whole so
    /// that the quadratic behaviour near 0 is not lost to cancellation.
    fn eval(&self, d: f64) -> (f64, f64) {
        let x = [self.base[0] + d, self.base[1] + d, self.base[2] + d];
        let big = [
            self.base[0] >= 1.0,
            self.base[1] >= 1.0,
            self.base[2] >= 1.0,
        ];
        let mut bounded = [0.0; 3];
        for j in 0..3 {
            bounded[j] = if big[j] {
                ln_cosh_excess(x[j])
            } else {
                ln_cosh(x[j])
            };
        }
        let th = [x[0].tanh(), x[1].tanh(), x[2].tanh()];

        let mut e = [0.0; 3];
        let mut de = [0.0; 3];
        for i in 0..3 {
            let (mut kx, mut ky, mut dcount, mut rest, mut slope) = (0.0, 0.0, 0.0, 0.0, 0.0);
            for j in 0..3 {
                let s = if i == j { 1.0 } else { -1.0 };
                if big[j] {
                    kx += s * self.coef[j][0];
                    ky += s * self.coef[j][1];
                    dcount += s;
                }
                rest += s * bounded[j];
                slope += s * th[j];
            }
            let linear = if kx == 0.0 && ky == 0.0 {
                0.0
            } else {
                kx * self.p.x + ky * self.p.y
            };
            e[i] = linear + dcount * d + rest;
            de[i] = slope;
        }
        let g = combine_exponents(e);
        let dg = (0..3).map(|i| e[i].exp() * de[i]).sum();
        (g, dg)
    }
}

/// Smallest offset tried along a fiber; keeps every component positive.
const MIN_OFFSET: f64 = 1e-300;

/// The unique point of `H` over `p`.
///
/// Solves along the fiber `pi^{-1}(p)` starting from the `Delta` point,
/// where the residual equals 1, outwards until it turns negative. Far from
/// the origin the `H` point coincides with the `Delta` point to machine
/// precision; the offset is then the smallest positive value tried.
pub fn invert_pi_h(p: &CollarParams, tol: &Tolerance) -> Result<TriangleLengths> {
    if !p.is_finite() {
        return Err(Error::NonFinite);
    }
    if p.x == 0.0 && p.y == 0.0 {
        return Ok(TriangleLengths::symmetric());
    }
    let fiber = Fiber::new(p);
    let (g_lo, _) = fiber.eval(MIN_OFFSET);
    if g_lo <= 0.0 {
        return Ok(fiber.point(MIN_OFFSET));
    }
    let mut hi = 1.0;
    loop {
        let (g_hi, _) = fiber.eval(hi);
        if g_hi < 0.0 {
            break;
        }
        hi *= 2.0;
        if hi > 64.0 {
            return Err(Error::NoConvergence {
                iterations: 0,
                last: hi,
            });
        }
    }
    let root = find_root(
        |d| fiber.eval(d),
        MIN_OFFSET,
        hi,
        g_lo,
        f64::MIN_POSITIVE,
        tol,
    )?;
    if root.f.abs() > tol.abs_tol.max(8.0 * f64::EPSILON) {
        return Err(Error::NoConvergence {
            iterations: root.iterations,
            last: root.x,
        });
    }
    Ok(fiber.point(root.x))
}

/// `n` points of `pi(H ∩ {a + b + c = level})`, at equally spaced angles
/// around the origin starting on the positive x-axis.
///
/// The plane `a + b + c = level` maps isomorphically onto the `(x, y)`
/// plane with its centroid going to the origin, so each sample is found
/// by a 1-D solve along the ray at angle `2πk/n`.
pub fn cross_section(level: f64, n: usize, tol: &Tolerance) -> Result<Vec<CollarParams>> {
    if !level.is_finite() {
        return Err(Error::NonFinite);
    }
    if level <= 2.0 || level < min_section_level() * (1.0 - 1e-12) {
        return Err(Error::EmptySection(level));
    }
    let center = level / 3.0;
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let theta = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
        let (ux, uy) = (theta.cos(), theta.sin());
        // preimage of (ux, uy) in the plane a + b + c = 0
        let va = ux / 6.0;
        let v = [va, -0.5 * va + 0.25 * uy, -0.5 * va - 0.25 * uy];
        let at =
            |r: f64| TriangleLengths::new(center + r * v[0], center + r * v[1], center + r * v[2]);
        let eval = |r: f64| residual_and_slope(&at(r), &v);

        let (g0, _) = eval(0.0);
        let r = if g0 >= 0.0 {
            0.0
        } else {
            // the ray leaves the open cone where the largest component reaches level / 2
            let r_cone = v
                .iter()
                .filter(|&&vi| vi > 0.0)
                .map(|&vi| (level / 6.0) / vi)
                .fold(f64::INFINITY, f64::min);
            find_root(eval, 0.0, r_cone, g0, tol.abs_tol * level, tol)?.x
        };
        out.push(project_pi(&at(r)));
    }
    Ok(out)
}

/// Normalized residual at `t` and its directional derivative along `v`.
fn residual_and_slope(t: &TriangleLengths, v: &[f64; 3]) -> (f64, f64) {
    let x = t.to_array();
    let l = [ln_cosh(x[0]), ln_cosh(x[1]), ln_cosh(x[2])];
    let total = l[0] + l[1] + l[2];
    let e = [2.0 * l[0] - total, 2.0 * l[1] - total, 2.0 * l[2] - total];
    let dl = [x[0].tanh() * v[0], x[1].tanh() * v[1], x[2].tanh() * v[2]];
    let dtotal = dl[0] + dl[1] + dl[2];
    let slope = (0..3).map(|i| e[i].exp() * (2.0 * dl[i] - dtotal)).sum();
    (combine_exponents(e), slope)
}
