//! The hyperbolic metric `hyp(a, b, c)` on the universal cover
//! `R x [-1, 1]` of the standard annulus:
//!
//! ```text
//! ds^2 = (a^2 + (a / sinh a)^2 (sinh(b y) / sinh b)^2) dx^2
//!        ± 2ab sqrt(1 - (1 / (sinh a sinh b))^2) dx dy + b^2 dy^2
//! ```
//!
//! with `+` exactly when `cosh c >= cosh a cosh b`. The core `y = 0` has
//! speed `a`, the boundary `y = ±1` has speed `h = a coth a`, and the
//! distance from the boundary to the core is `κ(a) = arcsinh(1 / sinh a)`.
//!
//! The annulus itself is the quotient by `x -> x + 2`; everything here
//! works on the cover.

use crate::error::{Error, Result};
use crate::geometry::{invert_pi_h, CollarParams, Sign, TriangleLengths};
use crate::special::{ln_cosh, ln_sinh};
use crate::tolerance::Tolerance;

/// Period of the annulus in the `x` direction.
pub const PERIOD: f64 = 2.0;

/// Default Simpson subdivisions per path segment.
pub const DEFAULT_SUBDIVISIONS: usize = 64;

/// Reduces `x` into `[0, 2)`.
pub fn reduce_x(x: f64) -> f64 {
    x.rem_euclid(PERIOD)
}

/// Coefficients of `E dx^2 + 2F dx dy + G dy^2` at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricTensorValue {
    pub e: f64,
    pub f: f64,
    pub g: f64,
    /// `EG - F^2`, evaluated without cancellation.
    pub det: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CollarMetric {
    lengths: TriangleLengths,
    sign: Sign,
    h: f64,
    kappa: f64,
    // (a / sinh a)^2
    core_ratio_sq: f64,
    // 1 / (sinh a sinh b)
    w: f64,
}

impl CollarMetric {
    /// Accepts triangle lengths whose relative collar residual is at most `tol`.
    pub fn new(lengths: TriangleLengths, tol: f64) -> Result<Self> {
        if !lengths.is_finite() {
            return Err(Error::NonFinite);
        }
        if !lengths.in_h(tol) {
            return Err(Error::NotOnH(crate::geometry::relative_collar_residual(
                &lengths,
            )));
        }
        let TriangleLengths { a, b, c } = lengths;
        let sign = if ln_cosh(c) >= ln_cosh(a) + ln_cosh(b) {
            Sign::Plus
        } else {
            Sign::Minus
        };
        let ln_sa = ln_sinh(a);
        let ln_sb = ln_sinh(b);
        let core_ratio_sq = (2.0 * (a.ln() - ln_sa)).exp();
        let w = (-(ln_sa + ln_sb)).exp().min(1.0);
        Ok(CollarMetric {
            lengths,
            sign,
            h: a / a.tanh(),
            kappa: (-ln_sa).exp().asinh(),
            core_ratio_sq,
            w,
        })
    }

    /// The metric over collar parameters `p`.
    pub fn from_params(p: &CollarParams, tol: &Tolerance) -> Result<Self> {
        let t = invert_pi_h(p, tol)?;
        CollarMetric::new(t, 1e-9)
    }

    pub fn lengths(&self) -> TriangleLengths {
        self.lengths
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Half the length of a boundary component, `a coth a`.
    pub fn h(&self) -> f64 {
        self.h
    }

    /// Collar depth `arcsinh(1 / sinh a)`.
    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    /// `(a / sinh a)^2 (sinh(b y) / sinh b)^2`, the `y`-dependent part of `E`.
    fn excess(&self, y: f64) -> f64 {
        let b = self.lengths.b;
        let by = (b * y).abs();
        let ratio = if by == 0.0 {
            0.0
        } else if b < 300.0 {
            (b * y).sinh() / b.sinh()
        } else {
            (ln_sinh(by) - ln_sinh(b)).exp()
        };
        self.core_ratio_sq * ratio * ratio
    }

    /// `1 - sqrt(1 - w^2)` for `w = 1 / (sinh a sinh b)`.
    fn shear_gap(&self) -> f64 {
        let w2 = self.w * self.w;
        w2 / (1.0 + (1.0 - w2).sqrt())
    }

    fn cross(&self) -> f64 {
        let TriangleLengths { a, b, .. } = self.lengths;
        self.sign.value() * a * b * (1.0 - self.w * self.w).sqrt()
    }

    pub fn tensor_at(&self, x: f64, y: f64) -> Result<MetricTensorValue> {
        check_domain(x, y)?;
        let TriangleLengths { a, b, .. } = self.lengths;
        let excess = self.excess(y);
        Ok(MetricTensorValue {
            e: a * a + excess,
            f: self.cross(),
            g: b * b,
            det: b * b * (excess + a * a * self.w * self.w),
        })
    }

    /// `ds^2` applied to the vector `(dx, dy)` at height `y`, written as
    /// `(a dx ± b dy)^2` plus small corrections so that nearly null
    /// directions keep their relative accuracy.
    pub fn speed_sq(&self, y: f64, dx: f64, dy: f64) -> f64 {
        let TriangleLengths { a, b, .. } = self.lengths;
        let s = self.sign.value();
        let lin = a * dx + s * b * dy;
        let v = lin * lin + self.excess(y) * dx * dx - 2.0 * s * a * b * self.shear_gap() * dx * dy;
        v.max(0.0)
    }

    /// Length of a polyline, by composite Simpson with `n_sub` (rounded up
    /// to even, at least 2) intervals per segment.
    pub fn curve_length(&self, path: &[(f64, f64)], n_sub: usize) -> Result<f64> {
        for &(x, y) in path {
            check_domain(x, y)?;
        }
        let n = n_sub.max(2).div_ceil(2) * 2;
        let mut total = 0.0;
        for seg in path.windows(2) {
            let (x0, y0) = seg[0];
            let (dx, dy) = (seg[1].0 - x0, seg[1].1 - y0);
            total += self.segment_length(y0, dx, dy, n);
        }
        Ok(total)
    }

    fn segment_length(&self, y0: f64, dx: f64, dy: f64, n: usize) -> f64 {
        let speed = |t: f64| self.speed_sq(y0 + t * dy, dx, dy).sqrt();
        let hstep = 1.0 / n as f64;
        let mut acc = speed(0.0) + speed(1.0);
        for k in 1..n {
            let w = if k % 2 == 1 { 4.0 } else { 2.0 };
            acc += w * speed(k as f64 * hstep);
        }
        acc * hstep / 3.0
    }

    /// Gaussian curvature at height `y` from the Brioschi formula with
    /// central differences of step `step / max(1, a, b)`.
    ///
    /// Requires `|y| + 2 step <= 1`. The constant `a^2` in `E` is kept out
    /// of the differences so that they do not drown in its rounding.
    pub fn gaussian_curvature(&self, y: f64, step: f64) -> Result<f64> {
        if step.is_nan() || step <= 0.0 || y.abs() + 2.0 * step > 1.0 {
            return Err(Error::StepTooLarge { step, y });
        }
        let TriangleLengths { a, b, .. } = self.lengths;
        let hs = step / a.max(b).max(1.0);
        let x = 0.0;

        // (E - a^2, F, G) as a field over the cover
        let field = |_x: f64, y: f64| -> [f64; 3] { [self.excess(y), self.cross(), b * b] };
        let d_u = |k: usize| (field(x + hs, y)[k] - field(x - hs, y)[k]) / (2.0 * hs);
        let d_v = |k: usize| (field(x, y + hs)[k] - field(x, y - hs)[k]) / (2.0 * hs);
        let d_uu = |k: usize| {
            (field(x + hs, y)[k] - 2.0 * field(x, y)[k] + field(x - hs, y)[k]) / (hs * hs)
        };
        let d_vv = |k: usize| {
            (field(x, y + hs)[k] - 2.0 * field(x, y)[k] + field(x, y - hs)[k]) / (hs * hs)
        };
        let d_uv = |k: usize| {
            (field(x + hs, y + hs)[k] - field(x + hs, y - hs)[k] - field(x - hs, y + hs)[k]
                + field(x - hs, y - hs)[k])
                / (4.0 * hs * hs)
        };
        let (ie, i_f, ig) = (0, 1, 2);
        let (e_u, e_v, e_vv) = (d_u(ie), d_v(ie), d_vv(ie));
        let (f_u, f_v, f_uv) = (d_u(i_f), d_v(i_f), d_uv(i_f));
        let (g_u, g_v, g_uu) = (d_u(ig), d_v(ig), d_uu(ig));

        let t = self.tensor_at(x, y)?;
        let (e, f, g, w) = (t.e, t.f, t.g, t.det);

        let m11 = -0.5 * e_vv + f_uv - 0.5 * g_uu;
        let m12 = 0.5 * e_u;
        let m13 = f_u - 0.5 * e_v;
        let m21 = f_v - 0.5 * g_u;
        let m31 = 0.5 * g_v;
        let det1 = m11 * w - m12 * (m21 * g - f * m31) + m13 * (m21 * f - e * m31);
        let det2 = -0.5 * e_v * (0.5 * e_v * g - f * 0.5 * g_u)
            + 0.5 * g_u * (0.5 * e_v * f - e * 0.5 * g_u);
        Ok((det1 - det2) / (w * w))
    }

    /// Largest `|eigenvalue|` of `ds^2 - (a dx ± b dy)^2` at height `y`,
    /// with `±` the sign of the metric. Bounded by 2 on all of `H`.
    pub fn comparison_defect(&self, y: f64) -> f64 {
        let TriangleLengths { a, b, .. } = self.lengths;
        let off = -self.sign.value() * a * b * self.shear_gap();
        sym2_norm(self.excess(y), off, 0.0)
    }

    /// Numerical distance from the boundary point `(0, 1)` to the core
    /// `y = 0`; should equal `κ(a)`.
    ///
    /// The strip is cut into `n_grid` horizontal layers and the path is a
    /// polyline with one straight piece per layer. The metric does not
    /// depend on `x`, so the best polyline picks each layer's slope
    /// independently: a lattice of slopes is scanned first, then refined
    /// by golden-section search. The run is repeated on half the layers and
    /// `GridTooCoarse` is returned if the two disagree by more than 1e-3.
    pub fn depth_check(&self, n_grid: usize) -> Result<f64> {
        if n_grid < 4 {
            return Err(Error::InvalidArgument("depth_check needs n_grid >= 4"));
        }
        let fine = self.layered_depth(n_grid);
        let coarse = self.layered_depth(n_grid / 2);
        let change = (fine - coarse).abs();
        if change > 1e-3 * fine.max(1.0) {
            return Err(Error::GridTooCoarse(change));
        }
        Ok(fine)
    }

    fn layered_depth(&self, layers: usize) -> f64 {
        let TriangleLengths { a, b, .. } = self.lengths;
        let dy = 1.0 / layers as f64;
        // the optimal slope |dx/dy| = |F| / E never exceeds b / a
        let s_max = 1.25 * b / a + 1e-3;
        let lattice = (layers / 8).max(4) as i64;
        let cell = s_max / lattice as f64;

        let mut total = 0.0;
        for k in 0..layers {
            let y0 = 1.0 - k as f64 * dy;
            let cost = |s: f64| self.segment_length(y0, s * dy, -dy, 4);
            let best = (-lattice..=lattice)
                .map(|j| j as f64 * cell)
                .min_by(|p, q| cost(*p).total_cmp(&cost(*q)))
                .unwrap_or(0.0);
            let (lo, hi) = (best - cell, best + cell);
            total += golden_section_min(cost, lo, hi, 1e-12 * (1.0 + s_max));
        }
        total
    }
}

/// Largest `|eigenvalue|` of the symmetric matrix `[[p, q], [q, r]]`.
pub fn sym2_norm(p: f64, q: f64, r: f64) -> f64 {
    let mean = 0.5 * (p + r);
    let rad = (0.5 * (p - r)).hypot(q);
    mean.abs() + rad
}

fn golden_section_min<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> f64 {
    let inv_phi = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let (mut f1, mut f2) = (f(x1), f(x2));
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = f(x2);
        }
    }
    f1.min(f2)
}

fn check_domain(x: f64, y: f64) -> Result<()> {
    if !x.is_finite() || !y.is_finite() || y.abs() > 1.0 {
        return Err(Error::OutOfDomain { x, y });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::converters::{fn_to_triangle, FenchelNielsen};
    use crate::geometry::invert_pi_h;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn symmetric() -> CollarMetric {
        CollarMetric::new(TriangleLengths::symmetric(), 1e-12).unwrap()
    }

    fn metric_at(x: f64, y: f64) -> CollarMetric {
        CollarMetric::from_params(&CollarParams::new(x, y), &Tolerance::default()).unwrap()
    }

    #[test]
    fn rejects_points_off_h() {
        assert!(matches!(
            CollarMetric::new(TriangleLengths::new(1.0, 1.0, 1.0), 1e-9),
            Err(Error::NotOnH(_))
        ));
    }

    #[test]
    fn tensor_examples() {
        let m = metric_at(3.0, -1.5);
        let TriangleLengths { a, b, .. } = m.lengths();
        let t = m.tensor_at(0.4, 0.0).unwrap();
        assert_eq!(t.e, a * a);
        assert_eq!(t.g, b * b);
        for y in [-1.0, 1.0] {
            let t = m.tensor_at(0.0, y).unwrap();
            assert_relative_eq!(t.e.sqrt(), a / a.tanh(), max_relative = 1e-14);
            assert_relative_eq!(t.e.sqrt(), m.h(), max_relative = 1e-14);
        }
        assert!(matches!(
            m.tensor_at(0.0, 1.5),
            Err(Error::OutOfDomain { .. })
        ));
        // independent of x
        assert_eq!(
            m.tensor_at(0.1, 0.3).unwrap(),
            m.tensor_at(17.3, 0.3).unwrap()
        );
    }

    #[test]
    fn symmetric_point_cross_term() {
        // sinh^2 a = 5/4, so F = -a^2 sqrt(1 - 16/25) = -3a^2/5
        let m = symmetric();
        assert_eq!(m.sign(), Sign::Minus);
        let a = m.lengths().a;
        let t = m.tensor_at(0.0, 0.2).unwrap();
        assert_relative_eq!(t.f, -0.6 * a * a, max_relative = 1e-14);
    }

    #[test]
    fn det_matches_naive_where_naive_is_accurate() {
        let m = symmetric();
        for y in [-1.0, -0.3, 0.0, 0.8] {
            let t = m.tensor_at(0.0, y).unwrap();
            assert_relative_eq!(t.det, t.e * t.g - t.f * t.f, max_relative = 1e-12);
        }
    }

    #[test]
    fn length_examples() {
        let m = metric_at(-2.0, 3.0);
        let TriangleLengths { a, b, .. } = m.lengths();
        let l = m.curve_length(&[(0.0, 0.0), (1.0, 0.0)], 64).unwrap();
        assert!((l - a).abs() < 1e-10);
        let l = m.curve_length(&[(0.7, 0.0), (0.7, 1.0)], 64).unwrap();
        assert!((l - b).abs() < 1e-10);
        let l = m.curve_length(&[(0.0, 1.0), (1.0, 1.0)], 64).unwrap();
        assert!((l - a / a.tanh()).abs() < 1e-10);
        // full periods
        let l = m.curve_length(&[(0.0, 0.0), (2.0, 0.0)], 64).unwrap();
        assert!((l - 2.0 * a).abs() < 1e-9);
        let l = m.curve_length(&[(0.0, -1.0), (2.0, -1.0)], 64).unwrap();
        assert!((l - 2.0 * a / a.tanh()).abs() < 1e-9);
        assert!(matches!(
            m.curve_length(&[(0.0, 0.0), (0.0, 1.2)], 64),
            Err(Error::OutOfDomain { .. })
        ));
    }

    #[test]
    fn curvature_examples() {
        let k = symmetric().gaussian_curvature(0.0, 1e-3).unwrap();
        assert!((k + 1.0).abs() < 1e-5, "{k}");
        assert!(matches!(
            symmetric().gaussian_curvature(0.9, 0.1),
            Err(Error::StepTooLarge { .. })
        ));
    }

    #[test]
    fn comparison_defect_examples() {
        let m = metric_at(1.0, 2.0);
        let TriangleLengths { a, b, .. } = m.lengths();
        let w = 1.0 / (a.sinh() * b.sinh());
        let want = a * b * (1.0 - (1.0 - w * w).sqrt());
        assert_relative_eq!(m.comparison_defect(0.0), want, max_relative = 1e-10);
        assert!(m.comparison_defect(1.0) <= 2.0);

        let far = metric_at(6000.0, -2000.0);
        assert!(far.comparison_defect(1.0) < 1e-12);
        assert!(far.comparison_defect(0.0) < 1e-12);
    }

    #[test]
    fn depth_examples() {
        let m = symmetric();
        let want = (2.0 / 5f64.sqrt()).asinh();
        assert_relative_eq!(m.kappa(), want, max_relative = 1e-14);
        assert!((want - 0.804719).abs() < 1e-6);
        let d = m.depth_check(256).unwrap();
        assert!((d - want).abs() < 1e-3, "{d} vs {want}");

        let t = fn_to_triangle(&FenchelNielsen::new(10.0, 0.0)).unwrap();
        let m = CollarMetric::new(t, 1e-10).unwrap();
        assert!((m.kappa() - 0.013476).abs() < 1e-6);
        let d = m.depth_check(256).unwrap();
        assert!((d - m.kappa()).abs() < 1e-3, "{d}");
        assert!(matches!(m.depth_check(2), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn twist_flip_turns_plus_into_minus() {
        // y -> -y swaps b and c; a and therefore the core and boundary
        // lengths are unchanged
        for (x, y) in [(1.0, 3.0), (-4.0, 2.0), (0.5, 0.25), (6.0, 5.0)] {
            let m = metric_at(x, y);
            let flipped = metric_at(x, -y);
            assert_relative_eq!(m.lengths().a, flipped.lengths().a, max_relative = 1e-12);
            assert_relative_eq!(m.h(), flipped.h(), max_relative = 1e-12);
            if m.sign() == Sign::Plus {
                assert_eq!(flipped.sign(), Sign::Minus);
            }
        }
    }

    #[test]
    fn reduce_x_wraps() {
        assert_eq!(reduce_x(2.5), 0.5);
        assert_eq!(reduce_x(-0.5), 1.5);
    }

    proptest! {
        #[test]
        fn curvature_is_minus_one(r in 0.0f64..12.0, th in 0.0f64..std::f64::consts::TAU, y in -0.9f64..0.9) {
            let t = invert_pi_h(&CollarParams::new(r * th.cos(), r * th.sin()), &Tolerance::default()).unwrap();
            let m = CollarMetric::new(t, 1e-9).unwrap();
            let k = m.gaussian_curvature(y, 1e-3).unwrap();
            prop_assert!((k + 1.0).abs() < 1e-4, "{}", k);
        }

        #[test]
        fn comparison_bound_and_definiteness(r in 0.0f64..200.0, th in 0.0f64..std::f64::consts::TAU, y in -1.0f64..1.0) {
            let t = invert_pi_h(&CollarParams::new(r * th.cos(), r * th.sin()), &Tolerance::default()).unwrap();
            let m = CollarMetric::new(t, 1e-9).unwrap();
            prop_assert!(m.comparison_defect(y) <= 2.0);
            let v = m.tensor_at(0.0, y).unwrap();
            prop_assert!(v.e > 0.0 && v.g > 0.0 && v.det > 0.0);
        }
    }
}
