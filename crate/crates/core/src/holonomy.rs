//! SL(2, R) holonomy of the once-punctured torus with geodesics `α`, `β`,
//! `γ = αβ` of half-lengths `(a, b, c)`.
//!
//! With `A = diag(e^a, e^-a)` and `B = [[p, 1], [ps - 1, s]]` the traces
//! `tr A = 2 cosh a`, `tr B = 2 cosh b`, `tr AB = 2 cosh c` fix `p` and `s`,
//! and then `tr[A, B] = 4 R(a, b, c) - 2`. The commutator is parabolic
//! (trace `-2`) exactly on the collar surface.
//!
//! Matrices are stored as `2^k` times a mantissa matrix so that traces of
//! points far out on the surface stay representable. Alongside each product
//! the product of entrywise absolute values is kept; it bounds the rounding
//! error of the trace.

use crate::error::{Error, Result};
use crate::foliation::foliation_from_lengths;
use crate::geometry::{
    collar_residual, invert_pi_delta, invert_pi_h, normalized_collar_residual,
    relative_collar_residual, CollarParams, TriangleLengths,
};
use crate::special::{acosh_from_ln, ln_cosh, ln_sinh};
use crate::tolerance::Tolerance;
use crate::word::{Letter, TorusWord};

use std::f64::consts::LN_2;

/// Above this component size the entries are built from logarithms.
const LOG_SCALE_THRESHOLD: f64 = 300.0;

/// Largest `|p|`, `|q|` accepted by [`foliation_half_length`].
pub const MAX_FOLIATION_EXPONENT: i64 = 3;

/// `x * 2^k` without intermediate overflow.
fn ldexp(mut x: f64, mut k: i64) -> f64 {
    while k > 1000 {
        x *= 2f64.powi(1000);
        k -= 1000;
    }
    while k < -1000 {
        x *= 2f64.powi(-1000);
        k += 1000;
    }
    x * 2f64.powi(k as i32)
}

/// A float with a wide exponent, `m * 2^e` with `0.5 <= |m| < 1` or `m = 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExtFloat {
    m: f64,
    e: i64,
}

impl ExtFloat {
    pub const ZERO: ExtFloat = ExtFloat { m: 0.0, e: 0 };

    fn normalize(m: f64, e: i64) -> Self {
        if m == 0.0 || !m.is_finite() {
            return ExtFloat {
                m,
                e: if m == 0.0 { 0 } else { e },
            };
        }
        let (m, e) = if m.abs() < f64::MIN_POSITIVE {
            (m * 2f64.powi(64), e - 64)
        } else {
            (m, e)
        };
        let bits = m.to_bits();
        let k = ((bits >> 52) & 0x7ff) as i64 - 1022;
        let m = f64::from_bits((bits & !(0x7ff << 52)) | (1022 << 52));
        ExtFloat { m, e: e + k }
    }

    pub fn from_f64(x: f64) -> Self {
        ExtFloat::normalize(x, 0)
    }

    fn from_log(v: LogVal) -> Self {
        if v.sign == 0.0 {
            return ExtFloat::ZERO;
        }
        let k = (v.ln / LN_2).floor();
        ExtFloat::normalize(v.sign * (v.ln - k * LN_2).exp(), k as i64)
    }

    pub fn to_f64(self) -> f64 {
        ldexp(self.m, self.e)
    }

    pub fn ln_abs(self) -> f64 {
        self.m.abs().ln() + self.e as f64 * LN_2
    }

    pub fn abs(self) -> Self {
        ExtFloat {
            m: self.m.abs(),
            e: self.e,
        }
    }
}

impl std::ops::Neg for ExtFloat {
    type Output = ExtFloat;

    fn neg(self) -> Self {
        ExtFloat {
            m: -self.m,
            e: self.e,
        }
    }
}

impl std::ops::Mul for ExtFloat {
    type Output = ExtFloat;

    fn mul(self, o: ExtFloat) -> Self {
        ExtFloat::normalize(self.m * o.m, self.e + o.e)
    }
}

impl std::ops::Add for ExtFloat {
    type Output = ExtFloat;

    fn add(self, o: ExtFloat) -> Self {
        let (hi, lo) = if self.e >= o.e { (self, o) } else { (o, self) };
        if lo.m == 0.0 {
            return hi;
        }
        if hi.m == 0.0 {
            return lo;
        }
        let d = hi.e - lo.e;
        if d > 64 {
            return hi;
        }
        ExtFloat::normalize(hi.m + lo.m * 2f64.powi(-(d as i32)), hi.e)
    }
}

/// A signed number stored as `sign * exp(ln)`.
#[derive(Debug, Clone, Copy, PartialEq)]
struct LogVal {
    sign: f64,
    ln: f64,
}

impl LogVal {
    const ZERO: LogVal = LogVal {
        sign: 0.0,
        ln: f64::NEG_INFINITY,
    };
    const ONE: LogVal = LogVal { sign: 1.0, ln: 0.0 };

    fn exp_pos(ln: f64) -> Self {
        LogVal { sign: 1.0, ln }
    }

    /// `e^u - e^v`.
    fn diff_exp(u: f64, v: f64) -> Self {
        if u == v {
            LogVal::ZERO
        } else if u > v {
            LogVal {
                sign: 1.0,
                ln: u + (-(v - u).exp_m1()).ln(),
            }
        } else {
            LogVal {
                sign: -1.0,
                ln: v + (-(u - v).exp_m1()).ln(),
            }
        }
    }

    fn add(self, o: LogVal) -> Self {
        if self.sign == 0.0 {
            return o;
        }
        if o.sign == 0.0 {
            return self;
        }
        if self.sign == o.sign {
            let (hi, lo) = if self.ln >= o.ln {
                (self.ln, o.ln)
            } else {
                (o.ln, self.ln)
            };
            LogVal {
                sign: self.sign,
                ln: hi + (lo - hi).exp().ln_1p(),
            }
        } else {
            let d = LogVal::diff_exp(self.ln, o.ln);
            LogVal {
                sign: d.sign * self.sign,
                ln: d.ln,
            }
        }
    }

    fn mul(self, o: LogVal) -> Self {
        LogVal {
            sign: self.sign * o.sign,
            ln: self.ln + o.ln,
        }
    }

    fn recip(self) -> Self {
        LogVal {
            sign: self.sign,
            ln: -self.ln,
        }
    }
}

/// A 2x2 matrix of [`ExtFloat`] entries, row-major `[m00, m01, m10, m11]`,
/// carried together with the matching product of absolute values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledMatrix {
    m: [ExtFloat; 4],
    abs: [ExtFloat; 4],
}

impl ScaledMatrix {
    pub fn identity() -> Self {
        ScaledMatrix::from_f64([1.0, 0.0, 0.0, 1.0])
    }

    pub fn from_f64(m: [f64; 4]) -> Self {
        ScaledMatrix::from_ext(m.map(ExtFloat::from_f64))
    }

    fn from_ext(m: [ExtFloat; 4]) -> Self {
        ScaledMatrix {
            m,
            abs: m.map(ExtFloat::abs),
        }
    }

    pub fn mul(&self, o: &ScaledMatrix) -> Self {
        let prod = |x: &[ExtFloat; 4], y: &[ExtFloat; 4]| {
            let dot = |i: usize, j: usize, k: usize, l: usize| x[i] * y[j] + x[k] * y[l];
            [
                dot(0, 0, 1, 2),
                dot(0, 1, 1, 3),
                dot(2, 0, 3, 2),
                dot(2, 1, 3, 3),
            ]
        };
        ScaledMatrix {
            m: prod(&self.m, &o.m),
            abs: prod(&self.abs, &o.abs),
        }
    }

    /// Inverse assuming determinant one.
    pub fn sl2_inverse(&self) -> Self {
        let [a, b, c, d] = self.m;
        let [aa, ab, ac, ad] = self.abs;
        ScaledMatrix {
            m: [d, -b, -c, a],
            abs: [ad, ab, ac, aa],
        }
    }

    /// Entries as plain floats; may overflow to infinity.
    pub fn to_f64(&self) -> [f64; 4] {
        self.m.map(ExtFloat::to_f64)
    }

    /// Determinant as plain float; may overflow.
    pub fn det(&self) -> f64 {
        let [a, b, c, d] = self.m;
        (a * d + -(b * c)).to_f64()
    }

    pub fn trace(&self) -> TraceValue {
        TraceValue {
            value: self.m[0] + self.m[3],
            abs: self.abs[0] + self.abs[3],
        }
    }
}

/// A trace, with `abs` the trace of the product of absolute values.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceValue {
    pub value: ExtFloat,
    pub abs: ExtFloat,
}

impl TraceValue {
    pub fn value(&self) -> f64 {
        self.value.to_f64()
    }

    pub fn ln_abs(&self) -> f64 {
        self.value.ln_abs()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HolonomyPair {
    a: ScaledMatrix,
    b: ScaledMatrix,
    a_inv: ScaledMatrix,
    b_inv: ScaledMatrix,
    // relative error of the stored entries
    entry_err: f64,
}

impl HolonomyPair {
    pub fn from_matrices(a: ScaledMatrix, b: ScaledMatrix) -> Self {
        HolonomyPair {
            a,
            b,
            a_inv: a.sl2_inverse(),
            b_inv: b.sl2_inverse(),
            entry_err: 4.0 * f64::EPSILON,
        }
    }

    pub fn a(&self) -> &ScaledMatrix {
        &self.a
    }

    pub fn b(&self) -> &ScaledMatrix {
        &self.b
    }

    pub fn c(&self) -> ScaledMatrix {
        self.a.mul(&self.b)
    }

    /// Simultaneous conjugation `(G A G^-1, G B G^-1)` by an SL(2, R) matrix.
    pub fn conjugated(&self, g: &ScaledMatrix) -> Self {
        let gi = g.sl2_inverse();
        let mut out = HolonomyPair::from_matrices(g.mul(&self.a).mul(&gi), g.mul(&self.b).mul(&gi));
        out.entry_err = self.entry_err + 8.0 * f64::EPSILON;
        out
    }

    fn letter(&self, l: Letter) -> &ScaledMatrix {
        match l {
            Letter::A => &self.a,
            Letter::AInv => &self.a_inv,
            Letter::B => &self.b,
            Letter::BInv => &self.b_inv,
        }
    }

    fn product(&self, w: &TorusWord) -> ScaledMatrix {
        w.cyclically_reduced()
            .letters()
            .iter()
            .fold(ScaledMatrix::identity(), |acc, &l| acc.mul(self.letter(l)))
    }

    /// Trace of the cyclically reduced word, with an absolute error bound.
    pub fn trace_with_error(&self, w: &TorusWord) -> (TraceValue, f64) {
        let n = w.word_length() as f64;
        let t = self.product(w).trace();
        let rel = (n + 2.0) * (self.entry_err + 2.0 * f64::EPSILON);
        (t, t.abs.to_f64() * rel)
    }
}

/// Holonomy pair for any positive triple, on the collar surface or not.
/// The commutator trace is `4 R(a, b, c) - 2`.
pub fn holonomy_from_positive_lengths(t: &TriangleLengths) -> Result<HolonomyPair> {
    build_pair(t, false)
}

/// Holonomy pair for a point of the collar surface (relative residual at
/// most `tol`). The point is taken to lie exactly on the surface: `B` is
/// built with `ps - 1 = 1 / sinh^2 a`, so the commutator is parabolic up
/// to rounding in the products and not up to the residual of `t`.
pub fn holonomy_from_lengths(t: &TriangleLengths, tol: f64) -> Result<HolonomyPair> {
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    if !t.in_h(tol) {
        return Err(Error::NotOnH(relative_collar_residual(t)));
    }
    build_pair(t, true)
}

fn build_pair(t: &TriangleLengths, on_surface: bool) -> Result<HolonomyPair> {
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    let TriangleLengths { a, b, c } = *t;
    if a == 0.0 {
        return Err(Error::DegenerateA);
    }
    if a < 0.0 || b < 0.0 || c < 0.0 {
        return Err(Error::NegativeLength(a.min(b).min(c)));
    }
    if a.max(b).max(c) <= LOG_SCALE_THRESHOLD {
        direct_pair(t, on_surface)
    } else {
        Ok(log_pair(t, on_surface))
    }
}

// `ps - 1 = (1 - R) / sinh^2 a`, so the entry that cancels in the
// defining formulas is recovered from the other one.
fn direct_pair(t: &TriangleLengths, on_surface: bool) -> Result<HolonomyPair> {
    let TriangleLengths { a, b, c } = *t;
    let (sa, cb, cc) = (a.sinh(), b.cosh(), c.cosh());
    let p = (cc - (-a).exp() * cb) / sa;
    let s = (a.exp() * cb - cc) / sa;
    let residual = if on_surface { 0.0 } else { collar_residual(t)? };
    let r = (1.0 - residual) / (sa * sa);
    let (p, s) = if p.abs() >= s.abs() {
        (p, (1.0 + r) / p)
    } else {
        ((1.0 + r) / s, s)
    };
    let am = ScaledMatrix::from_f64([a.exp(), 0.0, 0.0, (-a).exp()]);
    let bm = ScaledMatrix::from_f64([p, 1.0, r, s]);
    let mut pair = HolonomyPair::from_matrices(am, bm);
    pair.entry_err = 8.0 * f64::EPSILON;
    Ok(pair)
}

fn log_pair(t: &TriangleLengths, on_surface: bool) -> HolonomyPair {
    let TriangleLengths { a, b, c } = *t;
    let (lb, lc, lsa) = (ln_cosh(b), ln_cosh(c), ln_sinh(a));
    let inv_sa = LogVal::exp_pos(-lsa);
    let p = LogVal::diff_exp(lc, lb - a).mul(inv_sa);
    let s = LogVal::diff_exp(a + lb, lc).mul(inv_sa);
    // r = (1 - g exp(ΣL)) / sinh^2 a with g the normalized residual
    let g = if on_surface {
        0.0
    } else {
        normalized_collar_residual(t)
    };
    let correction = if g == 0.0 {
        LogVal::ZERO
    } else {
        let sum_l = ln_cosh(a) + lb + lc;
        LogVal {
            sign: -g.signum(),
            ln: g.abs().ln() + sum_l - 2.0 * lsa,
        }
    };
    let r = LogVal::exp_pos(-2.0 * lsa).add(correction);
    let one_r = LogVal::ONE.add(r);
    let (p, s) = if p.ln >= s.ln {
        (p, one_r.mul(p.recip()))
    } else {
        (one_r.mul(s.recip()), s)
    };

    let am = ScaledMatrix::from_ext(
        [
            LogVal::exp_pos(a),
            LogVal::ZERO,
            LogVal::ZERO,
            LogVal::exp_pos(-a),
        ]
        .map(ExtFloat::from_log),
    );
    let bm = ScaledMatrix::from_ext([p, LogVal::ONE, r, s].map(ExtFloat::from_log));
    let mut pair = HolonomyPair::from_matrices(am, bm);
    pair.entry_err = 4.0 * f64::EPSILON * (2.0 + a.max(b).max(c));
    pair
}

/// Trace of the word; infinite when it does not fit in a float.
pub fn word_trace(h: &HolonomyPair, w: &TorusWord) -> f64 {
    h.trace_with_error(w).0.value()
}

/// `arccosh(|tr| / 2)`, half the translation length.
pub fn geodesic_half_length(h: &HolonomyPair, w: &TorusWord) -> Result<f64> {
    let (t, err) = h.trace_with_error(w);
    let v = t.value();
    if v.is_finite() && v.abs() <= 2.0 + err {
        return Err(Error::NotHyperbolic(v));
    }
    Ok(acosh_from_ln(t.ln_abs() - LN_2))
}

/// Limit of normalized lengths along the ray through `p`: the transverse
/// measure `|P a ± Q b|` (sign from the linear foliation) of the straight
/// class with abelianization `(P, Q)`, on the triangle lengths
/// `invert_pi_delta(p)`.
pub fn foliation_half_length(p: &CollarParams, w: &TorusWord) -> Result<f64> {
    let (pp, qq) = w.abelianization();
    if pp.abs() > MAX_FOLIATION_EXPONENT || qq.abs() > MAX_FOLIATION_EXPONENT {
        return Err(Error::UnsupportedWord(pp, qq));
    }
    if !p.is_finite() {
        return Err(Error::NonFinite);
    }
    let f = foliation_from_lengths(&invert_pi_delta(p), 1e-12)?;
    Ok(f.evaluate(pp as f64, qq as f64).abs())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayPoint {
    pub t: f64,
    /// `geodesic_half_length / t`, `None` where the element is not hyperbolic.
    pub normalized: Option<f64>,
}

/// Normalized geodesic half-lengths of `w` along the ray `t p`.
pub fn ray_limit_experiment(
    p: &CollarParams,
    w: &TorusWord,
    t_values: &[f64],
    tol: &Tolerance,
) -> Result<Vec<RayPoint>> {
    if p.x == 0.0 && p.y == 0.0 {
        return Err(Error::InvalidArgument("ray direction must be non-zero"));
    }
    if t_values.iter().any(|t| !t.is_finite() || *t <= 0.0) {
        return Err(Error::InvalidArgument("ray parameters must be positive"));
    }
    if t_values.windows(2).any(|s| s[1] <= s[0]) {
        return Err(Error::InvalidArgument("ray parameters must increase"));
    }
    t_values
        .iter()
        .map(|&t| {
            let lengths = invert_pi_h(&p.scaled(t), tol)?;
            let h = holonomy_from_lengths(&lengths, 1e-9)?;
            let normalized = match geodesic_half_length(&h, w) {
                Ok(v) => Some(v / t),
                Err(Error::NotHyperbolic(_)) => None,
                Err(e) => return Err(e),
            };
            Ok(RayPoint { t, normalized })
        })
        .collect()
}

/// Reads `(a, b, c)` back from the traces of `A`, `B`, `AB`.
pub fn theta_roundtrip(t: &TriangleLengths, tol: f64) -> Result<TriangleLengths> {
    let h = holonomy_from_lengths(t, tol)?;
    let read = |m: &ScaledMatrix| acosh_from_ln(m.trace().ln_abs() - LN_2);
    Ok(TriangleLengths::new(read(h.a()), read(h.b()), read(&h.c())))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::converters::{fn_to_triangle, FenchelNielsen};
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    fn w(s: &str) -> TorusWord {
        TorusWord::parse(s).unwrap()
    }

    fn on_h(x: f64, y: f64) -> TriangleLengths {
        invert_pi_h(&CollarParams::new(x, y), &Tolerance::default()).unwrap()
    }

    fn sym() -> HolonomyPair {
        holonomy_from_lengths(&TriangleLengths::symmetric(), 1e-12).unwrap()
    }

    #[test]
    fn symmetric_point_traces() {
        let h = sym();
        assert_relative_eq!(word_trace(&h, &w("a")), 3.0, max_relative = 1e-14);
        assert_relative_eq!(word_trace(&h, &w("b")), 3.0, max_relative = 1e-14);
        assert_relative_eq!(word_trace(&h, &w("ab")), 3.0, max_relative = 1e-14);
        assert!((word_trace(&h, &TorusWord::commutator()) + 2.0).abs() < 1e-12);
        assert_relative_eq!(h.a().det(), 1.0, max_relative = 1e-14);
        assert_relative_eq!(h.b().det(), 1.0, max_relative = 1e-14);
    }

    #[test]
    fn fn_point_traces() {
        let t = fn_to_triangle(&FenchelNielsen::new(2.0, 0.0)).unwrap();
        let h = holonomy_from_lengths(&t, 1e-12).unwrap();
        let tr_a = word_trace(&h, &w("a"));
        assert_relative_eq!(tr_a, 2.0 * 1f64.cosh(), max_relative = 1e-14);
        assert!((tr_a - 3.0862).abs() < 1e-4);
        assert!((word_trace(&h, &TorusWord::commutator()) + 2.0).abs() < 1e-6);
    }

    #[test]
    fn off_surface_commutator() {
        let t = TriangleLengths::new(1.0, 1.0, 1.0);
        assert!(matches!(
            holonomy_from_lengths(&t, 1e-9),
            Err(Error::NotOnH(_))
        ));
        let h = holonomy_from_positive_lengths(&t).unwrap();
        let want = 4.0 * collar_residual(&t).unwrap() - 2.0;
        assert_relative_eq!(
            word_trace(&h, &TorusWord::commutator()),
            want,
            max_relative = 1e-12
        );
        assert!((want + 2.820_633_653_945_205_6).abs() < 1e-12);
        assert_eq!(
            holonomy_from_positive_lengths(&TriangleLengths::new(0.0, 1.0, 1.0)),
            Err(Error::DegenerateA)
        );
    }

    #[test]
    fn half_length_examples() {
        let t = on_h(2.0, -1.0);
        let h = holonomy_from_lengths(&t, 1e-9).unwrap();
        assert_relative_eq!(
            geodesic_half_length(&h, &w("a")).unwrap(),
            t.a,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            geodesic_half_length(&h, &w("ab")).unwrap(),
            t.c,
            max_relative = 1e-12
        );
        assert_relative_eq!(
            geodesic_half_length(&sym(), &w("ab")).unwrap(),
            1.5f64.acosh(),
            max_relative = 1e-14
        );
        assert!(matches!(
            geodesic_half_length(&h, &TorusWord::commutator()),
            Err(Error::NotHyperbolic(_))
        ));
        assert!(matches!(
            geodesic_half_length(&h, &TorusWord::identity()),
            Err(Error::NotHyperbolic(_))
        ));
    }

    #[test]
    fn commutator_parabolic_far_out() {
        for s in [10.0, 100.0, 1000.0] {
            let h = holonomy_from_lengths(&on_h(6.0 * s, -2.0 * s), 1e-9).unwrap();
            assert!(matches!(
                geodesic_half_length(&h, &TorusWord::commutator()),
                Err(Error::NotHyperbolic(_))
            ));
        }
    }

    #[test]
    fn foliation_length_examples() {
        // (2, 1.5, 3.5): c = a + b
        let p = CollarParams::new(-2.0, -4.0);
        let d = invert_pi_delta(&p);
        assert_eq!(d.c, d.a + d.b);
        assert_eq!(foliation_half_length(&p, &w("a")).unwrap(), d.a);
        assert_eq!(foliation_half_length(&p, &w("ab")).unwrap(), d.c);
        assert_eq!(
            foliation_half_length(&p, &w("aB")).unwrap(),
            (d.a - d.b).abs()
        );
        assert_eq!(
            foliation_half_length(&p, &TorusWord::commutator()).unwrap(),
            0.0
        );
        assert_eq!(
            foliation_half_length(&p, &w("aaaa")),
            Err(Error::UnsupportedWord(4, 0))
        );
        // (3, 1, 2): c = a - b
        let q = CollarParams::new(6.0, -2.0);
        let d = invert_pi_delta(&q);
        assert_eq!(foliation_half_length(&q, &w("ab")).unwrap(), d.c);
        assert_eq!(foliation_half_length(&q, &w("aB")).unwrap(), d.a + d.b);
    }

    #[test]
    fn ray_limit_examples() {
        let tol = Tolerance::default();
        let p = CollarParams::new(6.0, -2.0);
        let ts = [1.0, 10.0, 100.0, 1000.0];
        for word in ["a", "b", "ab"] {
            let limit = foliation_half_length(&p, &w(word)).unwrap();
            let r = ray_limit_experiment(&p, &w(word), &ts, &tol).unwrap();
            let last = r[3].normalized.unwrap();
            assert!(
                (last - limit).abs() <= 0.01 * limit,
                "{word}: {last} vs {limit}"
            );
            let v: Vec<f64> = r.iter().map(|x| x.normalized.unwrap()).collect();
            let gaps: Vec<f64> = v.windows(2).map(|s| (s[1] - s[0]).abs()).collect();
            // once converged the gaps sit at rounding level
            let ulp = 64.0 * f64::EPSILON * v.iter().cloned().fold(limit, f64::max);
            assert!(
                gaps[1] <= gaps[0] + ulp && gaps[2] <= gaps[1] + ulp,
                "{word}: {gaps:?}"
            );
        }
        let r = ray_limit_experiment(&p, &TorusWord::commutator(), &ts, &tol).unwrap();
        assert!(r.iter().all(|x| x.normalized.is_none()));
        assert!(ray_limit_experiment(&CollarParams::new(0.0, 0.0), &w("a"), &ts, &tol).is_err());
    }

    #[test]
    fn theta_examples() {
        let s = TriangleLengths::symmetric();
        let back = theta_roundtrip(&s, 1e-12).unwrap();
        for (x, y) in back.to_array().iter().zip(s.to_array()) {
            assert!((x - y).abs() < 1e-12);
        }
        let t = on_h(50.0 * 0.8, 50.0 * 0.6);
        let back = theta_roundtrip(&t, 1e-9).unwrap();
        for (x, y) in back.to_array().iter().zip(t.to_array()) {
            assert!((x - y).abs() <= 1e-6 * y, "{x} vs {y}");
        }
    }

    #[test]
    fn log_scale_matches_direct() {
        let t = on_h(100.0, 30.0);
        let d = direct_pair(&t, true).unwrap();
        let l = log_pair(&t, true);
        for word in ["a", "b", "ab", "aB", "aab", "abb"] {
            let x = word_trace(&d, &w(word));
            let y = word_trace(&l, &w(word));
            assert_relative_eq!(x, y, max_relative = 1e-11);
        }
    }

    fn h_point() -> impl Strategy<Value = TriangleLengths> {
        (0.0f64..8.0, 0.0f64..std::f64::consts::TAU)
            .prop_map(|(r, th)| on_h(r * th.cos(), r * th.sin()))
    }

    fn word() -> impl Strategy<Value = TorusWord> {
        prop::collection::vec(
            prop_oneof![
                Just(Letter::A),
                Just(Letter::AInv),
                Just(Letter::B),
                Just(Letter::BInv)
            ],
            1..7,
        )
        .prop_map(TorusWord::new)
    }

    proptest! {
        #[test]
        fn trace_targets(t in h_point()) {
            let h = holonomy_from_lengths(&t, 1e-9).unwrap();
            let gap = (word_trace(&h, &w("a")) - 2.0 * t.a.cosh()).abs()
                + (word_trace(&h, &w("b")) - 2.0 * t.b.cosh()).abs()
                + (word_trace(&h, &w("ab")) - 2.0 * t.c.cosh()).abs();
            prop_assert!(gap <= 1e-10 * (1.0 + 2.0 * t.c.cosh()), "{}", gap);
        }

        #[test]
        fn fricke_identity(a in 0.01f64..4.0, b in 0.0f64..4.0, c in 0.0f64..4.0) {
            let t = TriangleLengths::new(a, b, c);
            let h = holonomy_from_positive_lengths(&t).unwrap();
            let lhs = word_trace(&h, &TorusWord::commutator()) + 2.0;
            let rhs = 4.0 * collar_residual(&t).unwrap();
            let scale = 4.0 * (1.0 + a.cosh() * b.cosh() * c.cosh());
            prop_assert!((lhs - rhs).abs() <= 1e-8 * scale);
        }

        #[test]
        fn conjugacy_invariance(t in h_point(), x in word(), k in 0usize..6, g in prop::array::uniform3(-2.0f64..2.0)) {
            let h = holonomy_from_lengths(&t, 1e-9).unwrap();
            let base = word_trace(&h, &x);
            let (tv, _) = h.trace_with_error(&x);
            let tol = 1e-12 * (1.0 + tv.abs.to_f64());
            prop_assert!((word_trace(&h, &x.rotated(k)) - base).abs() <= tol);
            // G = [[1 + |g0|, g1], [g2, (1 + g1 g2) / (1 + |g0|)]] has determinant one
            let g00 = 1.0 + g[0].abs();
            let gm = ScaledMatrix::from_f64([g00, g[1], g[2], (1.0 + g[1] * g[2]) / g00]);
            let hc = h.conjugated(&gm);
            let (_, err) = h.trace_with_error(&x);
            let (_, err_c) = hc.trace_with_error(&x);
            prop_assert!((word_trace(&hc, &x) - base).abs() <= tol + err + err_c);
        }

        #[test]
        fn theta_identity(t in h_point()) {
            let back = theta_roundtrip(&t, 1e-9).unwrap();
            for (x, y) in back.to_array().iter().zip(t.to_array()) {
                prop_assert!((x - y).abs() <= 1e-9 * (1.0 + y), "{} vs {}", x, y);
            }
        }

        #[test]
        fn limit_is_homogeneous(x in -50.0f64..50.0, y in -50.0f64..50.0, s in 0.0f64..20.0, word in word()) {
            let (pp, qq) = word.abelianization();
            prop_assume!(pp.abs() <= 3 && qq.abs() <= 3);
            let p = CollarParams::new(x, y);
            let f = foliation_half_length(&p, &word).unwrap();
            let fs = foliation_half_length(&p.scaled(s), &word).unwrap();
            prop_assert!((fs - s * f).abs() <= 1e-12 * (1.0 + s * f));
        }
    }
}
