//! Linear measured foliations `|a dx ± b dy|` on the annulus and the case
//! split for standard foliations on a pair of pants.

use crate::error::{Error, Result};
use crate::geometry::{
    delta_defect, invert_pi_delta, invert_pi_h, CollarParams, Sign, TriangleLengths,
};
use crate::metric::{sym2_norm, CollarMetric};
use crate::tolerance::Tolerance;

/// The foliation by the kernel of the closed 1-form `ω = a dx ± b dy`,
/// with transverse measure `|ω|`. The sign is `+` when `c = a + b` and `-`
/// when `c = |a - b|`; the measures of `e1`, `e2` and `e1 + e2` are then
/// `a`, `b` and `c`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearFoliation {
    lengths: TriangleLengths,
    sign: Sign,
}

impl LinearFoliation {
    pub fn lengths(&self) -> TriangleLengths {
        self.lengths
    }

    pub fn sign(&self) -> Sign {
        self.sign
    }

    /// Coefficients `(ω(e1), ω(e2))`.
    pub fn form(&self) -> (f64, f64) {
        (self.lengths.a, self.sign.value() * self.lengths.b)
    }

    pub fn is_zero(&self) -> bool {
        self.lengths.a == 0.0 && self.lengths.b == 0.0
    }

    /// Unit tangent to the leaves. For the zero form the leaves are the
    /// horizontal circles.
    pub fn leaf_direction(&self) -> (f64, f64) {
        if self.is_zero() {
            return (1.0, 0.0);
        }
        let (p, q) = self.form();
        let n = p.hypot(q);
        (-q / n, p / n)
    }

    pub fn evaluate(&self, dx: f64, dy: f64) -> f64 {
        let (p, q) = self.form();
        p * dx + q * dy
    }

    /// Transverse measure of a polyline. `ω` has constant coefficients, so
    /// each straight piece contributes exactly `|ω(Δ)|`.
    pub fn transverse_measure(&self, path: &[(f64, f64)]) -> f64 {
        path.windows(2)
            .map(|s| self.evaluate(s[1].0 - s[0].0, s[1].1 - s[0].1).abs())
            .sum()
    }
}

/// The linear foliation with measures `(a, b, c)` on the sides `e1`, `e2`,
/// `e1 + e2`. `tol` is relative to `1 + a + b + c`.
pub fn foliation_from_lengths(t: &TriangleLengths, tol: f64) -> Result<LinearFoliation> {
    if !t.is_finite() {
        return Err(Error::NonFinite);
    }
    if !t.in_delta(tol) {
        return Err(Error::NotInDelta(delta_defect(t)));
    }
    let TriangleLengths { a, b, c } = *t;
    let sign = if (a + b - c).abs() <= ((a - b).abs() - c).abs() {
        Sign::Plus
    } else {
        Sign::Minus
    };
    Ok(LinearFoliation { lengths: *t, sign })
}

/// Transverse measures of the three boundary curves of a pair of pants.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShortsMeasures {
    pub m1: f64,
    pub m2: f64,
    pub m3: f64,
}

impl ShortsMeasures {
    pub fn new(m1: f64, m2: f64, m3: f64) -> Self {
        ShortsMeasures { m1, m2, m3 }
    }

    pub fn to_array(self) -> [f64; 3] {
        [self.m1, self.m2, self.m3]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ShortsTag {
    /// Strict triangle inequality.
    Interior,
    /// Largest equals the sum of the other two, all positive.
    DegenerateSum,
    /// Largest exceeds the sum of the other two, all positive.
    Dominant,
    /// Smallest is zero and the other two agree.
    PairEqualOneZero,
    /// Smallest is zero and the other two differ.
    PairUnequalOneZero,
    /// Exactly one positive measure.
    OnePositive,
    AllZero,
}

impl ShortsTag {
    pub fn as_str(self) -> &'static str {
        match self {
            ShortsTag::Interior => "INTERIOR",
            ShortsTag::DegenerateSum => "DEGENERATE_SUM",
            ShortsTag::Dominant => "DOMINANT",
            ShortsTag::PairEqualOneZero => "PAIR_EQUAL_ONE_ZERO",
            ShortsTag::PairUnequalOneZero => "PAIR_UNEQUAL_ONE_ZERO",
            ShortsTag::OnePositive => "ONE_POSITIVE",
            ShortsTag::AllZero => "ALL_ZERO",
        }
    }
}

impl std::fmt::Display for ShortsTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `permutation[k]` is the input index (0-based) of the `k`-th largest
/// measure; ties keep input order.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ShortsCase {
    pub tag: ShortsTag,
    pub permutation: [usize; 3],
}

// Equalities between positive measures allow a few ulps so that e.g.
// (0.3, 0.1, 0.2) counts as a degenerate sum.
const EQ_ULPS: f64 = 4.0 * f64::EPSILON;

pub fn classify_shorts(m: &ShortsMeasures) -> Result<ShortsCase> {
    let v = m.to_array();
    if v.iter().any(|x| x.is_nan()) {
        return Err(Error::NonFinite);
    }
    if let Some(&bad) = v.iter().find(|&&x| x < 0.0) {
        return Err(Error::NegativeMeasure(bad));
    }
    let mut permutation = [0, 1, 2];
    permutation.sort_by(|&i, &j| v[j].total_cmp(&v[i]));
    let [hi, mid, lo] = permutation.map(|i| v[i]);
    let close = |x: f64, y: f64| (x - y).abs() <= EQ_ULPS * x.abs().max(y.abs());

    let tag = if hi == 0.0 {
        ShortsTag::AllZero
    } else if mid == 0.0 {
        ShortsTag::OnePositive
    } else if lo == 0.0 {
        if close(hi, mid) {
            ShortsTag::PairEqualOneZero
        } else {
            ShortsTag::PairUnequalOneZero
        }
    } else if close(hi, mid + lo) {
        ShortsTag::DegenerateSum
    } else if hi > mid + lo {
        ShortsTag::Dominant
    } else {
        ShortsTag::Interior
    };
    Ok(ShortsCase { tag, permutation })
}

/// Boundary measures realized by the standard foliation of the given case.
/// These are the inputs themselves; the function exists so that gluing code
/// reads them from one place.
pub fn boundary_measures(_case: &ShortsCase, m: &ShortsMeasures) -> (f64, f64, f64) {
    (m.m1, m.m2, m.m3)
}

/// Operator-norm gap between the collar metric over `p` and the square of
/// the linear foliation over the same `p`, at height `y`.
pub fn annulus_defect_vs_metric(p: &CollarParams, y: f64, tol: &Tolerance) -> Result<f64> {
    let hyp = invert_pi_h(p, tol)?;
    let metric = CollarMetric::new(hyp, 1e-9)?;
    let mf = foliation_from_lengths(&invert_pi_delta(p), 1e-12)?;
    let g = metric.tensor_at(0.0, y)?;
    let (wa, wb) = mf.form();
    Ok(sym2_norm(g.e - wa * wa, g.f - wa * wb, g.g - wb * wb))
}
