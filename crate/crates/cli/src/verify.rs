//! Seeded property suites behind `collar verify`.

use std::f64::consts::TAU;

use collar_core::converters::{
    cp_to_fn, dt_to_cp, fn_dt_degeneration_gap, fn_to_cp, fn_to_triangle, DehnThurston,
    FenchelNielsen,
};
use collar_core::geometry::{
    collar_residual, invert_pi_delta, invert_pi_h, project_pi, relative_collar_residual,
};
use collar_core::holonomy::{
    foliation_half_length, holonomy_from_lengths, holonomy_from_positive_lengths,
    ray_limit_experiment, theta_roundtrip, word_trace,
};
use collar_core::metric::CollarMetric;
use collar_core::word::TorusWord;
use collar_core::{CollarParams, Error, Tolerance, TriangleLengths};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::commands::tolerance_json;
use crate::output::{num, Cell, Report, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    Metric,
    Traces,
    Roundtrip,
    Limits,
    All,
}

impl Suite {
    fn name(self) -> &'static str {
        match self {
            Suite::Metric => "metric",
            Suite::Traces => "traces",
            Suite::Roundtrip => "roundtrip",
            Suite::Limits => "limits",
            Suite::All => "all",
        }
    }
}

/// One property: the worst residual seen against its threshold.
#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub suite: &'static str,
    pub name: &'static str,
    pub cases: usize,
    pub worst: f64,
    pub threshold: f64,
    pub passed: bool,
}

struct Tracker {
    suite: &'static str,
    name: &'static str,
    threshold: f64,
    cases: usize,
    worst: f64,
    failed: bool,
}

impl Tracker {
    fn new(suite: &'static str, name: &'static str, threshold: f64) -> Self {
        Tracker {
            suite,
            name,
            threshold,
            cases: 0,
            worst: 0.0,
            failed: false,
        }
    }

    /// Records a residual that must not exceed the threshold.
    fn record(&mut self, residual: f64) {
        self.cases += 1;
        if residual.is_nan() || residual > self.threshold {
            self.failed = true;
        }
        if residual.is_nan() || residual > self.worst {
            self.worst = residual;
        }
    }

    fn fail(&mut self) {
        self.cases += 1;
        self.failed = true;
        self.worst = f64::INFINITY;
    }

    fn finish(self) -> Check {
        Check {
            suite: self.suite,
            name: self.name,
            cases: self.cases,
            worst: self.worst,
            threshold: self.threshold,
            passed: !self.failed && self.cases > 0,
        }
    }
}

fn polar(rng: &mut ChaCha8Rng, r_max: f64) -> CollarParams {
    let r = rng.gen_range(0.0..r_max);
    let th = rng.gen_range(0.0..TAU);
    CollarParams::new(r * th.cos(), r * th.sin())
}

fn h_point(rng: &mut ChaCha8Rng, r_max: f64, tol: &Tolerance) -> Result<TriangleLengths, Error> {
    invert_pi_h(&polar(rng, r_max), tol)
}

fn metric_suite(rng: &mut ChaCha8Rng, n: usize, tol: &Tolerance) -> Vec<Check> {
    let s = "metric";
    let mut curv = Tracker::new(s, "curvature_minus_one", 1e-3);
    let mut cmp = Tracker::new(s, "comparison_bound", 2.0);
    let mut boundary = Tracker::new(s, "boundary_length", 1e-9);
    let mut depth = Tracker::new(s, "depth", 1e-3);
    for i in 0..n {
        let m = match h_point(rng, 20.0, tol).and_then(|t| CollarMetric::new(t, 1e-9)) {
            Ok(m) => m,
            Err(_) => {
                curv.fail();
                continue;
            }
        };
        for _ in 0..10 {
            let y = rng.gen_range(-0.9..0.9);
            match m.gaussian_curvature(y, 1e-3) {
                Ok(k) => curv.record((k + 1.0).abs()),
                Err(_) => curv.fail(),
            }
        }
        let a = m.lengths().a;
        let want = 2.0 * a / a.tanh();
        match m.curve_length(&[(0.0, 1.0), (2.0, 1.0)], 64) {
            Ok(l) => boundary.record((l - want).abs() / want.max(1.0)),
            Err(_) => boundary.fail(),
        }
        if i < 20 {
            match m.depth_check(256) {
                Ok(d) => depth.record((d - m.kappa()).abs()),
                Err(_) => depth.fail(),
            }
        }
    }
    for _ in 0..n {
        let y = rng.gen_range(-1.0..=1.0);
        match h_point(rng, 1e3, tol).and_then(|t| CollarMetric::new(t, 1e-9)) {
            Ok(m) => cmp.record(m.comparison_defect(y)),
            Err(_) => cmp.fail(),
        }
    }
    vec![
        curv.finish(),
        cmp.finish(),
        boundary.finish(),
        depth.finish(),
    ]
}

fn traces_suite(rng: &mut ChaCha8Rng, n: usize, tol: &Tolerance) -> Vec<Check> {
    let s = "traces";
    let mut fricke = Tracker::new(s, "commutator_identity", 1e-8);
    let mut parabolic = Tracker::new(s, "commutator_parabolic", 1e-9);
    let mut targets = Tracker::new(s, "trace_targets", 1e-10);
    let comm = TorusWord::commutator();
    let (wa, wb, wab) = (
        TorusWord::parse("a"),
        TorusWord::parse("b"),
        TorusWord::parse("ab"),
    );
    let (wa, wb, wab) = (wa.unwrap(), wb.unwrap(), wab.unwrap());
    for _ in 0..n {
        let t = TriangleLengths::new(
            rng.gen_range(0.01..4.0),
            rng.gen_range(0.0..4.0),
            rng.gen_range(0.0..4.0),
        );
        match (holonomy_from_positive_lengths(&t), collar_residual(&t)) {
            (Ok(h), Ok(r)) => {
                let scale = 4.0 * (1.0 + t.a.cosh() * t.b.cosh() * t.c.cosh());
                fricke.record((word_trace(&h, &comm) + 2.0 - 4.0 * r).abs() / scale);
            }
            _ => fricke.fail(),
        }
        match h_point(rng, 3.0, tol).and_then(|t| holonomy_from_lengths(&t, 1e-9)) {
            Ok(h) => parabolic.record((word_trace(&h, &comm) + 2.0).abs()),
            Err(_) => parabolic.fail(),
        }
        match h_point(rng, 8.0, tol).and_then(|t| holonomy_from_lengths(&t, 1e-9).map(|h| (t, h))) {
            Ok((t, h)) => {
                let gap = (word_trace(&h, &wa) - 2.0 * t.a.cosh()).abs()
                    + (word_trace(&h, &wb) - 2.0 * t.b.cosh()).abs()
                    + (word_trace(&h, &wab) - 2.0 * t.c.cosh()).abs();
                targets.record(gap / (1.0 + 2.0 * t.c.cosh()));
            }
            Err(_) => targets.fail(),
        }
    }
    vec![fricke.finish(), parabolic.finish(), targets.finish()]
}

fn roundtrip_suite(rng: &mut ChaCha8Rng, n: usize, tol: &Tolerance) -> Vec<Check> {
    let s = "roundtrip";
    let mut pi_h = Tracker::new(s, "pi_h_roundtrip", 1e-9);
    let mut pi_d = Tracker::new(s, "pi_delta_roundtrip_exact", 0.0);
    let mut fn_h = Tracker::new(s, "fn_on_collar_surface", 1e-10);
    let mut fn_rt = Tracker::new(s, "fn_roundtrip", 1e-8);
    let mut theta = Tracker::new(s, "theta_roundtrip", 1e-9);
    for _ in 0..n {
        let p = polar(rng, 1e4);
        match invert_pi_h(&p, tol) {
            Ok(t) => {
                let q = project_pi(&t);
                pi_h.record((q.x - p.x).abs().max((q.y - p.y).abs()));
            }
            Err(_) => pi_h.fail(),
        }
        // dyadic grid: every region formula is exact there
        let p = CollarParams::new(
            (rng.gen_range(-1e4..1e4) * 64.0f64).round() / 64.0,
            (rng.gen_range(-1e4..1e4) * 64.0f64).round() / 64.0,
        );
        let q = project_pi(&invert_pi_delta(&p));
        pi_d.record((q.x - p.x).abs().max((q.y - p.y).abs()));

        let f = FenchelNielsen::from_halves(rng.gen_range(1e-3..=5.0), rng.gen_range(-5.0..=5.0));
        match fn_to_triangle(&f) {
            Ok(t) => fn_h.record(relative_collar_residual(&t)),
            Err(_) => fn_h.fail(),
        }
        match fn_to_cp(&f).and_then(|p| cp_to_fn(&p, tol)) {
            Ok(g) => fn_rt.record((g.ell() - f.ell()).abs().max((g.tau() - f.tau()).abs())),
            Err(_) => fn_rt.fail(),
        }
        match h_point(rng, 10.0, tol).and_then(|t| theta_roundtrip(&t, 1e-9).map(|b| (t, b))) {
            Ok((t, b)) => {
                let worst = t
                    .to_array()
                    .iter()
                    .zip(b.to_array())
                    .map(|(x, y)| (x - y).abs() / (1.0 + x))
                    .fold(0.0, f64::max);
                theta.record(worst);
            }
            Err(_) => theta.fail(),
        }
    }
    vec![
        pi_h.finish(),
        pi_d.finish(),
        fn_h.finish(),
        fn_rt.finish(),
        theta.finish(),
    ]
}

/// Ray limits at `t = 1, 10, 100, 1000`: the last value within 1% of the
/// foliation prediction, and non-increasing successive gaps (up to a few
/// ulps once converged).
fn limits_suite(rng: &mut ChaCha8Rng, n: usize, tol: &Tolerance) -> Vec<Check> {
    let s = "limits";
    let mut limit = Tracker::new(s, "ray_limit_relative_gap", 0.01);
    let mut cauchy = Tracker::new(s, "cauchy_gaps_non_increasing", 0.0);
    let mut degen = Tracker::new(s, "fn_dt_degeneration", 0.01);
    let ts = [1.0, 10.0, 100.0, 1000.0];
    let words: Vec<TorusWord> = ["a", "b", "ab"]
        .iter()
        .map(|w| TorusWord::parse(w).unwrap())
        .collect();
    for _ in 0..n.min(10) {
        let th = rng.gen_range(0.0..TAU);
        let r = rng.gen_range(1.0..10.0);
        let p = CollarParams::new(r * th.cos(), r * th.sin());
        for w in &words {
            let rows = ray_limit_experiment(&p, w, &ts, tol);
            let pred = foliation_half_length(&p, w);
            let (Ok(rows), Ok(pred)) = (rows, pred) else {
                limit.fail();
                continue;
            };
            let Some(v) = rows
                .iter()
                .map(|r| r.normalized)
                .collect::<Option<Vec<f64>>>()
            else {
                limit.fail();
                continue;
            };
            limit.record((v[3] - pred).abs() / pred);
            let gaps: Vec<f64> = v.windows(2).map(|s| (s[1] - s[0]).abs()).collect();
            // converged values carry a few ulps of noise from ln(tr) ~ t
            let slack = 64.0 * f64::EPSILON * v.iter().cloned().fold(pred, f64::max);
            let excess = gaps
                .windows(2)
                .map(|g| g[1] - g[0] - slack)
                .fold(f64::NEG_INFINITY, f64::max);
            cauchy.record(excess.max(0.0));
        }
    }
    for _ in 0..n.min(100) {
        let (l0, t0) = (rng.gen_range(0.5..5.0), rng.gen_range(-5.0..5.0));
        let t = 100.0;
        let gap = fn_dt_degeneration_gap(&FenchelNielsen::from_halves(t * l0, t * t0));
        let base = dt_to_cp(&DehnThurston::from_halves(l0, t0));
        match (gap, base) {
            (Ok(g), Ok(b)) => degen.record(g / (b.x.hypot(b.y) * t)),
            _ => degen.fail(),
        }
    }
    vec![limit.finish(), cauchy.finish(), degen.finish()]
}

pub fn run_suites(suite: Suite, seed: u64, cases: usize, tol: &Tolerance) -> Vec<Check> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    let all = suite == Suite::All;
    if all || suite == Suite::Metric {
        out.extend(metric_suite(&mut rng, cases, tol));
    }
    if all || suite == Suite::Traces {
        out.extend(traces_suite(&mut rng, cases, tol));
    }
    if all || suite == Suite::Roundtrip {
        out.extend(roundtrip_suite(&mut rng, cases, tol));
    }
    if all || suite == Suite::Limits {
        out.extend(limits_suite(&mut rng, cases, tol));
    }
    out
}

pub fn verify(suite: Suite, seed: u64, cases: usize, tol: &Tolerance) -> (Report, bool) {
    let checks = run_suites(suite, seed, cases, tol);
    let passed = checks.iter().all(|c| c.passed);
    let mut table = Table::new(vec![
        "suite",
        "property",
        "passed",
        "cases",
        "worst",
        "threshold",
    ]);
    for c in &checks {
        table.push(vec![
            Cell::from(c.suite),
            Cell::from(c.name),
            Cell::from(if c.passed { "true" } else { "false" }),
            Cell::Int(c.cases as i64),
            Cell::Num(c.worst),
            Cell::Num(c.threshold),
        ]);
    }
    let json = json!({
        "command": "verify",
        "suite": suite.name(),
        "seed": seed,
        "cases": cases,
        "passed": passed,
        "properties": checks.iter().map(|c| json!({
            "suite": c.suite,
            "name": c.name,
            "passed": c.passed,
            "cases": c.cases,
            "worst": num(c.worst),
            "threshold": num(c.threshold),
        })).collect::<Vec<_>>(),
        "tolerance": tolerance_json(tol),
    });
    (Report { json, table }, passed)
}
