//! `convert`, `solve`, `cross-section` and `limit`.

use collar_core::converters::{
    cp_to_dt, cp_to_fn, dt_to_cp, dt_to_triangle, fn_to_cp, fn_to_triangle, DehnThurston,
    FenchelNielsen,
};
use collar_core::geometry::{
    cross_section, delta_defect, invert_pi_delta, invert_pi_h, project_pi, relative_collar_residual,
};
use collar_core::holonomy::{foliation_half_length, ray_limit_experiment};
use collar_core::word::TorusWord;
use collar_core::{CollarParams, Error, Tolerance, TriangleLengths};
use serde_json::{json, Map, Value};

use crate::error::CliError;
use crate::output::{num, Cell, Report, Table};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum System {
    /// Fenchel-Nielsen (2l, 2t)
    Fn,
    /// Dehn-Thurston (2l, 2t)
    Dt,
    /// Collar parameters (x, y)
    Cp,
    /// Triangle lengths on the collar surface (a, b, c)
    #[value(name = "tri-h")]
    TriH,
    /// Triangle lengths on the cone (a, b, c)
    #[value(name = "tri-d")]
    TriD,
}

impl System {
    pub fn name(self) -> &'static str {
        match self {
            System::Fn => "fn",
            System::Dt => "dt",
            System::Cp => "cp",
            System::TriH => "tri-h",
            System::TriD => "tri-d",
        }
    }

    fn fields(self) -> &'static [&'static str] {
        match self {
            System::Fn | System::Dt => &["two_ell", "two_tau"],
            System::Cp => &["x", "y"],
            System::TriH | System::TriD => &["a", "b", "c"],
        }
    }
}

pub fn tolerance_json(tol: &Tolerance) -> Value {
    json!({ "abs_tol": num(tol.abs_tol), "rel_tol": num(tol.rel_tol), "max_iter": tol.max_iter })
}

fn triangle_json(t: &TriangleLengths) -> Value {
    json!({ "a": num(t.a), "b": num(t.b), "c": num(t.c) })
}

fn named(fields: &[&str], values: &[f64]) -> Value {
    let m: Map<String, Value> = fields
        .iter()
        .zip(values)
        .map(|(k, v)| (k.to_string(), num(*v)))
        .collect();
    Value::Object(m)
}

/// Shared by the records of `convert` and `solve`: a key/value table.
fn flat_table(rows: &[(&str, f64)]) -> Table {
    let mut t = Table::new(vec!["field", "value"]);
    for (k, v) in rows {
        t.push(vec![Cell::from(*k), Cell::Num(*v)]);
    }
    t
}

fn to_cp(from: System, v: &[f64], tol: &Tolerance) -> Result<CollarParams, Error> {
    Ok(match from {
        System::Fn => fn_to_cp(&FenchelNielsen::new(v[0], v[1]))?,
        System::Dt => dt_to_cp(&DehnThurston::new(v[0], v[1]))?,
        System::Cp => CollarParams::new(v[0], v[1]),
        System::TriH => {
            let t = TriangleLengths::new(v[0], v[1], v[2]);
            if !t.in_h(tol.abs_tol.max(1e-12)) {
                return Err(Error::NotOnH(relative_collar_residual(&t)));
            }
            project_pi(&t)
        }
        System::TriD => {
            let t = TriangleLengths::new(v[0], v[1], v[2]);
            if !t.in_delta(tol.abs_tol.max(1e-12)) {
                return Err(Error::NotInDelta(delta_defect(&t)));
            }
            project_pi(&t)
        }
    })
}

fn from_cp(to: System, p: &CollarParams, tol: &Tolerance) -> Result<Vec<f64>, Error> {
    Ok(match to {
        System::Fn => {
            let f = cp_to_fn(p, tol)?;
            vec![f.two_ell, f.two_tau]
        }
        System::Dt => {
            let d = cp_to_dt(p)?;
            vec![d.two_ell, d.two_tau]
        }
        System::Cp => vec![p.x, p.y],
        System::TriH => invert_pi_h(p, tol)?.to_array().to_vec(),
        System::TriD => invert_pi_delta(p).to_array().to_vec(),
    })
}

pub fn convert(
    from: System,
    to: System,
    values: &[f64],
    tol: &Tolerance,
) -> Result<Report, CliError> {
    let need = from.fields().len();
    if values.len() != need {
        return Err(CliError::Usage(format!(
            "{} takes {need} values, got {}",
            from.name(),
            values.len()
        )));
    }
    if values.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite.into());
    }
    let p = to_cp(from, values, tol)?;
    // direct routes avoid a solve where a closed form exists
    let out = match (from, to) {
        (a, b) if a == b => values.to_vec(),
        (System::Fn, System::TriH) => fn_to_triangle(&FenchelNielsen::new(values[0], values[1]))?
            .to_array()
            .to_vec(),
        (System::Dt, System::TriD) => dt_to_triangle(&DehnThurston::new(values[0], values[1]))?
            .to_array()
            .to_vec(),
        _ => from_cp(to, &p, tol)?,
    };
    let tri_h = match from {
        System::Fn => fn_to_triangle(&FenchelNielsen::new(values[0], values[1]))?,
        System::TriH => TriangleLengths::new(values[0], values[1], values[2]),
        _ => invert_pi_h(&p, tol)?,
    };
    let tri_d = invert_pi_delta(&p);
    let collar_res = relative_collar_residual(&tri_h);
    let delta_res = delta_defect(&tri_d);

    let json = json!({
        "command": "convert",
        "from": from.name(),
        "to": to.name(),
        "input": named(from.fields(), values),
        "output": named(to.fields(), &out),
        "collar_params": { "x": num(p.x), "y": num(p.y) },
        "diagnostics": {
            "collar_residual": num(collar_res),
            "delta_residual": num(delta_res),
        },
        "tolerance": tolerance_json(tol),
    });
    let mut rows: Vec<(&str, f64)> = to
        .fields()
        .iter()
        .copied()
        .zip(out.iter().copied())
        .collect();
    rows.push(("collar_residual", collar_res));
    rows.push(("delta_residual", delta_res));
    Ok(Report {
        json,
        table: flat_table(&rows),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Surface {
    #[value(name = "H", alias = "h")]
    H,
    #[value(name = "Delta", alias = "delta")]
    Delta,
}

pub fn solve(surface: Surface, x: f64, y: f64, tol: &Tolerance) -> Result<Report, CliError> {
    let p = CollarParams::new(x, y);
    if !p.is_finite() {
        return Err(Error::NonFinite.into());
    }
    let d = invert_pi_delta(&p);
    let (json, table) = match surface {
        Surface::Delta => {
            let back = project_pi(&d);
            let res = (back.x - x).abs().max((back.y - y).abs());
            let json = json!({
                "command": "solve",
                "surface": "Delta",
                "params": { "x": num(x), "y": num(y) },
                "triangle": triangle_json(&d),
                "residuals": { "delta": num(delta_defect(&d)), "projection": num(res) },
                "tolerance": tolerance_json(tol),
            });
            let rows = [
                ("a", d.a),
                ("b", d.b),
                ("c", d.c),
                ("delta_residual", delta_defect(&d)),
                ("projection_residual", res),
            ];
            (json, flat_table(&rows))
        }
        Surface::H => {
            let h = invert_pi_h(&p, tol)?;
            let back = project_pi(&h);
            let res = (back.x - x).abs().max((back.y - y).abs());
            let diff = [h.a - d.a, h.b - d.b, h.c - d.c];
            let json = json!({
                "command": "solve",
                "surface": "H",
                "params": { "x": num(x), "y": num(y) },
                "triangle": triangle_json(&h),
                "delta_triangle": triangle_json(&d),
                "h_minus_delta": { "a": num(diff[0]), "b": num(diff[1]), "c": num(diff[2]) },
                "exceeds_delta": diff.iter().all(|v| *v > 0.0),
                "residuals": { "collar": num(relative_collar_residual(&h)), "projection": num(res) },
                "tolerance": tolerance_json(tol),
            });
            let rows = [
                ("a", h.a),
                ("b", h.b),
                ("c", h.c),
                ("delta_a", d.a),
                ("delta_b", d.b),
                ("delta_c", d.c),
                ("collar_residual", relative_collar_residual(&h)),
                ("projection_residual", res),
            ];
            (json, flat_table(&rows))
        }
    };
    Ok(Report { json, table })
}

pub fn cross_section_cmd(level: f64, n: usize, tol: &Tolerance) -> Result<Report, CliError> {
    if level.is_nan() || level <= 2.0 {
        return Err(Error::EmptySection(level).into());
    }
    let pts = cross_section(level, n, tol)?;
    let mut table = Table::new(vec!["index", "x", "y"]);
    for (i, p) in pts.iter().enumerate() {
        table.push(vec![Cell::Int(i as i64), Cell::Num(p.x), Cell::Num(p.y)]);
    }
    let json = json!({
        "command": "cross-section",
        "level": num(level),
        "n": n,
        "closed": true,
        "points": pts.iter().map(|p| json!([num(p.x), num(p.y)])).collect::<Vec<_>>(),
        "tolerance": tolerance_json(tol),
    });
    Ok(Report { json, table })
}

pub fn limit(x: f64, y: f64, word: &str, ts: &[f64], tol: &Tolerance) -> Result<Report, CliError> {
    let w = TorusWord::parse(word)?;
    let p = CollarParams::new(x, y);
    let prediction = match foliation_half_length(&p, &w) {
        Ok(v) => Some(v),
        Err(Error::UnsupportedWord(..)) => None,
        Err(e) => return Err(e.into()),
    };
    let rows = ray_limit_experiment(&p, &w, ts, tol)?;
    let mut table = Table::new(vec!["t", "normalized", "prediction", "gap", "status"]);
    let mut records = Vec::new();
    for r in &rows {
        let gap = r.normalized.zip(prediction).map(|(v, f)| (v - f).abs());
        let status = if r.normalized.is_some() {
            "ok"
        } else {
            "not_hyperbolic"
        };
        table.push(vec![
            Cell::Num(r.t),
            r.normalized.into(),
            prediction.into(),
            gap.into(),
            Cell::from(status),
        ]);
        records.push(json!({
            "t": num(r.t),
            "normalized": r.normalized.map_or(Value::Null, num),
            "gap": gap.map_or(Value::Null, num),
            "status": status,
        }));
    }
    let json = json!({
        "command": "limit",
        "params": { "x": num(x), "y": num(y) },
        "word": w.to_string(),
        "abelianization": [w.abelianization().0, w.abelianization().1],
        "prediction": prediction.map_or(Value::Null, num),
        "rows": records,
        "tolerance": tolerance_json(tol),
    });
    Ok(Report { json, table })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn convert_examples() {
        let r = convert(System::Dt, System::Cp, &[6.0, 2.0], &tol()).unwrap();
        assert_eq!(r.json["output"]["x"].as_f64(), Some(6.0));
        assert_eq!(r.json["output"]["y"].as_f64(), Some(-2.0));

        let r = convert(System::Fn, System::Cp, &[2.0, 0.0], &tol()).unwrap();
        assert!((r.json["output"]["x"].as_f64().unwrap() + 0.20769024400863478).abs() < 1e-12);
        assert!((r.json["output"]["y"].as_f64().unwrap() + 1.1199429123874159).abs() < 1e-12);

        let r = convert(System::Cp, System::Cp, &[1.0, 1.0], &tol()).unwrap();
        assert_eq!(r.json["output"]["x"].as_f64(), Some(1.0));
        assert_eq!(r.json["output"]["y"].as_f64(), Some(1.0));

        assert!(matches!(
            convert(System::Fn, System::Cp, &[-1.0, 0.0], &tol()),
            Err(CliError::Core(Error::NonPositiveLength(_)))
        ));
        assert!(matches!(
            convert(System::Cp, System::Fn, &[1.0], &tol()),
            Err(CliError::Usage(_))
        ));
        assert!(convert(System::TriH, System::Cp, &[1.0, 1.0, 1.0], &tol()).is_err());
    }

    #[test]
    fn solve_examples() {
        let r = solve(Surface::H, 0.0, 0.0, &tol()).unwrap();
        for k in ["a", "b", "c"] {
            assert!((r.json["triangle"][k].as_f64().unwrap() - 1.5f64.acosh()).abs() < 1e-14);
        }
        let r = solve(Surface::Delta, 6.0, -2.0, &tol()).unwrap();
        assert_eq!(r.json["triangle"], json!({ "a": 3.0, "b": 1.0, "c": 2.0 }));
        let r = solve(Surface::H, 6.0, -2.0, &tol()).unwrap();
        assert_eq!(r.json["exceeds_delta"], json!(true));
    }

    #[test]
    fn cross_section_examples() {
        assert_eq!(
            cross_section_cmd(3.0, 64, &tol()).unwrap().table.rows.len(),
            64
        );
        assert_eq!(
            cross_section_cmd(5.0, 4, &tol()).unwrap().table.rows.len(),
            4
        );
        assert!(matches!(
            cross_section_cmd(2.0, 64, &tol()),
            Err(CliError::Core(Error::EmptySection(_)))
        ));
    }

    #[test]
    fn limit_examples() {
        let r = limit(6.0, -2.0, "b", &[1.0, 10.0, 100.0, 1000.0], &tol()).unwrap();
        let pred = r.json["prediction"].as_f64().unwrap();
        let last = r.json["rows"][3]["gap"].as_f64().unwrap();
        assert!(last < 0.01 * pred);
        let r = limit(6.0, -2.0, "abAB", &[1.0, 10.0], &tol()).unwrap();
        assert!(r.json["rows"]
            .as_array()
            .unwrap()
            .iter()
            .all(|x| x["status"] == "not_hyperbolic"));
        assert!(limit(0.0, 0.0, "a", &[1.0], &tol()).is_err());
        assert!(matches!(
            limit(1.0, 0.0, "ax", &[1.0], &tol()),
            Err(CliError::Core(Error::ParseWord('x')))
        ));
    }
}
