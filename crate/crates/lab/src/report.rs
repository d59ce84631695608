//! JSON and CSV renderings of suites, sweeps and spectra.

use isobound_core::explorer::{MinSlack, SweepRow};
use isobound_core::inequalities::{CheckEntry, CheckParams, SuiteReport};
use isobound_core::spectra::{BallLevel, Diagnostics, SpectrumResult};
use isobound_core::{GeoSummary, SolverConfig};
use serde_json::{json, Map, Number, Value};

use crate::error::Result;

pub const SCHEMA_VERSION: u32 = 1;
pub const CSV_HEADER: [&str; 8] = ["param", "check_id", "lhs", "rhs", "slack", "rel_slack", "err", "status"];

/// Rounds to 12 significant digits; non-finite values become `null`.
pub fn num(v: f64) -> Value {
    if !v.is_finite() {
        return Value::Null;
    }
    let rounded: f64 = format!("{v:.11e}").parse().unwrap_or(v);
    Number::from_f64(rounded).map_or(Value::Null, Value::Number)
}

pub fn nums(v: &[f64]) -> Value {
    Value::Array(v.iter().map(|x| num(*x)).collect())
}

/// Text form of a number for CSV cells, same rounding as [`num`].
pub fn cell(v: f64) -> String {
    match num(v) {
        Value::Number(n) => n.to_string(),
        _ => v.to_string(),
    }
}

pub fn solver_json(cfg: &SolverConfig) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("order".into(), json!(cfg.order));
    m.insert("boundary_nodes".into(), json!(cfg.boundary_nodes));
    m.insert("interior_theta".into(), json!(cfg.interior_theta));
    m.insert("interior_radial".into(), json!(cfg.interior_radial));
    m.insert("eps_b".into(), num(cfg.eps_b));
    m.insert("eps_c".into(), num(cfg.eps_c));
    m.insert("count".into(), json!(cfg.count));
    m.insert("estimate".into(), json!(cfg.estimate));
    m
}

pub fn params_json(p: &CheckParams) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("beta".into(), num(p.beta));
    m.insert("tau".into(), num(p.tau));
    m.insert("rho".into(), json!(p.rho.to_string()));
    m
}

pub fn geometry_json(g: &GeoSummary) -> Value {
    json!({
        "dim": g.dim,
        "volume": num(g.volume),
        "boundary_measure": num(g.boundary_measure),
        "volume_centroid": nums(&g.volume_centroid),
        "boundary_centroid": nums(&g.boundary_centroid),
        "moments": nums(&g.moments),
        "boundary_moments": nums(&g.boundary_moments),
        "curvature_energy": num(g.curvature_energy),
        "convex": g.convex,
        "length_scale": num(g.length_scale),
    })
}

fn diagnostics_json(d: &Diagnostics) -> Value {
    json!({
        "trial_dim": d.trial_dim,
        "constrained_dim": d.constrained_dim,
        "retained_rank": d.retained_rank,
        "condensed_rank": d.condensed_rank,
        "b_condition": num(d.b_condition),
        "constraint_residual": num(d.constraint_residual),
    })
}

pub fn spectrum_json(s: &SpectrumResult) -> Value {
    json!({
        "problem": s.problem.to_string(),
        "domain": s.domain,
        "eigenvalues": nums(&s.eigenvalues),
        "error_estimate": nums(&s.error_estimate),
        "diagnostics": diagnostics_json(&s.diagnostics),
    })
}

pub fn check_json(e: &CheckEntry) -> Value {
    match &e.outcome {
        Ok(r) => json!({
            "id": r.id.as_str(),
            "lhs": num(r.lhs),
            "rhs": num(r.rhs),
            "slack": num(r.slack),
            "rel_slack": num(r.rel_slack),
            "err": num(r.err),
            "status": r.status.as_str(),
            "conjecture": r.conjecture,
        }),
        Err(err) => json!({
            "id": e.id.as_str(),
            "lhs": null,
            "rhs": null,
            "slack": null,
            "rel_slack": null,
            "err": null,
            "status": "error",
            "conjecture": null,
            "error": err.to_string(),
        }),
    }
}

/// The suite report document. `config` is written first, as given.
pub fn suite_json(config: Map<String, Value>, report: &SuiteReport) -> Value {
    json!({
        "version": SCHEMA_VERSION,
        "config": Value::Object(config),
        "geometry": geometry_json(&report.geometry),
        "spectra": report.spectra.iter().map(|(_, s)| spectrum_json(s)).collect::<Vec<_>>(),
        "checks": report.checks.iter().map(check_json).collect::<Vec<_>>(),
    })
}

pub fn ball_json(config: Map<String, Value>, levels: &[BallLevel]) -> Value {
    let rows: Vec<Value> =
        levels.iter().map(|l| json!({"k": l.k, "value": num(l.value), "multiplicity": l.multiplicity})).collect();
    json!({"version": SCHEMA_VERSION, "config": Value::Object(config), "levels": rows})
}

pub fn min_slack_json(m: &MinSlack) -> Value {
    json!({
        "check": m.report.id.as_str(),
        "param": num(m.param),
        "slack": num(m.slack),
        "non_unimodal": m.non_unimodal,
        "evaluations": m.evaluations,
        "report": check_json(&CheckEntry { id: m.report.id, outcome: Ok(m.report.clone()) }),
    })
}

fn entry_record(param: &str, e: &CheckEntry) -> Vec<String> {
    match &e.outcome {
        Ok(r) => vec![
            param.to_string(),
            r.id.as_str().to_string(),
            cell(r.lhs),
            cell(r.rhs),
            cell(r.slack),
            cell(r.rel_slack),
            cell(r.err),
            r.status.as_str().to_string(),
        ],
        Err(_) => {
            let mut v = vec![param.to_string(), e.id.as_str().to_string()];
            v.extend(std::iter::repeat_n(String::new(), 5));
            v.push("error".into());
            v
        }
    }
}

/// One CSV row per (instance, check).
pub fn sweep_csv(rows: &[SweepRow], checks: &[isobound_core::CheckId]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for row in rows {
        let param = cell(row.param);
        match &row.checks {
            Ok(entries) => {
                for e in entries {
                    w.write_record(entry_record(&param, e))?;
                }
            }
            Err(err) => {
                for id in checks {
                    let e = CheckEntry { id: *id, outcome: Err(err.clone()) };
                    w.write_record(entry_record(&param, &e))?;
                }
            }
        }
    }
    Ok(finish(w))
}

pub fn suite_csv(report: &SuiteReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CSV_HEADER)?;
    for e in &report.checks {
        w.write_record(entry_record("", e))?;
    }
    Ok(finish(w))
}

pub fn ball_csv(levels: &[BallLevel]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["k", "value", "multiplicity"])?;
    for l in levels {
        w.write_record([l.k.to_string(), cell(l.value), l.multiplicity.to_string()])?;
    }
    Ok(finish(w))
}

fn finish(w: csv::Writer<Vec<u8>>) -> String {
    let bytes = w.into_inner().expect("in-memory writer cannot fail");
    String::from_utf8(bytes).expect("csv output is utf-8")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounds_to_twelve_digits() {
        assert_eq!(num(1.0 / 3.0).to_string(), "0.333333333333");
        assert_eq!(num(2.0).to_string(), "2.0");
        assert_eq!(num(-1.234567890123456e-20).to_string(), "-1.23456789012e-20");
        assert_eq!(num(f64::NAN), Value::Null);
        assert_eq!(cell(1e300 * 10.0), "1e+301");
    }
}
