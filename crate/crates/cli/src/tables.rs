//! Coefficient tables and wide scenario tables.
//!
//! Coefficient table (also the `estimate` output):
//!
//! ```text
//! name,estimate,std_error,z_value,p_value
//! np,0.076,0.015,5.03,0.000
//! # log_likelihood=-300.1,n_observations=344,converged=true,iterations=5,gradient_norm=1e-9
//! ```
//!
//! Only `name` and `estimate` are required when reading; `std_error` is used
//! when present and `z_value`/`p_value` are ignored (they are derived).
//!
//! Scenario table (also the `design` output), one row per scenario:
//!
//! ```text
//! scenario_id,A_np,A_dist_m,A_smoke,A_fam,B_np,B_dist_m,B_smoke,B_fam,...
//! 1,0,6,0,1,10,3.6,1,0,...
//! # d_error=0.1234
//! ```
//!
//! Lines starting with `#` are comments.

use std::fs;
use std::path::Path;

use exitchoice::{EfficientDesign, ExitAttributes, InferenceRow, ModelFit, ModelSpec, ParameterVector, Scenario};

use crate::error::{CliError, Result};
use crate::format::{fmt_num, parse_flag, parse_num};

pub const INFERENCE_HEADER: [&str; 5] = ["name", "estimate", "std_error", "z_value", "p_value"];
const ATTRIBUTE_SUFFIXES: [&str; 4] = ["_np", "_dist_m", "_smoke", "_fam"];

/// Named coefficients with optional standard errors.
#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    pub spec: ModelSpec,
    pub estimates: ParameterVector,
    pub std_errors: Option<Vec<f64>>,
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).comment(Some(b'#')).from_reader(text.as_bytes())
}

pub fn read_coefficients(path: &Path) -> Result<CoefficientTable> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_coefficients(&text, path)
}

pub fn parse_coefficients(text: &str, path: &Path) -> Result<CoefficientTable> {
    let mut rdr = reader(text);
    let header = rdr.headers().map_err(|e| CliError::format(path, e.to_string()))?.clone();
    if header.get(0) != Some("name") || header.get(1) != Some("estimate") {
        return Err(CliError::line(path, 1, "header must start with `name,estimate`"));
    }
    let se_col = header.iter().position(|h| h == "std_error");
    let mut names = Vec::new();
    let mut estimates = Vec::new();
    let mut ses = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| CliError::line(path, e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |m: String| CliError::line(path, line, m);
        names.push(record.get(0).unwrap_or("").to_string());
        estimates.push(parse_num(record.get(1).unwrap_or("")).map_err(|m| bad(format!("estimate: {m}")))?);
        if let Some(c) = se_col {
            let se = parse_num(record.get(c).unwrap_or("")).map_err(|m| bad(format!("std_error: {m}")))?;
            if se <= 0.0 {
                return Err(bad(format!("std_error must be positive, got {se}")));
            }
            ses.push(se);
        }
    }
    if names.is_empty() {
        return Err(CliError::format(path, "no coefficients"));
    }
    let spec = ModelSpec::from_coefficient_names(&names).map_err(|e| CliError::format(path, e.to_string()))?;
    Ok(CoefficientTable { spec, estimates: ParameterVector::new(estimates), std_errors: se_col.map(|_| ses) })
}

/// Full-precision inference table with a summary footer.
pub fn render_inference(rows: &[InferenceRow], fit: &ModelFit) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(INFERENCE_HEADER).expect("in-memory write");
    for r in rows {
        w.write_record([
            r.name.clone(),
            fmt_num(r.estimate),
            fmt_num(r.std_error),
            fmt_num(r.z_value),
            fmt_num(r.p_value),
        ])
        .expect("in-memory write");
    }
    let mut out = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8");
    out.push_str(&format!(
        "# log_likelihood={},n_observations={},converged={},iterations={},gradient_norm={}\n",
        fmt_num(fit.log_likelihood),
        fit.n_observations,
        fit.converged,
        fit.iterations,
        fmt_num(fit.gradient_norm)
    ));
    out
}

pub fn read_scenarios(path: &Path) -> Result<Vec<Scenario>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_scenarios(&text, path)
}

pub fn parse_scenarios(text: &str, path: &Path) -> Result<Vec<Scenario>> {
    let mut rdr = reader(text);
    let header = rdr.headers().map_err(|e| CliError::format(path, e.to_string()))?.clone();
    if header.get(0) != Some("scenario_id") || header.len() < 9 || (header.len() - 1) % 4 != 0 {
        return Err(CliError::line(
            path,
            1,
            "header must be `scenario_id` followed by <label>_np,<label>_dist_m,<label>_smoke,<label>_fam per exit",
        ));
    }
    let cols: Vec<&str> = header.iter().skip(1).collect();
    let mut labels = Vec::new();
    for group in cols.chunks(4) {
        let label = group[0]
            .strip_suffix(ATTRIBUTE_SUFFIXES[0])
            .ok_or_else(|| CliError::line(path, 1, format!("expected <label>_np, got `{}`", group[0])))?;
        for (col, suffix) in group.iter().zip(ATTRIBUTE_SUFFIXES) {
            if col.strip_suffix(suffix) != Some(label) {
                return Err(CliError::line(path, 1, format!("expected `{label}{suffix}`, got `{col}`")));
            }
        }
        labels.push(label.to_string());
    }

    let mut out = Vec::new();
    for record in rdr.records() {
        let record = record.map_err(|e| CliError::line(path, e.position().map_or(0, |p| p.line()), e.to_string()))?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |m: String| CliError::line(path, line, m);
        let mut alternatives = Vec::new();
        for (i, label) in labels.iter().enumerate() {
            let f = |j: usize| record.get(1 + 4 * i + j).unwrap_or("");
            let np = parse_num(f(0)).map_err(|m| bad(format!("{label}_np: {m}")))?;
            let dist = parse_num(f(1)).map_err(|m| bad(format!("{label}_dist_m: {m}")))?;
            let smoke = parse_flag(f(2)).map_err(|m| bad(format!("{label}_smoke: {m}")))?;
            let fam = parse_flag(f(3)).map_err(|m| bad(format!("{label}_fam: {m}")))?;
            alternatives
                .push((label.clone(), ExitAttributes::new(np, dist, smoke, fam).map_err(|e| bad(e.to_string()))?));
        }
        out.push(Scenario::new(record.get(0).unwrap_or(""), alternatives).map_err(|e| bad(e.to_string()))?);
    }
    if out.is_empty() {
        return Err(CliError::format(path, "no scenarios"));
    }
    Ok(out)
}

/// Scenario table; every scenario must share the first scenario's exit labels.
pub fn render_scenarios(scenarios: &[Scenario], d_error: Option<f64>) -> Result<String> {
    let Some(first) = scenarios.first() else {
        return Err(CliError::Validation("no scenarios to write".into()));
    };
    let labels: Vec<&str> = first.labels().collect();
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["scenario_id".to_string()];
    for label in &labels {
        header.extend(ATTRIBUTE_SUFFIXES.iter().map(|s| format!("{label}{s}")));
    }
    w.write_record(&header).expect("in-memory write");
    for s in scenarios {
        if s.labels().ne(labels.iter().copied()) {
            return Err(CliError::Validation(format!(
                "scenario `{}` has different exits than the first scenario",
                s.id()
            )));
        }
        let mut row = vec![s.id().to_string()];
        for alt in s.alternatives() {
            let a = &alt.attributes;
            row.extend([
                fmt_num(a.np()),
                fmt_num(a.dist()),
                u8::from(a.smoke()).to_string(),
                u8::from(a.fam()).to_string(),
            ]);
        }
        w.write_record(&row).expect("in-memory write");
    }
    let mut out = String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8");
    if let Some(d) = d_error {
        out.push_str(&format!("# d_error={}\n", fmt_num(d)));
    }
    Ok(out)
}

pub fn render_design(design: &EfficientDesign) -> Result<String> {
    render_scenarios(&design.scenarios, Some(design.d_error))
}
