//! Number parsing and printing shared by every file format.
//!
//! Parsing always uses `.` as the decimal separator regardless of locale.
//! Printing uses the shortest representation that round-trips exactly.

pub(crate) fn parse_num(s: &str) -> Result<f64, String> {
    let v: f64 = s.trim().parse().map_err(|_| format!("`{s}` is not a number"))?;
    if !v.is_finite() {
        return Err(format!("`{s}` is not a finite number"));
    }
    Ok(v)
}

pub(crate) fn parse_flag(s: &str) -> Result<bool, String> {
    match s.trim() {
        "0" => Ok(false),
        "1" => Ok(true),
        other => Err(format!("expected 0 or 1, got `{other}`")),
    }
}

pub(crate) fn fmt_num(v: f64) -> String {
    // Debug switches to exponent notation for very small or large magnitudes.
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{v}")
    } else {
        format!("{v:?}")
    }
}

/// Three-decimal display used for console tables.
pub(crate) fn fmt3(v: f64) -> String {
    let s = format!("{v:.3}");
    if s == "-0.000" {
        "0.000".into()
    } else {
        s
    }
}
