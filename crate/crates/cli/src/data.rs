//! Long-format choice data: one row per alternative of each observation.
//!
//! ```text
//! obs_id,participant_id,scenario_id,alt_label,np,dist_m,smoke,fam,chosen,first_choice
//! 1,p1,3,A,1,6,1,1,0,1
//! 1,p1,3,B,1,5.6,0,0,1,1
//! 1,p1,3,C,10,3,0,0,0,1
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use exitchoice::{ChoiceObservation, ExitAttributes, Scenario};
use indexmap::IndexMap;

use crate::error::{CliError, Result};
use crate::format::{fmt_num, parse_flag, parse_num};

pub const HEADER: [&str; 10] =
    ["obs_id", "participant_id", "scenario_id", "alt_label", "np", "dist_m", "smoke", "fam", "chosen", "first_choice"];

struct PendingObservation {
    participant_id: String,
    scenario_id: String,
    first_choice: bool,
    first_line: u64,
    alternatives: Vec<(String, ExitAttributes)>,
    chosen: Vec<usize>,
}

pub fn read_choice_data(path: &Path) -> Result<Vec<ChoiceObservation>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_choice_data(&text, path)
}

pub fn parse_choice_data(text: &str, path: &Path) -> Result<Vec<ChoiceObservation>> {
    if text.trim().is_empty() {
        return Err(CliError::format(path, "no observations"));
    }
    let mut reader = csv::ReaderBuilder::new().has_headers(true).trim(csv::Trim::All).from_reader(text.as_bytes());
    let header = reader.headers().map_err(|e| CliError::format(path, e.to_string()))?.clone();
    if header.iter().ne(HEADER.iter().copied()) {
        return Err(CliError::line(path, 1, format!("expected header `{}`", HEADER.join(","))));
    }

    let mut groups: IndexMap<String, PendingObservation> = IndexMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            CliError::line(path, line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        let bad = |message: String| CliError::line(path, line, message);
        let field = |i: usize| record.get(i).unwrap_or("");

        let obs_id = field(0);
        if obs_id.is_empty() {
            return Err(bad("empty obs_id".into()));
        }
        let np = parse_num(field(4)).map_err(|m| bad(format!("np: {m}")))?;
        let dist = parse_num(field(5)).map_err(|m| bad(format!("dist_m: {m}")))?;
        let smoke = parse_flag(field(6)).map_err(|m| bad(format!("smoke: {m}")))?;
        let fam = parse_flag(field(7)).map_err(|m| bad(format!("fam: {m}")))?;
        let chosen = parse_flag(field(8)).map_err(|m| bad(format!("chosen: {m}")))?;
        let first_choice = parse_flag(field(9)).map_err(|m| bad(format!("first_choice: {m}")))?;
        let attributes = ExitAttributes::new(np, dist, smoke, fam).map_err(|e| bad(e.to_string()))?;

        let group = groups.entry(obs_id.to_string()).or_insert_with(|| PendingObservation {
            participant_id: field(1).to_string(),
            scenario_id: field(2).to_string(),
            first_choice,
            first_line: line,
            alternatives: Vec::new(),
            chosen: Vec::new(),
        });
        if group.participant_id != field(1) {
            return Err(bad(format!("obs_id {obs_id}: participant_id changes within the observation")));
        }
        if group.scenario_id != field(2) {
            return Err(bad(format!("obs_id {obs_id}: scenario_id changes within the observation")));
        }
        if group.first_choice != first_choice {
            return Err(bad(format!("obs_id {obs_id}: first_choice is not constant within the observation")));
        }
        if chosen {
            group.chosen.push(group.alternatives.len());
        }
        group.alternatives.push((field(3).to_string(), attributes));
    }

    if groups.is_empty() {
        return Err(CliError::format(path, "no observations"));
    }

    groups
        .into_iter()
        .map(|(obs_id, g)| {
            let bad = |message: String| CliError::line(path, g.first_line, format!("obs_id {obs_id}: {message}"));
            if g.alternatives.len() < 2 {
                return Err(bad(format!("needs at least two alternatives, found {}", g.alternatives.len())));
            }
            if g.chosen.len() != 1 {
                return Err(bad(format!("expected exactly one row with chosen = 1, found {}", g.chosen.len())));
            }
            let scenario = Scenario::new(g.scenario_id, g.alternatives).map_err(|e| bad(e.to_string()))?;
            ChoiceObservation::new(g.participant_id, scenario, g.chosen[0], g.first_choice)
                .map_err(|e| bad(e.to_string()))
        })
        .collect()
}

/// Writes observations in long format; `obs_id` is the 1-based position.
pub fn write_choice_data<W: Write>(out: W, data: &[ChoiceObservation]) -> Result<()> {
    let mut writer = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::Validation(format!("failed to write choice data: {e}"));
    writer.write_record(HEADER).map_err(io)?;
    for (n, obs) in data.iter().enumerate() {
        let obs_id = (n + 1).to_string();
        for (i, alt) in obs.scenario.alternatives().iter().enumerate() {
            let a = &alt.attributes;
            writer
                .write_record([
                    obs_id.as_str(),
                    &obs.participant_id,
                    obs.scenario.id(),
                    &alt.label,
                    &fmt_num(a.np()),
                    &fmt_num(a.dist()),
                    flag(a.smoke()),
                    flag(a.fam()),
                    flag(i == obs.chosen),
                    flag(obs.first_choice),
                ])
                .map_err(io)?;
        }
    }
    writer.flush().map_err(|e| CliError::Validation(format!("failed to write choice data: {e}")))?;
    Ok(())
}

fn flag(b: bool) -> &'static str {
    if b {
        "1"
    } else {
        "0"
    }
}
