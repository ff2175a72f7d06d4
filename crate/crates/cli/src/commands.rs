//! Subcommand implementations. Each returns an [`Outcome`] whose status is the
//! process exit code, or an error for validation and numerical failures.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use exitchoice::{
    choice_probabilities, fit_mnl, full_factorial, generate_dataset, inference_table, presets, search_design,
    sensitivity_curve, EffectiveCoefficients, FitOptions, InferenceRow, ModelFit, ModelSpec, SearchOptions,
    SensitivityConfig,
};

use crate::config::RunConfig;
use crate::data::{read_choice_data, write_choice_data};
use crate::error::{CliError, Result, EXIT_NUMERICAL};
use crate::format::{fmt3, fmt_num};
use crate::tables::{read_coefficients, read_scenarios, render_design, render_inference};

pub const DEFAULT_DESIGN_SIZE: usize = 8;
pub const DEFAULT_SIM_N: usize = 10;
pub const DEFAULT_SIM_SEED: u64 = 0;
pub const DEFAULT_FIRST_CHOICE_SHARE: f64 = 0.0;

/// Result of a successful run: exit status plus a human-readable summary.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub status: i32,
    pub summary: String,
}

impl Outcome {
    fn ok(summary: String) -> Self {
        Outcome { status: 0, summary }
    }
}

/// Named model presets accepted by `--model`.
pub fn preset_spec(name: &str) -> Result<ModelSpec> {
    match name {
        "base" => Ok(ModelSpec::base_model()),
        "first-choice" => Ok(ModelSpec::first_choice_model()),
        other => Err(CliError::Validation(format!("unknown model `{other}` (expected `base` or `first-choice`)"))),
    }
}

fn load_config(path: Option<&Path>) -> Result<Option<RunConfig>> {
    path.map(RunConfig::load).transpose()
}

fn write_file(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

#[derive(Debug, Clone, Default)]
pub struct EstimateArgs {
    pub data: PathBuf,
    pub config: Option<PathBuf>,
    /// Preset name; ignored when the config declares `[model]`.
    pub model: Option<String>,
    pub out: Option<PathBuf>,
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
}

/// Fits the model, writes the inference table and returns a console summary.
///
/// A fit that stops without converging still writes its table (standard
/// errors may be NaN) and returns status 3.
pub fn cmd_estimate(args: &EstimateArgs) -> Result<Outcome> {
    let config = load_config(args.config.as_deref())?;
    let spec = match (config.as_ref().map(RunConfig::model_spec).transpose()?.flatten(), &args.model) {
        (Some(spec), _) => spec,
        (None, Some(name)) => preset_spec(name)?,
        (None, None) => ModelSpec::base_model(),
    };
    let section = config.as_ref().and_then(|c| c.estimate.clone()).unwrap_or_default();
    let defaults = FitOptions::default();
    let options = FitOptions {
        tol: args.tol.or(section.tol).unwrap_or(defaults.tol),
        max_iter: args.max_iter.or(section.max_iter).unwrap_or(defaults.max_iter),
    };
    if !(options.tol.is_finite() && options.tol > 0.0) {
        return Err(CliError::Validation(format!("tolerance must be positive, got {}", options.tol)));
    }

    let data = read_choice_data(&args.data)?;
    let init = exitchoice::ParameterVector::zeros(spec.n_coefficients());
    let fit = fit_mnl(&data, &spec, &init, options)?;
    let rows = if fit.converged { inference_table(&fit)? } else { rows_allowing_nan(&fit) };

    if let Some(out) = &args.out {
        write_file(out, render_inference(&rows, &fit).as_bytes())?;
    }
    let mut summary = console_table(&rows, &fit);
    if fit.separation {
        summary.push_str("warning: a coefficient exceeds 50 in magnitude; the data may be separated\n");
    }
    if fit.converged {
        Ok(Outcome::ok(summary))
    } else {
        summary.push_str(&format!(
            "error: no convergence after {} iterations (gradient norm {})\n",
            fit.iterations,
            fmt_num(fit.gradient_norm)
        ));
        Ok(Outcome { status: EXIT_NUMERICAL, summary })
    }
}

fn rows_allowing_nan(fit: &ModelFit) -> Vec<InferenceRow> {
    fit.spec
        .coefficient_names()
        .into_iter()
        .enumerate()
        .map(|(j, name)| {
            let v = fit.vcov[(j, j)];
            let se = if v.is_finite() && v > 0.0 { v.sqrt() } else { f64::NAN };
            InferenceRow::new(name, fit.estimates[j], se)
        })
        .collect()
}

fn console_table(rows: &[InferenceRow], fit: &ModelFit) -> String {
    let mut s = format!("{:<10}{:>10}{:>12}{:>10}{:>10}\n", "Variable", "Estimate", "Std Error", "z-value", "p-value");
    for r in rows {
        s.push_str(&format!(
            "{:<10}{:>10}{:>12}{:>10}{:>10}\n",
            r.name,
            fmt3(r.estimate),
            fmt3(r.std_error),
            fmt3(r.z_value),
            fmt3(r.p_value)
        ));
    }
    s.push_str(&format!(
        "Log-likelihood: {}   N: {}   converged: {} ({} iterations)\n",
        fmt3(fit.log_likelihood),
        fit.n_observations,
        fit.converged,
        fit.iterations
    ));
    s
}

#[derive(Debug, Clone, Default)]
pub struct DesignArgs {
    pub config: PathBuf,
    pub out: Option<PathBuf>,
    pub size: Option<usize>,
    pub seed: Option<u64>,
}

/// Searches the full factorial of the configured levels for a D-efficient design.
pub fn cmd_design(args: &DesignArgs) -> Result<Outcome> {
    let config = RunConfig::load(&args.config)?;
    let Some(section) = config.design.clone() else {
        return Err(CliError::format(&args.config, "missing [design] section"));
    };
    let priors = read_coefficients(&section.priors)?;
    if let Some(spec) = config.model_spec()? {
        if spec != priors.spec {
            return Err(CliError::Validation(format!(
                "priors in {} do not match the [model] terms (expected {})",
                section.priors.display(),
                spec.coefficient_names().join(", ")
            )));
        }
    }
    let levels = match config.factor_levels()? {
        Some(levels) => levels,
        None => presets::exit_levels(),
    };
    let candidates = full_factorial(&levels)?;
    let mut options = SearchOptions::new(args.size.or(section.size).unwrap_or(DEFAULT_DESIGN_SIZE));
    options.seed = args.seed.or(section.seed).unwrap_or(options.seed);
    options.restarts = section.restarts.unwrap_or(options.restarts);
    options.c1 = section.c1.unwrap_or(options.c1);
    options.with_replacement = section.with_replacement.unwrap_or(options.with_replacement);
    if options.size > candidates.len() && !options.with_replacement {
        return Err(CliError::Validation(format!(
            "design size {} exceeds the {} candidate scenarios",
            options.size,
            candidates.len()
        )));
    }

    let design = search_design(&candidates, &priors.spec, &priors.estimates, options)?;
    let table = render_design(&design)?;
    match &args.out {
        Some(out) => write_file(out, table.as_bytes())?,
        None => return Ok(Outcome::ok(table)),
    }
    Ok(Outcome::ok(format!(
        "{} scenarios from {} candidates, d_error = {}\n",
        design.scenarios.len(),
        candidates.len(),
        fmt_num(design.d_error)
    )))
}

#[derive(Debug, Clone, Default)]
pub struct SimulateArgs {
    pub params: PathBuf,
    pub scenarios: PathBuf,
    pub config: Option<PathBuf>,
    /// Replicates per scenario.
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub first_choice_share: Option<f64>,
    pub out: PathBuf,
}

/// Draws synthetic choices and writes them in the long choice-data format.
pub fn cmd_simulate(args: &SimulateArgs) -> Result<Outcome> {
    let config = load_config(args.config.as_deref())?;
    let section = config.and_then(|c| c.simulate).unwrap_or_default();
    let n = args.n.or(section.n).unwrap_or(DEFAULT_SIM_N);
    if n == 0 {
        return Err(CliError::Validation("--n must be at least 1".into()));
    }
    let seed = args.seed.or(section.seed).unwrap_or(DEFAULT_SIM_SEED);
    let share = args.first_choice_share.or(section.first_choice_share).unwrap_or(DEFAULT_FIRST_CHOICE_SHARE);

    let params = read_coefficients(&args.params)?;
    let scenarios = read_scenarios(&args.scenarios)?;
    let data = generate_dataset(&params.spec, &params.estimates, &scenarios, n, share, seed)?;
    let mut buf = Vec::new();
    write_choice_data(&mut buf, &data)?;
    write_file(&args.out, &buf)?;
    Ok(Outcome::ok(format!("{} observations written to {}\n", data.len(), args.out.display())))
}

#[derive(Debug, Clone, Default)]
pub struct PredictArgs {
    pub params: PathBuf,
    pub scenarios: PathBuf,
    /// Restrict output to one scenario.
    pub scenario_id: Option<String>,
    pub first_choice: bool,
    pub out: Option<PathBuf>,
}

/// Choice probabilities for each scenario, one row per alternative.
pub fn cmd_predict(args: &PredictArgs) -> Result<Outcome> {
    let params = read_coefficients(&args.params)?;
    let scenarios = read_scenarios(&args.scenarios)?;
    let selected: Vec<_> = match &args.scenario_id {
        Some(id) => scenarios.iter().filter(|s| s.id() == id).collect(),
        None => scenarios.iter().collect(),
    };
    if selected.is_empty() {
        return Err(CliError::Validation(format!(
            "scenario `{}` not found in {}",
            args.scenario_id.as_deref().unwrap_or_default(),
            args.scenarios.display()
        )));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["scenario_id", "alt_label", "probability"]).expect("in-memory write");
    for scenario in selected {
        let probs = choice_probabilities(&params.spec, &params.estimates, scenario, args.first_choice)?;
        for (alt, p) in scenario.alternatives().iter().zip(probs) {
            w.write_record([scenario.id(), alt.label.as_str(), &fmt_num(p)]).expect("in-memory write");
        }
    }
    let table = w.into_inner().expect("in-memory flush");
    match &args.out {
        Some(out) => {
            write_file(out, &table)?;
            Ok(Outcome::ok(format!("probabilities written to {}\n", out.display())))
        }
        None => Ok(Outcome::ok(String::from_utf8(table).expect("utf-8"))),
    }
}

#[derive(Debug, Clone, Default)]
pub struct SensitivityArgs {
    pub params: PathBuf,
    pub config: PathBuf,
    pub out: Option<PathBuf>,
}

pub const CURVE_HEADER: [&str; 5] = ["sweep", "familiarity", "swept_attribute", "swept_value", "p_exit_a"];

/// Two-exit probability curves for every `[[sensitivity]]` entry and condition.
pub fn cmd_sensitivity(args: &SensitivityArgs) -> Result<Outcome> {
    let config = RunConfig::load(&args.config)?;
    if config.sensitivity.is_empty() {
        return Err(CliError::format(&args.config, "no [[sensitivity]] entries"));
    }
    let params = read_coefficients(&args.params)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(CURVE_HEADER).expect("in-memory write");
    let mut points = 0;
    for entry in &config.sensitivity {
        let sweep = entry.resolve()?;
        if !params.spec.contains(sweep.swept) {
            return Err(CliError::Validation(format!(
                "sweep `{}`: attribute `{}` is not in the model",
                sweep.name, sweep.swept
            )));
        }
        let coefficients =
            EffectiveCoefficients::derive(&params.spec, &params.estimates, params.std_errors.as_deref(), sweep.rule)?;
        for familiarity in &sweep.conditions {
            let curve = sensitivity_curve(
                &coefficients,
                &SensitivityConfig {
                    exit_a: sweep.exit_a,
                    exit_b: sweep.exit_b,
                    swept: sweep.swept,
                    from: sweep.from,
                    to: sweep.to,
                    step: sweep.step,
                    familiarity: *familiarity,
                },
            )?;
            for point in curve {
                w.write_record([
                    sweep.name.as_str(),
                    familiarity.name(),
                    sweep.swept.name(),
                    &fmt_num(point.swept_value),
                    &fmt_num(point.p_exit_a),
                ])
                .expect("in-memory write");
                points += 1;
            }
        }
    }
    let table = w.into_inner().expect("in-memory flush");
    match &args.out {
        Some(out) => {
            write_file(out, &table)?;
            Ok(Outcome::ok(format!("{points} curve points written to {}\n", out.display())))
        }
        None => Ok(Outcome::ok(String::from_utf8(table).expect("utf-8"))),
    }
}

/// Writes a summary to stdout, ignoring a closed pipe.
pub fn print_summary(outcome: &Outcome) {
    let _ = std::io::stdout().write_all(outcome.summary.as_bytes());
}
