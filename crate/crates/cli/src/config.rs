//! TOML run configuration.
//!
//! Every section is optional; each command reads the sections it needs.
//! Unknown keys are rejected and relative paths resolve against the directory
//! containing the configuration file.

use std::fs;
use std::path::{Path, PathBuf};

use exitchoice::{
    AlternativeLevels, Attribute, CoefficientRule, ExitAttributes, FactorLevels, Familiarity, ModelSpec, Term,
};
use serde::Deserialize;

use crate::error::{CliError, Result};

pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    pub model: Option<ModelSection>,
    pub estimate: Option<EstimateSection>,
    pub design: Option<DesignSection>,
    pub simulate: Option<SimulateSection>,
    #[serde(default)]
    pub sensitivity: Vec<SweepSection>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelSection {
    pub terms: Vec<TermEntry>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermEntry {
    pub attribute: String,
    #[serde(default)]
    pub c1: bool,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EstimateSection {
    pub tol: Option<f64>,
    pub max_iter: Option<usize>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DesignSection {
    /// Coefficient table holding the prior values.
    pub priors: PathBuf,
    pub size: Option<usize>,
    pub seed: Option<u64>,
    pub restarts: Option<usize>,
    pub c1: Option<bool>,
    pub with_replacement: Option<bool>,
    /// Factor levels per exit; defaults to the three-exit reference room.
    pub exits: Option<Vec<ExitLevels>>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExitLevels {
    pub label: String,
    pub np: Vec<f64>,
    pub dist: Vec<f64>,
    pub smoke: Vec<u8>,
    pub fam: Vec<u8>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SimulateSection {
    pub n: Option<usize>,
    pub seed: Option<u64>,
    pub first_choice_share: Option<f64>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub name: String,
    /// Attribute of exit A that is swept (`np` or `dist`).
    pub swept: String,
    pub from: f64,
    pub to: f64,
    pub step: f64,
    pub exit_a: ExitEntry,
    pub exit_b: ExitEntry,
    /// Familiarity conditions; defaults to all three.
    pub conditions: Option<Vec<String>>,
    /// `significant-only` (default), `always-base` or `always-sum`.
    pub rule: Option<String>,
    pub alpha: Option<f64>,
}

/// Exit attributes of a sweep; familiarity comes from the condition.
#[derive(Debug, Clone, Copy, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExitEntry {
    pub np: f64,
    pub dist: f64,
    #[serde(default)]
    pub smoke: u8,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let mut config = Self::parse(&text, path)?;
        let base = path.parent().unwrap_or(Path::new("."));
        if let Some(design) = config.design.as_mut() {
            if design.priors.is_relative() {
                design.priors = base.join(&design.priors);
            }
        }
        Ok(config)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let config: RunConfig = toml::from_str(text).map_err(|e| CliError::format(path, e.to_string()))?;
        if config.version != CONFIG_VERSION {
            return Err(CliError::format(
                path,
                format!("unsupported config version {} (expected {CONFIG_VERSION})", config.version),
            ));
        }
        // Surface attribute-name problems at load time.
        config.model_spec().map_err(|e| CliError::format(path, e.to_string()))?;
        config.factor_levels().map_err(|e| CliError::format(path, e.to_string()))?;
        for sweep in &config.sensitivity {
            sweep.resolve().map_err(|e| CliError::format(path, e.to_string()))?;
        }
        Ok(config)
    }

    pub fn model_spec(&self) -> Result<Option<ModelSpec>> {
        let Some(model) = &self.model else { return Ok(None) };
        let terms = model
            .terms
            .iter()
            .map(|t| Ok(Term { attribute: t.attribute.parse::<Attribute>()?, c1_interaction: t.c1 }))
            .collect::<std::result::Result<Vec<_>, exitchoice::Error>>()?;
        Ok(Some(ModelSpec::new(terms)?))
    }

    pub fn factor_levels(&self) -> Result<Option<FactorLevels>> {
        let Some(exits) = self.design.as_ref().and_then(|d| d.exits.as_ref()) else {
            return Ok(None);
        };
        let alternatives = exits
            .iter()
            .map(|e| {
                Ok(AlternativeLevels {
                    label: e.label.clone(),
                    np: e.np.clone(),
                    dist: e.dist.clone(),
                    smoke: flags(&e.smoke, &e.label, "smoke")?,
                    fam: flags(&e.fam, &e.label, "fam")?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Some(FactorLevels::new(alternatives)?))
    }
}

fn flags(values: &[u8], label: &str, name: &str) -> Result<Vec<bool>> {
    values
        .iter()
        .map(|&v| match v {
            0 => Ok(false),
            1 => Ok(true),
            other => Err(CliError::Validation(format!("exit `{label}`: {name} levels must be 0 or 1, got {other}"))),
        })
        .collect()
}

/// A sweep with names resolved to typed values.
#[derive(Debug, Clone)]
pub struct ResolvedSweep {
    pub name: String,
    pub swept: Attribute,
    pub from: f64,
    pub to: f64,
    pub step: f64,
    pub exit_a: ExitAttributes,
    pub exit_b: ExitAttributes,
    pub conditions: Vec<Familiarity>,
    pub rule: CoefficientRule,
}

impl SweepSection {
    pub fn resolve(&self) -> Result<ResolvedSweep> {
        let swept = self.swept.parse::<Attribute>()?;
        let exit = |e: &ExitEntry, which: &str| -> Result<ExitAttributes> {
            let smoke = match e.smoke {
                0 => false,
                1 => true,
                other => {
                    return Err(CliError::Validation(format!(
                        "sweep `{}`: {which}.smoke must be 0 or 1, got {other}",
                        self.name
                    )))
                }
            };
            Ok(ExitAttributes::new(e.np, e.dist, smoke, false)?)
        };
        let conditions = match &self.conditions {
            None => Familiarity::ALL.to_vec(),
            Some(list) => list.iter().map(|c| c.parse()).collect::<std::result::Result<_, _>>()?,
        };
        let mut rule = match &self.rule {
            None => CoefficientRule::SignificantOnly { alpha: 0.05 },
            Some(r) => r.parse()?,
        };
        if let Some(alpha) = self.alpha {
            match &mut rule {
                CoefficientRule::SignificantOnly { alpha: a } if alpha > 0.0 && alpha < 1.0 => *a = alpha,
                CoefficientRule::SignificantOnly { .. } => {
                    return Err(CliError::Validation(format!("sweep `{}`: alpha must lie in (0, 1)", self.name)))
                }
                _ => {
                    return Err(CliError::Validation(format!(
                        "sweep `{}`: alpha only applies to significant-only",
                        self.name
                    )))
                }
            }
        }
        Ok(ResolvedSweep {
            name: self.name.clone(),
            swept,
            from: self.from,
            to: self.to,
            step: self.step,
            exit_a: exit(&self.exit_a, "exit_a")?,
            exit_b: exit(&self.exit_b, "exit_b")?,
            conditions,
            rule,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig> {
        RunConfig::parse(text, Path::new("run.toml"))
    }

    #[test]
    fn full_config_parses() {
        let cfg = parse(
            r#"
version = 1

[model]
terms = [{ attribute = "np", c1 = true }, { attribute = "dist" }]

[estimate]
tol = 1e-8
max_iter = 50

[design]
priors = "priors.csv"
size = 4
seed = 3

[[design.exits]]
label = "A"
np = [0, 1]
dist = [6.0]
smoke = [1, 0]
fam = [1]

[[design.exits]]
label = "B"
np = [0, 5]
dist = [3.6, 5.6]
smoke = [0]
fam = [0]

[simulate]
n = 10

[[sensitivity]]
name = "crowd"
swept = "np"
from = 0
to = 10
step = 1
exit_a = { np = 0, dist = 3 }
exit_b = { np = 5, dist = 3 }
conditions = ["FamA", "Fam A&B"]
"#,
        )
        .unwrap();
        let spec = cfg.model_spec().unwrap().unwrap();
        assert_eq!(spec.coefficient_names(), ["np", "dist", "np_c1"]);
        assert_eq!(cfg.factor_levels().unwrap().unwrap().count(), 4 * 4);
        let sweep = cfg.sensitivity[0].resolve().unwrap();
        assert_eq!(sweep.conditions, [Familiarity::ExitA, Familiarity::Both]);
        assert_eq!(sweep.rule, CoefficientRule::SignificantOnly { alpha: 0.05 });
    }

    #[test]
    fn unknown_keys_rejected() {
        assert!(parse("version = 1\ncolour = 3\n").is_err());
        assert!(parse("version = 1\n[estimate]\ntolerance = 1\n").is_err());
    }

    #[test]
    fn version_required_and_checked() {
        assert!(parse("").is_err());
        assert!(parse("version = 2\n").is_err());
        assert!(parse("version = 1\n").is_ok());
    }

    #[test]
    fn unknown_attribute_rejected() {
        let err = parse("version = 1\n[model]\nterms = [{ attribute = \"height\" }]\n").unwrap_err();
        assert!(err.to_string().contains("height"));
        let sweep = "version = 1\n[[sensitivity]]\nname = \"x\"\nswept = \"speed\"\nfrom = 0\nto = 1\nstep = 1\nexit_a = { np = 0, dist = 1 }\nexit_b = { np = 0, dist = 1 }\n";
        assert!(parse(sweep).is_err());
    }

    #[test]
    fn binary_levels_checked() {
        let text = "version = 1\n[design]\npriors = \"p.csv\"\n[[design.exits]]\nlabel = \"A\"\nnp = [0]\ndist = [1]\nsmoke = [2]\nfam = [0]\n[[design.exits]]\nlabel = \"B\"\nnp = [0]\ndist = [1]\nsmoke = [0]\nfam = [0]\n";
        assert!(parse(text).is_err());
    }
}
