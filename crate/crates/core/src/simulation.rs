//! Monte-Carlo choice generation and two-exit sensitivity curves.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::choice::{
    choice_probabilities, Attribute, ChoiceObservation, ExitAttributes, ModelSpec, ParameterVector, Scenario,
};
use crate::error::{Error, Result};
use crate::estimation::two_sided_p_value;

/// Generator used for every simulated dataset.
pub type SimRng = ChaCha8Rng;

pub fn seeded_rng(seed: u64) -> SimRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Draws an index from a categorical distribution by inverting its CDF.
pub fn sample_choice<R: Rng + ?Sized>(probabilities: &[f64], rng: &mut R) -> Result<usize> {
    if probabilities.is_empty() {
        return Err(Error::InvalidProbabilities("empty vector".into()));
    }
    if let Some(p) = probabilities.iter().find(|p| !p.is_finite() || **p < 0.0) {
        return Err(Error::InvalidProbabilities(format!("entry {p} is not a finite non-negative number")));
    }
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > 1e-9 {
        return Err(Error::InvalidProbabilities(format!("entries sum to {total}, expected 1")));
    }
    let u: f64 = rng.random();
    let mut cumulative = 0.0;
    for (i, p) in probabilities.iter().enumerate() {
        cumulative += p;
        if u < cumulative {
            return Ok(i);
        }
    }
    // u landed in the rounding gap above the final partial sum.
    Ok(probabilities.iter().rposition(|p| *p > 0.0).expect("sums to one"))
}

/// Simulates `n_per_scenario` choices for each scenario.
///
/// Output order is scenario-major, then replicate. Within each scenario the
/// replicates flagged as first choices are spread evenly, with
/// `floor(n_per_scenario * first_choice_share)` of them flagged.
pub fn generate_dataset(
    spec: &ModelSpec,
    params: &ParameterVector,
    scenarios: &[Scenario],
    n_per_scenario: usize,
    first_choice_share: f64,
    seed: u64,
) -> Result<Vec<ChoiceObservation>> {
    spec.check_params(params)?;
    if n_per_scenario == 0 {
        return Err(Error::InvalidArgument("n_per_scenario must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&first_choice_share) {
        return Err(Error::InvalidArgument(format!("first-choice share must lie in [0, 1], got {first_choice_share}")));
    }
    let mut rng = seeded_rng(seed);
    let mut out = Vec::with_capacity(scenarios.len() * n_per_scenario);
    for scenario in scenarios {
        let probs =
            [choice_probabilities(spec, params, scenario, false)?, choice_probabilities(spec, params, scenario, true)?];
        for r in 0..n_per_scenario {
            let first = ((r + 1) as f64 * first_choice_share).floor() > (r as f64 * first_choice_share).floor();
            let chosen = sample_choice(&probs[usize::from(first)], &mut rng)?;
            let participant = format!("sim{}", out.len() + 1);
            out.push(ChoiceObservation::new(participant, scenario.clone(), chosen, first)?);
        }
    }
    Ok(out)
}

/// Which exits the evacuee is familiar with in a two-exit sweep.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Familiarity {
    ExitA,
    ExitB,
    Both,
}

impl Familiarity {
    pub const ALL: [Familiarity; 3] = [Familiarity::ExitA, Familiarity::ExitB, Familiarity::Both];

    fn flags(self) -> (bool, bool) {
        match self {
            Familiarity::ExitA => (true, false),
            Familiarity::ExitB => (false, true),
            Familiarity::Both => (true, true),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Familiarity::ExitA => "FamA",
            Familiarity::ExitB => "FamB",
            Familiarity::Both => "FamAB",
        }
    }
}

impl fmt::Display for Familiarity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Familiarity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().replace(['&', '_', '-', ' '], "").as_str() {
            "fama" | "a" => Ok(Familiarity::ExitA),
            "famb" | "b" => Ok(Familiarity::ExitB),
            "famab" | "ab" | "both" => Ok(Familiarity::Both),
            _ => Err(Error::InvalidSweep(format!("unknown familiarity condition `{s}`"))),
        }
    }
}

/// How first-choice interactions enter the coefficients used for a curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CoefficientRule {
    /// Base coefficients only.
    AlwaysBase,
    /// Base plus interaction for every interacted attribute.
    AlwaysSum,
    /// Add an interaction only when its two-sided p-value is below `alpha`.
    SignificantOnly { alpha: f64 },
}

impl FromStr for CoefficientRule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "always-base" | "base" => Ok(CoefficientRule::AlwaysBase),
            "always-sum" | "sum" => Ok(CoefficientRule::AlwaysSum),
            "significant-only" | "significant" => Ok(CoefficientRule::SignificantOnly { alpha: 0.05 }),
            other => Err(Error::InvalidSweep(format!("unknown coefficient rule `{other}`"))),
        }
    }
}

/// Per-attribute coefficients after applying a [`CoefficientRule`].
/// Attributes absent from the model get 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCoefficients {
    pub np: f64,
    pub dist: f64,
    pub smoke: f64,
    pub fam: f64,
}

impl EffectiveCoefficients {
    /// `std_errors` is required by [`CoefficientRule::SignificantOnly`] when the
    /// model has interaction terms.
    pub fn derive(
        spec: &ModelSpec,
        params: &ParameterVector,
        std_errors: Option<&[f64]>,
        rule: CoefficientRule,
    ) -> Result<Self> {
        spec.check_params(params)?;
        if let Some(se) = std_errors {
            if se.len() != params.len() {
                return Err(Error::LengthMismatch { expected: params.len(), got: se.len() });
            }
        }
        let mut values = [0.0; 4];
        for (slot, attribute) in values.iter_mut().zip(Attribute::ALL) {
            let Some(base) = spec.base_index(attribute) else { continue };
            let mut beta = params[base];
            if let Some(inter) = spec.interaction_index(attribute) {
                let include = match rule {
                    CoefficientRule::AlwaysBase => false,
                    CoefficientRule::AlwaysSum => true,
                    CoefficientRule::SignificantOnly { alpha } => {
                        let se = std_errors.ok_or_else(|| {
                            Error::InvalidSweep("the significant-only rule needs standard errors".into())
                        })?;
                        two_sided_p_value(params[inter] / se[inter]) < alpha
                    }
                };
                if include {
                    beta += params[inter];
                }
            }
            *slot = beta;
        }
        let [np, dist, smoke, fam] = values;
        Ok(EffectiveCoefficients { np, dist, smoke, fam })
    }

    pub fn get(&self, attribute: Attribute) -> f64 {
        match attribute {
            Attribute::Np => self.np,
            Attribute::Dist => self.dist,
            Attribute::Smoke => self.smoke,
            Attribute::Fam => self.fam,
        }
    }

    /// `V(a) - V(b)`, accumulated attribute by attribute so that equal
    /// attributes cancel exactly.
    fn utility_difference(&self, a: &ExitAttributes, b: &ExitAttributes) -> f64 {
        Attribute::ALL.iter().map(|&attr| self.get(attr) * (a.value(attr) - b.value(attr))).sum()
    }
}

/// A two-exit sweep: exit A's `swept` attribute runs over `[from, to]` in
/// increments of `step` while exit B stays fixed.
#[derive(Debug, Clone, PartialEq)]
pub struct SensitivityConfig {
    pub exit_a: ExitAttributes,
    pub exit_b: ExitAttributes,
    pub swept: Attribute,
    pub from: f64,
    pub to: f64,
    pub step: f64,
    pub familiarity: Familiarity,
}

impl SensitivityConfig {
    pub fn validate(&self) -> Result<()> {
        if self.swept.is_binary() {
            return Err(Error::InvalidSweep(format!("cannot sweep binary attribute `{}`", self.swept)));
        }
        if !(self.step.is_finite() && self.step > 0.0) {
            return Err(Error::InvalidSweep(format!("step must be positive, got {}", self.step)));
        }
        if !(self.from.is_finite() && self.to.is_finite()) || self.to < self.from {
            return Err(Error::InvalidSweep(format!("empty sweep range [{}, {}]", self.from, self.to)));
        }
        Ok(())
    }

    /// Sweep positions `from + i * step`, including `to` when it lies on the grid.
    pub fn grid(&self) -> Result<Vec<f64>> {
        self.validate()?;
        let count = ((self.to - self.from) / self.step + 1e-9).floor() as usize + 1;
        Ok((0..count).map(|i| self.from + i as f64 * self.step).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub swept_value: f64,
    pub p_exit_a: f64,
}

/// Probability of choosing exit A at every sweep position.
pub fn sensitivity_curve(coefficients: &EffectiveCoefficients, config: &SensitivityConfig) -> Result<Vec<CurvePoint>> {
    let (fam_a, fam_b) = config.familiarity.flags();
    let exit_b = config.exit_b.with_value(Attribute::Fam, f64::from(u8::from(fam_b)))?;
    let base_a = config.exit_a.with_value(Attribute::Fam, f64::from(u8::from(fam_a)))?;
    config
        .grid()?
        .into_iter()
        .map(|x| {
            let exit_a = base_a.with_value(config.swept, x)?;
            let diff = coefficients.utility_difference(&exit_a, &exit_b);
            Ok(CurvePoint { swept_value: x, p_exit_a: logistic(diff) })
        })
        .collect()
}

// Two-alternative logit probability of the first alternative.
fn logistic(diff: f64) -> f64 {
    if diff >= 0.0 {
        1.0 / (1.0 + (-diff).exp())
    } else {
        let e = diff.exp();
        e / (1.0 + e)
    }
}
