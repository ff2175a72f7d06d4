//! Domain types for exit-choice scenarios and the random-utility kernel.
//!
//! Utilities are linear in generic coefficients shared by every alternative.
//! A [`ModelSpec`] lists the attributes entering utility; each term may carry
//! an interaction with the first-choice dummy `c1`, in which case the effective
//! coefficient on that attribute is `beta + c1 * beta_c1`.
//!
//! Coefficients are laid out with every base coefficient first (in term order)
//! followed by the interaction coefficients (in term order), so a full
//! interaction model reads `np, dist, smoke, fam, np_c1, dist_c1, smoke_c1, fam_c1`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};

/// Attribute registry. Every model term refers to one of these.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Attribute {
    /// Number of people already using the exit.
    Np,
    /// Distance to the exit, in meters.
    Dist,
    /// Smoke present at the exit (0/1).
    Smoke,
    /// Exit is familiar to the evacuee (0/1).
    Fam,
}

impl Attribute {
    pub const ALL: [Attribute; 4] = [Attribute::Np, Attribute::Dist, Attribute::Smoke, Attribute::Fam];

    pub fn name(self) -> &'static str {
        match self {
            Attribute::Np => "np",
            Attribute::Dist => "dist",
            Attribute::Smoke => "smoke",
            Attribute::Fam => "fam",
        }
    }

    /// Binary attributes only admit the values 0 and 1.
    pub fn is_binary(self) -> bool {
        matches!(self, Attribute::Smoke | Attribute::Fam)
    }
}

impl fmt::Display for Attribute {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Attribute {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "np" => Ok(Attribute::Np),
            "dist" | "dist_m" => Ok(Attribute::Dist),
            "smoke" | "sm" => Ok(Attribute::Smoke),
            "fam" => Ok(Attribute::Fam),
            other => Err(Error::UnknownAttribute(other.to_string())),
        }
    }
}

/// Attribute vector of a single exit alternative.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExitAttributes {
    np: f64,
    dist: f64,
    smoke: bool,
    fam: bool,
}

impl ExitAttributes {
    pub fn new(np: f64, dist: f64, smoke: bool, fam: bool) -> Result<Self> {
        if !np.is_finite() || np < 0.0 {
            return Err(Error::InvalidAttributes(format!("np must be a finite value >= 0, got {np}")));
        }
        if !dist.is_finite() || dist < 0.0 {
            return Err(Error::InvalidAttributes(format!("dist must be a finite value >= 0, got {dist}")));
        }
        Ok(ExitAttributes { np, dist, smoke, fam })
    }

    pub fn np(&self) -> f64 {
        self.np
    }

    pub fn dist(&self) -> f64 {
        self.dist
    }

    pub fn smoke(&self) -> bool {
        self.smoke
    }

    pub fn fam(&self) -> bool {
        self.fam
    }

    pub fn value(&self, attribute: Attribute) -> f64 {
        match attribute {
            Attribute::Np => self.np,
            Attribute::Dist => self.dist,
            Attribute::Smoke => indicator(self.smoke),
            Attribute::Fam => indicator(self.fam),
        }
    }

    /// Returns a copy with one attribute replaced. Binary attributes accept 0 or 1 only.
    pub fn with_value(&self, attribute: Attribute, value: f64) -> Result<Self> {
        let mut out = *self;
        match attribute {
            Attribute::Np => out.np = value,
            Attribute::Dist => out.dist = value,
            Attribute::Smoke => out.smoke = parse_indicator(attribute, value)?,
            Attribute::Fam => out.fam = parse_indicator(attribute, value)?,
        }
        ExitAttributes::new(out.np, out.dist, out.smoke, out.fam)
    }
}

fn indicator(flag: bool) -> f64 {
    if flag {
        1.0
    } else {
        0.0
    }
}

fn parse_indicator(attribute: Attribute, value: f64) -> Result<bool> {
    if value == 0.0 {
        Ok(false)
    } else if value == 1.0 {
        Ok(true)
    } else {
        Err(Error::InvalidAttributes(format!("{attribute} must be 0 or 1, got {value}")))
    }
}

/// A labelled exit inside a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct Alternative {
    pub label: String,
    pub attributes: ExitAttributes,
}

/// A choice set of two or more labelled exits.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    id: String,
    alternatives: Vec<Alternative>,
}

impl Scenario {
    pub fn new<I, S>(id: impl Into<String>, alternatives: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, ExitAttributes)>,
        S: Into<String>,
    {
        let id = id.into();
        let alternatives: Vec<Alternative> = alternatives
            .into_iter()
            .map(|(label, attributes)| Alternative { label: label.into(), attributes })
            .collect();
        if alternatives.len() < 2 {
            return Err(Error::InvalidScenario {
                id,
                reason: format!("needs at least two alternatives, got {}", alternatives.len()),
            });
        }
        let mut seen = HashSet::new();
        for alt in &alternatives {
            if !seen.insert(alt.label.as_str()) {
                return Err(Error::InvalidScenario {
                    id: id.clone(),
                    reason: format!("duplicate alternative label `{}`", alt.label),
                });
            }
        }
        Ok(Scenario { id, alternatives })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn alternatives(&self) -> &[Alternative] {
        &self.alternatives
    }

    pub fn len(&self) -> usize {
        self.alternatives.len()
    }

    pub fn is_empty(&self) -> bool {
        self.alternatives.is_empty()
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.alternatives.iter().map(|a| a.label.as_str())
    }

    /// Same alternatives under a different identifier.
    pub fn with_id(&self, id: impl Into<String>) -> Scenario {
        Scenario { id: id.into(), alternatives: self.alternatives.clone() }
    }
}

/// One recorded decision.
#[derive(Debug, Clone, PartialEq)]
pub struct ChoiceObservation {
    pub participant_id: String,
    pub scenario: Scenario,
    pub chosen: usize,
    pub first_choice: bool,
}

impl ChoiceObservation {
    pub fn new(
        participant_id: impl Into<String>,
        scenario: Scenario,
        chosen: usize,
        first_choice: bool,
    ) -> Result<Self> {
        if chosen >= scenario.len() {
            return Err(Error::InvalidObservation(format!(
                "chosen index {chosen} out of range for scenario `{}` with {} alternatives",
                scenario.id(),
                scenario.len()
            )));
        }
        Ok(ChoiceObservation { participant_id: participant_id.into(), scenario, chosen, first_choice })
    }
}

/// One attribute entering utility, optionally interacted with the first-choice dummy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Term {
    pub attribute: Attribute,
    pub c1_interaction: bool,
}

impl Term {
    pub fn base(attribute: Attribute) -> Self {
        Term { attribute, c1_interaction: false }
    }

    pub fn interacted(attribute: Attribute) -> Self {
        Term { attribute, c1_interaction: true }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelSpec {
    terms: Vec<Term>,
}

impl ModelSpec {
    pub fn new(terms: Vec<Term>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidSpec("at least one term is required".into()));
        }
        let mut seen = HashSet::new();
        for term in &terms {
            if !seen.insert(term.attribute) {
                return Err(Error::InvalidSpec(format!("attribute `{}` appears more than once", term.attribute)));
            }
        }
        Ok(ModelSpec { terms })
    }

    /// Four generic base coefficients: np, dist, smoke, fam.
    pub fn base_model() -> Self {
        ModelSpec { terms: Attribute::ALL.iter().map(|&a| Term::base(a)).collect() }
    }

    /// Four base coefficients plus their four first-choice interactions.
    pub fn first_choice_model() -> Self {
        ModelSpec { terms: Attribute::ALL.iter().map(|&a| Term::interacted(a)).collect() }
    }

    /// Rebuilds a specification from coefficient names in canonical layout
    /// (base names first, then `<attr>_c1` names).
    pub fn from_coefficient_names<S: AsRef<str>>(names: &[S]) -> Result<Self> {
        let mut base = Vec::new();
        let mut interacted = Vec::new();
        for name in names {
            let name = name.as_ref().trim();
            match name.strip_suffix("_c1") {
                Some(attr) => interacted.push(attr.parse::<Attribute>()?),
                None => {
                    if !interacted.is_empty() {
                        return Err(Error::InvalidSpec(format!(
                            "base coefficient `{name}` listed after interaction coefficients"
                        )));
                    }
                    base.push(name.parse::<Attribute>()?)
                }
            }
        }
        let terms = base.iter().map(|&a| Term { attribute: a, c1_interaction: interacted.contains(&a) }).collect();
        let spec = ModelSpec::new(terms)?;
        let expected = spec.coefficient_names();
        let given: Vec<String> = names
            .iter()
            .map(|n| {
                let n = n.as_ref().trim();
                match n.strip_suffix("_c1") {
                    Some(a) => a.parse::<Attribute>().map(|a| format!("{a}_c1")),
                    None => n.parse::<Attribute>().map(|a| a.name().to_string()),
                }
            })
            .collect::<Result<_>>()?;
        if expected != given {
            return Err(Error::InvalidSpec(format!(
                "coefficients must be listed as [{}], got [{}]",
                expected.join(", "),
                given.join(", ")
            )));
        }
        Ok(spec)
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    /// Number of coefficients K.
    pub fn n_coefficients(&self) -> usize {
        self.terms.len() + self.terms.iter().filter(|t| t.c1_interaction).count()
    }

    pub fn coefficient_names(&self) -> Vec<String> {
        let base = self.terms.iter().map(|t| t.attribute.name().to_string());
        let inter = self.terms.iter().filter(|t| t.c1_interaction).map(|t| format!("{}_c1", t.attribute.name()));
        base.chain(inter).collect()
    }

    pub fn contains(&self, attribute: Attribute) -> bool {
        self.terms.iter().any(|t| t.attribute == attribute)
    }

    /// Position of the base coefficient for `attribute`.
    pub fn base_index(&self, attribute: Attribute) -> Option<usize> {
        self.terms.iter().position(|t| t.attribute == attribute)
    }

    /// Position of the c1-interaction coefficient for `attribute`.
    pub fn interaction_index(&self, attribute: Attribute) -> Option<usize> {
        let mut idx = self.terms.len();
        for t in &self.terms {
            if t.c1_interaction {
                if t.attribute == attribute {
                    return Some(idx);
                }
                idx += 1;
            }
        }
        None
    }

    pub fn check_params(&self, params: &ParameterVector) -> Result<()> {
        let expected = self.n_coefficients();
        if params.len() != expected {
            return Err(Error::LengthMismatch { expected, got: params.len() });
        }
        Ok(())
    }

    /// Writes the covariate row of one exit into `row` (length K).
    pub fn fill_covariates(&self, exit: &ExitAttributes, c1: bool, row: &mut [f64]) {
        debug_assert_eq!(row.len(), self.n_coefficients());
        let n = self.terms.len();
        let mut inter = n;
        for (j, term) in self.terms.iter().enumerate() {
            let x = exit.value(term.attribute);
            row[j] = x;
            if term.c1_interaction {
                row[inter] = if c1 { x } else { 0.0 };
                inter += 1;
            }
        }
    }

    pub fn covariates(&self, exit: &ExitAttributes, c1: bool) -> Vec<f64> {
        let mut row = vec![0.0; self.n_coefficients()];
        self.fill_covariates(exit, c1, &mut row);
        row
    }

    /// Alternatives-by-coefficients covariate matrix of a scenario.
    pub fn design_matrix(&self, scenario: &Scenario, c1: bool) -> DMatrix<f64> {
        let k = self.n_coefficients();
        let mut x = DMatrix::zeros(scenario.len(), k);
        let mut row = vec![0.0; k];
        for (i, alt) in scenario.alternatives().iter().enumerate() {
            self.fill_covariates(&alt.attributes, c1, &mut row);
            for (j, v) in row.iter().enumerate() {
                x[(i, j)] = *v;
            }
        }
        x
    }
}

/// Coefficient vector, ordered to match [`ModelSpec::coefficient_names`].
#[derive(Debug, Clone, PartialEq)]
pub struct ParameterVector(Vec<f64>);

impl ParameterVector {
    pub fn new(values: Vec<f64>) -> Self {
        ParameterVector(values)
    }

    pub fn zeros(k: usize) -> Self {
        ParameterVector(vec![0.0; k])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn to_dvector(&self) -> DVector<f64> {
        DVector::from_column_slice(&self.0)
    }
}

impl From<Vec<f64>> for ParameterVector {
    fn from(v: Vec<f64>) -> Self {
        ParameterVector(v)
    }
}

impl From<DVector<f64>> for ParameterVector {
    fn from(v: DVector<f64>) -> Self {
        ParameterVector(v.iter().copied().collect())
    }
}

impl std::ops::Index<usize> for ParameterVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Systematic utility `sum_j (beta_j + c1 * beta_j1) * x_j` of one exit.
pub fn systematic_utility(spec: &ModelSpec, params: &ParameterVector, exit: &ExitAttributes, c1: bool) -> Result<f64> {
    spec.check_params(params)?;
    Ok(dot(&spec.covariates(exit, c1), params.as_slice()))
}

/// Multinomial logit choice probabilities of every alternative in `scenario`.
pub fn choice_probabilities(
    spec: &ModelSpec,
    params: &ParameterVector,
    scenario: &Scenario,
    c1: bool,
) -> Result<Vec<f64>> {
    spec.check_params(params)?;
    let mut row = vec![0.0; spec.n_coefficients()];
    let utilities: Vec<f64> = scenario
        .alternatives()
        .iter()
        .map(|alt| {
            spec.fill_covariates(&alt.attributes, c1, &mut row);
            dot(&row, params.as_slice())
        })
        .collect();
    Ok(softmax(&utilities))
}

/// Logit transform of a utility vector, shifted by its maximum before exponentiation.
pub fn softmax(utilities: &[f64]) -> Vec<f64> {
    let max = utilities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut out: Vec<f64> = utilities.iter().map(|v| (v - max).exp()).collect();
    let total: f64 = out.iter().sum();
    for p in &mut out {
        *p /= total;
    }
    out
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// Covariate rows re-expressed relative to row `reference`.
///
/// Differencing leaves the logit probabilities unchanged and makes attributes
/// that are constant across a choice set contribute exact zeros downstream.
pub(crate) fn difference_rows(x: &DMatrix<f64>, reference: usize) -> DMatrix<f64> {
    let mut d = x.clone();
    for j in 0..x.ncols() {
        let r = x[(reference, j)];
        for i in 0..x.nrows() {
            d[(i, j)] = x[(i, j)] - r;
        }
    }
    d
}

/// Probabilities and log-sum of the utilities `d * beta`.
pub(crate) fn logit_kernel(d: &DMatrix<f64>, beta: &[f64]) -> (Vec<f64>, f64) {
    let k = d.ncols();
    let utilities: Vec<f64> = (0..d.nrows()).map(|i| (0..k).map(|j| d[(i, j)] * beta[j]).sum()).collect();
    let max = utilities.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut probs: Vec<f64> = utilities.iter().map(|u| (u - max).exp()).collect();
    let total: f64 = probs.iter().sum();
    for p in &mut probs {
        *p /= total;
    }
    (probs, max + total.ln())
}

/// Probability-weighted mean row `sum_i p_i d_i`.
pub(crate) fn weighted_mean(d: &DMatrix<f64>, probs: &[f64]) -> Vec<f64> {
    (0..d.ncols()).map(|j| (0..d.nrows()).map(|i| probs[i] * d[(i, j)]).sum()).collect()
}

/// Adds the logit information kernel `sum_i p_i d_i d_i' - m m'` into `out`.
///
/// Only the upper triangle is computed; the result is mirrored so `out` stays
/// exactly symmetric.
pub(crate) fn add_information(d: &DMatrix<f64>, probs: &[f64], weight: f64, out: &mut DMatrix<f64>) {
    let k = d.ncols();
    let m = weighted_mean(d, probs);
    for a in 0..k {
        for b in a..k {
            let mut s = 0.0;
            for i in 0..d.nrows() {
                s += probs[i] * d[(i, a)] * d[(i, b)];
            }
            let v = weight * (s - m[a] * m[b]);
            out[(a, b)] += v;
            if a != b {
                out[(b, a)] += v;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::presets;

    fn exit(np: f64, dist: f64, smoke: bool, fam: bool) -> ExitAttributes {
        ExitAttributes::new(np, dist, smoke, fam).unwrap()
    }

    #[test]
    fn attribute_invariants_enforced() {
        assert!(ExitAttributes::new(-1.0, 1.0, false, false).is_err());
        assert!(ExitAttributes::new(1.0, -0.5, false, false).is_err());
        assert!(ExitAttributes::new(f64::NAN, 1.0, false, false).is_err());
        let e = exit(1.0, 2.0, false, false);
        assert!(e.with_value(Attribute::Smoke, 0.5).is_err());
        assert!(e.with_value(Attribute::Smoke, 1.0).unwrap().smoke());
    }

    #[test]
    fn scenario_requires_two_unique_alternatives() {
        let e = exit(0.0, 1.0, false, false);
        assert!(Scenario::new("s", [("A", e)]).is_err());
        assert!(Scenario::new("s", [("A", e), ("A", e)]).is_err());
        assert!(Scenario::new("s", [("A", e), ("B", e)]).is_ok());
    }

    #[test]
    fn observation_rejects_out_of_range_choice() {
        let e = exit(0.0, 1.0, false, false);
        let s = Scenario::new("s", [("A", e), ("B", e)]).unwrap();
        assert!(ChoiceObservation::new("p", s.clone(), 2, false).is_err());
        assert!(ChoiceObservation::new("p", s, 1, true).is_ok());
    }

    #[test]
    fn coefficient_layout() {
        let m2 = ModelSpec::first_choice_model();
        assert_eq!(m2.n_coefficients(), 8);
        assert_eq!(m2.coefficient_names(), ["np", "dist", "smoke", "fam", "np_c1", "dist_c1", "smoke_c1", "fam_c1"]);
        assert_eq!(m2.interaction_index(Attribute::Smoke), Some(6));
        let mixed = ModelSpec::new(vec![Term::base(Attribute::Dist), Term::interacted(Attribute::Np)]).unwrap();
        assert_eq!(mixed.coefficient_names(), ["dist", "np", "np_c1"]);
        assert_eq!(mixed.interaction_index(Attribute::Np), Some(2));
        assert_eq!(mixed.interaction_index(Attribute::Dist), None);
    }

    #[test]
    fn spec_rejects_duplicates() {
        assert!(ModelSpec::new(vec![Term::base(Attribute::Np), Term::interacted(Attribute::Np)]).is_err());
        assert!(ModelSpec::new(vec![]).is_err());
    }

    #[test]
    fn spec_from_names_round_trips() {
        for spec in [ModelSpec::base_model(), ModelSpec::first_choice_model()] {
            let names = spec.coefficient_names();
            assert_eq!(ModelSpec::from_coefficient_names(&names).unwrap(), spec);
        }
        assert!(ModelSpec::from_coefficient_names(&["np_c1", "np"]).is_err());
        assert!(ModelSpec::from_coefficient_names(&["np", "dist", "dist_c1", "np_c1"]).is_err());
        assert!(ModelSpec::from_coefficient_names(&["np", "height"]).is_err());
    }

    #[test]
    fn utility_zero_attributes_is_zero() {
        let (spec, params, _) = presets::first_choice_estimates();
        let zero = exit(0.0, 0.0, false, false);
        assert_eq!(systematic_utility(&spec, &params, &zero, true).unwrap(), 0.0);
        assert_eq!(systematic_utility(&spec, &params, &zero, false).unwrap(), 0.0);
    }

    #[test]
    fn utility_base_model_exit_a() {
        // -0.378 * 6 + 0.795, worked by hand.
        let (spec, params, _) = presets::base_estimates();
        let v = systematic_utility(&spec, &params, &exit(0.0, 6.0, false, true), false).unwrap();
        assert!((v - (-1.473)).abs() < 1e-12, "{v}");
    }

    #[test]
    fn utility_first_choice_interaction() {
        let (spec, params, _) = presets::first_choice_estimates();
        let v = systematic_utility(&spec, &params, &exit(1.0, 0.0, false, false), true).unwrap();
        assert!((v - 0.233).abs() < 1e-12, "{v}");
        let v0 = systematic_utility(&spec, &params, &exit(1.0, 0.0, false, false), false).unwrap();
        assert!((v0 - 0.041).abs() < 1e-12);
    }

    #[test]
    fn utility_length_mismatch() {
        let spec = ModelSpec::base_model();
        let err = systematic_utility(&spec, &ParameterVector::zeros(3), &exit(0.0, 0.0, false, false), false);
        assert_eq!(err, Err(Error::LengthMismatch { expected: 4, got: 3 }));
    }

    #[test]
    fn identical_alternatives_are_uniform() {
        let e = exit(5.0, 3.0, true, false);
        let s = Scenario::new("s", [("A", e), ("B", e), ("C", e)]).unwrap();
        let (spec, params, _) = presets::base_estimates();
        for p in choice_probabilities(&spec, &params, &s, false).unwrap() {
            assert!((p - 1.0 / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn base_model_first_efficient_scenario() {
        // exp(-1.473), exp(-2.3658), exp(-3.1238) normalised independently:
        // 0.229237, 0.093874, 0.043990 over 0.367101.
        let (spec, params, _) = presets::base_estimates();
        let s = &presets::efficient_scenarios()[0];
        let p = choice_probabilities(&spec, &params, s, false).unwrap();
        let expected = [0.624452, 0.255718, 0.119830];
        for (got, want) in p.iter().zip(expected) {
            assert!((got - want).abs() < 1e-6, "{p:?}");
        }
    }

    #[test]
    fn two_exit_crowd_effect() {
        let spec = ModelSpec::new(vec![Term::base(Attribute::Np)]).unwrap();
        let params = ParameterVector::new(vec![0.233]);
        let s = Scenario::new("s", [("A", exit(0.0, 3.0, false, true)), ("B", exit(5.0, 3.0, false, true))]).unwrap();
        let p = choice_probabilities(&spec, &params, &s, false).unwrap();
        assert!((p[0] - 0.238).abs() < 5e-4, "{p:?}");
    }

    #[test]
    fn softmax_survives_large_utilities() {
        let p = softmax(&[1000.0, 999.0, -1000.0]);
        assert!(p.iter().all(|x| x.is_finite()));
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn information_kernel_is_symmetric_and_zero_without_variation() {
        let x = DMatrix::from_row_slice(3, 2, &[1.0, 4.0, 1.0, 2.0, 1.0, 0.5]);
        let d = difference_rows(&x, 0);
        let (p, _) = logit_kernel(&d, &[0.3, -0.2]);
        let mut info = DMatrix::zeros(2, 2);
        add_information(&d, &p, 1.0, &mut info);
        assert_eq!(info[(0, 1)], info[(1, 0)]);
        assert_eq!(info[(0, 0)], 0.0);
        assert_eq!(info[(0, 1)], 0.0);
        assert!(info[(1, 1)] > 0.0);
    }
}
