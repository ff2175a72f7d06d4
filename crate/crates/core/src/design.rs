//! Efficient stated-preference designs.
//!
//! The candidate universe is the full factorial of per-exit attribute levels.
//! A design is scored by its D-error, `det(I)^(-1/K)`, where `I` is the logit
//! Fisher information of one respondent answering every scenario once under
//! prior coefficients. Singular information scores `+inf`.
//!
//! The search builds a design greedily from a seeded random first scenario and
//! then applies best-improvement single swaps until no swap helps, repeated for
//! a number of restarts. While a partial design is still singular, designs are
//! ranked by the D-error of a slightly ridged information matrix so the greedy
//! phase has a gradient to follow.

use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::choice::{
    add_information, difference_rows, logit_kernel, ExitAttributes, ModelSpec, ParameterVector, Scenario,
};
use crate::error::{Error, Result};
use crate::linalg::cholesky_checked;

/// Admissible values of every attribute of one exit.
#[derive(Debug, Clone, PartialEq)]
pub struct AlternativeLevels {
    pub label: String,
    pub np: Vec<f64>,
    pub dist: Vec<f64>,
    pub smoke: Vec<bool>,
    pub fam: Vec<bool>,
}

impl AlternativeLevels {
    fn combinations(&self) -> usize {
        self.np.len() * self.dist.len() * self.smoke.len() * self.fam.len()
    }

    /// Attribute vectors of this exit in lexicographic order (np slowest, fam fastest).
    fn profiles(&self) -> Result<Vec<ExitAttributes>> {
        let mut out = Vec::with_capacity(self.combinations());
        for &np in &self.np {
            for &dist in &self.dist {
                for &smoke in &self.smoke {
                    for &fam in &self.fam {
                        out.push(
                            ExitAttributes::new(np, dist, smoke, fam)
                                .map_err(|e| Error::InvalidLevels(format!("exit `{}`: {e}", self.label)))?,
                        );
                    }
                }
            }
        }
        Ok(out)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FactorLevels {
    alternatives: Vec<AlternativeLevels>,
}

impl FactorLevels {
    pub fn new(alternatives: Vec<AlternativeLevels>) -> Result<Self> {
        if alternatives.len() < 2 {
            return Err(Error::InvalidLevels(format!("need at least two exits, got {}", alternatives.len())));
        }
        for alt in &alternatives {
            for (name, len) in
                [("np", alt.np.len()), ("dist", alt.dist.len()), ("smoke", alt.smoke.len()), ("fam", alt.fam.len())]
            {
                if len == 0 {
                    return Err(Error::InvalidLevels(format!("exit `{}` has an empty {name} level list", alt.label)));
                }
            }
        }
        let levels = FactorLevels { alternatives };
        // Validates labels and values.
        for alt in &levels.alternatives {
            alt.profiles()?;
        }
        let mut labels: Vec<&str> = levels.alternatives.iter().map(|a| a.label.as_str()).collect();
        labels.sort_unstable();
        if labels.windows(2).any(|w| w[0] == w[1]) {
            return Err(Error::InvalidLevels("exit labels must be unique".into()));
        }
        Ok(levels)
    }

    pub fn alternatives(&self) -> &[AlternativeLevels] {
        &self.alternatives
    }

    /// Size of the full factorial.
    pub fn count(&self) -> usize {
        self.alternatives.iter().map(AlternativeLevels::combinations).product()
    }
}

/// Every scenario of the factorial, in lexicographic order over exits
/// (first exit slowest). Scenario ids are 1-based positions.
pub fn full_factorial(levels: &FactorLevels) -> Result<Vec<Scenario>> {
    let profiles: Vec<Vec<ExitAttributes>> =
        levels.alternatives.iter().map(AlternativeLevels::profiles).collect::<Result<_>>()?;
    let labels: Vec<&str> = levels.alternatives.iter().map(|a| a.label.as_str()).collect();
    let total = levels.count();
    let mut out = Vec::with_capacity(total);
    let mut digits = vec![0usize; profiles.len()];
    for n in 0..total {
        let alts = labels.iter().zip(&digits).zip(&profiles).map(|((label, &d), p)| (*label, p[d]));
        out.push(Scenario::new((n + 1).to_string(), alts)?);
        for pos in (0..digits.len()).rev() {
            digits[pos] += 1;
            if digits[pos] < profiles[pos].len() {
                break;
            }
            digits[pos] = 0;
        }
    }
    Ok(out)
}

/// Information contributed by a single scenario.
pub fn scenario_information(
    scenario: &Scenario,
    spec: &ModelSpec,
    priors: &ParameterVector,
    c1: bool,
) -> Result<DMatrix<f64>> {
    spec.check_params(priors)?;
    let k = spec.n_coefficients();
    let d = difference_rows(&spec.design_matrix(scenario, c1), 0);
    let (probs, _) = logit_kernel(&d, priors.as_slice());
    let mut info = DMatrix::zeros(k, k);
    add_information(&d, &probs, 1.0, &mut info);
    Ok(info)
}

/// Fisher information of one respondent answering each scenario once.
pub fn fisher_information(
    design: &[Scenario],
    spec: &ModelSpec,
    priors: &ParameterVector,
    c1: bool,
) -> Result<DMatrix<f64>> {
    spec.check_params(priors)?;
    if design.is_empty() {
        return Err(Error::InvalidDesign("design has no scenarios".into()));
    }
    let k = spec.n_coefficients();
    let mut total = DMatrix::zeros(k, k);
    for s in design {
        total += scenario_information(s, spec, priors, c1)?;
    }
    Ok(total)
}

/// `det(I)^(-1/K)`, or `+inf` when `I` is numerically singular.
pub fn d_error_of_information(info: &DMatrix<f64>) -> f64 {
    let k = info.nrows();
    match cholesky_checked(info) {
        Some(chol) => {
            let l = chol.l_dirty();
            let log_det: f64 = (0..k).map(|j| 2.0 * l[(j, j)].ln()).sum();
            (-log_det / k as f64).exp()
        }
        None => f64::INFINITY,
    }
}

pub fn d_error(design: &[Scenario], spec: &ModelSpec, priors: &ParameterVector, c1: bool) -> Result<f64> {
    Ok(d_error_of_information(&fisher_information(design, spec, priors, c1)?))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchOptions {
    pub size: usize,
    pub c1: bool,
    pub seed: u64,
    /// Number of greedy-plus-swap restarts.
    pub restarts: usize,
    /// Allow a candidate to appear more than once in the design.
    pub with_replacement: bool,
}

impl SearchOptions {
    pub fn new(size: usize) -> Self {
        SearchOptions { size, c1: false, seed: 0, restarts: 20, with_replacement: false }
    }
}

#[derive(Debug, Clone)]
pub struct EfficientDesign {
    pub scenarios: Vec<Scenario>,
    /// Positions of the selected scenarios in the candidate list, ascending.
    pub indices: Vec<usize>,
    pub d_error: f64,
    pub priors: ParameterVector,
    pub spec: ModelSpec,
}

// Ranking key of a design: true D-error first, ridged D-error as tie-breaker.
#[derive(Debug, Clone, Copy, PartialEq)]
struct Score {
    d_error: f64,
    ridged: f64,
}

impl Score {
    fn better_than(&self, other: &Score) -> bool {
        match self.d_error.total_cmp(&other.d_error) {
            std::cmp::Ordering::Less => true,
            std::cmp::Ordering::Greater => false,
            std::cmp::Ordering::Equal => self.d_error.is_infinite() && self.ridged < other.ridged,
        }
    }
}

struct Evaluator<'a> {
    infos: &'a [DMatrix<f64>],
    ridge: f64,
    k: usize,
}

impl Evaluator<'_> {
    /// Information summed in ascending candidate order, matching [`fisher_information`].
    fn information(&self, design: &[usize]) -> DMatrix<f64> {
        let mut sorted = design.to_vec();
        sorted.sort_unstable();
        let mut total = DMatrix::zeros(self.k, self.k);
        for &i in &sorted {
            total += &self.infos[i];
        }
        total
    }

    fn score(&self, design: &[usize]) -> Score {
        let info = self.information(design);
        let d_error = d_error_of_information(&info);
        let ridged = if d_error.is_finite() {
            d_error
        } else {
            let mut r = info;
            for j in 0..self.k {
                r[(j, j)] += self.ridge;
            }
            d_error_of_information(&r)
        };
        Score { d_error, ridged }
    }
}

/// Searches for a minimum D-error design of `options.size` scenarios.
pub fn search_design(
    candidates: &[Scenario],
    spec: &ModelSpec,
    priors: &ParameterVector,
    options: SearchOptions,
) -> Result<EfficientDesign> {
    spec.check_params(priors)?;
    let n = candidates.len();
    let size = options.size;
    if size == 0 {
        return Err(Error::InvalidDesign("design size must be at least 1".into()));
    }
    if n == 0 {
        return Err(Error::InvalidDesign("no candidate scenarios".into()));
    }
    if !options.with_replacement && size > n {
        return Err(Error::InvalidDesign(format!("design size {size} exceeds the {n} available candidates")));
    }

    let infos: Vec<DMatrix<f64>> =
        candidates.par_iter().map(|s| scenario_information(s, spec, priors, options.c1)).collect::<Result<_>>()?;
    let k = spec.n_coefficients();
    let mean_diag = infos.iter().map(|m| m.trace()).sum::<f64>() / (n * k) as f64;
    let evaluator = Evaluator { infos: &infos, ridge: 1e-6 * mean_diag.max(f64::MIN_POSITIVE), k };

    let mut rng = ChaCha8Rng::seed_from_u64(options.seed);
    let mut best: Option<(Vec<usize>, Score)> = None;
    for _ in 0..options.restarts.max(1) {
        let start = rng.random_range(0..n);
        let mut design = greedy(&evaluator, start, n, size, options.with_replacement);
        let score = improve_by_swaps(&evaluator, &mut design, n, options.with_replacement);
        design.sort_unstable();
        let replace = match &best {
            None => true,
            Some((b, s)) => score.better_than(s) || (score == *s && design < *b),
        };
        if replace {
            best = Some((design, score));
        }
    }

    let (indices, score) = best.expect("at least one restart");
    if score.d_error.is_infinite() {
        return Err(Error::SingularDesign { size });
    }
    let scenarios: Vec<Scenario> = indices.iter().map(|&i| candidates[i].clone()).collect();
    let d_error = d_error_of_information(&evaluator.information(&indices));
    Ok(EfficientDesign { scenarios, indices, d_error, priors: priors.clone(), spec: spec.clone() })
}

fn greedy(evaluator: &Evaluator<'_>, start: usize, n: usize, size: usize, with_replacement: bool) -> Vec<usize> {
    let mut design = vec![start];
    while design.len() < size {
        let pick = (0..n)
            .into_par_iter()
            .filter(|j| with_replacement || !design.contains(j))
            .map(|j| {
                let mut trial = design.clone();
                trial.push(j);
                (evaluator.score(&trial), j)
            })
            .reduce_with(pick_better)
            .expect("a free candidate exists");
        design.push(pick.1);
    }
    design
}

fn pick_better<T: Ord + Copy>(a: (Score, T), b: (Score, T)) -> (Score, T) {
    if b.0.better_than(&a.0) || (!a.0.better_than(&b.0) && b.1 < a.1) {
        b
    } else {
        a
    }
}

fn improve_by_swaps(evaluator: &Evaluator<'_>, design: &mut [usize], n: usize, with_replacement: bool) -> Score {
    let mut current = evaluator.score(design);
    loop {
        let snapshot = design.to_vec();
        let best = (0..snapshot.len())
            .flat_map(|pos| (0..n).map(move |j| (pos, j)))
            .collect::<Vec<_>>()
            .into_par_iter()
            .filter(|&(pos, j)| j != snapshot[pos] && (with_replacement || !snapshot.contains(&j)))
            .map(|(pos, j)| {
                let mut trial = snapshot.clone();
                trial[pos] = j;
                (evaluator.score(&trial), (snapshot[pos], j, pos))
            })
            .reduce_with(pick_better);
        match best {
            Some((score, (_, j, pos))) if score.better_than(&current) => {
                design[pos] = j;
                current = score;
            }
            _ => return current,
        }
    }
}
