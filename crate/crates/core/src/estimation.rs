//! Maximum-likelihood estimation of multinomial logit coefficients.
//!
//! The log-likelihood of a linear-in-parameters logit is globally concave, so
//! the maximiser is a damped Newton-Raphson iteration started from zero. Each
//! observation's covariates are differenced against the chosen alternative once
//! up front; per-observation terms then reduce to
//!
//! ```text
//! ln P_chosen = -logsumexp(D b)
//! score       = -sum_i P_i d_i
//! hessian     = -(sum_i P_i d_i d_i' - m m'),   m = sum_i P_i d_i
//! ```
//!
//! Contributions are evaluated in fixed-size chunks (possibly on several
//! threads) and the chunk totals are added in chunk order, so every quantity is
//! bit-for-bit reproducible regardless of the thread count.

use log::warn;
use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;

use crate::choice::{
    add_information, difference_rows, logit_kernel, weighted_mean, ChoiceObservation, ModelSpec, ParameterVector,
};
use crate::error::{Error, Result};
use crate::linalg::{cholesky_checked, null_space_support};

/// Coefficient magnitude beyond which iteration stops with a separation warning.
pub const SEPARATION_THRESHOLD: f64 = 50.0;

const CHUNK: usize = 512;
const MAX_HALVINGS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitOptions {
    /// Convergence threshold on the infinity norm of the score.
    pub tol: f64,
    pub max_iter: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions { tol: 1e-6, max_iter: 100 }
    }
}

#[derive(Debug, Clone)]
pub struct ModelFit {
    pub spec: ModelSpec,
    pub estimates: ParameterVector,
    /// Inverse of the negative Hessian at the estimates. Filled with NaN when
    /// the fit did not converge and the Hessian could not be inverted.
    pub vcov: DMatrix<f64>,
    pub log_likelihood: f64,
    pub converged: bool,
    pub iterations: usize,
    /// Infinity norm of the score at the estimates.
    pub gradient_norm: f64,
    pub n_observations: usize,
    /// Set when some coefficient exceeded [`SEPARATION_THRESHOLD`].
    pub separation: bool,
}

/// One row of an estimate table.
#[derive(Debug, Clone, PartialEq)]
pub struct InferenceRow {
    pub name: String,
    pub estimate: f64,
    pub std_error: f64,
    pub z_value: f64,
    pub p_value: f64,
}

impl InferenceRow {
    pub fn new(name: impl Into<String>, estimate: f64, std_error: f64) -> Self {
        let z_value = estimate / std_error;
        InferenceRow { name: name.into(), estimate, std_error, z_value, p_value: two_sided_p_value(z_value) }
    }
}

/// Two-sided tail probability of the standard normal, `2 * (1 - Phi(|z|))`.
pub fn two_sided_p_value(z: f64) -> f64 {
    if z.is_nan() {
        return f64::NAN;
    }
    libm::erfc(z.abs() / std::f64::consts::SQRT_2)
}

/// Observations with covariates differenced against the chosen alternative.
#[derive(Debug, Clone)]
pub struct PreparedData {
    spec: ModelSpec,
    blocks: Vec<DMatrix<f64>>,
}

#[derive(Debug, Clone)]
struct Evaluation {
    log_likelihood: f64,
    gradient: DVector<f64>,
    hessian: Option<DMatrix<f64>>,
}

impl Evaluation {
    fn zero(k: usize, with_hessian: bool) -> Self {
        Evaluation {
            log_likelihood: 0.0,
            gradient: DVector::zeros(k),
            hessian: with_hessian.then(|| DMatrix::zeros(k, k)),
        }
    }

    fn absorb(&mut self, other: Evaluation) {
        self.log_likelihood += other.log_likelihood;
        self.gradient += other.gradient;
        if let (Some(h), Some(o)) = (self.hessian.as_mut(), other.hessian) {
            *h += o;
        }
    }
}

impl PreparedData {
    pub fn new(data: &[ChoiceObservation], spec: &ModelSpec) -> Result<Self> {
        if data.is_empty() {
            return Err(Error::EmptyData);
        }
        let blocks = data
            .iter()
            .map(|obs| difference_rows(&spec.design_matrix(&obs.scenario, obs.first_choice), obs.chosen))
            .collect();
        Ok(PreparedData { spec: spec.clone(), blocks })
    }

    pub fn spec(&self) -> &ModelSpec {
        &self.spec
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn log_likelihood(&self, params: &ParameterVector) -> Result<f64> {
        self.spec.check_params(params)?;
        Ok(self.evaluate(params.as_slice(), false, false).log_likelihood)
    }

    pub fn gradient(&self, params: &ParameterVector) -> Result<DVector<f64>> {
        self.spec.check_params(params)?;
        Ok(self.evaluate(params.as_slice(), true, false).gradient)
    }

    pub fn hessian(&self, params: &ParameterVector) -> Result<DMatrix<f64>> {
        self.spec.check_params(params)?;
        Ok(self.evaluate(params.as_slice(), true, true).hessian.expect("requested"))
    }

    fn evaluate(&self, beta: &[f64], with_gradient: bool, with_hessian: bool) -> Evaluation {
        let k = self.spec.n_coefficients();
        let partials: Vec<Evaluation> = self
            .blocks
            .par_chunks(CHUNK)
            .map(|chunk| {
                let mut acc = Evaluation::zero(k, with_hessian);
                for d in chunk {
                    let (probs, log_sum) = logit_kernel(d, beta);
                    acc.log_likelihood -= log_sum;
                    if with_gradient {
                        let m = weighted_mean(d, &probs);
                        for (g, mj) in acc.gradient.iter_mut().zip(&m) {
                            *g -= mj;
                        }
                    }
                    if let Some(h) = acc.hessian.as_mut() {
                        add_information(d, &probs, -1.0, h);
                    }
                }
                acc
            })
            .collect();
        let mut total = Evaluation::zero(k, with_hessian);
        for part in partials {
            total.absorb(part);
        }
        total
    }
}

/// Sum of log choice probabilities of the chosen alternatives.
pub fn log_likelihood(data: &[ChoiceObservation], spec: &ModelSpec, params: &ParameterVector) -> Result<f64> {
    spec.check_params(params)?;
    PreparedData::new(data, spec)?.log_likelihood(params)
}

/// Analytic score vector of [`log_likelihood`].
pub fn gradient(data: &[ChoiceObservation], spec: &ModelSpec, params: &ParameterVector) -> Result<DVector<f64>> {
    spec.check_params(params)?;
    PreparedData::new(data, spec)?.gradient(params)
}

/// Analytic Hessian of [`log_likelihood`]; negative semidefinite everywhere.
pub fn hessian(data: &[ChoiceObservation], spec: &ModelSpec, params: &ParameterVector) -> Result<DMatrix<f64>> {
    spec.check_params(params)?;
    PreparedData::new(data, spec)?.hessian(params)
}

/// Fits the logit by damped Newton-Raphson.
///
/// Steps are halved until the log-likelihood does not decrease (up to rounding
/// noise). When the negative Hessian cannot be factorised the direction comes
/// from a BFGS approximation of its inverse instead.
pub fn fit_mnl(
    data: &[ChoiceObservation],
    spec: &ModelSpec,
    init: &ParameterVector,
    options: FitOptions,
) -> Result<ModelFit> {
    spec.check_params(init)?;
    if options.tol.is_nan() || options.tol <= 0.0 {
        return Err(Error::InvalidArgument(format!("tolerance must be positive, got {}", options.tol)));
    }
    let prepared = PreparedData::new(data, spec)?;
    fit_prepared(&prepared, init, options)
}

/// [`fit_mnl`] over already prepared data.
pub fn fit_prepared(prepared: &PreparedData, init: &ParameterVector, options: FitOptions) -> Result<ModelFit> {
    let spec = prepared.spec().clone();
    spec.check_params(init)?;
    let k = spec.n_coefficients();

    let mut beta = init.to_dvector();
    let mut eval = prepared.evaluate(beta.as_slice(), true, true);
    let mut inverse_approx: Option<DMatrix<f64>> = None;
    let mut iterations = 0;
    let mut converged = false;
    let mut separation = false;

    loop {
        if inf_norm(&eval.gradient) <= options.tol {
            converged = true;
            break;
        }
        if iterations >= options.max_iter {
            break;
        }
        iterations += 1;

        let information = -eval.hessian.clone().expect("hessian evaluated");
        let mut direction = match cholesky_checked(&information) {
            Some(chol) => chol.solve(&eval.gradient),
            None => {
                let b = inverse_approx.get_or_insert_with(|| {
                    let scale = information.diagonal().iter().fold(0.0_f64, |a, v| a.max(*v));
                    DMatrix::identity(k, k) / scale.max(1.0)
                });
                &*b * &eval.gradient
            }
        };
        if direction.dot(&eval.gradient) <= 0.0 || direction.iter().any(|v| !v.is_finite()) {
            direction = eval.gradient.clone() / eval.gradient.norm().max(1.0);
        }

        let slack = 16.0 * f64::EPSILON * eval.log_likelihood.abs().max(1.0);
        let mut step = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let trial = &beta + &direction * step;
            let ll = prepared.evaluate(trial.as_slice(), false, false).log_likelihood;
            if ll.is_finite() && ll >= eval.log_likelihood - slack {
                accepted = Some(trial);
                break;
            }
            step *= 0.5;
        }
        let Some(next) = accepted else {
            break;
        };

        let next_eval = prepared.evaluate(next.as_slice(), true, true);
        if let Some(b) = inverse_approx.as_mut() {
            bfgs_update(b, &(&next - &beta), &(&eval.gradient - &next_eval.gradient));
        }
        beta = next;
        eval = next_eval;

        if beta.iter().any(|v| v.abs() > SEPARATION_THRESHOLD) {
            warn!(
                "coefficient magnitude exceeded {SEPARATION_THRESHOLD} after {iterations} iterations; \
                 the data are likely perfectly separated"
            );
            separation = true;
            converged = inf_norm(&eval.gradient) <= options.tol;
            break;
        }
    }

    let information = -eval.hessian.clone().expect("hessian evaluated");
    let vcov = match cholesky_checked(&information) {
        Some(chol) => symmetrize(chol.inverse()),
        None if converged => {
            let names = spec.coefficient_names();
            let culprits = null_space_support(&information).into_iter().map(|j| names[j].clone()).collect();
            return Err(Error::NotIdentified(culprits));
        }
        None => DMatrix::from_element(k, k, f64::NAN),
    };

    Ok(ModelFit {
        spec,
        estimates: ParameterVector::from(beta),
        vcov,
        log_likelihood: eval.log_likelihood,
        converged,
        iterations,
        gradient_norm: inf_norm(&eval.gradient),
        n_observations: prepared.len(),
        separation,
    })
}

/// Estimate, standard error, z and two-sided p for every coefficient.
pub fn inference_table(fit: &ModelFit) -> Result<Vec<InferenceRow>> {
    let names = fit.spec.coefficient_names();
    names
        .into_iter()
        .enumerate()
        .map(|(j, name)| {
            let variance = fit.vcov[(j, j)];
            if !(variance.is_finite() && variance > 0.0) {
                return Err(Error::InvalidVariance { name, variance });
            }
            Ok(InferenceRow::new(name, fit.estimates[j], variance.sqrt()))
        })
        .collect()
}

fn inf_norm(v: &DVector<f64>) -> f64 {
    v.iter().fold(0.0_f64, |a, x| a.max(x.abs()))
}

fn symmetrize(m: DMatrix<f64>) -> DMatrix<f64> {
    (&m + m.transpose()) * 0.5
}

// Inverse-Hessian BFGS update for minimising the negative log-likelihood:
// `s` is the step, `y` the change in its gradient.
fn bfgs_update(b: &mut DMatrix<f64>, s: &DVector<f64>, y: &DVector<f64>) {
    let sy = s.dot(y);
    if sy.is_nan() || sy <= 1e-12 * s.norm() * y.norm() {
        return;
    }
    let rho = 1.0 / sy;
    let n = b.nrows();
    let eye = DMatrix::<f64>::identity(n, n);
    let left = &eye - (s * y.transpose()) * rho;
    let right = &eye - (y * s.transpose()) * rho;
    *b = &left * &*b * right + (s * s.transpose()) * rho;
}
