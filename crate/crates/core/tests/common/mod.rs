#![allow(dead_code)]

use exitchoice::{ChoiceObservation, ExitAttributes, ModelSpec, ParameterVector, Scenario};
use rand::Rng;

pub fn random_exit<R: Rng>(rng: &mut R) -> ExitAttributes {
    const NP: [f64; 4] = [0.0, 1.0, 5.0, 10.0];
    ExitAttributes::new(
        NP[rng.random_range(0..4)],
        rng.random_range(0.0..8.0),
        rng.random_bool(0.5),
        rng.random_bool(0.3),
    )
    .unwrap()
}

pub fn random_scenario<R: Rng>(rng: &mut R, id: usize, alternatives: usize) -> Scenario {
    let labels = ["A", "B", "C", "D", "E"];
    Scenario::new(id.to_string(), (0..alternatives).map(|i| (labels[i], random_exit(rng)))).unwrap()
}

/// Observations with uniformly random choices and random first-choice flags.
pub fn random_dataset<R: Rng>(rng: &mut R, n: usize) -> Vec<ChoiceObservation> {
    (0..n)
        .map(|i| {
            let k = rng.random_range(2..=4);
            let s = random_scenario(rng, i, k);
            ChoiceObservation::new(format!("p{i}"), s, rng.random_range(0..k), rng.random_bool(0.25)).unwrap()
        })
        .collect()
}

pub fn random_params<R: Rng>(rng: &mut R, spec: &ModelSpec, scale: f64) -> ParameterVector {
    ParameterVector::new((0..spec.n_coefficients()).map(|_| rng.random_range(-scale..scale)).collect())
}

pub fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}
