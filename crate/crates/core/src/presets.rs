//! Reference inputs for the three-exit room: factor levels, the eight
//! experimental scenarios, and the published estimates of the base and
//! first-choice models.

use crate::choice::{ExitAttributes, ModelSpec, ParameterVector, Scenario};
use crate::design::{AlternativeLevels, FactorLevels};

/// Factor levels of the three exits. Exit A is the familiar exit at a fixed 6 m.
pub fn exit_levels() -> FactorLevels {
    let np = vec![0.0, 1.0, 5.0, 10.0];
    let smoke = vec![true, false];
    FactorLevels::new(vec![
        AlternativeLevels { label: "A".into(), np: np.clone(), dist: vec![6.0], smoke: smoke.clone(), fam: vec![true] },
        AlternativeLevels {
            label: "B".into(),
            np: np.clone(),
            dist: vec![3.6, 5.6],
            smoke: smoke.clone(),
            fam: vec![false],
        },
        AlternativeLevels { label: "C".into(), np, dist: vec![3.0, 4.6], smoke, fam: vec![false] },
    ])
    .expect("reference levels are valid")
}

/// The eight scenarios used in the experiment, as (np, dist, smoke) per exit A, B, C.
pub fn efficient_scenarios() -> Vec<Scenario> {
    const ROWS: [[(f64, f64, bool); 3]; 8] = [
        [(0.0, 6.0, false), (10.0, 3.6, true), (5.0, 4.6, true)],
        [(5.0, 6.0, true), (0.0, 5.6, true), (10.0, 3.0, false)],
        [(1.0, 6.0, true), (1.0, 5.6, false), (10.0, 3.0, false)],
        [(10.0, 6.0, false), (0.0, 3.6, false), (1.0, 4.6, true)],
        [(10.0, 6.0, false), (1.0, 3.6, true), (0.0, 4.6, false)],
        [(5.0, 6.0, true), (10.0, 5.6, false), (0.0, 3.0, true)],
        [(1.0, 6.0, true), (5.0, 5.6, false), (1.0, 3.0, false)],
        [(0.0, 6.0, false), (5.0, 3.6, true), (5.0, 4.6, true)],
    ];
    ROWS.iter()
        .enumerate()
        .map(|(s, row)| {
            let alts = ["A", "B", "C"].iter().zip(row).enumerate().map(|(i, (label, &(np, dist, smoke)))| {
                (*label, ExitAttributes::new(np, dist, smoke, i == 0).expect("valid reference attributes"))
            });
            Scenario::new((s + 1).to_string(), alts).expect("valid reference scenario")
        })
        .collect()
}

/// Base model estimates and standard errors (np, dist, smoke, fam).
pub fn base_estimates() -> (ModelSpec, ParameterVector, Vec<f64>) {
    (
        ModelSpec::base_model(),
        ParameterVector::new(vec![0.076, -0.378, -1.765, 0.795]),
        vec![0.015, 0.079, 0.161, 0.206],
    )
}

/// First-choice interaction model estimates and standard errors.
pub fn first_choice_estimates() -> (ModelSpec, ParameterVector, Vec<f64>) {
    (
        ModelSpec::first_choice_model(),
        ParameterVector::new(vec![0.041, -0.439, -2.305, 0.735, 0.192, 0.218, 1.781, 0.413]),
        vec![0.018, 0.094, 0.214, 0.248, 0.046, 0.200, 0.364, 0.522],
    )
}
