//! Fixtures shared by the criterion benchmarks.

use exitchoice::{generate_dataset, presets, ChoiceObservation};

/// Simulated first-choice-model dataset over the eight reference scenarios.
pub fn reference_dataset(n_per_scenario: usize, seed: u64) -> Vec<ChoiceObservation> {
    let (spec, params, _) = presets::first_choice_estimates();
    generate_dataset(&spec, &params, &presets::efficient_scenarios(), n_per_scenario, 0.25, seed)
        .expect("reference inputs are valid")
}
