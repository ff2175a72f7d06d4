//! Multinomial logit toolkit for evacuation exit choice.
//!
//! - [`choice`]: attribute and scenario types, utilities and logit probabilities.
//! - [`estimation`]: maximum likelihood with analytic derivatives and inference rows.
//! - [`design`]: full-factorial candidates, Fisher information, D-error search.
//! - [`simulation`]: synthetic choice data and two-exit sensitivity curves.
//! - [`presets`]: reference levels, scenarios and estimates for the three-exit room.

pub mod choice;
pub mod design;
mod error;
pub mod estimation;
mod linalg;
pub mod presets;
pub mod simulation;

pub use choice::{
    choice_probabilities, softmax, systematic_utility, Alternative, Attribute, ChoiceObservation, ExitAttributes,
    ModelSpec, ParameterVector, Scenario, Term,
};
pub use design::{
    d_error, d_error_of_information, fisher_information, full_factorial, search_design, AlternativeLevels,
    EfficientDesign, FactorLevels, SearchOptions,
};
pub use error::{Error, Result};
pub use estimation::{
    fit_mnl, gradient, hessian, inference_table, log_likelihood, two_sided_p_value, FitOptions, InferenceRow, ModelFit,
    PreparedData,
};
pub use simulation::{
    generate_dataset, sample_choice, seeded_rng, sensitivity_curve, CoefficientRule, CurvePoint, EffectiveCoefficients,
    Familiarity, SensitivityConfig,
};
