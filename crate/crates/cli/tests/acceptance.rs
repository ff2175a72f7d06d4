//! Acceptance suite. Prints one PASS/FAIL line per criterion and fails if any
//! criterion fails.
//!
//! Run with `cargo test --release -p exitchoice-cli --test acceptance -- --nocapture`.

use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::time::Instant;

use exitchoice::{
    choice_probabilities, d_error, fit_mnl, full_factorial, generate_dataset, gradient, hessian, inference_table,
    log_likelihood, presets, search_design, sensitivity_curve, softmax, systematic_utility, Attribute,
    ChoiceObservation, CoefficientRule, EffectiveCoefficients, ExitAttributes, Familiarity, FitOptions, InferenceRow,
    ModelSpec, ParameterVector, Scenario, SearchOptions, SensitivityConfig,
};
use exitchoice_cli::commands::{cmd_estimate, cmd_simulate, EstimateArgs, SimulateArgs};
use exitchoice_cli::tables::render_scenarios;
use nalgebra::SymmetricEigen;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
type Criterion = (&'static str, &'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn near(value: f64, target: f64, tol: f64) -> bool {
    (value - target).abs() <= tol
}

fn effective() -> EffectiveCoefficients {
    let (spec, est, se) = presets::first_choice_estimates();
    EffectiveCoefficients::derive(&spec, &est, Some(&se), CoefficientRule::SignificantOnly { alpha: 0.05 }).unwrap()
}

fn exit(np: f64, dist: f64) -> ExitAttributes {
    ExitAttributes::new(np, dist, false, false).unwrap()
}

fn curve(swept: Attribute, a: ExitAttributes, b: ExitAttributes, range: (f64, f64, f64), fam: Familiarity) -> Vec<f64> {
    let (from, to, step) = range;
    let config = SensitivityConfig { exit_a: a, exit_b: b, swept, from, to, step, familiarity: fam };
    sensitivity_curve(&effective(), &config).unwrap().into_iter().map(|p| p.p_exit_a).collect()
}

fn ac1_crowd_endpoints() -> Outcome {
    let c = effective();
    let coefficients_ok = near(c.np, 0.233, 1e-12)
        && near(c.dist, -0.439, 1e-12)
        && near(c.smoke, -0.524, 1e-12)
        && near(c.fam, 0.735, 1e-12);
    let p = curve(Attribute::Np, exit(0.0, 3.0), exit(5.0, 3.0), (0.0, 10.0, 1.0), Familiarity::Both);
    let (lo, hi) = (p[0], p[p.len() - 1]);
    check(
        coefficients_ok && near(lo, 0.23, 0.01) && near(hi, 0.76, 0.01),
        format!("P(A) at NP_A=0: {lo:.4} (0.23), NP_A=10: {hi:.4} (0.76)"),
    )
}

fn ac2_familiarity_shift() -> Outcome {
    let at = |fam| curve(Attribute::Np, exit(5.0, 3.0), exit(5.0, 3.0), (5.0, 5.0, 1.0), fam)[0];
    let (a, b) = (at(Familiarity::ExitA), at(Familiarity::ExitB));
    check(near(a, 0.68, 0.01) && near(b, 0.32, 0.01), format!("FamA {a:.4} (0.68), FamB {b:.4} (0.32)"))
}

fn ac3_distance_endpoints() -> Outcome {
    let p = curve(Attribute::Dist, exit(5.0, 0.0), exit(5.0, 3.0), (0.0, 6.0, 0.5), Familiarity::Both);
    let (lo, hi) = (p[0], p[p.len() - 1]);
    check(
        near(lo, 0.79, 0.01) && near(hi, 0.21, 0.01),
        format!("P(A) at DIST_A=0: {lo:.4} (0.79), DIST_A=6: {hi:.4} (0.21)"),
    )
}

fn ac4_inference_statistics() -> Outcome {
    let dist = InferenceRow::new("dist_c1", 0.218, 0.200);
    let fam = InferenceRow::new("fam_c1", 0.413, 0.522);
    check(
        near(dist.z_value, 1.088, 0.05) && near(dist.p_value, 0.277, 0.002) && near(fam.p_value, 0.429, 0.002),
        format!("z={:.3} p={:.4}; p={:.4}", dist.z_value, dist.p_value, fam.p_value),
    )
}

fn ac5_factorial_count() -> Outcome {
    let start = Instant::now();
    let n = full_factorial(&presets::exit_levels()).unwrap().len();
    let elapsed = start.elapsed();
    check(n == 2048 && elapsed.as_secs_f64() < 1.0, format!("{n} scenarios in {elapsed:.2?}"))
}

fn ac6_parameter_recovery() -> Outcome {
    let start = Instant::now();
    let (spec, truth, _) = presets::first_choice_estimates();
    let scenarios = presets::efficient_scenarios();
    let per_scenario = 50_000 / scenarios.len();
    let mut worst: f64 = 0.0;
    let mut all_converged = true;
    for seed in [1001, 1002, 1003] {
        let data = generate_dataset(&spec, &truth, &scenarios, per_scenario, 0.25, seed).unwrap();
        let fit = fit_mnl(&data, &spec, &ParameterVector::zeros(spec.n_coefficients()), FitOptions::default()).unwrap();
        all_converged &= fit.converged;
        for (row, t) in inference_table(&fit).unwrap().iter().zip(truth.as_slice()) {
            worst = worst.max((row.estimate - t).abs() / row.std_error);
        }
    }
    let elapsed = start.elapsed();
    check(
        all_converged && worst <= 3.0 && elapsed.as_secs_f64() < 60.0,
        format!("max |est - truth| / SE = {worst:.3} over 3 seeds x 50000 obs in {elapsed:.1?}"),
    )
}

fn random_exit(rng: &mut ChaCha8Rng) -> ExitAttributes {
    const NP: [f64; 4] = [0.0, 1.0, 5.0, 10.0];
    ExitAttributes::new(
        NP[rng.random_range(0..4)],
        rng.random_range(0.0..8.0),
        rng.random_bool(0.5),
        rng.random_bool(0.3),
    )
    .unwrap()
}

fn random_scenario(rng: &mut ChaCha8Rng, id: usize, alternatives: usize) -> Scenario {
    const LABELS: [&str; 5] = ["A", "B", "C", "D", "E"];
    Scenario::new(id.to_string(), (0..alternatives).map(|i| (LABELS[i], random_exit(rng)))).unwrap()
}

fn random_params(rng: &mut ChaCha8Rng, k: usize, scale: f64) -> ParameterVector {
    ParameterVector::new((0..k).map(|_| rng.random_range(-scale..scale)).collect())
}

fn rel_err(a: f64, b: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(1.0)
}

fn ac7_derivatives() -> Outcome {
    const STEP: f64 = 1e-5;
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let spec = ModelSpec::first_choice_model();
    let k = spec.n_coefficients();
    let shifted = |p: &ParameterVector, j: usize, h: f64| {
        let mut v = p.as_slice().to_vec();
        v[j] += h;
        ParameterVector::new(v)
    };
    let (mut grad_err, mut hess_err, mut max_eig) = (0.0_f64, 0.0_f64, f64::NEG_INFINITY);
    for i in 0..20 {
        let data: Vec<ChoiceObservation> = (0..40)
            .map(|n| {
                let alts = rng.random_range(2..=4);
                let s = random_scenario(&mut rng, n, alts);
                ChoiceObservation::new(format!("p{i}"), s, rng.random_range(0..alts), rng.random_bool(0.25)).unwrap()
            })
            .collect();
        let beta = random_params(&mut rng, k, 0.8);
        let g = gradient(&data, &spec, &beta).unwrap();
        let h = hessian(&data, &spec, &beta).unwrap();
        for j in 0..k {
            let up = log_likelihood(&data, &spec, &shifted(&beta, j, STEP)).unwrap();
            let down = log_likelihood(&data, &spec, &shifted(&beta, j, -STEP)).unwrap();
            grad_err = grad_err.max(rel_err(g[j], (up - down) / (2.0 * STEP)));
            let gu = gradient(&data, &spec, &shifted(&beta, j, STEP)).unwrap();
            let gd = gradient(&data, &spec, &shifted(&beta, j, -STEP)).unwrap();
            for r in 0..k {
                hess_err = hess_err.max(rel_err(h[(r, j)], (gu[r] - gd[r]) / (2.0 * STEP)));
            }
        }
        let eig = SymmetricEigen::new(h);
        max_eig = max_eig.max(eig.eigenvalues.max());
    }
    check(
        grad_err < 1e-6 && hess_err < 1e-5 && max_eig <= 1e-10,
        format!("gradient rel err {grad_err:.2e}, Hessian rel err {hess_err:.2e}, max eigenvalue {max_eig:.2e}"),
    )
}

fn exhaustive_minimum(candidates: &[Scenario], size: usize, spec: &ModelSpec, priors: &ParameterVector) -> f64 {
    let n = candidates.len();
    let mut best = f64::INFINITY;
    let mut idx: Vec<usize> = (0..size).collect();
    loop {
        let design: Vec<Scenario> = idx.iter().map(|&i| candidates[i].clone()).collect();
        best = best.min(d_error(&design, spec, priors, false).unwrap());
        // Next combination in lexicographic order.
        let Some(pos) = (0..size).rev().find(|&p| idx[p] < n - size + p) else { break };
        idx[pos] += 1;
        for q in pos + 1..size {
            idx[q] = idx[q - 1] + 1;
        }
    }
    best
}

fn ac8_design_oracle() -> Outcome {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let spec = ModelSpec::base_model();
    let (mut matched, mut finite, mut total) = (0, 0, 0);
    while finite < 8 && total < 40 {
        total += 1;
        let n = rng.random_range(6..=12);
        let size = rng.random_range(2..=4);
        let candidates: Vec<Scenario> = (0..n).map(|i| random_scenario(&mut rng, i, 3)).collect();
        let priors = random_params(&mut rng, spec.n_coefficients(), 0.5);
        let oracle = exhaustive_minimum(&candidates, size, &spec, &priors);
        if !oracle.is_finite() {
            continue;
        }
        finite += 1;
        let mut options = SearchOptions::new(size);
        options.seed = total;
        if let Ok(found) = search_design(&candidates, &spec, &priors, options) {
            if found.d_error == oracle {
                matched += 1;
            }
        }
    }
    let elapsed = start.elapsed();
    check(
        finite >= 5 && matched == finite && elapsed.as_secs_f64() < 10.0,
        format!("{matched}/{finite} instances equal the exhaustive minimum in {elapsed:.2?}"),
    )
}

fn ac9_probability_invariants() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let spec = ModelSpec::first_choice_model();
    let (mut sum_err, mut shift_err, mut sym_err) = (0.0_f64, 0.0_f64, 0.0_f64);
    for i in 0..1000 {
        let alts = rng.random_range(2..=5);
        let scenario = random_scenario(&mut rng, i, alts);
        let params = random_params(&mut rng, spec.n_coefficients(), 2.0);
        let c1 = rng.random_bool(0.5);
        let p = choice_probabilities(&spec, &params, &scenario, c1).unwrap();
        sum_err = sum_err.max((p.iter().sum::<f64>() - 1.0).abs());

        let v: Vec<f64> = scenario
            .alternatives()
            .iter()
            .map(|a| systematic_utility(&spec, &params, &a.attributes, c1).unwrap())
            .collect();
        let c = rng.random_range(-50.0..50.0);
        let shifted = softmax(&v.iter().map(|x| x + c).collect::<Vec<_>>());
        for (a, b) in softmax(&v).iter().zip(&shifted) {
            shift_err = shift_err.max((a - b).abs());
        }

        let twin = scenario.alternatives()[0].attributes;
        let copies = Scenario::new(i.to_string(), (0..alts).map(|j| (j.to_string(), twin))).unwrap();
        let q = choice_probabilities(&spec, &params, &copies, c1).unwrap();
        for x in &q {
            sym_err = sym_err.max((x - 1.0 / alts as f64).abs());
        }
    }
    check(
        sum_err <= 1e-12 && shift_err <= 1e-12 && sym_err <= 1e-12,
        format!("1000 draws: sum err {sum_err:.1e}, shift err {shift_err:.1e}, symmetry err {sym_err:.1e}"),
    )
}

fn ac10_round_trip() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let path = |name: &str| -> PathBuf { dir.path().join(name) };
    let (spec, est, _) = presets::first_choice_estimates();
    let mut params = String::from("name,estimate\n");
    for (name, v) in spec.coefficient_names().iter().zip(est.as_slice()) {
        params.push_str(&format!("{name},{v}\n"));
    }
    fs::write(path("params.csv"), params).unwrap();
    fs::write(path("scenarios.csv"), render_scenarios(&presets::efficient_scenarios(), None).unwrap()).unwrap();
    let simulate = |out: &Path| {
        cmd_simulate(&SimulateArgs {
            params: path("params.csv"),
            scenarios: path("scenarios.csv"),
            config: None,
            n: Some(250),
            seed: Some(2024),
            first_choice_share: Some(0.25),
            out: out.to_path_buf(),
        })
        .unwrap()
    };
    simulate(&path("a.csv"));
    simulate(&path("b.csv"));
    let identical = fs::read(path("a.csv")).unwrap() == fs::read(path("b.csv")).unwrap();
    let estimate = cmd_estimate(&EstimateArgs {
        data: path("a.csv"),
        model: Some("first-choice".into()),
        out: Some(path("est.csv")),
        ..Default::default()
    })
    .unwrap();
    check(
        identical && estimate.status == 0,
        format!("byte-identical: {identical}, estimate exit status {}", estimate.status),
    )
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 10] = [
        ("AC1", "crowd sweep endpoints", ac1_crowd_endpoints),
        ("AC2", "familiarity shift", ac2_familiarity_shift),
        ("AC3", "distance sweep endpoints", ac3_distance_endpoints),
        ("AC4", "z and p from published pairs", ac4_inference_statistics),
        ("AC5", "full factorial count", ac5_factorial_count),
        ("AC6", "parameter recovery", ac6_parameter_recovery),
        ("AC7", "derivative correctness", ac7_derivatives),
        ("AC8", "D-error exhaustive oracle", ac8_design_oracle),
        ("AC9", "probability invariants", ac9_probability_invariants),
        ("AC10", "simulate/estimate round trip", ac10_round_trip),
    ];
    let mut failed = Vec::new();
    for (id, title, run) in criteria {
        let result = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|panic| {
            let msg =
                panic.downcast_ref::<String>().cloned().or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match result {
            Ok(detail) => println!("[PASS] {id} {title}: {detail}"),
            Err(detail) => {
                println!("[FAIL] {id} {title}: {detail}");
                failed.push(id);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
