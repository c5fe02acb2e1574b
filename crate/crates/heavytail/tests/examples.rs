use npswatch_heavytail::{
    compare, fit_alternatives, fit_exponential, fit_lognormal, fit_power_law, fit_power_law_at,
    fit_truncated_power_law, model_ordering, model_ordering_at, FitError, Model, Params, Sample,
};
use npswatch_testkit::{rng, samplers};

fn power_law_sample(seed: u64, alpha: f64, n: usize) -> Sample {
    let sampler = samplers::PowerLawSampler::new(alpha, 1);
    Sample::new(sampler.sample(&mut rng(seed), n)).unwrap()
}

fn alpha_of(p: Params) -> f64 {
    match p {
        Params::PowerLaw { alpha } | Params::TruncatedPowerLaw { alpha, .. } => alpha,
        other => panic!("no exponent in {other:?}"),
    }
}

#[test]
fn recovers_power_law_exponent() {
    let s = power_law_sample(7, 2.5, 50_000);
    let fit = fit_power_law(&s).unwrap();
    let alpha = alpha_of(fit.params);
    assert!((2.45..=2.55).contains(&alpha), "alpha = {alpha}");
    assert!(fit.xmin <= 4, "xmin = {}", fit.xmin);
    assert!(fit.converged);
    assert!((0.0..=1.0).contains(&fit.ks_distance));
}

#[test]
fn constant_sample_is_degenerate() {
    let s = Sample::new(vec![3; 100]).unwrap();
    assert_eq!(fit_power_law(&s).unwrap_err(), FitError::DegenerateSample(3));
}

#[test]
fn geometric_sample_prefers_exponential() {
    // Shared tail at xmin = 1; see the ledger note on the KS-selected tail.
    let s = Sample::new(samplers::exponential(&mut rng(11), 0.7, 1, 5_000)).unwrap();
    let power = fit_power_law_at(&s, 1).unwrap();
    let alt = fit_alternatives(&s, 1).unwrap();
    let c = compare(&s, &alt.exponential, &power).unwrap();
    assert!(c.log_likelihood_ratio > 0.0, "{c:?}");
    assert_eq!(c.favours(), Some(Model::Exponential));
}

#[test]
fn lognormal_parameters_recovered() {
    let s = Sample::new(samplers::lognormal(&mut rng(3), 1.0, 1.0, 1, 50_000)).unwrap();
    let fit = fit_lognormal(&s, 1).unwrap();
    let Params::Lognormal { mu, sigma } = fit.params else { unreachable!() };
    assert!((0.95..=1.05).contains(&mu), "mu = {mu}");
    assert!((0.95..=1.05).contains(&sigma), "sigma = {sigma}");
    assert!(fit.converged);
}

#[test]
fn exponential_rate_recovered() {
    let s = Sample::new(samplers::exponential(&mut rng(5), 0.3, 1, 50_000)).unwrap();
    let fit = fit_exponential(&s, 1).unwrap();
    let Params::Exponential { lambda } = fit.params else { unreachable!() };
    assert!((0.29..=0.31).contains(&lambda), "lambda = {lambda}");
}

#[test]
fn truncated_limit_matches_power_law_likelihood() {
    let s = power_law_sample(21, 2.5, 5_000);
    let power = fit_power_law_at(&s, 1).unwrap();
    let alpha = alpha_of(power.params);
    let limit = npswatch_heavytail::TailDistribution::new(
        Params::TruncatedPowerLaw { alpha, lambda: 1e-12 },
        1,
    );
    let ll: f64 = s.values().iter().map(|&v| limit.ln_pmf(v)).sum();
    assert!((ll - power.log_likelihood).abs() < 1e-6, "{ll} vs {}", power.log_likelihood);
    // The fitted truncated model can only do better than its nested limit.
    let tpl = fit_truncated_power_law(&s, 1).unwrap();
    assert!(tpl.log_likelihood >= power.log_likelihood - 1e-6);
}

#[test]
fn self_comparison_is_neutral() {
    let s = power_law_sample(2, 2.5, 2_000);
    let fit = fit_power_law(&s).unwrap();
    let c = compare(&s, &fit, &fit).unwrap();
    assert_eq!(c.log_likelihood_ratio, 0.0);
    assert_eq!(c.p_value, 1.0);
}

#[test]
fn power_law_beats_exponential_significantly() {
    let s = power_law_sample(8, 2.5, 50_000);
    let power = fit_power_law(&s).unwrap();
    let exp = fit_exponential(&s, power.xmin).unwrap();
    let c = compare(&s, &power, &exp).unwrap();
    assert!(c.log_likelihood_ratio > 0.0);
    assert!(c.p_value < 1e-8, "p = {}", c.p_value);
    let swapped = compare(&s, &exp, &power).unwrap();
    assert_eq!(swapped.log_likelihood_ratio, -c.log_likelihood_ratio);
    assert_eq!(swapped.p_value, c.p_value);
}

#[test]
fn comparisons_need_a_shared_tail() {
    let s = power_law_sample(9, 2.5, 2_000);
    let a = fit_power_law_at(&s, 1).unwrap();
    let b = fit_exponential(&s, 2).unwrap();
    assert_eq!(compare(&s, &a, &b).unwrap_err(), FitError::XminMismatch { a: 1, b: 2 });
}

#[test]
fn truncated_data_ordering() {
    let s = Sample::new(samplers::truncated_power_law(&mut rng(1), 2.2, 0.01, 1, 50_000)).unwrap();
    let report = model_ordering(&s).unwrap();
    assert_eq!(
        report.order(),
        vec![Model::TruncatedPowerLaw, Model::Lognormal, Model::PowerLaw, Model::Exponential],
        "{report:#?}"
    );
    assert_eq!(report.comparisons.len(), 6);
}

#[test]
fn pure_power_law_nested_models_tie() {
    let s = power_law_sample(4, 2.5, 50_000);
    let report = model_ordering(&s).unwrap();
    let tpl = report.fit(Model::TruncatedPowerLaw);
    let Params::TruncatedPowerLaw { lambda, .. } = tpl.params else { unreachable!() };
    assert!(lambda < 1e-3, "lambda = {lambda}");
    assert_eq!(report.tier_of(Model::TruncatedPowerLaw), report.tier_of(Model::PowerLaw), "{report:#?}");
    assert!(report.tier_of(Model::Exponential) > report.tier_of(Model::PowerLaw));
}

#[test]
fn exponential_data_ranks_exponential_first() {
    let s = Sample::new(samplers::exponential(&mut rng(6), 0.3, 1, 50_000)).unwrap();
    let report = model_ordering_at(&s, 1).unwrap();
    assert_eq!(report.order()[0], Model::Exponential, "{report:#?}");
    // On the KS-selected tail the nested truncated model can tie with it.
    let report = model_ordering(&s).unwrap();
    assert_eq!(report.tier_of(Model::Exponential), 1, "{report:#?}");
}

#[test]
fn report_serialises() {
    let s = power_law_sample(12, 2.5, 1_000);
    let report = model_ordering(&s).unwrap();
    let json = serde_json::to_string(&report).unwrap();
    let back: npswatch_heavytail::DistFitReport = serde_json::from_str(&json).unwrap();
    assert_eq!(back, report);
    assert!(json.contains(r#""model":"power_law""#));
}
