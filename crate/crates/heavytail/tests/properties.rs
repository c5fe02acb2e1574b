use npswatch_heavytail::{
    compare, fit_alternatives, fit_power_law, fit_power_law_at, xmin_scan, AlphaEstimator, Params,
    Sample, TailDistribution,
};
use npswatch_testkit::{rng, samplers};
use proptest::prelude::*;

fn power_law_sample(seed: u64, alpha: f64, n: usize) -> Sample {
    Sample::new(samplers::PowerLawSampler::new(alpha, 1).sample(&mut rng(seed), n)).unwrap()
}

/// Upper bound on Σ_{x > X} x^(−α), by the integral from X.
fn power_tail_bound(alpha: f64, big_x: f64) -> f64 {
    big_x.powf(1.0 - alpha) / (alpha - 1.0)
}

#[test]
fn fitted_pmfs_are_normalised() {
    const X: u64 = 1_000_000;
    let s = Sample::new(samplers::truncated_power_law(&mut rng(31), 2.2, 0.01, 1, 5_000)).unwrap();
    let power = fit_power_law(&s).unwrap();
    let alt = fit_alternatives(&s, power.xmin).unwrap();
    for fit in [&power, &alt.lognormal, &alt.exponential, &alt.truncated_power_law] {
        let d = fit.distribution();
        let partial: f64 = (fit.xmin..=X).map(|x| d.pmf(x)).sum();
        let bound = match fit.params {
            // 1/Z recovered from the first term of the pmf.
            Params::PowerLaw { alpha } => {
                power_tail_bound(alpha, X as f64) * d.pmf(fit.xmin) * (fit.xmin as f64).powf(alpha)
            }
            Params::TruncatedPowerLaw { alpha, lambda } => {
                let xmin = fit.xmin as f64;
                power_tail_bound(alpha, X as f64) * d.pmf(fit.xmin) * xmin.powf(alpha) * (lambda * xmin).exp()
            }
            // Lognormal and geometric tails are far below 1e-6 at 10⁶.
            _ => 0.0,
        };
        assert!(
            (partial - 1.0).abs() <= 1e-6 + bound,
            "{:?}: partial mass {partial}, tail bound {bound}",
            fit.model()
        );
    }
}

#[test]
fn selected_xmin_minimises_ks_distance() {
    for seed in 0..3 {
        let s = power_law_sample(100 + seed, 2.5, 10_000);
        let fit = fit_power_law(&s).unwrap();
        let scan = xmin_scan(&s, AlphaEstimator::Exact).unwrap();
        let chosen = scan.iter().find(|c| c.xmin == fit.xmin).unwrap();
        assert_eq!(chosen.ks_distance, fit.ks_distance);
        for c in &scan {
            assert!(fit.ks_distance <= c.ks_distance, "xmin {} beats {}", c.xmin, fit.xmin);
        }
    }
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.len().is_multiple_of(2) {
        0.5 * (v[m - 1] + v[m])
    } else {
        v[m]
    }
}

#[test]
fn estimator_error_shrinks_with_sample_size() {
    let mut medians = Vec::new();
    for n in [1_000, 10_000, 100_000] {
        let errors: Vec<f64> = (0..20)
            .map(|seed| {
                let fit = fit_power_law(&power_law_sample(500 + seed, 2.5, n)).unwrap();
                let Params::PowerLaw { alpha } = fit.params else { unreachable!() };
                (alpha - 2.5).abs()
            })
            .collect();
        medians.push(median(errors));
    }
    assert!(medians[0] > medians[1] && medians[1] > medians[2], "{medians:?}");
}

#[test]
fn approximation_is_biased_at_small_xmin() {
    // The closed-form estimator is noticeably off at xmin = 1; the exact
    // solve is what the fits use.
    let s = power_law_sample(77, 2.5, 50_000);
    let exact = fit_power_law_at(&s, 1).unwrap();
    let Params::PowerLaw { alpha: exact } = exact.params else { unreachable!() };
    let scan = xmin_scan(&s, AlphaEstimator::Approximate).unwrap();
    let approx = scan.iter().find(|c| c.xmin == 1).unwrap().alpha;
    assert!((exact - 2.5).abs() < 0.03);
    assert!((approx - 2.5).abs() > 0.3, "approx = {approx}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn comparison_is_antisymmetric(seed in 0u64..1_000, alpha in 1.6f64..3.2) {
        let s = power_law_sample(seed, alpha, 300);
        let power = fit_power_law_at(&s, 1).unwrap();
        let alt = fit_alternatives(&s, 1).unwrap();
        for other in [&alt.lognormal, &alt.exponential, &alt.truncated_power_law] {
            let ab = compare(&s, &power, other).unwrap();
            let ba = compare(&s, other, &power).unwrap();
            prop_assert!((ab.log_likelihood_ratio + ba.log_likelihood_ratio).abs() <= 1e-9 * ab.log_likelihood_ratio.abs().max(1.0));
            prop_assert!((ab.p_value - ba.p_value).abs() <= 1e-12);
            prop_assert!((0.0..=1.0).contains(&ab.p_value));
            let same = compare(&s, other, other).unwrap();
            prop_assert_eq!(same.log_likelihood_ratio, 0.0);
            prop_assert_eq!(same.p_value, 1.0);
        }
    }

    #[test]
    fn ks_distance_in_unit_interval(values in prop::collection::vec(1u64..500, 10..200)) {
        let s = Sample::new(values).unwrap();
        if let Ok(fit) = fit_power_law(&s) {
            prop_assert!((0.0..=1.0).contains(&fit.ks_distance));
            prop_assert!(fit.log_likelihood.is_finite());
            let d: TailDistribution = fit.distribution();
            prop_assert!(d.pmf(fit.xmin) > 0.0);
        }
    }
}
