//! Maximum-likelihood fits on the tail `x ≥ xmin`.

use serde::{Deserialize, Serialize};

use crate::model::{Params, TailDistribution};
use crate::optimize::{brent, nelder_mead};
use crate::sample::{Sample, Tail};
use crate::zeta::hurwitz_zeta_derivs;
use crate::{FitError, Model};

/// Stopping tolerance for every likelihood search, on the mean per-point
/// log-likelihood.
pub const LIKELIHOOD_TOLERANCE: f64 = 1e-10;
/// Iteration cap for the power-law Newton solve.
pub const NEWTON_MAX_ITER: usize = 100;
/// Function-evaluation cap for the two-parameter searches.
pub const SEARCH_MAX_EVALUATIONS: usize = 4_000;
const ALPHA_MAX: f64 = 50.0;
const LAMBDA_MAX: f64 = 50.0;

/// One fitted model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    #[serde(flatten)]
    pub params: Params,
    pub xmin: u64,
    pub n_tail: u64,
    /// Kolmogorov–Smirnov distance between the empirical tail CDF and the model.
    pub ks_distance: f64,
    /// Total log-likelihood over the tail points.
    pub log_likelihood: f64,
    /// False when a search hit its iteration cap; the parameters are the best
    /// point found.
    pub converged: bool,
}

impl FitResult {
    pub fn model(&self) -> Model {
        self.params.model()
    }

    pub fn distribution(&self) -> TailDistribution {
        TailDistribution::new(self.params, self.xmin)
    }

    fn evaluate(params: Params, tail: &Tail, converged: bool) -> Self {
        let dist = TailDistribution::new(params, tail.xmin);
        let log_likelihood = tail
            .distinct
            .iter()
            .map(|&(v, c)| c as f64 * dist.ln_pmf(v))
            .sum();
        FitResult {
            params,
            xmin: tail.xmin,
            n_tail: tail.n,
            ks_distance: ks_distance(&dist, tail),
            log_likelihood,
            converged,
        }
    }
}

/// How the power-law exponent is estimated at a given xmin.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlphaEstimator {
    /// Exact discrete MLE: Newton iterations on the Hurwitz-zeta likelihood,
    /// started from the approximation below.
    #[default]
    Exact,
    /// α̂ = 1 + n [Σ ln(x / (xmin − ½))]⁻¹. Cheap, but biased for xmin below
    /// about 6.
    Approximate,
}

/// Score of one candidate xmin in the KS scan.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct XminCandidate {
    pub xmin: u64,
    pub alpha: f64,
    pub n_tail: u64,
    pub ks_distance: f64,
}

/// Fits a discrete power law, choosing xmin by minimising the KS distance
/// over the distinct sample values.
pub fn fit_power_law(sample: &Sample) -> Result<FitResult, FitError> {
    fit_power_law_with(sample, AlphaEstimator::Exact)
}

pub fn fit_power_law_with(sample: &Sample, estimator: AlphaEstimator) -> Result<FitResult, FitError> {
    let scan = xmin_scan(sample, estimator)?;
    let best = scan
        .iter()
        .min_by(|a, b| a.ks_distance.total_cmp(&b.ks_distance).then(a.xmin.cmp(&b.xmin)))
        .expect("scan is non-empty");
    let tail = sample.tail(best.xmin);
    let (_, converged) = power_law_alpha(&tail, estimator);
    Ok(FitResult::evaluate(Params::PowerLaw { alpha: best.alpha }, &tail, converged))
}

/// Fits a discrete power law on a fixed tail.
pub fn fit_power_law_at(sample: &Sample, xmin: u64) -> Result<FitResult, FitError> {
    let tail = usable_tail(sample, xmin)?;
    let (alpha, converged) = power_law_alpha(&tail, AlphaEstimator::Exact);
    Ok(FitResult::evaluate(Params::PowerLaw { alpha }, &tail, converged))
}

/// Every candidate xmin with at least [`Sample::MIN_LEN`] tail points and two
/// distinct tail values, with its fitted exponent and KS distance.
pub fn xmin_scan(sample: &Sample, estimator: AlphaEstimator) -> Result<Vec<XminCandidate>, FitError> {
    let distinct = sample.distinct();
    if distinct.len() == 1 {
        return Err(FitError::DegenerateSample(distinct[0].0));
    }
    let mut out = Vec::new();
    let mut above = sample.len() as u64;
    for (i, &(xmin, count)) in distinct.iter().enumerate() {
        // `above` counts values ≥ xmin; a tail needs two distinct values.
        if above < Sample::MIN_LEN as u64 || i + 1 == distinct.len() {
            break;
        }
        let tail = sample.tail(xmin);
        let (alpha, _) = power_law_alpha(&tail, estimator);
        let dist = TailDistribution::new(Params::PowerLaw { alpha }, xmin);
        out.push(XminCandidate { xmin, alpha, n_tail: tail.n, ks_distance: ks_distance(&dist, &tail) });
        above -= count;
    }
    if out.is_empty() {
        return Err(FitError::TooFewTailPoints { xmin: distinct[0].0, n_tail: sample.len() });
    }
    Ok(out)
}

fn usable_tail(sample: &Sample, xmin: u64) -> Result<Tail, FitError> {
    let tail = sample.tail(xmin);
    if tail.n < Sample::MIN_LEN as u64 {
        return Err(FitError::TooFewTailPoints { xmin, n_tail: tail.n as usize });
    }
    if tail.distinct.len() < 2 {
        return Err(FitError::DegenerateSample(tail.distinct[0].0));
    }
    Ok(tail)
}

/// The closed-form approximation to the discrete MLE.
pub(crate) fn approximate_alpha(tail: &Tail) -> f64 {
    let shift = tail.xmin as f64 - 0.5;
    let s: f64 = tail
        .distinct
        .iter()
        .map(|&(v, c)| c as f64 * (v as f64 / shift).ln())
        .sum();
    (1.0 + tail.n as f64 / s).min(ALPHA_MAX)
}

fn power_law_alpha(tail: &Tail, estimator: AlphaEstimator) -> (f64, bool) {
    let seed = approximate_alpha(tail);
    match estimator {
        AlphaEstimator::Approximate => (seed, true),
        AlphaEstimator::Exact => exact_alpha(tail, seed),
    }
}

/// Safeguarded Newton on the mean negative log-likelihood
/// f(α) = α·mean(ln x) + ln ζ(α, xmin), which is convex in α.
fn exact_alpha(tail: &Tail, seed: f64) -> (f64, bool) {
    let q = tail.xmin as f64;
    let mean_ln = tail.sum_ln / tail.n as f64;
    let (mut lo, mut hi) = (1.0 + 1e-9, ALPHA_MAX);
    let mut alpha = seed.clamp(1.0 + 1e-6, ALPHA_MAX - 1e-6);
    for _ in 0..NEWTON_MAX_ITER {
        let (z, z1, z2) = hurwitz_zeta_derivs(alpha, q);
        let grad = mean_ln + z1 / z;
        let curv = z2 / z - (z1 / z).powi(2);
        if grad > 0.0 {
            hi = alpha;
        } else {
            lo = alpha;
        }
        let mut next = alpha - grad / curv;
        if !(next > lo && next < hi) || !next.is_finite() {
            next = 0.5 * (lo + hi);
        }
        let step = next - alpha;
        alpha = next;
        // |Δf| ≈ ½·grad²/curv
        if step.abs() < 1e-12 * alpha || 0.5 * grad * grad / curv < LIKELIHOOD_TOLERANCE * 1e-2 {
            return (alpha, alpha < ALPHA_MAX - 1e-3);
        }
        if hi - lo < 1e-14 {
            break;
        }
    }
    (alpha, false)
}

/// Fits of the three alternative families on the same tail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Alternatives {
    pub lognormal: FitResult,
    pub exponential: FitResult,
    pub truncated_power_law: FitResult,
}

/// Fits lognormal, exponential and truncated power law on `x ≥ xmin`.
pub fn fit_alternatives(sample: &Sample, xmin: u64) -> Result<Alternatives, FitError> {
    let tail = usable_tail(sample, xmin)?;
    let (alpha, _) = power_law_alpha(&tail, AlphaEstimator::Exact);
    Ok(Alternatives {
        lognormal: lognormal_on(&tail)?,
        exponential: exponential_on(&tail)?,
        truncated_power_law: truncated_on(&tail, alpha)?,
    })
}

pub fn fit_exponential(sample: &Sample, xmin: u64) -> Result<FitResult, FitError> {
    exponential_on(&usable_tail(sample, xmin)?)
}

pub fn fit_lognormal(sample: &Sample, xmin: u64) -> Result<FitResult, FitError> {
    lognormal_on(&usable_tail(sample, xmin)?)
}

pub fn fit_truncated_power_law(sample: &Sample, xmin: u64) -> Result<FitResult, FitError> {
    let tail = usable_tail(sample, xmin)?;
    let (alpha, _) = power_law_alpha(&tail, AlphaEstimator::Exact);
    truncated_on(&tail, alpha)
}

fn finite(fit: FitResult) -> Result<FitResult, FitError> {
    if fit.log_likelihood.is_finite() && fit.params.is_valid() {
        Ok(fit)
    } else {
        Err(FitError::NonConvergence { model: fit.model() })
    }
}

/// Geometric tail: the MLE has the closed form λ = ln(1 + 1/m) with
/// m = mean(x − xmin); a bracketed search around it confirms the optimum.
fn exponential_on(tail: &Tail) -> Result<FitResult, FitError> {
    let m = tail.mean() - tail.xmin as f64;
    let n = tail.n as f64;
    let shift_sum = tail.sum_x - n * tail.xmin as f64;
    let nll = |lambda: f64| -((-(-lambda).exp_m1()).ln() - lambda * shift_sum / n);
    let seed = if m > 0.0 { (1.0 / m).ln_1p().min(LAMBDA_MAX) } else { LAMBDA_MAX };
    let found = brent(nll, seed * 0.5, (seed * 2.0).min(LAMBDA_MAX), 1e-12, 200);
    let lambda = if nll(found.point) <= nll(seed) { found.point } else { seed };
    finite(FitResult::evaluate(
        Params::Exponential { lambda },
        tail,
        found.converged && seed < LAMBDA_MAX,
    ))
}

/// Discrete lognormal by Nelder–Mead over (μ, ln σ), seeded from the
/// moments of ln x.
fn lognormal_on(tail: &Tail) -> Result<FitResult, FitError> {
    let n = tail.n as f64;
    let mean_ln = tail.sum_ln / n;
    let var_ln = tail
        .distinct
        .iter()
        .map(|&(v, c)| c as f64 * ((v as f64).ln() - mean_ln).powi(2))
        .sum::<f64>()
        / n;
    let seed_sigma = var_ln.sqrt().max(0.1);
    let nll = |p: [f64; 2]| {
        let sigma = p[1].exp();
        if !sigma.is_finite() || sigma <= 0.0 {
            return f64::INFINITY;
        }
        let dist = TailDistribution::new(Params::Lognormal { mu: p[0], sigma }, tail.xmin);
        let ll: f64 = tail.distinct.iter().map(|&(v, c)| c as f64 * dist.ln_pmf(v)).sum();
        if ll.is_finite() {
            -ll / n
        } else {
            f64::INFINITY
        }
    };
    let found = nelder_mead(
        nll,
        [mean_ln, seed_sigma.ln()],
        [0.5, 0.3],
        LIKELIHOOD_TOLERANCE,
        SEARCH_MAX_EVALUATIONS,
    );
    let params = Params::Lognormal { mu: found.point[0], sigma: found.point[1].exp() };
    finite(FitResult::evaluate(params, tail, found.converged))
}

/// Truncated power law by Nelder–Mead over (α, ±λ·mean(x)). The second
/// coordinate is reflected rather than clamped: a clamp leaves a flat region
/// at λ < 0 that the simplex can collapse into. The λ = 0 boundary (the pure power law) is checked explicitly,
/// so the fit never does worse than the nested model.
fn truncated_on(tail: &Tail, power_alpha: f64) -> Result<FitResult, FitError> {
    use crate::zeta::truncated_normaliser;
    let n = tail.n as f64;
    let scale = tail.mean();
    let (mean_ln, mean_x) = (tail.sum_ln / n, tail.sum_x / n);
    let nll = |alpha: f64, lambda: f64| {
        if alpha <= 1.0 || alpha > ALPHA_MAX || lambda > LAMBDA_MAX {
            return f64::INFINITY;
        }
        alpha * mean_ln + lambda * mean_x + truncated_normaliser(alpha, lambda, tail.xmin).ln()
    };
    let found = nelder_mead(
        |p| nll(p[0], p[1].abs() / scale),
        [power_alpha.max(1.05), 0.1],
        [0.2, 0.2],
        LIKELIHOOD_TOLERANCE,
        SEARCH_MAX_EVALUATIONS,
    );
    let (alpha, lambda) = (found.point[0], found.point[1].abs() / scale);
    let boundary = nll(power_alpha, 0.0);
    let params = if boundary < found.value {
        Params::TruncatedPowerLaw { alpha: power_alpha, lambda: 0.0 }
    } else {
        Params::TruncatedPowerLaw { alpha, lambda }
    };
    finite(FitResult::evaluate(params, tail, found.converged))
}

/// Sup-norm distance between the empirical tail CDF and the model CDF over
/// all integers ≥ xmin. Both CDFs are right-continuous step functions, so the
/// supremum is attained at a data value or just before the next one.
pub(crate) fn ks_distance(dist: &TailDistribution, tail: &Tail) -> f64 {
    let values: Vec<u64> = tail.distinct.iter().map(|&(v, _)| v).collect();
    let mut points = Vec::with_capacity(values.len() * 2);
    for (i, &v) in values.iter().enumerate() {
        points.push(v);
        if let Some(&next) = values.get(i + 1) {
            if next > v + 1 {
                points.push(next - 1);
            }
        }
    }
    let cdf = dist.cdf_points(&points);
    let n = tail.n as f64;
    let mut seen = 0u64;
    let mut d: f64 = 0.0;
    let mut pi = 0;
    for (i, &(v, c)) in tail.distinct.iter().enumerate() {
        seen += c;
        let emp = seen as f64 / n;
        debug_assert_eq!(points[pi], v);
        d = d.max((emp - cdf[pi]).abs());
        pi += 1;
        if let Some(&(next, _)) = tail.distinct.get(i + 1) {
            if next > v + 1 {
                d = d.max((emp - cdf[pi]).abs());
                pi += 1;
            }
        }
    }
    d.min(1.0)
}
