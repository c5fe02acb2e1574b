use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::fit::{fit_alternatives, fit_power_law, fit_power_law_at, FitResult};
use crate::{FitError, Model, Sample};

/// Comparisons with p above this are reported as indistinguishable.
pub const INDISTINGUISHABLE_P: f64 = 0.1;

/// Normalised log-likelihood-ratio test between two fits on the same tail.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub model_a: Model,
    pub model_b: Model,
    /// R = Σ [ln p_a(x) − ln p_b(x)] over tail points; positive favours `model_a`.
    pub log_likelihood_ratio: f64,
    /// R / (σ √n), the statistic the p-value is computed from.
    pub normalized_ratio: f64,
    /// Two-sided p-value, erfc(|R| / (σ √(2n))).
    pub p_value: f64,
}

impl Comparison {
    pub fn favours(&self) -> Option<Model> {
        if self.log_likelihood_ratio > 0.0 {
            Some(self.model_a)
        } else if self.log_likelihood_ratio < 0.0 {
            Some(self.model_b)
        } else {
            None
        }
    }
}

/// Compares two fits point by point over their shared tail.
///
/// When the per-point differences have zero variance (identical models), the
/// result is R = 0, p = 1.
pub fn compare(sample: &Sample, a: &FitResult, b: &FitResult) -> Result<Comparison, FitError> {
    if a.xmin != b.xmin {
        return Err(FitError::XminMismatch { a: a.xmin, b: b.xmin });
    }
    let (da, db) = (a.distribution(), b.distribution());
    let diffs: Vec<(f64, u64)> = sample
        .distinct()
        .into_iter()
        .filter(|&(v, _)| v >= a.xmin)
        .map(|(v, c)| (da.ln_pmf(v) - db.ln_pmf(v), c))
        .collect();
    let n: u64 = diffs.iter().map(|&(_, c)| c).sum();
    let nf = n as f64;
    let r: f64 = diffs.iter().map(|&(d, c)| d * c as f64).sum();
    let mean = r / nf;
    let var = if n > 1 {
        diffs.iter().map(|&(d, c)| c as f64 * (d - mean).powi(2)).sum::<f64>() / (nf - 1.0)
    } else {
        0.0
    };
    let sigma = var.sqrt();
    if sigma == 0.0 || !sigma.is_finite() {
        return Ok(Comparison {
            model_a: a.model(),
            model_b: b.model(),
            log_likelihood_ratio: 0.0,
            normalized_ratio: 0.0,
            p_value: 1.0,
        });
    }
    Ok(Comparison {
        model_a: a.model(),
        model_b: b.model(),
        log_likelihood_ratio: r,
        normalized_ratio: r / (sigma * nf.sqrt()),
        p_value: erfc(r.abs() / (sigma * (2.0 * nf).sqrt())).clamp(0.0, 1.0),
    })
}

/// A model's place in the likelihood ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankEntry {
    pub model: Model,
    pub log_likelihood: f64,
    /// 1-based group; consecutive models whose comparison has
    /// p > [`INDISTINGUISHABLE_P`] share a tier.
    pub tier: usize,
}

/// Four fits on a shared tail, all six pairwise comparisons, and the ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DistFitReport {
    pub xmin: u64,
    pub n_tail: u64,
    /// In [`Model::ALL`] order.
    pub fits: Vec<FitResult>,
    /// Pairs (a, b) with a before b in [`Model::ALL`] order.
    pub comparisons: Vec<Comparison>,
    /// Best first.
    pub ranking: Vec<RankEntry>,
}

impl DistFitReport {
    pub fn fit(&self, model: Model) -> &FitResult {
        self.fits.iter().find(|f| f.model() == model).expect("every model is fitted")
    }

    /// Comparison oriented as (a, b), flipping a stored (b, a) pair.
    pub fn comparison(&self, a: Model, b: Model) -> Option<Comparison> {
        self.comparisons.iter().find_map(|c| {
            if c.model_a == a && c.model_b == b {
                Some(c.clone())
            } else if c.model_a == b && c.model_b == a {
                Some(Comparison {
                    model_a: a,
                    model_b: b,
                    log_likelihood_ratio: -c.log_likelihood_ratio,
                    normalized_ratio: -c.normalized_ratio,
                    p_value: c.p_value,
                })
            } else {
                None
            }
        })
    }

    pub fn order(&self) -> Vec<Model> {
        self.ranking.iter().map(|r| r.model).collect()
    }

    pub fn tier_of(&self, model: Model) -> usize {
        self.ranking.iter().find(|r| r.model == model).map(|r| r.tier).unwrap_or(usize::MAX)
    }
}

/// Fits all four families on the KS-selected power-law tail and ranks them.
pub fn model_ordering(sample: &Sample) -> Result<DistFitReport, FitError> {
    let power = fit_power_law(sample)?;
    report_from(sample, power)
}

/// As [`model_ordering`], with xmin fixed by the caller.
pub fn model_ordering_at(sample: &Sample, xmin: u64) -> Result<DistFitReport, FitError> {
    let power = fit_power_law_at(sample, xmin)?;
    report_from(sample, power)
}

fn report_from(sample: &Sample, power: FitResult) -> Result<DistFitReport, FitError> {
    let alt = fit_alternatives(sample, power.xmin)?;
    let fits = vec![power, alt.lognormal, alt.exponential, alt.truncated_power_law];
    let mut comparisons = Vec::with_capacity(6);
    for i in 0..fits.len() {
        for j in i + 1..fits.len() {
            comparisons.push(compare(sample, &fits[i], &fits[j])?);
        }
    }
    let mut order: Vec<usize> = (0..fits.len()).collect();
    order.sort_by(|&i, &j| {
        fits[j].log_likelihood.total_cmp(&fits[i].log_likelihood).then(i.cmp(&j))
    });
    let mut ranking = Vec::with_capacity(fits.len());
    let mut tier = 1;
    for (pos, &i) in order.iter().enumerate() {
        if pos > 0 {
            let prev = &fits[order[pos - 1]];
            if compare(sample, prev, &fits[i])?.p_value <= INDISTINGUISHABLE_P {
                tier += 1;
            }
        }
        ranking.push(RankEntry { model: fits[i].model(), log_likelihood: fits[i].log_likelihood, tier });
    }
    Ok(DistFitReport { xmin: fits[0].xmin, n_tail: fits[0].n_tail, fits, comparisons, ranking })
}
