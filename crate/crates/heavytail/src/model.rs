use std::fmt;

use serde::{Deserialize, Serialize};
use statrs::function::erf::erfc;

use crate::zeta::{hurwitz_zeta, truncated_normaliser};

/// Candidate distribution families.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Model {
    PowerLaw,
    Lognormal,
    Exponential,
    TruncatedPowerLaw,
}

impl Model {
    pub const ALL: [Model; 4] =
        [Model::PowerLaw, Model::Lognormal, Model::Exponential, Model::TruncatedPowerLaw];

    pub fn as_str(self) -> &'static str {
        match self {
            Model::PowerLaw => "power_law",
            Model::Lognormal => "lognormal",
            Model::Exponential => "exponential",
            Model::TruncatedPowerLaw => "truncated_power_law",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Fitted parameters, one variant per family.
///
/// All families are discrete and conditioned on `x ≥ xmin`:
///
/// | family | pmf ∝ |
/// |---|---|
/// | power law | x^(−α) |
/// | truncated power law | x^(−α) e^(−λx) |
/// | exponential | e^(−λx) |
/// | lognormal | Φ((ln(x+½)−μ)/σ) − Φ((ln(x−½)−μ)/σ) |
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "model", content = "params", rename_all = "snake_case")]
pub enum Params {
    PowerLaw { alpha: f64 },
    Lognormal { mu: f64, sigma: f64 },
    Exponential { lambda: f64 },
    TruncatedPowerLaw { alpha: f64, lambda: f64 },
}

impl Params {
    pub fn model(&self) -> Model {
        match self {
            Params::PowerLaw { .. } => Model::PowerLaw,
            Params::Lognormal { .. } => Model::Lognormal,
            Params::Exponential { .. } => Model::Exponential,
            Params::TruncatedPowerLaw { .. } => Model::TruncatedPowerLaw,
        }
    }

    /// Whether the parameters describe a normalisable distribution.
    pub fn is_valid(&self) -> bool {
        match *self {
            Params::PowerLaw { alpha } => alpha > 1.0 && alpha.is_finite(),
            Params::Lognormal { mu, sigma } => mu.is_finite() && sigma > 0.0 && sigma.is_finite(),
            Params::Exponential { lambda } => lambda > 0.0 && lambda.is_finite(),
            Params::TruncatedPowerLaw { alpha, lambda } => {
                alpha > 1.0 && alpha.is_finite() && lambda >= 0.0 && lambda.is_finite()
            }
        }
    }
}

/// A parameterised family restricted to `x ≥ xmin`, with its normaliser
/// computed once.
#[derive(Debug, Clone)]
pub struct TailDistribution {
    params: Params,
    xmin: u64,
    ln_norm: f64,
}

impl TailDistribution {
    pub fn new(params: Params, xmin: u64) -> Self {
        assert!(xmin >= 1, "xmin must be at least 1");
        let ln_norm = match params {
            Params::PowerLaw { alpha } => hurwitz_zeta(alpha, xmin as f64).ln(),
            Params::TruncatedPowerLaw { alpha, lambda } => {
                truncated_normaliser(alpha, lambda, xmin).ln()
            }
            Params::Exponential { .. } => 0.0,
            Params::Lognormal { mu, sigma } => ln_norm_sf(z_score(xmin as f64 - 0.5, mu, sigma)),
        };
        TailDistribution { params, xmin, ln_norm }
    }

    pub fn params(&self) -> Params {
        self.params
    }

    pub fn xmin(&self) -> u64 {
        self.xmin
    }

    /// Natural log of P(X = x | X ≥ xmin); −∞ below `xmin`.
    pub fn ln_pmf(&self, x: u64) -> f64 {
        if x < self.xmin {
            return f64::NEG_INFINITY;
        }
        let xf = x as f64;
        match self.params {
            Params::PowerLaw { alpha } => -alpha * xf.ln() - self.ln_norm,
            Params::TruncatedPowerLaw { alpha, lambda } => {
                -alpha * xf.ln() - lambda * xf - self.ln_norm
            }
            Params::Exponential { lambda } => {
                (-(-lambda).exp_m1()).ln() - lambda * (x - self.xmin) as f64
            }
            Params::Lognormal { mu, sigma } => {
                ln_interval_mass(xf - 0.5, xf + 0.5, mu, sigma) - self.ln_norm
            }
        }
    }

    pub fn pmf(&self, x: u64) -> f64 {
        self.ln_pmf(x).exp()
    }

    /// P(X ≤ v | X ≥ xmin) at each point of an ascending list.
    pub fn cdf_points(&self, points: &[u64]) -> Vec<f64> {
        debug_assert!(points.windows(2).all(|w| w[0] <= w[1]));
        match self.params {
            Params::Exponential { lambda } => points
                .iter()
                .map(|&v| {
                    if v < self.xmin {
                        0.0
                    } else {
                        -(-lambda * (v - self.xmin + 1) as f64).exp_m1()
                    }
                })
                .collect(),
            Params::Lognormal { mu, sigma } => {
                let base = ln_norm_sf(z_score(self.xmin as f64 - 0.5, mu, sigma));
                points
                    .iter()
                    .map(|&v| {
                        if v < self.xmin {
                            0.0
                        } else {
                            let upper = ln_norm_sf(z_score(v as f64 + 0.5, mu, sigma));
                            -(upper - base).exp_m1()
                        }
                    })
                    .collect()
            }
            Params::PowerLaw { alpha } => self.power_cdf(points, alpha, 0.0),
            Params::TruncatedPowerLaw { alpha, lambda } => self.power_cdf(points, alpha, lambda),
        }
    }

    /// Partial sums Σ_{k=xmin}^{v} k^(−α) e^(−λk) accumulated across the
    /// points; long gaps are bridged with the closed-form tail instead.
    fn power_cdf(&self, points: &[u64], alpha: f64, lambda: f64) -> Vec<f64> {
        const DIRECT_GAP: u64 = 20_000;
        let norm = self.ln_norm.exp();
        let term = |k: u64| (-alpha * (k as f64).ln() - lambda * k as f64).exp();
        let mut partial = 0.0;
        let mut next = self.xmin; // first k not yet included
        let mut out = Vec::with_capacity(points.len());
        for &v in points {
            if v < self.xmin {
                out.push(0.0);
                continue;
            }
            if v + 1 > next {
                if v + 1 - next <= DIRECT_GAP {
                    while next <= v {
                        partial += term(next);
                        next += 1;
                    }
                } else {
                    partial = norm - truncated_normaliser(alpha, lambda, v + 1);
                    next = v + 1;
                }
            }
            out.push((partial / norm).min(1.0));
        }
        out
    }
}

pub(crate) fn z_score(y: f64, mu: f64, sigma: f64) -> f64 {
    (y.ln() - mu) / sigma
}

/// ln of the standard normal survival function Q(z) = P(Z > z).
pub(crate) fn ln_norm_sf(z: f64) -> f64 {
    if z < 30.0 {
        (0.5 * erfc(z / std::f64::consts::SQRT_2)).ln()
    } else {
        // Asymptotic expansion; erfc underflows near z = 38.
        let z2 = z * z;
        let series = 1.0 - 1.0 / z2 + 3.0 / (z2 * z2) - 15.0 / (z2 * z2 * z2);
        -0.5 * z2 - (z * (2.0 * std::f64::consts::PI).sqrt()).ln() + series.ln()
    }
}

/// ln P(lo < Y < hi) for Y lognormal(μ, σ), stable in both tails.
pub(crate) fn ln_interval_mass(lo: f64, hi: f64, mu: f64, sigma: f64) -> f64 {
    let a = if lo <= 0.0 { f64::NEG_INFINITY } else { z_score(lo, mu, sigma) };
    let b = z_score(hi, mu, sigma);
    // Work in whichever tail keeps both probabilities small.
    let (near, far) = if a >= 0.0 { (a, b) } else { (-b, -a) };
    let ln_near = ln_norm_sf(near);
    let ln_far = ln_norm_sf(far);
    let gap = ln_near - ln_far; // ≥ 0
    if gap > 1e-7 {
        ln_near + ln_one_minus_exp(-gap)
    } else {
        // Interval too narrow to resolve by subtraction: density × width.
        let mid = 0.5 * (a.max(-1e300) + b);
        let width = b - a;
        -0.5 * mid * mid - 0.5 * (2.0 * std::f64::consts::PI).ln() + width.ln()
    }
}

/// ln(1 − eˣ) for x < 0.
fn ln_one_minus_exp(x: f64) -> f64 {
    if x > -std::f64::consts::LN_2 {
        (-x.exp_m1()).ln()
    } else {
        (-x.exp()).ln_1p()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn total_mass(d: &TailDistribution, upto: u64) -> f64 {
        (d.xmin()..=upto).map(|x| d.pmf(x)).sum()
    }

    #[test]
    fn params_serialise_with_model_tag() {
        let p = Params::TruncatedPowerLaw { alpha: 2.2, lambda: 0.01 };
        let json = serde_json::to_string(&p).unwrap();
        assert_eq!(json, r#"{"model":"truncated_power_law","params":{"alpha":2.2,"lambda":0.01}}"#);
        assert_eq!(serde_json::from_str::<Params>(&json).unwrap(), p);
    }

    #[test]
    fn exponential_and_truncated_mass_sums_to_one() {
        let d = TailDistribution::new(Params::Exponential { lambda: 0.3 }, 3);
        assert!((total_mass(&d, 500) - 1.0).abs() < 1e-12);
        let d = TailDistribution::new(Params::TruncatedPowerLaw { alpha: 1.8, lambda: 0.05 }, 2);
        assert!((total_mass(&d, 5000) - 1.0).abs() < 1e-10);
    }

    #[test]
    fn lognormal_mass_and_cdf_agree() {
        let d = TailDistribution::new(Params::Lognormal { mu: 1.0, sigma: 1.0 }, 1);
        let direct = total_mass(&d, 10_000);
        let cdf = d.cdf_points(&[10_000])[0];
        assert!((direct - cdf).abs() < 1e-10, "{direct} vs {cdf}");
        assert!((cdf - 1.0).abs() < 1e-8);
    }

    #[test]
    fn power_cdf_matches_direct_partial_sums() {
        let d = TailDistribution::new(Params::PowerLaw { alpha: 2.5 }, 2);
        let pts = [2, 3, 10, 50_000, 50_001];
        let cdf = d.cdf_points(&pts);
        for (&v, &c) in pts.iter().zip(&cdf) {
            let direct: f64 = (2..=v).map(|x| d.pmf(x)).sum();
            assert!((direct - c).abs() < 1e-10, "v={v}: {direct} vs {c}");
        }
    }

    #[test]
    fn far_tail_lognormal_is_finite() {
        let v = ln_interval_mass(1e9 - 0.5, 1e9 + 0.5, 0.0, 1.0);
        assert!(v.is_finite() && v < -100.0);
        let sf = ln_norm_sf(50.0);
        assert!((sf - (-1_254.831_361_139_42)).abs() < 1e-6, "{sf}");
    }
}
