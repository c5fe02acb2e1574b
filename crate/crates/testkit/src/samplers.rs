//! Oracle samplers for the discrete heavy-tailed families.
//!
//! The power-law sampler inverts a CDF table built by plain summation, with
//! the continuous approximation x^(1−α)/(α−1) for mass beyond the table; it
//! shares nothing with the fitting code's zeta evaluation.

use rand::Rng;
use rand_distr::{Distribution, Geometric, LogNormal};

const TABLE_LEN: usize = 1_000_000;

/// Inverse-CDF sampler for P(X = x) ∝ x^(−α), x ≥ xmin.
pub struct PowerLawSampler {
    alpha: f64,
    xmin: u64,
    /// cdf[i] = P(X ≤ xmin + i)
    cdf: Vec<f64>,
}

impl PowerLawSampler {
    pub fn new(alpha: f64, xmin: u64) -> Self {
        assert!(alpha > 1.0 && xmin >= 1);
        let terms: Vec<f64> =
            (0..TABLE_LEN).map(|i| ((xmin + i as u64) as f64).powf(-alpha)).collect();
        // Sum small-to-large for accuracy.
        let head: f64 = terms.iter().rev().sum();
        let edge = (xmin + TABLE_LEN as u64) as f64 - 0.5;
        let tail = edge.powf(1.0 - alpha) / (alpha - 1.0);
        let total = head + tail;
        let mut acc = 0.0;
        let cdf = terms
            .iter()
            .map(|t| {
                acc += t;
                acc / total
            })
            .collect();
        PowerLawSampler { alpha, xmin, cdf }
    }

    pub fn draw<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let u: f64 = rng.random();
        let last = *self.cdf.last().unwrap();
        if u <= last {
            let i = self.cdf.partition_point(|&c| c < u);
            self.xmin + i as u64
        } else {
            // Continuous approximation past the table.
            let edge = (self.xmin + TABLE_LEN as u64) as f64 - 0.5;
            let frac = (1.0 - u) / (1.0 - last);
            (edge * frac.powf(-1.0 / (self.alpha - 1.0)) + 0.5).floor() as u64
        }
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Vec<u64> {
        (0..n).map(|_| self.draw(rng)).collect()
    }
}

/// P(X = x) ∝ x^(−α) e^(−λx), x ≥ xmin: power-law proposals thinned with
/// acceptance e^(−λ(x − xmin)).
pub fn truncated_power_law<R: Rng + ?Sized>(
    rng: &mut R,
    alpha: f64,
    lambda: f64,
    xmin: u64,
    n: usize,
) -> Vec<u64> {
    let proposal = PowerLawSampler::new(alpha, xmin);
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let x = proposal.draw(rng);
        let keep: f64 = rng.random();
        if keep < (-lambda * (x - xmin) as f64).exp() {
            out.push(x);
        }
    }
    out
}

/// Geometric tail P(X = x) ∝ e^(−λx), x ≥ xmin.
pub fn exponential<R: Rng + ?Sized>(rng: &mut R, lambda: f64, xmin: u64, n: usize) -> Vec<u64> {
    let geo = Geometric::new(-(-lambda).exp_m1()).unwrap();
    (0..n).map(|_| xmin + geo.sample(rng)).collect()
}

/// Rounded lognormal conditioned on x ≥ xmin.
pub fn lognormal<R: Rng + ?Sized>(rng: &mut R, mu: f64, sigma: f64, xmin: u64, n: usize) -> Vec<u64> {
    let ln = LogNormal::new(mu, sigma).unwrap();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let y: f64 = ln.sample(rng);
        let x = y.round();
        if x >= xmin as f64 && x < 1e18 {
            out.push(x as u64);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_distr::Zeta;

    #[test]
    fn inverse_cdf_agrees_with_rejection_zeta_sampler() {
        // Independent samplers: compare the frequency of small values.
        let mut rng = crate::rng(7);
        let inv = PowerLawSampler::new(2.5, 1).sample(&mut rng, 200_000);
        let zeta = Zeta::new(2.5).unwrap();
        let rej: Vec<u64> = (0..200_000).map(|_| zeta.sample(&mut rng) as u64).collect();
        for x in 1..=4u64 {
            let a = inv.iter().filter(|&&v| v == x).count() as f64 / 2e5;
            let b = rej.iter().filter(|&&v| v == x).count() as f64 / 2e5;
            assert!((a - b).abs() < 0.006, "x={x}: {a} vs {b}");
        }
    }

    #[test]
    fn power_law_head_frequency_matches_pmf() {
        // P(X=1) = 1/ζ(2.5) ≈ 0.7454
        let mut rng = crate::rng(1);
        let s = PowerLawSampler::new(2.5, 1).sample(&mut rng, 100_000);
        let p1 = s.iter().filter(|&&v| v == 1).count() as f64 / 1e5;
        assert!((p1 - 0.745_4).abs() < 0.005, "{p1}");
    }

    #[test]
    fn exponential_mean() {
        let mut rng = crate::rng(2);
        let s = exponential(&mut rng, 0.3, 1, 100_000);
        let mean = s.iter().sum::<u64>() as f64 / 1e5;
        // mean(x − 1) = e^(−λ)/(1 − e^(−λ))
        let want = 1.0 + (-0.3f64).exp() / (1.0 - (-0.3f64).exp());
        assert!((mean - want).abs() < 0.05, "{mean} vs {want}");
    }
}
