//! Normalising constants for the discrete power law and its exponentially
//! truncated variant.
//!
//! Both sums are evaluated the same way: the first [`DIRECT_TERMS`] terms are
//! added explicitly (smallest first), and the remainder is closed with an
//! Euler–Maclaurin correction. With 10⁵ explicit terms the correction is far
//! below the 10⁻¹⁰ absolute tolerance the fitting code relies on.

/// Number of explicitly summed terms before the Euler–Maclaurin tail.
pub const DIRECT_TERMS: u64 = 100_000;

/// Hurwitz zeta function ζ(s, q) = Σ_{k≥0} (q + k)^(−s), for s > 1, q ≥ 1.
///
/// ```
/// use npswatch_heavytail::zeta::hurwitz_zeta;
/// // ζ(2, 1) = π²/6
/// let z = hurwitz_zeta(2.0, 1.0);
/// assert!((z - std::f64::consts::PI.powi(2) / 6.0).abs() < 1e-10);
/// ```
pub fn hurwitz_zeta(s: f64, q: f64) -> f64 {
    hurwitz_zeta_derivs(s, q).0
}

/// ζ(s, q) together with its first and second derivatives in `s`.
///
/// Returns `(ζ, ∂ζ/∂s, ∂²ζ/∂s²)`. Used by the Newton solver for the power-law
/// exponent, where the log-likelihood gradient is `−Σ ln x − n ζ'/ζ`.
pub fn hurwitz_zeta_derivs(s: f64, q: f64) -> (f64, f64, f64) {
    debug_assert!(s > 1.0, "hurwitz zeta diverges for s <= 1 (s = {s})");
    debug_assert!(q > 0.0);

    let mut s0 = 0.0;
    let mut s1 = 0.0;
    let mut s2 = 0.0;
    // Smallest terms first.
    for k in (0..DIRECT_TERMS).rev() {
        let x = q + k as f64;
        let lx = x.ln();
        let t = (-s * lx).exp();
        s0 += t;
        s1 += lx * t;
        s2 += lx * lx * t;
    }
    let m = q + DIRECT_TERMS as f64;
    let (t0, t1, t2) = em_tail(s, m);
    (s0 + t0, -s1 + t1, s2 + t2)
}

/// Euler–Maclaurin remainder Σ_{k≥0} (m+k)^(−s) and its first two
/// s-derivatives. Each term has the form g(s) · m^(−s−e).
fn em_tail(s: f64, m: f64) -> (f64, f64, f64) {
    let l = m.ln();
    let mut v = 0.0;
    let mut d1 = 0.0;
    let mut d2 = 0.0;
    let mut add = |g: f64, g1: f64, g2: f64, e: f64| {
        let p = (-(s + e) * l).exp();
        v += g * p;
        d1 += (g1 - l * g) * p;
        d2 += (g2 - 2.0 * l * g1 + l * l * g) * p;
    };
    // ∫_m^∞ x^(−s) dx = m^(1−s) / (s − 1)
    let r = 1.0 / (s - 1.0);
    add(r, -r * r, 2.0 * r * r * r, -1.0);
    // f(m) / 2
    add(0.5, 0.0, 0.0, 0.0);
    // −B₂/2! f'(m) = s m^(−s−1) / 12
    add(s / 12.0, 1.0 / 12.0, 0.0, 1.0);
    // −B₄/4! f'''(m) = −s(s+1)(s+2) m^(−s−3) / 720
    let p3 = s * (s + 1.0) * (s + 2.0);
    let p3d = 3.0 * s * s + 6.0 * s + 2.0;
    let p3dd = 6.0 * s + 6.0;
    add(-p3 / 720.0, -p3d / 720.0, -p3dd / 720.0, 3.0);
    // −B₆/6! f⁽⁵⁾(m) = s(s+1)(s+2)(s+3)(s+4) m^(−s−5) / 30240
    let p5 = p3 * (s + 3.0) * (s + 4.0);
    let p5d = 5.0 * s.powi(4) + 40.0 * s.powi(3) + 105.0 * s * s + 100.0 * s + 24.0;
    let p5dd = 20.0 * s.powi(3) + 120.0 * s * s + 210.0 * s + 100.0;
    add(p5 / 30240.0, p5d / 30240.0, p5dd / 30240.0, 5.0);
    (v, d1, d2)
}

/// Normaliser of the exponentially truncated power law,
/// Z(α, λ, q) = Σ_{k≥q} k^(−α) e^(−λk), for λ ≥ 0 (α > 1 required when λ = 0).
pub fn truncated_normaliser(alpha: f64, lambda: f64, q: u64) -> f64 {
    if lambda == 0.0 {
        return hurwitz_zeta(alpha, q as f64);
    }
    let term = |k: f64| (-alpha * k.ln() - lambda * k).exp();

    // Direct part, summed forward so the early exit can fire once terms are
    // negligible; the exponential factor guarantees they eventually are.
    let mut direct = 0.0;
    let end = q + DIRECT_TERMS;
    let mut k = q;
    while k < end {
        let t = term(k as f64);
        direct += t;
        if t < direct * 1e-18 && lambda * k as f64 > 1.0 {
            return direct;
        }
        k += 1;
    }
    let m = end as f64;
    // Euler–Maclaurin: ∫_m^∞ f + f(m)/2 − f'(m)/12, with f'(x) = f(x)(−α/x − λ).
    let fm = term(m);
    direct + truncated_tail_integral(alpha, lambda, m) + fm / 2.0 + fm * (alpha / m + lambda) / 12.0
}

/// ∫_m^∞ x^(−α) e^(−λx) dx for λ > 0, by Gauss–Legendre quadrature after the
/// substitution x = m·eᵘ.
pub(crate) fn truncated_tail_integral(alpha: f64, lambda: f64, m: f64) -> f64 {
    let c = lambda * m;
    // Exponent of the integrand: (1−α)u − c(eᵘ − 1); find where it drops below −45.
    let mut upper = f64::INFINITY;
    if c > 0.0 {
        upper = (1.0 + 45.0 / c).ln();
    }
    if alpha > 1.0 {
        upper = upper.min(45.0 / (alpha - 1.0));
    }
    if !upper.is_finite() {
        return f64::INFINITY;
    }
    let g = |u: f64| ((1.0 - alpha) * u - c * u.exp_m1()).exp();
    let panels = 64;
    let h = upper / panels as f64;
    let mut acc = 0.0;
    for p in 0..panels {
        let a = p as f64 * h;
        let mid = a + h / 2.0;
        for (node, weight) in GL8 {
            acc += weight * g(mid + node * h / 2.0);
        }
    }
    acc *= h / 2.0;
    m.powf(1.0 - alpha) * (-lambda * m).exp() * acc
}

/// 8-point Gauss–Legendre nodes and weights on [−1, 1].
#[allow(clippy::excessive_precision)]
const GL8: [(f64, f64); 8] = [
    (-0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
    (-0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (-0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (-0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_47),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_26),
];
