//! Small derivative-free minimisers used by the alternative-model fits.

/// Outcome of a minimisation.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Minimum<P> {
    pub point: P,
    pub value: f64,
    #[allow(dead_code)]
    pub iterations: usize,
    pub converged: bool,
}

/// Brent's method on `[lo, hi]`. Stops when the bracket is narrower than
/// `xtol` (relative plus absolute) or after `max_iter` steps.
pub(crate) fn brent<F: FnMut(f64) -> f64>(
    mut f: F,
    lo: f64,
    hi: f64,
    xtol: f64,
    max_iter: usize,
) -> Minimum<f64> {
    const GOLDEN: f64 = 0.381_966_011_250_105_1;
    let (mut a, mut b) = (lo, hi);
    let mut x = a + GOLDEN * (b - a);
    let (mut w, mut v) = (x, x);
    let mut fx = f(x);
    let (mut fw, mut fv) = (fx, fx);
    let mut d: f64 = 0.0;
    let mut e: f64 = 0.0;

    for iter in 0..max_iter {
        let m = 0.5 * (a + b);
        let tol1 = xtol * x.abs() + xtol;
        let tol2 = 2.0 * tol1;
        if (x - m).abs() <= tol2 - 0.5 * (b - a) {
            return Minimum { point: x, value: fx, iterations: iter, converged: true };
        }
        let mut golden_step = true;
        if e.abs() > tol1 {
            // Parabolic fit through x, w, v.
            let r = (x - w) * (fx - fv);
            let mut q = (x - v) * (fx - fw);
            let mut p = (x - v) * q - (x - w) * r;
            q = 2.0 * (q - r);
            if q > 0.0 {
                p = -p;
            }
            q = q.abs();
            if p.abs() < (0.5 * q * e).abs() && p > q * (a - x) && p < q * (b - x) {
                e = d;
                d = p / q;
                let u = x + d;
                if u - a < tol2 || b - u < tol2 {
                    d = if m >= x { tol1 } else { -tol1 };
                }
                golden_step = false;
            }
        }
        if golden_step {
            e = if x >= m { a - x } else { b - x };
            d = GOLDEN * e;
        }
        let u = if d.abs() >= tol1 { x + d } else if d > 0.0 { x + tol1 } else { x - tol1 };
        let fu = f(u);
        if fu <= fx {
            if u >= x {
                a = x;
            } else {
                b = x;
            }
            v = w;
            fv = fw;
            w = x;
            fw = fx;
            x = u;
            fx = fu;
        } else {
            if u < x {
                a = u;
            } else {
                b = u;
            }
            if fu <= fw || w == x {
                v = w;
                fv = fw;
                w = u;
                fw = fu;
            } else if fu <= fv || v == x || v == w {
                v = u;
                fv = fu;
            }
        }
    }
    Minimum { point: x, value: fx, iterations: max_iter, converged: false }
}

/// Nelder–Mead on two parameters with restarts.
///
/// Each pass runs until the spread of simplex values is below `ftol`; the
/// simplex is then rebuilt around the best vertex and the search repeated
/// until a pass improves the value by less than `ftol`. `evaluations` caps
/// the total number of function calls.
pub(crate) fn nelder_mead<F: FnMut([f64; 2]) -> f64>(
    mut f: F,
    start: [f64; 2],
    step: [f64; 2],
    ftol: f64,
    evaluations: usize,
) -> Minimum<[f64; 2]> {
    let mut used = 0usize;
    let mut eval = |p: [f64; 2], used: &mut usize| {
        *used += 1;
        let v = f(p);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let mut best = start;
    let mut best_val = eval(start, &mut used);
    let mut scale = step;
    loop {
        let mut simplex = [
            (best, best_val),
            ([best[0] + scale[0], best[1]], 0.0),
            ([best[0], best[1] + scale[1]], 0.0),
        ];
        simplex[1].1 = eval(simplex[1].0, &mut used);
        simplex[2].1 = eval(simplex[2].0, &mut used);

        let mut pass_converged = false;
        while used < evaluations {
            simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
            let (lo, hi) = (simplex[0].1, simplex[2].1);
            if (hi - lo).abs() <= ftol * (1.0 + lo.abs().min(1.0)) && hi.is_finite() {
                pass_converged = true;
                break;
            }
            let centroid = [
                (simplex[0].0[0] + simplex[1].0[0]) / 2.0,
                (simplex[0].0[1] + simplex[1].0[1]) / 2.0,
            ];
            let toward = |t: f64| {
                [
                    centroid[0] + t * (simplex[2].0[0] - centroid[0]),
                    centroid[1] + t * (simplex[2].0[1] - centroid[1]),
                ]
            };
            let reflected = toward(-1.0);
            let fr = eval(reflected, &mut used);
            if fr < simplex[0].1 {
                let expanded = toward(-2.0);
                let fe = eval(expanded, &mut used);
                simplex[2] = if fe < fr { (expanded, fe) } else { (reflected, fr) };
            } else if fr < simplex[1].1 {
                simplex[2] = (reflected, fr);
            } else {
                let (contracted, fc) = if fr < simplex[2].1 {
                    let c = toward(-0.5);
                    (c, eval(c, &mut used))
                } else {
                    let c = toward(0.5);
                    (c, eval(c, &mut used))
                };
                if fc < simplex[2].1.min(fr) {
                    simplex[2] = (contracted, fc);
                } else {
                    // Shrink toward the best vertex.
                    let b = simplex[0].0;
                    for vertex in simplex.iter_mut().skip(1) {
                        let p = [(vertex.0[0] + b[0]) / 2.0, (vertex.0[1] + b[1]) / 2.0];
                        *vertex = (p, eval(p, &mut used));
                    }
                }
            }
        }
        simplex.sort_by(|a, b| a.1.total_cmp(&b.1));
        let improvement = best_val - simplex[0].1;
        if simplex[0].1 <= best_val {
            best = simplex[0].0;
            best_val = simplex[0].1;
        }
        if !pass_converged {
            return Minimum { point: best, value: best_val, iterations: used, converged: false };
        }
        if improvement <= ftol {
            return Minimum { point: best, value: best_val, iterations: used, converged: true };
        }
        // Restart with a simplex sized to the last move.
        scale = [
            (simplex[2].0[0] - simplex[0].0[0]).abs().max(step[0] * 1e-3),
            (simplex[2].0[1] - simplex[0].0[1]).abs().max(step[1] * 1e-3),
        ];
        scale = [scale[0].max(step[0] * 0.1), scale[1].max(step[1] * 0.1)];
    }
}
