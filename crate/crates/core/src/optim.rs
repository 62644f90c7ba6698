// Copyright 2026 The ising-cn Authors
// SPDX-License-Identifier: Apache-2.0

//! Small derivative-free optimizers: golden-section line search and a
//! box-constrained Nelder–Mead simplex.

use std::cmp::Ordering;

const INV_PHI: f64 = 0.618_033_988_749_894_9;

/// Golden-section search for a maximum of `f` on `[lo, hi]`. Stops when the
/// bracket is narrower than `tol`; returns the best interior point seen.
pub fn golden_section_max<F>(mut f: F, lo: f64, hi: f64, tol: f64) -> (f64, f64)
where
    F: FnMut(f64) -> f64,
{
    let (mut a, mut b) = (lo, hi);
    let mut x1 = b - INV_PHI * (b - a);
    let mut x2 = a + INV_PHI * (b - a);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while b - a > tol {
        if f1 >= f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - INV_PHI * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + INV_PHI * (b - a);
            f2 = f(x2);
        }
    }
    if f1 >= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Bisection for a sign change of `g` on `[lo, hi]`. Returns `None` when
/// the endpoints have the same sign.
pub fn bisect_root<G>(mut g: G, mut lo: f64, mut hi: f64) -> Option<f64>
where
    G: FnMut(f64) -> f64,
{
    let mut g_lo = g(lo);
    let g_hi = g(hi);
    if g_lo == 0.0 {
        return Some(lo);
    }
    if g_hi == 0.0 {
        return Some(hi);
    }
    if g_lo.signum() == g_hi.signum() {
        return None;
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let g_mid = g(mid);
        if g_mid == 0.0 {
            return Some(mid);
        }
        if g_mid.signum() == g_lo.signum() {
            lo = mid;
            g_lo = g_mid;
        } else {
            hi = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Termination {
    /// The best value reached the objective tolerance.
    Converged,
    /// The simplex collapsed onto a point whose value is above tolerance.
    Stalled,
    /// The evaluation budget ran out.
    Exhausted,
}

#[derive(Debug, Clone)]
pub struct NelderMeadOptions {
    pub lower: Vec<f64>,
    pub upper: Vec<f64>,
    /// Per-coordinate offsets of the initial simplex vertices from the start.
    pub initial_steps: Vec<f64>,
    pub max_evals: usize,
    /// Stop as soon as the best value is `<= f_tol`.
    pub f_tol: f64,
    /// Simplex collapse threshold, relative to the box width per coordinate.
    pub x_tol: f64,
}

#[derive(Debug, Clone)]
pub struct NelderMeadResult {
    pub x: Vec<f64>,
    pub value: f64,
    pub evaluations: usize,
    pub termination: Termination,
}

struct Vertex {
    x: Vec<f64>,
    f: f64,
}

fn by_value(a: &Vertex, b: &Vertex) -> Ordering {
    a.f.total_cmp(&b.f)
}

/// Minimizes `f` over the box `[lower, upper]`. Trial points are clamped
/// into the box, so every evaluated point (and the result) is feasible.
/// Fully deterministic.
pub fn nelder_mead<F>(mut f: F, start: &[f64], opts: &NelderMeadOptions) -> NelderMeadResult
where
    F: FnMut(&[f64]) -> f64,
{
    let n = start.len();
    let clamp = |x: Vec<f64>| -> Vec<f64> {
        x.into_iter()
            .enumerate()
            .map(|(i, v)| v.clamp(opts.lower[i], opts.upper[i]))
            .collect()
    };
    let mut evals = 0usize;
    let mut eval = |x: &[f64], evals: &mut usize| -> f64 {
        *evals += 1;
        let v = f(x);
        if v.is_nan() {
            f64::INFINITY
        } else {
            v
        }
    };

    let x0 = clamp(start.to_vec());
    let f0 = eval(&x0, &mut evals);
    if f0 <= opts.f_tol {
        return NelderMeadResult {
            x: x0,
            value: f0,
            evaluations: evals,
            termination: Termination::Converged,
        };
    }

    let mut simplex = vec![Vertex {
        x: x0.clone(),
        f: f0,
    }];
    for i in 0..n {
        let mut x = x0.clone();
        x[i] += opts.initial_steps[i];
        if x[i] > opts.upper[i] {
            x[i] = x0[i] - opts.initial_steps[i];
        }
        let x = clamp(x);
        let fx = eval(&x, &mut evals);
        simplex.push(Vertex { x, f: fx });
    }

    let widths: Vec<f64> = (0..n)
        .map(|i| (opts.upper[i] - opts.lower[i]).max(f64::MIN_POSITIVE))
        .collect();

    let termination = loop {
        simplex.sort_by(by_value);
        if simplex[0].f <= opts.f_tol {
            break Termination::Converged;
        }
        let diameter = simplex[1..]
            .iter()
            .flat_map(|v| {
                v.x.iter()
                    .zip(&simplex[0].x)
                    .zip(&widths)
                    .map(|((a, b), w)| (a - b).abs() / w)
            })
            .fold(0.0, f64::max);
        if diameter <= opts.x_tol {
            break Termination::Stalled;
        }
        if evals >= opts.max_evals {
            break Termination::Exhausted;
        }

        let worst = n;
        let centroid: Vec<f64> = (0..n)
            .map(|i| simplex[..worst].iter().map(|v| v.x[i]).sum::<f64>() / n as f64)
            .collect();
        let along = |coef: f64| -> Vec<f64> {
            clamp(
                centroid
                    .iter()
                    .zip(&simplex[worst].x)
                    .map(|(c, w)| c + coef * (c - w))
                    .collect(),
            )
        };

        let xr = along(1.0);
        let fr = eval(&xr, &mut evals);
        if fr < simplex[0].f {
            let xe = along(2.0);
            let fe = eval(&xe, &mut evals);
            simplex[worst] = if fe < fr {
                Vertex { x: xe, f: fe }
            } else {
                Vertex { x: xr, f: fr }
            };
            continue;
        }
        if fr < simplex[worst - 1].f {
            simplex[worst] = Vertex { x: xr, f: fr };
            continue;
        }
        // outside contraction if the reflection beat the worst vertex,
        // inside contraction otherwise
        let outside = fr < simplex[worst].f;
        let xc = along(if outside { 0.5 } else { -0.5 });
        let fc = eval(&xc, &mut evals);
        let accept = if outside {
            fc <= fr
        } else {
            fc < simplex[worst].f
        };
        if accept {
            simplex[worst] = Vertex { x: xc, f: fc };
            continue;
        }
        // shrink toward the best vertex
        let best = simplex[0].x.clone();
        for v in simplex.iter_mut().skip(1) {
            let x = clamp(
                best.iter()
                    .zip(&v.x)
                    .map(|(b, x)| b + 0.5 * (x - b))
                    .collect(),
            );
            v.f = eval(&x, &mut evals);
            v.x = x;
        }
    };

    simplex.sort_by(by_value);
    let best = simplex.swap_remove(0);
    NelderMeadResult {
        x: best.x,
        value: best.f,
        evaluations: evals,
        termination,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn golden_finds_parabola_peak() {
        let (x, fx) = golden_section_max(|x| -(x - 0.3).powi(2), -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-9);
        assert!(fx <= 0.0);
    }

    #[test]
    fn bisect_sign_change() {
        let r = bisect_root(|x| x * x - 2.0, 0.0, 2.0).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-15);
        assert!(bisect_root(|x| x * x + 1.0, 0.0, 2.0).is_none());
    }

    fn opts(n: usize, lo: f64, hi: f64) -> NelderMeadOptions {
        NelderMeadOptions {
            lower: vec![lo; n],
            upper: vec![hi; n],
            initial_steps: vec![0.1; n],
            max_evals: 5000,
            f_tol: 1e-14,
            x_tol: 1e-12,
        }
    }

    #[test]
    fn rosenbrock() {
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = nelder_mead(f, &[-1.2, 1.0], &opts(2, -5.0, 5.0));
        assert_eq!(r.termination, Termination::Converged);
        assert!(
            (r.x[0] - 1.0).abs() < 1e-5 && (r.x[1] - 1.0).abs() < 1e-5,
            "{:?}",
            r.x
        );
    }

    #[test]
    fn respects_box() {
        // unconstrained minimum at (3, 3), outside the box
        let f = |x: &[f64]| (x[0] - 3.0).powi(2) + (x[1] - 3.0).powi(2) + 1.0;
        let r = nelder_mead(f, &[0.0, 0.0], &opts(2, -1.0, 1.0));
        assert!(r.x.iter().all(|v| (-1.0..=1.0).contains(v)));
        assert!((r.x[0] - 1.0).abs() < 1e-6 && (r.x[1] - 1.0).abs() < 1e-6);
        assert_eq!(r.termination, Termination::Stalled);
    }

    #[test]
    fn fixed_point_start_returns_immediately() {
        let r = nelder_mead(|x: &[f64]| x[0] * x[0], &[0.0], &opts(1, -1.0, 1.0));
        assert_eq!(r.evaluations, 1);
        assert_eq!(r.x, vec![0.0]);
    }

    #[test]
    fn budget_exhaustion() {
        let mut o = opts(2, -5.0, 5.0);
        o.max_evals = 10;
        let f = |x: &[f64]| (1.0 - x[0]).powi(2) + 100.0 * (x[1] - x[0] * x[0]).powi(2);
        let r = nelder_mead(f, &[-1.2, 1.0], &o);
        assert_eq!(r.termination, Termination::Exhausted);
    }

    #[test]
    fn deterministic() {
        let f = |x: &[f64]| (x[0] - 0.2).powi(2) + (x[1] + 0.1).powi(4) + (x[0] * x[1]).sin();
        let a = nelder_mead(f, &[0.5, 0.5], &opts(2, -1.0, 1.0));
        let b = nelder_mead(f, &[0.5, 0.5], &opts(2, -1.0, 1.0));
        assert_eq!(a.x, b.x);
        assert_eq!(a.evaluations, b.evaluations);
    }
}
