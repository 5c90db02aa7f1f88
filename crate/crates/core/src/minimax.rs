//! Smoothed minimax solver for sidelobe-constrained beam fitting.
//!
//! Minimizes `max_i |w^H a(theta_i) - tau_i|` subject to
//! `|w^H a(theta_k)| <= delta` by smoothing the max with log-sum-exp at a
//! decreasing temperature and folding the constraints into an augmented
//! Lagrangian; inner iterations are gradient descent with Barzilai-Borwein
//! steps safeguarded by Armijo backtracking. The problem is convex, so any
//! init reaching a stationary point reaches the optimum; multiple inits guard
//! against premature inner-loop termination.

use num_complex::Complex64;

const OUTER_ITERATIONS: usize = 30;
const INNER_ITERATIONS: usize = 400;
const TEMPERATURE_DECAY: f64 = 0.55;
const TEMPERATURE_FLOOR: f64 = 1e-5;
const PENALTY_GROWTH: f64 = 2.0;
const PENALTY_CAP: f64 = 1e8;
const ARMIJO_SLOPE: f64 = 1e-4;
const MAX_BACKTRACKS: usize = 40;

/// Fixed data of one solve: in-sector steering rows with unit-modulus
/// targets, out-of-sector steering rows, and the sidelobe bound.
pub(crate) struct MinimaxProblem {
    /// `targets[i] = (a(theta_i), tau_i)`; objective term `|w^H a - tau|`.
    pub targets: Vec<(Vec<Complex64>, Complex64)>,
    /// Constraint rows `a(theta_k)`; `|w^H a| <= delta`.
    pub constraints: Vec<Vec<Complex64>>,
    pub delta: f64,
}

#[derive(Debug, Clone)]
pub(crate) struct MinimaxSolution {
    pub weights: Vec<Complex64>,
    /// `max_i |w^H a(theta_i) - tau_i|` at the returned point.
    pub objective: f64,
    /// `max_k |w^H a(theta_k)|` at the returned point.
    pub max_constraint: f64,
}

fn response(w: &[Complex64], a: &[Complex64]) -> Complex64 {
    w.iter().zip(a).map(|(wm, am)| wm.conj() * am).sum()
}

impl MinimaxProblem {
    fn deviations(&self, w: &[Complex64]) -> Vec<Complex64> {
        self.targets
            .iter()
            .map(|(a, tau)| response(w, a) - tau)
            .collect()
    }

    fn constraint_levels(&self, w: &[Complex64]) -> Vec<f64> {
        self.constraints
            .iter()
            .map(|a| response(w, a).norm())
            .collect()
    }

    pub(crate) fn evaluate(&self, w: &[Complex64]) -> (f64, f64) {
        let objective = self
            .deviations(w)
            .iter()
            .map(|p| p.norm())
            .fold(0.0, f64::max);
        let max_constraint = self.constraint_levels(w).iter().fold(0.0f64, |a, &b| a.max(b));
        (objective, max_constraint)
    }
}

/// Smoothed value and gradient. The gradient is the complex combination
/// `dG/d re(w_m) + j dG/d im(w_m)`; for `s = |psi|^2` with
/// `psi = sum conj(w_m) a_m - tau` this is `2 conj(psi) a_m`, and for `|z|`
/// it is `conj(z) a_m / |z|`.
fn value_grad(
    problem: &MinimaxProblem,
    w: &[Complex64],
    t: f64,
    lambda: &[f64],
    mu: f64,
) -> (f64, Vec<Complex64>) {
    let m = w.len();
    let psi = problem.deviations(w);
    let s: Vec<f64> = psi.iter().map(|p| p.norm_sqr()).collect();
    let smax = s.iter().fold(f64::NEG_INFINITY, |a, &b| a.max(b));
    let mut sum_e = 0.0;
    let weights: Vec<f64> = s
        .iter()
        .map(|&si| {
            let e = ((si - smax) / t).exp();
            sum_e += e;
            e
        })
        .collect();
    let mut value = t * sum_e.ln() + smax;
    let mut grad = vec![Complex64::new(0.0, 0.0); m];
    for ((a, _), (p, e)) in problem.targets.iter().zip(psi.iter().zip(&weights)) {
        let coef = 2.0 * p.conj() * (e / sum_e);
        for (g, am) in grad.iter_mut().zip(a) {
            *g += coef * am;
        }
    }
    // Powell-Hestenes-Rockafellar terms for |z_k| <= delta
    for (k, a) in problem.constraints.iter().enumerate() {
        let z = response(w, a);
        let zn = z.norm();
        let active = lambda[k] + mu * (zn - problem.delta);
        if active > 0.0 {
            value += (active * active - lambda[k] * lambda[k]) / (2.0 * mu);
            let coef = (active / zn.max(1e-300)) * z.conj();
            for (g, am) in grad.iter_mut().zip(a) {
                *g += coef * am;
            }
        } else {
            value -= lambda[k] * lambda[k] / (2.0 * mu);
        }
    }
    (value, grad)
}

fn norm_sqr(v: &[Complex64]) -> f64 {
    v.iter().map(|x| x.norm_sqr()).sum()
}

/// Inner minimization of the smoothed augmented Lagrangian.
fn inner_descent(
    problem: &MinimaxProblem,
    w0: &[Complex64],
    t: f64,
    lambda: &[f64],
    mu: f64,
) -> Vec<Complex64> {
    let mut x = w0.to_vec();
    let (mut value, mut grad) = value_grad(problem, &x, t, lambda, mu);
    let mut step = 1.0 / norm_sqr(&grad).sqrt().max(1.0);
    for _ in 0..INNER_ITERATIONS {
        let grad_sqr = norm_sqr(&grad);
        if grad_sqr < 1e-18 * (1.0 + value.abs()) {
            break;
        }
        let mut st = step;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let xn: Vec<Complex64> = x.iter().zip(&grad).map(|(xi, gi)| xi - st * gi).collect();
            let (vn, gn) = value_grad(problem, &xn, t, lambda, mu);
            if vn <= value - ARMIJO_SLOPE * st * grad_sqr {
                accepted = Some((xn, vn, gn));
                break;
            }
            st *= 0.5;
        }
        let Some((xn, vn, gn)) = accepted else { break };
        // BB1 step for the next iteration
        let mut sy = 0.0;
        let mut ss = 0.0;
        for i in 0..x.len() {
            let sv = xn[i] - x[i];
            let yv = gn[i] - grad[i];
            sy += (sv.conj() * yv).re;
            ss += sv.norm_sqr();
        }
        step = if sy > 1e-300 { ss / sy } else { st * 2.0 };
        step = step.clamp(1e-12, 1e6);
        x = xn;
        value = vn;
        grad = gn;
    }
    x
}

/// Full solve from one starting point: outer temperature/multiplier loop
/// followed by a feasibility-restoring rescale (the constraints are
/// homogeneous in `w`, so scaling onto the bound never loses feasibility).
pub(crate) fn solve_from(problem: &MinimaxProblem, w0: &[Complex64]) -> MinimaxSolution {
    let mut w = w0.to_vec();
    let mut lambda = vec![0.0; problem.constraints.len()];
    let mut mu = 1.0;
    let levels = problem.constraint_levels(&w);
    let mut prev_violation = levels
        .iter()
        .map(|&l| l - problem.delta)
        .fold(0.0f64, |a, b| a.max(b));
    let start_dev = problem
        .deviations(&w)
        .iter()
        .map(|p| p.norm_sqr())
        .fold(0.0, f64::max);
    let mut t = start_dev.max(1e-2);
    for _ in 0..OUTER_ITERATIONS {
        w = inner_descent(problem, &w, t, &lambda, mu);
        let levels = problem.constraint_levels(&w);
        let mut violation = 0.0f64;
        for (lk, &level) in lambda.iter_mut().zip(&levels) {
            let g = level - problem.delta;
            *lk = (*lk + mu * g).max(0.0);
            violation = violation.max(g);
        }
        if violation > 0.25 * prev_violation && violation > 1e-6 {
            mu = (mu * PENALTY_GROWTH).min(PENALTY_CAP);
        }
        prev_violation = violation.max(1e-300);
        t = (t * TEMPERATURE_DECAY).max(TEMPERATURE_FLOOR);
    }
    let max_level = problem.constraint_levels(&w).iter().fold(0.0f64, |a, &b| a.max(b));
    if max_level > problem.delta {
        let gamma = problem.delta / max_level;
        for wm in &mut w {
            *wm *= gamma;
        }
    }
    let (objective, max_constraint) = problem.evaluate(&w);
    MinimaxSolution {
        weights: w,
        objective,
        max_constraint,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn steer(m: usize, spacing: f64, theta_deg: f64) -> Vec<Complex64> {
        let step = 2.0 * std::f64::consts::PI * spacing * theta_deg.to_radians().sin();
        (0..m)
            .map(|i| Complex64::from_polar(1.0, step * i as f64))
            .collect()
    }

    #[test]
    fn unconstrained_single_point_fit_is_exact() {
        let m = 4;
        let problem = MinimaxProblem {
            targets: vec![(steer(m, 0.5, 15.0), Complex64::new(1.0, 0.0))],
            constraints: vec![],
            delta: 1e6,
        };
        let zero = vec![Complex64::new(0.0, 0.0); m];
        let sol = solve_from(&problem, &zero);
        assert!(sol.objective < 1e-6, "objective {}", sol.objective);
        assert_eq!(sol.max_constraint, 0.0);
        // solution response equals the target
        let r = response(&sol.weights, &steer(m, 0.5, 15.0));
        assert!((r - Complex64::new(1.0, 0.0)).norm() < 1e-6);
    }

    #[test]
    fn binding_constraint_is_respected() {
        // ask for unit response at 0 degrees but cap the same direction at 0.5
        let m = 3;
        let a0 = steer(m, 0.5, 0.0);
        let problem = MinimaxProblem {
            targets: vec![(a0.clone(), Complex64::new(1.0, 0.0))],
            constraints: vec![a0.clone()],
            delta: 0.5,
        };
        let init = vec![Complex64::new(0.1, 0.0); m];
        let sol = solve_from(&problem, &init);
        assert!(sol.max_constraint <= 0.5 + 1e-9);
        // optimum sits on the bound: |response| = 0.5, objective = 0.5
        assert!((sol.objective - 0.5).abs() < 1e-3, "objective {}", sol.objective);
    }

    #[test]
    fn solver_is_deterministic() {
        let m = 5;
        let problem = MinimaxProblem {
            targets: (0..5)
                .map(|i| {
                    (
                        steer(m, 0.5, -8.0 + 4.0 * i as f64),
                        Complex64::new(1.0, 0.0),
                    )
                })
                .collect(),
            constraints: (0..10).map(|i| steer(m, 0.5, 30.0 + 6.0 * i as f64)).collect(),
            delta: 0.2,
        };
        let init = vec![Complex64::new(0.05, 0.02); m];
        let a = solve_from(&problem, &init);
        let b = solve_from(&problem, &init);
        assert_eq!(a.weights, b.weights);
        assert_eq!(a.objective, b.objective);
    }
}
