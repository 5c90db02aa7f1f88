//! Simultaneous polynomial root finding for beam polynomials.
//!
//! Aberth-Ehrlich iteration from deterministic perturbed-circle starting
//! points, followed by Newton polishing. Coefficients are ascending:
//! `P(x) = c[0] + c[1] x + ... + c[n] x^n` with `c[0] != 0` and `c[n] != 0`
//! (callers enforce this), so no root is zero or at infinity.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances::ROOT_RESIDUAL_REL;

const MAX_ITERATIONS: usize = 400;
const NEWTON_POLISH_STEPS: usize = 12;

/// Horner evaluation of the polynomial and its derivative.
fn eval_with_derivative(coeffs: &[Complex64], x: Complex64) -> (Complex64, Complex64) {
    let mut p = Complex64::new(0.0, 0.0);
    let mut dp = Complex64::new(0.0, 0.0);
    for &c in coeffs.iter().rev() {
        dp = dp * x + p;
        p = p * x + c;
    }
    (p, dp)
}

/// Residual bound for an accepted root at `x`:
/// `ROOT_RESIDUAL_REL * max|coeff| * max(1, |x|)^degree`.
pub(crate) fn residual_bound(coeffs: &[Complex64], x: Complex64) -> f64 {
    let max_coeff = coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max);
    let degree = coeffs.len() - 1;
    ROOT_RESIDUAL_REL * max_coeff * x.norm().max(1.0).powi(degree as i32)
}

/// Finds all roots of the polynomial. Deterministic: identical coefficients
/// produce bitwise identical roots.
pub(crate) fn all_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let degree = coeffs.len() - 1;
    debug_assert!(degree >= 1);
    debug_assert!(coeffs[0].norm() > 0.0 && coeffs[degree].norm() > 0.0);

    let lead = coeffs[degree];
    let monic: Vec<Complex64> = coeffs.iter().map(|c| c / lead).collect();

    if degree == 1 {
        return Ok(vec![-monic[0]]);
    }

    // Geometric-mean radius: the product of root magnitudes is |c0/cn|.
    let radius = monic[0].norm().powf(1.0 / degree as f64).clamp(1e-6, 1e6);
    let mut xs: Vec<Complex64> = (0..degree)
        .map(|k| {
            // irrational-ish angle offset avoids landing on root symmetry axes
            let angle = 2.0 * std::f64::consts::PI * k as f64 / degree as f64 + 0.39996;
            Complex64::from_polar(radius, angle)
        })
        .collect();

    let mut values: Vec<Complex64> = vec![Complex64::new(0.0, 0.0); degree];
    for iteration in 0..MAX_ITERATIONS {
        let mut max_step = 0.0f64;
        for k in 0..degree {
            let (p, dp) = eval_with_derivative(&monic, xs[k]);
            values[k] = p;
            if p.norm() == 0.0 {
                continue;
            }
            let newton = if dp.norm() > 0.0 {
                p / dp
            } else {
                // derivative vanished away from a root: nudge off the spot
                xs[k] *= Complex64::new(1.0 + 1e-8, 1e-8);
                max_step = f64::INFINITY;
                continue;
            };
            let mut repulsion = Complex64::new(0.0, 0.0);
            for j in 0..degree {
                if j != k {
                    let diff = xs[k] - xs[j];
                    if diff.norm_sqr() > 0.0 {
                        repulsion += diff.inv();
                    }
                }
            }
            let denom = Complex64::new(1.0, 0.0) - newton * repulsion;
            let step = if denom.norm() > 1e-12 {
                newton / denom
            } else {
                newton
            };
            xs[k] -= step;
            max_step = max_step.max(step.norm() / xs[k].norm().max(1.0));
        }
        if max_step <= 1e-14 {
            break;
        }
        // multiple roots plateau on step size; accept once residuals are in
        if iteration >= 20
            && (0..degree).all(|k| values[k].norm() * lead.norm() <= 0.5 * residual_bound(coeffs, xs[k]))
        {
            break;
        }
    }

    // Newton polish while it improves the residual.
    for x in xs.iter_mut() {
        let mut best = *x;
        let mut best_res = eval_with_derivative(&monic, best).0.norm();
        let mut current = best;
        for _ in 0..NEWTON_POLISH_STEPS {
            let (p, dp) = eval_with_derivative(&monic, current);
            if dp.norm() == 0.0 {
                break;
            }
            current -= p / dp;
            let res = eval_with_derivative(&monic, current).0.norm();
            if res < best_res {
                best_res = res;
                best = current;
            } else {
                break;
            }
        }
        *x = best;
    }

    for &x in &xs {
        let residual = eval_with_derivative(coeffs, x).0.norm();
        let bound = residual_bound(coeffs, x);
        // negated form on purpose: a NaN residual must fail the contract
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(residual <= bound) {
            return Err(Error::RootRefinement { residual, bound });
        }
    }
    Ok(xs)
}

/// Expands `leading * prod_i (x - roots[i])` into ascending coefficients.
/// Factors multiply in descending root magnitude, which keeps intermediate
/// coefficient growth balanced.
pub(crate) fn expand_from_roots(roots: &[Complex64], leading: Complex64) -> Vec<Complex64> {
    let mut order: Vec<usize> = (0..roots.len()).collect();
    order.sort_by(|&a, &b| {
        roots[b]
            .norm()
            .total_cmp(&roots[a].norm())
            .then(roots[b].arg().total_cmp(&roots[a].arg()))
    });
    let mut coeffs = vec![Complex64::new(1.0, 0.0)];
    for &i in &order {
        let r = roots[i];
        let mut next = vec![Complex64::new(0.0, 0.0); coeffs.len() + 1];
        for (k, &c) in coeffs.iter().enumerate() {
            next[k + 1] += c;
            next[k] -= r * c;
        }
        coeffs = next;
    }
    for c in coeffs.iter_mut() {
        *c *= leading;
    }
    coeffs
}
