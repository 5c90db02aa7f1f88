//! Weight autocorrelation sequences and beampattern equivalence.
//!
//! The beampattern is a function of the weight autocorrelation alone:
//! with `u = exp(j 2 pi d sin(theta))`,
//! `p(theta) = r_0 + 2 Re( sum_{k>=1} r_k u^{-k} )`,
//! so two vectors radiate identically at every angle exactly when all lags
//! agree. `toeplitz_extraction_check` numerically certifies the converse
//! direction: every single-diagonal Toeplitz matrix, hence every lag, is a
//! linear combination of rank-one pattern evaluations `d(theta) d(theta)^H`.

use num_complex::Complex64;

use crate::array::{ArrayGeometry, BeamVector};
use crate::error::{Error, Result};
use crate::linalg;
use crate::tolerances::EXTRACTION_COLLISION_TOL;

/// Autocorrelation lags `r_k = sum_i w_i conj(w_{i+k})` for `k = 0..M-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct AutocorrSequence {
    lags: Vec<Complex64>,
}

impl AutocorrSequence {
    pub fn lags(&self) -> &[Complex64] {
        &self.lags
    }

    /// Lag-0 value: the squared norm of the weights.
    pub fn power(&self) -> f64 {
        self.lags[0].re
    }

    /// Largest elementwise lag deviation from another sequence.
    pub fn max_deviation(&self, other: &AutocorrSequence) -> f64 {
        self.lags
            .iter()
            .zip(other.lags.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }
}

/// Computes all `M` autocorrelation lags of the weights.
pub fn autocorrelation(w: &BeamVector) -> AutocorrSequence {
    let ws = w.weights();
    let m = ws.len();
    let lags = (0..m)
        .map(|k| (0..m - k).map(|i| ws[i] * ws[i + k].conj()).sum())
        .collect();
    AutocorrSequence { lags }
}

/// Tests whether two vectors share a beampattern by comparing all
/// autocorrelation lags to `rel_tol` times the lag-0 power.
///
/// When this returns `true`, the beampatterns agree on any grid to within
/// `(2M - 1) * rel_tol * ||w||^2` in absolute power.
pub fn same_beampattern(w: &BeamVector, v: &BeamVector, rel_tol: f64) -> Result<bool> {
    w.check_same_geometry(v)?;
    let rw = autocorrelation(w);
    let rv = autocorrelation(v);
    let scale = rw.power().max(rv.power());
    Ok(rw.max_deviation(&rv) <= rel_tol * scale)
}

/// Angles (degrees) whose phase factors `u_k = exp(j 2 pi d sin(theta_k))`
/// are pairwise distinct for half-wavelength spacing: the 2M-1 values of
/// `sin(theta)` are equispaced on [-1, 1) so the phases tile the circle.
pub fn default_extraction_angles(geometry: ArrayGeometry) -> Vec<f64> {
    let n = 2 * geometry.elements() - 1;
    (0..n)
        .map(|k| (-1.0 + 2.0 * k as f64 / n as f64).asin().to_degrees())
        .collect()
}

/// Certifies that the Toeplitz matrix with a single unit diagonal is a linear
/// combination of `D(theta_k) = d(theta_k) d(theta_k)^H`.
///
/// `diagonal` is 1-based in `1..=2M-1`; index `M` is the main diagonal.
/// Solves the (2M-1)-square interpolation system for the combination
/// coefficients and returns the max-norm residual of the reassembled matrix.
/// Angles may lie outside [-90, 90]; what matters is that their phase
/// factors are pairwise distinct, which is checked explicitly.
pub fn toeplitz_extraction_check(
    geometry: ArrayGeometry,
    angles_deg: &[f64],
    diagonal: usize,
) -> Result<f64> {
    let m = geometry.elements();
    let n = 2 * m - 1;
    if angles_deg.len() != n {
        return Err(Error::LengthMismatch {
            expected: n,
            got: angles_deg.len(),
        });
    }
    if !(1..=n).contains(&diagonal) {
        return Err(Error::DiagonalOutOfRange {
            index: diagonal,
            max: n,
        });
    }
    let phases: Vec<Complex64> = angles_deg
        .iter()
        .map(|&deg| {
            let arg = 2.0 * std::f64::consts::PI * geometry.spacing() * deg.to_radians().sin();
            Complex64::from_polar(1.0, arg)
        })
        .collect();
    for a in 0..n {
        for b in (a + 1)..n {
            if (phases[a] - phases[b]).norm() < EXTRACTION_COLLISION_TOL {
                return Err(Error::SingularSystem {
                    theta_a: angles_deg[a],
                    theta_b: angles_deg[b],
                });
            }
        }
    }

    // Column k of Z lists the diagonals of D(theta_k): row index `idx`
    // holds offset l = idx - (M-1), and D(theta)[p][q] = u^(q-p).
    let mut z = vec![Complex64::new(0.0, 0.0); n * n];
    for k in 0..n {
        let mut val = phases[k].powi(-(m as i32 - 1));
        for idx in 0..n {
            z[idx * n + k] = val;
            val *= phases[k];
        }
    }
    let mut rhs = vec![Complex64::new(0.0, 0.0); n];
    rhs[diagonal - 1] = Complex64::new(1.0, 0.0);
    let (coeffs, pivot_min, pivot_max) = match linalg::solve(z, rhs) {
        Some(sol) => sol,
        None => return Err(closest_pair_error(angles_deg, &phases)),
    };
    if pivot_min < 1e-12 * pivot_max {
        return Err(closest_pair_error(angles_deg, &phases));
    }

    // S = sum_k c_k D(theta_k); D[p][q] = u^(q-p)
    let mut s = vec![Complex64::new(0.0, 0.0); m * m];
    for k in 0..n {
        for p in 0..m {
            for q in 0..m {
                s[p * m + q] += coeffs[k] * phases[k].powi(q as i32 - p as i32);
            }
        }
    }
    let offset = diagonal as i32 - m as i32;
    let mut residual = 0.0f64;
    for p in 0..m {
        for q in 0..m {
            let target = if q as i32 - p as i32 == offset {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            };
            residual = residual.max((s[p * m + q] - target).norm());
        }
    }
    Ok(residual)
}

fn closest_pair_error(angles_deg: &[f64], phases: &[Complex64]) -> Error {
    let n = phases.len();
    let mut best = (0usize, 1usize, f64::INFINITY);
    for a in 0..n {
        for b in (a + 1)..n {
            let d = (phases[a] - phases[b]).norm();
            if d < best.2 {
                best = (a, b, d);
            }
        }
    }
    Error::SingularSystem {
        theta_a: angles_deg[best.0],
        theta_b: angles_deg[best.1],
    }
}
