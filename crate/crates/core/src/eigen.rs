//! Cyclic Jacobi eigendecomposition for complex Hermitian matrices.
//!
//! Each off-diagonal entry is annihilated by a phase rotation (making the
//! entry real) composed with a real Jacobi rotation. Sweeps repeat until the
//! off-diagonal Frobenius mass falls below `1e-12` of the matrix scale.

// Matrix updates index rows and columns symmetrically; iterator rewrites of
// the rotation loops would obscure the (p, q) plane structure.
#![allow(clippy::needless_range_loop)]

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerances::EIGEN_OFFDIAG_REL;

const MAX_SWEEPS: usize = 60;

#[derive(Debug, Clone)]
pub(crate) struct EigenDecomposition {
    /// Eigenvalues in descending order.
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` pairs with `eigenvalues[k]`; columns are orthonormal.
    pub eigenvectors: Vec<Vec<Complex64>>,
}

fn off_diagonal_norm(a: &[Vec<Complex64>]) -> f64 {
    let n = a.len();
    let mut sum = 0.0;
    for p in 0..n {
        for q in 0..n {
            if p != q {
                sum += a[p][q].norm_sqr();
            }
        }
    }
    sum.sqrt()
}

/// Diagonalizes a Hermitian matrix given as dense rows.
pub(crate) fn hermitian_eigen(matrix: &[Vec<Complex64>]) -> Result<EigenDecomposition> {
    let n = matrix.len();
    assert!(n > 0 && matrix.iter().all(|row| row.len() == n));
    let mut a: Vec<Vec<Complex64>> = matrix.to_vec();
    let mut v: Vec<Vec<Complex64>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Complex64::new(if i == j { 1.0 } else { 0.0 }, 0.0))
                .collect()
        })
        .collect();

    let trace: f64 = (0..n).map(|i| a[i][i].re).sum();
    let frobenius: f64 = a
        .iter()
        .flatten()
        .map(|x| x.norm_sqr())
        .sum::<f64>()
        .sqrt();
    let scale = trace.abs().max(frobenius);
    let threshold = EIGEN_OFFDIAG_REL * scale;

    let mut sweeps = 0;
    while off_diagonal_norm(&a) > threshold {
        if sweeps >= MAX_SWEEPS {
            return Err(Error::EigenNoConvergence {
                off: off_diagonal_norm(&a),
                sweeps,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p][q];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                // phase that makes a_pq real, then a real Jacobi rotation
                let phase = apq / r; // e^{j alpha}
                let tau = (a[q][q].re - a[p][p].re) / (2.0 * r);
                let t = tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt());
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J columns: [p] = (c, -s e^{-j a}); [q] = (s, c e^{-j a})
                let jp_q = -s * phase.conj();
                let jq_q = c * phase.conj();

                // A <- A J (update columns p, q)
                for row in a.iter_mut() {
                    let xp = row[p];
                    let xq = row[q];
                    row[p] = c * xp + jp_q * xq;
                    row[q] = s * xp + jq_q * xq;
                }
                // A <- J^H A (update rows p, q)
                for i in 0..n {
                    let xp = a[p][i];
                    let xq = a[q][i];
                    a[p][i] = c * xp + jp_q.conj() * xq;
                    a[q][i] = s * xp + jq_q.conj() * xq;
                }
                // V <- V J
                for row in v.iter_mut() {
                    let xp = row[p];
                    let xq = row[q];
                    row[p] = c * xp + jp_q * xq;
                    row[q] = s * xp + jq_q * xq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[j][j].re.total_cmp(&a[i][i].re));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[i][i].re).collect();
    let eigenvectors: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&col| (0..n).map(|row| v[row][col]).collect())
        .collect();
    Ok(EigenDecomposition {
        eigenvalues,
        eigenvectors,
    })
}
