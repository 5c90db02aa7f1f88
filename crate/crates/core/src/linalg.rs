//! Small dense complex solves shared by the extraction check and the
//! minimax initializer. Partial-pivoted Gaussian elimination is plenty for
//! the system sizes here (at most 2M-1 = 129).

use num_complex::Complex64;

/// Solves `A x = b` in place for square complex `A` (row-major). Returns the
/// solution together with the smallest and largest pivot magnitudes seen, so
/// callers can judge conditioning. `None` when a pivot underflows to zero.
pub(crate) fn solve(
    mut a: Vec<Complex64>,
    mut b: Vec<Complex64>,
) -> Option<(Vec<Complex64>, f64, f64)> {
    let n = b.len();
    debug_assert_eq!(a.len(), n * n);
    let mut pivot_min = f64::INFINITY;
    let mut pivot_max = 0.0f64;
    for col in 0..n {
        let pivot_row = (col..n)
            .max_by(|&r, &s| {
                a[r * n + col]
                    .norm_sqr()
                    .total_cmp(&a[s * n + col].norm_sqr())
            })
            .unwrap();
        let pivot = a[pivot_row * n + col];
        let pivot_mag = pivot.norm();
        if pivot_mag == 0.0 {
            return None;
        }
        pivot_min = pivot_min.min(pivot_mag);
        pivot_max = pivot_max.max(pivot_mag);
        if pivot_row != col {
            for k in 0..n {
                a.swap(col * n + k, pivot_row * n + k);
            }
            b.swap(col, pivot_row);
        }
        for row in (col + 1)..n {
            let factor = a[row * n + col] / pivot;
            if factor.norm_sqr() == 0.0 {
                continue;
            }
            for k in col..n {
                let v = a[col * n + k];
                a[row * n + k] -= factor * v;
            }
            let bc = b[col];
            b[row] -= factor * bc;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); n];
    for row in (0..n).rev() {
        let mut acc = b[row];
        for k in (row + 1)..n {
            acc -= a[row * n + k] * x[k];
        }
        x[row] = acc / a[row * n + row];
    }
    Some((x, pivot_min, pivot_max))
}
