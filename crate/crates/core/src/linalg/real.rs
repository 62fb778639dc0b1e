//! Small dense real solvers used by the ensemble refinement and the
//! Carathéodory reduction. Matrices are row-major `n × m` slices.

/// Solves `a x = b` for symmetric positive definite `a` (n × n) by Cholesky.
/// Returns `None` if `a` is not numerically positive definite.
pub fn solve_spd(a: &[f64], b: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut l = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if s <= 0.0 || !s.is_finite() {
                    return None;
                }
                l[i * n + i] = s.sqrt();
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    let mut y = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * y[k];
        }
        y[i] = s / l[i * n + i];
    }
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = y[i];
        for k in i + 1..n {
            s -= l[k * n + i] * x[k];
        }
        x[i] = s / l[i * n + i];
    }
    Some(x)
}

/// A unit-norm vector in the null space of `a` (rows × cols), found by
/// Gaussian elimination with partial pivoting. Returns `None` when `a` has
/// full column rank at tolerance `tol`.
pub fn null_vector(a: &[f64], rows: usize, cols: usize, tol: f64) -> Option<Vec<f64>> {
    let mut m = a.to_vec();
    let mut pivot_cols = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (best, val) =
            (r..rows)
                .map(|i| (i, m[i * cols + c].abs()))
                .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if val <= tol {
            continue;
        }
        if best != r {
            for k in 0..cols {
                m.swap(best * cols + k, r * cols + k);
            }
        }
        let p = m[r * cols + c];
        for k in 0..cols {
            m[r * cols + k] /= p;
        }
        for i in 0..rows {
            if i != r {
                let f = m[i * cols + c];
                if f != 0.0 {
                    for k in 0..cols {
                        m[i * cols + k] -= f * m[r * cols + k];
                    }
                }
            }
        }
        pivot_cols.push(c);
        r += 1;
    }
    let free = (0..cols).find(|c| !pivot_cols.contains(c))?;
    let mut x = vec![0.0; cols];
    x[free] = 1.0;
    for (row, &pc) in pivot_cols.iter().enumerate() {
        x[pc] = -m[row * cols + free];
    }
    let n = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    Some(x.into_iter().map(|v| v / n).collect())
}
