//! Tensor-product structure: Kronecker products, partial traces and partial
//! transposes over a subsystem-dimension signature.
//!
//! Basis indices are row-major in the subsystem order, so the first
//! subsystem is the most significant digit.

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};

/// Π dims, or `None` if a dimension is zero or the product overflows.
pub fn total_dim(dims: &[usize]) -> Option<usize> {
    dims.iter()
        .try_fold(1usize, |acc, &d| if d == 0 { None } else { acc.checked_mul(d) })
}

/// Splits a flat basis index into per-subsystem digits.
pub fn digits(mut index: usize, dims: &[usize]) -> Vec<usize> {
    let mut out = vec![0; dims.len()];
    for (slot, &d) in out.iter_mut().zip(dims).rev() {
        *slot = index % d;
        index /= d;
    }
    out
}

/// Inverse of [`digits`] for an arbitrary subset of subsystems.
pub fn flat_index(digits: &[usize], dims: &[usize]) -> usize {
    digits.iter().zip(dims).fold(0, |acc, (&x, &d)| acc * d + x)
}

pub fn kron(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (ar, ac, br, bc) = (a.rows(), a.cols(), b.rows(), b.cols());
    ComplexMatrix::from_fn(ar * br, ac * bc, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)])
}

fn check_dims(m: &ComplexMatrix, dims: &[usize]) -> Result<()> {
    let total: usize = dims.iter().product();
    if dims.is_empty() || dims.contains(&0) || !m.is_square() || m.rows() != total {
        return Err(Error::DimensionMismatch(format!(
            "dims {dims:?} do not match a {}x{} matrix",
            m.rows(),
            m.cols()
        )));
    }
    Ok(())
}

/// Traces out every subsystem not listed in `keep`.
pub fn partial_trace(m: &ComplexMatrix, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
    check_dims(m, dims)?;
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.iter().any(|&k| k >= dims.len()) {
        return Err(Error::DimensionMismatch(format!(
            "subsystem index out of range for dims {dims:?}"
        )));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|k| !keep.contains(k)).collect();
    let kept_dims: Vec<usize> = keep.iter().map(|&k| dims[k]).collect();
    let out_dim: usize = kept_dims.iter().product();
    let mut out = ComplexMatrix::zeros(out_dim, out_dim);
    let n = m.rows();
    let all: Vec<Vec<usize>> = (0..n).map(|i| digits(i, dims)).collect();
    let local = |d: &[usize]| -> usize {
        let sub: Vec<usize> = keep.iter().map(|&k| d[k]).collect();
        flat_index(&sub, &kept_dims)
    };
    for i in 0..n {
        for j in 0..n {
            if traced.iter().all(|&t| all[i][t] == all[j][t]) {
                out[(local(&all[i]), local(&all[j]))] += m[(i, j)];
            }
        }
    }
    Ok(out)
}

/// Transposes the indices of one tensor factor.
pub fn partial_transpose(m: &ComplexMatrix, dims: &[usize], subsystem: usize) -> Result<ComplexMatrix> {
    check_dims(m, dims)?;
    if subsystem >= dims.len() {
        return Err(Error::DimensionMismatch(format!(
            "subsystem {subsystem} out of range for dims {dims:?}"
        )));
    }
    let n = m.rows();
    let mut out = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        let di = digits(i, dims);
        for j in 0..n {
            let dj = digits(j, dims);
            let (mut si, mut sj) = (di.clone(), dj.clone());
            si[subsystem] = dj[subsystem];
            sj[subsystem] = di[subsystem];
            out[(flat_index(&si, dims), flat_index(&sj, dims))] = m[(i, j)];
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::C64;

    fn bell_projector() -> ComplexMatrix {
        let s = 0.5f64.sqrt();
        let v = [C64::new(s, 0.), C64::new(0., 0.), C64::new(0., 0.), C64::new(s, 0.)];
        ComplexMatrix::projector(&v)
    }

    #[test]
    fn kron_examples() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(kron(&i2, &i2), ComplexMatrix::identity(4));
        let p0 = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        let p1 = ComplexMatrix::from_real_diag(&[0.0, 1.0]);
        assert_eq!(kron(&p0, &p1), ComplexMatrix::from_real_diag(&[0.0, 1.0, 0.0, 0.0]));
    }

    #[test]
    fn digits_round_trip() {
        let dims = [2, 3, 2];
        for i in 0..12 {
            assert_eq!(flat_index(&digits(i, &dims), &dims), i);
        }
        assert_eq!(digits(7, &dims), vec![1, 0, 1]);
    }

    #[test]
    fn trace_out_product_factor() {
        let a = ComplexMatrix::from_rows(&[
            vec![C64::new(0.3, 0.), C64::new(0.1, 0.2)],
            vec![C64::new(0.1, -0.2), C64::new(0.7, 0.)],
        ])
        .unwrap();
        let b = ComplexMatrix::from_real_diag(&[0.2, 0.5, 0.3]);
        let ab = kron(&a, &b);
        let ra = partial_trace(&ab, &[2, 3], &[0]).unwrap();
        assert!(ra.approx_eq(&a, 1e-15));
        let rb = partial_trace(&ab, &[2, 3], &[1]).unwrap();
        assert!(rb.approx_eq(&b, 1e-15));
    }

    #[test]
    fn bell_marginal_is_maximally_mixed() {
        // |Φ+⟩⟨Φ+| = ½(|00⟩⟨00| + |00⟩⟨11| + |11⟩⟨00| + |11⟩⟨11|); tracing B
        // keeps the diagonal terms only.
        let r = partial_trace(&bell_projector(), &[2, 2], &[0]).unwrap();
        assert!(r.approx_eq(&ComplexMatrix::identity(2).scale(0.5), 1e-15));
        let mixed = ComplexMatrix::identity(4).scale(0.25);
        let ra = partial_trace(&mixed, &[2, 2], &[1]).unwrap();
        assert!(ra.approx_eq(&ComplexMatrix::identity(2).scale(0.5), 1e-15));
    }

    #[test]
    fn partial_transpose_examples() {
        let a = ComplexMatrix::from_real_diag(&[0.4, 0.6]);
        let b = ComplexMatrix::from_rows(&[
            vec![C64::new(0.5, 0.), C64::new(0.1, 0.3)],
            vec![C64::new(0.1, -0.3), C64::new(0.5, 0.)],
        ])
        .unwrap();
        let pt = partial_transpose(&kron(&a, &b), &[2, 2], 1).unwrap();
        assert!(pt.approx_eq(&kron(&a, &b.transpose()), 1e-15));

        let bell = bell_projector();
        let twice = partial_transpose(&partial_transpose(&bell, &[2, 2], 1).unwrap(), &[2, 2], 1).unwrap();
        assert_eq!(twice, bell);

        // PT of the Bell projector is SWAP/2, spectrum {−½, ½, ½, ½}.
        let eig = partial_transpose(&bell, &[2, 2], 1).unwrap().hermitian_eigen().unwrap();
        assert!((eig.values[0] + 0.5).abs() < 1e-14);
        assert!(eig.values[1..].iter().all(|v| (v - 0.5).abs() < 1e-14));
    }

    #[test]
    fn dimension_mismatch() {
        let m = ComplexMatrix::identity(4);
        assert!(partial_trace(&m, &[2, 3], &[0]).is_err());
        assert!(partial_transpose(&m, &[2, 2], 2).is_err());
    }
}
