//! Cyclic Jacobi eigensolver for complex Hermitian matrices and the spectral
//! matrix functions built on it.

use serde::{Deserialize, Serialize};

use super::matrix::{inner, norm, ComplexMatrix, C64, ONE, ZERO};
use crate::error::{Error, Result};

/// Asymmetry tolerated by [`ComplexMatrix::hermitian_eigen`].
pub const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues below this are treated as kernel by support-restricted functions.
pub const SUPPORT_CUTOFF: f64 = 1e-12;
/// Eigenvalues below this make [`ComplexMatrix::matrix_sqrt`] fail.
pub const NEGATIVE_TOL: f64 = 1e-10;

const OFF_DIAGONAL_TOL: f64 = 1e-12;
const MAX_SWEEPS: usize = 100;

/// Spectral decomposition `m = V diag(values) V†` with ascending eigenvalues.
///
/// Each eigenvector column has its largest-magnitude component made real
/// positive, so outputs are reproducible across runs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    /// Eigenvectors as columns.
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, k: usize) -> Vec<C64> {
        self.vectors.column(k)
    }

    /// Σ f(λ_k) v_k v_k†
    pub fn map_spectrum(&self, f: impl Fn(f64) -> f64) -> ComplexMatrix {
        let n = self.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            if w == 0.0 {
                continue;
            }
            for i in 0..n {
                let vi = self.vectors[(i, k)] * w;
                for j in 0..n {
                    out[(i, j)] += vi * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        self.map_spectrum(|l| l)
    }

    pub fn min_value(&self) -> f64 {
        self.values[0]
    }

    pub fn max_value(&self) -> f64 {
        self.values[self.dim() - 1]
    }
}

impl ComplexMatrix {
    /// Eigendecomposition by cyclic Jacobi rotations.
    pub fn hermitian_eigen(&self) -> Result<HermitianEigen> {
        self.ensure_hermitian(HERMITIAN_TOL)?;
        let n = self.rows();
        let mut a = self.hermitian_part();
        let mut v = ComplexMatrix::identity(n);
        let threshold = OFF_DIAGONAL_TOL * a.frobenius_norm().max(1.0);

        for _ in 0..MAX_SWEEPS {
            if off_diagonal_norm(&a) < threshold {
                break;
            }
            for p in 0..n {
                for q in p + 1..n {
                    rotate(&mut a, &mut v, p, q);
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| a[(i, i)].re.total_cmp(&a[(j, j)].re));
        let values = order.iter().map(|&i| a[(i, i)].re).collect();
        let mut vectors = ComplexMatrix::zeros(n, n);
        for (col, &src) in order.iter().enumerate() {
            let mut column = v.column(src);
            fix_phase(&mut column);
            for (i, z) in column.into_iter().enumerate() {
                vectors[(i, col)] = z;
            }
        }
        Ok(HermitianEigen { values, vectors })
    }

    /// Σ ln(λ_k) v_k v_k† over eigenvalues above [`SUPPORT_CUTOFF`]; the
    /// kernel contributes zero.
    pub fn matrix_log_on_support(&self) -> Result<ComplexMatrix> {
        let eig = self.hermitian_eigen()?;
        Ok(eig.map_spectrum(|l| if l > SUPPORT_CUTOFF { l.ln() } else { 0.0 }))
    }

    /// Principal square root of a positive semidefinite matrix.
    pub fn matrix_sqrt(&self) -> Result<ComplexMatrix> {
        let eig = self.hermitian_eigen()?;
        if eig.min_value() < -NEGATIVE_TOL {
            return Err(Error::NegativeEigenvalue {
                eigenvalue: eig.min_value(),
            });
        }
        Ok(eig.map_spectrum(|l| l.max(0.0).sqrt()))
    }

    /// Moore–Penrose inverse square root restricted to the support.
    pub fn inverse_sqrt_on_support(&self) -> Result<ComplexMatrix> {
        let eig = self.hermitian_eigen()?;
        Ok(eig.map_spectrum(|l| if l > SUPPORT_CUTOFF { 1.0 / l.sqrt() } else { 0.0 }))
    }

    /// Unitary factor `W` of the polar decomposition `m = W P`.
    ///
    /// For singular `m` the unitary is completed on the kernel with a
    /// Gram–Schmidt sweep over the standard basis.
    pub fn polar_unitary(&self) -> Result<ComplexMatrix> {
        if !self.is_square() {
            return Err(Error::NotSquare {
                rows: self.rows(),
                cols: self.cols(),
            });
        }
        let n = self.rows();
        let gram = (&self.dagger() * self).hermitian_part();
        let eig = gram.hermitian_eigen()?;
        let scale = eig.max_value().max(1e-300);
        let mut left: Vec<Vec<C64>> = Vec::with_capacity(n);
        let mut right: Vec<Vec<C64>> = Vec::with_capacity(n);
        // Largest singular values first so the kept columns are well conditioned.
        for k in (0..n).rev() {
            let sigma2 = eig.values[k];
            if sigma2 <= 1e-24 * scale {
                continue;
            }
            let vk = eig.vector(k);
            let mut uk = self.mul_vec(&vk);
            for u in &left {
                let c = inner(u, &uk);
                for (x, y) in uk.iter_mut().zip(u) {
                    *x -= c * y;
                }
            }
            let nu = norm(&uk);
            if nu < 1e-14 {
                continue;
            }
            uk.iter_mut().for_each(|z| *z /= nu);
            left.push(uk);
            right.push(vk);
        }
        // Complete both bases for the kernel.
        complete_basis(&mut left, n);
        complete_basis(&mut right, n);
        let mut w = ComplexMatrix::zeros(n, n);
        for (u, v) in left.iter().zip(&right) {
            for i in 0..n {
                for j in 0..n {
                    w[(i, j)] += u[i] * v[j].conj();
                }
            }
        }
        Ok(w)
    }
}

fn complete_basis(basis: &mut Vec<Vec<C64>>, n: usize) {
    let mut e = 0;
    while basis.len() < n && e < n {
        let mut cand = vec![ZERO; n];
        cand[e] = ONE;
        for b in basis.iter() {
            let c = inner(b, &cand);
            for (x, y) in cand.iter_mut().zip(b) {
                *x -= c * y;
            }
        }
        let nc = norm(&cand);
        if nc > 1e-8 {
            cand.iter_mut().for_each(|z| *z /= nc);
            basis.push(cand);
        }
        e += 1;
    }
}

fn off_diagonal_norm(a: &ComplexMatrix) -> f64 {
    let n = a.rows();
    let mut s = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                s += a[(i, j)].norm_sqr();
            }
        }
    }
    s.sqrt()
}

/// Zeroes the (p, q) pair of `a` with a unitary rotation `J`: `a ← J† a J`,
/// `v ← v J`.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return;
    }
    let n = a.rows();
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    let phase_conj = (apq / r).conj();
    let theta = (aqq - app) / (2.0 * r);
    let t = if theta >= 0.0 {
        1.0 / (theta + (theta * theta + 1.0).sqrt())
    } else {
        -1.0 / (-theta + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;
    let j_pp = C64::new(c, 0.0);
    let j_pq = C64::new(s, 0.0);
    let j_qp = phase_conj * (-s);
    let j_qq = phase_conj * c;

    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * j_pp + akq * j_qp;
        a[(k, q)] = akp * j_pq + akq * j_qq;
    }
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = j_pp.conj() * apk + j_qp.conj() * aqk;
        a[(q, k)] = j_pq.conj() * apk + j_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = C64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = C64::new(a[(q, q)].re, 0.0);

    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * j_pp + vkq * j_qp;
        v[(k, q)] = vkp * j_pq + vkq * j_qq;
    }
}

/// Makes the largest-magnitude component real positive. Ties go to the
/// lowest index.
fn fix_phase(column: &mut [C64]) {
    let max = column.iter().map(|z| z.norm()).fold(0.0, f64::max);
    if max == 0.0 {
        return;
    }
    let pivot = column.iter().position(|z| z.norm() >= max * (1.0 - 1e-10)).unwrap_or(0);
    let phase = column[pivot].conj() / column[pivot].norm();
    column.iter_mut().for_each(|z| *z *= phase);
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn identity_has_unit_spectrum() {
        let eig = ComplexMatrix::identity(2).hermitian_eigen().unwrap();
        assert_eq!(eig.values, vec![1.0, 1.0]);
    }

    #[test]
    fn diagonal_is_already_solved() {
        let eig = ComplexMatrix::from_real_diag(&[0.25, 0.75]).hermitian_eigen().unwrap();
        assert_eq!(eig.values, vec![0.25, 0.75]);
        assert!(eig.vectors.approx_eq(&ComplexMatrix::identity(2), 1e-15));
    }

    #[test]
    fn pauli_x_spectrum() {
        // det(X − λI) = λ² − 1
        let x = ComplexMatrix::from_rows(&[vec![c(0., 0.), c(1., 0.)], vec![c(1., 0.), c(0., 0.)]]).unwrap();
        let eig = x.hermitian_eigen().unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!((eig.values[1] - 1.0).abs() < 1e-14);
        assert!(eig.reconstruct().approx_eq(&x, 1e-12));
    }

    #[test]
    fn complex_entries_reconstruct() {
        // Pauli-y has the same characteristic polynomial as Pauli-x.
        let y = ComplexMatrix::from_rows(&[vec![c(0., 0.), c(0., -1.)], vec![c(0., 1.), c(0., 0.)]]).unwrap();
        let eig = y.hermitian_eigen().unwrap();
        assert!((eig.values[0] + 1.0).abs() < 1e-14);
        assert!(eig.reconstruct().approx_eq(&y, 1e-12));
    }

    #[test]
    fn rejects_non_hermitian_and_non_square() {
        let m = ComplexMatrix::from_rows(&[vec![c(0., 0.), c(1., 0.)], vec![c(0., 0.), c(0., 0.)]]).unwrap();
        assert!(matches!(m.hermitian_eigen(), Err(Error::NotHermitian { .. })));
        let r = ComplexMatrix::zeros(2, 3);
        assert!(matches!(r.hermitian_eigen(), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn phase_convention_is_real_positive_pivot() {
        let m = ComplexMatrix::from_rows(&[vec![c(2., 0.), c(0., 1.)], vec![c(0., -1.), c(3., 0.)]]).unwrap();
        let eig = m.hermitian_eigen().unwrap();
        for k in 0..2 {
            let col = eig.vector(k);
            let pivot = col.iter().max_by(|a, b| a.norm().total_cmp(&b.norm())).unwrap();
            assert!(pivot.im.abs() < 1e-15 && pivot.re > 0.0);
        }
    }

    #[test]
    fn log_on_support_examples() {
        let log_id = ComplexMatrix::identity(3).matrix_log_on_support().unwrap();
        assert!(log_id.frobenius_norm() < 1e-15);

        let e = std::f64::consts::E;
        let log_diag = ComplexMatrix::from_real_diag(&[e, e * e])
            .matrix_log_on_support()
            .unwrap();
        assert!(log_diag.approx_eq(&ComplexMatrix::from_real_diag(&[1.0, 2.0]), 1e-14));

        let half = ComplexMatrix::identity(2).scale(0.5);
        let ln2 = std::f64::consts::LN_2;
        assert!(half
            .matrix_log_on_support()
            .unwrap()
            .approx_eq(&ComplexMatrix::from_real_diag(&[-ln2, -ln2]), 1e-14));
    }

    #[test]
    fn log_ignores_kernel() {
        let p = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        assert!(p.matrix_log_on_support().unwrap().frobenius_norm() < 1e-15);
    }

    #[test]
    fn sqrt_examples() {
        assert!(ComplexMatrix::identity(2)
            .matrix_sqrt()
            .unwrap()
            .approx_eq(&ComplexMatrix::identity(2), 1e-14));
        assert!(ComplexMatrix::from_real_diag(&[4.0, 9.0])
            .matrix_sqrt()
            .unwrap()
            .approx_eq(&ComplexMatrix::from_real_diag(&[2.0, 3.0]), 1e-13));
        let s = 0.5f64.sqrt();
        let proj = ComplexMatrix::projector(&[c(s, 0.), c(0., s)]);
        assert!(proj.matrix_sqrt().unwrap().approx_eq(&proj, 1e-12));
        let neg = ComplexMatrix::from_real_diag(&[1.0, -0.1]);
        assert!(matches!(neg.matrix_sqrt(), Err(Error::NegativeEigenvalue { .. })));
    }

    #[test]
    fn polar_of_scaled_unitary() {
        let u = ComplexMatrix::from_rows(&[vec![c(0., 1.), c(0., 0.)], vec![c(0., 0.), c(-1., 0.)]]).unwrap();
        let w = u.scale(3.0).polar_unitary().unwrap();
        assert!(w.approx_eq(&u, 1e-12));
        let singular = ComplexMatrix::from_real_diag(&[1.0, 0.0]);
        let w = singular.polar_unitary().unwrap();
        assert!((&w.dagger() * &w).approx_eq(&ComplexMatrix::identity(2), 1e-12));
    }
}
