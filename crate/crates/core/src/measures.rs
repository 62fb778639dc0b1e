//! Scalar functionals of states, all in nats: von Neumann entropy, mutual
//! information, relative entropy, fidelity and Bures distance.

use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, SUPPORT_CUTOFF};
use crate::states::DensityMatrix;

/// A σ-weight above this on a kernel direction of ρ makes S(σ‖ρ) infinite.
pub const KERNEL_OVERLAP_TOL: f64 = 1e-8;
/// Tolerance on Σ A_i†A_i = I for measurement operators.
pub const POVM_TOL: f64 = 1e-9;

/// −Σ λ ln λ over the eigenvalues of ρ.
pub fn entropy_of_spectrum(values: &[f64]) -> f64 {
    values
        .iter()
        .filter(|&&l| l > SUPPORT_CUTOFF)
        .map(|&l| -l * l.ln())
        .sum()
}

/// S(ρ) = −tr ρ ln ρ
pub fn von_neumann_entropy(rho: &DensityMatrix) -> f64 {
    entropy_of_spectrum(&rho.eigenvalues())
}

/// I(A:B) = S(ρ_A) + S(ρ_B) − S(ρ_AB)
pub fn mutual_information(rho_ab: &DensityMatrix) -> Result<f64> {
    if rho_ab.subsystems() != 2 {
        return Err(Error::NotBipartite(rho_ab.subsystems()));
    }
    let ra = rho_ab.marginal(&[0])?;
    let rb = rho_ab.marginal(&[1])?;
    Ok(von_neumann_entropy(&ra) + von_neumann_entropy(&rb) - von_neumann_entropy(rho_ab))
}

/// ρ_A ⊗ ρ_B for a bipartite state.
pub fn product_of_marginals(rho_ab: &DensityMatrix) -> Result<DensityMatrix> {
    if rho_ab.subsystems() != 2 {
        return Err(Error::NotBipartite(rho_ab.subsystems()));
    }
    Ok(rho_ab.marginal(&[0])?.tensor(&rho_ab.marginal(&[1])?))
}

fn same_shape(a: &DensityMatrix, b: &DensityMatrix) -> Result<()> {
    if a.dims() != b.dims() {
        return Err(Error::DimensionMismatch(format!(
            "dims {:?} vs {:?}",
            a.dims(),
            b.dims()
        )));
    }
    Ok(())
}

/// −tr(σ ln ρ), or +∞ when σ has weight on the kernel of ρ.
pub fn cross_entropy(sigma: &ComplexMatrix, rho: &ComplexMatrix) -> Result<f64> {
    let eig = rho.hermitian_eigen()?;
    let mut acc = 0.0;
    for (k, &lambda) in eig.values.iter().enumerate() {
        let w = sigma.expectation(&eig.vector(k));
        if lambda > SUPPORT_CUTOFF {
            acc -= w * lambda.ln();
        } else if w > KERNEL_OVERLAP_TOL {
            return Ok(f64::INFINITY);
        }
    }
    Ok(acc)
}

/// S(σ‖ρ) = tr σ (ln σ − ln ρ). Returns `f64::INFINITY` when supp σ ⊄ supp ρ.
pub fn relative_entropy(sigma: &DensityMatrix, rho: &DensityMatrix) -> Result<f64> {
    same_shape(sigma, rho)?;
    let cross = cross_entropy(sigma.matrix(), rho.matrix())?;
    if cross.is_infinite() {
        return Ok(cross);
    }
    Ok(cross - von_neumann_entropy(sigma))
}

/// Factor `W` (d × r) with `W W† = m`, spanning the support of `m`.
pub(crate) fn support_root(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    let eig = m.hermitian_eigen()?;
    let support: Vec<usize> = (0..eig.dim()).filter(|&k| eig.values[k] > SUPPORT_CUTOFF).collect();
    let d = eig.dim();
    Ok(ComplexMatrix::from_fn(d, support.len(), |i, c| {
        let k = support[c];
        eig.vectors[(i, k)] * eig.values[k].sqrt()
    }))
}

/// tr √(W† ρ W) for a support root `W` of σ.
pub(crate) fn root_fidelity(w: &ComplexMatrix, rho: &ComplexMatrix) -> Result<f64> {
    let inner = (&(&w.dagger() * rho) * w).hermitian_part();
    let eig = inner.hermitian_eigen()?;
    Ok(eig.values.iter().map(|&m| m.max(0.0).sqrt()).sum())
}

/// Uhlmann fidelity F = (tr √(√σ ρ √σ))², computed as (Σ √μ_k)² over the
/// eigenvalues of √σ ρ √σ restricted to the support of the lower-rank
/// argument, so that kernel round-off does not leak into the sum.
pub fn fidelity(sigma: &DensityMatrix, rho: &DensityMatrix) -> Result<f64> {
    same_shape(sigma, rho)?;
    let ws = support_root(sigma.matrix())?;
    let wr = support_root(rho.matrix())?;
    let s = if ws.cols() <= wr.cols() {
        root_fidelity(&ws, rho.matrix())?
    } else {
        root_fidelity(&wr, sigma.matrix())?
    };
    Ok((s * s).clamp(0.0, 1.0))
}

/// D_B = 2 − 2√F
pub fn bures_distance(sigma: &DensityMatrix, rho: &DensityMatrix) -> Result<f64> {
    Ok((2.0 - 2.0 * fidelity(sigma, rho)?.sqrt()).max(0.0))
}

/// Σ_i √(tr σE_i) √(tr ρE_i) with E_i = A_i†A_i.
///
/// The Bhattacharyya overlap of the two outcome distributions; it bounds
/// √F from above for every measurement and meets it for an optimal one.
pub fn measurement_fidelity_bound(sigma: &DensityMatrix, rho: &DensityMatrix, povm: &[ComplexMatrix]) -> Result<f64> {
    same_shape(sigma, rho)?;
    let d = sigma.dim();
    let mut total = ComplexMatrix::zeros(d, d);
    let mut effects = Vec::with_capacity(povm.len());
    for a in povm {
        if a.cols() != d {
            return Err(Error::DimensionMismatch(format!(
                "measurement operator with {} columns on a {d}-dimensional state",
                a.cols()
            )));
        }
        let e = &a.dagger() * a;
        total = &total + &e;
        effects.push(e);
    }
    let deviation = (&total - &ComplexMatrix::identity(d)).frobenius_norm();
    if povm.is_empty() || deviation > POVM_TOL {
        return Err(Error::IncompletePovm { deviation });
    }
    Ok(effects
        .iter()
        .map(|e| {
            let ps = sigma.matrix().trace_product(e).re.max(0.0);
            let pr = rho.matrix().trace_product(e).re.max(0.0);
            (ps * pr).sqrt()
        })
        .sum())
}
