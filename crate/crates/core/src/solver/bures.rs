//! Bures entanglement `min_{ρ ∈ 𝒟} 2 − 2√F(σ, ρ)`.
//!
//! `√F(σ, ρ) = tr √(W† ρ W)`, with `W W† = σ` a factor spanning the support
//! of `σ`, is concave in `ρ`, so the objective is convex and the
//! Frank–Wolfe machinery applies unchanged. The gradient is
//! `−W M^{−1/2} W†` with `M = W† ρ W`, the inverse root taken on the
//! support of `M`. Where `M` loses rank on the support of `σ` the objective
//! is not differentiable, so the reported gap is labelled heuristic.

use super::frank_wolfe::{solve, Distance, Problem};
use super::oracle::Partition;
use super::{check_solver_dims, MeasureResult, SolverConfig};
use crate::error::Result;
use crate::linalg::{ComplexMatrix, SUPPORT_CUTOFF};
use crate::measures::{root_fidelity, support_root};
use crate::states::DensityMatrix;

pub(super) fn bures_objective(root: &ComplexMatrix, rho: &ComplexMatrix) -> f64 {
    match root_fidelity(root, rho) {
        Ok(f) => (2.0 - 2.0 * f.min(1.0)).max(0.0),
        Err(_) => f64::INFINITY,
    }
}

pub(super) fn bures_gradient(root: &ComplexMatrix, rho: &ComplexMatrix) -> ComplexMatrix {
    let m = (&(&root.dagger() * rho) * root).hermitian_part();
    let eig = m.hermitian_eigen().expect("sandwich is Hermitian");
    let inv_root = eig.map_spectrum(|x| if x > SUPPORT_CUTOFF { 1.0 / x.sqrt() } else { 0.0 });
    (&(root * &inv_root) * &root.dagger()).scale(-1.0).hermitian_part()
}

/// Bures distance from `σ` to the fully separable set.
pub fn bures_entanglement(sigma: &DensityMatrix, config: &SolverConfig) -> Result<MeasureResult> {
    config.validate()?;
    check_solver_dims(sigma.dims())?;
    let problem = Problem {
        sigma,
        distance: Distance::Bures {
            root: support_root(sigma.matrix())?,
        },
        families: vec![Partition::singletons(sigma.dims())],
        config,
    };
    solve(&problem)
}
