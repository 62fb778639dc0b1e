//! Minimum distance from a state to the separable set,
//! `E(σ) = min_{ρ ∈ 𝒟} D(σ‖ρ)`, solved over explicit product ensembles.
//!
//! * [`ree`]: relative entropy of entanglement by Frank–Wolfe with a
//!   product-state linear oracle. The final Frank–Wolfe gap bounds the
//!   suboptimality of the returned value.
//! * [`tripartite_ree`]: the same scheme over three-party states whose
//!   separable set mixes the three bipartitions AB|C, AC|B and A|BC.
//! * [`bures_entanglement`]: Bures distance `2 − 2√F` by multi-start
//!   parametric descent; its certificate is heuristic.

mod bures;
mod caratheodory;
mod frank_wolfe;
mod lbfgs;
mod oracle;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::separable::{realize, ProductEnsemble};
use crate::states::DensityMatrix;

pub use bures::bures_entanglement;
pub use frank_wolfe::{quantum_classical_split, ree, tripartite_ree, CorrelationSplit};
pub use oracle::{product_oracle, OracleResult};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub max_iterations: usize,
    pub gap_tolerance: f64,
    pub oracle_restarts: usize,
    pub oracle_iterations: usize,
    pub seed: u64,
    /// Maximum number of ensemble terms; `None` means `(Π dims)²`.
    pub ensemble_cap: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        SolverConfig {
            max_iterations: 5000,
            gap_tolerance: 1e-6,
            oracle_restarts: 20,
            oracle_iterations: 100,
            seed: 0,
            ensemble_cap: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.max_iterations == 0 || self.oracle_restarts == 0 || self.oracle_iterations == 0 {
            return Err(Error::InvalidConfig("iteration counts must be positive".into()));
        }
        if !(self.gap_tolerance > 0.0) {
            return Err(Error::InvalidConfig("gap_tolerance must be positive".into()));
        }
        if self.ensemble_cap == Some(0) {
            return Err(Error::InvalidConfig("ensemble_cap must be positive".into()));
        }
        Ok(())
    }

    pub fn with_seed(&self, seed: u64) -> Self {
        SolverConfig { seed, ..self.clone() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum DistanceKind {
    RelativeEntropy,
    Bures,
}

/// What the `gap` field of a [`MeasureResult`] certifies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateKind {
    /// Frank–Wolfe duality gap: `value − gap ≤ E(σ) ≤ value`.
    DualityGap,
    /// Best objective improvement over the final iterations; no bound.
    Heuristic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MeasureResult {
    pub value: f64,
    pub minimizer: ProductEnsemble,
    pub realized_minimizer: DensityMatrix,
    pub gap: f64,
    pub iterations: usize,
    pub distance_kind: DistanceKind,
    pub certificate: CertificateKind,
    /// Whether the gap fell below the configured tolerance.
    pub converged: bool,
    /// Objective value after every iteration.
    pub history: Vec<f64>,
}

impl MeasureResult {
    /// Lower bound on the true minimum implied by the certificate.
    pub fn lower_bound(&self) -> Option<f64> {
        match self.certificate {
            CertificateKind::DualityGap => Some((self.value - self.gap).max(0.0)),
            CertificateKind::Heuristic => None,
        }
    }

    /// Internal consistency of a (possibly deserialized) result: the
    /// minimizer reproduces `realized_minimizer` and the latter is a valid
    /// density matrix.
    pub fn validate(&self) -> Result<()> {
        let rebuilt = ProductEnsemble::new(self.minimizer.dims().to_vec(), self.minimizer.terms().to_vec())?;
        let realized = DensityMatrix::new(
            self.realized_minimizer.matrix().clone(),
            self.realized_minimizer.dims().to_vec(),
        )?;
        if rebuilt.dims() != realized.dims() {
            return Err(Error::DimensionMismatch(format!(
                "minimizer dims {:?} vs realized dims {:?}",
                rebuilt.dims(),
                realized.dims()
            )));
        }
        let distance = realize(&rebuilt).trace_distance(&realized);
        if distance > 1e-8 {
            return Err(Error::InvalidEnsemble(format!(
                "minimizer misses the realized state by {distance:.3e}"
            )));
        }
        if !self.value.is_finite() || self.value < -1e-9 {
            return Err(Error::InvalidState(format!("value {}", self.value)));
        }
        if self.gap.is_nan() || self.gap < -1e-10 {
            return Err(Error::InvalidState(format!("gap {}", self.gap)));
        }
        Ok(())
    }
}

/// Bipartite states up to 3×3 and tripartite states up to 2×2×2.
pub(crate) fn check_solver_dims(dims: &[usize]) -> Result<()> {
    let total: usize = dims.iter().product();
    let ok = match dims.len() {
        2 => dims.iter().all(|&d| (1..=3).contains(&d)),
        3 => dims.iter().all(|&d| (1..=3).contains(&d)) && total <= 8,
        _ => false,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::DimensionTooLarge(dims.to_vec()))
    }
}
