//! Linear minimization over product pure states: `min ⟨x|G|x⟩` with `x` a
//! tensor product of unit vectors, one per group of a subsystem partition.

use super::SolverConfig;
use crate::error::{Error, Result};
use crate::linalg::{digits, flat_index, ComplexMatrix, C64};
use crate::random::{self, Rng};
use crate::separable::{embed_product, ProductTerm};
use crate::states::PureState;

/// A grouping of subsystems into tensor factors.
#[derive(Debug, Clone)]
pub(crate) struct Partition {
    pub groups: Vec<Vec<usize>>,
    pub group_dims: Vec<usize>,
    dims: Vec<usize>,
    /// local[I][g]: index of basis state I inside factor g
    local: Vec<Vec<usize>>,
}

impl Partition {
    pub fn new(dims: &[usize], groups: Vec<Vec<usize>>) -> Self {
        let sub_dims: Vec<Vec<usize>> = groups.iter().map(|g| g.iter().map(|&s| dims[s]).collect()).collect();
        let group_dims = sub_dims.iter().map(|d| d.iter().product()).collect();
        let total: usize = dims.iter().product();
        let local = (0..total)
            .map(|i| {
                let d = digits(i, dims);
                groups
                    .iter()
                    .zip(&sub_dims)
                    .map(|(g, gd)| {
                        let sub: Vec<usize> = g.iter().map(|&s| d[s]).collect();
                        flat_index(&sub, gd)
                    })
                    .collect()
            })
            .collect();
        Partition {
            groups,
            group_dims,
            dims: dims.to_vec(),
            local,
        }
    }

    /// One factor per subsystem.
    pub fn singletons(dims: &[usize]) -> Self {
        Self::new(dims, (0..dims.len()).map(|k| vec![k]).collect())
    }

    pub fn embed(&self, factors: &[Vec<C64>]) -> Vec<C64> {
        let refs: Vec<&[C64]> = factors.iter().map(Vec::as_slice).collect();
        embed_product(&self.dims, &self.groups, &refs)
    }

    pub fn term(&self, weight: f64, factors: &[Vec<C64>]) -> ProductTerm {
        let states = factors
            .iter()
            .zip(&self.groups)
            .map(|(f, g)| {
                let fd: Vec<usize> = g.iter().map(|&s| self.dims[s]).collect();
                PureState::from_parts_unchecked(f.clone(), fd)
            })
            .collect();
        ProductTerm {
            weight,
            groups: self.groups.clone(),
            factors: states,
        }
    }

    /// Factors of the computational basis state `index`.
    pub fn basis_factors(&self, index: usize) -> Vec<Vec<C64>> {
        self.group_dims
            .iter()
            .zip(&self.local[index])
            .map(|(&d, &l)| {
                let mut v = vec![C64::new(0.0, 0.0); d];
                v[l] = C64::new(1.0, 0.0);
                v
            })
            .collect()
    }

    /// Operator on factor `which` obtained by sandwiching `g` between all
    /// other factors.
    pub fn contract(&self, g: &ComplexMatrix, factors: &[Vec<C64>], which: usize) -> ComplexMatrix {
        let n = g.rows();
        let dw = self.group_dims[which];
        let coeff: Vec<C64> = self
            .local
            .iter()
            .map(|loc| {
                loc.iter()
                    .enumerate()
                    .filter(|&(h, _)| h != which)
                    .map(|(h, &l)| factors[h][l])
                    .product()
            })
            .collect();
        let mut out = ComplexMatrix::zeros(dw, dw);
        for i in 0..n {
            let ci = coeff[i].conj();
            if ci == C64::new(0.0, 0.0) {
                continue;
            }
            let a = self.local[i][which];
            for j in 0..n {
                let b = self.local[j][which];
                out[(a, b)] += ci * g[(i, j)] * coeff[j];
            }
        }
        out.hermitian_part()
    }

    /// Alternating exact minimization over one factor at a time, from the
    /// given starting factors.
    pub fn descend(&self, g: &ComplexMatrix, mut factors: Vec<Vec<C64>>, iterations: usize) -> (f64, Vec<Vec<C64>>) {
        let x = self.embed(&factors);
        let mut value = g.expectation(&x);
        for _ in 0..iterations {
            let before = value;
            for w in 0..self.groups.len() {
                let h = self.contract(g, &factors, w);
                let eig = h.hermitian_eigen().expect("contraction is Hermitian");
                factors[w] = eig.vector(0);
                value = eig.values[0];
            }
            if before - value <= 1e-14 * value.abs().max(1.0) {
                break;
            }
        }
        (value, factors)
    }

    pub fn random_factors(&self, rng: &mut Rng) -> Vec<Vec<C64>> {
        self.group_dims.iter().map(|&d| random::unit_vector(rng, d)).collect()
    }

    /// Best of `restarts` alternating descents; `warm` seeds the first one.
    pub fn minimize(
        &self,
        g: &ComplexMatrix,
        restarts: usize,
        iterations: usize,
        rng: &mut Rng,
        warm: Option<&[Vec<C64>]>,
    ) -> (f64, Vec<Vec<C64>>) {
        let mut best: Option<(f64, Vec<Vec<C64>>)> = None;
        for r in 0..restarts.max(1) {
            let start = match (r, warm) {
                (0, Some(w)) => w.to_vec(),
                _ => self.random_factors(rng),
            };
            let (v, f) = self.descend(g, start, iterations);
            if best.as_ref().is_none_or(|(bv, _)| v < *bv) {
                best = Some((v, f));
            }
        }
        best.expect("at least one restart")
    }
}

/// Minimizing product state for a Hermitian objective.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// ⟨x|G|x⟩ at the returned state.
    pub value: f64,
    pub state: PureState,
    /// The state as a single-term product decomposition (weight 1).
    pub term: ProductTerm,
}

/// Approximately minimizes `⟨a⊗b(⊗c)|G|a⊗b(⊗c)⟩` over product states by
/// alternating eigen-updates: with every factor but one fixed, the best
/// remaining factor is the lowest eigenvector of the contracted operator.
/// Returns the best of `config.oracle_restarts` random starts.
pub fn product_oracle(g: &ComplexMatrix, dims: &[usize], config: &SolverConfig) -> Result<OracleResult> {
    config.validate()?;
    g.ensure_hermitian(1e-9)?;
    let total: usize = dims.iter().product();
    if dims.is_empty() || total != g.rows() {
        return Err(Error::DimensionMismatch(format!(
            "dims {dims:?} for a {}x{} operator",
            g.rows(),
            g.cols()
        )));
    }
    let part = Partition::singletons(dims);
    let mut rng = random::rng(config.seed, 0x0_0ac1e);
    let (value, factors) = part.minimize(g, config.oracle_restarts, config.oracle_iterations, &mut rng, None);
    let state = PureState::from_parts_unchecked(part.embed(&factors), dims.to_vec());
    Ok(OracleResult {
        value,
        state,
        term: part.term(1.0, &factors),
    })
}
