use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{digits, flat_index, total_dim, ComplexMatrix, C64};
use crate::random;
use crate::states::{DensityMatrix, PureState, STATE_TOL};

/// One term `p · ⊗_g |a_g⟩⟨a_g|` of a product ensemble.
///
/// `groups[g]` lists the subsystems that factor `g` acts on. Bipartite and
/// fully separable terms use singleton groups; the biseparable tripartite
/// families group two subsystems into one factor (e.g. `[[0, 1], [2]]`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProductTerm {
    pub weight: f64,
    pub groups: Vec<Vec<usize>>,
    pub factors: Vec<PureState>,
}

impl ProductTerm {
    /// A term with one factor per subsystem.
    pub fn product(weight: f64, factors: Vec<PureState>) -> Self {
        let groups = (0..factors.len()).map(|k| vec![k]).collect();
        ProductTerm {
            weight,
            groups,
            factors,
        }
    }

    /// Amplitudes of the product vector on the full space.
    pub fn vector(&self, dims: &[usize]) -> Vec<C64> {
        let refs: Vec<&[C64]> = self.factors.iter().map(PureState::amplitudes).collect();
        embed_product(dims, &self.groups, &refs)
    }

    fn validate(&self, dims: &[usize]) -> Result<()> {
        if !(self.weight.is_finite() && self.weight >= 0.0) {
            return Err(Error::InvalidEnsemble(format!("weight {}", self.weight)));
        }
        if self.groups.len() != self.factors.len() || self.groups.is_empty() {
            return Err(Error::InvalidEnsemble("one factor per group required".into()));
        }
        let mut seen = vec![false; dims.len()];
        for (group, factor) in self.groups.iter().zip(&self.factors) {
            let mut expect = Vec::with_capacity(group.len());
            for &s in group {
                if s >= dims.len() || seen[s] {
                    return Err(Error::InvalidEnsemble(format!(
                        "groups {:?} do not partition {} subsystems",
                        self.groups,
                        dims.len()
                    )));
                }
                seen[s] = true;
                expect.push(dims[s]);
            }
            if factor.dims() != expect.as_slice() {
                return Err(Error::InvalidEnsemble(format!(
                    "factor dims {:?} for group {group:?} (expected {expect:?})",
                    factor.dims()
                )));
            }
            let n: f64 = factor.amplitudes().iter().map(|z| z.norm_sqr()).sum();
            if (n - 1.0).abs() > STATE_TOL {
                return Err(Error::NotNormalized { norm_sqr: n });
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidEnsemble(format!(
                "groups {:?} do not cover every subsystem",
                self.groups
            )));
        }
        Ok(())
    }
}

/// Tensor product of `factors` placed on the subsystems named by `groups`.
pub fn embed_product(dims: &[usize], groups: &[Vec<usize>], factors: &[&[C64]]) -> Vec<C64> {
    let total: usize = dims.iter().product();
    let group_dims: Vec<Vec<usize>> = groups.iter().map(|g| g.iter().map(|&s| dims[s]).collect()).collect();
    (0..total)
        .map(|i| {
            let d = digits(i, dims);
            let mut amp = C64::new(1.0, 0.0);
            for ((group, gd), factor) in groups.iter().zip(&group_dims).zip(factors) {
                let local: Vec<usize> = group.iter().map(|&s| d[s]).collect();
                amp *= factor[flat_index(&local, gd)];
            }
            amp
        })
        .collect()
}

/// A convex combination of product pure states: an explicit member of the
/// separable set together with its decomposition.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawEnsemble")]
pub struct ProductEnsemble {
    dims: Vec<usize>,
    terms: Vec<ProductTerm>,
}

#[derive(Deserialize)]
struct RawEnsemble {
    dims: Vec<usize>,
    terms: Vec<ProductTerm>,
}

impl TryFrom<RawEnsemble> for ProductEnsemble {
    type Error = Error;

    fn try_from(raw: RawEnsemble) -> Result<Self> {
        Self::new(raw.dims, raw.terms)
    }
}

impl ProductEnsemble {
    /// Validates weights (non-negative, summing to one), factor norms, the
    /// subsystem grouping and the Carathéodory cap `(Π dims)²`.
    pub fn new(dims: Vec<usize>, terms: Vec<ProductTerm>) -> Result<Self> {
        let Some(cap) = total_dim(&dims)
            .and_then(|d| d.checked_mul(d))
            .filter(|_| !dims.is_empty())
        else {
            return Err(Error::InvalidEnsemble(format!("dims {dims:?}")));
        };
        if terms.is_empty() {
            return Err(Error::InvalidEnsemble("no terms".into()));
        }
        if terms.len() > cap {
            return Err(Error::InvalidEnsemble(format!(
                "{} terms exceed the cap of {cap}",
                terms.len()
            )));
        }
        for t in &terms {
            t.validate(&dims)?;
        }
        let total: f64 = terms.iter().map(|t| t.weight).sum();
        if !((total - 1.0).abs() <= 1e-10) {
            return Err(Error::InvalidEnsemble(format!("weights sum to {total}")));
        }
        Ok(ProductEnsemble { dims, terms })
    }

    pub(crate) fn from_parts_unchecked(dims: Vec<usize>, terms: Vec<ProductTerm>) -> Self {
        ProductEnsemble { dims, terms }
    }

    /// Uniform mixture of the computational product basis, i.e. I/d.
    pub fn maximally_mixed(dims: &[usize]) -> Self {
        let d: usize = dims.iter().product();
        let terms = (0..d)
            .map(|i| {
                let digs = digits(i, dims);
                let factors = digs
                    .iter()
                    .zip(dims)
                    .map(|(&x, &dk)| PureState::basis(x, &[dk]))
                    .collect();
                ProductTerm::product(1.0 / d as f64, factors)
            })
            .collect();
        ProductEnsemble {
            dims: dims.to_vec(),
            terms,
        }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn terms(&self) -> &[ProductTerm] {
        &self.terms
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Σ_i p_i |v_i⟩⟨v_i| as a bare matrix.
    pub fn matrix(&self) -> ComplexMatrix {
        let d: usize = self.dims.iter().product();
        let mut m = ComplexMatrix::zeros(d, d);
        for t in &self.terms {
            let v = t.vector(&self.dims);
            for i in 0..d {
                let vi = v[i] * t.weight;
                for j in 0..d {
                    m[(i, j)] += vi * v[j].conj();
                }
            }
        }
        m.hermitian_part()
    }
}

/// Upper bound on the number of product terms needed for any separable state.
pub fn caratheodory_cap(dims: &[usize]) -> usize {
    let d: usize = dims.iter().product();
    d * d
}

/// Random ensemble of `n_terms` product states with uniformly random
/// simplex weights and Haar-like factors.
pub fn random_product_ensemble(dims: &[usize], n_terms: usize, seed: u64) -> Result<ProductEnsemble> {
    let mut rng = random::rng(seed, 0x5eed_0004);
    let weights = random::simplex_weights(&mut rng, n_terms);
    let terms = weights
        .into_iter()
        .map(|w| {
            let factors = dims
                .iter()
                .map(|&d| PureState::from_parts_unchecked(random::unit_vector(&mut rng, d), vec![d]))
                .collect();
            ProductTerm::product(w, factors)
        })
        .collect();
    ProductEnsemble::new(dims.to_vec(), terms)
}

/// Realizes the ensemble as a density matrix; separable by construction.
pub fn realize(e: &ProductEnsemble) -> DensityMatrix {
    DensityMatrix::from_parts_unchecked(e.matrix(), e.dims.clone())
}
