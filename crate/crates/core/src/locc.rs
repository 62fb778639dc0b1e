//! Correlated local operations: maps `ρ ↦ Σ_i (A_i ⊗ B_i) ρ (A_i ⊗ B_i)†`
//! with the completeness constraint `Σ_i A_i†A_i ⊗ B_i†B_i = I`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, ComplexMatrix};
use crate::random;
use crate::separable::{ppt_test, realize, ProductEnsemble, SeparabilityVerdict};
use crate::states::DensityMatrix;

/// Tolerance on the completeness relation.
pub const COMPLETENESS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KrausChannel {
    pairs: Vec<(ComplexMatrix, ComplexMatrix)>,
}

impl KrausChannel {
    pub fn new(pairs: Vec<(ComplexMatrix, ComplexMatrix)>) -> Self {
        KrausChannel { pairs }
    }

    pub fn identity(dims: [usize; 2]) -> Self {
        Self::new(vec![(
            ComplexMatrix::identity(dims[0]),
            ComplexMatrix::identity(dims[1]),
        )])
    }

    pub fn local_unitary(ua: ComplexMatrix, ub: ComplexMatrix) -> Self {
        Self::new(vec![(ua, ub)])
    }

    pub fn pairs(&self) -> &[(ComplexMatrix, ComplexMatrix)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    fn check_shapes(&self, dims: [usize; 2]) -> Result<()> {
        if self.pairs.is_empty() {
            return Err(Error::DimensionMismatch("channel has no Kraus pairs".into()));
        }
        for (i, (a, b)) in self.pairs.iter().enumerate() {
            let ok = a.rows() == dims[0] && a.cols() == dims[0] && b.rows() == dims[1] && b.cols() == dims[1];
            if !ok {
                return Err(Error::DimensionMismatch(format!(
                    "pair {i} is {}x{} ⊗ {}x{} for dims {dims:?}",
                    a.rows(),
                    a.cols(),
                    b.rows(),
                    b.cols()
                )));
            }
        }
        Ok(())
    }

    /// Frobenius norm of `Σ_i A_i†A_i ⊗ B_i†B_i − I`.
    pub fn completeness_deviation(&self, dims: [usize; 2]) -> Result<f64> {
        self.check_shapes(dims)?;
        let n = dims[0] * dims[1];
        let mut sum = ComplexMatrix::zeros(n, n);
        for (a, b) in &self.pairs {
            sum = &sum + &kron(&(&a.dagger() * a), &(&b.dagger() * b));
        }
        Ok((&sum - &ComplexMatrix::identity(n)).frobenius_norm())
    }

    /// Whether the completeness relation holds within [`COMPLETENESS_TOL`].
    pub fn validate(&self, dims: [usize; 2]) -> Result<bool> {
        Ok(self.completeness_deviation(dims)? <= COMPLETENESS_TOL)
    }

    /// Applies the channel to a bipartite state.
    pub fn apply(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        let dims = bipartite_dims(rho)?;
        let deviation = self.completeness_deviation(dims)?;
        if deviation > COMPLETENESS_TOL {
            return Err(Error::InvalidChannel { deviation });
        }
        let n = rho.dim();
        let mut out = ComplexMatrix::zeros(n, n);
        for (a, b) in &self.pairs {
            let k = kron(a, b);
            out = &out + &(&(&k * rho.matrix()) * &k.dagger());
        }
        DensityMatrix::new(out.hermitian_part(), rho.dims().to_vec())
    }

    /// `other ∘ self`: first this channel, then `other`. Pairs multiply
    /// index-wise, `(A'_j A_i, B'_j B_i)`.
    pub fn then(&self, other: &KrausChannel) -> KrausChannel {
        let pairs = other
            .pairs
            .iter()
            .flat_map(|(a2, b2)| self.pairs.iter().map(move |(a1, b1)| (a2 * a1, b2 * b1)))
            .collect();
        KrausChannel::new(pairs)
    }
}

fn bipartite_dims(rho: &DensityMatrix) -> Result<[usize; 2]> {
    match rho.dims() {
        &[a, b] => Ok([a, b]),
        d => Err(Error::NotBipartite(d.len())),
    }
}

/// Applies `ch` to the realized ensemble and runs the partial-transpose test
/// on the output; a separable verdict witnesses `Θ𝒟 ⊂ 𝒟` for that input.
pub fn apply_to_separable(ch: &KrausChannel, e: &ProductEnsemble) -> Result<SeparabilityVerdict> {
    let out = ch.apply(&realize(e))?;
    ppt_test(&out)
}

/// Which party measures in a one-way channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// A measures with a random instrument, B applies a random unitary per outcome.
    AToB,
    /// B measures, A rotates.
    BToA,
}

/// Random instrument `{M_i}` on dimension `d`: `M_i = G_i S^{-1/2}` with
/// `S = Σ G_i†G_i`, so that `Σ M_i†M_i = I`.
fn random_instrument(rng: &mut random::Rng, d: usize, n: usize) -> Vec<ComplexMatrix> {
    let raw: Vec<ComplexMatrix> = (0..n).map(|_| random::gaussian_matrix(rng, d, d)).collect();
    let mut s = ComplexMatrix::zeros(d, d);
    for g in &raw {
        s = &s + &(&g.dagger() * g);
    }
    let inv_root = s
        .hermitian_part()
        .inverse_sqrt_on_support()
        .expect("Gram matrix is Hermitian");
    raw.iter().map(|g| g * &inv_root).collect()
}

/// One-way channel with `n_pairs` outcomes: the measuring party applies a
/// random instrument and the other a random unitary conditioned on the
/// outcome. Satisfies completeness exactly (up to round-off).
pub fn random_one_way(dims: [usize; 2], n_pairs: usize, seed: u64, direction: Direction) -> KrausChannel {
    assert!(n_pairs >= 1, "n_pairs must be positive");
    let mut rng = random::rng(seed, 0x10cc_0001);
    let (dm, du) = match direction {
        Direction::AToB => (dims[0], dims[1]),
        Direction::BToA => (dims[1], dims[0]),
    };
    let measure = random_instrument(&mut rng, dm, n_pairs);
    let pairs = measure
        .into_iter()
        .map(|m| {
            let u = random::unitary(&mut rng, du);
            match direction {
                Direction::AToB => (m, u),
                Direction::BToA => (u, m),
            }
        })
        .collect();
    KrausChannel::new(pairs)
}

/// Random one-way channel from A to B with `n_pairs` Kraus pairs. With a
/// single pair both operators are unitary.
pub fn random_locc(dims: [usize; 2], n_pairs: usize, seed: u64) -> KrausChannel {
    random_one_way(dims, n_pairs, seed, Direction::AToB)
}

/// Two rounds: a random A→B channel followed by a random B→A channel,
/// giving `n_pairs²` pairs.
pub fn random_two_way(dims: [usize; 2], n_pairs: usize, seed: u64) -> KrausChannel {
    let first = random_one_way(dims, n_pairs, seed, Direction::AToB);
    let second = random_one_way(dims, n_pairs, seed.wrapping_add(0x9e37_79b9_7f4a_7c15), Direction::BToA);
    first.then(&second)
}
