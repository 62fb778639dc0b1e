//! Density matrices, pure states and the named two-qubit families: Bell
//! states, Bell-diagonal states, Werner states and Schmidt-form pure states.

use std::f64::consts::FRAC_1_SQRT_2;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{kron, kron_vec, norm, partial_trace, total_dim, ComplexMatrix, C64, ZERO};
use crate::random;

/// Tolerance for the density-matrix invariants (Hermiticity, trace, positivity).
pub const STATE_TOL: f64 = 1e-10;

/// A Hermitian, positive semidefinite, unit-trace operator on a composite
/// space described by `dims`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawDensityMatrix")]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

#[derive(Deserialize)]
struct RawDensityMatrix {
    matrix: ComplexMatrix,
    dims: Vec<usize>,
}

impl TryFrom<RawDensityMatrix> for DensityMatrix {
    type Error = Error;

    fn try_from(raw: RawDensityMatrix) -> Result<Self> {
        Self::new(raw.matrix, raw.dims)
    }
}

impl DensityMatrix {
    /// Validates `matrix` against every density-matrix invariant.
    pub fn new(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        check_dims(&matrix, &dims)?;
        matrix.ensure_hermitian(STATE_TOL)?;
        let tr = matrix.trace();
        if !((tr.re - 1.0).abs() <= STATE_TOL && tr.im.abs() <= STATE_TOL) {
            return Err(Error::InvalidState(format!("trace is {tr}, expected 1")));
        }
        let min = matrix.hermitian_eigen()?.min_value();
        if min < -STATE_TOL {
            return Err(Error::InvalidState(format!("negative eigenvalue {min:.3e}")));
        }
        Ok(DensityMatrix {
            matrix: matrix.hermitian_part(),
            dims,
        })
    }

    /// Symmetrizes and rescales to unit trace before validating. For
    /// outputs of maps that are trace preserving up to round-off.
    pub fn renormalized(matrix: ComplexMatrix, dims: Vec<usize>) -> Result<Self> {
        let h = matrix.hermitian_part();
        let tr = h.trace().re;
        if !(tr.is_finite() && tr > 0.0) {
            return Err(Error::InvalidState(format!("trace is {tr}")));
        }
        Self::new(h.scale(1.0 / tr), dims)
    }

    pub(crate) fn from_parts_unchecked(matrix: ComplexMatrix, dims: Vec<usize>) -> Self {
        DensityMatrix { matrix, dims }
    }

    pub fn maximally_mixed(dims: &[usize]) -> Self {
        let d: usize = dims.iter().product();
        DensityMatrix {
            matrix: ComplexMatrix::identity(d).scale(1.0 / d as f64),
            dims: dims.to_vec(),
        }
    }

    pub fn from_pure(psi: &PureState) -> Self {
        DensityMatrix {
            matrix: ComplexMatrix::projector(&psi.amplitudes),
            dims: psi.dims.clone(),
        }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    pub fn subsystems(&self) -> usize {
        self.dims.len()
    }

    /// Reduced state on the listed subsystems.
    pub fn marginal(&self, keep: &[usize]) -> Result<DensityMatrix> {
        let m = partial_trace(&self.matrix, &self.dims, keep)?;
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let dims = keep.iter().map(|&k| self.dims[k]).collect();
        Ok(DensityMatrix {
            matrix: m.hermitian_part(),
            dims,
        })
    }

    pub fn tensor(&self, other: &DensityMatrix) -> DensityMatrix {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        DensityMatrix {
            matrix: kron(&self.matrix, &other.matrix),
            dims,
        }
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        self.matrix
            .hermitian_eigen()
            .expect("density matrices are Hermitian")
            .values
    }

    pub fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    /// ½‖self − other‖₁
    pub fn trace_distance(&self, other: &DensityMatrix) -> f64 {
        (&self.matrix - &other.matrix)
            .hermitian_part()
            .trace_norm_hermitian()
            .expect("difference of Hermitian matrices is Hermitian")
            * 0.5
    }

    /// Conjugation `U ρ U†` by a unitary on the full space.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        if u.rows() != self.dim() || !u.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "{}x{} unitary for a {}-dimensional state",
                u.rows(),
                u.cols(),
                self.dim()
            )));
        }
        let m = &(u * &self.matrix) * &u.dagger();
        DensityMatrix::renormalized(m, self.dims.clone())
    }

    /// ⟨ψ|ρ|ψ⟩
    pub fn overlap(&self, psi: &PureState) -> f64 {
        self.matrix.expectation(&psi.amplitudes)
    }
}

fn check_dims(matrix: &ComplexMatrix, dims: &[usize]) -> Result<()> {
    if dims.is_empty() || !matrix.is_square() || total_dim(dims) != Some(matrix.rows()) {
        return Err(Error::DimensionMismatch(format!(
            "dims {dims:?} do not match a {}x{} matrix",
            matrix.rows(),
            matrix.cols()
        )));
    }
    if matrix
        .as_slice()
        .iter()
        .any(|z| !(z.re.is_finite() && z.im.is_finite()))
    {
        return Err(Error::InvalidState("non-finite matrix entry".into()));
    }
    Ok(())
}

/// Unit vector on a composite space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawPureState")]
pub struct PureState {
    amplitudes: Vec<C64>,
    dims: Vec<usize>,
}

#[derive(Deserialize)]
struct RawPureState {
    amplitudes: Vec<C64>,
    dims: Vec<usize>,
}

impl TryFrom<RawPureState> for PureState {
    type Error = Error;

    fn try_from(raw: RawPureState) -> Result<Self> {
        Self::new(raw.amplitudes, raw.dims)
    }
}

impl PureState {
    pub fn new(amplitudes: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        if dims.is_empty() || total_dim(&dims) != Some(amplitudes.len()) {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} do not match {} amplitudes",
                amplitudes.len()
            )));
        }
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if !((norm_sqr - 1.0).abs() <= STATE_TOL) {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(PureState { amplitudes, dims })
    }

    /// Normalizes before validating.
    pub fn normalized(amplitudes: Vec<C64>, dims: Vec<usize>) -> Result<Self> {
        let n = norm(&amplitudes);
        if n == 0.0 || !n.is_finite() {
            return Err(Error::NotNormalized { norm_sqr: n * n });
        }
        Self::new(amplitudes.iter().map(|z| z / n).collect(), dims)
    }

    pub(crate) fn from_parts_unchecked(amplitudes: Vec<C64>, dims: Vec<usize>) -> Self {
        PureState { amplitudes, dims }
    }

    /// Computational basis state `|index⟩`.
    pub fn basis(index: usize, dims: &[usize]) -> Self {
        let total: usize = dims.iter().product();
        let mut amplitudes = vec![ZERO; total];
        amplitudes[index] = C64::new(1.0, 0.0);
        PureState {
            amplitudes,
            dims: dims.to_vec(),
        }
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn density(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        PureState {
            amplitudes: kron_vec(&self.amplitudes, &other.amplitudes),
            dims,
        }
    }
}

/// The four two-qubit maximally entangled states.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum BellState {
    PhiPlus,
    PhiMinus,
    PsiPlus,
    PsiMinus,
}

/// Bell-basis order used by [`BellDiagonalSpec`]: (Ψ+, Ψ−, Φ+, Φ−).
pub const BELL_ORDER: [BellState; 4] = [
    BellState::PsiPlus,
    BellState::PsiMinus,
    BellState::PhiPlus,
    BellState::PhiMinus,
];

impl BellState {
    pub const ALL: [BellState; 4] = BELL_ORDER;
}

/// |Φ±⟩ = (|00⟩ ± |11⟩)/√2, |Ψ±⟩ = (|10⟩ ± |01⟩)/√2.
pub fn bell_state(which: BellState) -> PureState {
    let s = FRAC_1_SQRT_2;
    let (a00, a01, a10, a11) = match which {
        BellState::PhiPlus => (s, 0.0, 0.0, s),
        BellState::PhiMinus => (s, 0.0, 0.0, -s),
        BellState::PsiPlus => (0.0, s, s, 0.0),
        BellState::PsiMinus => (0.0, -s, s, 0.0),
    };
    PureState {
        amplitudes: [a00, a01, a10, a11].iter().map(|&x| C64::new(x, 0.0)).collect(),
        dims: vec![2, 2],
    }
}

/// Weights λ₁..λ₄ on the Bell basis in [`BELL_ORDER`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "RawBellDiagonalSpec")]
pub struct BellDiagonalSpec {
    lambdas: [f64; 4],
}

#[derive(Deserialize)]
struct RawBellDiagonalSpec {
    lambdas: [f64; 4],
}

impl TryFrom<RawBellDiagonalSpec> for BellDiagonalSpec {
    type Error = Error;

    fn try_from(raw: RawBellDiagonalSpec) -> Result<Self> {
        Self::new(raw.lambdas)
    }
}

impl BellDiagonalSpec {
    pub fn new(lambdas: [f64; 4]) -> Result<Self> {
        if lambdas.iter().any(|l| !(0.0..=1.0).contains(l)) {
            return Err(Error::InvalidWeights(format!("weights {lambdas:?} must lie in [0, 1]")));
        }
        let sum: f64 = lambdas.iter().sum();
        if (sum - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidWeights(format!("weights sum to {sum}")));
        }
        Ok(BellDiagonalSpec { lambdas })
    }

    /// Weight λ₁ on the first basis state, the rest split equally.
    pub fn dominant(lambda1: f64) -> Result<Self> {
        let rest = (1.0 - lambda1) / 3.0;
        Self::new([lambda1, rest, rest, rest])
    }

    pub fn lambdas(&self) -> [f64; 4] {
        self.lambdas
    }

    pub fn max_weight(&self) -> f64 {
        self.lambdas.iter().copied().fold(f64::MIN, f64::max)
    }
}

/// W = Σ_i λ_i |e_i⟩⟨e_i| over the Bell basis.
pub fn bell_diagonal(spec: &BellDiagonalSpec) -> DensityMatrix {
    let mut m = ComplexMatrix::zeros(4, 4);
    for (lambda, which) in spec.lambdas.iter().zip(BELL_ORDER) {
        if *lambda == 0.0 {
            continue;
        }
        m = &m + &ComplexMatrix::projector(bell_state(which).amplitudes()).scale(*lambda);
    }
    DensityMatrix::from_parts_unchecked(m, vec![2, 2])
}

/// Diagonal of ρ in the Bell basis, ⟨e_i|ρ|e_i⟩ in [`BELL_ORDER`].
pub fn bell_basis_weights(rho: &DensityMatrix) -> Result<[f64; 4]> {
    if rho.dims() != [2, 2] {
        return Err(Error::NotTwoQubits(rho.dims().to_vec()));
    }
    let mut out = [0.0; 4];
    for (slot, which) in out.iter_mut().zip(BELL_ORDER) {
        *slot = rho.overlap(&bell_state(which));
    }
    Ok(out)
}

/// Werner state with fidelity `f` on Ψ+: λ = (F, (1−F)/3, (1−F)/3, (1−F)/3).
pub fn werner_state(f: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&f) {
        return Err(Error::OutOfRange {
            value: f,
            range: "[0, 1]",
        });
    }
    Ok(bell_diagonal(&BellDiagonalSpec::dominant(f)?))
}

/// α|00⟩ + β|11⟩
pub fn pure_two_qubit(alpha: C64, beta: C64) -> Result<PureState> {
    let zero = C64::new(0.0, 0.0);
    PureState::new(vec![alpha, zero, zero, beta], vec![2, 2])
}

/// G G† / tr(G G†) with G an independent complex Gaussian matrix.
pub fn random_density(dims: &[usize], seed: u64) -> Result<DensityMatrix> {
    let d: usize = dims.iter().product();
    if dims.is_empty() || d == 0 {
        return Err(Error::DimensionMismatch("empty dims".into()));
    }
    let mut rng = random::rng(seed, 0x5eed_0001);
    let g = random::gaussian_matrix(&mut rng, d, d);
    let m = (&g * &g.dagger()).hermitian_part();
    let tr = m.trace().re;
    Ok(DensityMatrix::from_parts_unchecked(m.scale(1.0 / tr), dims.to_vec()))
}

/// Tensor product of independent random unit vectors, one per subsystem.
pub fn random_product_pure(dims: &[usize], seed: u64) -> Result<PureState> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(Error::DimensionMismatch("empty dims".into()));
    }
    let mut rng = random::rng(seed, 0x5eed_0002);
    let mut amplitudes = vec![C64::new(1.0, 0.0)];
    for &d in dims {
        amplitudes = kron_vec(&amplitudes, &random::unit_vector(&mut rng, d));
    }
    Ok(PureState {
        amplitudes,
        dims: dims.to_vec(),
    })
}

/// U_A ⊗ U_B (⊗ ...) from per-subsystem random unitaries.
pub fn random_local_unitary(dims: &[usize], seed: u64) -> ComplexMatrix {
    let mut rng = random::rng(seed, 0x5eed_0003);
    let mut u = ComplexMatrix::identity(1);
    for &d in dims {
        u = kron(&u, &random::unitary(&mut rng, d));
    }
    u
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::inner;

    fn approx(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn bell_vectors() {
        let s = FRAC_1_SQRT_2;
        let phi = bell_state(BellState::PhiPlus);
        let expect = [s, 0.0, 0.0, s];
        for (a, e) in phi.amplitudes().iter().zip(expect) {
            assert!(approx(a.re, e, 1e-15) && a.im == 0.0);
        }
        // (|10⟩ − |01⟩)/√2; equals (0, 1, −1, 0)/√2 up to a global sign.
        let psi = bell_state(BellState::PsiMinus);
        let other = [0.0, s, -s, 0.0].map(|x| C64::new(x, 0.0));
        let ov = inner(&other, psi.amplitudes());
        assert!(approx(ov.norm(), 1.0, 1e-15));
        assert!(approx(psi.amplitudes()[2].re, s, 1e-15));
    }

    #[test]
    fn bell_basis_is_orthonormal() {
        for a in BellState::ALL {
            for b in BellState::ALL {
                let ov = inner(bell_state(a).amplitudes(), bell_state(b).amplitudes());
                let expect = if a == b { 1.0 } else { 0.0 };
                assert!(approx(ov.norm(), expect, 1e-15));
            }
        }
    }

    #[test]
    fn bell_diagonal_examples() {
        let psi_plus = bell_diagonal(&BellDiagonalSpec::new([1.0, 0.0, 0.0, 0.0]).unwrap());
        assert!(psi_plus
            .matrix()
            .approx_eq(&bell_state(BellState::PsiPlus).density().into_matrix(), 1e-15));

        let uniform = bell_diagonal(&BellDiagonalSpec::new([0.25; 4]).unwrap());
        assert!(uniform
            .matrix()
            .approx_eq(&ComplexMatrix::identity(4).scale(0.25), 1e-15));

        let w = bell_diagonal(&BellDiagonalSpec::new([0.7, 0.1, 0.1, 0.1]).unwrap());
        let ev = w.eigenvalues();
        for (v, e) in ev.iter().zip([0.1, 0.1, 0.1, 0.7]) {
            assert!(approx(*v, e, 1e-12));
        }
        let ra = w.marginal(&[0]).unwrap();
        assert!(ra.matrix().approx_eq(&ComplexMatrix::identity(2).scale(0.5), 1e-14));
    }

    #[test]
    fn invalid_weights_rejected() {
        assert!(BellDiagonalSpec::new([0.5, 0.5, 0.1, 0.0]).is_err());
        assert!(BellDiagonalSpec::new([1.2, -0.2, 0.0, 0.0]).is_err());
    }

    #[test]
    fn werner_examples() {
        let pure = werner_state(1.0).unwrap();
        assert!(approx(pure.purity(), 1.0, 1e-14));
        let mixed = werner_state(0.25).unwrap();
        assert!(mixed.matrix().approx_eq(&ComplexMatrix::identity(4).scale(0.25), 1e-15));
        let w = werner_state(0.625).unwrap();
        let ev = w.eigenvalues();
        for (v, e) in ev.iter().zip([0.125, 0.125, 0.125, 0.625]) {
            assert!(approx(*v, e, 1e-12));
        }
        assert!(matches!(werner_state(1.5), Err(Error::OutOfRange { .. })));
    }

    #[test]
    fn pure_two_qubit_examples() {
        let one = C64::new(1.0, 0.0);
        let zero = C64::new(0.0, 0.0);
        let prod = pure_two_qubit(one, zero).unwrap();
        assert_eq!(prod, PureState::basis(0, &[2, 2]));

        let s = C64::new(FRAC_1_SQRT_2, 0.0);
        let phi = pure_two_qubit(s, s).unwrap();
        assert!(approx(
            inner(phi.amplitudes(), bell_state(BellState::PhiPlus).amplitudes()).norm(),
            1.0,
            1e-15
        ));

        let st = pure_two_qubit(C64::new(0.9f64.sqrt(), 0.0), C64::new(0.1f64.sqrt(), 0.0)).unwrap();
        let ev = st.density().marginal(&[0]).unwrap().eigenvalues();
        assert!(approx(ev[0], 0.1, 1e-12) && approx(ev[1], 0.9, 1e-12));

        assert!(matches!(pure_two_qubit(one, one), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn random_density_contract() {
        let a = random_density(&[2, 2], 11).unwrap();
        let b = random_density(&[2, 2], 11).unwrap();
        assert_eq!(a, b);
        assert!(approx(a.matrix().trace().re, 1.0, 1e-12));
        DensityMatrix::new(a.matrix().clone(), vec![2, 2]).unwrap();
    }

    #[test]
    fn random_density_sweep_is_psd() {
        for seed in 0..1000 {
            let rho = random_density(&[2, 2], seed).unwrap();
            assert!(rho.eigenvalues()[0] >= 0.0 - 1e-14, "seed {seed}");
        }
    }

    #[test]
    fn random_product_has_pure_marginals() {
        let p = random_product_pure(&[2, 2], 5).unwrap();
        let ra = p.density().marginal(&[0]).unwrap();
        assert!(approx(ra.purity(), 1.0, 1e-12));
        let q = random_product_pure(&[2], 5).unwrap();
        assert!(approx(norm(q.amplitudes()), 1.0, 1e-14));
    }

    #[test]
    fn product_overlap_with_bell_is_bounded() {
        let phi = bell_state(BellState::PhiPlus);
        for seed in 0..1000 {
            let p = random_product_pure(&[2, 2], seed).unwrap();
            let ov = inner(phi.amplitudes(), p.amplitudes()).norm_sqr();
            assert!(ov <= 0.5 + 1e-9, "seed {seed}: {ov}");
        }
    }
}
