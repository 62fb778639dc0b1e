use super::ppt::Witness;
use crate::error::{Error, Result};
use crate::linalg::{ComplexMatrix, C64};
use crate::random;
use crate::states::{DensityMatrix, PureState};

const RESTARTS: u64 = 50;
const ITERATIONS: usize = 200;
const IMPROVEMENT_TOL: f64 = 1e-10;

/// Best overlap found and the maximally entangled state attaining it.
#[derive(Debug, Clone, PartialEq)]
pub struct EntangledOverlap {
    pub value: f64,
    pub state: PureState,
}

impl EntangledOverlap {
    /// Overlaps above ½ certify entanglement.
    pub fn witness(&self) -> Option<Witness> {
        (self.value > 0.5 + 1e-9).then_some(Witness::EntangledOverlap { value: self.value })
    }
}

/// max over U_A, U_B of ⟨e|ρ|e⟩ with |e⟩ = (U_A ⊗ U_B)|Φ+⟩.
pub fn max_entangled_overlap(rho: &DensityMatrix) -> Result<f64> {
    Ok(max_entangled_overlap_state(rho, 0)?.value)
}

/// Alternating polar-decomposition ascent with random restarts.
///
/// |e⟩ has coefficient matrix `E = U_A U_Bᵀ/√2`, and ⟨e|ρ|e⟩ is a convex
/// quadratic in either unitary, so replacing a unitary with the polar
/// factor of its environment never decreases the overlap.
pub fn max_entangled_overlap_state(rho: &DensityMatrix, seed: u64) -> Result<EntangledOverlap> {
    if rho.dims() != [2, 2] {
        return Err(Error::NotTwoQubits(rho.dims().to_vec()));
    }
    let m = rho.matrix();
    let mut best: Option<(f64, ComplexMatrix)> = None;
    for restart in 0..RESTARTS {
        let mut rng = random::rng(seed, 0x0e1a_0000 + restart);
        let (mut ua, mut ub) = if restart == 0 {
            (ComplexMatrix::identity(2), ComplexMatrix::identity(2))
        } else {
            (random::unitary(&mut rng, 2), random::unitary(&mut rng, 2))
        };
        let mut value = overlap(m, &coefficients(&ua, &ub));
        for _ in 0..ITERATIONS {
            // U_A step: f = tr(U_A† R M†) with M = U_Bᵀ/√2.
            let e = coefficients(&ua, &ub);
            let r = apply(m, &e);
            let mb = ub.transpose().scale(std::f64::consts::FRAC_1_SQRT_2);
            ua = (&r * &mb.dagger()).polar_unitary()?;
            // U_B step on the transposed coefficients: Eᵀ = U_B U_Aᵀ/√2.
            let e = coefficients(&ua, &ub);
            let rt = apply(m, &e).transpose();
            let ka = ua.transpose().scale(std::f64::consts::FRAC_1_SQRT_2);
            ub = (&rt * &ka.dagger()).polar_unitary()?;
            let next = overlap(m, &coefficients(&ua, &ub));
            let gained = next - value;
            value = next.max(value);
            if gained < IMPROVEMENT_TOL {
                break;
            }
        }
        let e = coefficients(&ua, &ub);
        if best.as_ref().is_none_or(|(v, _)| value > *v) {
            best = Some((value, e));
        }
    }
    let (value, e) = best.expect("at least one restart");
    let amplitudes: Vec<C64> = e.as_slice().to_vec();
    Ok(EntangledOverlap {
        value,
        state: PureState::normalized(amplitudes, vec![2, 2])?,
    })
}

fn coefficients(ua: &ComplexMatrix, ub: &ComplexMatrix) -> ComplexMatrix {
    (ua * &ub.transpose()).scale(std::f64::consts::FRAC_1_SQRT_2)
}

/// ρ vec(E) reshaped back to 2×2 (row-major: index 2i + j ↔ (i, j)).
fn apply(rho: &ComplexMatrix, e: &ComplexMatrix) -> ComplexMatrix {
    let v = rho.mul_vec(e.as_slice());
    ComplexMatrix::from_vec(2, 2, v).expect("four amplitudes")
}

fn overlap(rho: &ComplexMatrix, e: &ComplexMatrix) -> f64 {
    rho.expectation(e.as_slice())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{bell_diagonal, bell_state, werner_state, BellDiagonalSpec, BellState};

    #[test]
    fn examples() {
        let mixed = DensityMatrix::maximally_mixed(&[2, 2]);
        assert!((max_entangled_overlap(&mixed).unwrap() - 0.25).abs() < 1e-12);
        let bell = bell_state(BellState::PhiPlus).density();
        assert!((max_entangled_overlap(&bell).unwrap() - 1.0).abs() < 1e-10);
        // Werner weight sits on Ψ+, reachable from Φ+ by a local flip.
        let w = werner_state(0.625).unwrap();
        assert!((max_entangled_overlap(&w).unwrap() - 0.625).abs() < 1e-8);
    }

    #[test]
    fn bell_diagonal_overlap_is_largest_weight() {
        let s = BellDiagonalSpec::new([0.1, 0.2, 0.3, 0.4]).unwrap();
        let v = max_entangled_overlap(&bell_diagonal(&s)).unwrap();
        assert!((v - 0.4).abs() < 1e-8);
    }

    #[test]
    fn wrong_dims() {
        let r = DensityMatrix::maximally_mixed(&[2, 3]);
        assert!(matches!(max_entangled_overlap(&r), Err(Error::NotTwoQubits(_))));
    }
}
