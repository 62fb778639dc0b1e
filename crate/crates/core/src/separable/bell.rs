//! Closed forms for Bell-diagonal two-qubit states.

use std::f64::consts::LN_2;

use crate::error::{Error, Result};
use crate::measures::{product_of_marginals, relative_entropy};
use crate::states::{BellDiagonalSpec, DensityMatrix};

/// A Bell-diagonal state is separable iff every weight is at most ½.
pub fn bell_diagonal_separable(spec: &BellDiagonalSpec) -> bool {
    spec.max_weight() <= 0.5 + 1e-12
}

fn xlnx(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Relative entropy of entanglement of a Bell-diagonal state and its closest
/// separable Bell-diagonal state.
///
/// With λ the largest weight: zero (the state is its own minimizer) when
/// λ ≤ ½, otherwise `λ ln λ + (1−λ) ln(1−λ) + ln 2` attained at weight ½ on
/// the dominant basis state and `λ_i / 2(1−λ)` on the others. At λ = 1 the
/// remaining ½ is split evenly over the other three basis states.
pub fn bell_diagonal_ree(spec: &BellDiagonalSpec) -> (f64, BellDiagonalSpec) {
    let lambdas = spec.lambdas();
    let (top, &lambda) = lambdas
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("four weights");
    if lambda <= 0.5 {
        return (0.0, *spec);
    }
    let value = xlnx(lambda) + xlnx(1.0 - lambda) + LN_2;
    let rest = 1.0 - lambda;
    let mut p = [0.0; 4];
    for (i, slot) in p.iter_mut().enumerate() {
        *slot = if i == top {
            0.5
        } else if rest > 0.0 {
            lambdas[i] / (2.0 * rest)
        } else {
            1.0 / 6.0
        };
    }
    // Renormalize away the round-off of λ_i/(2(1−λ)).
    let sum: f64 = p.iter().sum();
    p.iter_mut().for_each(|x| *x /= sum);
    let minimizer = BellDiagonalSpec::new(p).expect("minimizer weights are a distribution");
    (value, minimizer)
}

/// Classical correlations D(ρ*‖ρ*_A ⊗ ρ*_B) of a (closest separable) state.
pub fn classical_correlations(rho_star: &DensityMatrix) -> Result<f64> {
    if rho_star.subsystems() != 2 {
        return Err(Error::NotBipartite(rho_star.subsystems()));
    }
    relative_entropy(rho_star, &product_of_marginals(rho_star)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;
    use crate::measures::entropy_of_spectrum;
    use crate::states::{bell_diagonal, DensityMatrix};

    fn spec(l: [f64; 4]) -> BellDiagonalSpec {
        BellDiagonalSpec::new(l).unwrap()
    }

    #[test]
    fn separability_examples() {
        assert!(bell_diagonal_separable(&spec([0.25; 4])));
        assert!(!bell_diagonal_separable(&spec([0.7, 0.1, 0.1, 0.1])));
        assert!(bell_diagonal_separable(&spec([0.5, 0.5, 0.0, 0.0])));
    }

    #[test]
    fn closed_form_examples() {
        let (v, m) = bell_diagonal_ree(&spec([0.5, 0.5, 0.0, 0.0]));
        assert_eq!(v, 0.0);
        assert_eq!(m, spec([0.5, 0.5, 0.0, 0.0]));

        let (v, m) = bell_diagonal_ree(&spec([1.0, 0.0, 0.0, 0.0]));
        assert!((v - LN_2).abs() < 1e-15);
        let p = m.lambdas();
        assert!((p[0] - 0.5).abs() < 1e-15);
        assert!(p[1..].iter().all(|x| (x - 1.0 / 6.0).abs() < 1e-15));

        // 0.7 ln 0.7 + 0.3 ln 0.3 + ln 2
        let (v, m) = bell_diagonal_ree(&spec([0.7, 0.1, 0.1, 0.1]));
        let expect = 0.7 * 0.7f64.ln() + 0.3 * 0.3f64.ln() + LN_2;
        assert!((v - expect).abs() < 1e-15);
        assert!((v - 0.08228).abs() < 5e-6);
        let p = m.lambdas();
        assert!((p[0] - 0.5).abs() < 1e-15);
        assert!(p[1..].iter().all(|x| (x - 1.0 / 6.0).abs() < 1e-14));
    }

    #[test]
    fn dominant_weight_anywhere() {
        let (v, m) = bell_diagonal_ree(&spec([0.1, 0.1, 0.1, 0.7]));
        let (w, _) = bell_diagonal_ree(&spec([0.7, 0.1, 0.1, 0.1]));
        assert!((v - w).abs() < 1e-15);
        assert!((m.lambdas()[3] - 0.5).abs() < 1e-15);
    }

    #[test]
    fn closed_form_matches_direct_relative_entropy() {
        // Both states are diagonal in the Bell basis, so the relative
        // entropy reduces to the classical one on the weights.
        for l1 in [0.55, 0.6, 0.75, 0.9, 0.99] {
            let s = BellDiagonalSpec::new([l1, (1.0 - l1) * 0.5, (1.0 - l1) * 0.3, (1.0 - l1) * 0.2]).unwrap();
            let (v, m) = bell_diagonal_ree(&s);
            let direct = relative_entropy(&bell_diagonal(&s), &bell_diagonal(&m)).unwrap();
            assert!((v - direct).abs() < 1e-10, "{l1}: {v} vs {direct}");
        }
    }

    #[test]
    fn classical_correlation_examples() {
        let prod = DensityMatrix::maximally_mixed(&[2, 2]);
        assert!(classical_correlations(&prod).unwrap().abs() < 1e-14);
        let pair = DensityMatrix::new(ComplexMatrix::from_real_diag(&[0.5, 0.0, 0.0, 0.5]), vec![2, 2]).unwrap();
        assert!((classical_correlations(&pair).unwrap() - LN_2).abs() < 1e-14);
        // Bell-diagonal marginals are I/2: ln 4 − H(½, ⅙, ⅙, ⅙).
        let (_, m) = bell_diagonal_ree(&spec([0.7, 0.1, 0.1, 0.1]));
        let c = classical_correlations(&bell_diagonal(&m)).unwrap();
        let expect = 4f64.ln() - entropy_of_spectrum(&[0.5, 1.0 / 6.0, 1.0 / 6.0, 1.0 / 6.0]);
        assert!((c - expect).abs() < 1e-12);
        assert!((c - 0.14384).abs() < 5e-6);
    }
}
