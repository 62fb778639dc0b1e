//! Seeded randomness. Every stochastic routine takes an explicit seed; a
//! `(seed, stream)` pair selects an independent ChaCha stream so callers can
//! split one seed into per-trial or per-restart generators.

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};

use crate::linalg::{normalized, ComplexMatrix, C64};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64, stream: u64) -> Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

/// Independent seed for item `index` of a stream, e.g. one trial of a suite.
pub fn derive_seed(seed: u64, stream: u64, index: u64) -> u64 {
    rng(seed.wrapping_add(index.wrapping_mul(0x9e37_79b9_7f4a_7c15)), stream).next_u64()
}

/// Uniform point of the probability simplex with `n` vertices.
pub fn simplex_weights(rng: &mut Rng, n: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..n).map(|_| Exp1.sample(rng)).collect();
    let total: f64 = raw.iter().sum();
    raw.iter().map(|x| x / total).collect()
}

pub fn complex_gaussian(rng: &mut Rng) -> C64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    C64::new(re, im)
}

pub fn gaussian_vector(rng: &mut Rng, n: usize) -> Vec<C64> {
    (0..n).map(|_| complex_gaussian(rng)).collect()
}

/// Uniform on the unit sphere of C^n (normalized complex Gaussian).
pub fn unit_vector(rng: &mut Rng, n: usize) -> Vec<C64> {
    loop {
        let v = gaussian_vector(rng, n);
        if crate::linalg::norm(&v) > 1e-8 {
            return normalized(&v);
        }
    }
}

pub fn gaussian_matrix(rng: &mut Rng, rows: usize, cols: usize) -> ComplexMatrix {
    ComplexMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

/// Random unitary: the polar factor of a complex Gaussian matrix.
pub fn unitary(rng: &mut Rng, n: usize) -> ComplexMatrix {
    let g = gaussian_matrix(rng, n, n);
    g.polar_unitary()
        .expect("square Gaussian matrix has a polar decomposition")
}

/// Random Hermitian matrix with Gaussian entries.
pub fn hermitian(rng: &mut Rng, n: usize) -> ComplexMatrix {
    gaussian_matrix(rng, n, n).hermitian_part()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn streams_are_independent_and_reproducible() {
        let a: Vec<C64> = gaussian_vector(&mut rng(7, 0), 4);
        let b: Vec<C64> = gaussian_vector(&mut rng(7, 0), 4);
        let c: Vec<C64> = gaussian_vector(&mut rng(7, 1), 4);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn unitary_is_unitary() {
        let u = unitary(&mut rng(3, 0), 3);
        assert!((&u.dagger() * &u).approx_eq(&ComplexMatrix::identity(3), 1e-12));
    }
}
