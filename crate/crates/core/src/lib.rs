//! Distance-based entanglement measures for finite-dimensional quantum states.
//!
//! The entanglement of a state σ is its distance to the closest separable
//! state, `E(σ) = min_{ρ ∈ 𝒟} D(σ‖ρ)`. With the quantum relative entropy as
//! `D` this is the relative entropy of entanglement; with the Bures distance
//! `2 − 2√F` it is the Bures entanglement. Both are solved numerically over
//! explicit product-state ensembles:
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`linalg`] | Jacobi eigensolver, spectral functions, partial trace/transpose |
//! | [`states`] | Density matrices, Bell/Werner families, seeded random states |
//! | [`measures`] | Entropy, mutual information, relative entropy, fidelity |
//! | [`separable`] | Product ensembles, PPT test, Bell-diagonal closed forms |
//! | [`solver`] | Frank–Wolfe solvers for relative entropy and Bures distance |
//! | [`locc`] | Correlated product Kraus channels and monotonicity harnesses |
//! | [`io`] | JSON state files and solver results |

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod io;
pub mod linalg;
pub mod locc;
pub mod measures;
pub mod random;
pub mod separable;
pub mod solver;
pub mod states;
pub mod suites;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, C64};
pub use states::{BellDiagonalSpec, BellState, DensityMatrix, PureState};
