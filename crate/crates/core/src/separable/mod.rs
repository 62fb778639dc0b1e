//! The separable set: explicit product ensembles, separability tests and
//! the Bell-diagonal closed forms.

mod bell;
mod ensemble;
mod overlap;
mod ppt;
pub(crate) mod refine;

pub use bell::{bell_diagonal_ree, bell_diagonal_separable, classical_correlations};
pub use ensemble::{caratheodory_cap, embed_product, random_product_ensemble, realize, ProductEnsemble, ProductTerm};
pub use overlap::{max_entangled_overlap, max_entangled_overlap_state, EntangledOverlap};
pub use ppt::{
    certify_separable, partial_transpose_min, ppt_test, SeparabilityStatus, SeparabilityVerdict, Witness,
    CERTIFICATE_TOL, PPT_TOL,
};
