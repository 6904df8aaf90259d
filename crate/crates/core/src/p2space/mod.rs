//! Finite-degree Hilbert-space machinery for `P^2(mu)` in the monomial basis.

pub mod gram;
pub mod subspace;

pub use gram::{bpe_classify, gram, point_eval_norm, BpeClass, BpeResult, GramBasis};
pub use subspace::{distance_to_cyclic, subspace_basis, wandering_dim, DistanceRecord, SubspaceTruncation, WanderingRecord};
