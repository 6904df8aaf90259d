//! Numerical workbench for Cauchy transforms of measures on the closed unit
//! disk, their boundary behaviour along Stolz regions, and the Hilbert-space
//! structure of `P^2(mu)` for a measure whose shift-invariant subspace is not
//! generated by its wandering subspace.

pub mod cauchy;
pub mod error;
pub mod geometry;
pub mod hz;
pub mod measure;
pub mod p2space;
pub mod poly;
pub mod quad;

pub use num_complex::Complex64 as C64;

pub use error::{Error, Result};
pub use geometry::capacity::{capacity_primitive, CapacityShape};
pub use geometry::covering::{exceptional_cover_estimate, vitali_3r_select, Disk};
pub use geometry::diagnostic::{lemma32_diagnostic, Lemma32Record};
pub use geometry::lens::{LensRegion, Side};
pub use geometry::stolz::{approach_path, reflect_tangent, stolz_contains, ApproachRegion, ReflectedStolz, StolzRegion};
pub use measure::file::{parse_measure, read_measure, serialize_measure};
pub use measure::{ComplexMeasure, GWeight, LensHarmonic, MeasureComponent, Region};
pub use poly::{BiPoly, Poly};
pub use hz::{build_mu, build_sigma, g_alpha_eval, g_alpha_zeros, interior_zero_exists, verify_not_generated, verify_orthogonality, HZParams};
pub use p2space::{bpe_classify, distance_to_cyclic, gram, point_eval_norm, subspace_basis, wandering_dim, BpeClass, GramBasis};
pub use cauchy::{cauchy_eps, cauchy_max, cauchy_pv, plemelj_scan};
