//! Cauchy transforms of measures on the closed disk and their boundary
//! behaviour.

pub mod hardy;
pub mod plemelj;
pub mod transform;

pub use hardy::{area_mean_abs, hardy_multiplication_check, poisson_decomposition_check, AreaMean, HardyRecord, PoissonRecord};
pub use plemelj::{nontangential_limit_estimate, plemelj_scan, JumpRecord, JumpScanReport};
pub use transform::{cauchy_eps, cauchy_max, cauchy_pv, cauchy_pv_quadrature, CauchyValue, Method};
