//! Local density diagnostics of a measure around a point.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::measure::ComplexMeasure;
use crate::C64;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Lemma32Record {
    /// `max_r |nu|(B(lam0, r)) / r` over the radius grid; infinite when an
    /// atom sits at `lam0`.
    pub m: f64,
    /// `30 M / a + 2`.
    pub n: f64,
    /// `|nu|(B(lam0, N delta)) / delta`.
    pub eps_delta: f64,
    /// `(r, |nu|(B(lam0, r)) / r)` on the grid.
    pub grid: Vec<(f64, f64)>,
}

/// Radii `10^-8, 10^-7.75, ..., 10^-0.5`.
pub fn radius_grid() -> Vec<f64> {
    (0..=30).map(|i| 10f64.powf(-8.0 + 0.25 * i as f64)).collect()
}

/// Density bound `M`, the derived `N`, and the variable factor of the
/// exceptional-set size at scale `delta`. Absolute constants are omitted.
pub fn lemma32_diagnostic(nu: &ComplexMeasure, lam0: C64, a: f64, delta: f64) -> Result<Lemma32Record> {
    if !(a > 0.0) {
        return Err(Error::Domain(format!("a = {a} must be positive")));
    }
    if !(delta > 0.0 && delta < 0.25) {
        return Err(Error::Domain(format!("delta = {delta} must lie in (0, 1/4)")));
    }
    let grid: Vec<(f64, f64)> = radius_grid()
        .into_iter()
        .map(|r| (r, nu.ball_variation(lam0, r) / r))
        .collect();
    let atom_here = nu.atoms().any(|(p, w)| p == lam0 && w.norm() > 0.0);
    let m = if atom_here {
        f64::INFINITY
    } else {
        grid.iter().map(|&(_, v)| v).fold(0.0, f64::max)
    };
    let n = 30.0 * m / a + 2.0;
    let eps_delta = nu.ball_variation(lam0, n * delta) / delta;
    Ok(Lemma32Record { m, n, eps_delta, grid })
}
