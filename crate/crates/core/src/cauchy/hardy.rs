//! Identities for Cauchy transforms of Hardy-space densities on the circle,
//! and the subharmonic area-mean bound.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use super::plemelj::nontangential_limit_estimate;
use super::transform::{circle_inner, cauchy_pv};
use crate::error::{Error, Result};
use crate::geometry::stolz::{approach_path, StolzRegion};
use crate::measure::{ComplexMeasure, MeasureComponent};
use crate::poly::Poly;
use crate::quad::{integrate_periodic, integrate_real, Tolerance};
use crate::C64;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HardyRecord {
    /// `max |f C(gm) - C(fgm)|` over the disk grid.
    pub multiplication_residual: f64,
    /// `|C(gm)(zeta) - g(zeta) conj(zeta) / 2|`.
    pub boundary_g_residual: f64,
    /// `|C(fgm)(zeta) - f(zeta) g(zeta) conj(zeta) / 2|`.
    pub boundary_fg_residual: f64,
    /// Nontangential limit of `f C(gm)` at `zeta`.
    pub limit_estimate: C64,
    /// `f(zeta) g(zeta) conj(zeta)`: the inner limit `pv + h conj(zeta) / 2`.
    pub predicted_limit: C64,
    pub limit_residual: f64,
    pub grid_points: usize,
}

fn fourier_eval(coeffs: &BTreeMap<i64, C64>, zeta: C64) -> C64 {
    coeffs.iter().map(|(&k, &c)| c * zeta.powi(k as i32)).sum()
}

/// 100 points: 10 radii in `(0, 0.9]` times 10 angles.
pub fn disk_grid() -> Vec<C64> {
    let mut out = Vec::with_capacity(100);
    for i in 1..=10 {
        let r = 0.09 * i as f64;
        for j in 0..10 {
            out.push(C64::from_polar(r, 2.0 * PI * (j as f64 + 0.5 * (i % 2) as f64) / 10.0));
        }
    }
    out
}

/// Check `f C(gm) = C(fgm)` in the disk, the boundary values at `zeta`, and
/// the nontangential limit of `f C(gm)` for a density `g` annihilating the
/// analytic polynomials under the bilinear pairing (`c_k = 0` for `k <= 0`).
pub fn hardy_multiplication_check(f: &Poly, g: &BTreeMap<i64, C64>, zeta: C64, r: f64) -> Result<HardyRecord> {
    if let Some((k, _)) = g.iter().find(|(&k, &c)| k <= 0 && c != C64::new(0.0, 0.0)) {
        return Err(Error::Precondition(format!("g has a nonzero coefficient at index {k} <= 0")));
    }
    let region = StolzRegion::new(zeta, r)?;
    let gm = ComplexMeasure::single(MeasureComponent::CircleFourier { coeffs: g.clone() })?;
    let fgm = gm.multiply_density(&f.to_bipoly())?;
    let grid = disk_grid();
    let mut multiplication_residual = 0.0f64;
    for &lam in &grid {
        let lhs = f.eval(lam) * cauchy_pv(&gm, lam)?.value;
        let rhs = cauchy_pv(&fgm, lam)?.value;
        multiplication_residual = multiplication_residual.max((lhs - rhs).norm());
    }
    let g_zeta = fourier_eval(g, zeta);
    let f_zeta = f.eval(zeta);
    let boundary_g_residual = (cauchy_pv(&gm, zeta)?.value - 0.5 * g_zeta * zeta.conj()).norm();
    let boundary_fg_residual = (cauchy_pv(&fgm, zeta)?.value - 0.5 * f_zeta * g_zeta * zeta.conj()).norm();
    let path = approach_path(&region, 0.5 * r, 60)?;
    let samples: Vec<(C64, C64)> = path
        .iter()
        .map(|&lam| (lam, f.eval(lam) * circle_inner(g, lam)))
        .collect();
    let limit_estimate = nontangential_limit_estimate(&samples, &region, &[])?;
    let predicted_limit = f_zeta * g_zeta * zeta.conj();
    Ok(HardyRecord {
        multiplication_residual,
        boundary_g_residual,
        boundary_fg_residual,
        limit_estimate,
        predicted_limit,
        limit_residual: (limit_estimate - predicted_limit).norm(),
        grid_points: grid.len(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonRow {
    pub r: f64,
    /// `(z sigma)^(r zeta)` from the Fourier closed form.
    pub closed_form: C64,
    /// Poisson integral of `sigma h` at `r zeta`, by quadrature.
    pub poisson_term: C64,
    /// Interior remainder; zero because `m` has no mass in the open disk.
    pub remainder: C64,
    /// `|closed_form - (poisson_term + remainder)|`.
    pub identity_residual: f64,
    /// `|poisson_term - sigma(zeta) h(zeta)|` with `h = 1`.
    pub boundary_gap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PoissonRecord {
    pub zeta: C64,
    pub sigma_at_zeta: C64,
    pub rows: Vec<PoissonRow>,
}

/// For `mu = m` and `sigma = sum c_k zeta^k` with `c_k = 0` for `k <= -1`
/// (so `z sigma` annihilates the analytic polynomials), split
/// `(z sigma)^(r zeta) = int z sigma / (z - r zeta) dm` into the Poisson
/// integral of `sigma` and an interior remainder.
pub fn poisson_decomposition_check(sigma: &BTreeMap<i64, C64>, zeta: C64, r_list: &[f64]) -> Result<PoissonRecord> {
    if let Some((k, _)) = sigma.iter().find(|(&k, &c)| k <= -1 && c != C64::new(0.0, 0.0)) {
        return Err(Error::Precondition(format!(
            "z sigma is not orthogonal to the polynomials: coefficient at index {k}"
        )));
    }
    if (zeta.norm() - 1.0).abs() > crate::geometry::stolz::UNIMODULAR_TOL {
        return Err(Error::Domain(format!("|zeta| = {} is not 1", zeta.norm())));
    }
    // z sigma has coefficients shifted up by one.
    let z_sigma: BTreeMap<i64, C64> = sigma.iter().map(|(&k, &c)| (k + 1, c)).collect();
    let sigma_at_zeta = fourier_eval(sigma, zeta);
    let mut rows = Vec::with_capacity(r_list.len());
    for &r in r_list {
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::Domain(format!("r = {r} must lie in (0, 1)")));
        }
        let lam = r * zeta;
        let closed_form = circle_inner(&z_sigma, lam);
        let kernel = |t: f64| {
            let z = C64::from_polar(1.0, t);
            let p = (1.0 - r * r) / (C64::new(1.0, 0.0) - r * zeta.conj() * z).norm_sqr();
            fourier_eval(sigma, z) * p / (2.0 * PI)
        };
        let poisson_term = integrate_periodic(kernel, 1e-15).value;
        let remainder = C64::new(0.0, 0.0);
        rows.push(PoissonRow {
            r,
            closed_form,
            poisson_term,
            remainder,
            identity_residual: (closed_form - poisson_term - remainder).norm(),
            boundary_gap: (poisson_term - sigma_at_zeta).norm(),
        });
    }
    Ok(PoissonRecord {
        zeta,
        sigma_at_zeta,
        rows,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AreaMean {
    /// `(pi R^2)^{-1} int_{B(0, R)} |p| dm_2`.
    pub mean: f64,
    pub est_error: f64,
}

/// Normalized area mean of `|p|` over `B(0, radius)` by nested adaptive
/// Gauss-Kronrod in polar coordinates.
pub fn area_mean_abs(p: &Poly, radius: f64) -> Result<AreaMean> {
    if !(radius > 0.0) {
        return Err(Error::Domain(format!("radius {radius} must be positive")));
    }
    let inner_tol = Tolerance::new(1e-15, 1e-12);
    let mut inner_err = 0.0f64;
    let radial = |t: f64| -> f64 {
        let dir = C64::from_polar(1.0, t);
        let (v, e) = integrate_real(|rho| p.eval(dir * rho).norm() * rho, 0.0, radius, 4, inner_tol);
        inner_err = inner_err.max(e);
        v
    };
    let (v, e) = integrate_real(radial, 0.0, 2.0 * PI, 16, Tolerance::new(1e-14, 1e-11));
    let area = PI * radius * radius;
    Ok(AreaMean {
        mean: v / area,
        est_error: (e + 2.0 * PI * inner_err) / area,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    fn zeta_density() -> BTreeMap<i64, C64> {
        [(1, c(1.0, 0.0))].into_iter().collect()
    }

    #[test]
    fn z_times_zeta_density() {
        let rec = hardy_multiplication_check(&Poly::monomial(1), &zeta_density(), c(1.0, 0.0), 0.5).unwrap();
        assert!(rec.multiplication_residual < 1e-14);
        assert!(rec.boundary_g_residual < 1e-14);
        assert!(rec.boundary_fg_residual < 1e-14);
        assert!(rec.limit_residual < 1e-8, "{rec:?}");
    }

    #[test]
    fn identity_multiplier() {
        let rec = hardy_multiplication_check(&Poly::constant(c(1.0, 0.0)), &zeta_density(), C64::from_polar(1.0, 1.0), 0.4).unwrap();
        assert_eq!(rec.multiplication_residual, 0.0);
    }

    #[test]
    fn non_annihilator_is_rejected() {
        let g: BTreeMap<i64, C64> = [(0, c(1.0, 0.0))].into_iter().collect();
        assert!(matches!(
            hardy_multiplication_check(&Poly::monomial(1), &g, c(1.0, 0.0), 0.5),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn poisson_split_for_sigma_zeta() {
        let rec = poisson_decomposition_check(&zeta_density(), c(1.0, 0.0), &[0.5, 0.9, 0.99, 0.999]).unwrap();
        for row in &rec.rows {
            assert!(row.identity_residual < 1e-10, "{row:?}");
            assert_eq!(row.remainder, c(0.0, 0.0));
        }
        let gaps: Vec<f64> = rec.rows.iter().map(|r| r.boundary_gap).collect();
        assert!(gaps.windows(2).all(|w| w[1] < w[0]));
        assert!(gaps[3] < 2e-3);
        let bad: BTreeMap<i64, C64> = [(-1, c(1.0, 0.0))].into_iter().collect();
        assert!(poisson_decomposition_check(&bad, c(1.0, 0.0), &[0.5]).is_err());
    }

    #[test]
    fn area_mean_of_monomials() {
        // (1 / pi) int_{|z|<1} |z|^k dA = 2 / (k + 2)
        for k in 0..5 {
            let m = area_mean_abs(&Poly::monomial(k), 1.0).unwrap();
            assert!((m.mean - 2.0 / (k as f64 + 2.0)).abs() < 1e-12);
        }
    }
}
