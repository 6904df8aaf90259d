//! Truncated, principal-value and maximal Cauchy transforms
//! `C(nu)(z) = int dnu(w) / (w - z)`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::lens::{LensRegion, Side};
use crate::measure::{circle_arc_in_ball, lens_param_intervals, ArcCut, ComplexMeasure, LensHarmonic, MeasureComponent};
use crate::poly::BiPoly;
use crate::quad::{gauss_legendre, integrate, integrate_periodic, Integral, Tolerance};
use crate::C64;

/// Error attached to closed-form values.
pub const CLOSED_FORM_ERROR: f64 = 1e-14;

/// Points closer than this to the unit circle are treated as on it.
pub const CIRCLE_TOL: f64 = 1e-14;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    ClosedForm,
    Quadrature,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CauchyValue {
    pub value: C64,
    pub method: Method,
    pub est_error: f64,
}

impl CauchyValue {
    fn zero() -> Self {
        Self {
            value: C64::new(0.0, 0.0),
            method: Method::ClosedForm,
            est_error: 0.0,
        }
    }

    fn closed(value: C64) -> Self {
        Self {
            value,
            method: Method::ClosedForm,
            est_error: CLOSED_FORM_ERROR * value.norm().max(1.0),
        }
    }

    fn quad(i: Integral) -> Self {
        Self {
            value: i.value,
            method: Method::Quadrature,
            est_error: i.error,
        }
    }

    fn plus(self, other: CauchyValue) -> Self {
        let method = if self.method == Method::Quadrature || other.method == Method::Quadrature {
            Method::Quadrature
        } else {
            Method::ClosedForm
        };
        Self {
            value: self.value + other.value,
            method,
            est_error: self.est_error + other.est_error,
        }
    }
}

fn tol() -> Tolerance {
    Tolerance {
        abs: 1e-15,
        rel: 1e-12,
        max_segments: 4000,
    }
}

/// One-sided closed forms for `h dm`, `h = sum c_k zeta^k`.
pub fn circle_inner(coeffs: &BTreeMap<i64, C64>, z: C64) -> C64 {
    coeffs
        .range(1..)
        .map(|(&k, &c)| c * z.powi(k as i32 - 1))
        .sum()
}

pub fn circle_outer(coeffs: &BTreeMap<i64, C64>, z: C64) -> C64 {
    -coeffs
        .range(..=0)
        .map(|(&k, &c)| c * z.powi(k as i32 - 1))
        .sum::<C64>()
}

fn circle_pv(coeffs: &BTreeMap<i64, C64>, z: C64) -> C64 {
    let r = z.norm();
    if (r - 1.0).abs() <= CIRCLE_TOL {
        0.5 * (circle_inner(coeffs, z) + circle_outer(coeffs, z))
    } else if r < 1.0 {
        circle_inner(coeffs, z)
    } else {
        circle_outer(coeffs, z)
    }
}

fn fourier_eval(coeffs: &BTreeMap<i64, C64>, zeta: C64) -> C64 {
    coeffs.iter().map(|(&k, &c)| c * zeta.powi(k as i32)).sum()
}

/// `int_{|w-z| > eps} h(w) / (w - z) dm(w)`.
fn circle_eps(coeffs: &BTreeMap<i64, C64>, z: C64, eps: f64) -> CauchyValue {
    match circle_arc_in_ball(z, eps) {
        ArcCut::Empty => CauchyValue::closed(circle_pv(coeffs, z)),
        ArcCut::Full => CauchyValue::zero(),
        ArcCut::Arc { mid, half } => {
            let f = |t: f64| {
                let w = C64::from_polar(1.0, t);
                fourier_eval(coeffs, w) / (w - z) / (2.0 * PI)
            };
            CauchyValue::quad(integrate(f, mid + half, mid + 2.0 * PI - half, 8, tol()))
        }
    }
}

/// Polar recentring at `z`: `w = z + rho e^{i theta}`, `dA = rho drho dtheta / pi`,
/// so the kernel `1 / (w - z)` cancels the Jacobian and
/// `int F(w) / (w - z) dA = (1/pi) int int F(z + rho e^{i theta}) e^{-i theta} drho dtheta`.
/// The radial integrand is a polynomial in `rho`, so Gauss-Legendre is exact.
fn bergman_eps(alpha: u32, density: &BiPoly, z: C64, eps: f64) -> CauchyValue {
    let deg = density.max_index() * 2 + 2 * alpha as usize;
    let (x, wts) = gauss_legendre(deg / 2 + 2);
    let a1 = 1.0 + alpha as f64;
    let radial = |theta: f64| -> C64 {
        let dir = C64::from_polar(1.0, theta);
        let Some((lo, hi)) = ray_disk(z, dir) else {
            return C64::new(0.0, 0.0);
        };
        let lo = lo.max(eps);
        if hi <= lo {
            return C64::new(0.0, 0.0);
        }
        let half = 0.5 * (hi - lo);
        let mid = 0.5 * (hi + lo);
        let mut acc = C64::new(0.0, 0.0);
        for (xi, wi) in x.iter().zip(&wts) {
            let w = z + dir * (mid + half * xi);
            let weight = a1 * (1.0 - w.norm_sqr()).max(0.0).powi(alpha as i32);
            acc += density.eval(w) * (weight * wi);
        }
        acc * half * dir.conj() / PI
    };
    let r = z.norm();
    if r < 1.0 && eps < 1.0 - r {
        // Every ray leaves through the circle beyond the excluded disk: smooth and periodic.
        let i = integrate_periodic(radial, 1e-14);
        return CauchyValue::quad(i);
    }
    if r < 1.0 {
        let i = integrate(radial, 0.0, 2.0 * PI, 32, tol());
        return CauchyValue::quad(i);
    }
    // Outside the disk the rays that meet it form a cone around -z; the substitution
    // theta = centre + hw sin(t) removes the square-root endpoint behaviour.
    let centre = (-z).arg();
    let hw = if r > 1.0 { (1.0 / r).asin() } else { 0.5 * PI };
    let f = |t: f64| radial(centre + hw * t.sin()) * (hw * t.cos());
    CauchyValue::quad(integrate(f, -0.5 * PI, 0.5 * PI, 16, tol()))
}

fn ray_disk(z: C64, dir: C64) -> Option<(f64, f64)> {
    crate::measure::ray_disk_interval(z, dir)
}

fn lens_integral_on(l: &LensHarmonic, lens: &LensRegion, side: Side, z: C64, a: f64, b: f64) -> Integral {
    let f = |u: f64| {
        let s = lens.boundary(side, u);
        l.density_at(s.z) * s.omega_du / (s.z - z)
    };
    // Seed panels near the nearest boundary point so a close z is resolved.
    integrate(f, a, b, 64, tol())
}

fn lens_eps(l: &LensHarmonic, z: C64, eps: f64) -> CauchyValue {
    let lens = LensRegion::new(l.c).expect("validated lens parameter");
    let mut acc = CauchyValue {
        value: C64::new(0.0, 0.0),
        method: Method::Quadrature,
        est_error: 0.0,
    };
    for side in Side::BOTH {
        for (a, b) in lens_param_intervals(&lens, side, z, eps, false) {
            acc = acc.plus(CauchyValue::quad(lens_integral_on(l, &lens, side, z, a, b)));
        }
    }
    acc
}

fn lens_pv(l: &LensHarmonic, z: C64) -> CauchyValue {
    let lens = LensRegion::new(l.c).expect("validated lens parameter");
    if lens.distance_to_boundary(z) > 1e-13 {
        let mut acc = CauchyValue {
            value: C64::new(0.0, 0.0),
            method: Method::Quadrature,
            est_error: 0.0,
        };
        for side in Side::BOTH {
            let i = lens_integral_on(l, &lens, side, z, -crate::geometry::lens::PARAM_HALF_WIDTH, crate::geometry::lens::PARAM_HALF_WIDTH);
            acc = acc.plus(CauchyValue::quad(i));
        }
        return acc;
    }
    // On the boundary: C_eps = PV + a1 eps + a2 eps^2 + ..., extrapolated to 0.
    let eps: Vec<f64> = (0..6).map(|k| 1e-3 * 0.5f64.powi(k)).collect();
    let vals: Vec<C64> = eps.iter().map(|&e| lens_eps(l, z, e).value).collect();
    let (value, err) = neville_at_zero(&eps, &vals);
    CauchyValue {
        value,
        method: Method::Quadrature,
        est_error: err,
    }
}

/// Polynomial extrapolation of `(x_i, y_i)` to `x = 0`, with the difference
/// between the last two orders as the error estimate.
pub fn neville_at_zero(x: &[f64], y: &[C64]) -> (C64, f64) {
    let n = x.len();
    let mut p = y.to_vec();
    let mut prev = p[n - 1];
    let mut best = p[n - 1];
    for level in 1..n {
        for i in 0..n - level {
            let (xi, xj) = (x[i], x[i + level]);
            p[i] = (p[i] * (-xj) - p[i + 1] * (-xi)) / (xi - xj);
        }
        prev = best;
        best = p[0];
    }
    (best, (best - prev).norm())
}

fn component_eps(c: &MeasureComponent, z: C64, eps: f64) -> CauchyValue {
    match c {
        MeasureComponent::Atom { point, weight } => {
            if (point - z).norm() > eps {
                CauchyValue::closed(weight / (point - z))
            } else {
                CauchyValue::zero()
            }
        }
        MeasureComponent::CircleFourier { coeffs } => circle_eps(coeffs, z, eps),
        MeasureComponent::Bergman { alpha, density } => bergman_eps(*alpha, density, z, eps),
        MeasureComponent::LensHarmonic(l) => lens_eps(l, z, eps),
    }
}

fn component_pv(c: &MeasureComponent, z: C64) -> Result<CauchyValue> {
    Ok(match c {
        MeasureComponent::Atom { point, weight } => {
            if *point == z {
                return Err(Error::PvUndefined(z));
            }
            CauchyValue::closed(weight / (point - z))
        }
        MeasureComponent::CircleFourier { coeffs } => CauchyValue::closed(circle_pv(coeffs, z)),
        MeasureComponent::Bergman { alpha, density } => bergman_eps(*alpha, density, z, 0.0),
        MeasureComponent::LensHarmonic(l) => lens_pv(l, z),
    })
}

/// `C_eps(nu)(z) = int_{|w - z| > eps} dnu(w) / (w - z)`.
pub fn cauchy_eps(nu: &ComplexMeasure, z: C64, eps: f64) -> Result<CauchyValue> {
    if !(eps > 0.0) {
        return Err(Error::Domain(format!("eps = {eps} must be positive")));
    }
    Ok(nu
        .components
        .iter()
        .map(|c| component_eps(c, z, eps))
        .fold(CauchyValue::zero(), CauchyValue::plus))
}

/// `C(nu)(z) = lim_{eps -> 0} C_eps(nu)(z)`.
pub fn cauchy_pv(nu: &ComplexMeasure, z: C64) -> Result<CauchyValue> {
    nu.components
        .iter()
        .map(|c| component_pv(c, z))
        .try_fold(CauchyValue::zero(), |acc, v| Ok(acc.plus(v?)))
}

/// Independent all-quadrature path: Fourier components by the periodic
/// trapezoid rule (with the density value subtracted on the circle, where
/// `PV int dm(w) / (w - z) = -conj(z) / 2`), other components as in
/// [`cauchy_pv`].
pub fn cauchy_pv_quadrature(nu: &ComplexMeasure, z: C64) -> Result<CauchyValue> {
    let mut acc = CauchyValue::zero();
    for c in &nu.components {
        let v = match c {
            MeasureComponent::CircleFourier { coeffs } => {
                let on_circle = (z.norm() - 1.0).abs() <= CIRCLE_TOL;
                let hz = fourier_eval(coeffs, z);
                let f = |t: f64| {
                    let w = C64::from_polar(1.0, t);
                    if on_circle {
                        let d = w - z;
                        if d.norm() < 1e-300 {
                            // Removable: limit is h'(z).
                            return coeffs
                                .iter()
                                .map(|(&k, &c)| c * k as f64 * z.powi(k as i32 - 1))
                                .sum::<C64>()
                                / (2.0 * PI);
                        }
                        (fourier_eval(coeffs, w) - hz) / d / (2.0 * PI)
                    } else {
                        fourier_eval(coeffs, w) / (w - z) / (2.0 * PI)
                    }
                };
                let mut i = integrate_periodic(f, 1e-15);
                if on_circle {
                    i.value += hz * (-0.5 * z.conj());
                }
                CauchyValue::quad(i)
            }
            other => component_pv(other, z)?,
        };
        acc = acc.plus(v);
    }
    Ok(acc)
}

/// `max_eps |C_eps(nu)(z)|` over a positive, strictly decreasing grid; a
/// lower bound for the maximal transform.
pub fn cauchy_max(nu: &ComplexMeasure, z: C64, eps_grid: &[f64]) -> Result<f64> {
    if eps_grid.is_empty() {
        return Err(Error::Precondition("eps grid is empty".into()));
    }
    if eps_grid.iter().any(|&e| !(e > 0.0)) || eps_grid.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Precondition("eps grid must be positive and strictly decreasing".into()));
    }
    let mut best = 0.0f64;
    for &e in eps_grid {
        best = best.max(cauchy_eps(nu, z, e)?.value.norm());
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::bergman_moment;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn atom_examples() {
        let d2 = ComplexMeasure::single(MeasureComponent::Atom { point: c(2.0, 0.0), weight: c(1.0, 0.0) }).unwrap();
        assert_eq!(cauchy_eps(&d2, c(0.0, 0.0), 1.0).unwrap().value, c(0.5, 0.0));
        assert_eq!(cauchy_eps(&d2, c(0.0, 0.0), 3.0).unwrap().value, c(0.0, 0.0));
        assert!(matches!(cauchy_pv(&d2, c(2.0, 0.0)), Err(Error::PvUndefined(_))));
    }

    #[test]
    fn arclength_closed_forms() {
        let m = ComplexMeasure::arclength();
        assert!(cauchy_eps(&m, c(0.0, 0.0), 0.5).unwrap().value.norm() < 1e-15);
        assert_eq!(cauchy_pv(&m, c(0.3, 0.1)).unwrap().value, c(0.0, 0.0));
        let z = c(1.2, -0.5);
        assert!((cauchy_pv(&m, z).unwrap().value + 1.0 / z).norm() < 1e-15);
        let zeta = C64::from_polar(1.0, 0.4);
        assert!((cauchy_pv(&m, zeta).unwrap().value + 0.5 * zeta.conj()).norm() < 1e-15);
        let zm = ComplexMeasure::single(MeasureComponent::circle([(1, c(1.0, 0.0))])).unwrap();
        assert_eq!(cauchy_pv(&zm, c(0.2, 0.2)).unwrap().value, c(1.0, 0.0));
    }

    #[test]
    fn truncated_converges_to_pv_on_the_circle() {
        let nu = ComplexMeasure::single(MeasureComponent::circle([
            (-1, c(0.5, 0.0)),
            (0, c(1.0, 0.0)),
            (1, c(0.5, 0.0)),
        ]))
        .unwrap();
        let zeta = C64::from_polar(1.0, 0.3);
        let pv = cauchy_pv(&nu, zeta).unwrap().value;
        let e1 = (cauchy_eps(&nu, zeta, 1e-3).unwrap().value - pv).norm();
        let e2 = (cauchy_eps(&nu, zeta, 1e-5).unwrap().value - pv).norm();
        assert!(e2 < 1e-4 && e2 < e1, "{e1} {e2}");
        let q = cauchy_pv_quadrature(&nu, zeta).unwrap().value;
        assert!((q - pv).norm() < 1e-12);
    }

    /// Closed form for `z^p conj(z)^q dA_alpha`, from the radial split of
    /// `1 / (w - z)` into the regions `|w| < |z|` and `|w| > |z|`.
    fn bergman_monomial_oracle(alpha: u32, p: u32, q: u32, z: C64) -> C64 {
        // For |w| > |z|: 1/(w - z) = sum_n z^n / w^{n+1}; for |w| < |z|: -sum_n w^n / z^{n+1}.
        // Angular integration keeps one term of each; the radial part is a
        // Beta-type integral in t = |w|^2 on [|z|^2, 1] or [0, |z|^2].
        let r2 = z.norm_sqr().min(1.0);
        let weight = |t: f64| (1.0 + alpha as f64) * (1.0 - t).powi(alpha as i32);
        let rad = |a: f64, b: f64, pow: i32| -> f64 {
            let (x, w) = gauss_legendre(40);
            let h = 0.5 * (b - a);
            x.iter().zip(&w).map(|(xi, wi)| {
                let t = 0.5 * (a + b) + h * xi;
                wi * h * t.powi(pow) * weight(t)
            }).sum()
        };
        if p > q {
            // term n = p - q - 1 from the outer expansion: w^p conj(w)^q / w^{n+1} -> |w|^{2q}
            let n = (p - q - 1) as i32;
            z.powi(n) * rad(r2, 1.0, q as i32)
        } else {
            // term n = q - p from the inner expansion: -w^{p+n} conj(w)^q / z^{n+1} -> |w|^{2q}
            let n = (q - p) as i32;
            -z.powi(-(n + 1)) * rad(0.0, r2, q as i32)
        }
    }

    #[test]
    fn bergman_matches_radial_oracle() {
        for &(p, q) in &[(0u32, 0u32), (1, 0), (2, 1), (0, 1), (3, 0)] {
            let nu = ComplexMeasure::single(MeasureComponent::Bergman {
                alpha: 5,
                density: BiPoly::term(p, q, c(1.0, 0.0)),
            })
            .unwrap();
            for z in [c(0.3, 0.2), c(-0.7, 0.5), c(0.0, 0.95)] {
                let got = cauchy_pv(&nu, z).unwrap();
                let want = bergman_monomial_oracle(5, p, q, z);
                assert!((got.value - want).norm() < 1e-12, "p={p} q={q} z={z}: {} vs {want}", got.value);
            }
        }
        // Outside the closed disk the transform is -sum M_n-type terms: check 1 dA_5.
        let a5 = ComplexMeasure::bergman(5);
        let z = c(1.5, 0.5);
        assert!((cauchy_pv(&a5, z).unwrap().value + 1.0 / z).norm() < 1e-12);
        let z = C64::from_polar(1.0, 2.0);
        assert!((cauchy_pv(&a5, z).unwrap().value + 1.0 / z).norm() < 1e-12);
        // On the circle everything is already outer: the identity above needs n = 0 only.
        assert!(bergman_moment(5, 0) == 1.0);
    }

    #[test]
    fn bergman_eps_removes_a_symmetric_disk() {
        // For density 1 at z = 0 the removed disk contributes nothing by symmetry.
        let a5 = ComplexMeasure::bergman(5);
        let v = cauchy_eps(&a5, c(0.0, 0.0), 0.3).unwrap().value;
        assert!(v.norm() < 1e-14);
        let z = c(0.4, 0.1);
        let pv = cauchy_pv(&a5, z).unwrap().value;
        let e = cauchy_eps(&a5, z, 1e-4).unwrap().value;
        assert!((pv - e).norm() < 1e-6);
    }

    #[test]
    fn lens_measure_reproduces_analytic_evaluation() {
        // For f analytic near the closed lens, int f d omega = f(0).
        let nu = crate::geometry::lens_harmonic_measure(0.3).unwrap();
        let v = cauchy_pv(&nu, c(2.0, 0.0)).unwrap().value;
        assert!((v - 1.0 / (0.0 - 2.0)).norm() < 1e-10, "{v}");
        // Inside the lens the transform is not analytic data; outside the closure it is:
        let z = c(0.6, 0.1);
        let v = cauchy_pv(&nu, z).unwrap().value;
        assert!((v + 1.0 / z).norm() < 1e-10);
    }

    #[test]
    fn cauchy_max_examples() {
        let m = ComplexMeasure::arclength();
        let grid: Vec<f64> = (0..8).map(|k| 0.9f64.powi(k) * 0.5).collect();
        assert!(cauchy_max(&m, c(0.0, 0.0), &grid).unwrap() < 1e-14);
        let d = ComplexMeasure::dirac(c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        assert!((cauchy_max(&d, c(0.0, 0.0), &[0.4, 0.1]).unwrap() - 2.0).abs() < 1e-15);
        assert!(cauchy_max(&m, c(0.0, 0.0), &[0.1, 0.2]).is_err());
    }
}
