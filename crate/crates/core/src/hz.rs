//! A measure `mu = sigma + A_alpha` on the closed disk for which the
//! invariant subspace `M = {f : f(a) = 0}` of `P^2(mu)` is not generated by
//! its wandering subspace.
//!
//! Here `g(z) = 1 - (s / (1 - conj(a) z))^(alpha + 2)` with `s = 1 - |a|^2` is
//! the extremal function of `M` in the weighted Bergman space, `sigma` is
//! `|g|^{-2}` times harmonic measure of the lens `D ∩ {Re z < c}` at the
//! origin, and `A_alpha = (1 + alpha)(1 - |z|^2)^alpha dA`.
//!
//! Two facts drive everything below:
//!
//! * `<z^k, g>_{A_alpha} = δ_{k0} - s^(alpha+2) a^k`, because the Taylor
//!   coefficients of `(1 - conj(a) z)^{-(alpha+2)}` are the reciprocals of the
//!   Bergman moments times `conj(a)^k`.
//! * `int p conj(g) dsigma = int p / g d omega = (p / g)(0)` for polynomials
//!   `p`, because `1 / g` is analytic on the closed lens.
//!
//! Together they give `g ⊥ zM`, while `g` has a second zero `z1` in the disk
//! whenever `s < 2 cos(2 pi / (alpha + 2)) - 1`, so `[g] != M = [z - a]`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::lens::LensRegion;
use crate::measure::{bergman_moment, lens_rule, ComplexMeasure, GWeight, LensHarmonic, MeasureComponent};
use crate::p2space::{distance_to_cyclic, gram, point_eval_norm, subspace_basis, wandering_dim, GramBasis};
use crate::poly::Poly;
use crate::C64;

/// Minimum distance from every zero of `g` to the closed lens.
pub const ZERO_CLEARANCE: f64 = 1e-6;
/// Boundary samples per lens side attached to `sigma` for export.
pub const SIGMA_SAMPLES_PER_SIDE: usize = 33;

/// `g(z) = 1 - ((1 - |a|^2) / (1 - conj(a) z))^(alpha + 2)`.
pub fn g_alpha(a: C64, alpha: u32, z: C64) -> C64 {
    let s = 1.0 - a.norm_sqr();
    C64::new(1.0, 0.0) - (s / (C64::new(1.0, 0.0) - a.conj() * z)).powu(alpha + 2)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HZParams {
    pub a: C64,
    pub alpha: u32,
    pub c: f64,
}

impl Default for HZParams {
    fn default() -> Self {
        Self {
            a: C64::new(0.9, 0.0),
            alpha: 5,
            c: 0.3,
        }
    }
}

impl HZParams {
    pub fn new(a: C64, alpha: u32, c: f64) -> Result<Self> {
        let p = Self { a, alpha, c };
        p.validate()?;
        Ok(p)
    }

    /// `0 < |a| < 1`, `0 < c < 1`, and every zero of `g` at distance more
    /// than [`ZERO_CLEARANCE`] from the closed lens.
    pub fn validate(&self) -> Result<()> {
        if !(self.a.norm() < 1.0) {
            return Err(Error::Domain(format!("|a| = {} must be < 1", self.a.norm())));
        }
        if self.a == C64::new(0.0, 0.0) {
            return Err(Error::Domain("a = 0 makes g identically zero".into()));
        }
        let lens = LensRegion::new(self.c)?;
        for z in g_alpha_roots(self)? {
            let d = lens.distance_to_closure(z);
            if d <= ZERO_CLEARANCE {
                return Err(Error::Domain(format!(
                    "zero {z} of g lies within {d:e} of the closed lens"
                )));
            }
        }
        Ok(())
    }

    /// `1 - |a|^2`.
    pub fn s(&self) -> f64 {
        1.0 - self.a.norm_sqr()
    }

    pub fn exponent(&self) -> u32 {
        self.alpha + 2
    }

    /// The polynomial `(1 - conj(a) z)^(alpha + 2) - s^(alpha + 2)`, which is
    /// `g` times the invertible multiplier `(1 - conj(a) z)^(alpha + 2)`.
    pub fn numerator(&self) -> Poly {
        let lin = Poly::new(vec![C64::new(1.0, 0.0), -self.a.conj()]);
        let mut p = Poly::constant(C64::new(1.0, 0.0));
        for _ in 0..self.exponent() {
            p = &p * &lin;
        }
        &p + &Poly::constant(C64::new(-self.s().powi(self.exponent() as i32), 0.0))
    }

    /// Taylor polynomial of `g` at the origin of degree `degree`.
    pub fn taylor(&self, degree: usize) -> Poly {
        let e = self.exponent() as i32;
        let sp = self.s().powi(e);
        let ab = self.a.conj();
        let mut coeffs = Vec::with_capacity(degree + 1);
        // binom(m + e - 1, e - 1) conj(a)^m, built by the ratio (m + e - 1) / m.
        let mut t = C64::new(1.0, 0.0);
        for m in 0..=degree {
            if m > 0 {
                t *= ab * ((m as i32 + e - 1) as f64 / m as f64);
            }
            coeffs.push(-sp * t);
        }
        coeffs[0] += 1.0;
        Poly::new(coeffs)
    }
}

/// `g(z)`, rejecting the pole `z = 1 / conj(a)`.
pub fn g_alpha_eval(p: &HZParams, z: C64) -> Result<C64> {
    let den = C64::new(1.0, 0.0) - p.a.conj() * z;
    if den.norm() <= f64::EPSILON {
        return Err(Error::Domain(format!("{z} is the pole of g")));
    }
    Ok(g_alpha(p.a, p.alpha, z))
}

/// All `alpha + 2` zeros `(1 - s e^{2 pi i k / (alpha + 2)}) / conj(a)`, `k = 0` first.
pub fn g_alpha_roots(p: &HZParams) -> Result<Vec<C64>> {
    if p.a == C64::new(0.0, 0.0) {
        return Err(Error::Domain("g has no zeros for a = 0".into()));
    }
    let e = p.exponent() as f64;
    let s = p.s();
    Ok((0..p.exponent())
        .map(|k| {
            if k == 0 {
                p.a
            } else {
                (C64::new(1.0, 0.0) - s * C64::from_polar(1.0, 2.0 * PI * k as f64 / e)) / p.a.conj()
            }
        })
        .collect())
}

/// Zeros of `g` in the open disk; `a` is always first.
pub fn g_alpha_zeros(p: &HZParams) -> Result<Vec<C64>> {
    Ok(g_alpha_roots(p)?
        .into_iter()
        .enumerate()
        .filter(|(k, z)| *k == 0 || z.norm() < 1.0)
        .map(|(_, z)| z)
        .collect())
}

/// `|z_k| < 1` for some `k != 0` iff `s < 2 cos(2 pi / (alpha + 2)) - 1`.
pub fn interior_zero_exists(p: &HZParams) -> bool {
    p.s() < 2.0 * (2.0 * PI / p.exponent() as f64).cos() - 1.0
}

/// The interior zero other than `a` closest to `a`.
pub fn second_zero(p: &HZParams) -> Result<C64> {
    g_alpha_zeros(p)?
        .into_iter()
        .skip(1)
        .min_by(|x, y| (x - p.a).norm().total_cmp(&(y - p.a).norm()))
        .ok_or_else(|| Error::Precondition("g has no interior zero besides a".into()))
}

pub fn sigma_component(p: &HZParams) -> Result<LensHarmonic> {
    p.validate()?;
    LensHarmonic::harmonic(p.c)?
        .with_weight(GWeight { a: p.a, alpha: p.alpha })
        .with_samples(SIGMA_SAMPLES_PER_SIDE, 20.0)
}

/// `sigma = |g|^{-2} omega`.
pub fn build_sigma(p: &HZParams) -> Result<ComplexMeasure> {
    ComplexMeasure::single(MeasureComponent::LensHarmonic(sigma_component(p)?))
}

/// `mu = sigma + A_alpha`.
pub fn build_mu(p: &HZParams) -> Result<ComplexMeasure> {
    ComplexMeasure::new(vec![
        MeasureComponent::LensHarmonic(sigma_component(p)?),
        MeasureComponent::bergman(p.alpha),
    ])
}

/// `<q, g>_{A_alpha}` from the Taylor series of `conj(g)` against the
/// diagonal moments. Terms of degree above `deg q` pair to zero, so the
/// expansion truncated at `deg q` is exact.
pub fn bergman_inner_with_g(p: &HZParams, q: &Poly) -> C64 {
    let t = p.taylor(q.degree());
    q.coeffs()
        .iter()
        .zip(t.coeffs())
        .enumerate()
        .map(|(k, (&qk, &tk))| qk * tk.conj() * bergman_moment(p.alpha, k))
        .sum()
}

/// `int q conj(g) d sigma` by the shared lens rule.
pub fn sigma_inner_with_g(p: &HZParams, q: &Poly) -> C64 {
    let w = GWeight { a: p.a, alpha: p.alpha };
    lens_rule(p.c, q.degree() + p.exponent() as usize).integrate(|z| {
        q.eval(z) * g_alpha(p.a, p.alpha, z).conj() * w.eval(z)
    })
}

/// `<q, g>_{L^2(mu)}`.
pub fn mu_inner_with_g(p: &HZParams, q: &Poly) -> C64 {
    bergman_inner_with_g(p, q) + sigma_inner_with_g(p, q)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResidualFamily {
    pub name: String,
    pub description: String,
    pub tolerance: f64,
    /// `(j, residual)`.
    pub residuals: Vec<(usize, f64)>,
    pub max_residual: f64,
    pub pass: bool,
}

impl ResidualFamily {
    fn new(name: &str, description: &str, tolerance: f64, residuals: Vec<(usize, f64)>) -> Self {
        let max_residual = residuals.iter().map(|r| r.1).fold(0.0, f64::max);
        Self {
            name: name.into(),
            description: description.into(),
            tolerance,
            pass: max_residual < tolerance,
            residuals,
            max_residual,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrthogonalityReport {
    pub params: HZParams,
    pub n: usize,
    pub families: Vec<ResidualFamily>,
    /// Error estimate of the lens rule on its polynomial test set.
    pub quadrature_error: f64,
    pub pass: bool,
}

/// Tolerance multiplier for the `g ⊥ zM` family, whose residual is the sum
/// of a closed-form Bergman part and a quadrature part.
pub const ZM_TOL_FACTOR: f64 = 10.0;

/// Residual families:
/// (i) `|int z^j g conj(g) dsigma|`, `j = 1..n`;
/// (ii) `|int z^j conj(g) dsigma|`, `j = 1..n`;
/// (iii) `|<z (z - a) z^j, g>_{L^2(mu)}|`, `j = 0..n`, with tolerance
/// `ZM_TOL_FACTOR * tol`.
pub fn verify_orthogonality(p: &HZParams, n: usize, tol: f64) -> Result<OrthogonalityReport> {
    p.validate()?;
    let w = GWeight { a: p.a, alpha: p.alpha };
    let rule = lens_rule(p.c, n + 2 + p.exponent() as usize);
    let g = |z: C64| g_alpha(p.a, p.alpha, z);
    let fam1: Vec<(usize, f64)> = (1..=n)
        .map(|j| {
            let v = rule.integrate(|z| z.powu(j as u32) * g(z) * g(z).conj() * w.eval(z));
            (j, v.norm())
        })
        .collect();
    let fam2: Vec<(usize, f64)> = (1..=n)
        .map(|j| {
            let v = rule.integrate(|z| z.powu(j as u32) * g(z).conj() * w.eval(z));
            (j, v.norm())
        })
        .collect();
    let h = Poly::linear_root(p.a);
    let fam3: Vec<(usize, f64)> = (0..=n)
        .map(|j| (j, mu_inner_with_g(p, &h.shift(j + 1)).norm()))
        .collect();
    let families = vec![
        ResidualFamily::new(
            "i",
            "|int z^j g conj(g) dsigma| = |int z^j d omega|, oracle 0 (mean value at the origin)",
            tol,
            fam1,
        ),
        ResidualFamily::new(
            "ii",
            "|int z^j conj(g) dsigma| = |int z^j / g d omega|, oracle 0 (1/g analytic on the lens)",
            tol,
            fam2,
        ),
        ResidualFamily::new(
            "iii",
            "|<z (z - a) z^j, g>_mu|, oracle 0 (g orthogonal to zM)",
            ZM_TOL_FACTOR * tol,
            fam3,
        ),
    ];
    Ok(OrthogonalityReport {
        params: *p,
        n,
        pass: families.iter().all(|f| f.pass),
        families,
        quadrature_error: rule.estimated_error,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationRow {
    pub n: usize,
    /// Distance from the Taylor truncation of `g` to `span{(z - a) z^j}`.
    pub d1: f64,
    /// Distance from `z - a` to `span{P z^j : deg <= n + 1}` with `P` the
    /// numerator of `g`.
    pub d2: f64,
    /// `|z1 - a| / k_{n+1}(z1)`.
    pub d2_lower_bound: f64,
    pub d2_certified: bool,
    pub warnings: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WanderingRow {
    pub n: usize,
    pub dim: usize,
    pub singular_values: Vec<f64>,
    /// `|<w, P_M g>| / (||w|| ||P_M g||)`.
    pub cosine_to_projection: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NotGeneratedReport {
    pub params: HZParams,
    pub z1: C64,
    pub taylor_degree: usize,
    pub gram_degree: usize,
    pub gram_rank: usize,
    pub svtol: f64,
    pub distances: Vec<GenerationRow>,
    pub d1_monotone: bool,
    pub d1_ratio: f64,
    pub wandering: Vec<WanderingRow>,
    pub pass: bool,
}

/// Singular-value threshold for the wandering dimension.
pub const WANDERING_SVTOL: f64 = 1e-8;
/// Required cosine similarity between the wandering vector and `P_M g`.
pub const COSINE_MIN: f64 = 0.999;
/// Required ratio `d1(last) / d1(first)` strictly below this.
pub const D1_DECAY: f64 = 0.9;

fn projection_cosine(gb: &GramBasis, p: &HZParams, w: &[C64]) -> Result<f64> {
    let sub = subspace_basis(gb, p.a)?;
    let mut proj = vec![C64::new(0.0, 0.0); gb.n + 1];
    for b in &sub.orthonormal {
        let coef = mu_inner_with_g(p, &Poly::new(b.clone())).conj();
        for (x, y) in proj.iter_mut().zip(b) {
            *x += coef * y;
        }
    }
    let num = gb.inner(w, &proj)?.norm();
    Ok(num / (gb.norm_sq(w)?.sqrt() * gb.norm_sq(&proj)?.sqrt()))
}

/// Evidence that `M = [z - a]` but `M` is not generated by its wandering
/// subspace: `d1` shrinks, `d2` stays above its evaluation bound at the
/// second zero, and `M_n ⊖ z M_{n-1}` is one-dimensional and aligned with
/// the projection of `g`.
pub fn verify_not_generated(p: &HZParams, distance_ns: &[usize], wandering_ns: &[usize]) -> Result<NotGeneratedReport> {
    p.validate()?;
    if !interior_zero_exists(p) {
        return Err(Error::Precondition("g has no interior zero besides a".into()));
    }
    if distance_ns.is_empty() || distance_ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::Precondition("distance degrees must be nonempty and increasing".into()));
    }
    let taylor_degree = *distance_ns.last().expect("nonempty");
    let gram_degree = (taylor_degree + 1).max(wandering_ns.iter().copied().max().unwrap_or(0));
    let mu = build_mu(p)?;
    let top = gram(&mu, gram_degree)?;
    let z1 = second_zero(p)?;
    let h = Poly::linear_root(p.a);
    let f = p.taylor(taylor_degree).padded(gram_degree + 1);
    let num = p.numerator();
    let mut distances = Vec::with_capacity(distance_ns.len());
    for &n in distance_ns {
        let r1 = distance_to_cyclic(&top, &f, &h, n)?;
        let r2 = distance_to_cyclic(&top, h.coeffs(), &num, n + 1)?;
        let k = point_eval_norm(&top.truncate(n + 1)?, z1);
        let bound = h.eval(z1).norm() / k;
        distances.push(GenerationRow {
            n,
            d1: r1.distance,
            d2: r2.distance,
            d2_lower_bound: bound,
            d2_certified: r2.distance >= bound,
            warnings: r1.warning.into_iter().chain(r2.warning).collect(),
        });
    }
    let d1_monotone = distances.windows(2).all(|w| w[1].d1 <= w[0].d1 * (1.0 + 1e-10));
    let d1_ratio = distances.last().expect("nonempty").d1 / distances[0].d1;
    let mut wandering = Vec::with_capacity(wandering_ns.len());
    for &n in wandering_ns {
        let gb = top.truncate(n)?;
        let rec = wandering_dim(&gb, p.a, WANDERING_SVTOL)?;
        let cosine_to_projection = match &rec.wandering_vector {
            Some(w) => Some(projection_cosine(&gb, p, w)?),
            None => None,
        };
        wandering.push(WanderingRow {
            n,
            dim: rec.dim,
            singular_values: rec.singular_values,
            cosine_to_projection,
        });
    }
    let pass = d1_monotone
        && d1_ratio < D1_DECAY
        && distances.iter().all(|r| r.d2_certified)
        && wandering
            .iter()
            .all(|w| w.dim == 1 && w.cosine_to_projection.is_some_and(|c| c > COSINE_MIN));
    Ok(NotGeneratedReport {
        params: *p,
        z1,
        taylor_degree,
        gram_degree,
        gram_rank: top.rank,
        svtol: WANDERING_SVTOL,
        distances,
        d1_monotone,
        d1_ratio,
        wandering,
        pass,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn evaluation_examples() {
        let p = HZParams::default();
        assert_eq!(g_alpha_eval(&p, p.a).unwrap().norm(), 0.0);
        let g0 = g_alpha_eval(&p, c(0.0, 0.0)).unwrap();
        assert!((g0 - c(1.0 - 0.19f64.powi(7), 0.0)).norm() < 1e-15);
        assert!(g_alpha_eval(&p, c(1.0 / 0.9, 0.0)).is_err());
    }

    #[test]
    fn zeros_and_threshold() {
        let p = HZParams::default();
        let zs = g_alpha_zeros(&p).unwrap();
        assert_eq!(zs.len(), 3);
        let z1 = second_zero(&p).unwrap();
        assert!((z1.re - 0.97949).abs() < 1e-5 && (z1.im.abs() - 0.16505).abs() < 1e-5);
        assert!((z1.norm() - 0.99330).abs() < 1e-5);
        for z in &zs {
            assert!(g_alpha(p.a, p.alpha, *z).norm() < 1e-12);
        }
        assert!(interior_zero_exists(&p));
        let q = HZParams::new(c(0.5, 0.0), 5, 0.3).unwrap();
        assert_eq!(g_alpha_zeros(&q).unwrap(), vec![c(0.5, 0.0)]);
        assert!(!interior_zero_exists(&q));
        assert!(HZParams::new(c(0.0, 0.0), 5, 0.3).is_err());
    }

    #[test]
    fn root_set_reconstructs_numerator() {
        let p = HZParams::new(c(0.6, 0.7), 3, 0.2).unwrap();
        let roots = g_alpha_roots(&p).unwrap();
        let lead = (-p.a.conj()).powu(p.exponent());
        let num = p.numerator();
        for i in 0..20 {
            let z = C64::from_polar(0.3 + 0.05 * i as f64, 0.7 * i as f64);
            let prod: C64 = roots.iter().map(|r| z - r).product::<C64>() * lead;
            assert!((prod - num.eval(z)).norm() < 1e-10);
        }
    }

    #[test]
    fn taylor_matches_g() {
        let p = HZParams::default();
        let t = p.taylor(400);
        let z = c(0.2, -0.3);
        assert!((t.eval(z) - g_alpha(p.a, p.alpha, z)).norm() < 1e-13);
    }

    #[test]
    fn bergman_inner_products() {
        let p = HZParams::new(c(0.5, 0.4), 5, 0.3).unwrap();
        let s7 = p.s().powi(7);
        for k in 0..8 {
            let v = bergman_inner_with_g(&p, &Poly::monomial(k));
            let want = if k == 0 { c(1.0, 0.0) } else { c(0.0, 0.0) } - s7 * p.a.powu(k as u32);
            assert!((v - want).norm() < 1e-14);
        }
    }

    #[test]
    fn sigma_mass_and_mu_additivity() {
        let p = HZParams::default();
        let sigma = build_sigma(&p).unwrap();
        let mass = sigma.total_mass().re;
        assert!(mass > 1.0 && mass < 1.0 / (1.0 - (0.19f64 / 0.73).powi(7)).powi(2));
        let mu = build_mu(&p).unwrap();
        assert!((mu.moment(0, 0).unwrap().re - 1.0 - mass).abs() < 1e-12);
    }

    #[test]
    fn orthogonality_families() {
        let rep = verify_orthogonality(&HZParams::default(), 10, 1e-8).unwrap();
        assert!(rep.pass, "{rep:?}");
    }
}
