//! Finite complex measures on the closed unit disk, stored as sums of
//! components whose moments are either closed-form or one quadrature away.

mod lens_weight;
pub mod file;

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::lens::{LensRegion, Side};
use crate::poly::BiPoly;
use crate::quad::{integrate_real, Tolerance};
use crate::C64;

pub use lens_weight::{lens_rule, GWeight, LensHarmonic, LensSample};

/// Atoms within this distance of the unit circle count as on it.
pub const UNIT_TOL: f64 = 1e-12;

/// Default cap on moment indices and density degrees.
pub const DEFAULT_MAX_DEGREE: usize = 64;

/// One analytically tractable piece of a measure.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum MeasureComponent {
    /// `weight * delta_point`.
    Atom { point: C64, weight: C64 },
    /// `h dm` on the unit circle with `h(zeta) = sum_k c_k zeta^k` and `m`
    /// normalized arclength.
    CircleFourier {
        #[serde(with = "fourier_keys")]
        coeffs: BTreeMap<i64, C64>,
    },
    /// `p(z, conj z) (1 + alpha)(1 - |z|^2)^alpha dA` on the disk, `A`
    /// normalized area.
    #[serde(rename = "bergman")]
    Bergman {
        alpha: u32,
        #[serde(default = "BiPoly::one", skip_serializing_if = "BiPoly::is_one")]
        density: BiPoly,
    },
    /// A density against harmonic measure of the lens at the origin.
    LensHarmonic(LensHarmonic),
}

// Integer keys travel as JSON strings.
mod fourier_keys {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    use crate::C64;

    pub fn serialize<S: Serializer>(map: &BTreeMap<i64, C64>, s: S) -> Result<S::Ok, S::Error> {
        // Numeric key order, not lexicographic.
        s.collect_map(map.iter().map(|(k, v)| (k.to_string(), *v)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BTreeMap<i64, C64>, D::Error> {
        let raw: BTreeMap<String, C64> = BTreeMap::deserialize(d)?;
        raw.into_iter()
            .map(|(k, v)| {
                k.trim()
                    .parse::<i64>()
                    .map(|k| (k, v))
                    .map_err(|_| D::Error::custom(format!("Fourier index {k:?} is not an integer")))
            })
            .collect()
    }
}

/// Support classes used by [`ComplexMeasure::restrict`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Region {
    Circle,
    OpenDisk,
    LensBoundary,
}

/// Bergman-weight moment `int |z|^{2n} dA_alpha = (alpha+1)! n! / (n+alpha+1)!`.
pub fn bergman_moment(alpha: u32, n: usize) -> f64 {
    (1..=alpha as usize + 1).fold(1.0, |acc, i| acc * i as f64 / (n + i) as f64)
}

impl MeasureComponent {
    /// Atoms may sit anywhere in the finite plane; those off the closed disk
    /// belong to no [`Region`].
    pub fn atom(point: C64, weight: C64) -> Result<Self> {
        if !(point.re.is_finite() && point.im.is_finite()) {
            return Err(Error::Domain(format!("atom location {point} is not finite")));
        }
        Ok(Self::Atom { point, weight })
    }

    /// Normalized arclength `m` times `h = sum c_k zeta^k`.
    pub fn circle(coeffs: impl IntoIterator<Item = (i64, C64)>) -> Self {
        let mut map = BTreeMap::new();
        for (k, c) in coeffs {
            if c != C64::new(0.0, 0.0) {
                *map.entry(k).or_insert(C64::new(0.0, 0.0)) += c;
            }
        }
        Self::CircleFourier { coeffs: map }
    }

    pub fn bergman(alpha: u32) -> Self {
        Self::Bergman {
            alpha,
            density: BiPoly::one(),
        }
    }

    fn check(&self) -> Result<()> {
        match self {
            Self::Atom { point, .. } if !(point.re.is_finite() && point.im.is_finite()) => {
                Err(Error::Domain(format!("atom location {point} is not finite")))
            }
            Self::LensHarmonic(l) => LensRegion::new(l.c).map(|_| ()),
            _ => Ok(()),
        }
    }

    fn density_index(&self) -> usize {
        match self {
            Self::Bergman { density, .. } => density.max_index(),
            Self::LensHarmonic(l) => l.density.max_index(),
            _ => 0,
        }
    }

    pub fn moment(&self, j: usize, k: usize) -> C64 {
        match self {
            Self::Atom { point, weight } => {
                weight * point.powu(j as u32) * point.conj().powu(k as u32)
            }
            Self::CircleFourier { coeffs } => coeffs
                .get(&(k as i64 - j as i64))
                .copied()
                .unwrap_or_default(),
            Self::Bergman { alpha, density } => density
                .terms()
                .filter(|&(p, q, _)| j + p as usize == k + q as usize)
                .map(|(p, _, c)| c * bergman_moment(*alpha, j + p as usize))
                .sum(),
            Self::LensHarmonic(l) => {
                let rule = lens_rule(l.c, 2 * (j.max(k) + l.density.max_index()));
                rule.integrate(|z| {
                    z.powu(j as u32) * z.conj().powu(k as u32) * l.density_at(z)
                })
            }
        }
    }

    fn multiply(&self, g: &BiPoly) -> Self {
        match self {
            Self::Atom { point, weight } => Self::Atom {
                point: *point,
                weight: weight * g.eval(*point),
            },
            // conj(zeta) = 1/zeta on the circle, so z^j conj(z)^k shifts by j - k.
            Self::CircleFourier { coeffs } => {
                let mut out: BTreeMap<i64, C64> = BTreeMap::new();
                for (&n, &c) in coeffs {
                    for (j, k, d) in g.terms() {
                        *out.entry(n + j as i64 - k as i64).or_insert(C64::new(0.0, 0.0)) += c * d;
                    }
                }
                out.retain(|_, c| *c != C64::new(0.0, 0.0));
                Self::CircleFourier { coeffs: out }
            }
            Self::Bergman { alpha, density } => Self::Bergman {
                alpha: *alpha,
                density: density * g,
            },
            Self::LensHarmonic(l) => Self::LensHarmonic(LensHarmonic {
                density: &l.density * g,
                samples: None,
                ..l.clone()
            }),
        }
    }

    fn scale(&self, s: C64) -> Self {
        self.multiply(&BiPoly::constant(s))
    }

    pub fn region(&self) -> Option<Region> {
        Some(match self {
            Self::Atom { point, .. } if point.norm() > 1.0 + UNIT_TOL => return None,
            Self::Atom { point, .. } if point.norm() >= 1.0 - UNIT_TOL => Region::Circle,
            Self::Atom { .. } | Self::Bergman { .. } => Region::OpenDisk,
            Self::CircleFourier { .. } => Region::Circle,
            Self::LensHarmonic(_) => Region::LensBoundary,
        })
    }

    /// Upper bound on the total variation; exact for nonnegative constant
    /// densities.
    pub fn variation_bound(&self) -> f64 {
        match self {
            Self::Atom { weight, .. } => weight.norm(),
            Self::CircleFourier { coeffs } => coeffs.values().map(|c| c.norm()).sum(),
            Self::Bergman { density, .. } => density.abs_coeff_sum(),
            Self::LensHarmonic(l) => {
                let w = match &l.weight {
                    None => 1.0,
                    Some(g) => lens_rule(l.c, 8).integrate(|z| C64::new(g.eval(z), 0.0)).re,
                };
                l.density.abs_coeff_sum() * w
            }
        }
    }

    fn is_real(&self) -> bool {
        match self {
            Self::Atom { weight, .. } => weight.im == 0.0,
            Self::CircleFourier { coeffs } => coeffs.iter().all(|(&k, &c)| {
                let mirror = coeffs.get(&-k).copied().unwrap_or_default();
                c == mirror.conj()
            }),
            Self::Bergman { density, .. } => density.is_real_valued(),
            Self::LensHarmonic(l) => l.density.is_real_valued(),
        }
    }

    /// `|component|(B(center, radius))`, by quadrature for continuous parts.
    pub fn ball_variation(&self, center: C64, radius: f64) -> f64 {
        match self {
            Self::Atom { point, weight } => {
                if (point - center).norm() < radius {
                    weight.norm()
                } else {
                    0.0
                }
            }
            Self::CircleFourier { coeffs } => {
                let h = |t: f64| -> f64 {
                    let z = C64::from_polar(1.0, t);
                    coeffs.iter().map(|(&k, &c)| c * z.powi(k as i32)).sum::<C64>().norm()
                };
                match circle_arc_in_ball(center, radius) {
                    ArcCut::Empty => 0.0,
                    ArcCut::Full => integrate_real(h, 0.0, 2.0 * PI, 16, Tolerance::new(1e-13, 1e-11)).0 / (2.0 * PI),
                    ArcCut::Arc { mid, half } => {
                        integrate_real(h, mid - half, mid + half, 8, Tolerance::new(1e-16 * half, 1e-12)).0 / (2.0 * PI)
                    }
                }
            }
            Self::Bergman { alpha, density } => {
                let alpha = *alpha;
                let radial = |theta: f64| -> f64 {
                    let dir = C64::from_polar(1.0, theta);
                    let Some((lo, hi)) = ray_disk_interval(center, dir) else {
                        return 0.0;
                    };
                    let hi = hi.min(radius);
                    if hi <= lo {
                        return 0.0;
                    }
                    integrate_real(
                        |rho| {
                            let w = center + dir * rho;
                            let wt = (1.0 + alpha as f64) * (1.0 - w.norm_sqr()).max(0.0).powi(alpha as i32);
                            density.eval(w).norm() * wt * rho
                        },
                        lo,
                        hi,
                        2,
                        Tolerance::new(1e-16 * (hi - lo), 1e-10),
                    )
                    .0
                };
                integrate_real(radial, 0.0, 2.0 * PI, 16, Tolerance::new(1e-13, 1e-9)).0 / PI
            }
            Self::LensHarmonic(l) => {
                let lens = LensRegion::new(l.c).expect("validated lens parameter");
                let mut total = 0.0;
                for side in Side::BOTH {
                    for (a, b) in lens_param_intervals(&lens, side, center, radius, true) {
                        total += integrate_real(
                            |u| {
                                let s = lens.boundary(side, u);
                                l.density_at(s.z).norm() * s.omega_du
                            },
                            a,
                            b,
                            4,
                            Tolerance::new(1e-18, 1e-11),
                        )
                        .0;
                    }
                }
                total
            }
        }
    }
}

/// A finite complex measure on the closed disk.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ComplexMeasure {
    pub components: Vec<MeasureComponent>,
    #[serde(default = "default_max_degree", skip_serializing_if = "is_default_max_degree")]
    pub max_degree: usize,
}

fn default_max_degree() -> usize {
    DEFAULT_MAX_DEGREE
}

fn is_default_max_degree(d: &usize) -> bool {
    *d == DEFAULT_MAX_DEGREE
}

impl Default for ComplexMeasure {
    fn default() -> Self {
        Self::zero()
    }
}

impl ComplexMeasure {
    pub fn zero() -> Self {
        Self {
            components: Vec::new(),
            max_degree: DEFAULT_MAX_DEGREE,
        }
    }

    pub fn new(components: Vec<MeasureComponent>) -> Result<Self> {
        for c in &components {
            c.check()?;
        }
        Ok(Self {
            components,
            max_degree: DEFAULT_MAX_DEGREE,
        })
    }

    pub fn single(component: MeasureComponent) -> Result<Self> {
        Self::new(vec![component])
    }

    /// Normalized arclength on the unit circle.
    pub fn arclength() -> Self {
        Self::single(MeasureComponent::circle([(0, C64::new(1.0, 0.0))])).expect("valid")
    }

    /// `(1 + alpha)(1 - |z|^2)^alpha dA`.
    pub fn bergman(alpha: u32) -> Self {
        Self::single(MeasureComponent::bergman(alpha)).expect("valid")
    }

    pub fn dirac(point: C64, weight: C64) -> Result<Self> {
        Self::single(MeasureComponent::atom(point, weight)?)
    }

    pub fn with_max_degree(mut self, max_degree: usize) -> Self {
        self.max_degree = max_degree;
        self
    }

    pub fn validate(&self) -> Result<()> {
        for c in &self.components {
            c.check()?;
            if c.density_index() > self.max_degree {
                return Err(Error::DegreeCap {
                    requested: c.density_index(),
                    max: self.max_degree,
                });
            }
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    /// `int z^j conj(z)^k d mu`.
    pub fn moment(&self, j: usize, k: usize) -> Result<C64> {
        let requested = j.max(k);
        if requested > self.max_degree {
            return Err(Error::DegreeCap {
                requested,
                max: self.max_degree,
            });
        }
        Ok(self.components.iter().map(|c| c.moment(j, k)).sum())
    }

    /// Row-major `(n+1) x (n+1)` table with entry `[j][k] = moment(k, j)`,
    /// i.e. `<z^k, z^j>` in `L^2(mu)`.
    pub fn moment_matrix(&self, n: usize) -> Result<Vec<C64>> {
        if n > self.max_degree {
            return Err(Error::DegreeCap {
                requested: n,
                max: self.max_degree,
            });
        }
        let size = n + 1;
        let mut out = vec![C64::new(0.0, 0.0); size * size];
        for comp in &self.components {
            match comp {
                MeasureComponent::LensHarmonic(l) => {
                    let rule = lens_rule(l.c, 2 * (n + l.density.max_index()));
                    let mut pw = vec![C64::new(0.0, 0.0); size];
                    for (&z, &w) in rule.nodes.iter().zip(&rule.weights) {
                        let d = l.density_at(z) * w;
                        let mut acc = C64::new(1.0, 0.0);
                        for p in pw.iter_mut() {
                            *p = acc;
                            acc *= z;
                        }
                        for j in 0..size {
                            let cj = pw[j].conj() * d;
                            for k in 0..size {
                                out[j * size + k] += pw[k] * cj;
                            }
                        }
                    }
                }
                other => {
                    for j in 0..size {
                        for k in 0..size {
                            out[j * size + k] += other.moment(k, j);
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn total_mass(&self) -> C64 {
        self.components.iter().map(|c| c.moment(0, 0)).sum()
    }

    /// `g mu` for a polynomial `g(z, conj z)`.
    pub fn multiply_density(&self, g: &BiPoly) -> Result<Self> {
        let out = Self {
            components: self.components.iter().map(|c| c.multiply(g)).collect(),
            max_degree: self.max_degree,
        };
        out.validate()?;
        Ok(out)
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            components: self.components.iter().map(|c| c.scale(s)).collect(),
            max_degree: self.max_degree,
        }
    }

    /// Sum of measures; the component lists are concatenated.
    pub fn add(&self, other: &ComplexMeasure) -> Self {
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        Self {
            components,
            max_degree: self.max_degree.min(other.max_degree),
        }
    }

    pub fn restrict(&self, region: Region) -> Self {
        Self {
            components: self
                .components
                .iter()
                .filter(|c| c.region() == Some(region))
                .cloned()
                .collect(),
            max_degree: self.max_degree,
        }
    }

    pub fn variation_bound(&self) -> f64 {
        self.components.iter().map(|c| c.variation_bound()).sum()
    }

    /// True when every density is real-valued.
    pub fn is_real(&self) -> bool {
        self.components.iter().all(|c| c.is_real())
    }

    /// `|mu|(B(center, radius))`.
    pub fn ball_variation(&self, center: C64, radius: f64) -> f64 {
        self.components
            .iter()
            .map(|c| c.ball_variation(center, radius))
            .sum()
    }

    /// Density `h(zeta)` of the absolutely continuous part on the unit circle
    /// with respect to `m`: Fourier components plus lens components whose
    /// arc passes through `zeta`.
    pub fn circle_density(&self, zeta: C64) -> C64 {
        self.components
            .iter()
            .map(|c| match c {
                MeasureComponent::CircleFourier { coeffs } => coeffs
                    .iter()
                    .map(|(&k, &c)| c * zeta.powi(k as i32))
                    .sum(),
                MeasureComponent::LensHarmonic(l) => {
                    let lens = LensRegion::new(l.c).expect("validated lens parameter");
                    match lens.arc_density_wrt_m(zeta) {
                        Some(d) => l.density_at(zeta) * d,
                        None => C64::new(0.0, 0.0),
                    }
                }
                _ => C64::new(0.0, 0.0),
            })
            .sum()
    }

    /// Atoms of the measure, as `(point, weight)`.
    pub fn atoms(&self) -> impl Iterator<Item = (C64, C64)> + '_ {
        self.components.iter().filter_map(|c| match c {
            MeasureComponent::Atom { point, weight } => Some((*point, *weight)),
            _ => None,
        })
    }
}

pub enum ArcCut {
    Empty,
    Full,
    /// Angles `mid ± half` lie inside the ball.
    Arc { mid: f64, half: f64 },
}

/// The set of `theta` with `|e^{i theta} - center| < radius`.
pub fn circle_arc_in_ball(center: C64, radius: f64) -> ArcCut {
    let d = center.norm();
    if d == 0.0 {
        return if radius > 1.0 { ArcCut::Full } else { ArcCut::Empty };
    }
    // |e^{it} - center|^2 = (1 - d)^2 + 4 d sin^2((t - arg) / 2)
    let x = (radius * radius - (1.0 - d) * (1.0 - d)) / (4.0 * d);
    if x <= 0.0 {
        ArcCut::Empty
    } else if x >= 1.0 {
        ArcCut::Full
    } else {
        ArcCut::Arc {
            mid: center.arg(),
            half: 2.0 * x.sqrt().asin(),
        }
    }
}

/// Parameter range `[lo, hi]` (with `lo >= 0`) of the ray `center + rho dir`
/// inside the closed unit disk, if any.
pub fn ray_disk_interval(center: C64, dir: C64) -> Option<(f64, f64)> {
    let b = (center.conj() * dir).re;
    let disc = b * b + 1.0 - center.norm_sqr();
    if disc <= 0.0 {
        return None;
    }
    let s = disc.sqrt();
    let hi = -b + s;
    if hi <= 0.0 {
        return None;
    }
    Some(((-b - s).max(0.0), hi))
}

/// Parameter intervals on one side of the lens boundary where
/// `|z(u) - center| < radius` (`inside = true`) or `> radius` (`inside = false`).
pub fn lens_param_intervals(
    lens: &LensRegion,
    side: Side,
    center: C64,
    radius: f64,
    inside: bool,
) -> Vec<(f64, f64)> {
    use crate::geometry::lens::PARAM_HALF_WIDTH;
    const GRID: usize = 4000;
    let lo = -PARAM_HALF_WIDTH;
    let hi = PARAM_HALF_WIDTH;
    let f = |u: f64| (lens.boundary(side, u).z - center).norm() - radius;
    let step = (hi - lo) / GRID as f64;
    let mut us: Vec<f64> = (0..=GRID).map(|i| lo + step * i as f64).collect();
    let mut fs: Vec<f64> = us.iter().map(|&u| f(u)).collect();
    // A small disk can fall between grid points; refine each discrete local
    // minimum of the distance so its crossings are seen.
    let mut extra = Vec::new();
    for i in 1..GRID {
        if fs[i] <= fs[i - 1] && fs[i] <= fs[i + 1] {
            let (mut a, mut b) = (us[i - 1], us[i + 1]);
            let r = 0.5 * (5f64.sqrt() - 1.0);
            for _ in 0..90 {
                let (x1, x2) = (b - r * (b - a), a + r * (b - a));
                if f(x1) < f(x2) {
                    b = x2;
                } else {
                    a = x1;
                }
            }
            extra.push(0.5 * (a + b));
        }
    }
    if !extra.is_empty() {
        us.extend(extra);
        us.sort_by(f64::total_cmp);
        fs = us.iter().map(|&u| f(u)).collect();
    }
    let mut cuts = vec![lo];
    for i in 1..us.len() {
        let (prev_u, u, prev_f, fu) = (us[i - 1], us[i], fs[i - 1], fs[i]);
        if (fu < 0.0) != (prev_f < 0.0) {
            // Bisect the sign change.
            let (mut a, mut b, fa) = (prev_u, u, prev_f);
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                if (f(m) < 0.0) == (fa < 0.0) {
                    a = m;
                } else {
                    b = m;
                }
            }
            cuts.push(0.5 * (a + b));
        }
    }
    cuts.push(hi);
    cuts.windows(2)
        .filter(|w| {
            let mid = 0.5 * (w[0] + w[1]);
            (f(mid) < 0.0) == inside
        })
        .map(|w| (w[0], w[1]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn arclength_moments() {
        let m = ComplexMeasure::arclength();
        assert_eq!(m.moment(2, 2).unwrap(), c(1.0, 0.0));
        assert_eq!(m.moment(2, 3).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn bergman_five_moments() {
        let a5 = ComplexMeasure::bergman(5);
        let fact = |n: usize| (1..=n).fold(1.0, |acc, i| acc * i as f64);
        for j in 0..12 {
            let expected = 720.0 * fact(j) / fact(j + 6);
            let got = a5.moment(j, j).unwrap();
            assert!((got.re - expected).abs() <= 1e-15 * expected, "j={j}");
            assert_eq!(a5.moment(j, j + 1).unwrap(), c(0.0, 0.0));
        }
        assert!((a5.moment(1, 1).unwrap().re - 1.0 / 7.0).abs() < 1e-16);
    }

    #[test]
    fn atom_moments() {
        let d = ComplexMeasure::dirac(c(1.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(d.moment(3, 4).unwrap(), c(1.0, 0.0));
        let d2 = ComplexMeasure::dirac(c(2.0, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(d2.moment(3, 4).unwrap(), c(128.0, 0.0));
        assert!(d2.restrict(Region::Circle).is_zero() && d2.restrict(Region::OpenDisk).is_zero());
        let z2 = d2.multiply_density(&BiPoly::term(2, 0, c(1.0, 0.0))).unwrap();
        assert_eq!(z2.atoms().next(), Some((c(2.0, 0.0), c(4.0, 0.0))));
        assert!(ComplexMeasure::dirac(c(f64::NAN, 0.0), c(1.0, 0.0)).is_err());
    }

    #[test]
    fn degree_cap_is_enforced() {
        let m = ComplexMeasure::arclength().with_max_degree(4);
        assert!(matches!(m.moment(5, 0), Err(Error::DegreeCap { requested: 5, max: 4 })));
        let g = BiPoly::term(5, 0, c(1.0, 0.0));
        assert!(ComplexMeasure::bergman(1).with_max_degree(4).multiply_density(&g).is_err());
    }

    #[test]
    fn multiply_examples() {
        let m = ComplexMeasure::arclength();
        let zm = m.multiply_density(&BiPoly::term(1, 0, c(1.0, 0.0))).unwrap();
        assert_eq!(zm, ComplexMeasure::single(MeasureComponent::circle([(1, c(1.0, 0.0))])).unwrap());

        let a = c(0.3, -0.2);
        let a5 = ComplexMeasure::bergman(5);
        let g = &BiPoly::term(1, 0, c(1.0, 0.0)) + &BiPoly::constant(-a);
        let shifted = a5.multiply_density(&g).unwrap();
        assert!((shifted.moment(0, 0).unwrap() + a).norm() < 1e-15);
    }

    #[test]
    fn restrict_examples() {
        let m = ComplexMeasure::arclength();
        let half = ComplexMeasure::dirac(c(0.5, 0.0), c(1.0, 0.0)).unwrap();
        assert_eq!(m.add(&half).restrict(Region::Circle), m);
        assert!(m.restrict(Region::LensBoundary).is_zero());
        let a5 = ComplexMeasure::bergman(5);
        let lens = ComplexMeasure::single(MeasureComponent::LensHarmonic(LensHarmonic::harmonic(0.3).unwrap())).unwrap();
        assert_eq!(lens.add(&a5).restrict(Region::OpenDisk), a5);
    }

    #[test]
    fn variation_bounds() {
        assert_eq!(ComplexMeasure::arclength().variation_bound(), 1.0);
        assert_eq!(ComplexMeasure::bergman(5).variation_bound(), 1.0);
        let d = ComplexMeasure::dirac(c(0.2, 0.0), c(0.0, 3.0)).unwrap();
        assert_eq!(d.variation_bound(), 3.0);
    }

    #[test]
    fn ball_variation_of_arclength_near_one() {
        let m = ComplexMeasure::arclength();
        for r in [0.01, 0.3, 1.0, 1.9] {
            let exact = 2.0 * (r / 2.0f64).asin() / PI;
            let got = m.ball_variation(c(1.0, 0.0), r);
            assert!((got - exact).abs() < 1e-10, "r={r}: {got} vs {exact}");
        }
        assert_eq!(m.ball_variation(c(0.0, 0.0), 0.9), 0.0);
    }

    #[test]
    fn ball_variation_of_bergman_weight() {
        // |A_1|(B(0, r)) = int_0^{r^2} 2(1 - t) dt = 2 r^2 - r^4
        let a1 = ComplexMeasure::bergman(1);
        for r in [0.2, 0.7] {
            let got = a1.ball_variation(c(0.0, 0.0), r);
            let exact = 2.0 * r * r - r.powi(4);
            assert!((got - exact).abs() < 1e-9, "r={r}");
        }
        assert!((a1.ball_variation(c(0.0, 0.0), 3.0) - 1.0).abs() < 1e-9);
    }

    #[test]
    fn lens_ball_variation_matches_arc_mass() {
        // A ball around -1 large enough to catch the whole arc and none of the chord.
        let l = LensHarmonic::harmonic(0.3).unwrap();
        let lens = LensRegion::new(0.3).unwrap();
        let comp = MeasureComponent::LensHarmonic(l);
        let total = comp.ball_variation(c(0.0, 0.0), 5.0);
        assert!((total - 1.0).abs() < 1e-10);
        let arc_only = comp.ball_variation(c(-10.0, 0.0), 10.0 - 1e-9 + 0.0) ;
        // Points of the arc satisfy |z + 10| < 10 only when Re z < -0.05 roughly;
        // compare with the rule restricted to the same set.
        let rule = lens_rule(0.3, 8);
        let expected: f64 = rule
            .nodes
            .iter()
            .zip(&rule.weights)
            .filter(|(z, _)| (**z - c(-10.0, 0.0)).norm() < 10.0 - 1e-9)
            .map(|(_, w)| *w)
            .sum();
        assert!((arc_only - expected).abs() < 1e-3);
        assert!(lens.arc_mass_exact() > 0.0);
    }
}
