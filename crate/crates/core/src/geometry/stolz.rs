//! Stolz approach regions and their reflections through the tangent line.

use crate::error::{Error, Result};
use crate::C64;

/// Tolerance on `|zeta| = 1` for boundary points.
pub const UNIMODULAR_TOL: f64 = 1e-12;

fn check_unimodular(zeta: C64) -> Result<()> {
    if (zeta.norm() - 1.0).abs() > UNIMODULAR_TOL {
        return Err(Error::Domain(format!("|zeta| = {} is not 1", zeta.norm())));
    }
    Ok(())
}

/// Interior of the convex hull of `{|z| <= r} ∪ {zeta}`, optionally cut down
/// to `B(zeta, delta)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StolzRegion {
    zeta: C64,
    r: f64,
    delta: Option<f64>,
}

/// The reflection of a [`StolzRegion`] through the tangent line at `zeta`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectedStolz(pub StolzRegion);

/// Anything with an exact membership test.
pub trait ApproachRegion {
    fn contains(&self, lam: C64) -> bool;
    fn zeta(&self) -> C64;
}

impl StolzRegion {
    pub fn new(zeta: C64, r: f64) -> Result<Self> {
        check_unimodular(zeta)?;
        if !(r > 0.0 && r < 1.0) {
            return Err(Error::Domain(format!("Stolz radius r = {r} must lie in (0, 1)")));
        }
        Ok(Self {
            zeta,
            r,
            delta: None,
        })
    }

    /// Boundary point `e^{i theta}`.
    pub fn at_angle(theta: f64, r: f64) -> Result<Self> {
        Self::new(C64::from_polar(1.0, theta), r)
    }

    pub fn with_cap(self, delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta <= 1.0) {
            return Err(Error::Domain(format!("cap delta = {delta} must lie in (0, 1]")));
        }
        Ok(Self {
            delta: Some(delta),
            ..self
        })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn delta(&self) -> Option<f64> {
        self.delta
    }

    pub fn reflected(self) -> ReflectedStolz {
        ReflectedStolz(self)
    }

    /// Half-opening angle of the cone at `zeta` (seen from `zeta`, towards 0).
    pub fn half_angle(&self) -> f64 {
        self.r.asin()
    }

    fn contains_uncapped(&self, lam: C64) -> bool {
        // Rotate so that zeta = 1.
        let mu = lam * self.zeta.conj();
        let r = self.r;
        if mu.norm() < r {
            return true;
        }
        // Tangent points r e^{± i t}, cos t = r. The open hull outside the disk
        // is the open triangle (1, t+, t-) beyond the chord Re = r^2.
        let s = (1.0 - r * r).sqrt();
        let t_plus = C64::new(r * r, r * s);
        let t_minus = t_plus.conj();
        let r2 = r * r;
        mu.re > r2 && (mu * t_plus.conj()).re < r2 && (mu * t_minus.conj()).re < r2
    }
}

impl ApproachRegion for StolzRegion {
    fn contains(&self, lam: C64) -> bool {
        if let Some(d) = self.delta {
            if (lam - self.zeta).norm() >= d {
                return false;
            }
        }
        self.contains_uncapped(lam)
    }

    fn zeta(&self) -> C64 {
        self.zeta
    }
}

impl ApproachRegion for ReflectedStolz {
    fn contains(&self, lam: C64) -> bool {
        let s = &self.0;
        if let Some(d) = s.delta {
            if (lam - s.zeta).norm() >= d {
                return false;
            }
        }
        let back = 2.0 * s.zeta - s.zeta * s.zeta * lam.conj();
        s.contains_uncapped(back)
    }

    fn zeta(&self) -> C64 {
        self.0.zeta
    }
}

/// Membership in a Stolz region or its reflection.
pub fn stolz_contains<R: ApproachRegion + ?Sized>(region: &R, lam: C64) -> bool {
    region.contains(lam)
}

/// Reflection through the line tangent to the unit circle at `zeta`:
/// `2 zeta - zeta^2 conj(lam)`.
pub fn reflect_tangent(zeta: C64, lam: C64) -> Result<C64> {
    check_unimodular(zeta)?;
    Ok(2.0 * zeta - zeta * zeta * lam.conj())
}

/// `n` points of `S_rho(zeta)` (inside the cap of `region`, if any) with
/// strictly increasing modulus, cycling over the radial ray and the two
/// steepest admissible oblique rays, the last one within `1e-6` of `zeta`.
pub fn approach_path(region: &StolzRegion, rho: f64, n: usize) -> Result<Vec<C64>> {
    if !(rho > 0.0 && rho < region.r) {
        return Err(Error::Domain(format!(
            "rho = {rho} must lie in (0, r = {})",
            region.r
        )));
    }
    if n == 0 {
        return Ok(Vec::new());
    }
    let psi_max = 0.95 * rho.asin();
    let rays = [0.0, psi_max, -psi_max];
    // Distance budget along the steepest ray: stay short of the tangent points
    // and inside the cap.
    let mut d_max = 0.5 * (1.0 - rho * rho).sqrt();
    if let Some(cap) = region.delta {
        d_max = d_max.min(0.5 * cap);
    }
    // 1 - |lam| runs geometrically from u_first down to u_last.
    let u_first = 0.5 * d_max * psi_max.cos();
    let u_last = 1e-7;
    let ratio = if n > 1 {
        (u_last / u_first).powf(1.0 / (n - 1) as f64)
    } else {
        1.0
    };
    let mut out = Vec::with_capacity(n);
    for k in 0..n {
        let u = if n == 1 {
            u_last
        } else {
            u_first * ratio.powi(k as i32)
        };
        let psi = rays[k % 3];
        // |1 - d e^{i psi}| = 1 - u
        let cp = psi.cos();
        let d = cp - (cp * cp - (2.0 * u - u * u)).sqrt();
        out.push(region.zeta * (1.0 - d * C64::from_polar(1.0, psi)));
    }
    Ok(out)
}
