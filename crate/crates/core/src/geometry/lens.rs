//! The lens `D ∩ {Re z < c}` and its harmonic measure at the origin.
//!
//! The conformal chain is `T(z) = (z - p+) / (z - p-)`, sending the corners
//! `p± = c ± i sqrt(1 - c^2)` to `0` and `∞`, followed by
//! `w = (e^{-i phi} T)^{pi / beta}` which opens the sector of angle
//! `beta = pi - acos(c)` onto the upper half-plane. The origin lands on
//! `w0 = e^{i psi}` with `psi = pi * acos(c) / beta`, and harmonic measure is
//! the half-plane Poisson kernel at `w0` pulled back to the boundary.
//!
//! Both boundary pieces are parametrized by `u ∈ R` through `|w| = e^u`. In
//! that variable the pulled-back kernel is analytic and decays like
//! `e^{-|u|}`, so truncating at `|u| = 40` costs less than `1e-17` of mass.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quad::gauss_legendre;
use crate::C64;

/// Half-width of the truncated parameter interval on each boundary piece.
pub const PARAM_HALF_WIDTH: f64 = 40.0;

/// Which piece of the lens boundary a point belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// The circular arc on the unit circle, through `-1`.
    Arc,
    /// The vertical chord `Re z = c`.
    Chord,
}

impl Side {
    pub const BOTH: [Side; 2] = [Side::Arc, Side::Chord];
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LensRegion {
    c: f64,
    phi: f64,
    beta: f64,
    p_plus: C64,
    p_minus: C64,
}

/// A boundary point with its parameter derivative and harmonic-measure
/// density with respect to the parameter.
#[derive(Debug, Clone, Copy)]
pub struct BoundarySample {
    pub side: Side,
    pub u: f64,
    pub z: C64,
    pub dz_du: C64,
    pub omega_du: f64,
}

impl LensRegion {
    pub fn new(c: f64) -> Result<Self> {
        if !(c > 0.0 && c < 1.0) {
            return Err(Error::Domain(format!("lens parameter c = {c} must lie in (0, 1)")));
        }
        let h = (1.0 - c * c).sqrt();
        let phi = c.acos();
        Ok(Self {
            c,
            phi,
            beta: PI - phi,
            p_plus: C64::new(c, h),
            p_minus: C64::new(c, -h),
        })
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    /// The two corners `c ± i sqrt(1 - c^2)`.
    pub fn corners(&self) -> (C64, C64) {
        (self.p_plus, self.p_minus)
    }

    /// Interior angle at either corner.
    pub fn corner_angle(&self) -> f64 {
        self.beta
    }

    fn psi(&self) -> f64 {
        PI * self.phi / self.beta
    }

    /// Image of the origin in the upper half-plane.
    pub fn origin_image(&self) -> C64 {
        C64::from_polar(1.0, self.psi())
    }

    fn mobius(&self, z: C64) -> C64 {
        (z - self.p_plus) / (z - self.p_minus)
    }

    fn mobius_inv(&self, w: C64) -> C64 {
        if w.norm() <= 1.0 {
            (self.p_plus - w * self.p_minus) / (C64::new(1.0, 0.0) - w)
        } else {
            let winv = w.inv();
            (self.p_plus * winv - self.p_minus) / (winv - C64::new(1.0, 0.0))
        }
    }

    /// The conformal map of the lens onto the upper half-plane.
    pub fn to_half_plane(&self, z: C64) -> C64 {
        let t = self.mobius(z) * C64::from_polar(1.0, -self.phi);
        let (rho, arg) = t.to_polar();
        // Sector angles live in [0, beta]; keep the branch continuous there.
        let arg = if arg < -0.5 * (2.0 * PI - self.beta) {
            arg + 2.0 * PI
        } else {
            arg
        };
        C64::from_polar(rho.powf(PI / self.beta), arg * PI / self.beta)
    }

    /// Harmonic measure of the whole lens at the origin is a probability
    /// measure; the arc carries `1 - phi / beta` of it (Poisson mass of the
    /// positive half-line seen from `w0`).
    pub fn arc_mass_exact(&self) -> f64 {
        1.0 - self.phi / self.beta
    }

    pub fn contains(&self, z: C64) -> bool {
        z.norm() < 1.0 && z.re < self.c
    }

    /// Distance from `z` to the closed lens (zero inside).
    pub fn distance_to_closure(&self, z: C64) -> f64 {
        let in_disk = z.norm() <= 1.0;
        let in_half = z.re <= self.c;
        if in_disk && in_half {
            return 0.0;
        }
        let mut best = f64::INFINITY;
        // Radial projection onto the arc, valid when it lands in the half-plane.
        if z.norm() > 0.0 {
            let p = z / z.norm();
            if p.re <= self.c {
                best = best.min((z - p).norm());
            }
        }
        // Horizontal projection onto the chord.
        if z.im.abs() <= self.p_plus.im {
            best = best.min((z.re - self.c).abs());
        }
        best.min((z - self.p_plus).norm()).min((z - self.p_minus).norm())
    }

    /// Distance from `z` to the lens boundary.
    pub fn distance_to_boundary(&self, z: C64) -> f64 {
        if self.contains(z) {
            (1.0 - z.norm()).min(self.c - z.re)
        } else {
            self.distance_to_closure(z)
        }
    }

    /// Boundary point at parameter `u` on `side`.
    pub fn boundary(&self, side: Side, u: f64) -> BoundarySample {
        let s = self.beta / PI;
        let scale = (u * s).exp();
        let dir = match side {
            Side::Arc => C64::from_polar(1.0, self.phi),
            Side::Chord => C64::new(-1.0, 0.0),
        };
        let w = dir * scale;
        let z = self.mobius_inv(w);
        // dz/dW = (p+ - p-) / (1 - W)^2, dW/du = s W
        let dz_dw = if w.norm() <= 1.0 {
            (self.p_plus - self.p_minus) / ((C64::new(1.0, 0.0) - w) * (C64::new(1.0, 0.0) - w))
        } else {
            let winv = w.inv();
            (self.p_plus - self.p_minus) * winv * winv
                / ((winv - C64::new(1.0, 0.0)) * (winv - C64::new(1.0, 0.0)))
        };
        let dz_du = dz_dw * w * s;
        let rho = u.exp();
        let psi = self.psi();
        let sign = match side {
            Side::Arc => -1.0,
            Side::Chord => 1.0,
        };
        let denom = if rho > 1.0 {
            let ri = 1.0 / rho;
            rho * rho * (1.0 + sign * 2.0 * psi.cos() * ri + ri * ri)
        } else {
            rho * rho + sign * 2.0 * rho * psi.cos() + 1.0
        };
        let omega_du = psi.sin() * rho / (PI * denom);
        BoundarySample {
            side,
            u,
            z,
            dz_du,
            omega_du,
        }
    }

    /// Harmonic-measure density with respect to arclength at the boundary
    /// point with parameter `u`.
    pub fn arclength_density(&self, side: Side, u: f64) -> f64 {
        let b = self.boundary(side, u);
        b.omega_du / b.dz_du.norm()
    }

    /// Locate `z` on the boundary: returns the side and parameter when `z`
    /// lies within `tol` of the boundary and away from the corners.
    pub fn boundary_param(&self, z: C64, tol: f64) -> Option<(Side, f64)> {
        if (z - self.p_plus).norm() < tol || (z - self.p_minus).norm() < tol {
            return None;
        }
        let on_arc = (z.norm() - 1.0).abs() <= tol && z.re <= self.c + tol;
        let on_chord = (z.re - self.c).abs() <= tol && z.im.abs() <= self.p_plus.im + tol;
        let side = if on_arc {
            Side::Arc
        } else if on_chord {
            Side::Chord
        } else {
            return None;
        };
        let w = self.mobius(z);
        let u = w.norm().ln() * PI / self.beta;
        Some((side, u))
    }

    /// Harmonic-measure density of the arc with respect to normalized
    /// arclength `m = d theta / 2 pi`, at the arc point `zeta`.
    pub fn arc_density_wrt_m(&self, zeta: C64) -> Option<f64> {
        match self.boundary_param(zeta, 1e-12) {
            Some((Side::Arc, u)) => Some(2.0 * PI * self.arclength_density(Side::Arc, u)),
            _ => None,
        }
    }
}

/// A fixed composite Gauss-Legendre rule on both boundary pieces, with
/// weights already multiplied by the harmonic-measure density.
#[derive(Debug, Clone, PartialEq)]
pub struct LensRule {
    pub nodes: Vec<C64>,
    pub weights: Vec<f64>,
    pub sides: Vec<Side>,
    /// Difference between the last two refinement levels on the test set.
    pub estimated_error: f64,
}

const GL_PER_PANEL: usize = 20;

impl LensRule {
    /// Refine the panel count on `[-40, 40]` until the rule integrates the
    /// test functions `1, z^k, |z|^{2k}` (`k` up to `max_exponent`) to within
    /// `tol` between successive levels.
    pub fn build(lens: &LensRegion, max_exponent: usize, tol: f64) -> LensRule {
        let mut panels = 32usize;
        let mut prev_tests = Self::at_level(lens, panels).test_integrals(max_exponent);
        loop {
            panels *= 2;
            let cur = Self::at_level(lens, panels);
            let cur_tests = cur.test_integrals(max_exponent);
            let diff = prev_tests
                .iter()
                .zip(&cur_tests)
                .map(|(a, b)| (a - b).norm())
                .fold(0.0, f64::max);
            if diff <= tol || panels >= 8192 {
                return LensRule {
                    estimated_error: diff,
                    ..cur
                };
            }
            prev_tests = cur_tests;
        }
    }

    fn at_level(lens: &LensRegion, panels: usize) -> LensRule {
        let (x, w) = gauss_legendre(GL_PER_PANEL);
        let width = 2.0 * PARAM_HALF_WIDTH / panels as f64;
        let n = 2 * panels * GL_PER_PANEL;
        let mut nodes = Vec::with_capacity(n);
        let mut weights = Vec::with_capacity(n);
        let mut sides = Vec::with_capacity(n);
        for side in Side::BOTH {
            for p in 0..panels {
                let lo = -PARAM_HALF_WIDTH + width * p as f64;
                for (xi, wi) in x.iter().zip(&w) {
                    let u = lo + 0.5 * width * (xi + 1.0);
                    let b = lens.boundary(side, u);
                    nodes.push(b.z);
                    weights.push(0.5 * width * wi * b.omega_du);
                    sides.push(side);
                }
            }
        }
        LensRule {
            nodes,
            weights,
            sides,
            estimated_error: f64::NAN,
        }
    }

    fn test_integrals(&self, max_exponent: usize) -> Vec<C64> {
        let ks = [1, max_exponent / 4, max_exponent / 2, max_exponent];
        let mut out = vec![self.integrate(|_| C64::new(1.0, 0.0))];
        for &k in &ks {
            let k = k.max(1) as i32;
            out.push(self.integrate(|z| z.powi(k)));
            out.push(self.integrate(|z| C64::new(z.norm_sqr().powi(k), 0.0)));
        }
        out
    }

    pub fn integrate<F: FnMut(C64) -> C64>(&self, mut f: F) -> C64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .map(|(&z, &w)| f(z) * w)
            .sum()
    }

    /// Like [`LensRule::integrate`] but restricted to one boundary piece.
    pub fn integrate_side<F: FnMut(C64) -> C64>(&self, side: Side, mut f: F) -> C64 {
        self.nodes
            .iter()
            .zip(&self.weights)
            .zip(&self.sides)
            .filter(|(_, &s)| s == side)
            .map(|((&z, &w), _)| f(z) * w)
            .sum()
    }
}
