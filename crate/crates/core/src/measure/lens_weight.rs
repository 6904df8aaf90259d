use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geometry::lens::{LensRegion, LensRule, Side};
use crate::hz::g_alpha;
use crate::poly::BiPoly;
use crate::C64;

/// The weight `1 / |g(z)|^2` with `g(z) = 1 - ((1 - |a|^2) / (1 - conj(a) z))^(alpha + 2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GWeight {
    pub a: C64,
    pub alpha: u32,
}

impl GWeight {
    pub fn eval(&self, z: C64) -> f64 {
        1.0 / g_alpha(self.a, self.alpha, z).norm_sqr()
    }
}

/// A tabulated boundary sample of a lens component, for export.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LensSample {
    pub side: Side,
    pub u: f64,
    pub z: C64,
    /// Harmonic-measure density per unit arclength.
    pub arclength_density: f64,
    /// Full density (polynomial times weight) at `z`.
    pub density: C64,
}

/// `density(z) * weight(z) d omega` on the boundary of the lens with
/// parameter `c`, `omega` harmonic measure at the origin.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LensHarmonic {
    pub c: f64,
    #[serde(default = "BiPoly::one", skip_serializing_if = "BiPoly::is_one")]
    pub density: BiPoly,
    #[serde(default, rename = "inv_abs_g_sq", skip_serializing_if = "Option::is_none")]
    pub weight: Option<GWeight>,
    /// Informational only; never used for integration.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<Vec<LensSample>>,
}

impl LensHarmonic {
    /// Harmonic measure of the lens at the origin.
    pub fn harmonic(c: f64) -> Result<Self> {
        LensRegion::new(c)?;
        Ok(Self {
            c,
            density: BiPoly::one(),
            weight: None,
            samples: None,
        })
    }

    pub fn with_weight(mut self, weight: GWeight) -> Self {
        self.weight = Some(weight);
        self
    }

    pub fn density_at(&self, z: C64) -> C64 {
        let d = self.density.eval(z);
        match &self.weight {
            Some(w) => d * w.eval(z),
            None => d,
        }
    }

    /// Attach `per_side` samples per boundary piece, equally spaced in the
    /// conformal parameter on `[-half_width, half_width]`.
    pub fn with_samples(mut self, per_side: usize, half_width: f64) -> Result<Self> {
        let lens = LensRegion::new(self.c)?;
        let mut out = Vec::with_capacity(2 * per_side);
        for side in Side::BOTH {
            for i in 0..per_side {
                let u = if per_side == 1 {
                    0.0
                } else {
                    -half_width + 2.0 * half_width * i as f64 / (per_side - 1) as f64
                };
                let b = lens.boundary(side, u);
                out.push(LensSample {
                    side,
                    u,
                    z: b.z,
                    arclength_density: lens.arclength_density(side, u),
                    density: self.density_at(b.z),
                });
            }
        }
        self.samples = Some(out);
        Ok(self)
    }
}

type RuleKey = (u64, usize);

/// Shared boundary rule for the lens with parameter `c`, accurate for
/// integrands of polynomial degree up to `max_exponent` (rounded up to a
/// power of two). Rules are cached for the life of the process.
pub fn lens_rule(c: f64, max_exponent: usize) -> Arc<LensRule> {
    static CACHE: OnceLock<Mutex<HashMap<RuleKey, Arc<LensRule>>>> = OnceLock::new();
    let bucket = max_exponent.max(16).next_power_of_two();
    let key = (c.to_bits(), bucket);
    let cache = CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&key) {
        return Arc::clone(rule);
    }
    let lens = LensRegion::new(c).expect("lens parameter validated by caller");
    let rule = Arc::new(LensRule::build(&lens, bucket, 1e-13));
    cache
        .lock()
        .expect("rule cache poisoned")
        .entry(key)
        .or_insert(rule)
        .clone()
}
