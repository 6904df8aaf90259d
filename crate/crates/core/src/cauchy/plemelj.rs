//! Boundary limits of Cauchy transforms along Stolz regions and their
//! reflections.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use super::transform::cauchy_pv;
use crate::error::{Error, Result};
use crate::geometry::covering::exceptional_cover_estimate;
use crate::geometry::stolz::{reflect_tangent, ApproachRegion, StolzRegion};
use crate::measure::ComplexMeasure;
use crate::C64;

/// Default flagging tolerance for measures with only closed-form components.
pub const DEFAULT_TOL_CLOSED: f64 = 1e-6;
/// Default flagging tolerance when quadrature components are present.
pub const DEFAULT_TOL_QUADRATURE: f64 = 1e-4;

const RADIAL_STEPS: usize = 4;
const ANGULAR_STEPS: usize = 7;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpRecord {
    pub delta: f64,
    /// Extrapolated limit from inside, using shells down to this `delta`:
    /// each shell contributes the constant term of a local cubic fit.
    pub inner_fit: C64,
    pub outer_fit: C64,
    pub pv_at_zeta: C64,
    pub predicted_inner: C64,
    pub predicted_outer: C64,
    /// Mean of the unflagged samples in this shell.
    pub inner_mean: C64,
    pub outer_mean: C64,
    pub samples: usize,
    pub agree_fraction: f64,
    pub flagged_points: Vec<C64>,
    /// Covering proxy of the flagged set at scale `delta / 8`.
    pub cover_proxy: f64,
    pub cover_proxy_over_delta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JumpScanReport {
    pub zeta: C64,
    pub r: f64,
    pub tol: f64,
    pub delta_list: Vec<f64>,
    /// Density of the absolutely continuous part on the circle at `zeta`.
    pub h_at_zeta: C64,
    pub predicted_jump: C64,
    pub records: Vec<JumpRecord>,
}

impl JumpScanReport {
    pub fn final_record(&self) -> Option<&JumpRecord> {
        self.records.last()
    }

    pub fn fitted_jump(&self) -> Option<C64> {
        self.final_record().map(|r| r.inner_fit - r.outer_fit)
    }

    /// Both final fits within `10 tol` of the predicted limits.
    pub fn passes(&self) -> bool {
        self.final_record().is_some_and(|r| {
            (r.inner_fit - r.predicted_inner).norm() <= 10.0 * self.tol
                && (r.outer_fit - r.predicted_outer).norm() <= 10.0 * self.tol
        })
    }
}

/// Least-squares fit `y ≈ sum_{p < terms} b_p x^p` over complex data; returns
/// the coefficients.
pub fn complex_polyfit(x: &[C64], y: &[C64], terms: usize) -> Result<Vec<C64>> {
    let n = x.len();
    if n == 0 || terms == 0 {
        return Err(Error::InsufficientData("empty fit".into()));
    }
    let terms = terms.min(n);
    // Scale the abscissae for conditioning.
    let scale = x.iter().map(|v| v.norm()).fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    let a = DMatrix::from_fn(n, terms, |i, p| (x[i] / scale).powu(p as u32));
    let b = DVector::from_column_slice(y);
    let svd = a.svd(true, true);
    let sol = svd
        .solve(&b, 1e-13)
        .map_err(|e| Error::Numerical(format!("least squares: {e}")))?;
    Ok((0..terms).map(|p| sol[p] / scale.powi(p as i32)).collect())
}

/// Limit at offset 0 of per-shell estimates `(mean offset, estimate)`, by
/// polynomial fitting in the offset (exact interpolation for up to three shells).
pub fn extrapolate_shells(shells: &[(C64, C64)]) -> Result<C64> {
    let x: Vec<C64> = shells.iter().map(|s| s.0).collect();
    let y: Vec<C64> = shells.iter().map(|s| s.1).collect();
    Ok(complex_polyfit(&x, &y, shells.len().min(3))?[0])
}

fn shell_grid(zeta: C64, r: f64, delta: f64) -> Vec<(C64, C64)> {
    let psi_max = 0.9 * r.asin();
    let mut out = Vec::with_capacity(RADIAL_STEPS * ANGULAR_STEPS);
    for i in 0..RADIAL_STEPS {
        let rho = delta * (0.5 + 0.5 * i as f64 / RADIAL_STEPS as f64);
        for j in 0..ANGULAR_STEPS {
            let psi = psi_max * (-1.0 + 2.0 * j as f64 / (ANGULAR_STEPS - 1) as f64);
            let inner = zeta * (1.0 - rho * C64::from_polar(1.0, psi));
            let outer = reflect_tangent(zeta, inner).expect("unimodular zeta");
            out.push((inner, outer));
        }
    }
    out
}

struct ShellEval {
    mean_offset: C64,
    mean_value: C64,
    /// Constant term of a cubic fit in `d` over the unflagged points.
    local_limit: C64,
    flagged: Vec<C64>,
    total: usize,
}

/// Flag points whose deviation from `predicted + sum_{p=1..4} B_p d^p` (best
/// fit over the shell, `d = lambda - zeta`) exceeds `tol`.
fn evaluate_shell(points: &[C64], values: &[C64], zeta: C64, predicted: C64, tol: f64) -> Result<ShellEval> {
    let d: Vec<C64> = points.iter().map(|p| p - zeta).collect();
    let dev: Vec<C64> = values.iter().map(|v| v - predicted).collect();
    // No constant term: fit dev / d by a cubic.
    let ratio: Vec<C64> = dev.iter().zip(&d).map(|(v, di)| v / di).collect();
    let coef = complex_polyfit(&d, &ratio, 4)?;
    let mut flagged = Vec::new();
    let mut sum_off = C64::new(0.0, 0.0);
    let mut sum_val = C64::new(0.0, 0.0);
    let mut kept = 0usize;
    for ((p, di), (v, dv)) in points.iter().zip(&d).zip(values.iter().zip(&dev)) {
        let model = di * coef.iter().rev().fold(C64::new(0.0, 0.0), |acc, b| acc * di + b);
        if (dv - model).norm() > tol {
            flagged.push(*p);
        } else {
            sum_off += di;
            sum_val += v;
            kept += 1;
        }
    }
    let k = kept.max(1) as f64;
    let (kd, kv): (Vec<C64>, Vec<C64>) = d
        .iter()
        .zip(values)
        .zip(points)
        .filter(|(_, p)| !flagged.contains(p))
        .map(|((di, v), _)| (*di, *v))
        .unzip();
    let local_limit = if kd.len() >= 8 {
        complex_polyfit(&kd, &kv, 4)?[0]
    } else {
        sum_val / k
    };
    Ok(ShellEval {
        mean_offset: sum_off / k,
        mean_value: sum_val / k,
        local_limit,
        flagged,
        total: points.len(),
    })
}

/// Sample `C(nu)` on shells `delta/2 <= |lambda - zeta| < delta` inside
/// `S_r(zeta, delta)` and their reflections in `T_r(zeta, delta)`, fit the
/// one-sided limits, and compare with `pv(zeta) ± h(zeta) conj(zeta) / 2`.
pub fn plemelj_scan(nu: &ComplexMeasure, zeta: C64, r: f64, delta_list: &[f64], tol: f64) -> Result<JumpScanReport> {
    let base = StolzRegion::new(zeta, r)?;
    if delta_list.is_empty() {
        return Err(Error::Precondition("delta list is empty".into()));
    }
    if !(tol > 0.0) {
        return Err(Error::Domain(format!("tol = {tol} must be positive")));
    }
    let pv = cauchy_pv(nu, zeta)?.value;
    let h = nu.circle_density(zeta);
    let half_jump = 0.5 * h * zeta.conj();
    let predicted_inner = pv + half_jump;
    let predicted_outer = pv - half_jump;
    let mut inner_shells: Vec<(C64, C64)> = Vec::new();
    let mut outer_shells: Vec<(C64, C64)> = Vec::new();
    let mut records = Vec::with_capacity(delta_list.len());
    for &delta in delta_list {
        let capped = base.with_cap(delta)?;
        let reflected = capped.reflected();
        let mut inner_pts = Vec::new();
        let mut outer_pts = Vec::new();
        for (a, b) in shell_grid(zeta, r, delta) {
            if capped.contains(a) && reflected.contains(b) {
                inner_pts.push(a);
                outer_pts.push(b);
            }
        }
        if inner_pts.len() < 3 {
            return Err(Error::InsufficientData(format!("shell at delta = {delta} has too few admissible points")));
        }
        let eval = |pts: &[C64]| -> Result<Vec<C64>> { pts.iter().map(|&p| Ok(cauchy_pv(nu, p)?.value)).collect() };
        let inner_vals = eval(&inner_pts)?;
        let outer_vals = eval(&outer_pts)?;
        let ie = evaluate_shell(&inner_pts, &inner_vals, zeta, predicted_inner, tol)?;
        let oe = evaluate_shell(&outer_pts, &outer_vals, zeta, predicted_outer, tol)?;
        if ie.flagged.len() < ie.total {
            inner_shells.push((ie.mean_offset, ie.local_limit));
        }
        if oe.flagged.len() < oe.total {
            outer_shells.push((oe.mean_offset, oe.local_limit));
        }
        let fit = |s: &[(C64, C64)]| -> Result<C64> {
            if s.is_empty() {
                Ok(C64::new(f64::NAN, f64::NAN))
            } else {
                extrapolate_shells(&s[s.len().saturating_sub(3)..])
            }
        };
        let mut flagged = ie.flagged.clone();
        flagged.extend(oe.flagged.iter().copied());
        let total = ie.total + oe.total;
        let cover_proxy = exceptional_cover_estimate(&flagged, delta / 8.0)?;
        records.push(JumpRecord {
            delta,
            inner_fit: fit(&inner_shells)?,
            outer_fit: fit(&outer_shells)?,
            pv_at_zeta: pv,
            predicted_inner,
            predicted_outer,
            inner_mean: ie.mean_value,
            outer_mean: oe.mean_value,
            samples: total,
            agree_fraction: (total - flagged.len()) as f64 / total as f64,
            flagged_points: flagged,
            cover_proxy,
            cover_proxy_over_delta: cover_proxy / delta,
        });
    }
    Ok(JumpScanReport {
        zeta,
        r,
        tol,
        delta_list: delta_list.to_vec(),
        h_at_zeta: h,
        predicted_jump: h * zeta.conj(),
        records,
    })
}

/// Limit of sampled values as `lambda -> zeta` inside `region`, ignoring
/// `flagged` points: samples are grouped in dyadic shells of `|lambda - zeta|`,
/// averaged, and the shell means extrapolated to offset 0 using the finest
/// shells.
pub fn nontangential_limit_estimate(samples: &[(C64, C64)], region: &StolzRegion, flagged: &[C64]) -> Result<C64> {
    let zeta = region.zeta();
    let mut shells: std::collections::BTreeMap<i32, (C64, C64, usize, usize)> = Default::default();
    for &(lam, v) in samples {
        if !region.contains(lam) {
            return Err(Error::Precondition(format!("sample {lam} lies outside the approach region")));
        }
        let d = (lam - zeta).norm();
        let key = d.log2().floor() as i32;
        let e = shells.entry(key).or_insert((C64::new(0.0, 0.0), C64::new(0.0, 0.0), 0, 0));
        e.3 += 1;
        if flagged.contains(&lam) {
            continue;
        }
        e.0 += lam - zeta;
        e.1 += v;
        e.2 += 1;
    }
    if let Some((k, _)) = shells.iter().find(|(_, s)| s.2 == 0) {
        return Err(Error::InsufficientData(format!("every sample in shell 2^{k} is flagged")));
    }
    if shells.is_empty() {
        return Err(Error::InsufficientData("no samples".into()));
    }
    let means: Vec<(C64, C64)> = shells
        .values()
        .take(4)
        .map(|s| (s.0 / s.2 as f64, s.1 / s.2 as f64))
        .collect();
    let x: Vec<C64> = means.iter().map(|m| m.0).collect();
    let y: Vec<C64> = means.iter().map(|m| m.1).collect();
    Ok(complex_polyfit(&x, &y, means.len().min(3))?[0])
}
