//! Greedy 3r-covering selection and the covering-based size proxy for
//! sampled exceptional sets.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::C64;

/// Open disk `B(center, radius)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Disk {
    pub center: C64,
    pub radius: f64,
}

impl Disk {
    pub fn new(center: C64, radius: f64) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(Error::Domain(format!("disk radius {radius} must be positive")));
        }
        Ok(Self { center, radius })
    }

    pub fn contains(&self, z: C64) -> bool {
        (z - self.center).norm() < self.radius
    }

    /// Open disks are disjoint iff the centers are at least `r1 + r2` apart.
    pub fn disjoint(&self, other: &Disk) -> bool {
        (self.center - other.center).norm() >= self.radius + other.radius
    }

    pub fn dilate(&self, factor: f64) -> Disk {
        Disk {
            center: self.center,
            radius: self.radius * factor,
        }
    }

    /// True when the closed disk `self` lies in the closed disk `outer`.
    pub fn inside(&self, outer: &Disk) -> bool {
        (self.center - outer.center).norm() + self.radius <= outer.radius
    }
}

/// Greedy Vitali selection: scan disks by decreasing radius (ties in input
/// order) and keep each one disjoint from everything kept so far.
///
/// Every input disk meets a kept disk of radius at least its own, so it lies
/// in that disk dilated by 3.
pub fn vitali_3r_select(disks: &[Disk]) -> Result<Vec<Disk>> {
    if disks.is_empty() {
        return Err(Error::Precondition("vitali selection needs at least one disk".into()));
    }
    if let Some(bad) = disks.iter().find(|d| !(d.radius > 0.0)) {
        return Err(Error::Domain(format!("disk radius {} must be positive", bad.radius)));
    }
    let mut order: Vec<usize> = (0..disks.len()).collect();
    // Stable sort keeps input order among equal radii.
    order.sort_by(|&a, &b| disks[b].radius.total_cmp(&disks[a].radius));
    let mut kept: Vec<Disk> = Vec::new();
    for i in order {
        let d = disks[i];
        if kept.iter().all(|k| k.disjoint(&d)) {
            kept.push(d);
        }
    }
    Ok(kept)
}

/// Sum of the radii of the tripled selected disks, seeding a disk of radius
/// `scale` at every point. An upper-bound proxy for the size of a sampled set
/// at resolution `scale`.
pub fn exceptional_cover_estimate(points: &[C64], scale: f64) -> Result<f64> {
    if !(scale > 0.0) {
        return Err(Error::Domain(format!("scale {scale} must be positive")));
    }
    if points.is_empty() {
        return Ok(0.0);
    }
    let seeds: Vec<Disk> = points
        .iter()
        .map(|&c| Disk {
            center: c,
            radius: scale,
        })
        .collect();
    let kept = vitali_3r_select(&seeds)?;
    Ok(kept.iter().map(|d| 3.0 * d.radius).sum())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn disk(x: f64, r: f64) -> Disk {
        Disk::new(C64::new(x, 0.0), r).unwrap()
    }

    #[test]
    fn hand_traced_selection() {
        let input = [disk(0.0, 1.0), disk(1.5, 1.0), disk(3.0, 1.0)];
        let kept = vitali_3r_select(&input).unwrap();
        assert_eq!(kept, vec![disk(0.0, 1.0), disk(3.0, 1.0)]);
        assert!(input[1].inside(&kept[0].dilate(3.0)));
    }

    #[test]
    fn single_disk_is_kept() {
        let d = disk(0.3, 0.2);
        assert_eq!(vitali_3r_select(&[d]).unwrap(), vec![d]);
    }

    #[test]
    fn larger_disks_win() {
        let kept = vitali_3r_select(&[disk(0.0, 0.5), disk(0.6, 1.0)]).unwrap();
        assert_eq!(kept, vec![disk(0.6, 1.0)]);
    }

    #[test]
    fn rejects_bad_radius() {
        let bad = Disk {
            center: C64::new(0.0, 0.0),
            radius: 0.0,
        };
        assert!(matches!(vitali_3r_select(&[bad]), Err(Error::Domain(_))));
        assert!(vitali_3r_select(&[]).is_err());
    }

    #[test]
    fn cover_estimate_examples() {
        assert_eq!(exceptional_cover_estimate(&[], 0.1).unwrap(), 0.0);
        assert!((exceptional_cover_estimate(&[C64::new(0.2, 0.0)], 0.1).unwrap() - 0.3).abs() < 1e-15);
        let pts: Vec<C64> = (0..7).map(|k| C64::new(k as f64, 0.0)).collect();
        assert!((exceptional_cover_estimate(&pts, 0.01).unwrap() - 3.0 * 7.0 * 0.01).abs() < 1e-15);
    }
}
