//! Analytic capacity of sets where it is known in closed form.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "snake_case")]
pub enum CapacityShape {
    /// Closed disk of the given radius.
    Disk { radius: f64 },
    /// Line segment of the given length.
    Segment { length: f64 },
}

/// Known values: a disk of radius `r` has capacity `r` (Ahlfors function
/// `r / z`), a segment of length `L` has capacity `L / 4`.
pub fn capacity_primitive(shape: CapacityShape) -> Result<f64> {
    match shape {
        CapacityShape::Disk { radius } if radius > 0.0 => Ok(radius),
        CapacityShape::Segment { length } if length > 0.0 => Ok(length / 4.0),
        other => Err(Error::Domain(format!("capacity parameter must be positive: {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn known_values() {
        assert_eq!(capacity_primitive(CapacityShape::Disk { radius: 2.0 }).unwrap(), 2.0);
        assert_eq!(capacity_primitive(CapacityShape::Segment { length: 4.0 }).unwrap(), 1.0);
        assert!(capacity_primitive(CapacityShape::Disk { radius: -1.0 }).is_err());
    }

    #[test]
    fn homogeneous_of_degree_one() {
        for t in [0.5, 3.0, 17.0] {
            let base = capacity_primitive(CapacityShape::Segment { length: 1.3 }).unwrap();
            let scaled = capacity_primitive(CapacityShape::Segment { length: 1.3 * t }).unwrap();
            assert_eq!(scaled, base * t);
        }
    }
}
