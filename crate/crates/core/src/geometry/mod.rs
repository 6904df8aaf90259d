pub mod capacity;
pub mod covering;
pub mod diagnostic;
pub mod lens;
pub mod stolz;

use crate::error::Result;
use crate::measure::{ComplexMeasure, LensHarmonic, MeasureComponent};

/// Harmonic measure of the lens `D ∩ {Re z < c}` at the origin.
pub fn lens_harmonic_measure(c: f64) -> Result<ComplexMeasure> {
    ComplexMeasure::single(MeasureComponent::LensHarmonic(LensHarmonic::harmonic(c)?))
}
