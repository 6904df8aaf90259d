//! Textual measure files: JSON with a top-level `components` list.

use std::path::Path;

use serde_json::Value;

use super::ComplexMeasure;
use crate::error::{Error, Result};

const KNOWN_TYPES: [&str; 4] = ["atom", "circle_fourier", "bergman", "lens_harmonic"];

/// Parse a measure file. `origin` names the source in diagnostics.
pub fn parse_measure(text: &str, origin: &str) -> Result<ComplexMeasure> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse {
        path: format!("{origin}:{}:{}", e.line(), e.column()),
        message: e.to_string(),
    })?;
    // Unknown component types are a capability gap, not a syntax error.
    if let Some(list) = value.get("components").and_then(Value::as_array) {
        for (i, comp) in list.iter().enumerate() {
            if let Some(t) = comp.get("type").and_then(Value::as_str) {
                if !KNOWN_TYPES.contains(&t) {
                    return Err(Error::Capability(format!(
                        "{origin}: components[{i}]: unknown component type {t:?}"
                    )));
                }
            }
        }
    }
    let measure: ComplexMeasure = serde_path_to_error(value, origin)?;
    measure.validate()?;
    Ok(measure)
}

fn serde_path_to_error(value: Value, origin: &str) -> Result<ComplexMeasure> {
    // Re-run component by component so the diagnostic names the field.
    if let Some(list) = value.get("components").and_then(Value::as_array) {
        for (i, comp) in list.iter().enumerate() {
            if let Err(e) = serde_json::from_value::<super::MeasureComponent>(comp.clone()) {
                return Err(Error::Parse {
                    path: format!("{origin}: components[{i}]"),
                    message: e.to_string(),
                });
            }
        }
    }
    serde_json::from_value(value).map_err(|e| Error::Parse {
        path: origin.to_string(),
        message: e.to_string(),
    })
}

pub fn read_measure(path: &Path) -> Result<ComplexMeasure> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Parse {
        path: path.display().to_string(),
        message: e.to_string(),
    })?;
    parse_measure(&text, &path.display().to_string())
}

/// Serialize with shortest round-trip float formatting, so that
/// `parse(serialize(parse(text)))` equals `parse(text)` bit for bit.
pub fn serialize_measure(measure: &ComplexMeasure) -> String {
    serde_json::to_string_pretty(measure).expect("measure serialization is infallible")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::{LensHarmonic, MeasureComponent};
    use crate::C64;

    #[test]
    fn parses_examples() {
        let m = parse_measure(r#"{"components":[{"type":"circle_fourier","coeffs":{"0":[1,0]}}]}"#, "t").unwrap();
        assert_eq!(m, ComplexMeasure::arclength());
        let a5 = parse_measure(r#"{"components":[{"type":"bergman","alpha":5}]}"#, "t").unwrap();
        assert_eq!(a5.moment(0, 0).unwrap(), C64::new(1.0, 0.0));
        let zero = parse_measure(r#"{"components":[]}"#, "t").unwrap();
        assert!(zero.is_zero());
    }

    #[test]
    fn errors_are_classified() {
        let unknown = parse_measure(r#"{"components":[{"type":"cantor"}]}"#, "f.json");
        assert!(matches!(unknown, Err(Error::Capability(_))));
        let bad = parse_measure(r#"{"components":[{"type":"atom","point":[2]}]}"#, "f.json");
        match bad {
            Err(Error::Parse { path, .. }) => assert!(path.contains("components[0]")),
            other => panic!("{other:?}"),
        }
        let syntax = parse_measure("{\n\"components\": [,]}", "f.json");
        match syntax {
            Err(Error::Parse { path, .. }) => assert!(path.starts_with("f.json:2:")),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn round_trip_is_exact() {
        let lens = LensHarmonic::harmonic(0.3)
            .unwrap()
            .with_weight(crate::measure::GWeight {
                a: C64::new(0.9, 0.0),
                alpha: 5,
            })
            .with_samples(5, 10.0)
            .unwrap();
        let m = ComplexMeasure::new(vec![
            MeasureComponent::atom(C64::new(0.1, 1.0 / 3.0), C64::new(std::f64::consts::PI, -1e-300)).unwrap(),
            MeasureComponent::circle([(-1, C64::new(0.5, 0.0)), (0, C64::new(1.0, 0.0)), (1, C64::new(0.5, 0.0))]),
            MeasureComponent::bergman(5),
            MeasureComponent::LensHarmonic(lens),
        ])
        .unwrap();
        let text = serialize_measure(&m);
        let back = parse_measure(&text, "mem").unwrap();
        assert_eq!(back, m);
        assert_eq!(serialize_measure(&back), text);
    }
}
