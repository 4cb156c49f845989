//! Loading of field descriptions and parsing of elements and ideals.
//!
//! Field descriptions are JSON documents carrying the minimal polynomial,
//! the integral basis in power-basis coordinates, the declared discriminant
//! and the ingested narrow-class representatives. Four descriptions ship
//! with the crate: ℚ, ℚ(√2), ℚ(√3) and ℚ(√5).

use std::path::Path;
use std::sync::Arc;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::numberfield::{FieldElement, FractionalIdeal, NumberField, Rat};
use crate::{Error, Result};

/// JSON schema of a field description file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldSpec {
    pub name: String,
    pub disc: i64,
    /// Monic minimal polynomial, ascending integer coefficients.
    pub min_poly: Vec<i64>,
    /// Integral basis rows in power-basis coordinates, rationals as strings.
    pub integral_basis: Vec<Vec<String>>,
    #[serde(default)]
    pub narrow_class: Vec<NarrowClassSpec>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NarrowClassSpec {
    pub label: String,
    /// Generators of the representative ideal, elements in integral-basis
    /// coordinates.
    pub ideal_generators: Vec<Vec<String>>,
}

/// A loaded field together with its ingested narrow-class representatives.
#[derive(Debug, Clone)]
pub struct FieldData {
    pub field: Arc<NumberField>,
    pub narrow_classes: Vec<NarrowClassRep>,
}

#[derive(Debug, Clone)]
pub struct NarrowClassRep {
    pub label: String,
    pub ideal: FractionalIdeal,
}

pub fn parse_rational(s: &str) -> Result<Rat> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational numerator: {s:?}")))?;
    let d: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad rational denominator: {s:?}")))?;
    if d == BigInt::from(0) {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(Rat::new(n, d))
}

/// Parse an element from comma-separated rational coordinates over the
/// integral basis, e.g. `"-1,2"` for √5 = −1 + 2φ in ℚ(√5).
pub fn parse_element(field: &Arc<NumberField>, s: &str) -> Result<FieldElement> {
    let coords: Result<Vec<Rat>> = s.split(',').map(parse_rational).collect();
    FieldElement::from_coords(field, coords?)
}

/// Parse an ideal from semicolon-separated generator elements, e.g.
/// `"2,0; 0,1"` for the ideal (2, √2).
pub fn parse_ideal(field: &Arc<NumberField>, s: &str) -> Result<FractionalIdeal> {
    let gens: Result<Vec<FieldElement>> = s
        .split(';')
        .filter(|part| !part.trim().is_empty())
        .map(|part| parse_element(field, part))
        .collect();
    let gens = gens?;
    if gens.is_empty() {
        return Err(Error::Parse("ideal needs at least one generator".into()));
    }
    FractionalIdeal::from_generators(field.clone(), &gens)
}

pub fn from_spec(spec: &FieldSpec) -> Result<FieldData> {
    let min_poly: Vec<BigInt> = spec.min_poly.iter().map(|&c| BigInt::from(c)).collect();
    let basis: Result<Vec<Vec<Rat>>> = spec
        .integral_basis
        .iter()
        .map(|row| row.iter().map(|s| parse_rational(s)).collect())
        .collect();
    let expected = BigInt::from(spec.disc);
    let field = NumberField::new(spec.name.clone(), min_poly, basis?, Some(&expected))?;
    let mut narrow_classes = Vec::new();
    for nc in &spec.narrow_class {
        let gens: Result<Vec<FieldElement>> = nc
            .ideal_generators
            .iter()
            .map(|coords| {
                let parsed: Result<Vec<Rat>> = coords.iter().map(|s| parse_rational(s)).collect();
                FieldElement::from_coords(&field, parsed?)
            })
            .collect();
        let ideal = FractionalIdeal::from_generators(field.clone(), &gens?)?;
        if ideal.is_zero() || !ideal.is_integral() {
            return Err(Error::InvalidField(format!(
                "narrow class representative {:?} must be a nonzero integral ideal",
                nc.label
            )));
        }
        narrow_classes.push(NarrowClassRep {
            label: nc.label.clone(),
            ideal,
        });
    }
    if narrow_classes.is_empty() {
        narrow_classes.push(NarrowClassRep {
            label: "1".into(),
            ideal: FractionalIdeal::one(field.clone()),
        });
    }
    if narrow_classes[0].ideal != FractionalIdeal::one(field.clone()) {
        return Err(Error::InvalidField(
            "first narrow class representative must be the unit ideal".into(),
        ));
    }
    Ok(FieldData {
        field,
        narrow_classes,
    })
}

pub fn from_json(json: &str) -> Result<FieldData> {
    let spec: FieldSpec = serde_json::from_str(json)?;
    from_spec(&spec)
}

pub fn from_file(path: &Path) -> Result<FieldData> {
    let text = std::fs::read_to_string(path)?;
    from_json(&text)
}

const BUILTIN: &[(&str, &str)] = &[
    ("Q", include_str!("../data/fields/q.json")),
    ("Qsqrt2", include_str!("../data/fields/qsqrt2.json")),
    ("Qsqrt3", include_str!("../data/fields/qsqrt3.json")),
    ("Qsqrt5", include_str!("../data/fields/qsqrt5.json")),
];

pub fn builtin_names() -> Vec<&'static str> {
    BUILTIN.iter().map(|(n, _)| *n).collect()
}

/// Load one of the built-in fields by name (case-insensitive).
pub fn builtin(name: &str) -> Result<FieldData> {
    for (n, json) in BUILTIN {
        if n.eq_ignore_ascii_case(name) {
            return from_json(json);
        }
    }
    Err(Error::Parse(format!(
        "unknown field {name:?}; built-ins are {:?}",
        builtin_names()
    )))
}

/// Resolve a CLI `--field` argument: a built-in name or a path to a JSON
/// description.
pub fn load(arg: &str) -> Result<FieldData> {
    for (n, json) in BUILTIN {
        if n.eq_ignore_ascii_case(arg) {
            return from_json(json);
        }
    }
    from_file(Path::new(arg))
}
