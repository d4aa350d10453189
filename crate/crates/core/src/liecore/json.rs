//! Structure-constant JSON files:
//! `{"name", "field", "dim", "basis": [...], "brackets": [{"i", "j", "c": {"k": "scalar"}}]}`
//! with `i < j` only; unlisted pairs bracket to zero.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::algebra::LieAlgebra;
use crate::error::{Error, Result};
use crate::exact::{Field, FieldSpec, PrimeField, Rationals};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BracketEntry {
    pub i: usize,
    pub j: usize,
    pub c: BTreeMap<String, String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub name: String,
    pub field: FieldSpec,
    pub dim: usize,
    pub basis: Vec<String>,
    pub brackets: Vec<BracketEntry>,
}

/// An algebra over whichever field its file declares.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyAlgebra {
    Prime(LieAlgebra<PrimeField>),
    Rational(LieAlgebra<Rationals>),
}

impl AnyAlgebra {
    pub fn name(&self) -> &str {
        match self {
            AnyAlgebra::Prime(l) => l.name(),
            AnyAlgebra::Rational(l) => l.name(),
        }
    }
    pub fn dim(&self) -> usize {
        match self {
            AnyAlgebra::Prime(l) => l.dim(),
            AnyAlgebra::Rational(l) => l.dim(),
        }
    }
    pub fn field_spec(&self) -> FieldSpec {
        match self {
            AnyAlgebra::Prime(l) => l.field().spec(),
            AnyAlgebra::Rational(l) => l.field().spec(),
        }
    }
    pub fn to_file(&self) -> AlgebraFile {
        match self {
            AnyAlgebra::Prime(l) => to_file(l),
            AnyAlgebra::Rational(l) => to_file(l),
        }
    }
}

impl From<LieAlgebra<PrimeField>> for AnyAlgebra {
    fn from(l: LieAlgebra<PrimeField>) -> Self {
        AnyAlgebra::Prime(l)
    }
}

impl From<LieAlgebra<Rationals>> for AnyAlgebra {
    fn from(l: LieAlgebra<Rationals>) -> Self {
        AnyAlgebra::Rational(l)
    }
}

pub fn to_file<F: Field>(l: &LieAlgebra<F>) -> AlgebraFile {
    let f = l.field();
    let brackets = l
        .nonzero_brackets()
        .map(|(i, j, row)| BracketEntry {
            i,
            j,
            c: row.iter().map(|(k, x)| (k.to_string(), f.format(x))).collect(),
        })
        .collect();
    AlgebraFile {
        name: l.name().to_string(),
        field: f.spec(),
        dim: l.dim(),
        basis: l.labels().to_vec(),
        brackets,
    }
}

pub fn to_json<F: Field>(l: &LieAlgebra<F>) -> String {
    serde_json::to_string_pretty(&to_file(l)).expect("algebra files always serialize")
}

fn build<F: Field>(field: F, file: &AlgebraFile) -> Result<LieAlgebra<F>> {
    if file.basis.len() != file.dim {
        return Err(Error::Parse(format!("dim {} but {} basis names", file.dim, file.basis.len())));
    }
    let mut entries = Vec::with_capacity(file.brackets.len());
    for b in &file.brackets {
        if b.i >= b.j {
            return Err(Error::Parse(format!("bracket entry ({}, {}) must have i < j", b.i, b.j)));
        }
        let mut row = Vec::with_capacity(b.c.len());
        for (k, v) in &b.c {
            let k: usize = k.parse().map_err(|_| Error::Parse(format!("bad coordinate index {k:?}")))?;
            if k >= file.dim {
                return Err(Error::Parse(format!("coordinate index {k} out of range")));
            }
            row.push((k, field.parse(v)?));
        }
        entries.push((b.i, b.j, row));
    }
    LieAlgebra::from_brackets(file.name.clone(), field, file.basis.clone(), entries)
        .map_err(|e| Error::Parse(e.to_string()))
}

pub fn from_file(file: &AlgebraFile) -> Result<AnyAlgebra> {
    match file.field {
        FieldSpec::Prime { p } => Ok(AnyAlgebra::Prime(build(PrimeField::new(p)?, file)?)),
        FieldSpec::Rational => Ok(AnyAlgebra::Rational(build(Rationals, file)?)),
    }
}

pub fn from_json(text: &str) -> Result<AnyAlgebra> {
    let file: AlgebraFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    from_file(&file)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_sl2() {
        let text = r#"{"name":"sl2","field":{"kind":"rational"},"dim":3,"basis":["e","h","f"],
            "brackets":[{"i":0,"j":1,"c":{"0":"-2"}},{"i":0,"j":2,"c":{"1":"1"}},{"i":1,"j":2,"c":{"2":"-2"}}]}"#;
        let a = from_json(text).unwrap();
        assert_eq!(a.dim(), 3);
        let AnyAlgebra::Rational(l) = &a else { panic!() };
        assert!(l.validate().passed());
        assert_eq!(from_file(&a.to_file()).unwrap(), a);
    }

    #[test]
    fn malformed_inputs() {
        assert!(from_json("{").is_err());
        let bad_order = r#"{"name":"x","field":{"kind":"prime","p":5},"dim":2,"basis":["a","b"],
            "brackets":[{"i":1,"j":0,"c":{"0":"1"}}]}"#;
        assert!(from_json(bad_order).is_err());
        let bad_field = r#"{"name":"x","field":{"kind":"prime","p":4},"dim":1,"basis":["a"],"brackets":[]}"#;
        assert!(from_json(bad_field).is_err());
        let bad_dim = r#"{"name":"x","field":{"kind":"rational"},"dim":2,"basis":["a"],"brackets":[]}"#;
        assert!(from_json(bad_dim).is_err());
    }
}
