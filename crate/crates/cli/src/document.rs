//! JSON shapes for algebras, morphisms, groupoids and quantale matrices.
//!
//! Multiplications are stored as `dim` rows of `dim²` entries, column
//! `a·dim + b` holding the coefficient of the product `e_a · e_b`.

use cpstar_core::quantale::{ExtendedReal, Lukasiewicz, UnitInterval};
use cpstar_core::rel::Groupoid;
use cpstar_core::{FrobeniusAlgebra, Scalar, Tensor};
use num_complex::Complex64 as C;
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

use crate::CliError;

/// Scalars with a JSON encoding.
pub trait Entry: Scalar {
    fn encode(self) -> Value;
    fn decode(v: &Value) -> Result<Self, String>;
}

fn number(v: &Value) -> Result<f64, String> {
    v.as_f64().filter(|x| x.is_finite()).ok_or_else(|| format!("expected a finite number, got {v}"))
}

fn in_unit_interval(v: &Value) -> Result<f64, String> {
    let x = number(v)?;
    if (0.0..=1.0).contains(&x) {
        Ok(x)
    } else {
        Err(format!("{x} is outside [0, 1]"))
    }
}

impl Entry for C {
    fn encode(self) -> Value {
        json!([self.re, self.im])
    }
    fn decode(v: &Value) -> Result<Self, String> {
        match v.as_array().map(Vec::as_slice) {
            Some([re, im]) => Ok(C::new(number(re)?, number(im)?)),
            _ => Err(format!("expected [re, im], got {v}")),
        }
    }
}

impl Entry for bool {
    fn encode(self) -> Value {
        json!(u8::from(self))
    }
    fn decode(v: &Value) -> Result<Self, String> {
        match v {
            Value::Bool(b) => Ok(*b),
            _ => match v.as_u64() {
                Some(0) => Ok(false),
                Some(1) => Ok(true),
                _ => Err(format!("expected 0 or 1, got {v}")),
            },
        }
    }
}

impl Entry for UnitInterval {
    fn encode(self) -> Value {
        json!(self.0)
    }
    fn decode(v: &Value) -> Result<Self, String> {
        in_unit_interval(v).map(UnitInterval)
    }
}

impl Entry for Lukasiewicz {
    fn encode(self) -> Value {
        json!(self.0)
    }
    fn decode(v: &Value) -> Result<Self, String> {
        in_unit_interval(v).map(Lukasiewicz)
    }
}

impl Entry for ExtendedReal {
    fn encode(self) -> Value {
        if self.0.is_infinite() {
            json!("inf")
        } else {
            json!(self.0)
        }
    }
    fn decode(v: &Value) -> Result<Self, String> {
        if v.as_str() == Some("inf") {
            return Ok(ExtendedReal(f64::INFINITY));
        }
        let x = number(v)?;
        if x >= 0.0 {
            Ok(ExtendedReal(x))
        } else {
            Err(format!("{x} is negative"))
        }
    }
}

pub fn encode_matrix<S: Entry>(t: &Tensor<S>) -> Value {
    let cols = t.cols();
    Value::Array(t.data().chunks(cols.max(1)).take(t.rows()).map(|row| row.iter().map(|x| x.encode()).collect()).collect())
}

pub fn decode_matrix<S: Entry>(v: &Value, rows: usize, cols: usize, what: &str) -> Result<Vec<S>, String> {
    let outer = v.as_array().ok_or_else(|| format!("{what}: expected an array of rows"))?;
    if outer.len() != rows {
        return Err(format!("{what}: expected {rows} rows, got {}", outer.len()));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for (i, row) in outer.iter().enumerate() {
        let row = row.as_array().ok_or_else(|| format!("{what}: row {i} is not an array"))?;
        if row.len() != cols {
            return Err(format!("{what}: row {i} has {} entries, expected {cols}", row.len()));
        }
        for x in row {
            data.push(S::decode(x).map_err(|e| format!("{what}: {e}"))?);
        }
    }
    Ok(data)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AlgebraDocument {
    pub model: String,
    pub dim: usize,
    pub mult: Value,
    pub unit: Value,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub normaliser: Option<Value>,
    #[serde(default, skip_serializing_if = "Map::is_empty")]
    pub metadata: Map<String, Value>,
}

impl AlgebraDocument {
    pub fn from_algebra<S: Entry>(a: &FrobeniusAlgebra<S>, label: Option<&str>) -> Self {
        let mut metadata = Map::new();
        if let Some(l) = label {
            metadata.insert("label".into(), json!(l));
        }
        AlgebraDocument {
            model: S::model().name(),
            dim: a.dim(),
            mult: encode_matrix(a.mult()),
            unit: Value::Array(a.unit().data().iter().map(|x| x.encode()).collect()),
            normaliser: a.normaliser().map(encode_matrix),
            metadata,
        }
    }

    pub fn to_algebra<S: Entry>(&self) -> Result<FrobeniusAlgebra<S>, CliError> {
        if self.model != S::model().name() {
            return Err(CliError::invalid(format!("expected model {}, got {}", S::model(), self.model)));
        }
        let d = self.dim;
        let mult = decode_matrix(&self.mult, d, d * d, "mult")?;
        let unit = decode_matrix(&Value::Array(vec![self.unit.clone()]), 1, d, "unit")?;
        let normaliser = match &self.normaliser {
            Some(z) => Some(Tensor::new(&[d], &[d], decode_matrix(z, d, d, "normaliser")?)?),
            None => None,
        };
        Ok(FrobeniusAlgebra::new(Tensor::new(&[d], &[d, d], mult)?, Tensor::new(&[d], &[], unit)?, normaliser)?)
    }
}

/// An algebra in whichever model its document names.
#[derive(Debug, Clone)]
pub enum AnyAlgebra {
    Complex(FrobeniusAlgebra<C>),
    Boolean(FrobeniusAlgebra<bool>),
    UnitInterval(FrobeniusAlgebra<UnitInterval>),
    ExtendedReal(FrobeniusAlgebra<ExtendedReal>),
    Lukasiewicz(FrobeniusAlgebra<Lukasiewicz>),
}

impl AnyAlgebra {
    pub fn from_document(doc: &AlgebraDocument) -> Result<Self, CliError> {
        Ok(match doc.model.as_str() {
            "complex" => AnyAlgebra::Complex(doc.to_algebra()?),
            "boolean" => AnyAlgebra::Boolean(doc.to_algebra()?),
            "quantale:unit-interval" => AnyAlgebra::UnitInterval(doc.to_algebra()?),
            "quantale:extended-real" => AnyAlgebra::ExtendedReal(doc.to_algebra()?),
            "quantale:lukasiewicz" => AnyAlgebra::Lukasiewicz(doc.to_algebra()?),
            other => return Err(CliError::invalid(format!("unknown model `{other}`"))),
        })
    }

    pub fn into_complex(self) -> Result<FrobeniusAlgebra<C>, CliError> {
        match self {
            AnyAlgebra::Complex(a) => Ok(a),
            _ => Err(CliError::invalid("this command needs a complex algebra")),
        }
    }

    pub fn into_boolean(self) -> Result<FrobeniusAlgebra<bool>, CliError> {
        match self {
            AnyAlgebra::Boolean(a) => Ok(a),
            _ => Err(CliError::invalid("this command needs a boolean algebra")),
        }
    }
}

/// Groupoid tables: `comp[g][f]` is `g ∘ f` or null when not composable.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupoidDocument {
    pub objects: usize,
    pub dom: Vec<usize>,
    pub cod: Vec<usize>,
    pub ids: Vec<usize>,
    pub inv: Vec<usize>,
    pub comp: Vec<Vec<Option<usize>>>,
}

impl GroupoidDocument {
    pub fn from_groupoid(g: &Groupoid) -> Self {
        let n = g.n_morphisms();
        GroupoidDocument {
            objects: g.n_objects(),
            dom: (0..n).map(|f| g.dom(f)).collect(),
            cod: (0..n).map(|f| g.cod(f)).collect(),
            ids: g.ids().to_vec(),
            inv: (0..n).map(|f| g.inv(f)).collect(),
            comp: (0..n).map(|h| (0..n).map(|f| g.comp(h, f)).collect()).collect(),
        }
    }

    pub fn to_groupoid(&self) -> Result<Groupoid, CliError> {
        let n = self.dom.len();
        if self.comp.len() != n || self.comp.iter().any(|row| row.len() != n) {
            return Err(CliError::invalid(format!("comp must be {n} x {n}")));
        }
        let comp = self.comp.iter().flatten().copied().collect();
        Ok(Groupoid::new(self.objects, self.dom.clone(), self.cod.clone(), comp, self.inv.clone(), self.ids.clone())?)
    }
}

/// A matrix over a quantale, for collapsing to a relation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixDocument {
    pub model: String,
    pub entries: Value,
}

/// A map between two objects, each given by preset name or inline document.
#[derive(Debug, Clone, Deserialize)]
pub struct MorphismDocument {
    #[serde(default)]
    pub dom: Option<ObjectRef>,
    #[serde(default)]
    pub cod: Option<ObjectRef>,
    pub map: Value,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(untagged)]
pub enum ObjectRef {
    Preset(String),
    Inline(AlgebraDocument),
}

#[cfg(test)]
mod tests {
    use super::*;
    use cpstar_core::random::{random_unitary_tensor, rng};

    fn round_trip<S: Entry>(a: &FrobeniusAlgebra<S>) -> FrobeniusAlgebra<S> {
        let text = serde_json::to_string(&AlgebraDocument::from_algebra(a, Some("x"))).unwrap();
        let doc: AlgebraDocument = serde_json::from_str(&text).unwrap();
        doc.to_algebra().unwrap()
    }

    #[test]
    fn complex_round_trip_is_bit_exact() {
        let mut g = rng(3);
        for sizes in [&[1usize, 2][..], &[3], &[1, 1, 1]] {
            let a = FrobeniusAlgebra::block_model(sizes).unwrap();
            let a = a.transport(&random_unitary_tensor(&mut g, a.dim())).unwrap();
            let b = round_trip(&a);
            assert_eq!(a.mult().data(), b.mult().data());
            assert_eq!(a.unit().data(), b.unit().data());
            assert_eq!(a.normaliser().unwrap().data(), b.normaliser().unwrap().data());
        }
    }

    #[test]
    fn exact_models_round_trip() {
        let a = cpstar_core::rel::groupoid_to_algebra(&Groupoid::indiscrete(2)).unwrap();
        assert_eq!(round_trip(&a), a);
        let grid = [ExtendedReal(0.0), ExtendedReal(0.5), ExtendedReal(f64::INFINITY)];
        let t = Tensor::new(&[3], &[], grid.to_vec()).unwrap();
        let v = Value::Array(t.data().iter().map(|x| x.encode()).collect());
        let back: Vec<ExtendedReal> = decode_matrix(&Value::Array(vec![v]), 1, 3, "x").unwrap();
        assert_eq!(back, grid);
    }

    #[test]
    fn malformed_entries_are_rejected() {
        assert!(C::decode(&json!([1.0])).is_err());
        assert!(bool::decode(&json!(2)).is_err());
        assert!(UnitInterval::decode(&json!(1.5)).is_err());
        assert!(ExtendedReal::decode(&json!(-1)).is_err());
        let mut doc = AlgebraDocument::from_algebra(&FrobeniusAlgebra::<C>::pair_of_pants(2), None);
        doc.dim = 3;
        assert!(doc.to_algebra::<C>().is_err());
    }

    #[test]
    fn groupoid_tables_round_trip() {
        let g = Groupoid::indiscrete(2).disjoint_union(&Groupoid::cyclic(3));
        let doc = GroupoidDocument::from_groupoid(&g);
        let text = serde_json::to_string(&doc).unwrap();
        let back: GroupoidDocument = serde_json::from_str(&text).unwrap();
        assert_eq!(GroupoidDocument::from_groupoid(&back.to_groupoid().unwrap()), doc);
    }
}
