//! The 26-entry table of canonical semidirect products, its JSON form, and
//! the label arithmetic (lookup by normal-form data, duality pairing).
//!
//! Labels are positional: L5.1 is the five-dimensional entry, L4.1..L4.6 the
//! four-dimensional ones, L3.1..L3.12 and L2.1..L2.7 follow, in table order.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::geom::Sym2;
use crate::mat::Mat2;
use crate::orbit::EtaType;
use crate::subalgebra::{normal_form_generators, Family};

/// A positional label: dimension block and 1-based index within it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelId {
    pub dim: u8,
    pub index: u8,
}

impl LabelId {
    pub const fn new(dim: u8, index: u8) -> Self {
        Self { dim, index }
    }
}

impl fmt::Display for LabelId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L{}.{}", self.dim, self.index)
    }
}

impl FromStr for LabelId {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let body = s
            .strip_prefix('L')
            .ok_or_else(|| Error::BadParams(format!("label must look like L3.4, got {s:?}")))?;
        let (dim, index) = body
            .split_once('.')
            .ok_or_else(|| Error::BadParams(format!("label must look like L3.4, got {s:?}")))?;
        let dim: u8 = dim
            .parse()
            .map_err(|_| Error::BadParams(format!("bad label dimension in {s:?}")))?;
        let index: u8 = index
            .parse()
            .map_err(|_| Error::BadParams(format!("bad label index in {s:?}")))?;
        let id = LabelId { dim, index };
        if catalog().iter().any(|e| e.id == id) {
            Ok(id)
        } else {
            Err(Error::BadParams(format!("unknown label {s}")))
        }
    }
}

impl Serialize for LabelId {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for LabelId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// Range and default of a continuous family parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamSpec {
    pub name: &'static str,
    pub default: f64,
    pub min: Option<f64>,
    pub max: Option<f64>,
}

impl ParamSpec {
    pub fn contains(&self, value: f64) -> bool {
        value.is_finite()
            && self.min.is_none_or(|m| value >= m)
            && self.max.is_none_or(|m| value <= m)
    }
}

const ALPHA: ParamSpec = ParamSpec {
    name: "alpha",
    default: 1.0,
    min: Some(0.0),
    max: None,
};
const LAMBDA: ParamSpec = ParamSpec {
    name: "lambda",
    default: 1.0,
    min: None,
    max: None,
};
const BETA: ParamSpec = ParamSpec {
    name: "beta",
    default: 0.5,
    min: Some(-1.0),
    max: Some(1.0),
};

/// One row of the classification table.
#[derive(Debug, Clone, PartialEq)]
pub struct CatalogEntry {
    pub id: LabelId,
    pub eta: EtaType,
    /// Dimension of the normal factor: 1 for lines, 2 for planes.
    pub dim_sigma: usize,
    /// Line-side subalgebra family; plane entries use its transpose.
    pub family: Family,
    pub param: Option<ParamSpec>,
    pub dim_h: usize,
}

impl CatalogEntry {
    pub fn dim_total(&self) -> usize {
        self.dim_sigma + self.dim_h
    }

    /// Literal generators of the canonical sigma span.
    pub fn sigma_generators(&self) -> Vec<Sym2> {
        match (self.eta, self.dim_sigma) {
            (EtaType::Pos, 1) => vec![Sym2::sigma_pos()],
            (EtaType::Null, 1) => vec![Sym2::sigma_null()],
            (EtaType::Neg, 1) => vec![Sym2::sigma_neg()],
            (EtaType::Pos, 2) => vec![Sym2::new(1.0, 0.0, -1.0), Sym2::new(0.0, 1.0, 0.0)],
            (EtaType::Null, 2) => vec![Sym2::new(0.0, 1.0, 0.0), Sym2::new(0.0, 0.0, 1.0)],
            (EtaType::Neg, 2) => vec![Sym2::new(1.0, 0.0, 0.0), Sym2::new(0.0, 0.0, 1.0)],
            _ => unreachable!("catalog entries have dim_sigma 1 or 2"),
        }
    }

    /// Generators of the canonical algebra at the given parameter value;
    /// plane entries transpose the line-side normal form.
    pub fn h_generators(&self, param: Option<f64>) -> Result<Vec<Mat2>> {
        let param = match (&self.param, param) {
            (Some(spec), Some(v)) => {
                if !spec.contains(v) {
                    return Err(Error::BadParams(format!(
                        "{} = {v} is outside the range of {}",
                        spec.name, self.id
                    )));
                }
                Some(v)
            }
            (Some(spec), None) => Some(spec.default),
            (None, Some(_)) => {
                return Err(Error::BadParams(format!("{} takes no parameter", self.id)))
            }
            (None, None) => None,
        };
        let gens = normal_form_generators(self.family, param)?;
        Ok(if self.dim_sigma == 2 {
            gens.iter().map(Mat2::transpose).collect()
        } else {
            gens
        })
    }

    /// The transpose-dual entry: complementary sigma dimension, same eta and family.
    pub fn dual(&self) -> LabelId {
        lookup(self.eta, 3 - self.dim_sigma, self.family)
            .expect("every entry has a dual")
            .id
    }
}

/// The full table: (1, 6, 12, 7) entries by descending dimension.
pub fn catalog() -> &'static [CatalogEntry] {
    use EtaType::{Neg, Null, Pos};
    use Family::*;
    static TABLE: std::sync::OnceLock<Vec<CatalogEntry>> = std::sync::OnceLock::new();
    TABLE.get_or_init(|| {
        let entry = |dim: u8, index: u8, eta, dim_sigma, family, param, dim_h| CatalogEntry {
            id: LabelId::new(dim, index),
            eta,
            dim_sigma,
            family,
            param,
            dim_h,
        };
        vec![
            entry(5, 1, Null, 2, FullH0, None, 3),
            entry(4, 1, Pos, 2, FullH1, None, 2),
            entry(4, 2, Null, 1, FullH0, None, 3),
            entry(4, 3, Null, 2, PlaneLambda, Some(LAMBDA), 2),
            entry(4, 4, Null, 2, PlaneIY, None, 2),
            entry(4, 5, Null, 2, PlaneIX, None, 2),
            entry(4, 6, Neg, 2, FullHneg1, None, 2),
            entry(3, 1, Pos, 1, FullH1, None, 2),
            entry(3, 2, Pos, 2, RotDil, Some(ALPHA), 1),
            entry(3, 3, Pos, 2, So2, None, 1),
            entry(3, 4, Null, 1, PlaneLambda, Some(LAMBDA), 2),
            entry(3, 5, Null, 1, PlaneIY, None, 2),
            entry(3, 6, Null, 1, PlaneIX, None, 2),
            entry(3, 7, Null, 2, DiagLambda, Some(LAMBDA), 1),
            entry(3, 8, Null, 2, Shear, None, 1),
            entry(3, 9, Null, 2, DilShear, None, 1),
            entry(3, 10, Null, 2, Scalar, None, 1),
            entry(3, 11, Neg, 1, FullHneg1, None, 2),
            entry(3, 12, Neg, 2, DiagBeta, Some(BETA), 1),
            entry(2, 1, Pos, 1, RotDil, Some(ALPHA), 1),
            entry(2, 2, Pos, 1, So2, None, 1),
            entry(2, 3, Null, 1, DiagLambda, Some(LAMBDA), 1),
            entry(2, 4, Null, 1, Shear, None, 1),
            entry(2, 5, Null, 1, DilShear, None, 1),
            entry(2, 6, Null, 1, Scalar, None, 1),
            entry(2, 7, Neg, 1, DiagBeta, Some(BETA), 1),
        ]
    })
}

/// Finds the table row for normal-form data.
pub fn lookup(eta: EtaType, dim_sigma: usize, family: Family) -> Option<&'static CatalogEntry> {
    catalog()
        .iter()
        .find(|e| e.eta == eta && e.dim_sigma == dim_sigma && e.family == family)
}

pub fn entry(id: LabelId) -> Result<&'static CatalogEntry> {
    catalog()
        .iter()
        .find(|e| e.id == id)
        .ok_or_else(|| Error::BadParams(format!("unknown label {id}")))
}

fn num(v: f64) -> String {
    serde_json::to_string(&v).expect("finite float")
}

fn mat_json(m: &Mat2) -> String {
    format!(
        "[[{}, {}], [{}, {}]]",
        num(m.m[0][0]),
        num(m.m[0][1]),
        num(m.m[1][0]),
        num(m.m[1][1])
    )
}

fn mats_json(ms: &[Mat2]) -> String {
    let body: Vec<String> = ms.iter().map(mat_json).collect();
    format!("[{}]", body.join(", "))
}

/// The catalog as canonical JSON (the `table` output and the golden file):
/// one line per entry, matrices as row-major nested arrays. Parameterized
/// entries embed their generators at the schema default.
pub fn catalog_json() -> String {
    let mut out = String::from("[\n");
    let entries = catalog();
    for (i, e) in entries.iter().enumerate() {
        let sigma: Vec<Mat2> = e.sigma_generators().iter().map(|s| s.to_mat2()).collect();
        let h = e.h_generators(None).expect("defaults are in range");
        let schema = match &e.param {
            Some(p) => format!(
                "[{{\"name\": \"{}\", \"default\": {}, \"min\": {}, \"max\": {}}}]",
                p.name,
                num(p.default),
                p.min.map_or("null".to_string(), num),
                p.max.map_or("null".to_string(), num),
            ),
            None => "[]".to_string(),
        };
        out.push_str(&format!(
            "  {{\"id\": \"{}\", \"dim\": {}, \"sigma_generators\": {}, \"h_generators\": {}, \"params_schema\": {}}}{}\n",
            e.id,
            e.dim_total(),
            mats_json(&sigma),
            mats_json(&h),
            schema,
            if i + 1 < entries.len() { "," } else { "" },
        ));
    }
    out.push_str("]\n");
    out
}
