//! JSON array documents and text-grid rendering.
//!
//! Array document:
//! `{"dims":[n1,n2],"ring":{"kind":"Z"|"Q"|"Zmod","modulus":m},"values":[[...],...]}`
//! where `values[j][i]` is the value at column `i`, row `j`. Integers and
//! residues are JSON numbers (or decimal strings for large integers),
//! rationals are strings `"p/q"`.

use std::fmt::Display;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::array::TorusArray;
use crate::error::{Error, Result};
use crate::ring::{format_rational, parse_rational};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RingDoc {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ArrayDoc {
    pub dims: [usize; 2],
    pub ring: RingDoc,
    pub values: Vec<Vec<Value>>,
}

/// A torus array over one of the exchangeable rings.
#[derive(Clone, Debug, PartialEq)]
pub enum AnyArray {
    Z(TorusArray<BigInt>),
    Q(TorusArray<BigRational>),
    /// Residues in `0..modulus`.
    Zmod { modulus: u64, array: TorusArray<u64> },
}

fn rows_of<T>(a: &TorusArray<T>, f: impl Fn(&T) -> Value) -> Vec<Vec<Value>> {
    let (_, n2) = a.dims();
    (0..n2).map(|j| a.row(j).iter().map(&f).collect()).collect()
}

fn int_value(v: &BigInt) -> Value {
    match v.to_i64() {
        Some(x) => Value::from(x),
        None => Value::from(v.to_string()),
    }
}

fn parse_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("not an integer: {n}"))),
        Value::String(s) => s.trim().parse().map_err(|_| Error::Parse(format!("not an integer: {s:?}"))),
        other => Err(Error::Parse(format!("not an integer: {other}"))),
    }
}

fn parse_rat(v: &Value) -> Result<BigRational> {
    match v {
        Value::String(s) => parse_rational(s).ok_or_else(|| Error::Parse(format!("not a rational: {s:?}"))),
        other => parse_int(other).map(BigRational::from_integer),
    }
}

impl AnyArray {
    pub fn dims(&self) -> (usize, usize) {
        match self {
            AnyArray::Z(a) => a.dims(),
            AnyArray::Q(a) => a.dims(),
            AnyArray::Zmod { array, .. } => array.dims(),
        }
    }

    pub fn to_doc(&self) -> ArrayDoc {
        let (n1, n2) = self.dims();
        let (ring, values) = match self {
            AnyArray::Z(a) => (RingDoc { kind: "Z".into(), modulus: None }, rows_of(a, int_value)),
            AnyArray::Q(a) => (
                RingDoc { kind: "Q".into(), modulus: None },
                rows_of(a, |r| Value::from(format_rational(r))),
            ),
            AnyArray::Zmod { modulus, array } => (
                RingDoc { kind: "Zmod".into(), modulus: Some(*modulus) },
                rows_of(array, |&r| Value::from(r)),
            ),
        };
        ArrayDoc { dims: [n1, n2], ring, values }
    }

    pub fn from_doc(doc: &ArrayDoc) -> Result<Self> {
        let [n1, n2] = doc.dims;
        if doc.values.len() != n2 || doc.values.iter().any(|r| r.len() != n1) {
            return Err(Error::Parse(format!("values do not match dims {n1}x{n2}")));
        }
        let flat = doc.values.iter().flatten();
        match doc.ring.kind.as_str() {
            "Z" => Ok(AnyArray::Z(TorusArray::new(n1, n2, flat.map(parse_int).collect::<Result<_>>()?)?)),
            "Q" => Ok(AnyArray::Q(TorusArray::new(n1, n2, flat.map(parse_rat).collect::<Result<_>>()?)?)),
            "Zmod" => {
                let modulus = doc
                    .ring
                    .modulus
                    .filter(|&m| m >= 2)
                    .ok_or_else(|| Error::Parse("Zmod needs a modulus >= 2".into()))?;
                let m = BigInt::from(modulus);
                let values = flat
                    .map(|v| {
                        let x = parse_int(v)?;
                        let r = ((x % &m) + &m) % &m;
                        Ok(r.to_u64().expect("residue fits"))
                    })
                    .collect::<Result<_>>()?;
                Ok(AnyArray::Zmod { modulus, array: TorusArray::new(n1, n2, values)? })
            }
            other => Err(Error::Parse(format!("unknown ring kind {other:?}"))),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_doc()).expect("serializable")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let doc: ArrayDoc = serde_json::from_str(s).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_doc(&doc)
    }
}

/// Legend line printed above every text grid.
pub const GRID_LEGEND: &str = "# grid: row j = 0 at top, j increasing downward; column i increasing rightward";

/// Renders a torus array as a right-aligned text grid, one row per `j`.
pub fn render_grid<T>(a: &TorusArray<T>, fmt: impl Fn(&T) -> String) -> String {
    let (_, n2) = a.dims();
    let cells: Vec<Vec<String>> = (0..n2).map(|j| a.row(j).iter().map(&fmt).collect()).collect();
    let width = cells.iter().flatten().map(|s| s.chars().count()).max().unwrap_or(1);
    let mut out = String::from(GRID_LEGEND);
    out.push('\n');
    for row in cells {
        let line: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
        out.push_str(&line.join(" "));
        out.push('\n');
    }
    out
}

/// Grid rendering using `Display`.
pub fn render_display_grid<T: Display>(a: &TorusArray<T>) -> String {
    render_grid(a, |v| v.to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_z_round_trip() {
        let a = TorusArray::from_fn(3, 2, |i, j| BigInt::from(i - 2 * j));
        let any = AnyArray::Z(a);
        let s = any.to_json();
        assert_eq!(s, r#"{"dims":[3,2],"ring":{"kind":"Z"},"values":[[0,1,2],[-2,-1,0]]}"#);
        assert_eq!(AnyArray::from_json(&s).unwrap(), any);
    }

    #[test]
    fn json_q_and_zmod() {
        let s = r#"{"dims":[2,1],"ring":{"kind":"Q"},"values":[["1/2", 3]]}"#;
        let AnyArray::Q(a) = AnyArray::from_json(s).unwrap() else { panic!() };
        assert_eq!(a.values()[0], BigRational::new(1.into(), 2.into()));
        let s = r#"{"dims":[2,1],"ring":{"kind":"Zmod","modulus":9},"values":[[-1, 10]]}"#;
        let any = AnyArray::from_json(s).unwrap();
        let AnyArray::Zmod { modulus, array } = &any else { panic!() };
        assert_eq!((*modulus, array.values()), (9, &[8u64, 1][..]));
        assert!(any.to_json().contains(r#""modulus":9"#));
    }

    #[test]
    fn json_errors() {
        assert!(AnyArray::from_json(r#"{"dims":[2,2],"ring":{"kind":"Z"},"values":[[1,2]]}"#).is_err());
        assert!(AnyArray::from_json(r#"{"dims":[1,1],"ring":{"kind":"R"},"values":[[1]]}"#).is_err());
        assert!(AnyArray::from_json(r#"{"dims":[1,1],"ring":{"kind":"Zmod"},"values":[[1]]}"#).is_err());
        assert!(AnyArray::from_json(r#"{"dims":[1,1],"ring":{"kind":"Q"},"values":[["1/0"]]}"#).is_err());
    }

    #[test]
    fn grid_layout() {
        let a = TorusArray::from_fn(3, 2, |i, j| i + 10 * j);
        let g = render_display_grid(&a);
        let lines: Vec<&str> = g.lines().collect();
        assert_eq!(lines[0], GRID_LEGEND);
        assert_eq!(lines[1], " 0  1  2");
        assert_eq!(lines[2], "10 11 12");
    }
}
