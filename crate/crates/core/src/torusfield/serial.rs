//! JSON form of [`FourierField`]:
//!
//! ```json
//! {"dim": 2, "rank": "scalar", "bandlimit": 1,
//!  "coeffs": [[[-1, 0], 0.5, 0.0], [[1, 0], 0.5, 0.0]]}
//! ```
//!
//! Vector fields add `"components": n` and matrix fields `"shape": [r, c]`;
//! their `coeffs` hold one such list per component (row-major for matrices).
//! A missing conjugate partner is filled in; an inconsistent one is an error.

use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use serde_json::{json, Map, Value};

use super::fourier::{index_of, mode_count, FourierField, Rank};
use crate::error::{Error, Result};

const PARTNER_TOL: f64 = 1e-12;

fn parse_err(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

impl FourierField {
    pub fn to_json(&self) -> Value {
        let mut obj = Map::new();
        obj.insert("dim".into(), json!(self.dim()));
        match self.rank() {
            Rank::Scalar => {
                obj.insert("rank".into(), json!("scalar"));
            }
            Rank::Vector(n) => {
                obj.insert("rank".into(), json!("vector"));
                obj.insert("components".into(), json!(n));
            }
            Rank::Matrix(r, c) => {
                obj.insert("rank".into(), json!("matrix"));
                obj.insert("shape".into(), json!([r, c]));
            }
        }
        obj.insert("bandlimit".into(), json!(self.bandlimit()));
        let mut per_comp: Vec<Vec<Value>> = vec![Vec::new(); self.components()];
        for (c, k, v) in self.terms() {
            per_comp[c].push(json!([k, v.re, v.im]));
        }
        let coeffs = if self.rank() == Rank::Scalar {
            Value::Array(per_comp.swap_remove(0))
        } else {
            Value::Array(per_comp.into_iter().map(Value::Array).collect())
        };
        obj.insert("coeffs".into(), coeffs);
        Value::Object(obj)
    }

    pub fn from_json(value: &Value) -> Result<FourierField> {
        let obj = value
            .as_object()
            .ok_or_else(|| parse_err("field must be a JSON object"))?;
        for key in obj.keys() {
            if !["dim", "rank", "components", "shape", "bandlimit", "coeffs"]
                .contains(&key.as_str())
            {
                return Err(parse_err(format!("unknown field key `{key}`")));
            }
        }
        let uint = |key: &str| -> Result<usize> {
            obj.get(key)
                .and_then(Value::as_u64)
                .map(|v| v as usize)
                .ok_or_else(|| parse_err(format!("`{key}` must be a non-negative integer")))
        };
        let dim = uint("dim")?;
        if dim == 0 {
            return Err(parse_err("`dim` must be positive"));
        }
        let band = uint("bandlimit")?;
        let rank = match obj.get("rank").and_then(Value::as_str) {
            Some("scalar") => Rank::Scalar,
            Some("vector") => Rank::Vector(uint("components").unwrap_or(dim)),
            Some("matrix") => {
                let shape = obj
                    .get("shape")
                    .and_then(Value::as_array)
                    .filter(|s| s.len() == 2)
                    .ok_or_else(|| parse_err("matrix fields need `shape: [rows, cols]`"))?;
                let dims: Vec<usize> = shape
                    .iter()
                    .map(|v| {
                        v.as_u64()
                            .map(|x| x as usize)
                            .ok_or_else(|| parse_err("bad matrix shape"))
                    })
                    .collect::<Result<_>>()?;
                Rank::Matrix(dims[0], dims[1])
            }
            _ => {
                return Err(parse_err(
                    "`rank` must be \"scalar\", \"vector\" or \"matrix\"",
                ))
            }
        };
        let coeffs = obj
            .get("coeffs")
            .and_then(Value::as_array)
            .ok_or_else(|| parse_err("missing `coeffs` list"))?;
        let lists: Vec<&Vec<Value>> = if rank == Rank::Scalar {
            vec![coeffs]
        } else {
            if coeffs.len() != rank.components() {
                return Err(parse_err(format!(
                    "expected {} coefficient lists",
                    rank.components()
                )));
            }
            coeffs
                .iter()
                .map(|c| {
                    c.as_array()
                        .ok_or_else(|| parse_err("component coefficients must be a list"))
                })
                .collect::<Result<_>>()?
        };
        let n = mode_count(dim, band);
        let mut raw = vec![vec![None::<Complex64>; n]; rank.components()];
        for (c, list) in lists.iter().enumerate() {
            for entry in list.iter() {
                let (k, v) = parse_entry(entry, dim)?;
                let idx = index_of(&k, band).ok_or_else(|| {
                    parse_err(format!("frequency {k:?} exceeds bandlimit {band}"))
                })?;
                if raw[c][idx].is_some() {
                    return Err(parse_err(format!("frequency {k:?} listed twice")));
                }
                raw[c][idx] = Some(v);
            }
        }
        let mut out = vec![vec![Complex64::new(0.0, 0.0); n]; rank.components()];
        for c in 0..rank.components() {
            for idx in 0..n {
                let partner = n - 1 - idx;
                out[c][idx] = match (raw[c][idx], raw[c][partner]) {
                    (Some(v), Some(w)) => {
                        let scale = v.norm().max(w.norm()).max(1.0);
                        if (v - w.conj()).norm() > PARTNER_TOL * scale {
                            return Err(parse_err(format!(
                                "coefficient pair is not Hermitian in component {c} (field would be complex)"
                            )));
                        }
                        v
                    }
                    (Some(v), None) => v,
                    (None, Some(w)) => w.conj(),
                    (None, None) => Complex64::new(0.0, 0.0),
                };
            }
        }
        Ok(FourierField::from_raw(dim, rank, band, out))
    }
}

fn parse_entry(entry: &Value, dim: usize) -> Result<(Vec<i64>, Complex64)> {
    let arr = entry
        .as_array()
        .filter(|a| a.len() == 3)
        .ok_or_else(|| parse_err("coefficient entries are [[k...], re, im]"))?;
    let k: Vec<i64> = arr[0]
        .as_array()
        .ok_or_else(|| parse_err("frequency must be an integer list"))?
        .iter()
        .map(|v| {
            v.as_i64()
                .ok_or_else(|| parse_err("frequency entries must be integers"))
        })
        .collect::<Result<_>>()?;
    if k.len() != dim {
        return Err(parse_err(format!(
            "frequency {k:?} has wrong length for dim {dim}"
        )));
    }
    let re = arr[1]
        .as_f64()
        .ok_or_else(|| parse_err("real part must be a number"))?;
    let im = arr[2]
        .as_f64()
        .ok_or_else(|| parse_err("imaginary part must be a number"))?;
    Ok((k, Complex64::new(re, im)))
}

impl Serialize for FourierField {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FourierField {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let value = Value::deserialize(deserializer)?;
        FourierField::from_json(&value).map_err(D::Error::custom)
    }
}
