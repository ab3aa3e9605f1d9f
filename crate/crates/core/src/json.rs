//! JSON encodings shared by the CLI and the reports.
//!
//! A field element is an array of k coefficients, low degree first. Plain
//! integers are also accepted on input and reduced mod p. A matrix is
//! `{"a": .., "b": .., "c": .., "d": ..}`; a GF(q²) element is
//! `{"re": [..], "im": [..]}`.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::gf::{ExtElem, FieldCtx, FieldElem};
use crate::mat::{ExtMat2, Mat2};
use crate::strata::{Rep, Witness};

pub fn elem_to_json(f: &FieldCtx, a: FieldElem) -> Value {
    json!(f.coeffs(a))
}

pub fn elem_from_json(f: &FieldCtx, v: &Value) -> Result<FieldElem> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(|n| f.from_int(n))
            .ok_or_else(|| Error::InvalidElement(format!("{n} is not an integer"))),
        Value::Array(items) => {
            let coeffs = items
                .iter()
                .map(|c| {
                    c.as_u64()
                        .and_then(|c| u32::try_from(c).ok())
                        .ok_or_else(|| Error::InvalidElement(format!("bad coefficient {c}")))
                })
                .collect::<Result<Vec<_>>>()?;
            f.from_coeffs(&coeffs)
        }
        other => Err(Error::InvalidElement(format!("expected an array or integer, got {other}"))),
    }
}

pub fn ext_to_json(f: &FieldCtx, a: ExtElem) -> Value {
    json!({ "re": elem_to_json(f, a.re), "im": elem_to_json(f, a.im) })
}

pub fn mat_to_json(f: &FieldCtx, m: &Mat2) -> Value {
    json!({
        "a": elem_to_json(f, m.a),
        "b": elem_to_json(f, m.b),
        "c": elem_to_json(f, m.c),
        "d": elem_to_json(f, m.d),
    })
}

/// Base-field form when every entry lies in GF(q), otherwise `re`/`im` form.
pub fn ext_mat_to_json(f: &FieldCtx, m: &ExtMat2) -> Value {
    if let Some(b) = m.to_base() {
        return mat_to_json(f, &b);
    }
    json!({
        "a": ext_to_json(f, m.a),
        "b": ext_to_json(f, m.b),
        "c": ext_to_json(f, m.c),
        "d": ext_to_json(f, m.d),
    })
}

pub fn mat_from_json(f: &FieldCtx, v: &Value) -> Result<Mat2> {
    let obj = v
        .as_object()
        .ok_or_else(|| Error::Invalid(format!("matrix must be an object, got {v}")))?;
    let entry = |key: &str| -> Result<FieldElem> {
        let e = obj.get(key).ok_or_else(|| Error::Invalid(format!("matrix is missing entry \"{key}\"")))?;
        elem_from_json(f, e)
    };
    Mat2::new_sl2(f, entry("a")?, entry("b")?, entry("c")?, entry("d")?)
}

pub fn rep_to_json(f: &FieldCtx, rep: &Rep) -> Value {
    Value::Array(rep.mats().iter().map(|m| mat_to_json(f, m)).collect())
}

/// Accepts a JSON list of matrices, or a single matrix as a rank-1 tuple.
pub fn rep_from_json(f: &FieldCtx, v: &Value) -> Result<Rep> {
    let mats = match v {
        Value::Array(items) => items.iter().map(|m| mat_from_json(f, m)).collect::<Result<Vec<_>>>()?,
        Value::Object(_) => vec![mat_from_json(f, v)?],
        other => return Err(Error::Invalid(format!("expected a list of matrices, got {other}"))),
    };
    Rep::new(f, mats)
}

pub fn witness_to_json(f: &FieldCtx, w: &Witness) -> Value {
    let mut obj = Map::new();
    let scope = if w.conjugator.is_base() { "base" } else { "quadratic" };
    obj.insert("field".into(), json!(scope));
    obj.insert("conjugator".into(), ext_mat_to_json(f, &w.conjugator));
    obj.insert(
        "normal_form".into(),
        Value::Array(w.normal_form.iter().map(|m| ext_mat_to_json(f, m)).collect()),
    );
    Value::Object(obj)
}
