//! JSON encodings shared by the command-line front end.
//!
//! Polynomials are coefficient arrays in ascending degree; a bare integer is
//! accepted for a constant. Matrices are arrays of rows. Integers are
//! arbitrary precision.

use std::str::FromStr;

use num_bigint::BigInt;
use serde_json::{json, Map, Number, Value};

use crate::arf::Bits;
use crate::error::{Error, Result};
use crate::forms::{EpsForm, LagrangianWitness, Sign};
use crate::linking::{Dyadic, Formation, LinkingResolution, SFormation, VecPair};
use crate::matrix::Mat;
use crate::qnormal::{Q0ClassZx, Q3ClassZx, QClass};
use crate::ring::{IntPoly, ResPoly};

fn perr(msg: impl Into<String>) -> Error {
    Error::Parse(msg.into())
}

pub fn parse_value(text: &str) -> Result<Value> {
    serde_json::from_str(text).map_err(|e| perr(format!("invalid JSON: {}", e)))
}

pub fn bigint(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => BigInt::from_str(&n.to_string()).map_err(|_| perr(format!("{} is not an integer", n))),
        _ => Err(perr(format!("expected an integer, found {}", v))),
    }
}

pub fn int_i64(v: &Value) -> Result<i64> {
    v.as_i64().ok_or_else(|| perr(format!("expected a small integer, found {}", v)))
}

pub fn poly(v: &Value) -> Result<IntPoly> {
    match v {
        Value::Number(_) => Ok(IntPoly::from_big(bigint(v)?)),
        Value::Array(cs) => Ok(IntPoly::from_coeffs(cs.iter().map(bigint).collect::<Result<_>>()?)),
        _ => Err(perr(format!("expected a polynomial, found {}", v))),
    }
}

pub fn poly_vec(v: &Value) -> Result<Vec<IntPoly>> {
    v.as_array().ok_or_else(|| perr("expected an array of polynomials"))?.iter().map(poly).collect()
}

pub fn mat(v: &Value) -> Result<Mat> {
    let rows = v.as_array().ok_or_else(|| perr("expected a matrix (array of rows)"))?;
    let rows: Vec<Vec<IntPoly>> = rows.iter().map(poly_vec).collect::<Result<_>>()?;
    Mat::from_rows(rows).map_err(|e| perr(e.to_string()))
}

pub fn bits_mat(v: &Value) -> Result<Vec<Bits>> {
    let rows = v.as_array().ok_or_else(|| perr("expected a bit matrix"))?;
    rows.iter()
        .map(|r| {
            r.as_array()
                .ok_or_else(|| perr("expected a row of bits"))?
                .iter()
                .map(|b| match b.as_u64() {
                    Some(0) => Ok(0),
                    Some(1) => Ok(1),
                    _ => Err(perr(format!("expected 0 or 1, found {}", b))),
                })
                .collect()
        })
        .collect()
}

pub fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| perr(format!("missing field {:?}", key)))
}

pub fn sign(v: &Value) -> Result<Sign> {
    Sign::from_i64(int_i64(v)?).map_err(|_| perr("epsilon must be 1 or -1"))
}

pub fn int_value(p: &BigInt) -> Value {
    Value::Number(Number::from_str(&p.to_string()).expect("integer literal"))
}

pub fn poly_value(p: &IntPoly) -> Value {
    Value::Array(p.coeffs().iter().map(int_value).collect())
}

pub fn mat_value(m: &Mat) -> Value {
    Value::Array((0..m.rows()).map(|i| Value::Array(m.row_vec(i).iter().map(poly_value).collect())).collect())
}

pub fn res_value(r: &ResPoly) -> Value {
    json!(r.coeffs())
}

pub fn class_value(c: &QClass) -> Value {
    match c {
        QClass::Q0Zx(c) => q0_value(c),
        QClass::Q3Zx(c) => q3_value(c),
        QClass::Q1Zx(b) => json!({"group": "q1zx", "value": b}),
        QClass::Z(c) => json!({"group": format!("q{}z", c.n), "value": c.value}),
    }
}

pub fn q0_value(c: &Q0ClassZx) -> Value {
    json!({
        "group": "q0zx",
        "s": c.s,
        "t": res_value(&c.t),
        "u1": res_value(&c.u1),
        "u2": res_value(&c.u2),
        "u3": res_value(&c.u3),
    })
}

pub fn q3_value(c: &Q3ClassZx) -> Value {
    json!({"group": "q3zx", "value": res_value(&c.value)})
}

pub fn form_value(f: &EpsForm) -> Value {
    json!({"epsilon": f.epsilon.value(), "psi": mat_value(&f.psi)})
}

pub fn formation_value(f: &Formation) -> Value {
    json!({"rank": f.rank, "F": mat_value(&f.f_inclusion), "G": mat_value(&f.g_inclusion)})
}

pub fn sformation_value(f: &SFormation) -> Value {
    formation_value(f.formation())
}

pub fn dyadic_value(d: &Dyadic) -> Value {
    json!({"num": poly_value(d.numerator()), "exp": d.denom_exp()})
}

pub fn resolution(v: &Value) -> Result<LinkingResolution> {
    LinkingResolution::new(mat(field(v, "d")?)?, mat(field(v, "delta")?)?, mat(field(v, "phi")?)?)
}

pub fn resolution_value(r: &LinkingResolution) -> Value {
    json!({"d": mat_value(r.d()), "delta": mat_value(r.delta()), "phi": mat_value(r.phi())})
}

pub fn vec_pair(v: &Value) -> Result<VecPair> {
    Ok(VecPair {
        x1: poly_vec(field(v, "x1")?)?,
        x0: poly_vec(field(v, "x0")?)?,
    })
}

/// `{"inclusion": M, "complement": M}`.
pub fn witness(v: &Value) -> Result<LagrangianWitness> {
    Ok(LagrangianWitness {
        inclusion: mat(field(v, "inclusion")?)?,
        complement: mat(field(v, "complement")?)?,
    })
}

/// A matrix given bare, as `{"M": ...}`, `{"N": ...}`, `{"a": int}`, or as a
/// bare integer (a 1×1 matrix).
pub fn matrix_input(v: &Value) -> Result<Mat> {
    match v {
        Value::Number(_) => Ok(Mat::from_fn(1, 1, |_, _| IntPoly::from_big(bigint(v).expect("checked")))),
        Value::Array(_) => mat(v),
        Value::Object(m) => {
            for key in ["M", "N", "a"] {
                if let Some(inner) = m.get(key) {
                    return matrix_input(inner);
                }
            }
            Err(perr("expected a matrix, or an object with field \"M\", \"N\" or \"a\""))
        }
        _ => Err(perr(format!("expected a matrix, found {}", v))),
    }
}

pub fn object(pairs: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    for (k, v) in pairs {
        m.insert(k.into(), v);
    }
    Value::Object(m)
}
