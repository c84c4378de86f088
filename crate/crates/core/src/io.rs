//! JSON formats for polytopes, rational polytopes and polynomials.
//!
//! Polytope: `{"vertices": [[x,y,z], ...]}`. Rational coordinates are
//! `[num, den]` pairs with `den > 0` in lowest terms. Polynomial:
//! `{"weights": [a0,a1,a2,a3,d], "monomials": [[e0,e1,e2,e3], ...]}`.

use num_rational::Ratio;
use serde_json::{json, Value};

use crate::intlinalg::{Mat3, Vec3};
use crate::polytope::{LatticePolytope, RationalPolytope};
use crate::scalar::Scalar;
use crate::wps::{Monomial4, WeightSystem4, WeightedPolynomial};

/// Malformed input, located by a JSON pointer.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("{pointer}: {message}")]
pub struct JsonError {
    pub pointer: String,
    pub message: String,
}

fn err(pointer: &str, message: impl Into<String>) -> JsonError {
    JsonError {
        pointer: pointer.to_string(),
        message: message.into(),
    }
}

/// Reads an integer of any size.
pub fn int<T: Scalar>(v: &Value, ptr: &str) -> Result<T, JsonError> {
    match v {
        Value::Number(n) => n
            .to_string()
            .parse::<T>()
            .map_err(|_| err(ptr, format!("`{n}` is not an integer"))),
        _ => Err(err(ptr, "expected an integer")),
    }
}

/// Writes an integer exactly.
pub fn num<T: Scalar>(x: &T) -> Value {
    serde_json::from_str(&x.to_string()).expect("integers are valid JSON numbers")
}

fn triple<T: Scalar>(v: &Value, ptr: &str) -> Result<Vec3<T>, JsonError> {
    let a = v
        .as_array()
        .ok_or_else(|| err(ptr, "expected an array of 3 integers"))?;
    if a.len() != 3 {
        return Err(err(ptr, "expected an array of 3 integers"));
    }
    Ok([
        int(&a[0], &format!("{ptr}/0"))?,
        int(&a[1], &format!("{ptr}/1"))?,
        int(&a[2], &format!("{ptr}/2"))?,
    ])
}

pub fn points_from_json<T: Scalar>(v: &Value) -> Result<Vec<Vec3<T>>, JsonError> {
    let verts = v
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| err("/vertices", "expected an array of points"))?;
    verts
        .iter()
        .enumerate()
        .map(|(i, p)| triple(p, &format!("/vertices/{i}")))
        .collect()
}

pub fn point_json<T: Scalar>(p: &Vec3<T>) -> Value {
    Value::Array(p.iter().map(num).collect())
}

pub fn polytope_json<T: Scalar>(p: &LatticePolytope<T>) -> Value {
    json!({ "vertices": p.vertices().iter().map(point_json).collect::<Vec<_>>() })
}

pub fn ratio_json<T: Scalar>(q: &Ratio<T>) -> Value {
    json!([num(q.numer()), num(q.denom())])
}

pub fn rational_point_json<T: Scalar>(p: &Vec3<Ratio<T>>) -> Value {
    Value::Array(p.iter().map(ratio_json).collect())
}

pub fn rational_polytope_json<T: Scalar>(p: &RationalPolytope<T>) -> Value {
    json!({ "vertices": p.vertices().iter().map(rational_point_json).collect::<Vec<_>>() })
}

fn ratio<T: Scalar>(v: &Value, ptr: &str) -> Result<Ratio<T>, JsonError> {
    if let Value::Number(_) = v {
        return Ok(Ratio::from_integer(int(v, ptr)?));
    }
    let a = v
        .as_array()
        .filter(|a| a.len() == 2)
        .ok_or_else(|| err(ptr, "expected [num, den]"))?;
    let n: T = int(&a[0], &format!("{ptr}/0"))?;
    let d: T = int(&a[1], &format!("{ptr}/1"))?;
    if !d.is_positive() {
        return Err(err(&format!("{ptr}/1"), "denominator must be positive"));
    }
    if !n.gcd(&d).is_one() {
        return Err(err(ptr, "fraction is not in lowest terms"));
    }
    Ok(Ratio::new_raw(n, d))
}

pub fn rational_points_from_json<T: Scalar>(v: &Value) -> Result<Vec<Vec3<Ratio<T>>>, JsonError> {
    let verts = v
        .get("vertices")
        .and_then(Value::as_array)
        .ok_or_else(|| err("/vertices", "expected an array of points"))?;
    verts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let ptr = format!("/vertices/{i}");
            let a = p
                .as_array()
                .filter(|a| a.len() == 3)
                .ok_or_else(|| err(&ptr, "expected 3 coordinates"))?;
            Ok([
                ratio(&a[0], &format!("{ptr}/0"))?,
                ratio(&a[1], &format!("{ptr}/1"))?,
                ratio(&a[2], &format!("{ptr}/2"))?,
            ])
        })
        .collect()
}

pub fn matrix_json<T: Scalar>(m: &Mat3<T>) -> Value {
    Value::Array(m.iter().map(point_json).collect())
}

pub fn polynomial_from_json<T: Scalar>(v: &Value) -> Result<WeightedPolynomial<T>, JsonError> {
    let w = v
        .get("weights")
        .and_then(Value::as_array)
        .filter(|a| a.len() == 5)
        .ok_or_else(|| err("/weights", "expected [a0,a1,a2,a3,d]"))?;
    let ws: Vec<T> = w
        .iter()
        .enumerate()
        .map(|(i, x)| int(x, &format!("/weights/{i}")))
        .collect::<Result<_, _>>()?;
    let weight = WeightSystem4::new(
        [ws[0].clone(), ws[1].clone(), ws[2].clone(), ws[3].clone()],
        ws[4].clone(),
    )
    .map_err(|e| err("/weights", e.to_string()))?;
    let ms = v
        .get("monomials")
        .and_then(Value::as_array)
        .ok_or_else(|| err("/monomials", "expected an array of exponent vectors"))?;
    let mut out: Vec<Monomial4> = Vec::new();
    for (i, m) in ms.iter().enumerate() {
        let ptr = format!("/monomials/{i}");
        let a = m
            .as_array()
            .filter(|a| a.len() == 4)
            .ok_or_else(|| err(&ptr, "expected 4 exponents"))?;
        let mut e = [0u32; 4];
        for k in 0..4 {
            e[k] = a[k]
                .as_u64()
                .and_then(|x| u32::try_from(x).ok())
                .ok_or_else(|| err(&format!("{ptr}/{k}"), "expected a nonnegative exponent"))?;
        }
        out.push(e);
    }
    WeightedPolynomial::new(weight, out).map_err(|e| err("/monomials", e.to_string()))
}
