use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::Value;

use crate::{Error, Result};

pub type Q = num_rational::BigRational;

pub fn int(v: i64) -> Q {
    Q::from_integer(BigInt::from(v))
}

pub fn frac(p: i64, q: i64) -> Q {
    Q::new(BigInt::from(p), BigInt::from(q))
}

/// Parses `p/q` (lowest terms, `q > 0`) or a bare integer `p`.
pub fn parse_rational(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::input(format!("invalid rational {s:?}"));
    match s.split_once('/') {
        None => Ok(Q::from_integer(s.parse::<BigInt>().map_err(|_| bad())?)),
        Some((p, q)) => {
            let p: BigInt = p.parse().map_err(|_| bad())?;
            let q: BigInt = q.parse().map_err(|_| bad())?;
            if !q.is_positive() {
                return Err(Error::input(format!("rational {s:?} needs a positive denominator")));
            }
            if !p.gcd(&q).is_one() {
                return Err(Error::input(format!("rational {s:?} is not in lowest terms")));
            }
            Ok(Q::new_raw(p, q))
        }
    }
}

/// Always `p/q`, integers included (`3/1`).
pub fn format_rational(v: &Q) -> String {
    format!("{}/{}", v.numer(), v.denom())
}

pub fn vector_to_json(v: &[Q]) -> Value {
    Value::Array(v.iter().map(|x| Value::String(format_rational(x))).collect())
}

pub fn vectors_to_json(vs: &[Vec<Q>]) -> Value {
    Value::Array(vs.iter().map(|v| vector_to_json(v)).collect())
}

fn scalar_from_json(v: &Value) -> Result<Q> {
    match v {
        Value::String(s) => parse_rational(s),
        Value::Number(n) if n.is_i64() => Ok(int(n.as_i64().unwrap())),
        other => Err(Error::input(format!("expected a rational string, got {other}"))),
    }
}

pub fn vector_from_json(v: &Value) -> Result<Vec<Q>> {
    v.as_array()
        .ok_or_else(|| Error::input("expected an array of rationals"))?
        .iter()
        .map(scalar_from_json)
        .collect()
}

/// A JSON array of equal-length arrays of rationals.
pub fn vectors_from_json(v: &Value) -> Result<Vec<Vec<Q>>> {
    let rows: Vec<Vec<Q>> = v
        .as_array()
        .ok_or_else(|| Error::input("expected an array of vectors"))?
        .iter()
        .map(vector_from_json)
        .collect::<Result<_>>()?;
    if let Some(first) = rows.first() {
        if rows.iter().any(|r| r.len() != first.len()) {
            return Err(Error::input("vectors have different lengths"));
        }
    }
    Ok(rows)
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}
