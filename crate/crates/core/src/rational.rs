//! Exact rational helpers shared by every module.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Arbitrary-precision rational scalar.
pub type Q = BigRational;

pub fn int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn vec_of(entries: &[i64]) -> Vec<Q> {
    entries.iter().map(|&e| int(e)).collect()
}

/// Parses `"p/q"` or an integer literal.
pub fn parse(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::MalformedDocument(format!("not a rational: `{s}`"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Q::new(n, d))
        }
        None => Ok(Q::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn format(x: &Q) -> String {
    x.to_string()
}

pub fn dot(a: &[Q], b: &[Q]) -> Q {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

pub fn add(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

pub fn sub(a: &[Q], b: &[Q]) -> Vec<Q> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn scale(t: &Q, a: &[Q]) -> Vec<Q> {
    a.iter().map(|x| t * x).collect()
}

pub fn is_zero(a: &[Q]) -> bool {
    a.iter().all(Zero::is_zero)
}

/// Positive factor turning `v` into a primitive integer vector (1 for the zero vector).
fn primitive_factor(v: &[Q]) -> Q {
    if is_zero(v) {
        return Q::one();
    }
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let gcd = v
        .iter()
        .map(|x| (x * Q::from_integer(lcm.clone())).to_integer())
        .fold(BigInt::zero(), |acc, n| acc.gcd(&n));
    Q::new(lcm, gcd)
}

/// Scales `v` by a positive factor so that it becomes a primitive integer vector.
pub fn primitive(v: &[Q]) -> Vec<Q> {
    let f = primitive_factor(v);
    scale(&f, v)
}

/// Like [`primitive`], but additionally makes the first nonzero entry positive.
pub fn primitive_signed(v: &[Q]) -> Vec<Q> {
    let p = primitive(v);
    match p.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => p.iter().map(|x| -x).collect(),
        _ => p,
    }
}

/// Dyadic `k / 2^j`.
pub fn dyadic(k: i64, j: u32) -> Q {
    Q::new(BigInt::from(k), BigInt::from(1i64 << j))
}

pub fn max(a: &Q, b: &Q) -> Q {
    if a >= b {
        a.clone()
    } else {
        b.clone()
    }
}
