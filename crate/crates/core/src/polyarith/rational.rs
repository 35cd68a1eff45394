//! Helpers around arbitrary-precision rationals.
//!
//! The rational type itself is `num_rational::BigRational`, which already keeps
//! numerator and denominator coprime with a positive denominator.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serializer;

pub type Rational = BigRational;

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn rat(n: i64, d: i64) -> Rational {
    assert!(d != 0, "zero denominator");
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Canonical text form: `p` for integers, `p/q` otherwise.
pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `p` or `p/q` with an optional leading sign.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = num.parse().ok()?;
    let d: BigInt = den.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rational::new(n, d))
}

/// Height `max(|p|, q)`, the usual measure of how "simple" a rational is.
pub fn height(q: &Rational) -> BigInt {
    let n = q.numer().abs();
    let d = q.denom().clone();
    if n > d {
        n
    } else {
        d
    }
}

pub fn to_f64(q: &Rational) -> f64 {
    q.to_f64().unwrap_or_else(|| {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    })
}

/// Integer power, negative exponents allowed for nonzero bases.
pub fn pow_i(base: &Rational, e: i64) -> Rational {
    let mut acc = Rational::one();
    let b = if e < 0 { base.recip() } else { base.clone() };
    for _ in 0..e.unsigned_abs() {
        acc *= &b;
    }
    acc
}

pub fn lcm_of_denominators<'a>(it: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    it.into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub(crate) mod serde_str {
    use super::*;

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(q))
    }
}

pub(crate) mod serde_str_vec {
    use super::*;
    use serde::ser::SerializeSeq;

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for q in v {
            seq.serialize_element(&format_rational(q))?;
        }
        seq.end()
    }
}

pub(crate) mod serde_str_matrix {
    use super::*;

    pub fn serialize<S: Serializer>(m: &[[Rational; 2]; 2], s: S) -> Result<S::Ok, S::Error> {
        use serde::Serialize;
        let rows: Vec<Vec<String>> = m
            .iter()
            .map(|r| r.iter().map(format_rational).collect())
            .collect();
        rows.serialize(s)
    }
}
