//! Exact rational scalars.
//!
//! Everything in the crate computes over `BigRational`. The wire format for a
//! scalar is the string `"p/q"` (or `"p"` for integers); floats never cross
//! the boundary.

use num::{BigInt, BigRational, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Scalar = BigRational;

pub fn int(n: i64) -> Scalar {
    BigRational::from_integer(BigInt::from(n))
}

pub fn frac(p: i64, q: i64) -> Scalar {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn parse(s: &str) -> Result<Scalar> {
    let t = s.trim();
    if t.is_empty() || t.contains('.') || t.contains('e') || t.contains('E') {
        return Err(Error::Parse(format!("not an exact rational: {s:?}")));
    }
    let (num, den) = match t.split_once('/') {
        Some((p, q)) => (p.trim(), q.trim()),
        None => (t, "1"),
    };
    let p: BigInt = num
        .parse()
        .map_err(|_| Error::Parse(format!("bad numerator in {s:?}")))?;
    let q: BigInt = den
        .parse()
        .map_err(|_| Error::Parse(format!("bad denominator in {s:?}")))?;
    if q.is_zero() {
        return Err(Error::Parse(format!("zero denominator in {s:?}")));
    }
    Ok(BigRational::new(p, q))
}

pub fn format(x: &Scalar) -> String {
    x.to_string()
}

pub fn to_f64(x: &Scalar) -> f64 {
    x.to_f64().unwrap_or(f64::NAN)
}

/// Best rational approximation of `x` with denominator at most `max_den`,
/// via continued fractions. Returns `None` if the approximation is off by
/// more than `tol`.
pub fn reconstruct(x: f64, max_den: i64, tol: f64) -> Option<Scalar> {
    if !x.is_finite() {
        return None;
    }
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    for _ in 0..64 {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let ai = a as i128;
        let h2 = ai * h1 + h0;
        let k2 = ai * k1 + k0;
        if k2 > max_den as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - a;
        if frac.abs() < 1e-12 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1 == 0 {
        return None;
    }
    let approx = h1 as f64 / k1 as f64;
    if (approx - x).abs() > tol {
        return None;
    }
    Some(BigRational::new(BigInt::from(h1), BigInt::from(k1)))
}

/// Least common multiple of the denominators.
pub fn denominator_lcm<'a>(xs: impl IntoIterator<Item = &'a Scalar>) -> BigInt {
    let mut l = BigInt::one();
    for x in xs {
        if !x.is_zero() {
            l = num::integer::lcm(l, x.denom().clone());
        }
    }
    l
}

pub fn is_integral(x: &Scalar) -> bool {
    x.denom().is_one()
}

pub fn abs(x: &Scalar) -> Scalar {
    x.abs()
}

/// Serde adapters so reports carry scalars as strings.
pub mod serde_str {
    use super::Scalar;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &Scalar, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&super::format(x))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Scalar, D::Error> {
        let s = String::deserialize(d)?;
        super::parse(&s).map_err(serde::de::Error::custom)
    }
}

pub mod serde_vec {
    use super::Scalar;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Scalar], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = xs.iter().map(super::format).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Scalar>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| super::parse(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

pub mod serde_vec_vec {
    use super::Scalar;
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(xs: &[Vec<Scalar>], s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<Vec<String>> = xs
            .iter()
            .map(|r| r.iter().map(super::format).collect())
            .collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Vec<Scalar>>, D::Error> {
        let v = Vec::<Vec<String>>::deserialize(d)?;
        v.iter()
            .map(|r| {
                r.iter()
                    .map(|s| super::parse(s).map_err(serde::de::Error::custom))
                    .collect()
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_canonical_forms() {
        assert_eq!(parse("3").unwrap(), int(3));
        assert_eq!(parse("-6/4").unwrap(), frac(-3, 2));
        assert_eq!(parse(" 2/-4 ").unwrap(), frac(-1, 2));
        assert!(parse("1/0").is_err());
        assert!(parse("0.5").is_err());
        assert!(parse("").is_err());
        assert_eq!(format(&frac(6, -4)), "-3/2");
        assert_eq!(format(&int(0)), "0");
    }

    #[test]
    fn reconstructs_small_fractions() {
        assert_eq!(reconstruct(0.5, 100, 1e-9), Some(frac(1, 2)));
        assert_eq!(reconstruct(-1.0 / 3.0, 100, 1e-9), Some(frac(-1, 3)));
        assert_eq!(reconstruct(2.0, 100, 1e-9), Some(int(2)));
        assert_eq!(reconstruct(std::f64::consts::PI, 10, 1e-9), None);
    }
}
