//! Univariate polynomials and rational functions in `t` over the rationals.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num::{BigInt, One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::{self, denominator_lcm, Scalar};

/// Coefficients lowest degree first, no trailing zeros. The zero polynomial
/// has no coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<Scalar>,
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let (sign, mag) = if c.is_negative() { ("-", -c.clone()) } else { ("+", c.clone()) };
            if first {
                if sign == "-" {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            let show_coeff = k == 0 || !mag.is_one();
            if show_coeff {
                write!(f, "{mag}")?;
            }
            match k {
                0 => {}
                1 => write!(f, "t")?,
                _ => write!(f, "t^{k}")?,
            }
        }
        Ok(())
    }
}

impl Poly {
    pub fn new(mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn zero() -> Poly {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Poly {
        Poly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Poly {
        Poly::new(vec![c])
    }

    /// The polynomial `t`.
    pub fn t() -> Poly {
        Poly::new(vec![Scalar::zero(), Scalar::one()])
    }

    pub fn monomial(c: Scalar, k: usize) -> Poly {
        let mut v = vec![Scalar::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> Scalar {
        self.coeffs.get(k).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    /// Degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Scalar {
        self.coeffs.last().cloned().unwrap_or_else(Scalar::zero)
    }

    /// Multiplicity of `t` as a factor; `None` for the zero polynomial.
    pub fn valuation(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = Scalar::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return Poly::zero();
        }
        let lc = self.leading();
        Poly::new(self.coeffs.iter().map(|c| c / &lc).collect())
    }

    /// Euclidean division: `self = q * d + r` with `deg r < deg d`.
    pub fn div_rem(&self, d: &Poly) -> (Poly, Poly) {
        assert!(!d.is_zero(), "polynomial division by zero");
        let dd = d.coeffs.len() - 1;
        let lc = d.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Poly::zero(), self.clone());
        }
        let mut quot = vec![Scalar::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lc;
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                if !dc.is_zero() {
                    rem[k + j] -= &c * dc;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    /// Monic greatest common divisor (zero if both are zero).
    pub fn gcd(a: &Poly, b: &Poly) -> Poly {
        let (mut x, mut y) = (a.clone(), b.clone());
        while !y.is_zero() {
            let (_, r) = x.div_rem(&y);
            // Keep remainders primitive-ish to limit coefficient growth.
            x = y;
            y = r.monic();
        }
        x.monic()
    }

    pub fn pow(&self, k: usize) -> Poly {
        let mut acc = Poly::one();
        for _ in 0..k {
            acc = &acc * self;
        }
        acc
    }

    /// Distinct rational roots, sorted ascending.
    pub fn rational_roots(&self) -> Vec<Scalar> {
        if self.is_zero() {
            return Vec::new();
        }
        let mut roots = Vec::new();
        let v = self.valuation().unwrap_or(0);
        if v > 0 {
            roots.push(Scalar::zero());
        }
        let trimmed = Poly::new(self.coeffs[v..].to_vec());
        if trimmed.is_constant() {
            return roots;
        }
        let l = denominator_lcm(trimmed.coeffs.iter());
        let ints: Vec<BigInt> = trimmed
            .coeffs
            .iter()
            .map(|c| c.numer() * (&l / c.denom()))
            .collect();
        let a0 = ints[0].abs();
        let an = ints.last().unwrap().abs();
        let (Some(ps), Some(qs)) = (divisors(&a0), divisors(&an)) else {
            return roots;
        };
        for p in &ps {
            for q in &qs {
                for sign in [1i64, -1] {
                    let cand = Scalar::new(p * BigInt::from(sign), q.clone());
                    if trimmed.eval(&cand).is_zero() && !roots.contains(&cand) {
                        roots.push(cand);
                    }
                }
            }
        }
        roots.sort();
        roots
    }
}

/// Positive divisors of `n` by trial division; gives up above 10^12.
fn divisors(n: &BigInt) -> Option<Vec<BigInt>> {
    use num::ToPrimitive;
    let n = n.to_u64().filter(|&n| n > 0 && n <= 1_000_000_000_000)?;
    let mut out = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n % d == 0 {
            out.push(BigInt::from(d));
            if d * d != n {
                out.push(BigInt::from(n / d));
            }
        }
        d += 1;
    }
    Some(out)
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) + rhs.coeff(k)).collect())
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        Poly::new((0..n).map(|k| self.coeff(k) - rhs.coeff(k)).collect())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![Scalar::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                if !b.is_zero() {
                    out[i + j] += a * b;
                }
            }
        }
        Poly::new(out)
    }
}

impl Serialize for Poly {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let v: Vec<String> = if self.is_zero() {
            vec!["0".to_string()]
        } else {
            self.coeffs.iter().map(scalar::format).collect()
        };
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for Poly {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Poly, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        let coeffs = v
            .iter()
            .map(|s| scalar::parse(s))
            .collect::<Result<Vec<_>>>()
            .map_err(serde::de::Error::custom)?;
        Ok(Poly::new(coeffs))
    }
}

/// A reduced fraction of polynomials with monic denominator.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RationalFn {
    num: Poly,
    den: Poly,
}

impl fmt::Debug for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for RationalFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_constant() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({}) / ({})", self.num, self.den)
        }
    }
}

impl RationalFn {
    pub fn new(num: Poly, den: Poly) -> Result<RationalFn> {
        if den.is_zero() {
            return Err(Error::InvalidInput("rational function with zero denominator".into()));
        }
        if num.is_zero() {
            return Ok(RationalFn::zero());
        }
        let g = Poly::gcd(&num, &den);
        let (n, _) = num.div_rem(&g);
        let (d, _) = den.div_rem(&g);
        let lc = d.leading();
        let inv = Scalar::one() / lc;
        Ok(RationalFn {
            num: n.scale(&inv),
            den: d.scale(&inv),
        })
    }

    pub fn from_poly(p: Poly) -> RationalFn {
        RationalFn { num: p, den: Poly::one() }
    }

    pub fn constant(c: Scalar) -> RationalFn {
        RationalFn::from_poly(Poly::constant(c))
    }

    pub fn zero() -> RationalFn {
        RationalFn::from_poly(Poly::zero())
    }

    pub fn numerator(&self) -> &Poly {
        &self.num
    }

    pub fn denominator(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Order of vanishing at `t = 0`: negative for a pole, `None` for zero.
    pub fn valuation_at_zero(&self) -> Option<i64> {
        let vn = self.num.valuation()? as i64;
        let vd = self.den.valuation().unwrap_or(0) as i64;
        Some(vn - vd)
    }

    /// Value at `x`, or `None` if `x` is a pole.
    pub fn eval(&self, x: &Scalar) -> Option<Scalar> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn add(&self, other: &RationalFn) -> RationalFn {
        let n = &(&self.num * &other.den) + &(&other.num * &self.den);
        RationalFn::new(n, &self.den * &other.den).expect("nonzero denominators")
    }

    pub fn sub(&self, other: &RationalFn) -> RationalFn {
        let n = &(&self.num * &other.den) - &(&other.num * &self.den);
        RationalFn::new(n, &self.den * &other.den).expect("nonzero denominators")
    }

    pub fn mul(&self, other: &RationalFn) -> RationalFn {
        RationalFn::new(&self.num * &other.num, &self.den * &other.den).expect("nonzero denominators")
    }

    pub fn div(&self, other: &RationalFn) -> Result<RationalFn> {
        if other.is_zero() {
            return Err(Error::InvalidInput("division by the zero rational function".into()));
        }
        RationalFn::new(&self.num * &other.den, &self.den * &other.num)
    }
}
