//! Exact scalars: arbitrary-precision rationals and elements of a single
//! quadratic extension `Q(√m)`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Rational = BigRational;

pub fn q(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p"` or `"p/q"` (surrounding whitespace ignored).
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("not a rational: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(Error::Parse(format!("zero denominator in {s:?}")));
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

pub fn fmt_rational(r: &Rational) -> String {
    r.to_string()
}

/// Serde adapter that stores a rational as its `"p/q"` string.
pub mod rational_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

/// Serde adapter for sequences of rationals.
pub mod rational_vec {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
        let strs: Vec<String> = v.iter().map(fmt_rational).collect();
        strs.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<Vec<Rational>, D::Error> {
        let strs = Vec::<String>::deserialize(d)?;
        strs.iter()
            .map(|s| parse_rational(s).map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Writes `n = s² · k` with `k` square-free (carrying the sign of `n`).
///
/// Trial division runs up to the cube root of what remains; the leftover
/// cofactor is then 1, a prime, a product of two distinct primes, or the
/// square of a prime, and the last case is detected by an integer square root.
pub fn square_free_split(n: &BigInt) -> (BigInt, BigInt) {
    assert!(!n.is_zero(), "square_free_split(0)");
    let mut rest = n.abs();
    let mut root = BigInt::one();
    let mut kernel = BigInt::one();
    let mut p = BigInt::from(2u32);
    loop {
        let cube = &p * &p * &p;
        if cube > rest {
            break;
        }
        let mut e = 0u32;
        while (&rest % &p).is_zero() {
            rest /= &p;
            e += 1;
        }
        for _ in 0..e / 2 {
            root *= &p;
        }
        if e % 2 == 1 {
            kernel *= &p;
        }
        p += if p == BigInt::from(2u32) { 1u32 } else { 2u32 };
    }
    if rest > BigInt::one() {
        let s = rest.sqrt();
        if &s * &s == rest {
            root *= s;
        } else {
            kernel *= rest;
        }
    }
    if n.sign() == Sign::Minus {
        kernel = -kernel;
    }
    (root, kernel)
}

/// Exact square root of a rational, either rational or in `Q(√m)`.
pub fn sqrt_rational(r: &Rational) -> QuadScalar {
    if r.is_zero() {
        return QuadScalar::zero();
    }
    // √(n/d) = √(n·d) / d
    let nd = r.numer() * r.denom();
    let (s, k) = square_free_split(&nd);
    let coeff = Rational::new(s, r.denom().clone());
    if k.is_one() {
        QuadScalar::rational(coeff)
    } else {
        QuadScalar::new(Rational::zero(), coeff, k)
    }
}

pub fn is_rational_square(r: &Rational) -> bool {
    sqrt_rational(r).is_rational()
}

/// `a + b√m` with `m` square-free and `m ≠ 1`.
///
/// Canonical form: when `b = 0` the radicand is stored as 0, so equality is
/// structural equality.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct QuadScalar {
    a: Rational,
    b: Rational,
    m: BigInt,
}

impl QuadScalar {
    pub fn new(a: Rational, b: Rational, m: BigInt) -> Self {
        assert!(!m.is_zero() || b.is_zero(), "radicand 0 with nonzero b");
        assert!(!m.is_one(), "radicand 1 is not an extension");
        let mut s = QuadScalar { a, b, m };
        s.normalize();
        s
    }

    pub fn rational(a: Rational) -> Self {
        QuadScalar { a, b: Rational::zero(), m: BigInt::zero() }
    }

    pub fn from_int(n: i64) -> Self {
        Self::rational(q(n))
    }

    pub fn zero() -> Self {
        Self::rational(Rational::zero())
    }

    pub fn one() -> Self {
        Self::rational(Rational::one())
    }

    fn normalize(&mut self) {
        if self.b.is_zero() {
            self.m = BigInt::zero();
        }
    }

    pub fn a(&self) -> &Rational {
        &self.a
    }

    pub fn b(&self) -> &Rational {
        &self.b
    }

    /// Radicand, or `None` for a rational value.
    pub fn radicand(&self) -> Option<&BigInt> {
        (!self.b.is_zero()).then_some(&self.m)
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<Rational> {
        self.is_rational().then(|| self.a.clone())
    }

    pub fn conj(&self) -> Self {
        QuadScalar { a: self.a.clone(), b: -self.b.clone(), m: self.m.clone() }
    }

    /// `a² − m b²`, the field norm down to `Q`.
    pub fn norm(&self) -> Rational {
        let m = Rational::from_integer(self.m.clone());
        &self.a * &self.a - m * &self.b * &self.b
    }

    fn merged_radicand(&self, other: &Self) -> BigInt {
        match (self.radicand(), other.radicand()) {
            (None, None) => BigInt::zero(),
            (Some(m), None) | (None, Some(m)) => m.clone(),
            (Some(m1), Some(m2)) => {
                assert_eq!(m1, m2, "mixing Q(√{m1}) and Q(√{m2})");
                m1.clone()
            }
        }
    }

    /// Whether both values live in one common field `Q` or `Q(√m)`.
    pub fn compatible(&self, other: &Self) -> bool {
        match (self.radicand(), other.radicand()) {
            (Some(m1), Some(m2)) => m1 == m2,
            _ => true,
        }
    }

    /// Checks a batch of scalars for a common field; returns its radicand.
    pub fn common_radicand<'a, I>(items: I) -> Result<Option<BigInt>>
    where
        I: IntoIterator<Item = &'a QuadScalar>,
    {
        let mut found: Option<BigInt> = None;
        for s in items {
            if let Some(m) = s.radicand() {
                match &found {
                    None => found = Some(m.clone()),
                    Some(f) if f == m => {}
                    Some(f) => {
                        return Err(Error::NestedExtension {
                            detail: format!("values in Q(√{f}) and Q(√{m})"),
                        })
                    }
                }
            }
        }
        Ok(found)
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "inverse of zero");
        let n = self.norm();
        QuadScalar::new_unchecked(&self.a / &n, -(&self.b / &n), self.m.clone())
    }

    fn new_unchecked(a: Rational, b: Rational, m: BigInt) -> Self {
        let mut s = QuadScalar { a, b, m };
        s.normalize();
        s
    }

    /// Sign of a real value; `None` for a non-real element (negative radicand).
    pub fn signum(&self) -> Option<i32> {
        let sa = sign_of(&self.a);
        let sb = sign_of(&self.b);
        if sb == 0 {
            return Some(sa);
        }
        if self.m.is_negative() {
            return None;
        }
        if sa == 0 || sa == sb {
            return Some(sb);
        }
        // opposite signs: compare a² with m b²
        let m = Rational::from_integer(self.m.clone());
        let lhs = &self.a * &self.a;
        let rhs = m * &self.b * &self.b;
        Some(match lhs.cmp(&rhs) {
            Ordering::Greater => sa,
            Ordering::Less => sb,
            Ordering::Equal => 0,
        })
    }

    pub fn to_f64(&self) -> f64 {
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        if self.b.is_zero() {
            return a;
        }
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        let m = self.m.to_f64().unwrap_or(f64::NAN);
        if m < 0.0 {
            f64::NAN
        } else {
            a + b * m.sqrt()
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = QuadScalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

pub fn sign_of(r: &Rational) -> i32 {
    if r.is_zero() {
        0
    } else if r.is_positive() {
        1
    } else {
        -1
    }
}

impl From<Rational> for QuadScalar {
    fn from(r: Rational) -> Self {
        QuadScalar::rational(r)
    }
}

impl From<&Rational> for QuadScalar {
    fn from(r: &Rational) -> Self {
        QuadScalar::rational(r.clone())
    }
}

impl fmt::Display for QuadScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            write!(f, "{}*sqrt({})", self.b, self.m)
        } else if self.b.is_negative() {
            write!(f, "{} - {}*sqrt({})", self.a, -self.b.clone(), self.m)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.m)
        }
    }
}

impl<'a> Add<&'a QuadScalar> for &'a QuadScalar {
    type Output = QuadScalar;
    fn add(self, o: &QuadScalar) -> QuadScalar {
        let m = self.merged_radicand(o);
        QuadScalar::new_unchecked(&self.a + &o.a, &self.b + &o.b, m)
    }
}

impl<'a> Sub<&'a QuadScalar> for &'a QuadScalar {
    type Output = QuadScalar;
    fn sub(self, o: &QuadScalar) -> QuadScalar {
        let m = self.merged_radicand(o);
        QuadScalar::new_unchecked(&self.a - &o.a, &self.b - &o.b, m)
    }
}

impl<'a> Mul<&'a QuadScalar> for &'a QuadScalar {
    type Output = QuadScalar;
    fn mul(self, o: &QuadScalar) -> QuadScalar {
        let m = self.merged_radicand(o);
        let mr = Rational::from_integer(m.clone());
        let a = &self.a * &o.a + mr * &self.b * &o.b;
        let b = &self.a * &o.b + &self.b * &o.a;
        QuadScalar::new_unchecked(a, b, m)
    }
}

impl<'a> Div<&'a QuadScalar> for &'a QuadScalar {
    type Output = QuadScalar;
    fn div(self, o: &QuadScalar) -> QuadScalar {
        self * &o.inv()
    }
}

impl Neg for &QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        QuadScalar::new_unchecked(-self.a.clone(), -self.b.clone(), self.m.clone())
    }
}

macro_rules! forward_owned {
    ($($tr:ident $method:ident),*) => {$(
        impl $tr<QuadScalar> for QuadScalar {
            type Output = QuadScalar;
            fn $method(self, o: QuadScalar) -> QuadScalar { (&self).$method(&o) }
        }
        impl<'a> $tr<&'a QuadScalar> for QuadScalar {
            type Output = QuadScalar;
            fn $method(self, o: &QuadScalar) -> QuadScalar { (&self).$method(o) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul, Div div);

impl Neg for QuadScalar {
    type Output = QuadScalar;
    fn neg(self) -> QuadScalar {
        -&self
    }
}

#[derive(Serialize, Deserialize)]
struct QuadRepr {
    a: String,
    b: String,
    m: i64,
}

impl Serialize for QuadScalar {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_rational() {
            return s.serialize_str(&fmt_rational(&self.a));
        }
        let m = self
            .m
            .to_i64()
            .ok_or_else(|| serde::ser::Error::custom("radicand exceeds i64"))?;
        QuadRepr { a: fmt_rational(&self.a), b: fmt_rational(&self.b), m }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for QuadScalar {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Either {
            Plain(String),
            Ext(QuadRepr),
        }
        use serde::de::Error as _;
        match Either::deserialize(d)? {
            Either::Plain(s) => parse_rational(&s).map(QuadScalar::rational).map_err(D::Error::custom),
            Either::Ext(r) => {
                let a = parse_rational(&r.a).map_err(D::Error::custom)?;
                let b = parse_rational(&r.b).map_err(D::Error::custom)?;
                let m = BigInt::from(r.m);
                if b.is_zero() {
                    return Ok(QuadScalar::rational(a));
                }
                let (s, k) = if m.is_zero() { (BigInt::zero(), m.clone()) } else { square_free_split(&m) };
                if m.is_zero() || !s.is_one() || k.is_one() {
                    return Err(D::Error::custom(format!("radicand {m} is not a square-free non-unit")));
                }
                Ok(QuadScalar::new(a, b, m))
            }
        }
    }
}

/// Least common multiple of the denominators.
pub fn denominators_lcm<'a, I: IntoIterator<Item = &'a Rational>>(items: I) -> BigInt {
    items.into_iter().fold(BigInt::one(), |acc, r| acc.lcm(r.denom()))
}

/// Scales a vector of rationals to coprime integers with the first nonzero
/// entry positive. Returns `None` for the zero vector.
pub fn primitive_integer_vector(v: &[Rational]) -> Option<Vec<Rational>> {
    let first = v.iter().position(|x| !x.is_zero())?;
    let l = denominators_lcm(v);
    let ints: Vec<BigInt> = v.iter().map(|x| (x * Rational::from_integer(l.clone())).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    let sign = if ints[first].is_negative() { -BigInt::one() } else { BigInt::one() };
    Some(ints.into_iter().map(|x| Rational::from_integer(x / &g * &sign)).collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-6/4").unwrap(), ratio(-3, 2));
        assert_eq!(parse_rational(" 7 ").unwrap(), q(7));
        assert_eq!(fmt_rational(&ratio(3, -6)), "-1/2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    #[test]
    fn square_free_split_cases() {
        for (n, s, k) in [(12, 2, 3), (-50, 5, -2), (1, 1, 1), (49, 7, 1), (167184, 36, 129), (2 * 101 * 103, 1, 2 * 101 * 103)] {
            let (rs, rk) = square_free_split(&BigInt::from(n));
            assert_eq!((rs, rk), (BigInt::from(s), BigInt::from(k)), "n = {n}");
        }
        // square of a large prime left after trial division
        let p = BigInt::from(1_000_003i64);
        let (s, k) = square_free_split(&(&p * &p * 6));
        assert_eq!((s, k), (p, BigInt::from(6)));
    }

    #[test]
    fn quadratic_field_arithmetic() {
        let r5 = QuadScalar::new(q(0), q(1), BigInt::from(5));
        let phi = (&QuadScalar::one() + &r5) / QuadScalar::from_int(2);
        // golden ratio satisfies x² = x + 1
        assert_eq!(&phi * &phi, &phi + &QuadScalar::one());
        assert_eq!((&phi * &phi.inv()), QuadScalar::one());
        assert_eq!(&r5 * &r5, QuadScalar::from_int(5));
        assert!((&r5 - &r5).is_rational());
    }

    #[test]
    fn signs_of_real_quadratic_numbers() {
        let x = QuadScalar::new(q(3), q(-1), BigInt::from(5)); // 3 - √5 > 0
        assert_eq!(x.signum(), Some(1));
        let y = QuadScalar::new(q(2), q(-1), BigInt::from(5)); // 2 - √5 < 0
        assert_eq!(y.signum(), Some(-1));
        let i = QuadScalar::new(q(0), q(1), BigInt::from(-1));
        assert_eq!(i.signum(), None);
    }

    #[test]
    fn rational_square_roots() {
        assert_eq!(sqrt_rational(&ratio(9, 4)), QuadScalar::rational(ratio(3, 2)));
        let s = sqrt_rational(&ratio(1, 2));
        assert_eq!(s, QuadScalar::new(q(0), ratio(1, 2), BigInt::from(2)));
        assert_eq!(&s * &s, QuadScalar::rational(ratio(1, 2)));
        assert!(!is_rational_square(&q(-4)));
    }

    #[test]
    fn json_round_trip() {
        let x = QuadScalar::new(ratio(1, 3), q(-2), BigInt::from(-7));
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"a":"1/3","b":"-2","m":-7}"#);
        assert_eq!(serde_json::from_str::<QuadScalar>(&s).unwrap(), x);
        assert_eq!(serde_json::to_string(&QuadScalar::from_int(4)).unwrap(), "\"4\"");
        assert!(serde_json::from_str::<QuadScalar>(r#"{"a":"0","b":"1","m":8}"#).is_err());
    }

    #[test]
    fn primitive_vectors() {
        let v = primitive_integer_vector(&[ratio(-1, 2), q(1), ratio(3, 4)]).unwrap();
        assert_eq!(v, vec![q(2), q(-4), q(-3)]);
        assert!(primitive_integer_vector(&[q(0), q(0)]).is_none());
    }
}
