//! Exact p-adic scalars: valuations and the two absolute-value normalizations.
//!
//! Everything here is exact rational arithmetic. The magnitude `|x|_p` comes in
//! two flavours:
//!
//! * [`Convention::Standard`]: `|x|_p = p^(-v_p(x))`,
//! * [`Convention::Reciprocal`]: `|x|_p = p^(+v_p(x))`, the normalization under which
//!   `|49/36|_7 = 7^2`.
//!
//! Callers always name the convention they use.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Trial-division primality test. Inputs are desk scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn ensure_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// `v_p(n)` for a nonzero integer, `None` for zero.
pub fn int_valuation(n: &BigInt, p: u64) -> Option<u64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.abs();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// `v_p(n)` for a nonzero machine integer.
pub fn u64_valuation(mut n: u64, p: u64) -> Option<u32> {
    if n == 0 {
        return None;
    }
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    Some(v)
}

/// A p-adic valuation: either a finite integer or `+∞` (the valuation of zero).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Valuation {
    Finite(i64),
    Infinity,
}

impl Valuation {
    pub fn finite(self) -> Option<i64> {
        match self {
            Valuation::Finite(v) => Some(v),
            Valuation::Infinity => None,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(v) => write!(f, "{v}"),
            Valuation::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Convention {
    /// `|x|_p = p^(-v_p(x))`
    Standard,
    /// `|x|_p = p^(+v_p(x))`
    Reciprocal,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::Standard => "standard",
            Convention::Reciprocal => "reciprocal",
        }
    }
}

/// An integral power `p^e` of a prime, `e` possibly negative.
///
/// Every Euler characteristic produced by this crate is one of these.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PowerOfP {
    pub prime: u64,
    pub exponent: i64,
}

impl PowerOfP {
    pub fn new(prime: u64, exponent: i64) -> Self {
        Self { prime, exponent }
    }

    pub fn one(prime: u64) -> Self {
        Self::new(prime, 0)
    }

    pub fn to_rational(&self) -> BigRational {
        let base = BigInt::from(self.prime);
        let mag = num_traits::pow(base, self.exponent.unsigned_abs() as usize);
        if self.exponent >= 0 {
            BigRational::from_integer(mag)
        } else {
            BigRational::new(BigInt::one(), mag)
        }
    }

    pub fn inverse(&self) -> Self {
        Self::new(self.prime, -self.exponent)
    }

    /// Product of two powers of the same prime.
    pub fn mul(&self, other: &PowerOfP) -> Result<Self> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch {
                left: self.prime,
                right: other.prime,
            });
        }
        Ok(Self::new(self.prime, self.exponent + other.exponent))
    }

    /// Parses `"7^8"`, `"5^-1"`, `"1"` or a plain integer power such as `"49"`.
    pub fn parse(prime: u64, s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((base, exp)) = s.split_once('^') {
            let base: u64 = base
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad base in power {s:?}")))?;
            let exponent: i64 = exp
                .trim()
                .trim_start_matches('(')
                .trim_end_matches(')')
                .parse()
                .map_err(|_| Error::Parse(format!("bad exponent in power {s:?}")))?;
            if base != prime {
                return Err(Error::Parse(format!("{s:?} is not a power of {prime}")));
            }
            return Ok(Self::new(prime, exponent));
        }
        let r = parse_rational(s)?;
        let x = PadicScalar::new(prime, r)?;
        match x.magnitude(Convention::Reciprocal) {
            Magnitude::Power(m) if m.to_rational() == *x.value() => Ok(m),
            _ => Err(Error::Parse(format!("{s:?} is not a power of {prime}"))),
        }
    }
}

impl fmt::Display for PowerOfP {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.exponent == 0 {
            write!(f, "1")
        } else {
            write!(f, "{}^{}", self.prime, self.exponent)
        }
    }
}

impl Serialize for PowerOfP {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// `|x|_p` of a scalar: zero maps to a marker, never to a number.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Magnitude {
    Zero,
    Power(PowerOfP),
}

impl fmt::Display for Magnitude {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Magnitude::Zero => write!(f, "zero"),
            Magnitude::Power(m) => m.fmt(f),
        }
    }
}

impl Serialize for Magnitude {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// An exact rational number together with the prime at which it is measured.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PadicScalar {
    prime: u64,
    value: BigRational,
}

impl PadicScalar {
    pub fn new(prime: u64, value: BigRational) -> Result<Self> {
        ensure_prime(prime)?;
        Ok(Self { prime, value })
    }

    pub fn from_parts(
        prime: u64,
        numerator: impl Into<BigInt>,
        denominator: impl Into<BigInt>,
    ) -> Result<Self> {
        let den = denominator.into();
        if den.is_zero() {
            return Err(Error::InvalidInput("zero denominator".into()));
        }
        Self::new(prime, BigRational::new(numerator.into(), den))
    }

    pub fn from_integer(prime: u64, n: impl Into<BigInt>) -> Result<Self> {
        Self::new(prime, BigRational::from_integer(n.into()))
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn value(&self) -> &BigRational {
        &self.value
    }

    pub fn numerator(&self) -> &BigInt {
        self.value.numer()
    }

    pub fn denominator(&self) -> &BigInt {
        self.value.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.value.is_zero()
    }

    pub fn valuation(&self) -> Valuation {
        match int_valuation(self.numerator(), self.prime) {
            None => Valuation::Infinity,
            Some(vn) => {
                let vd = int_valuation(self.denominator(), self.prime).unwrap_or(0);
                Valuation::Finite(vn as i64 - vd as i64)
            }
        }
    }

    pub fn magnitude(&self, convention: Convention) -> Magnitude {
        match self.valuation() {
            Valuation::Infinity => Magnitude::Zero,
            Valuation::Finite(v) => {
                let e = match convention {
                    Convention::Standard => -v,
                    Convention::Reciprocal => v,
                };
                Magnitude::Power(PowerOfP::new(self.prime, e))
            }
        }
    }

    pub fn mul(&self, other: &PadicScalar) -> Result<Self> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch {
                left: self.prime,
                right: other.prime,
            });
        }
        Ok(Self {
            prime: self.prime,
            value: &self.value * &other.value,
        })
    }
}

impl fmt::Display for PadicScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&format_rational(&self.value))
    }
}

/// `"num/den"`, with `/den` omitted when the denominator is 1.
pub fn format_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Result<BigRational> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad rational {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
            let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(n, d))
        }
        None => Ok(BigRational::from_integer(
            BigInt::from_str(s).map_err(|_| bad())?,
        )),
    }
}

/// Serde adapter for rationals encoded as `"num/den"` strings (plain JSON integers are accepted on input).
pub mod rational_str {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(r))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        d: D,
    ) -> std::result::Result<BigRational, D::Error> {
        let v = serde_json::Value::deserialize(d)?;
        value_to_rational(&v).map_err(serde::de::Error::custom)
    }
}

pub(crate) fn value_to_rational(v: &serde_json::Value) -> Result<BigRational> {
    match v {
        serde_json::Value::String(s) => parse_rational(s),
        serde_json::Value::Number(n) => match n.as_i64() {
            Some(i) => Ok(BigRational::from_integer(BigInt::from(i))),
            None => Err(Error::Parse(format!(
                "non-integer number {n}; use a \"num/den\" string"
            ))),
        },
        other => Err(Error::Parse(format!("expected rational, got {other}"))),
    }
}

pub(crate) fn value_to_bigint(v: &serde_json::Value) -> Result<BigInt> {
    let r = value_to_rational(v)?;
    if !r.is_integer() {
        return Err(Error::Parse(format!(
            "expected integer, got {}",
            format_rational(&r)
        )));
    }
    Ok(r.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(p: u64, n: i64, d: i64) -> PadicScalar {
        PadicScalar::from_parts(p, n, d).unwrap()
    }

    #[test]
    fn valuation_examples() {
        assert_eq!(s(7, 1, 1).valuation(), Valuation::Finite(0));
        assert_eq!(s(7, 49, 36).valuation(), Valuation::Finite(2));
        assert_eq!(s(5, 0, 1).valuation(), Valuation::Infinity);
        assert_eq!(s(5, 9, 10).valuation(), Valuation::Finite(-1));
    }

    #[test]
    fn magnitude_examples() {
        assert_eq!(
            s(7, 49, 36).magnitude(Convention::Reciprocal),
            Magnitude::Power(PowerOfP::new(7, 2))
        );
        assert_eq!(
            s(7, 13787, 12769).magnitude(Convention::Reciprocal),
            Magnitude::Power(PowerOfP::one(7))
        );
        let m = s(7, 7, 1).magnitude(Convention::Standard);
        match m {
            Magnitude::Power(pw) => {
                assert_eq!(pw.to_rational(), BigRational::new(1.into(), 7.into()))
            }
            Magnitude::Zero => panic!(),
        }
        assert_eq!(s(7, 0, 1).magnitude(Convention::Standard), Magnitude::Zero);
    }

    #[test]
    fn rejects_composite_prime() {
        assert_eq!(PadicScalar::from_integer(9, 1), Err(Error::NotPrime(9)));
        assert!(is_prime(2) && is_prime(113) && !is_prime(1) && !is_prime(91));
    }

    #[test]
    fn power_parse_and_display() {
        assert_eq!(PowerOfP::parse(7, "7^8").unwrap(), PowerOfP::new(7, 8));
        assert_eq!(PowerOfP::parse(7, "49").unwrap(), PowerOfP::new(7, 2));
        assert_eq!(PowerOfP::parse(5, "1/5").unwrap(), PowerOfP::new(5, -1));
        assert_eq!(PowerOfP::parse(7, "1").unwrap(), PowerOfP::one(7));
        assert!(PowerOfP::parse(7, "14").is_err());
        assert!(PowerOfP::parse(7, "5^2").is_err());
        assert_eq!(PowerOfP::new(7, 8).to_string(), "7^8");
        assert_eq!(PowerOfP::new(5, -1).to_string(), "5^-1");
        assert_eq!(PowerOfP::one(5).to_string(), "1");
    }

    #[test]
    fn rational_strings() {
        let r = parse_rational("49/36").unwrap();
        assert_eq!(format_rational(&r), "49/36");
        assert_eq!(format_rational(&parse_rational("-6/3").unwrap()), "-2");
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("x").is_err());
    }

    fn nonzero() -> impl Strategy<Value = (i64, i64)> {
        (
            (-100_000i64..100_000).prop_filter("nonzero", |n| *n != 0),
            1i64..100_000,
        )
    }

    proptest! {
        #[test]
        fn valuation_is_additive(p in prop::sample::select(vec![2u64, 3, 5, 7, 11]), a in nonzero(), b in nonzero()) {
            let x = s(p, a.0, a.1);
            let y = s(p, b.0, b.1);
            let vx = x.valuation().finite().unwrap();
            let vy = y.valuation().finite().unwrap();
            prop_assert_eq!(x.mul(&y).unwrap().valuation(), Valuation::Finite(vx + vy));
        }

        #[test]
        fn magnitude_is_multiplicative_and_conventions_are_inverse(p in prop::sample::select(vec![2u64, 3, 5, 7, 11]), a in nonzero(), b in nonzero()) {
            let x = s(p, a.0, a.1);
            let y = s(p, b.0, b.1);
            let xy = x.mul(&y).unwrap();
            for c in [Convention::Standard, Convention::Reciprocal] {
                let (Magnitude::Power(mx), Magnitude::Power(my), Magnitude::Power(mxy)) =
                    (x.magnitude(c), y.magnitude(c), xy.magnitude(c)) else { panic!() };
                prop_assert_eq!(mx.mul(&my).unwrap(), mxy);
            }
            let (Magnitude::Power(st), Magnitude::Power(pa)) =
                (x.magnitude(Convention::Standard), x.magnitude(Convention::Reciprocal)) else { panic!() };
            prop_assert!((st.to_rational() * pa.to_rational()).is_one());
        }
    }
}
