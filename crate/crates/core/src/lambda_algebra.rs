//! Truncated power series over `Z_p`, standing in for the Iwasawa algebra `Λ(Γ) ≅ Z_p[[T]]`.
//!
//! A [`LambdaSeries`] is known modulo the ideal `(p^N, T^D)`: coefficients live in
//! `[0, p^N)` and only the terms `1, T, …, T^(D-1)` are stored. Binary operations
//! return the coarser of the two precisions.
//!
//! Weierstrass preparation treats the stored coefficients as the representative
//! polynomial of the series and factors it p-adically as `p^μ · P · U` by Hensel
//! lifting the factorization `T^λ · ū` from `F_p[T]`. The factorization of the
//! representative is unique, so the result is canonical at the given precision.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use serde::{Serialize, Serializer};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::modular::PrimePowerRing;
use crate::padics::{ensure_prime, value_to_bigint};
use crate::poly_parse::parse_poly;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct LambdaSeries {
    prime: u64,
    precision: u32,
    trunc_degree: usize,
    coeffs: Vec<u64>,
}

impl LambdaSeries {
    /// Builds a series from integer coefficients (little-endian in `T`), reducing them into `[0, p^N)`.
    ///
    /// Supplying more than `D` coefficients is an error rather than a silent truncation.
    pub fn new(prime: u64, precision: u32, trunc_degree: usize, coeffs: &[BigInt]) -> Result<Self> {
        ensure_prime(prime)?;
        let ring = PrimePowerRing::new(prime, precision)?;
        if trunc_degree == 0 {
            return Err(Error::InvalidPrecision(
                "truncation degree must be >= 1".into(),
            ));
        }
        if coeffs.len() > trunc_degree {
            return Err(Error::InvalidPrecision(format!(
                "{} coefficients supplied for truncation degree {trunc_degree}",
                coeffs.len()
            )));
        }
        let modulus = BigInt::from(ring.modulus);
        let mut out = vec![0u64; trunc_degree];
        for (slot, c) in out.iter_mut().zip(coeffs) {
            *slot = c
                .mod_floor(&modulus)
                .to_u64()
                .expect("reduced residue fits");
        }
        Ok(Self {
            prime,
            precision,
            trunc_degree,
            coeffs: out,
        })
    }

    pub fn from_i64s(
        prime: u64,
        precision: u32,
        trunc_degree: usize,
        coeffs: &[i64],
    ) -> Result<Self> {
        let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
        Self::new(prime, precision, trunc_degree, &big)
    }

    /// Parses a polynomial expression in `T` such as `"T(T-7)"` or `"7*(T+7)*(1+7T)"`.
    pub fn parse(prime: u64, precision: u32, trunc_degree: usize, expr: &str) -> Result<Self> {
        let coeffs = parse_poly(expr, trunc_degree)?;
        Self::new(prime, precision, trunc_degree, &coeffs)
    }

    /// Accepts either `{"p":7,"N":8,"D":20,"coeffs":[...]}` or a polynomial string.
    ///
    /// The defaults are used only for fields the value does not carry itself; a value
    /// that states its own `p` must agree with `default_prime`.
    pub fn from_json(
        v: &Value,
        default_prime: u64,
        default_precision: u32,
        default_trunc: usize,
    ) -> Result<Self> {
        match v {
            Value::String(s) => Self::parse(default_prime, default_precision, default_trunc, s),
            Value::Object(map) => {
                let get_u64 = |key: &str| -> Result<Option<u64>> {
                    match map.get(key) {
                        None => Ok(None),
                        Some(x) => x.as_u64().map(Some).ok_or_else(|| {
                            Error::Parse(format!("field {key:?} must be a non-negative integer"))
                        }),
                    }
                };
                let prime = get_u64("p")?.unwrap_or(default_prime);
                if prime != default_prime {
                    return Err(Error::PrimeMismatch {
                        left: default_prime,
                        right: prime,
                    });
                }
                let precision = get_u64("N")?.map(|n| n as u32).unwrap_or(default_precision);
                let trunc = get_u64("D")?.map(|d| d as usize).unwrap_or(default_trunc);
                match (map.get("coeffs"), map.get("series")) {
                    (Some(Value::Array(cs)), None) => {
                        let coeffs = cs.iter().map(value_to_bigint).collect::<Result<Vec<_>>>()?;
                        Self::new(prime, precision, trunc, &coeffs)
                    }
                    (None, Some(Value::String(s))) => Self::parse(prime, precision, trunc, s),
                    _ => Err(Error::Parse(
                        "series needs exactly one of \"coeffs\" (array) or \"series\" (string)"
                            .into(),
                    )),
                }
            }
            other => Err(Error::Parse(format!(
                "expected series object or string, got {other}"
            ))),
        }
    }

    /// Reads a standalone series document; `p`, `N` and `D` are mandatory there.
    pub fn from_document(v: &Value) -> Result<Self> {
        let field = |k: &str| {
            v.get(k)
                .and_then(Value::as_u64)
                .ok_or_else(|| Error::Parse(format!("series document needs integer field {k:?}")))
        };
        let p = field("p")?;
        let n = field("N")?;
        let d = field("D")?;
        let n = u32::try_from(n).map_err(|_| Error::InvalidPrecision(format!("N = {n}")))?;
        Self::from_json(v, p, n, d as usize)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.prime,
            "N": self.precision,
            "D": self.trunc_degree,
            "coeffs": self.coeffs,
        })
    }

    pub fn one(prime: u64, precision: u32, trunc_degree: usize) -> Result<Self> {
        Self::from_i64s(prime, precision, trunc_degree, &[1])
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    /// `N`: coefficients are known modulo `p^N`.
    pub fn precision(&self) -> u32 {
        self.precision
    }

    /// `D`: terms are known up to `T^(D-1)`.
    pub fn trunc_degree(&self) -> usize {
        self.trunc_degree
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    /// Coefficient `i` as a signed integer in `(-p^N/2, p^N/2]`.
    pub fn coeff_signed(&self, i: usize) -> i128 {
        let m = self.ring().modulus as i128;
        let c = self.coeff(i) as i128;
        if 2 * c > m {
            c - m
        } else {
            c
        }
    }

    pub(crate) fn ring(&self) -> PrimePowerRing {
        PrimePowerRing::new(self.prime, self.precision).expect("validated at construction")
    }

    pub fn modulus(&self) -> u64 {
        self.ring().modulus
    }

    pub fn is_zero_at_precision(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// Same prime, and coefficients agree mod `p^min(N)` up to degree `min(D) - 1`.
    pub fn equal_at_precision(&self, other: &LambdaSeries) -> bool {
        if self.prime != other.prime {
            return false;
        }
        let n = self.precision.min(other.precision);
        let m = self.prime.pow(n);
        let d = self.trunc_degree.min(other.trunc_degree);
        (0..d).all(|i| self.coeffs[i] % m == other.coeffs[i] % m)
    }

    fn check_prime(&self, other: &LambdaSeries) -> Result<()> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch {
                left: self.prime,
                right: other.prime,
            });
        }
        Ok(())
    }

    /// Rewrites the coefficients at a coarser precision.
    pub fn with_precision(&self, precision: u32, trunc_degree: usize) -> Result<Self> {
        if precision > self.precision || trunc_degree > self.trunc_degree {
            return Err(Error::InvalidPrecision(format!(
                "cannot refine ({}, {}) to ({precision}, {trunc_degree})",
                self.precision, self.trunc_degree
            )));
        }
        let ring = PrimePowerRing::new(self.prime, precision)?;
        Ok(Self {
            prime: self.prime,
            precision,
            trunc_degree,
            coeffs: self.coeffs[..trunc_degree]
                .iter()
                .map(|&c| ring.reduce(c))
                .collect(),
        })
    }

    pub fn add(&self, other: &LambdaSeries) -> Result<Self> {
        self.check_prime(other)?;
        let n = self.precision.min(other.precision);
        let d = self.trunc_degree.min(other.trunc_degree);
        let ring = PrimePowerRing::new(self.prime, n)?;
        let coeffs = (0..d)
            .map(|i| ring.add(ring.reduce(self.coeffs[i]), ring.reduce(other.coeffs[i])))
            .collect();
        Ok(Self {
            prime: self.prime,
            precision: n,
            trunc_degree: d,
            coeffs,
        })
    }

    pub fn neg(&self) -> Self {
        let ring = self.ring();
        Self {
            coeffs: self.coeffs.iter().map(|&c| ring.neg(c)).collect(),
            ..self.clone()
        }
    }

    pub fn sub(&self, other: &LambdaSeries) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &LambdaSeries) -> Result<Self> {
        self.check_prime(other)?;
        let n = self.precision.min(other.precision);
        let d = self.trunc_degree.min(other.trunc_degree);
        let ring = PrimePowerRing::new(self.prime, n)?;
        let a: Vec<u64> = self.coeffs[..d].iter().map(|&c| ring.reduce(c)).collect();
        let b: Vec<u64> = other.coeffs[..d].iter().map(|&c| ring.reduce(c)).collect();
        Ok(Self {
            prime: self.prime,
            precision: n,
            trunc_degree: d,
            coeffs: ring.poly_mul(&a, &b, d),
        })
    }

    /// Multiplies by `p^k`; the result is still known modulo `p^N`.
    pub fn scale_by_p_power(&self, k: u32) -> Self {
        let ring = self.ring();
        let f = if k >= self.precision {
            0
        } else {
            ring.p_power(k)
        };
        Self {
            coeffs: self.coeffs.iter().map(|&c| ring.mul(c, f)).collect(),
            ..self.clone()
        }
    }

    /// Divides by `T^k`. The caller guarantees the first `k` coefficients vanish; `D` drops by `k`.
    pub fn shift_down(&self, k: usize) -> Result<Self> {
        if k >= self.trunc_degree || self.coeffs[..k].iter().any(|&c| c != 0) {
            return Err(Error::InvalidInput(format!(
                "series is not divisible by T^{k} at precision"
            )));
        }
        Ok(Self {
            prime: self.prime,
            precision: self.precision,
            trunc_degree: self.trunc_degree - k,
            coeffs: self.coeffs[k..].to_vec(),
        })
    }

    /// Divides by `p^k`. Every coefficient must be divisible by `p^k`; `N` drops by `k`.
    pub fn divide_by_p_power(&self, k: u32) -> Result<Self> {
        if k >= self.precision {
            return Err(Error::ZeroAtPrecision);
        }
        let f = self.prime.pow(k);
        if self.coeffs.iter().any(|&c| c % f != 0) {
            return Err(Error::InvalidInput(format!(
                "series is not divisible by p^{k}"
            )));
        }
        Ok(Self {
            prime: self.prime,
            precision: self.precision - k,
            trunc_degree: self.trunc_degree,
            coeffs: self.coeffs.iter().map(|&c| c / f).collect(),
        })
    }

    /// Smallest index with a coefficient that is nonzero mod `p^N`, together with that coefficient.
    pub fn leading_term(&self) -> Result<LeadingTerm> {
        let ring = self.ring();
        let (k, &alpha) = self
            .coeffs
            .iter()
            .enumerate()
            .find(|(_, &c)| c != 0)
            .ok_or(Error::ZeroAtPrecision)?;
        Ok(LeadingTerm {
            alpha,
            alpha_valuation: ring.valuation(alpha).expect("nonzero"),
            k,
            precision: self.precision,
        })
    }

    /// `min_i v_p(c_i)` over the stored coefficients.
    pub fn content_valuation(&self) -> Result<u32> {
        let ring = self.ring();
        self.coeffs
            .iter()
            .filter_map(|&c| ring.valuation(c))
            .min()
            .ok_or(Error::ZeroAtPrecision)
    }

    pub fn weierstrass_prepare(&self) -> Result<WeierstrassForm> {
        let mu = self.content_valuation()?;
        let reduced = self.divide_by_p_power(mu)?;
        let lambda = reduced
            .coeffs
            .iter()
            .position(|&c| c % self.prime != 0)
            .ok_or(Error::LambdaExceedsTruncation {
                trunc_degree: self.trunc_degree,
            })?;
        let (poly, unit) = hensel_split(&reduced, lambda);
        Ok(WeierstrassForm {
            prime: self.prime,
            source_precision: self.precision,
            mu,
            lambda,
            distinguished_poly: poly,
            unit: LambdaSeries {
                prime: self.prime,
                precision: reduced.precision,
                trunc_degree: self.trunc_degree,
                coeffs: unit,
            },
        })
    }

    /// `(μ, λ)` of the series.
    pub fn mu_lambda(&self) -> Result<(u32, usize)> {
        let w = self.weierstrass_prepare()?;
        Ok((w.mu, w.lambda))
    }
}

/// Splits `h` (with `h_λ` the first unit coefficient) as `P · U` modulo `p^N`.
///
/// Starting from `h ≡ T^λ · ū (mod p)`, each step solves `a·U + b·P ≡ e (mod p)` with
/// `deg a < λ`, using `t = ū^{-1} mod (p, T^λ)`.
fn hensel_split(h: &LambdaSeries, lambda: usize) -> (Vec<u64>, Vec<u64>) {
    let ring = h.ring();
    let d = h.trunc_degree;
    let p = h.prime;
    let modp = PrimePowerRing::new(p, 1).expect("prime fits");

    let mut poly = vec![0u64; lambda + 1];
    poly[lambda] = 1;
    let mut unit = vec![0u64; d];
    unit[..d - lambda].copy_from_slice(&h.coeffs[lambda..]);
    if lambda == 0 {
        return (poly, unit);
    }

    // t = ū^{-1} mod (p, T^λ)
    let ubar: Vec<u64> = unit[..lambda].iter().map(|&c| c % p).collect();
    let inv0 = modp.inverse(ubar[0]).expect("unit constant term");
    let mut t = vec![0u64; lambda];
    t[0] = inv0;
    for i in 1..lambda {
        let mut s = 0u64;
        for j in 1..=i {
            s = modp.add(s, modp.mul(ubar[j], t[i - j]));
        }
        t[i] = modp.mul(modp.neg(s), inv0);
    }

    let mut pk = 1u64;
    for _ in 1..h.precision {
        pk *= p;
        let prod = ring.poly_mul(&poly, &unit, d);
        let err: Vec<u64> = (0..d).map(|i| ring.sub(h.coeffs[i], prod[i])).collect();
        if err.iter().all(|&c| c == 0) {
            break;
        }
        debug_assert!(err.iter().all(|&c| c % pk == 0), "Hensel invariant");
        let ebar: Vec<u64> = err.iter().map(|&c| (c / pk) % p).collect();
        let a = modp.poly_mul(&ebar, &t, lambda);
        let ubar_now: Vec<u64> = unit.iter().map(|&c| c % p).collect();
        let au = modp.poly_mul(&a, &ubar_now, d);
        let rest: Vec<u64> = (0..d).map(|i| modp.sub(ebar[i], au[i])).collect();
        debug_assert!(rest[..lambda].iter().all(|&c| c == 0));
        for i in 0..lambda {
            poly[i] = ring.add(poly[i], ring.mul(a[i], pk));
        }
        for i in 0..d - lambda {
            unit[i] = ring.add(unit[i], ring.mul(rest[i + lambda], pk));
        }
    }
    (poly, unit)
}

/// `α · T^k` with `α` a residue mod `p^N`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct LeadingTerm {
    pub alpha: u64,
    pub alpha_valuation: u32,
    pub k: usize,
    pub precision: u32,
}

/// `g = p^μ · P · U` with `P` distinguished of degree `λ` and `U` a unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeierstrassForm {
    pub prime: u64,
    /// precision `N` of the series that was prepared
    pub source_precision: u32,
    pub mu: u32,
    pub lambda: usize,
    /// little-endian, monic, known mod `p^(N-μ)`
    pub distinguished_poly: Vec<u64>,
    pub unit: LambdaSeries,
}

impl WeierstrassForm {
    /// Precision `N - μ` to which `P` and `U` are determined.
    pub fn factor_precision(&self) -> u32 {
        self.unit.precision
    }

    pub fn poly_series(&self) -> LambdaSeries {
        let mut coeffs = vec![0u64; self.unit.trunc_degree];
        for (i, &c) in self
            .distinguished_poly
            .iter()
            .enumerate()
            .take(coeffs.len())
        {
            coeffs[i] = c;
        }
        LambdaSeries {
            prime: self.prime,
            precision: self.unit.precision,
            trunc_degree: self.unit.trunc_degree,
            coeffs,
        }
    }

    /// `p^μ · P · U` at the precision of the prepared series.
    pub fn reconstruct(&self) -> LambdaSeries {
        let pu = self.poly_series().mul(&self.unit).expect("same prime");
        let f = self.prime.pow(self.mu);
        LambdaSeries {
            prime: self.prime,
            precision: self.source_precision,
            trunc_degree: pu.trunc_degree,
            coeffs: pu.coeffs.iter().map(|&c| c * f).collect(),
        }
    }

    /// Equality of characteristic elements: same `μ`, and `P` agrees at the common precision.
    pub fn same_char_element(&self, other: &WeierstrassForm) -> bool {
        if self.prime != other.prime || self.mu != other.mu || self.lambda != other.lambda {
            return false;
        }
        let m = self
            .prime
            .pow(self.factor_precision().min(other.factor_precision()));
        self.distinguished_poly
            .iter()
            .zip(&other.distinguished_poly)
            .all(|(a, b)| a % m == b % m)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "mu": self.mu,
            "lambda": self.lambda,
            "distinguished_poly": format_poly(&self.distinguished_poly, self.factor_precision_modulus()),
            "distinguished_coeffs": self.distinguished_poly,
            "unit": self.unit.to_json(),
        })
    }

    fn factor_precision_modulus(&self) -> u64 {
        self.prime.pow(self.factor_precision())
    }
}

fn format_poly(coeffs: &[u64], modulus: u64) -> String {
    let mut terms = Vec::new();
    for (i, &c) in coeffs.iter().enumerate().rev() {
        if c == 0 {
            continue;
        }
        let signed = if 2 * (c as i128) > modulus as i128 {
            c as i128 - modulus as i128
        } else {
            c as i128
        };
        let mono = match i {
            0 => String::new(),
            1 => "T".to_string(),
            _ => format!("T^{i}"),
        };
        let body = match (signed.abs(), i) {
            (1, 0) => "1".to_string(),
            (1, _) => mono,
            (a, 0) => a.to_string(),
            (a, _) => format!("{a}*{mono}"),
        };
        if terms.is_empty() {
            terms.push(if signed < 0 { format!("-{body}") } else { body });
        } else {
            terms.push(format!("{} {body}", if signed < 0 { "-" } else { "+" }));
        }
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" ")
    }
}

impl fmt::Display for LambdaSeries {
    /// Coefficients are printed as balanced residues mod `p^N`, highest degree first.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} + O(p^{}, T^{})",
            format_poly(&self.coeffs, self.modulus()),
            self.precision,
            self.trunc_degree
        )
    }
}

impl Serialize for LambdaSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_json().serialize(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ser(p: u64, n: u32, d: usize, c: &[i64]) -> LambdaSeries {
        LambdaSeries::from_i64s(p, n, d, c).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let one = ser(7, 3, 5, &[1]);
        let t1 = ser(7, 3, 5, &[1, 1]);
        assert_eq!(one.mul(&t1).unwrap(), t1);
        let t = ser(7, 3, 5, &[0, 1]);
        assert_eq!(t.mul(&t).unwrap(), ser(7, 3, 5, &[0, 0, 1]));
        let a = ser(7, 3, 5, &[7, 1]);
        let b = ser(7, 3, 5, &[1, 7]);
        assert_eq!(a.mul(&b).unwrap(), ser(7, 3, 5, &[7, 50, 7]));
        assert_eq!(a.add(&b).unwrap(), ser(7, 3, 5, &[8, 8]));
    }

    #[test]
    fn precision_is_the_coarser_one() {
        let a = ser(5, 4, 10, &[1, 2, 3]);
        let b = ser(5, 2, 6, &[1, 1]);
        let c = a.mul(&b).unwrap();
        assert_eq!((c.precision(), c.trunc_degree()), (2, 6));
    }

    #[test]
    fn prime_mismatch() {
        let a = ser(5, 4, 10, &[1]);
        let b = ser(7, 4, 10, &[1]);
        assert_eq!(a.mul(&b), Err(Error::PrimeMismatch { left: 5, right: 7 }));
        assert!(a.add(&b).is_err());
    }

    #[test]
    fn too_many_coefficients_is_an_error() {
        assert!(LambdaSeries::from_i64s(7, 3, 2, &[1, 2, 3]).is_err());
        assert!(LambdaSeries::from_i64s(7, 0, 2, &[1]).is_err());
        assert!(LambdaSeries::from_i64s(7, 3, 0, &[]).is_err());
        assert_eq!(
            LambdaSeries::from_i64s(6, 3, 2, &[1]),
            Err(Error::NotPrime(6))
        );
    }

    #[test]
    fn prepare_unit() {
        let w = ser(7, 5, 6, &[1, 1]).weierstrass_prepare().unwrap();
        assert_eq!((w.mu, w.lambda), (0, 0));
        assert_eq!(w.distinguished_poly, vec![1]);
        assert!(w.unit.equal_at_precision(&ser(7, 5, 6, &[1, 1])));
    }

    #[test]
    fn prepare_distinguished_input() {
        let w = ser(7, 5, 6, &[7, 1]).weierstrass_prepare().unwrap();
        assert_eq!((w.mu, w.lambda), (0, 1));
        assert_eq!(w.distinguished_poly, vec![7, 1]);
        assert!(w.unit.equal_at_precision(&ser(7, 5, 6, &[1])));
        assert_eq!(w.reconstruct(), ser(7, 5, 6, &[7, 1]));
    }

    #[test]
    fn prepare_product_of_factors() {
        // 7·(T+7)·(1+7T) = 49 + 350T + 49T^2
        let g = LambdaSeries::parse(7, 6, 8, "7*(T+7)*(1+7T)").unwrap();
        assert_eq!(g, ser(7, 6, 8, &[49, 350, 49]));
        let w = g.weierstrass_prepare().unwrap();
        assert_eq!((w.mu, w.lambda), (1, 1));
        assert_eq!(w.distinguished_poly, vec![7, 1]);
        assert!(w.unit.equal_at_precision(&ser(7, 5, 8, &[1, 7])));
        assert_eq!(w.factor_precision(), 5);
        assert_eq!(w.reconstruct(), g);
    }

    #[test]
    fn prepare_errors_and_content() {
        assert_eq!(
            ser(7, 3, 4, &[343]).weierstrass_prepare(),
            Err(Error::ZeroAtPrecision)
        );
        // μ is the minimal coefficient valuation, so a unit always appears after dividing it out
        let w = ser(7, 3, 3, &[7, 49, 0]).weierstrass_prepare().unwrap();
        assert_eq!((w.mu, w.lambda, w.factor_precision()), (1, 0, 2));
        let w = ser(7, 3, 2, &[49, 7]).weierstrass_prepare().unwrap();
        assert_eq!((w.mu, w.lambda), (1, 1));
        assert_eq!(w.distinguished_poly, vec![7, 1]);
    }

    #[test]
    fn leading_term_examples() {
        let u = ser(7, 4, 6, &[3, 7, 1]);
        let ut = u.mul(&ser(7, 4, 6, &[0, 1])).unwrap();
        let lt = ut.leading_term().unwrap();
        assert_eq!((lt.alpha, lt.k, lt.alpha_valuation), (3, 1, 0));
        let lt = ser(7, 4, 6, &[1]).leading_term().unwrap();
        assert_eq!((lt.alpha, lt.k), (1, 0));
        let lt = ser(7, 3, 6, &[0, 0, 49, 343]).leading_term().unwrap();
        assert_eq!((lt.alpha, lt.k, lt.alpha_valuation), (49, 2, 2));
        assert_eq!(
            ser(7, 3, 6, &[0, 343]).leading_term(),
            Err(Error::ZeroAtPrecision)
        );
    }

    #[test]
    fn mu_lambda_examples() {
        assert_eq!(ser(5, 4, 6, &[25]).mu_lambda(), Ok((2, 0)));
        assert_eq!(ser(5, 4, 6, &[0, 0, 0, 1]).mu_lambda(), Ok((0, 3)));
        assert_eq!(
            LambdaSeries::parse(7, 5, 6, "7(T+7)").unwrap().mu_lambda(),
            Ok((1, 1))
        );
    }

    #[test]
    fn json_forms() {
        let v: Value = serde_json::from_str(r#"{"p":7,"N":8,"D":20,"coeffs":[7,1]}"#).unwrap();
        let s = LambdaSeries::from_document(&v).unwrap();
        assert_eq!(s, ser(7, 8, 20, &[7, 1]));
        assert_eq!(LambdaSeries::from_document(&s.to_json()).unwrap(), s);
        let v: Value = serde_json::from_str(r#"{"p":7,"N":8,"D":20,"coeffs":[-7,"1"]}"#).unwrap();
        assert_eq!(LambdaSeries::from_document(&v).unwrap().coeff_signed(0), -7);
        let v: Value = serde_json::from_str(r#"{"p":7,"N":8,"coeffs":[1]}"#).unwrap();
        assert!(LambdaSeries::from_document(&v).is_err());
        let v = Value::String("T^2".into());
        assert_eq!(
            LambdaSeries::from_json(&v, 7, 8, 10).unwrap(),
            ser(7, 8, 10, &[0, 0, 1])
        );
    }

    #[test]
    fn display_is_balanced() {
        let s = ser(7, 2, 4, &[-7, 0, 1]);
        assert_eq!(s.to_string(), "T^2 - 7 + O(p^2, T^4)");
    }

    fn arb_series(p: u64, n: u32, d: usize) -> impl Strategy<Value = LambdaSeries> {
        let m = p.pow(n) as i64;
        prop::collection::vec(0..m, d).prop_map(move |c| ser(p, n, d, &c))
    }

    fn arb_params() -> impl Strategy<Value = (u64, u32, usize)> {
        (
            prop::sample::select(vec![3u64, 5, 7, 11]),
            1u32..=10,
            1usize..=40,
        )
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn reconstruction_and_idempotence(g in arb_params().prop_flat_map(|(p, n, d)| arb_series(p, n, d))) {
            match g.weierstrass_prepare() {
                Ok(w) => {
                    prop_assert_eq!(&w.reconstruct(), &g);
                    prop_assert!(w.distinguished_poly[w.lambda] == 1);
                    prop_assert!(w.distinguished_poly[..w.lambda].iter().all(|c| c % g.prime() == 0));
                    prop_assert!(w.unit.coeff(0) % g.prime() != 0);
                    let again = w.reconstruct().weierstrass_prepare().unwrap();
                    prop_assert_eq!(&again, &w);
                }
                Err(Error::ZeroAtPrecision) => prop_assert!(g.is_zero_at_precision()),
                Err(Error::LambdaExceedsTruncation { .. }) => {}
                Err(e) => prop_assert!(false, "unexpected {e}"),
            }
        }
    }
}
