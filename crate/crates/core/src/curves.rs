//! Elliptic curves over `Q` in long Weierstrass form and their local data at good primes.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::padics::{
    ensure_prime, format_rational, is_prime, rational_str, value_to_rational, PadicScalar,
    Valuation,
};

/// Fields larger than this are not counted exhaustively.
pub const MAX_FIELD_SIZE: u64 = 1_000_000;

const PARALLEL_THRESHOLD: u64 = 1 << 14;

/// `y^2 + a1·xy + a3·y = x^3 + a2·x^2 + a4·x + a6`
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "CurveRepr", into = "CurveRepr")]
pub struct Curve {
    a: [BigRational; 5],
}

#[derive(Serialize, Deserialize)]
struct CurveRepr {
    a: Vec<serde_json::Value>,
}

impl TryFrom<CurveRepr> for Curve {
    type Error = Error;

    fn try_from(r: CurveRepr) -> Result<Self> {
        if r.a.len() != 5 {
            return Err(Error::Parse(format!(
                "curve needs 5 coefficients, got {}",
                r.a.len()
            )));
        }
        let a =
            r.a.iter()
                .map(value_to_rational)
                .collect::<Result<Vec<_>>>()?;
        Curve::new(a.try_into().expect("length checked"))
    }
}

impl From<Curve> for CurveRepr {
    fn from(c: Curve) -> Self {
        CurveRepr {
            a: c.a
                .iter()
                .map(|x| serde_json::Value::String(format_rational(x)))
                .collect(),
        }
    }
}

impl Curve {
    pub fn new(a: [BigRational; 5]) -> Result<Self> {
        let c = Self { a };
        if c.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(c)
    }

    pub fn from_integers(a: [i64; 5]) -> Result<Self> {
        Self::new(a.map(|x| BigRational::from_integer(BigInt::from(x))))
    }

    /// The curve `X_1(11): y^2 + y = x^3 - x^2`.
    pub fn x1_11() -> Self {
        Self::from_integers([0, -1, 1, 0, 0]).expect("nonsingular")
    }

    pub fn coefficients(&self) -> &[BigRational; 5] {
        &self.a
    }

    fn invariants(&self) -> [BigRational; 4] {
        let [a1, a2, a3, a4, a6] = &self.a;
        let two = BigRational::from_integer(2.into());
        let four = BigRational::from_integer(4.into());
        let b2 = a1 * a1 + &four * a2;
        let b4 = &two * a4 + a1 * a3;
        let b6 = a3 * a3 + &four * a6;
        let b8 = a1 * a1 * a6 + &four * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
        [b2, b4, b6, b8]
    }

    pub fn discriminant(&self) -> BigRational {
        let [b2, b4, b6, b8] = self.invariants();
        let r = |n: i64| BigRational::from_integer(n.into());
        -(&b2 * &b2 * &b8) - r(8) * &b4 * &b4 * &b4 - r(27) * &b6 * &b6 + r(9) * &b2 * &b4 * &b6
    }

    pub fn c4_c6(&self) -> (BigRational, BigRational) {
        let [b2, b4, b6, _] = self.invariants();
        let r = |n: i64| BigRational::from_integer(n.into());
        let c4 = &b2 * &b2 - r(24) * &b4;
        let c6 = -(&b2 * &b2 * &b2) + r(36) * &b2 * &b4 - r(216) * &b6;
        (c4, c6)
    }

    /// Quadratic twist by `d`, as the short model `y^2 = x^3 - 27 c4 d^2 x - 54 c6 d^3`.
    ///
    /// Over `F_q` with `q ≥ 5` and `d` a non-residue, `#E + #E^d = 2q + 2`.
    pub fn quadratic_twist(&self, d: i64) -> Result<Curve> {
        let (c4, c6) = self.c4_c6();
        let d = BigRational::from_integer(d.into());
        let r = |n: i64| BigRational::from_integer(n.into());
        let zero = BigRational::zero();
        Curve::new([
            zero.clone(),
            zero.clone(),
            zero,
            -(r(27) * c4 * &d * &d),
            -(r(54) * c6 * &d * &d * &d),
        ])
    }

    fn reduce_mod(&self, q: u64) -> Result<[u64; 5]> {
        let qb = BigInt::from(q);
        let mut out = [0u64; 5];
        for (slot, c) in out.iter_mut().zip(&self.a) {
            if c.denom().is_multiple_of(&qb) {
                return Err(Error::NotIntegral { q });
            }
            let num = c.numer().mod_floor(&qb).to_u64().expect("residue");
            let den = c.denom().mod_floor(&qb).to_u64().expect("residue");
            *slot = mul_mod(num, inv_mod(den, q), q);
        }
        Ok(out)
    }

    /// True iff `q` divides neither a coefficient denominator nor the discriminant of this model.
    pub fn has_good_reduction(&self, q: u64) -> bool {
        if self
            .a
            .iter()
            .any(|c| c.denom().is_multiple_of(&BigInt::from(q)))
        {
            return false;
        }
        let disc = self.discriminant();
        match int_valuation_rational(&disc, q) {
            Some(v) => v <= 0,
            None => false,
        }
    }

    /// `#Ẽ(F_q)` including the point at infinity, by exhaustive enumeration over `x`.
    pub fn count_points(&self, q: u64) -> Result<u64> {
        ensure_prime(q)?;
        if q > MAX_FIELD_SIZE {
            return Err(Error::FieldTooLarge {
                q,
                cap: MAX_FIELD_SIZE,
            });
        }
        let [a1, a2, a3, a4, a6] = self.reduce_mod(q)?;
        if !self.has_good_reduction(q) {
            return Err(Error::SingularReduction { q });
        }
        let count = if q == 2 {
            let mut n = 1;
            for x in 0..2u64 {
                for y in 0..2u64 {
                    let lhs = (y * y + a1 * x * y + a3 * y) % 2;
                    let rhs = (x * x * x + a2 * x * x + a4 * x + a6) % 2;
                    n += u64::from(lhs == rhs);
                }
            }
            n
        } else {
            // (2y + a1 x + a3)^2 = 4x^3 + b2 x^2 + 2 b4 x + b6
            let b2 = (mul_mod(a1, a1, q) + 4 * a2) % q;
            let b4 = (2 * a4 + mul_mod(a1, a3, q)) % q;
            let b6 = (mul_mod(a3, a3, q) + 4 * a6) % q;
            let per_x = |x: u64| -> u64 {
                let x2 = mul_mod(x, x, q);
                let x3 = mul_mod(x2, x, q);
                let rhs =
                    (mul_mod(4, x3, q) + mul_mod(b2, x2, q) + mul_mod(2 * b4 % q, x, q) + b6) % q;
                match legendre(rhs, q) {
                    0 => 1,
                    1 => 2,
                    _ => 0,
                }
            };
            let affine: u64 = if q >= PARALLEL_THRESHOLD {
                (0..q).into_par_iter().map(per_x).sum()
            } else {
                (0..q).map(per_x).sum()
            };
            affine + 1
        };
        debug_assert!({
            let a = q as i128 + 1 - count as i128;
            a * a <= 4 * q as i128
        });
        Ok(count)
    }

    /// Trace of Frobenius `a_l = l + 1 - #Ẽ(F_l)`.
    pub fn trace_of_frobenius(&self, l: u64) -> Result<i64> {
        Ok(l as i64 + 1 - self.count_points(l)? as i64)
    }
}

fn int_valuation_rational(x: &BigRational, q: u64) -> Option<i64> {
    let s = PadicScalar::new(q, x.clone()).ok()?;
    match s.valuation() {
        Valuation::Finite(v) => Some(v),
        Valuation::Infinity => None,
    }
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// Legendre symbol for odd prime `q`: 0, 1, or -1.
fn legendre(a: u64, q: u64) -> i32 {
    if a.is_multiple_of(q) {
        return 0;
    }
    if pow_mod(a, (q - 1) / 2, q) == 1 {
        1
    } else {
        -1
    }
}

/// `a_{l^f} = α^f + β^f` from `a_l`, via `s_k = a_l·s_{k-1} - l·s_{k-2}`.
pub fn trace_over_extension(a_l: i64, l: u64, f: u32) -> Result<i64> {
    let overflow = || Error::InvalidInput(format!("trace over F_{l}^{f} overflows"));
    let (mut prev, mut cur) = (2i128, a_l as i128);
    if f == 0 {
        return Ok(2);
    }
    for _ in 1..f {
        let next = (a_l as i128)
            .checked_mul(cur)
            .and_then(|x| x.checked_sub((l as i128).checked_mul(prev)?))
            .ok_or_else(overflow)?;
        (prev, cur) = (cur, next);
    }
    i64::try_from(cur).map_err(|_| overflow())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EulerFactor {
    /// `L_v(E,1) = (1 + a_v q^{-1} + q^{-2})^{-1}`
    #[serde(with = "rational_str")]
    pub value: BigRational,
    pub valuation: i64,
}

/// `L_v(E,1) = (1 + a·q^{-1} + q^{-2})^{-1} = q^2 / (q^2 + a·q + 1)` and its `p`-adic valuation.
pub fn euler_factor(a_v: i64, q: u64, p: u64) -> Result<EulerFactor> {
    ensure_prime(p)?;
    let q = BigInt::from(q);
    let denom = &q * &q + BigInt::from(a_v) * &q + BigInt::one();
    if denom.is_zero() {
        return Err(Error::EulerFactorPole);
    }
    let value = BigRational::new(&q * &q, denom);
    let valuation = PadicScalar::new(p, value.clone())?
        .valuation()
        .finite()
        .expect("nonzero");
    Ok(EulerFactor { value, valuation })
}

/// Good reduction at `p` is ordinary iff `p ∤ a_p`.
pub fn is_ordinary(a_p: i64, p: u64) -> bool {
    a_p.rem_euclid(p as i64) != 0
}

/// Do the roots of `X^2 - aX + q^w` have complex absolute value `q^(w/2)`?
///
/// Equivalent to `a^2 ≤ 4 q^w`; invariant under `a ↦ -a`.
pub fn weil_weight_check(a: i64, q: u64, w: u32) -> bool {
    let a = BigInt::from(a);
    &a * &a <= BigInt::from(4) * num_traits::pow(BigInt::from(q), w as usize)
}

/// Do all weights share a parity?
pub fn parity_check(weights: &[i64]) -> Result<bool> {
    let first = weights.first().ok_or(Error::NoEigenvalueData)?;
    Ok(weights.iter().all(|w| (w - first).rem_euclid(2) == 0))
}

/// Local data of `E` at a place with residue field `F_q`, `q = l^f`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CurveLocalData {
    pub l: u64,
    pub q: u64,
    pub point_count: u64,
    pub a_v: i64,
    #[serde(with = "rational_str")]
    pub euler_value: BigRational,
    pub euler_valuation_at_p: i64,
    /// present only at places above `p`
    pub ordinary_at: Option<bool>,
    pub weil_weight_ok: bool,
}

impl CurveLocalData {
    /// Computes the data at a place above `l` with residue degree `f`, measured at the prime `p`.
    pub fn compute(curve: &Curve, l: u64, f: u32, p: u64) -> Result<Self> {
        if !is_prime(l) {
            return Err(Error::NotPrime(l));
        }
        let q = l
            .checked_pow(f)
            .filter(|q| *q < (1 << 62))
            .ok_or_else(|| Error::InvalidInput(format!("residue field {l}^{f} too large")))?;
        let a_l = curve.trace_of_frobenius(l)?;
        let a_v = trace_over_extension(a_l, l, f)?;
        let point_count = u64::try_from(q as i128 + 1 - a_v as i128)
            .map_err(|_| Error::InvalidInput("negative point count".into()))?;
        let ef = euler_factor(a_v, q, p)?;
        Ok(Self {
            l,
            q,
            point_count,
            a_v,
            euler_value: ef.value,
            euler_valuation_at_p: ef.valuation,
            ordinary_at: (l == p).then(|| is_ordinary(a_v, p)),
            weil_weight_ok: weil_weight_check(a_v, q, 1),
        })
    }

    /// `|a_v| ≤ 2√q`
    pub fn satisfies_hasse(&self) -> bool {
        let a = self.a_v.unsigned_abs() as u128;
        a * a <= 4 * self.q as u128
    }
}
