//! Splitting of rational primes in `F = Q(μ_p)` and the places with infinite inertia in the
//! false-Tate tower `F(μ_{p^∞}, m^{1/p^∞})`.

use num_bigint::BigUint;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::padics::{ensure_prime, is_prime};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SplittingData {
    pub l: u64,
    pub p: u64,
    /// residue degree
    pub f: u32,
    /// number of primes of `F` above `l`
    pub g: u64,
    pub ramified: bool,
    /// residue field size `l^f`, exact
    #[serde(serialize_with = "as_decimal")]
    pub q_v: BigUint,
}

fn as_decimal<S: Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    match u64::try_from(n) {
        Ok(small) => s.serialize_u64(small),
        Err(_) => s.serialize_str(&n.to_string()),
    }
}

impl SplittingData {
    pub fn splits_completely(&self) -> bool {
        !self.ramified && self.f == 1
    }
}

/// Multiplicative order of `l` modulo the prime `p`, for `p ∤ l`.
fn multiplicative_order(l: u64, p: u64) -> u32 {
    let base = l % p;
    let mut x = base;
    let mut k = 1;
    while x != 1 {
        x = ((x as u128 * base as u128) % p as u128) as u64;
        k += 1;
    }
    k
}

/// How the rational prime `l` decomposes in `Q(μ_p)`.
pub fn split(l: u64, p: u64) -> Result<SplittingData> {
    ensure_prime(l)?;
    ensure_prime(p)?;
    if l == p {
        return Ok(SplittingData {
            l,
            p,
            f: 1,
            g: 1,
            ramified: true,
            q_v: BigUint::from(l),
        });
    }
    let f = multiplicative_order(l, p);
    Ok(SplittingData {
        l,
        p,
        f,
        g: (p - 1) / f as u64,
        ramified: false,
        q_v: BigUint::from(l).pow(f),
    })
}

/// `F(μ_{p^∞}, m^{1/p^∞})` over `F = Q(μ_p)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
pub struct ExtensionSpec {
    pub p: u64,
    pub m: u64,
}

impl ExtensionSpec {
    pub fn new(p: u64, m: u64) -> Result<Self> {
        let e = Self { p, m };
        e.validate()?;
        Ok(e)
    }

    pub fn validate(&self) -> Result<()> {
        if !is_prime(self.p) || self.p < 5 {
            return Err(Error::InvalidExtension(format!(
                "p = {} must be a prime >= 5",
                self.p
            )));
        }
        if self.m <= 1 {
            return Err(Error::InvalidExtension(format!(
                "m = {} must exceed 1",
                self.m
            )));
        }
        if is_perfect_power(self.m, self.p) {
            return Err(Error::InvalidExtension(format!(
                "m = {} is a perfect {}-th power",
                self.m, self.p
            )));
        }
        Ok(())
    }
}

fn is_perfect_power(m: u64, k: u64) -> bool {
    let k = k as u32;
    let mut lo = 1u64;
    let mut hi = m;
    while lo <= hi {
        let mid = lo + (hi - lo) / 2;
        match mid.checked_pow(k) {
            Some(v) if v == m => return true,
            Some(v) if v < m => lo = mid + 1,
            _ => hi = mid - 1,
        }
    }
    false
}

fn prime_divisors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// One place `v` of `F` above a rational prime.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Place {
    pub l: u64,
    /// `0..g`, distinguishing the conjugate places above `l`
    pub index: u64,
    pub f: u32,
    #[serde(serialize_with = "as_decimal")]
    pub q_v: BigUint,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InertiaSet {
    /// every rational prime dividing `p·m`, ascending
    pub primes: Vec<SplittingData>,
    /// the places of `F` not above `p` with infinite inertia (also `S′` for this tower)
    pub places: Vec<Place>,
}

/// Primes of `F` with infinite inertia in the false-Tate tower are exactly those dividing `p·m`.
pub fn infinite_inertia_set(ext: &ExtensionSpec) -> Result<InertiaSet> {
    ext.validate()?;
    let mut ls = prime_divisors(ext.m);
    if !ls.contains(&ext.p) {
        ls.push(ext.p);
    }
    ls.sort_unstable();
    let primes = ls
        .iter()
        .map(|&l| split(l, ext.p))
        .collect::<Result<Vec<_>>>()?;
    let places = primes
        .iter()
        .filter(|s| s.l != ext.p)
        .flat_map(|s| {
            (0..s.g).map(move |index| Place {
                l: s.l,
                index,
                f: s.f,
                q_v: s.q_v.clone(),
            })
        })
        .collect();
    Ok(InertiaSet { primes, places })
}
