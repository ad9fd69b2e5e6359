//! Arithmetic in `Z/p^n` for moduli that fit in 62 bits.

use crate::error::{Error, Result};

const MODULUS_LIMIT: u64 = 1 << 62;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct PrimePowerRing {
    pub p: u64,
    pub exp: u32,
    pub modulus: u64,
}

impl PrimePowerRing {
    pub fn new(p: u64, exp: u32) -> Result<Self> {
        if exp == 0 {
            return Err(Error::InvalidPrecision(
                "coefficient precision must be >= 1".into(),
            ));
        }
        let mut m: u64 = 1;
        for _ in 0..exp {
            m = m
                .checked_mul(p)
                .filter(|m| *m < MODULUS_LIMIT)
                .ok_or(Error::ModulusTooLarge {
                    prime: p,
                    exponent: exp,
                })?;
        }
        Ok(Self { p, exp, modulus: m })
    }

    pub fn reduce_i128(&self, x: i128) -> u64 {
        x.rem_euclid(self.modulus as i128) as u64
    }

    pub fn reduce(&self, x: u64) -> u64 {
        x % self.modulus
    }

    pub fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.modulus as u128) as u64
    }

    pub fn sub(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + self.modulus as u128 - b as u128 % self.modulus as u128)
            % self.modulus as u128) as u64
    }

    pub fn neg(&self, a: u64) -> u64 {
        self.sub(0, a)
    }

    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.modulus as u128) as u64
    }

    /// Valuation of a residue; zero residues report `None`.
    pub fn valuation(&self, a: u64) -> Option<u32> {
        let a = self.reduce(a);
        if a == 0 {
            return None;
        }
        let mut a = a;
        let mut v = 0;
        while a.is_multiple_of(self.p) {
            a /= self.p;
            v += 1;
        }
        Some(v)
    }

    pub fn is_unit(&self, a: u64) -> bool {
        !a.is_multiple_of(self.p)
    }

    /// Inverse of a unit residue.
    pub fn inverse(&self, a: u64) -> Option<u64> {
        if !self.is_unit(a) {
            return None;
        }
        let (mut r0, mut r1) = (self.modulus as i128, self.reduce(a) as i128);
        let (mut s0, mut s1) = (0i128, 1i128);
        while r1 != 0 {
            let q = r0 / r1;
            (r0, r1) = (r1, r0 - q * r1);
            (s0, s1) = (s1, s0 - q * s1);
        }
        debug_assert_eq!(r0, 1);
        Some(self.reduce_i128(s0))
    }

    pub fn p_power(&self, k: u32) -> u64 {
        self.p.pow(k)
    }

    /// Truncated product of two coefficient vectors, keeping `len` terms.
    pub fn poly_mul(&self, a: &[u64], b: &[u64], len: usize) -> Vec<u64> {
        let mut out = vec![0u128; len];
        let m = self.modulus as u128;
        for (i, &x) in a.iter().enumerate() {
            if x == 0 || i >= len {
                continue;
            }
            for (j, &y) in b.iter().enumerate().take(len - i) {
                out[i + j] = (out[i + j] + x as u128 * y as u128) % m;
            }
        }
        out.into_iter().map(|c| c as u64).collect()
    }
}
