//! Akashi series: alternating products of characteristic elements `f_M = ∏ g_{M,i}^{(-1)^i}`.
//!
//! `f_M` is kept as a formal fraction and compared only up to units of `Λ(Γ)`.

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::gamma_modules::{DEFAULT_PRECISION, DEFAULT_TRUNC_DEGREE};
use crate::lambda_algebra::{LambdaSeries, WeierstrassForm};
use crate::padics::{ensure_prime, PowerOfP};

/// Characteristic elements of `H_i(H, M)` indexed by homological degree `i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AkashiData {
    prime: u64,
    char_elements: Vec<LambdaSeries>,
    coranks: Option<Vec<i64>>,
}

impl AkashiData {
    pub fn new(prime: u64, char_elements: Vec<LambdaSeries>) -> Result<Self> {
        ensure_prime(prime)?;
        if char_elements.is_empty() {
            return Err(Error::InvalidInput(
                "Akashi data needs at least one degree".into(),
            ));
        }
        for (degree, g) in char_elements.iter().enumerate() {
            if g.prime() != prime {
                return Err(Error::PrimeMismatch {
                    left: prime,
                    right: g.prime(),
                });
            }
            if g.is_zero_at_precision() {
                return Err(Error::VanishingCharElement { degree });
            }
        }
        Ok(Self {
            prime,
            char_elements,
            coranks: None,
        })
    }

    /// Attaches user-supplied coranks `cork H^i(H, X)^Γ`, which are checked, never trusted.
    pub fn with_coranks(mut self, coranks: Vec<i64>) -> Self {
        self.coranks = Some(coranks);
        self
    }

    /// `{"p":7, "char_elements":[<series per degree>], "coranks":[...]?}`
    pub fn from_json(v: &Value) -> Result<Self> {
        let p = v
            .get("p")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("Akashi data needs integer field \"p\"".into()))?;
        let n = v
            .get("N")
            .and_then(Value::as_u64)
            .map(|n| n as u32)
            .unwrap_or(DEFAULT_PRECISION);
        let d = v
            .get("D")
            .and_then(Value::as_u64)
            .map(|d| d as usize)
            .unwrap_or(DEFAULT_TRUNC_DEGREE);
        let elems = v
            .get("char_elements")
            .and_then(Value::as_array)
            .ok_or_else(|| {
                Error::Parse("Akashi data needs array field \"char_elements\"".into())
            })?;
        let series = elems
            .iter()
            .map(|g| LambdaSeries::from_json(g, p, n, d))
            .collect::<Result<Vec<_>>>()?;
        let data = Self::new(p, series)?;
        match v.get("coranks") {
            None | Some(Value::Null) => Ok(data),
            Some(Value::Array(cs)) => {
                let cs = cs
                    .iter()
                    .map(|c| {
                        c.as_i64()
                            .ok_or_else(|| Error::Parse("coranks must be integers".into()))
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(data.with_coranks(cs))
            }
            Some(other) => Err(Error::Parse(format!(
                "coranks must be an array, got {other}"
            ))),
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "p": self.prime,
            "char_elements": self.char_elements.iter().map(LambdaSeries::to_json).collect::<Vec<_>>(),
            "coranks": self.coranks,
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn char_elements(&self) -> &[LambdaSeries] {
        &self.char_elements
    }

    pub fn coranks(&self) -> Option<&[i64]> {
        self.coranks.as_deref()
    }

    /// Degreewise product, the data of a direct sum.
    pub fn degreewise_product(&self, other: &AkashiData) -> Result<AkashiData> {
        if self.prime != other.prime {
            return Err(Error::PrimeMismatch {
                left: self.prime,
                right: other.prime,
            });
        }
        let len = self.char_elements.len().max(other.char_elements.len());
        let mut out = Vec::with_capacity(len);
        for i in 0..len {
            out.push(
                match (self.char_elements.get(i), other.char_elements.get(i)) {
                    (Some(a), Some(b)) => a.mul(b)?,
                    (Some(a), None) => a.clone(),
                    (None, Some(b)) => b.clone(),
                    (None, None) => unreachable!(),
                },
            );
        }
        AkashiData::new(self.prime, out)
    }

    fn products(&self) -> Result<(LambdaSeries, LambdaSeries)> {
        let first = &self.char_elements[0];
        let mut even = LambdaSeries::one(self.prime, first.precision(), first.trunc_degree())?;
        let mut odd = even.clone();
        for (i, g) in self.char_elements.iter().enumerate() {
            if i % 2 == 0 {
                even = even.mul(g)?;
            } else {
                odd = odd.mul(g)?;
            }
        }
        for (degree, s) in [(0, &even), (1, &odd)] {
            if s.is_zero_at_precision() {
                return Err(Error::VanishingCharElement { degree });
            }
        }
        Ok((even, odd))
    }
}

/// `f_M` as a formal fraction, with common powers of `T` and `p` cancelled.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AkashiSeries {
    pub numerator: LambdaSeries,
    pub denominator: LambdaSeries,
}

impl AkashiSeries {
    /// Equality up to `Λ(Γ)^*`: `a/b ~ c/d` iff `a·d` and `c·b` have the same `(μ, P)`.
    pub fn equivalent(&self, other: &AkashiSeries) -> Result<bool> {
        let lhs = self
            .numerator
            .mul(&other.denominator)?
            .weierstrass_prepare()?;
        let rhs = other
            .numerator
            .mul(&self.denominator)?
            .weierstrass_prepare()?;
        Ok(lhs.same_char_element(&rhs))
    }

    pub fn mul(&self, other: &AkashiSeries) -> Result<AkashiSeries> {
        Ok(AkashiSeries {
            numerator: self.numerator.mul(&other.numerator)?,
            denominator: self.denominator.mul(&other.denominator)?,
        })
    }

    /// Prepared numerator and denominator.
    pub fn prepared(&self) -> Result<(WeierstrassForm, WeierstrassForm)> {
        Ok((
            self.numerator.weierstrass_prepare()?,
            self.denominator.weierstrass_prepare()?,
        ))
    }

    /// True when numerator and denominator have the same prepared form, i.e. `f ~ 1`.
    pub fn is_trivial(&self) -> Result<bool> {
        let (n, d) = self.prepared()?;
        Ok(n.same_char_element(&d))
    }
}

pub fn akashi_series(data: &AkashiData) -> Result<AkashiSeries> {
    let (num, den) = data.products()?;
    let k = num.leading_term()?.k.min(den.leading_term()?.k);
    let num = num.shift_down(k)?;
    let den = den.shift_down(k)?;
    let mu = num.content_valuation()?.min(den.content_valuation()?);
    Ok(AkashiSeries {
        numerator: num.divide_by_p_power(mu)?,
        denominator: den.divide_by_p_power(mu)?,
    })
}

/// Leading-term data of `f_X = α_X T^k + …`. Conditional on `X` having finite
/// generalized Euler characteristic, which series data alone cannot certify.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AkashiLeading {
    pub alpha_valuation: i64,
    pub k: i64,
    /// `|α_X|_p^{-1} = p^(v_p(α_X))`
    pub chi: PowerOfP,
    /// `Some(ok)` when coranks were supplied: does their alternating sum equal `k`?
    pub coranks_consistent: Option<bool>,
    pub conditional: bool,
}

pub fn akashi_leading(data: &AkashiData) -> Result<AkashiLeading> {
    let (num, den) = data.products()?;
    let ln = num.leading_term()?;
    let ld = den.leading_term()?;
    let k = ln.k as i64 - ld.k as i64;
    let alpha_valuation = ln.alpha_valuation as i64 - ld.alpha_valuation as i64;
    let coranks_consistent = data.coranks.as_ref().map(|cs| {
        let alt: i64 = cs
            .iter()
            .enumerate()
            .map(|(i, c)| if i % 2 == 0 { *c } else { -*c })
            .sum();
        alt == k
    });
    Ok(AkashiLeading {
        alpha_valuation,
        k,
        chi: PowerOfP::new(data.prime, alpha_valuation),
        coranks_consistent,
        conditional: true,
    })
}

/// For `0 → L → M → N → 0`: does `f_M ~ f_N · f_L` hold?
pub fn check_multiplicativity(l: &AkashiData, m: &AkashiData, n: &AkashiData) -> Result<bool> {
    for other in [m, n] {
        if other.prime != l.prime {
            return Err(Error::PrimeMismatch {
                left: l.prime,
                right: other.prime,
            });
        }
    }
    let (ln, ld) = l.products()?;
    let (mn, md) = m.products()?;
    let (nn, nd) = n.products()?;
    let f_m = AkashiSeries {
        numerator: mn,
        denominator: md,
    };
    let f_nl = AkashiSeries {
        numerator: nn.mul(&ln)?,
        denominator: nd.mul(&ld)?,
    };
    f_m.equivalent(&f_nl)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gamma_modules::{generalized_chi, TorsionModule};

    fn s(p: u64, e: &str) -> LambdaSeries {
        LambdaSeries::parse(p, 8, 16, e).unwrap()
    }

    fn data(p: u64, es: &[&str]) -> AkashiData {
        AkashiData::new(p, es.iter().map(|e| s(p, e)).collect()).unwrap()
    }

    #[test]
    fn series_examples() {
        let f = akashi_series(&data(7, &["T+7"])).unwrap();
        assert!(f.numerator.equal_at_precision(&s(7, "T+7")));
        assert!(f.denominator.equal_at_precision(&s(7, "1")));

        let g = "7T^2 + 3T^3 + 14";
        assert!(akashi_series(&data(7, &[g, g]))
            .unwrap()
            .is_trivial()
            .unwrap());
        assert!(akashi_series(&data(7, &["3+T", "1+7T", "2"]))
            .unwrap()
            .is_trivial()
            .unwrap());
        assert!(!akashi_series(&data(7, &["T", "1"]))
            .unwrap()
            .is_trivial()
            .unwrap());
    }

    #[test]
    fn series_cancels_common_t_and_p_powers() {
        let f = akashi_series(&data(7, &["49T^2", "7T"])).unwrap();
        assert!(f.numerator.equal_at_precision(&s(7, "7T")));
        assert_eq!(f.denominator.coeff(0), 1);
        assert_eq!(f.numerator.trunc_degree(), 15);
        assert_eq!(f.numerator.precision(), 7);
    }

    #[test]
    fn leading_examples() {
        let l = akashi_leading(&data(7, &["7T"])).unwrap();
        assert_eq!((l.alpha_valuation, l.k, l.chi), (1, 1, PowerOfP::new(7, 1)));
        let l = akashi_leading(&data(7, &["(3+T)T"])).unwrap();
        assert_eq!((l.alpha_valuation, l.k, l.chi), (0, 1, PowerOfP::one(7)));
        let l = akashi_leading(&data(7, &["49T^2", "7T"])).unwrap();
        assert_eq!((l.alpha_valuation, l.k), (1, 1));
        assert!(l.conditional);
    }

    #[test]
    fn coranks_are_checked() {
        let d = data(7, &["49T^2", "7T"]);
        assert_eq!(
            akashi_leading(&d.clone().with_coranks(vec![2, 1]))
                .unwrap()
                .coranks_consistent,
            Some(true)
        );
        assert_eq!(
            akashi_leading(&d.clone().with_coranks(vec![2]))
                .unwrap()
                .coranks_consistent,
            Some(false)
        );
        assert_eq!(akashi_leading(&d).unwrap().coranks_consistent, None);
    }

    #[test]
    fn multiplicativity_examples() {
        assert!(check_multiplicativity(
            &data(7, &["T"]),
            &data(7, &["T(T+7)"]),
            &data(7, &["T+7"])
        )
        .unwrap());
        let g = "5 + T + 7T^2";
        assert!(check_multiplicativity(&data(7, &["1"]), &data(7, &[g]), &data(7, &[g])).unwrap());
        assert!(
            !check_multiplicativity(&data(7, &["T"]), &data(7, &["T^3"]), &data(7, &["T"]))
                .unwrap()
        );
        // unit ambiguity is ignored
        assert!(check_multiplicativity(
            &data(7, &["T"]),
            &data(7, &["(2+T)T(T+7)"]),
            &data(7, &["T+7"])
        )
        .unwrap());
    }

    #[test]
    fn vanishing_entries_are_rejected() {
        let zero = LambdaSeries::from_i64s(7, 2, 4, &[49]).unwrap();
        assert_eq!(
            AkashiData::new(7, vec![s(7, "1"), zero]),
            Err(Error::VanishingCharElement { degree: 1 })
        );
        assert!(AkashiData::new(7, vec![]).is_err());
    }

    #[test]
    fn single_degree_matches_module_characteristic() {
        let gens = ["T(T-7)", "T+14", "3+T^2"];
        let module = TorsionModule::new(7, gens.iter().map(|g| s(7, g)).collect()).unwrap();
        let chi = generalized_chi(&module).unwrap();
        let product = gens
            .iter()
            .map(|g| s(7, g))
            .reduce(|a, b| a.mul(&b).unwrap())
            .unwrap();
        let l = akashi_leading(&AkashiData::new(7, vec![product]).unwrap()).unwrap();
        assert_eq!(Some(l.chi), chi.value);
        assert_eq!(l.k as usize, chi.r);
    }

    #[test]
    fn json_roundtrip() {
        let v: Value =
            serde_json::from_str(r#"{"p":7,"char_elements":["T+7","T"],"coranks":[1,1]}"#).unwrap();
        let d = AkashiData::from_json(&v).unwrap();
        assert_eq!(d.coranks(), Some(&[1, 1][..]));
        assert_eq!(AkashiData::from_json(&d.to_json()).unwrap(), d);
    }
}
