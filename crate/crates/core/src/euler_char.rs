//! Euler characteristics of Selmer groups over the false-Tate tower from cyclotomic data.
//!
//! `χ(Σ, Sel(E/F_∞)) = χ(Γ, Sel(E/F^cyc)) · |∏_{v ∈ 𝔐} L_v(E,1)|_p`
//!
//! The cyclotomic characteristic `χ(Γ, Sel(E/F^cyc))` is always an input. Magnitudes of
//! Euler factors use the reciprocal convention `|x|_p = p^(v_p(x))`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::curves::{Curve, CurveLocalData};
use crate::cyclotomic_fields::{infinite_inertia_set, ExtensionSpec, SplittingData};
use crate::error::{Error, Result};
use crate::padics::{ensure_prime, u64_valuation, Convention, PadicScalar, PowerOfP};

/// Convention applied to `|L_v(E,1)|_p` throughout this module.
pub const EULER_FACTOR_CONVENTION: Convention = Convention::Reciprocal;

/// A place `v ∈ 𝔐` of `F` together with the curve's local data there.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlaceData {
    pub splitting: SplittingData,
    pub local: CurveLocalData,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChiInput {
    pub p: u64,
    /// `χ(Γ, Sel(E/F^cyc))`, supplied externally
    pub chi_gamma: PowerOfP,
    /// one entry per place of `𝔐`
    pub places: Vec<PlaceData>,
    /// Tamagawa numbers `c_v`, keyed by the rational prime below `v`
    pub tamagawa: Option<BTreeMap<u64, u64>>,
}

fn euler_valuation(local: &CurveLocalData, p: u64) -> Result<i64> {
    Ok(PadicScalar::new(p, local.euler_value.clone())?
        .valuation()
        .finite()
        .expect("Euler factors are nonzero"))
}

/// `χ(Σ, Sel(E/F_∞))` as `chi_gamma · p^(Σ_v v_p(L_v(E,1)))`.
pub fn theorem3_chi(input: &ChiInput) -> Result<PowerOfP> {
    ensure_prime(input.p)?;
    if input.chi_gamma.prime != input.p {
        return Err(Error::PrimeMismatch {
            left: input.p,
            right: input.chi_gamma.prime,
        });
    }
    let mut exponent = input.chi_gamma.exponent;
    for place in &input.places {
        if place.splitting.l == input.p || place.local.l == input.p {
            return Err(Error::PlaceAboveP { l: input.p });
        }
        if num_bigint::BigUint::from(place.local.q) != place.splitting.q_v {
            return Err(Error::InvalidInput(format!(
                "local data computed over F_{} but the place has residue field F_{}",
                place.local.q, place.splitting.q_v
            )));
        }
        exponent += euler_valuation(&place.local, input.p)?;
    }
    Ok(PowerOfP::new(input.p, exponent))
}

/// `χ(Γ, J_v(F^cyc)) = |L_v(E,1)|_p` for `v ∤ p`.
pub fn chi_gamma_jv(local: &CurveLocalData, p: u64) -> Result<PowerOfP> {
    ensure_prime(p)?;
    if local.l == p {
        return Err(Error::PlaceAboveP { l: p });
    }
    Ok(PowerOfP::new(p, euler_valuation(local, p)?))
}

/// `χ(Γ, Sel′(E/F^cyc)) = χ(Γ, Sel(E/F^cyc)) · ∏_{v ∈ S′} χ(Γ, J_v(F^cyc))`.
pub fn large_selmer_chi(
    chi_selmer: PowerOfP,
    places: &[CurveLocalData],
    p: u64,
) -> Result<PowerOfP> {
    places
        .iter()
        .try_fold(chi_selmer, |acc, local| acc.mul(&chi_gamma_jv(local, p)?))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LocalCardinalities {
    /// `#H^1(Γ_v, E_{p^∞}(F^cyc_w)) = p^(v_p(L_v) - v_p(c_v))`
    pub h1_gamma: PowerOfP,
    /// `#H^1(F_v, E_{p^∞}) = |c_v|_p^{-1} = p^(v_p(c_v))`
    pub h1_fv: PowerOfP,
    /// constant term of the characteristic element of `J_v(F^cyc)`: `|L_v(E,1)|_p`
    pub char_element_constant_term: PowerOfP,
}

/// `#H^1(F_v, E_{p^∞}) = p^(v_p(c_v))`.
pub fn h1_local_field(c_v: u64, p: u64) -> Result<PowerOfP> {
    ensure_prime(p)?;
    let v = u64_valuation(c_v, p)
        .ok_or_else(|| Error::InvalidInput("Tamagawa number must be positive".into()))?;
    Ok(PowerOfP::new(p, v as i64))
}

/// Orders of the two local cohomology groups at `v ∤ p`. A negative implied exponent is
/// reported as [`Error::ConventionViolation`] rather than corrected.
pub fn local_cardinalities(c_v: u64, local: &CurveLocalData, p: u64) -> Result<LocalCardinalities> {
    let h1_fv = h1_local_field(c_v, p)?;
    let jv = chi_gamma_jv(local, p)?;
    let exponent = jv.exponent - h1_fv.exponent;
    if exponent < 0 {
        return Err(Error::ConventionViolation { exponent });
    }
    let h1_gamma = PowerOfP::new(p, exponent);
    Ok(LocalCardinalities {
        h1_gamma,
        h1_fv,
        char_element_constant_term: jv,
    })
}

/// Input document of the `theorem3` command.
#[derive(Debug, Clone, Deserialize)]
pub struct PipelineConfig {
    pub p: u64,
    pub chi_gamma: String,
    pub curve: Curve,
    pub extension: ExtensionSpec,
    #[serde(default)]
    pub tamagawa: Option<BTreeMap<String, u64>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PrimeReport {
    pub splitting: SplittingData,
    pub local: CurveLocalData,
    pub in_m: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PipelineReport {
    pub p: u64,
    pub chi_gamma: PowerOfP,
    pub primes: Vec<PrimeReport>,
    pub m_place_count: usize,
    pub chi_sigma: PowerOfP,
    pub chi_large_selmer: PowerOfP,
    pub ordinary_at_p: bool,
    pub weil_weight_ok: bool,
    pub local_cardinalities: BTreeMap<u64, LocalCardinalities>,
}

/// Runs the whole chain: inertia set, local data at every prime dividing `p·m`, the product formula,
/// and the large-Selmer cross-check.
pub fn run_pipeline(config: &PipelineConfig) -> Result<PipelineReport> {
    let p = config.p;
    ensure_prime(p)?;
    if config.extension.p != p {
        return Err(Error::InvalidExtension(format!(
            "extension prime {} differs from p = {p}",
            config.extension.p
        )));
    }
    let chi_gamma = PowerOfP::parse(p, &config.chi_gamma)?;
    let tamagawa = config
        .tamagawa
        .as_ref()
        .map(|m| {
            m.iter()
                .map(|(k, v)| {
                    k.parse::<u64>().map(|l| (l, *v)).map_err(|_| {
                        Error::Parse(format!("Tamagawa key {k:?} is not a rational prime"))
                    })
                })
                .collect::<Result<BTreeMap<_, _>>>()
        })
        .transpose()?;

    let set = infinite_inertia_set(&config.extension)?;
    let mut primes = Vec::new();
    let mut places = Vec::new();
    for s in &set.primes {
        let local = CurveLocalData::compute(&config.curve, s.l, s.f, p)?;
        let in_m = s.l != p;
        if in_m {
            for _ in 0..s.g {
                places.push(PlaceData {
                    splitting: s.clone(),
                    local: local.clone(),
                });
            }
        }
        primes.push(PrimeReport {
            splitting: s.clone(),
            local,
            in_m,
        });
    }
    let at_p = primes
        .iter()
        .find(|r| r.splitting.l == p)
        .expect("p divides p·m");
    let ordinary_at_p = at_p.local.ordinary_at.unwrap_or(false);
    let weil_weight_ok = primes.iter().all(|r| r.local.weil_weight_ok);

    let input = ChiInput {
        p,
        chi_gamma,
        places,
        tamagawa,
    };
    let chi_sigma = theorem3_chi(&input)?;
    let locals: Vec<CurveLocalData> = input.places.iter().map(|pl| pl.local.clone()).collect();
    let chi_large_selmer = large_selmer_chi(chi_gamma, &locals, p)?;

    let mut cards = BTreeMap::new();
    if let Some(t) = &input.tamagawa {
        for r in primes.iter().filter(|r| r.in_m) {
            if let Some(&c) = t.get(&r.splitting.l) {
                cards.insert(r.splitting.l, local_cardinalities(c, &r.local, p)?);
            }
        }
    }

    Ok(PipelineReport {
        p,
        chi_gamma,
        m_place_count: input.places.len(),
        primes,
        chi_sigma,
        chi_large_selmer,
        ordinary_at_p,
        weil_weight_ok,
        local_cardinalities: cards,
    })
}
