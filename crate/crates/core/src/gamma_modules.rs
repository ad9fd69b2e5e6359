//! Finitely generated torsion `Λ(Γ)`-modules in structure-theorem normal form
//! `M ≅ ⊕ Λ/(g_i)` and their generalized Γ-Euler characteristics.
//!
//! Two independent routes compute the same [`ChiResult`]:
//!
//! * [`generalized_chi`], the closed form: split each `g_i = T^(n_i) f_i` with `f_i(0) ≠ 0`;
//!   the characteristic is finite iff every `n_i ≤ 1`, and then equals `p^(Σ v_p(f_i(0)))`.
//! * [`finite_level_oracle`], linear algebra: realize `Λ/(P)` as the lattice `Z_p^λ` with
//!   multiplication by `T` acting as the companion matrix, take Smith normal forms over
//!   `Z/p^a`, and measure the map `ψ : ker(×T) → coker(×T)` directly.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;
use serde_json::Value;

use crate::error::{Error, Result};
use crate::lambda_algebra::LambdaSeries;
use crate::modular::PrimePowerRing;
use crate::padics::{ensure_prime, PowerOfP};

/// Default `(N, D)` for generators given as polynomial strings in module files.
pub const DEFAULT_PRECISION: u32 = 10;
pub const DEFAULT_TRUNC_DEGREE: usize = 20;

/// Largest total `λ` the oracle accepts.
pub const ORACLE_MAX_LAMBDA: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TorsionModule {
    prime: u64,
    generators: Vec<LambdaSeries>,
}

impl TorsionModule {
    pub fn new(prime: u64, generators: Vec<LambdaSeries>) -> Result<Self> {
        ensure_prime(prime)?;
        if generators.is_empty() {
            return Err(Error::InvalidInput(
                "torsion module needs at least one generator".into(),
            ));
        }
        for g in &generators {
            if g.prime() != prime {
                return Err(Error::PrimeMismatch {
                    left: prime,
                    right: g.prime(),
                });
            }
            g.weierstrass_prepare()?;
        }
        Ok(Self { prime, generators })
    }

    /// `{"p":7, "generators":[<series>...]}`, optionally with module-wide `"N"` and `"D"`
    /// used for generators written as polynomial strings.
    pub fn from_json(v: &Value) -> Result<Self> {
        let p = v
            .get("p")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("module needs integer field \"p\"".into()))?;
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
        let gens = v
            .get("generators")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("module needs array field \"generators\"".into()))?;
        let generators = gens
            .iter()
            .map(|g| LambdaSeries::from_json(g, p, n, d))
            .collect::<Result<Vec<_>>>()?;
        Self::new(p, generators)
    }

    pub fn to_json(&self) -> Value {
        serde_json::json!({
            "p": self.prime,
            "generators": self.generators.iter().map(LambdaSeries::to_json).collect::<Vec<_>>(),
        })
    }

    pub fn prime(&self) -> u64 {
        self.prime
    }

    pub fn generators(&self) -> &[LambdaSeries] {
        &self.generators
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ChiResult {
    pub finite: bool,
    /// present iff `finite`
    pub value: Option<PowerOfP>,
    /// `Z_p`-corank of the invariants: number of components with `T | g_i`
    pub r: usize,
}

impl ChiResult {
    fn combine(self, other: ChiResult, prime: u64) -> ChiResult {
        let finite = self.finite && other.finite;
        let value = match (self.value, other.value) {
            (Some(a), Some(b)) if finite => Some(PowerOfP::new(prime, a.exponent + b.exponent)),
            _ => None,
        };
        ChiResult {
            finite,
            value,
            r: self.r + other.r,
        }
    }

    fn trivial(prime: u64) -> ChiResult {
        ChiResult {
            finite: true,
            value: Some(PowerOfP::one(prime)),
            r: 0,
        }
    }
}

/// Closed form for `χ(Γ, M)` via the T-adic split of each generator.
pub fn generalized_chi(module: &TorsionModule) -> Result<ChiResult> {
    let p = module.prime;
    let mut acc = ChiResult::trivial(p);
    for g in &module.generators {
        let lt = g.leading_term().map_err(|e| match e {
            Error::ZeroAtPrecision => Error::ConstantTermUnresolved,
            other => other,
        })?;
        let n = lt.k;
        let part = if n <= 1 {
            ChiResult {
                finite: true,
                value: Some(PowerOfP::new(p, lt.alpha_valuation as i64)),
                r: usize::from(n == 1),
            }
        } else {
            ChiResult {
                finite: false,
                value: None,
                r: 1,
            }
        };
        acc = acc.combine(part, p);
    }
    Ok(acc)
}

/// Linear-algebra oracle for `χ(Γ, M)` at coefficient precision `p^a`.
pub fn finite_level_oracle(module: &TorsionModule, precision_exponent: u32) -> Result<ChiResult> {
    let p = module.prime;
    let ring = PrimePowerRing::new(p, precision_exponent)?;
    let forms = module
        .generators
        .iter()
        .map(LambdaSeries::weierstrass_prepare)
        .collect::<Result<Vec<_>>>()?;
    let total_lambda: usize = forms.iter().map(|w| w.lambda).sum();
    if total_lambda > ORACLE_MAX_LAMBDA {
        return Err(Error::InvalidInput(format!(
            "total λ = {total_lambda} exceeds oracle limit {ORACLE_MAX_LAMBDA}"
        )));
    }
    let mut acc = ChiResult::trivial(p);
    for w in &forms {
        let part = match (w.lambda, w.mu) {
            (0, 0) => ChiResult::trivial(p),
            (0, mu) => return Err(Error::NotOracleRepresentable { mu }),
            _ => {
                let mut c = lattice_chi(&w.distinguished_poly, ring)?;
                // 0 → Λ/(P) --p^μ--> Λ/(p^μ P) → Λ/(p^μ) → 0 with ×T injective on Λ/(p^μ):
                // ker(ψ) is unchanged and coker(ψ) grows by exactly p^μ.
                if let Some(v) = c.value.as_mut() {
                    v.exponent += w.mu as i64;
                }
                c
            }
        };
        acc = acc.combine(part, p);
    }
    Ok(acc)
}

/// `χ` of `Λ/(P)` for a monic `P` of degree `λ ≥ 1`, realized on `Z_p^λ`.
fn lattice_chi(poly: &[u64], ring: PrimePowerRing) -> Result<ChiResult> {
    let lambda = poly.len() - 1;
    // ×T on basis 1, T, …, T^(λ-1): T·T^i = T^(i+1), T·T^(λ-1) = -Σ P_i T^i
    let mut exact = vec![vec![BigInt::zero(); lambda]; lambda];
    for i in 0..lambda {
        if i + 1 < lambda {
            exact[i + 1][i] = BigInt::one();
        }
        exact[i][lambda - 1] = -BigInt::from(poly[i]);
    }
    let residues: Vec<Vec<u64>> = exact
        .iter()
        .map(|row| row.iter().map(|x| reduce_big(x, ring)).collect())
        .collect();

    let snf = smith_mod_prime_power(residues.clone(), ring, true);
    let saturated: Vec<usize> = (0..lambda)
        .filter(|&j| snf.exponents[j].is_none())
        .collect();
    let s = saturated.len();

    let rank_c = rank_over_q(&exact);
    if rank_c != lambda - s {
        return Err(Error::RaisePrecision(format!(
            "×T has {} saturated elementary divisors at p^{} but exact kernel rank {}",
            s,
            ring.exp,
            lambda - rank_c
        )));
    }

    // columns: ψ(k_j) in coker coordinates, then the relations d_j e_j
    let left = snf.left.as_ref().expect("tracked");
    let right = snf.right.as_ref().expect("tracked");
    let mut combined = vec![vec![0u64; s + lambda]; lambda];
    for (col, &j) in saturated.iter().enumerate() {
        let kernel_vec: Vec<u64> = (0..lambda).map(|r| right[r][j]).collect();
        for (row, lrow) in left.iter().enumerate() {
            let mut acc = 0u64;
            for (x, y) in lrow.iter().zip(&kernel_vec) {
                acc = ring.add(acc, ring.mul(*x, *y));
            }
            combined[row][col] = acc;
        }
    }
    for j in 0..lambda {
        combined[j][s + j] = match snf.exponents[j] {
            Some(e) => ring.p_power(e),
            None => 0,
        };
    }
    let psi = smith_mod_prime_power(combined, ring, false);
    let finite = psi.exponents.iter().all(Option::is_some);

    let square = mat_mul_exact(&exact, &exact);
    let exact_finite = rank_over_q(&square) == rank_c;
    if finite != exact_finite {
        return Err(Error::RaisePrecision(format!(
            "cokernel of ψ saturates p^{} but the exact rank test disagrees",
            ring.exp
        )));
    }
    let value = finite.then(|| {
        let e: u32 = psi.exponents.iter().map(|e| e.expect("finite")).sum();
        PowerOfP::new(ring.p, e as i64)
    });
    Ok(ChiResult {
        finite,
        value,
        r: s,
    })
}

fn reduce_big(x: &BigInt, ring: PrimePowerRing) -> u64 {
    use num_integer::Integer;
    use num_traits::ToPrimitive;
    x.mod_floor(&BigInt::from(ring.modulus))
        .to_u64()
        .expect("residue")
}

/// Smith normal form over `Z/p^a`. `exponents[j]` is `None` when the divisor is `0 mod p^a`.
///
/// With tracking on, `left · A · right = diag(unit · p^e_j)`.
pub(crate) struct SmithModPk {
    pub exponents: Vec<Option<u32>>,
    pub left: Option<Vec<Vec<u64>>>,
    pub right: Option<Vec<Vec<u64>>>,
}

pub(crate) fn smith_mod_prime_power(
    mut m: Vec<Vec<u64>>,
    ring: PrimePowerRing,
    track: bool,
) -> SmithModPk {
    let rows = m.len();
    let cols = if rows == 0 { 0 } else { m[0].len() };
    let identity = |n: usize| -> Vec<Vec<u64>> {
        (0..n)
            .map(|i| (0..n).map(|j| u64::from(i == j)).collect())
            .collect()
    };
    let mut left = track.then(|| identity(rows));
    let mut right = track.then(|| identity(cols));
    let steps = rows.min(cols);
    let mut exponents = vec![None; steps];

    for t in 0..steps {
        let mut best: Option<(u32, usize, usize)> = None;
        for (i, row) in m.iter().enumerate().skip(t) {
            for (j, &x) in row.iter().enumerate().skip(t) {
                if let Some(v) = ring.valuation(x) {
                    if best.is_none_or(|(bv, _, _)| v < bv) {
                        best = Some((v, i, j));
                    }
                }
            }
        }
        let Some((v, pi, pj)) = best else { break };
        m.swap(t, pi);
        if let Some(l) = left.as_mut() {
            l.swap(t, pi);
        }
        for row in m.iter_mut() {
            row.swap(t, pj);
        }
        if let Some(r) = right.as_mut() {
            for row in r.iter_mut() {
                row.swap(t, pj);
            }
        }
        let pv = ring.p_power(v);
        let unit_inv = ring.inverse(m[t][t] / pv).expect("pivot unit part");

        for i in t + 1..rows {
            if m[i][t] == 0 {
                continue;
            }
            let f = ring.mul(m[i][t] / pv, unit_inv);
            for j in t..cols {
                m[i][j] = ring.sub(m[i][j], ring.mul(f, m[t][j]));
            }
            if let Some(l) = left.as_mut() {
                for j in 0..rows {
                    l[i][j] = ring.sub(l[i][j], ring.mul(f, l[t][j]));
                }
            }
        }
        for j in t + 1..cols {
            if m[t][j] == 0 {
                continue;
            }
            let f = ring.mul(m[t][j] / pv, unit_inv);
            for row in m.iter_mut() {
                let sub = ring.mul(f, row[t]);
                row[j] = ring.sub(row[j], sub);
            }
            if let Some(r) = right.as_mut() {
                for row in r.iter_mut() {
                    let sub = ring.mul(f, row[t]);
                    row[j] = ring.sub(row[j], sub);
                }
            }
        }
        exponents[t] = Some(v);
    }
    SmithModPk {
        exponents,
        left,
        right,
    }
}

fn mat_mul_exact(a: &[Vec<BigInt>], b: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let n = a.len();
    let k = b.len();
    let m = if k == 0 { 0 } else { b[0].len() };
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| (0..k).map(|l| &a[i][l] * &b[l][j]).sum())
                .collect()
        })
        .collect()
}

/// Rank over `Q` by Gaussian elimination on exact rationals.
pub(crate) fn rank_over_q(m: &[Vec<BigInt>]) -> usize {
    let mut rows: Vec<Vec<BigRational>> = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect();
    let n_rows = rows.len();
    let n_cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..n_cols {
        let Some(pivot) = (rank..n_rows).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, pivot);
        let inv = rows[rank][col].recip();
        for r in rank + 1..n_rows {
            if rows[r][col].is_zero() {
                continue;
            }
            let f = &rows[r][col] * &inv;
            for c in col..n_cols {
                let sub = &f * &rows[rank][c];
                rows[r][c] -= sub;
            }
        }
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;

    fn module(p: u64, gens: &[&str]) -> TorsionModule {
        let g = gens
            .iter()
            .map(|s| LambdaSeries::parse(p, 8, 12, s).unwrap())
            .collect();
        TorsionModule::new(p, g).unwrap()
    }

    fn finite(p: u64, e: i64, r: usize) -> ChiResult {
        ChiResult {
            finite: true,
            value: Some(PowerOfP::new(p, e)),
            r,
        }
    }

    const INFINITE_R1: ChiResult = ChiResult {
        finite: false,
        value: None,
        r: 1,
    };

    #[test]
    fn closed_form_examples() {
        assert_eq!(
            generalized_chi(&module(7, &["(3+T)T"])).unwrap(),
            finite(7, 0, 1)
        );
        assert_eq!(generalized_chi(&module(7, &["T^2"])).unwrap(), INFINITE_R1);
        assert_eq!(
            generalized_chi(&module(7, &["T(T-7)"])).unwrap(),
            finite(7, 1, 1)
        );
        assert_eq!(
            generalized_chi(&module(7, &["T-7"])).unwrap(),
            finite(7, 1, 0)
        );
        assert_eq!(
            generalized_chi(&module(5, &["T-5", "T(T+25)", "1+T"])).unwrap(),
            finite(5, 3, 1)
        );
    }

    #[test]
    fn oracle_examples() {
        assert_eq!(
            finite_level_oracle(&module(7, &["T(T-7)"]), 10).unwrap(),
            finite(7, 1, 1)
        );
        assert_eq!(
            finite_level_oracle(&module(7, &["T"]), 10).unwrap(),
            finite(7, 0, 1)
        );
        assert_eq!(
            finite_level_oracle(&module(7, &["T^2"]), 10).unwrap(),
            INFINITE_R1
        );
        assert_eq!(
            finite_level_oracle(&module(7, &["T-7"]), 10).unwrap(),
            finite(7, 1, 0)
        );
        // μ > 0 with λ > 0: p^μ bookkeeping
        assert_eq!(
            finite_level_oracle(&module(7, &["7T"]), 10).unwrap(),
            finite(7, 1, 1)
        );
        assert_eq!(
            generalized_chi(&module(7, &["7T"])).unwrap(),
            finite(7, 1, 1)
        );
    }

    #[test]
    fn oracle_refuses_pure_mu_components() {
        assert_eq!(
            finite_level_oracle(&module(7, &["49"]), 10),
            Err(Error::NotOracleRepresentable { mu: 2 })
        );
        // a unit generator is the zero module
        assert_eq!(
            finite_level_oracle(&module(7, &["3+T"]), 10).unwrap(),
            finite(7, 0, 0)
        );
    }

    #[test]
    fn oracle_asks_for_more_precision() {
        // f(0) = 7^4 is invisible at p^3
        let m = module(7, &["T(T+2401)"]);
        assert_eq!(generalized_chi(&m).unwrap(), finite(7, 4, 1));
        assert!(matches!(
            finite_level_oracle(&m, 3),
            Err(Error::RaisePrecision(_))
        ));
        assert_eq!(finite_level_oracle(&m, 6).unwrap(), finite(7, 4, 1));
    }

    #[test]
    fn counterexample_sequence() {
        // 0 → Λ/T → Λ/T² → Λ/T → 0
        let ends = module(7, &["T"]);
        let middle = module(7, &["T^2"]);
        for chi in [
            generalized_chi(&ends).unwrap(),
            finite_level_oracle(&ends, 8).unwrap(),
        ] {
            assert_eq!(chi, finite(7, 0, 1));
        }
        assert!(!generalized_chi(&middle).unwrap().finite);
        assert!(!finite_level_oracle(&middle, 8).unwrap().finite);
    }

    #[test]
    fn module_json() {
        let v: Value =
            serde_json::from_str(r#"{"p":7,"generators":["T^2", {"N":6,"D":10,"coeffs":[7,1]}]}"#)
                .unwrap();
        let m = TorsionModule::from_json(&v).unwrap();
        assert_eq!(m.generators().len(), 2);
        assert_eq!(m.generators()[1].precision(), 6);
        assert_eq!(TorsionModule::from_json(&m.to_json()).unwrap(), m);
        let bad: Value = serde_json::from_str(r#"{"p":7,"generators":[]}"#).unwrap();
        assert!(TorsionModule::from_json(&bad).is_err());
        let zero: Value = serde_json::from_str(r#"{"p":7,"generators":["0"]}"#).unwrap();
        assert_eq!(TorsionModule::from_json(&zero), Err(Error::ZeroAtPrecision));
    }

    #[test]
    fn smith_form_of_small_matrix() {
        let ring = PrimePowerRing::new(3, 4).unwrap();
        // diag(3, 9) disguised by unimodular mixing
        let m = vec![vec![3, 9], vec![6, 27]];
        let snf = smith_mod_prime_power(m, ring, true);
        assert_eq!(snf.exponents, vec![Some(1), Some(2)]);
    }

    #[test]
    fn exact_rank() {
        let m: Vec<Vec<BigInt>> = vec![vec![1.into(), 2.into()], vec![2.into(), 4.into()]];
        assert_eq!(rank_over_q(&m), 1);
    }
}
