//! Per-level analysis: indices of Eisenstein ideals compared with orders of
//! cuspidal divisors, Eisenstein maximal ideals, and the case split showing
//! each of them has nonzero kernel on the cuspidal group.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use super::ideal::{eisenstein_index, EisensteinIdealModel};
use super::ring::{hecke_ring, HeckeRingModel};
use super::space::ManinSymbolSpace;
use crate::cuspgroup::{order_closed_form, order_lattice_oracle};
use crate::error::{Error, Result};
use crate::exactnum::{divisors, factor, SquareFreeLevel};
use crate::serde_big;

/// Ring and the index of `I_{M,N}` for every `M | N` (including `M = 1`).
#[derive(Debug)]
pub struct LevelAnalysis {
    pub ring: HeckeRingModel,
    pub ideals: Vec<EisensteinIdealModel>,
}

impl LevelAnalysis {
    pub fn build(level: &SquareFreeLevel) -> Result<Self> {
        Self::build_with_cap(level, super::space::DEFAULT_MAX_LEVEL)
    }

    pub fn build_with_cap(level: &SquareFreeLevel, cap: u64) -> Result<Self> {
        let ring = hecke_ring(ManinSymbolSpace::build_with_cap(level, cap)?)?;
        let ideals = divisors(level.value())
            .into_iter()
            .map(|m| eisenstein_index(&ring, m))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { ring, ideals })
    }

    pub fn level(&self) -> &SquareFreeLevel {
        self.ring.space().level()
    }

    pub fn ideal(&self, m: u64) -> Result<&EisensteinIdealModel> {
        self.ideals
            .iter()
            .find(|i| i.m == m)
            .ok_or(Error::NotADivisor {
                m,
                n: self.level().value(),
            })
    }

    pub fn index(&self, m: u64) -> Result<&BigInt> {
        Ok(&self.ideal(m)?.index)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Equal,
    #[serde(rename = "equal-up-to-2-power")]
    EqualUpToTwoPower,
    Violation,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Equal => "equal",
            Verdict::EqualUpToTwoPower => "equal-up-to-2-power",
            Verdict::Violation => "violation",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrimeExponents {
    pub ell: u64,
    pub alpha: u32,
    pub beta: u32,
}

#[derive(Clone, Debug, Serialize)]
pub struct IndexComparisonReport {
    pub n: u64,
    pub m: u64,
    #[serde(serialize_with = "serde_big::bigint")]
    pub index: BigInt,
    #[serde(serialize_with = "serde_big::bigint")]
    pub cusp_order: BigInt,
    /// Whether exact equality is demanded (`M ≠ N` and `N/M` odd).
    pub exact_required: bool,
    pub exponents: Vec<PrimeExponents>,
    pub order_divides_index: bool,
    pub verdict: Verdict,
}

fn valuation(x: &BigInt, p: u64) -> u32 {
    let p = BigInt::from(p);
    let mut x = x.clone();
    let mut v = 0;
    while !x.is_zero() && x.is_multiple_of(&p) {
        x /= &p;
        v += 1;
    }
    v
}

fn odd_part(x: &BigInt) -> BigInt {
    let mut x = x.clone();
    let two = BigInt::from(2);
    while !x.is_zero() && x.is_multiple_of(&two) {
        x /= &two;
    }
    x
}

fn prime_support(x: &BigInt) -> Vec<u64> {
    let v = x.to_u64().expect("indices at desk scale fit in u64");
    factor(v).into_iter().map(|(p, _)| p).collect()
}

/// Index of `I_{M,N}` against the order of `C_{M,N}`. Requires `M ≠ 1` and a
/// level of positive genus.
pub fn compare_index_order(analysis: &LevelAnalysis, m: u64) -> Result<IndexComparisonReport> {
    let level = analysis.level();
    let n = level.value();
    let ideal = analysis.ideal(m)?;
    if m == 1 {
        return Err(Error::TrivialDivisor);
    }
    let cusp_order = order_lattice_oracle(level, m)?;
    let index = ideal.index.clone();
    let exact_required = m != n && (n / m) % 2 == 1;
    let mut ells: Vec<u64> = prime_support(&(&index * &cusp_order));
    ells.sort_unstable();
    ells.dedup();
    let exponents: Vec<PrimeExponents> = ells
        .iter()
        .map(|&ell| PrimeExponents {
            ell,
            alpha: valuation(&index, ell),
            beta: valuation(&cusp_order, ell),
        })
        .collect();
    let alpha_below_beta = exponents.iter().any(|e| e.ell != 2 && e.alpha < e.beta);
    let verdict = if alpha_below_beta {
        Verdict::Violation
    } else if index == cusp_order {
        Verdict::Equal
    } else if !exact_required && odd_part(&index) == odd_part(&cusp_order) {
        Verdict::EqualUpToTwoPower
    } else {
        Verdict::Violation
    };
    Ok(IndexComparisonReport {
        n,
        m,
        order_divides_index: index.is_multiple_of(&cusp_order),
        index,
        cusp_order,
        exact_required,
        exponents,
        verdict,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MaximalIdealRecord {
    pub ell: u64,
    pub m: u64,
    /// `q ≢ 1 (mod ℓ)` for every prime `q | N/M`.
    pub normalized: bool,
    /// `(p, ε(p) mod ℓ)` for each `p | N`: `1` when `p | M`, `p mod ℓ` otherwise.
    pub up_eigenvalues: Vec<(u64, u64)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NonmaximalCheck {
    pub n: u64,
    #[serde(serialize_with = "serde_big::bigint")]
    pub index_trivial_m: BigInt,
    /// `(ℓ, q)` with `q | N`, `q ≡ 1 (mod ℓ)`, or `None` when no witness exists.
    pub odd_primes: Vec<(u64, Option<u64>)>,
    pub holds: bool,
}

/// Eisenstein maximal ideals `(ℓ, I_{M,N})`, `M ≠ 1`, after dropping pairs
/// that reappear at a larger `M`, together with the check that odd primes
/// dividing the index of `I_{1,N}` come from some `q ≡ 1 (mod ℓ)`.
pub fn enumerate_eisenstein_maximal(
    analysis: &LevelAnalysis,
) -> Result<(Vec<MaximalIdealRecord>, NonmaximalCheck)> {
    let level = analysis.level();
    let n = level.value();
    let mut records = Vec::new();
    for ideal in &analysis.ideals {
        let m = ideal.m;
        if m == 1 || ideal.index.is_one() {
            continue;
        }
        for ell in prime_support(&ideal.index) {
            let cofactor_primes = level.primes().iter().filter(|&&q| m % q != 0);
            if cofactor_primes.clone().any(|&q| q % ell == 1) {
                continue;
            }
            records.push(MaximalIdealRecord {
                ell,
                m,
                normalized: true,
                up_eigenvalues: level
                    .primes()
                    .iter()
                    .map(|&p| (p, if m % p == 0 { 1 % ell } else { p % ell }))
                    .collect(),
            });
        }
    }
    records.sort_by_key(|r| (r.ell, r.m));

    let t1 = analysis.index(1)?.clone();
    let odd_primes: Vec<(u64, Option<u64>)> = if t1.is_one() {
        Vec::new()
    } else {
        prime_support(&t1)
            .into_iter()
            .filter(|&ell| ell != 2)
            .map(|ell| (ell, level.primes().iter().copied().find(|&q| q % ell == 1)))
            .collect()
    };
    let holds = odd_primes.iter().all(|(_, w)| w.is_some());
    Ok((
        records,
        NonmaximalCheck {
            n,
            index_trivial_m: t1,
            odd_primes,
            holds,
        },
    ))
}

#[derive(Clone, Debug, Serialize)]
pub struct MainTheoremCheck {
    pub n: u64,
    pub ell: u64,
    pub m: u64,
    pub case: String,
    pub holds: bool,
    pub detail: String,
}

fn cusp_order(level: &SquareFreeLevel, m: u64) -> Result<BigInt> {
    Ok(order_closed_form(level, m)?.closed_form_order)
}

/// For each record, the case split showing `C_N[m] ≠ 0`.
pub fn verify_main_theorem(
    level: &SquareFreeLevel,
    records: &[MaximalIdealRecord],
) -> Result<Vec<MainTheoremCheck>> {
    let n = level.value();
    let two = BigInt::from(2);
    records
        .iter()
        .map(|r| {
            let (ell, m) = (r.ell, r.m);
            let (case, holds, detail) = if ell != 2 {
                let c = cusp_order(level, m)?;
                (
                    "odd".to_string(),
                    c.is_multiple_of(&BigInt::from(ell)),
                    format!("|C_({m},{n})| = {c}"),
                )
            } else if m == n && level.omega() == 1 {
                ("prime".into(), n % 8 == 1, format!("{n} mod 8 = {}", n % 8))
            } else if m == n {
                let ps: Vec<u64> = if n.is_multiple_of(2) {
                    vec![2]
                } else {
                    level.primes().to_vec()
                };
                let orders = ps
                    .iter()
                    .map(|&p| Ok((p, cusp_order(level, p)?)))
                    .collect::<Result<Vec<_>>>()?;
                (
                    "composite".into(),
                    orders.iter().all(|(_, c)| c.is_multiple_of(&two)),
                    orders
                        .iter()
                        .map(|(p, c)| format!("|C_({p},{n})| = {c}"))
                        .collect::<Vec<_>>()
                        .join(", "),
                )
            } else if 2 * m == n && level.omega() == 2 {
                let c = cusp_order(level, m)?;
                let expected = BigInt::from((m.saturating_sub(1)) / 4);
                (
                    "twice-prime".into(),
                    m % 8 == 1 && c == expected,
                    format!("{m} mod 8 = {}, |C_({m},{n})| = {c}", m % 8),
                )
            } else if 2 * m == n {
                let orders = level
                    .primes()
                    .iter()
                    .filter(|&&p| p != 2)
                    .map(|&p| Ok((p, cusp_order(level, p)?)))
                    .collect::<Result<Vec<_>>>()?;
                (
                    "twice-composite".into(),
                    orders.iter().all(|(_, c)| c.is_multiple_of(&two)),
                    orders
                        .iter()
                        .map(|(p, c)| format!("|C_({p},{n})| = {c}"))
                        .collect::<Vec<_>>()
                        .join(", "),
                )
            } else {
                (
                    "unnormalized".into(),
                    false,
                    format!("ℓ = 2 requires M = N or M = N/2, got M = {m}"),
                )
            };
            Ok(MainTheoremCheck {
                n,
                ell,
                m,
                case,
                holds,
                detail,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn analysis(n: u64) -> LevelAnalysis {
        LevelAnalysis::build(&SquareFreeLevel::new(n).unwrap()).unwrap()
    }

    #[test]
    fn level_eleven() {
        let a = analysis(11);
        let r = compare_index_order(&a, 11).unwrap();
        assert_eq!(r.verdict, Verdict::Equal);
        assert_eq!(r.index, BigInt::from(5));
        let (records, nonmax) = enumerate_eisenstein_maximal(&a).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!((records[0].ell, records[0].m), (5, 11));
        assert!(nonmax.holds);
        let checks = verify_main_theorem(a.level(), &records).unwrap();
        assert!(checks.iter().all(|c| c.holds));
    }

    #[test]
    fn level_thirty_three_and_fourteen() {
        let a = analysis(33);
        let r = compare_index_order(&a, 3).unwrap();
        assert!(r.exact_required);
        assert_eq!(r.index, BigInt::from(10));
        assert_eq!(r.cusp_order, BigInt::from(10));
        let a = analysis(14);
        let r = compare_index_order(&a, 7).unwrap();
        assert!(!r.exact_required);
        assert_ne!(r.verdict, Verdict::Violation);
        let (records, _) = enumerate_eisenstein_maximal(&a).unwrap();
        assert!(records.iter().all(|r| r.normalized));
    }
}
