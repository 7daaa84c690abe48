//! Verification suites run over ranges of square-free levels.
//!
//! Each suite produces one [`CaseResult`] per level or per `(N, M)` pair;
//! levels are processed in parallel and results sorted afterwards.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::Zero;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cuspgroup::order_with_oracle;
use crate::divlattice::{box_add, build_tables, sgn, DivisorTable};
use crate::error::{Error, Result};
use crate::exactnum::{is_prime, is_square_free, phi_psi_omega, IntMatrix, SquareFreeLevel};
use crate::modsym::{
    compare_index_order, enumerate_eisenstein_maximal, verify_main_theorem, LevelAnalysis, Verdict,
};
use crate::qseries::{
    eisenstein_series, is_hecke_eigen, level_lowering_identity_check, residues, ResidueSource,
};

/// Precision used by the eigenform suite.
pub const EIGENFORM_PRECISION: usize = 200;
/// Precision used by the level-lowering identity suite.
pub const IDENTITY_PRECISION: usize = 500;
/// Default upper level for suites built on the cuspidal lattice and divisor tables.
pub const LATTICE_CAP: u64 = 2310;
/// Default upper level for suites built on modular symbols.
pub const MODSYM_CAP: u64 = 70;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Suite {
    LatticeOracle,
    DivisorLemmas,
    Eigenform,
    Residues,
    Qidentity,
    IndexVsOrder,
    Nonmaximal,
    MainTheorem,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::LatticeOracle,
        Suite::DivisorLemmas,
        Suite::Eigenform,
        Suite::Residues,
        Suite::Qidentity,
        Suite::IndexVsOrder,
        Suite::Nonmaximal,
        Suite::MainTheorem,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::LatticeOracle => "lattice-oracle",
            Suite::DivisorLemmas => "divisor-lemmas",
            Suite::Eigenform => "eigenform",
            Suite::Residues => "residues",
            Suite::Qidentity => "qidentity",
            Suite::IndexVsOrder => "index-vs-order",
            Suite::Nonmaximal => "nonmaximal",
            Suite::MainTheorem => "main-theorem",
        }
    }

    /// Whether the suite needs the modular-symbol engine.
    pub fn uses_modular_symbols(self) -> bool {
        matches!(
            self,
            Suite::IndexVsOrder | Suite::Nonmaximal | Suite::MainTheorem
        )
    }

    pub fn default_cap(self) -> u64 {
        if self.uses_modular_symbols() {
            MODSYM_CAP
        } else {
            LATTICE_CAP
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| format!("unknown suite `{s}`"))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CaseResult {
    pub n: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<u64>,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub min_level: u64,
    pub max_level: u64,
    pub cases: Vec<CaseResult>,
    pub passed: bool,
}

impl SuiteReport {
    pub fn failures(&self) -> impl Iterator<Item = &CaseResult> {
        self.cases.iter().filter(|c| !c.passed)
    }
}

/// Square-free levels in `lo..=hi`.
pub fn square_free_levels(lo: u64, hi: u64) -> Vec<u64> {
    (lo.max(1)..=hi).filter(|&n| is_square_free(n)).collect()
}

fn case(n: u64, m: Option<u64>, passed: bool, detail: Value) -> CaseResult {
    CaseResult {
        n,
        m,
        passed,
        detail,
    }
}

fn failed(n: u64, m: Option<u64>, e: Error) -> CaseResult {
    case(n, m, false, json!({ "error": e.to_string() }))
}

fn proper_divisors(level: &SquareFreeLevel) -> Result<Vec<u64>> {
    Ok(DivisorTable::new(level)?
        .values()
        .into_iter()
        .filter(|&m| m != 1)
        .collect())
}

fn per_pair<F>(levels: &[u64], f: F) -> Vec<CaseResult>
where
    F: Fn(&SquareFreeLevel, u64) -> Result<CaseResult> + Sync,
{
    levels
        .par_iter()
        .flat_map_iter(|&n| {
            let level = match SquareFreeLevel::new(n) {
                Ok(l) => l,
                Err(e) => return vec![failed(n, None, e)],
            };
            match proper_divisors(&level) {
                Ok(ms) => ms
                    .into_iter()
                    .map(|m| f(&level, m).unwrap_or_else(|e| failed(n, Some(m), e)))
                    .collect(),
                Err(e) => vec![failed(n, None, e)],
            }
        })
        .collect()
}

fn per_level<F>(levels: &[u64], f: F) -> Vec<CaseResult>
where
    F: Fn(&SquareFreeLevel) -> Result<Vec<CaseResult>> + Sync,
{
    levels
        .par_iter()
        .flat_map_iter(|&n| {
            SquareFreeLevel::new(n)
                .and_then(|l| f(&l))
                .unwrap_or_else(|e| vec![failed(n, None, e)])
        })
        .collect()
}

fn lattice_oracle(level: &SquareFreeLevel, m: u64) -> Result<CaseResult> {
    let r = order_with_oracle(level, m)?;
    Ok(case(
        level.value(),
        Some(m),
        r.agreed == Some(true),
        serde_json::to_value(&r).expect("serializable"),
    ))
}

/// Box-addition lemmas and `(24Λ)·A = φψ·I` at one level.
pub fn divisor_lemmas(level: &SquareFreeLevel) -> Result<CaseResult> {
    let tables = build_tables(level)?;
    let t = &tables.divisors;
    let s = t.len();
    let n = level.value();
    let d = |i: usize, j: usize| box_add(t.get(i), t.get(j));
    let mut failures: Vec<String> = Vec::new();
    let mut check = |ok: bool, what: String| {
        if !ok && failures.len() < 10 {
            failures.push(what);
        }
    };
    for i in 0..s {
        check(
            t.get(i).value() * t.get(s - 1 - i).value() == n,
            format!("d_{i}·d_(s+1-{i}) ≠ N"),
        );
        check(
            d(i, 0)?.value() == n / t.get(i).value(),
            format!("part 2 at i={i}"),
        );
        let mut row: Vec<u64> = (0..s)
            .map(|k| d(i, k).map(|x| x.value()))
            .collect::<Result<_>>()?;
        row.sort_unstable();
        let mut all = t.values();
        all.sort_unstable();
        check(row == all, format!("part 3 at i={i}"));
        for j in 0..s {
            let dij = d(i, j)?;
            check(
                dij == d(j, i)? && dij == d(s - 1 - i, s - 1 - j)?,
                format!("part 1 at ({i},{j})"),
            );
            check(
                sgn(level, &dij) == sgn(level, t.get(i)) * sgn(level, t.get(j)),
                format!("part 4 at ({i},{j})"),
            );
        }
    }
    // Part 5 with p_n the largest prime.
    let pn = *level.primes().last().expect("N > 1");
    for i in 0..s {
        for j in 0..s {
            if i == j || d(i, j)?.value() % pn == 0 {
                continue;
            }
            for k in 0..s {
                let dkj = d(k, j)?.value();
                if dkj % pn == 0 {
                    continue;
                }
                let target = pn * dkj;
                let rk = (0..s)
                    .map(|r| d(r, j).map(|x| x.value() == target))
                    .collect::<Result<Vec<_>>>()?
                    .iter()
                    .position(|&b| b);
                match rk {
                    Some(r) => check(
                        d(i, k)?.value() * dkj == d(i, r)?.value() * d(r, j)?.value(),
                        format!("part 5 at ({i},{j},{k})"),
                    ),
                    None => check(false, format!("part 5: no r(k) at ({i},{j},{k})")),
                }
            }
        }
    }
    let (phi, psi, _) = phi_psi_omega(level);
    let product = tables.lambda24.mul(&tables.a)?;
    check(
        product == IntMatrix::identity(s).scale(&(&phi * &psi)),
        "(24Λ)·A ≠ φψ·I".into(),
    );
    let sum: BigInt = t
        .divisors()
        .iter()
        .map(|x| BigInt::from(sgn(level, x)) * BigInt::from(x.value()).pow(2))
        .sum();
    check(sum == &phi * &psi, "Σ sgn(d)·d² ≠ φψ".into());
    Ok(case(
        n,
        None,
        failures.is_empty(),
        json!({ "divisors": s, "phi_psi": (phi * psi).to_string(), "failures": failures }),
    ))
}

fn eigenform(level: &SquareFreeLevel, m: u64) -> Result<CaseResult> {
    let n = level.value();
    let f = eisenstein_series(level, m, EIGENFORM_PRECISION)?;
    let mut checked = Vec::new();
    let mut failures = Vec::new();
    for r in (2..20u64).filter(|&r| is_prime(r)) {
        let lambda = if !n.is_multiple_of(r) {
            r + 1
        } else if m.is_multiple_of(r) {
            1
        } else {
            r
        };
        let ok = is_hecke_eigen(&f, r, level, &BigInt::from(lambda))?;
        checked.push(json!([r, lambda]));
        if !ok {
            failures.push(r);
        }
    }
    for &p in level.primes().iter().filter(|&&p| p >= 20) {
        let lambda = if m.is_multiple_of(p) { 1 } else { p };
        let ok = is_hecke_eigen(&f, p, level, &BigInt::from(lambda))?;
        checked.push(json!([p, lambda]));
        if !ok {
            failures.push(p);
        }
    }
    Ok(case(
        n,
        Some(m),
        failures.is_empty(),
        json!({ "precision": EIGENFORM_PRECISION, "operators": checked, "failures": failures }),
    ))
}

fn residue_case(level: &SquareFreeLevel, m: u64) -> Result<CaseResult> {
    let n = level.value();
    let reports = residues(level, m)?;
    let constant = reports
        .iter()
        .find(|r| r.source == ResidueSource::ConstantTerm)
        .expect("constant term reported");
    let cusp_m = reports
        .iter()
        .find(|r| r.source == ResidueSource::CuspM)
        .expect("P_M reported");
    let series = eisenstein_series(level, m, 2)?;
    let mut ok = constant.value.is_integer() && &constant.value.to_integer() == series.coeff(0);
    if m == n {
        ok &= cusp_m.value == constant.value;
    } else {
        ok &= constant.value.is_zero();
    }
    if level.omega() == 1 {
        let at_one = reports
            .iter()
            .find(|r| r.cusp == 1 && r.source == ResidueSource::AtkinLehnerImage)
            .expect("prime level reports P_1");
        ok &= (&at_one.value + &constant.value).is_zero();
    }
    Ok(case(
        n,
        Some(m),
        ok,
        serde_json::to_value(&reports).expect("serializable"),
    ))
}

fn qidentity(level: &SquareFreeLevel) -> Result<Vec<CaseResult>> {
    let n = level.value();
    level
        .primes()
        .iter()
        .filter(|&&p| n / p > 1)
        .map(|&p| {
            let r = level_lowering_identity_check(level, p, IDENTITY_PRECISION)?;
            Ok(case(
                n,
                Some(p),
                r.holds,
                serde_json::to_value(&r).expect("serializable"),
            ))
        })
        .collect()
}

fn modsym_levels(lo: u64, hi: u64) -> Vec<u64> {
    square_free_levels(lo.max(7), hi)
}

fn index_vs_order(level: &SquareFreeLevel, cap: u64) -> Result<Vec<CaseResult>> {
    let analysis = LevelAnalysis::build_with_cap(level, cap)?;
    if analysis.ring.genus() == 0 {
        return Ok(Vec::new());
    }
    proper_divisors(level)?
        .into_iter()
        .map(|m| {
            let r = compare_index_order(&analysis, m)?;
            let cyclic = analysis.ideal(m)?.cyclic;
            let ok = r.verdict != Verdict::Violation && cyclic;
            let mut detail = serde_json::to_value(&r).expect("serializable");
            detail["cyclic"] = json!(cyclic);
            Ok(case(level.value(), Some(m), ok, detail))
        })
        .collect()
}

fn nonmaximal(level: &SquareFreeLevel, cap: u64) -> Result<Vec<CaseResult>> {
    let analysis = LevelAnalysis::build_with_cap(level, cap)?;
    let (_, check) = enumerate_eisenstein_maximal(&analysis)?;
    Ok(vec![case(
        level.value(),
        Some(1),
        check.holds,
        serde_json::to_value(&check).expect("serializable"),
    )])
}

fn main_theorem(level: &SquareFreeLevel, cap: u64) -> Result<Vec<CaseResult>> {
    let analysis = LevelAnalysis::build_with_cap(level, cap)?;
    let (records, _) = enumerate_eisenstein_maximal(&analysis)?;
    let checks = verify_main_theorem(level, &records)?;
    let ok = checks.iter().all(|c| c.holds) && records.iter().all(|r| r.normalized);
    Ok(vec![case(
        level.value(),
        None,
        ok,
        json!({ "records": records, "checks": checks }),
    )])
}

/// Runs a suite over the square-free levels up to `max_level`. The lattice
/// oracle and modular-symbol suites start at `N = 7`.
pub fn run_suite(suite: Suite, max_level: u64) -> Result<SuiteReport> {
    let (min_level, levels) = match suite {
        Suite::LatticeOracle => (7, square_free_levels(7, max_level)),
        Suite::DivisorLemmas => (2, square_free_levels(2, max_level)),
        Suite::Eigenform | Suite::Residues | Suite::Qidentity => {
            (2, square_free_levels(2, max_level))
        }
        _ => (7, modsym_levels(7, max_level)),
    };
    let cap = max_level.max(super::modsym::DEFAULT_MAX_LEVEL);
    let mut cases = match suite {
        Suite::LatticeOracle => per_pair(&levels, lattice_oracle),
        Suite::DivisorLemmas => per_level(&levels, |l| Ok(vec![divisor_lemmas(l)?])),
        Suite::Eigenform => per_pair(&levels, eigenform),
        Suite::Residues => per_pair(&levels, residue_case),
        Suite::Qidentity => per_level(&levels, qidentity),
        Suite::IndexVsOrder => per_level(&levels, |l| index_vs_order(l, cap)),
        Suite::Nonmaximal => per_level(&levels, |l| nonmaximal(l, cap)),
        Suite::MainTheorem => per_level(&levels, |l| main_theorem(l, cap)),
    };
    cases.sort_by_key(|c| (c.n, c.m));
    let passed = cases.iter().all(|c| c.passed);
    Ok(SuiteReport {
        suite,
        min_level,
        max_level,
        cases,
        passed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
    }

    #[test]
    fn small_sweeps() {
        for s in [
            Suite::LatticeOracle,
            Suite::DivisorLemmas,
            Suite::Residues,
            Suite::Qidentity,
        ] {
            let r = run_suite(s, 40).unwrap();
            assert!(r.passed, "{s}: {:?}", r.failures().next());
            assert!(!r.cases.is_empty());
        }
        let r = run_suite(Suite::MainTheorem, 20).unwrap();
        assert!(r.passed, "{:?}", r.failures().next());
    }
}
