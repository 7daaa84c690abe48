//! Truncated q-expansions and the Eisenstein series built from
//! `e = 1 - 24 Σ σ(n) q^n` and `E_4 = 1 + 240 Σ σ_3(n) q^n`.
//!
//! `E_{M,N}` is kept with integer coefficients; the normalised series
//! `F_N = (-1/24)·E_{1,N}` is obtained by exact division when needed.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Pow, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::divlattice::{Divisor, SquareFreeLevel};
use crate::error::{Error, Result};
use crate::exactnum::{gcd_u64, is_prime, phi_psi_omega};

/// Default number of coefficients.
pub const DEFAULT_PRECISION: usize = 200;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawExpansion")]
pub struct QExpansion {
    /// 0 for integer coefficients, otherwise coefficients live in `Z/modulus`.
    #[serde(serialize_with = "crate::serde_big::bigint")]
    modulus: BigInt,
    precision: usize,
    #[serde(serialize_with = "crate::serde_big::bigint_vec")]
    coeffs: Vec<BigInt>,
}

#[derive(Deserialize)]
struct RawExpansion {
    #[serde(deserialize_with = "crate::serde_big::de_bigint")]
    modulus: BigInt,
    precision: usize,
    #[serde(deserialize_with = "crate::serde_big::de_bigint_vec")]
    coeffs: Vec<BigInt>,
}

impl TryFrom<RawExpansion> for QExpansion {
    type Error = Error;
    fn try_from(raw: RawExpansion) -> Result<Self> {
        if raw.coeffs.len() != raw.precision {
            return Err(Error::Dimension(format!(
                "precision {} but {} coefficients",
                raw.precision,
                raw.coeffs.len()
            )));
        }
        if raw.modulus.is_negative() {
            return Err(Error::Dimension("negative modulus".into()));
        }
        Ok(Self::new(raw.coeffs).with_modulus(&raw.modulus))
    }
}

impl QExpansion {
    /// Integer series `Σ coeffs[n] q^n + O(q^len)`.
    pub fn new(coeffs: Vec<BigInt>) -> Self {
        Self {
            modulus: BigInt::zero(),
            precision: coeffs.len(),
            coeffs,
        }
    }

    pub fn from_i64(coeffs: &[i64]) -> Self {
        Self::new(coeffs.iter().map(|&x| x.into()).collect())
    }

    /// Reduces into `Z/m` (least nonnegative residues); `m = 0` is a no-op.
    pub fn with_modulus(mut self, m: &BigInt) -> Self {
        if !m.is_zero() {
            for c in &mut self.coeffs {
                *c = c.mod_floor(m);
            }
        }
        self.modulus = m.clone();
        self
    }

    pub fn modulus(&self) -> &BigInt {
        &self.modulus
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, n: usize) -> &BigInt {
        &self.coeffs[n]
    }

    pub fn truncate(&self, len: usize) -> Self {
        let len = len.min(self.precision);
        Self {
            modulus: self.modulus.clone(),
            precision: len,
            coeffs: self.coeffs[..len].to_vec(),
        }
    }

    fn reduced(self) -> Self {
        let m = self.modulus.clone();
        self.with_modulus(&m)
    }

    fn same_ring(&self, other: &Self) -> Result<()> {
        if self.modulus != other.modulus {
            return Err(Error::Dimension(
                "series over different coefficient rings".into(),
            ));
        }
        Ok(())
    }

    /// Difference, truncated to the shorter precision.
    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.same_ring(other)?;
        let len = self.precision.min(other.precision);
        Ok(Self {
            modulus: self.modulus.clone(),
            precision: len,
            coeffs: (0..len)
                .map(|i| &self.coeffs[i] - &other.coeffs[i])
                .collect(),
        }
        .reduced())
    }

    pub fn scale(&self, k: &BigInt) -> Self {
        Self {
            modulus: self.modulus.clone(),
            precision: self.precision,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
        .reduced()
    }

    /// `f(q^p)` to the given precision.
    pub fn substitute_power(&self, p: usize, precision: usize) -> Result<Self> {
        if p == 0 {
            return Err(Error::Dimension("q^0 substitution".into()));
        }
        if precision.div_ceil(p) > self.precision {
            return Err(Error::PrecisionTooSmall(self.precision));
        }
        let coeffs = (0..precision)
            .map(|n| {
                if n % p == 0 {
                    self.coeffs[n / p].clone()
                } else {
                    BigInt::zero()
                }
            })
            .collect();
        Ok(Self {
            modulus: self.modulus.clone(),
            precision,
            coeffs,
        })
    }

    /// `self / k` when every coefficient is divisible by `k` (integer series only).
    pub fn exact_div(&self, k: &BigInt) -> Option<Self> {
        if !self.modulus.is_zero() || k.is_zero() {
            return None;
        }
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| {
                let (q, r) = c.div_rem(k);
                r.is_zero().then_some(q)
            })
            .collect::<Option<Vec<_>>>()?;
        Some(Self::new(coeffs))
    }
}

/// `σ_k(n) = Σ_{d | n} d^k`.
pub fn sigma(n: u64, k: u32) -> BigInt {
    let mut total = BigInt::zero();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            total += BigInt::from(d).pow(k);
            let e = n / d;
            if e != d {
                total += BigInt::from(e).pow(k);
            }
        }
        d += 1;
    }
    total
}

fn eisenstein_level_one(precision: usize, scale: i64, k: u32) -> Result<QExpansion> {
    if precision == 0 {
        return Err(Error::PrecisionTooSmall(0));
    }
    let mut coeffs = Vec::with_capacity(precision);
    coeffs.push(BigInt::one());
    for n in 1..precision {
        coeffs.push(BigInt::from(scale) * sigma(n as u64, k));
    }
    Ok(QExpansion::new(coeffs))
}

/// `e(z) = 1 - 24 Σ σ(n) q^n`.
pub fn series_e(precision: usize) -> Result<QExpansion> {
    eisenstein_level_one(precision, -24, 1)
}

/// `E_4(z) = 1 + 240 Σ σ_3(n) q^n`.
pub fn series_e4(precision: usize) -> Result<QExpansion> {
    eisenstein_level_one(precision, 240, 3)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RaiseSign {
    /// `g(z) - p^{k-1} g(pz)`
    Plus,
    /// `g(z) - g(pz)`
    Minus,
}

/// `[p]_k^±`.
pub fn level_raise(g: &QExpansion, p: u64, weight: u32, sign: RaiseSign) -> Result<QExpansion> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let c = match sign {
        RaiseSign::Plus => BigInt::from(p).pow(weight.saturating_sub(1)),
        RaiseSign::Minus => BigInt::one(),
    };
    let p = p as usize;
    let coeffs = (0..g.precision())
        .map(|n| {
            if n % p == 0 {
                &g.coeffs[n] - &c * &g.coeffs[n / p]
            } else {
                g.coeffs[n].clone()
            }
        })
        .collect();
    Ok(QExpansion {
        modulus: g.modulus.clone(),
        precision: g.precision,
        coeffs,
    }
    .reduced())
}

/// The operator word defining an Eisenstein series.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EisensteinSeriesSpec {
    pub n: u64,
    pub m: u64,
    pub weight: u32,
    /// Applied left to right: `[p]^+` for `p | M`, then `[q]^-` for `q | N/M`.
    pub word: Vec<(u64, RaiseSign)>,
}

impl EisensteinSeriesSpec {
    pub fn weight_two(level: &SquareFreeLevel, m: u64) -> Result<Self> {
        level.check_divisor(m)?;
        let plus = level
            .primes()
            .iter()
            .filter(|&&p| m.is_multiple_of(p))
            .map(|&p| (p, RaiseSign::Plus));
        let minus = level
            .primes()
            .iter()
            .filter(|&&p| !m.is_multiple_of(p))
            .map(|&p| (p, RaiseSign::Minus));
        Ok(Self {
            n: level.value(),
            m,
            weight: 2,
            word: plus.chain(minus).collect(),
        })
    }

    pub fn apply(&self, base: &QExpansion) -> Result<QExpansion> {
        self.word.iter().try_fold(base.clone(), |g, &(p, s)| {
            level_raise(&g, p, self.weight, s)
        })
    }
}

/// `E_{M,N}`; `M = 1` is allowed.
pub fn eisenstein_series(level: &SquareFreeLevel, m: u64, precision: usize) -> Result<QExpansion> {
    EisensteinSeriesSpec::weight_two(level, m)?.apply(&series_e(precision)?)
}

/// Weight-2 Hecke operator `T_n` at level `N` on a q-expansion:
/// `b_m = Σ_{d | (m, n), (d, N) = 1} d·a_{mn/d²}`. For `p | N` this is `U_p`.
/// The result keeps only the coefficients that are determined, i.e. has
/// precision `⌊(T-1)/n⌋ + 1`.
pub fn hecke_on_expansion(f: &QExpansion, n: u64, level: &SquareFreeLevel) -> Result<QExpansion> {
    if n == 0 {
        return Err(Error::Dimension("T_0 is undefined".into()));
    }
    let t = f.precision();
    if t == 0 {
        return Err(Error::PrecisionTooSmall(0));
    }
    let usable = (t - 1) / n as usize + 1;
    if usable < 2 {
        return Err(Error::PrecisionTooSmall(usable));
    }
    let big_n = level.value();
    let coeffs = (0..usable as u64)
        .map(|m| {
            let g = gcd_u64(m, n);
            let mut acc = BigInt::zero();
            for d in 1..=g {
                if g.is_multiple_of(d) && gcd_u64(d, big_n) == 1 {
                    acc += BigInt::from(d) * &f.coeffs[(m * n / (d * d)) as usize];
                }
            }
            acc
        })
        .collect();
    Ok(QExpansion {
        modulus: f.modulus.clone(),
        precision: usable,
        coeffs,
    }
    .reduced())
}

/// Whether `T_n f = λ f` on every coefficient that `T_n f` determines.
pub fn is_hecke_eigen(
    f: &QExpansion,
    n: u64,
    level: &SquareFreeLevel,
    lambda: &BigInt,
) -> Result<bool> {
    let tf = hecke_on_expansion(f, n, level)?;
    let rhs = f.truncate(tf.precision()).scale(lambda);
    Ok(tf == rhs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResidueSource {
    /// Constant term at `P_N = ∞`.
    ConstantTerm,
    /// `P_{N/p}` for `M = N`.
    AtkinLehnerImage,
    /// The closed form at `P_M`.
    CuspM,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ResidueReport {
    pub cusp: u64,
    pub source: ResidueSource,
    #[serde(serialize_with = "crate::serde_big::rational")]
    pub value: BigRational,
}

fn minus_one_pow(k: usize) -> BigInt {
    if k.is_multiple_of(2) {
        BigInt::one()
    } else {
        -BigInt::one()
    }
}

/// Residues of `E_{M,N}` at `P_N`, at each `P_{N/p}` when `M = N`, and at `P_M`.
pub fn residues(level: &SquareFreeLevel, m: u64) -> Result<Vec<ResidueReport>> {
    if m == 1 {
        return Err(Error::TrivialDivisor);
    }
    level.check_divisor(m)?;
    let n = level.value();
    let omega = level.omega();
    let (phi, _, _) = phi_psi_omega(level);
    let (_, psi_cof, _) = phi_psi_omega(&SquareFreeLevel::new(n / m)?);
    let mut out = Vec::new();
    let at_infinity = if m == n {
        minus_one_pow(omega) * &phi
    } else {
        BigInt::zero()
    };
    out.push(ResidueReport {
        cusp: n,
        source: ResidueSource::ConstantTerm,
        value: BigRational::from_integer(at_infinity),
    });
    if m == n {
        for &p in level.primes() {
            out.push(ResidueReport {
                cusp: n / p,
                source: ResidueSource::AtkinLehnerImage,
                value: BigRational::from_integer(minus_one_pow(omega - 1) * &phi),
            });
        }
    }
    let omega_m = Divisor::from_value(level, m)?.omega() as usize;
    out.push(ResidueReport {
        cusp: m,
        source: ResidueSource::CuspM,
        value: BigRational::new(minus_one_pow(omega_m) * &phi * psi_cof * m, BigInt::from(n)),
    });
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IdentityCheck {
    pub n: u64,
    pub p: u64,
    pub checked_terms: usize,
    pub holds: bool,
    pub first_failure: Option<usize>,
}

fn normalised_f(level: &SquareFreeLevel, m: u64, precision: usize) -> Result<QExpansion> {
    eisenstein_series(level, m, precision)?
        .exact_div(&BigInt::from(-24))
        .ok_or_else(|| Error::Invariant(format!("E_{{{m},{}}} not divisible by 24", level.value())))
}

/// Checks `F_N - G = (p-1)·F_D(q^p)` coefficient-wise, where `N = pD`,
/// `F_N = (-1/24)E_{1,N}` and `G = (-1/24)E_{p,N}`.
pub fn level_lowering_identity_check(
    level: &SquareFreeLevel,
    p: u64,
    precision: usize,
) -> Result<IdentityCheck> {
    let n = level.value();
    if !level.primes().contains(&p) {
        return Err(Error::NotAPrimeFactor(p));
    }
    let d = n / p;
    if d == 1 {
        return Err(Error::TrivialDivisor);
    }
    if precision < 2 * p as usize {
        return Err(Error::PrecisionTooSmall(precision));
    }
    let lower = SquareFreeLevel::new(d)?;
    let f_n = normalised_f(level, 1, precision)?;
    let g = normalised_f(level, p, precision)?;
    let f_d = normalised_f(&lower, 1, precision.div_ceil(p as usize))?;
    let lhs = f_n.sub(&g)?;
    let rhs = f_d
        .substitute_power(p as usize, precision)?
        .scale(&BigInt::from(p - 1));
    let first_failure = (0..precision).find(|&i| lhs.coeff(i) != rhs.coeff(i));
    Ok(IdentityCheck {
        n,
        p,
        checked_terms: precision,
        holds: first_failure.is_none(),
        first_failure,
    })
}

/// `[p_n]_4^+ ∘ ⋯ ∘ [p_2]_4^+ (E_4)` over the given primes.
pub fn weight4_g(primes: &[u64], precision: usize) -> Result<QExpansion> {
    if primes.is_empty() {
        return Err(Error::Dimension("empty prime list".into()));
    }
    let g = primes.iter().try_fold(series_e4(precision)?, |g, &p| {
        level_raise(&g, p, 4, RaiseSign::Plus)
    })?;
    let expected: BigInt = primes
        .iter()
        .map(|&p| BigInt::one() - BigInt::from(p).pow(3u32))
        .product();
    if g.coeff(0) != &expected {
        return Err(Error::Invariant("weight-4 constant term".into()));
    }
    Ok(g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lvl(n: u64) -> SquareFreeLevel {
        SquareFreeLevel::new(n).unwrap()
    }

    fn big(v: i64) -> BigInt {
        v.into()
    }

    #[test]
    fn level_one_series() {
        let e = series_e(7).unwrap();
        assert_eq!(
            e,
            QExpansion::from_i64(&[1, -24, -72, -96, -168, -144, -288])
        );
        let e4 = series_e4(3).unwrap();
        assert_eq!(e4.coeffs(), &[big(1), big(240), big(2160)]);
    }

    #[test]
    fn raising_constant_terms() {
        let e = series_e(10).unwrap();
        assert_eq!(
            level_raise(&e, 5, 2, RaiseSign::Minus).unwrap().coeff(0),
            &big(0)
        );
        assert_eq!(
            level_raise(&e, 5, 2, RaiseSign::Plus).unwrap().coeff(0),
            &big(-4)
        );
        let both = level_raise(
            &level_raise(&e, 3, 2, RaiseSign::Plus).unwrap(),
            5,
            2,
            RaiseSign::Plus,
        )
        .unwrap();
        assert_eq!(both.coeff(0), &big(8));
        assert_eq!(
            level_raise(&e, 4, 2, RaiseSign::Plus),
            Err(Error::NotPrime(4))
        );
    }

    #[test]
    fn level_11() {
        let e = eisenstein_series(&lvl(11), 11, 30).unwrap();
        assert_eq!(e.coeff(0), &big(-10));
        assert_eq!(e.coeff(1), &big(-24));
        assert_eq!(e.coeff(11), &big(-24));
        assert_eq!(eisenstein_series(&lvl(15), 3, 5).unwrap().coeff(0), &big(0));
    }

    #[test]
    fn hecke_basics() {
        let f = QExpansion::from_i64(&[0, 1, 2, 3, 4, 5, 6, 7]);
        let u = hecke_on_expansion(&f, 2, &lvl(2)).unwrap();
        assert_eq!(u.coeff(1), &big(2));
        assert_eq!(u.precision(), 4);
        assert_eq!(
            hecke_on_expansion(&f, 8, &lvl(2)),
            Err(Error::PrecisionTooSmall(1))
        );
    }

    #[test]
    fn eigen_level_11() {
        let l = lvl(11);
        let e = eisenstein_series(&l, 11, 200).unwrap();
        for r in [2u64, 3, 5, 7, 13] {
            assert!(is_hecke_eigen(&e, r, &l, &big(r as i64 + 1)).unwrap());
        }
        assert!(is_hecke_eigen(&e, 11, &l, &big(1)).unwrap());
    }

    #[test]
    fn residue_values() {
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        let r = residues(&lvl(11), 11).unwrap();
        let at = |c| r.iter().find(|x| x.cusp == c).unwrap().value.clone();
        assert_eq!(at(11), q(-10, 1));
        assert_eq!(at(1), q(10, 1));
        let r = residues(&lvl(15), 3).unwrap();
        assert_eq!(
            r.iter()
                .find(|x| x.source == ResidueSource::CuspM)
                .unwrap()
                .value,
            q(-48, 5)
        );
    }

    #[test]
    fn weight_four() {
        assert_eq!(weight4_g(&[7], 5).unwrap().coeff(0), &big(1 - 343));
        let g = weight4_g(&[3, 5], 5).unwrap();
        assert_eq!(g.coeff(0), &big(3224));
        assert_eq!(g.coeff(1), &big(240));
    }

    #[test]
    fn identity_small() {
        assert!(
            level_lowering_identity_check(&lvl(15), 3, 500)
                .unwrap()
                .holds
        );
        assert!(
            level_lowering_identity_check(&lvl(10), 2, 500)
                .unwrap()
                .holds
        );
        assert!(level_lowering_identity_check(&lvl(15), 3, 50)
            .unwrap()
            .first_failure
            .is_none());
        assert_eq!(
            level_lowering_identity_check(&lvl(11), 11, 50),
            Err(Error::TrivialDivisor)
        );
    }

    #[test]
    fn json_shape() {
        let f = QExpansion::from_i64(&[1, -24]).with_modulus(&big(7));
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"modulus":7,"precision":2,"coeffs":[1,4]}"#);
        let back: QExpansion = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        assert!(
            serde_json::from_str::<QExpansion>(r#"{"modulus":0,"precision":3,"coeffs":[1]}"#)
                .is_err()
        );
    }
}
