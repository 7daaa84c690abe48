//! The divisors of a square-free level as a combinatorial object.
//!
//! A divisor `a | N` is the bit vector `(a_1, …, a_n)` with `a_i = 1` iff
//! `p_i | a`. Divisors are totally ordered by number of prime factors, ties
//! broken anti-lexicographically on the bit vector. Box addition
//! `a ⊞ b` sets `c_i ≡ a_i + b_i + 1 (mod 2)`; it makes the divisors an
//! elementary abelian 2-group with identity `N`.

use std::cmp::Ordering;
use std::collections::HashMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};
pub use crate::exactnum::SquareFreeLevel;
use crate::exactnum::{phi_psi_omega, IntMatrix, MAX_PRIMES};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Divisor {
    level: u64,
    bits: u32,
    value: u64,
    #[serde(skip)]
    width: u8,
}

impl Divisor {
    pub fn from_bits(level: &SquareFreeLevel, bits: u32) -> Result<Self> {
        let n = level.omega();
        if n < 32 && bits >> n != 0 {
            return Err(Error::Dimension(format!("bit vector {bits:#b} too long")));
        }
        let value = level
            .primes()
            .iter()
            .enumerate()
            .filter(|(i, _)| bits >> i & 1 == 1)
            .map(|(_, p)| p)
            .product();
        Ok(Self {
            level: level.value(),
            bits,
            value,
            width: level.omega() as u8,
        })
    }

    pub fn from_value(level: &SquareFreeLevel, value: u64) -> Result<Self> {
        level.check_divisor(value)?;
        let bits = level
            .primes()
            .iter()
            .enumerate()
            .filter(|(_, &p)| value.is_multiple_of(p))
            .fold(0u32, |acc, (i, _)| acc | 1 << i);
        Ok(Self {
            level: level.value(),
            bits,
            value,
            width: level.omega() as u8,
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn level(&self) -> u64 {
        self.level
    }

    /// `ω(a)`.
    pub fn omega(&self) -> u32 {
        self.bits.count_ones()
    }

    /// `a_i` for the `i`-th prime (0-based).
    pub fn bit(&self, i: usize) -> bool {
        self.bits >> i & 1 == 1
    }

    pub fn divides(&self, m: u64) -> bool {
        m.is_multiple_of(self.value)
    }
}

impl PartialOrd for Divisor {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Divisor {
    fn cmp(&self, other: &Self) -> Ordering {
        self.level
            .cmp(&other.level)
            .then(self.omega().cmp(&other.omega()))
            .then_with(|| {
                let diff = self.bits ^ other.bits;
                if diff == 0 {
                    Ordering::Equal
                } else if self.bits >> diff.trailing_zeros() & 1 == 1 {
                    // first differing coordinate is 1 in `self`: self comes first
                    Ordering::Less
                } else {
                    Ordering::Greater
                }
            })
    }
}

/// `a ⊞ b`.
pub fn box_add(a: &Divisor, b: &Divisor) -> Result<Divisor> {
    if a.level != b.level {
        return Err(Error::LevelMismatch(a.level, b.level));
    }
    let n = a.level;
    let full = (1u32 << a.width) - 1;
    let bits = !(a.bits ^ b.bits) & full;
    // Primes where a and b agree: those dividing both, and those dividing neither.
    let g = a.value.gcd(&b.value);
    let value = g * (n / a.value.lcm(&b.value));
    Ok(Divisor {
        level: n,
        bits,
        value,
        width: a.width,
    })
}

/// `sgn(a) = (-1)^{ω(N) - ω(a)}`.
pub fn sgn(level: &SquareFreeLevel, a: &Divisor) -> i32 {
    if (level.omega() as u32 - a.omega()).is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// `a_N(a, b) = N/(a, N/a) · (a, b)²/(ab)`.
pub fn a_n(level: &SquareFreeLevel, a: u64, b: u64) -> Result<BigRational> {
    level.check_divisor(a)?;
    level.check_divisor(b)?;
    let n = level.value();
    let g = a.gcd(&b);
    let num = BigInt::from(n) * BigInt::from(g) * BigInt::from(g);
    let den = BigInt::from(a.gcd(&(n / a))) * BigInt::from(a) * BigInt::from(b);
    Ok(BigRational::new(num, den))
}

/// The ordered divisor list `d_1 < … < d_s` with index lookup.
#[derive(Clone, Debug)]
pub struct DivisorTable {
    level: SquareFreeLevel,
    divisors: Vec<Divisor>,
    index: HashMap<u32, usize>,
}

impl DivisorTable {
    pub fn new(level: &SquareFreeLevel) -> Result<Self> {
        let n = level.omega();
        if n > MAX_PRIMES {
            return Err(Error::TooManyPrimes(level.value(), n, MAX_PRIMES));
        }
        let mut divisors = (0..1u32 << n)
            .map(|b| Divisor::from_bits(level, b))
            .collect::<Result<Vec<_>>>()?;
        divisors.sort();
        let index = divisors
            .iter()
            .enumerate()
            .map(|(i, d)| (d.bits, i))
            .collect();
        Ok(Self {
            level: level.clone(),
            divisors,
            index,
        })
    }

    pub fn level(&self) -> &SquareFreeLevel {
        &self.level
    }

    pub fn len(&self) -> usize {
        self.divisors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.divisors.is_empty()
    }

    pub fn get(&self, i: usize) -> &Divisor {
        &self.divisors[i]
    }

    pub fn divisors(&self) -> &[Divisor] {
        &self.divisors
    }

    pub fn values(&self) -> Vec<u64> {
        self.divisors.iter().map(Divisor::value).collect()
    }

    pub fn index_of(&self, d: &Divisor) -> usize {
        self.index[&d.bits]
    }

    pub fn index_of_value(&self, v: u64) -> Result<usize> {
        Ok(self.index_of(&Divisor::from_value(&self.level, v)?))
    }
}

/// `24Λ`, `A` and the divisor table they are indexed by.
#[derive(Clone, Debug)]
pub struct Tables {
    pub divisors: DivisorTable,
    /// `(24Λ)_{ij} = d_i ⊞ d_j`.
    pub lambda24: IntMatrix,
    /// `A_{ij} = sgn(d_ij)·d_ij`.
    pub a: IntMatrix,
}

/// Builds the divisor table, `24Λ` and `A`, checking `(24Λ)·A = φ(N)ψ(N)·I`.
pub fn build_tables(level: &SquareFreeLevel) -> Result<Tables> {
    let divisors = DivisorTable::new(level)?;
    let s = divisors.len();
    let mut lambda24 = IntMatrix::zeros(s, s);
    let mut a = IntMatrix::zeros(s, s);
    for i in 0..s {
        for j in 0..s {
            let d = box_add(divisors.get(i), divisors.get(j))?;
            lambda24[(i, j)] = d.value().into();
            a[(i, j)] = BigInt::from(sgn(level, &d)) * BigInt::from(d.value());
        }
    }
    let (phi, psi, _) = phi_psi_omega(level);
    let expected = IntMatrix::identity(s).scale(&(phi * psi));
    if lambda24.mul(&a)? != expected {
        return Err(Error::Invariant(format!(
            "(24Λ)·A ≠ φψ·I at level {}",
            level.value()
        )));
    }
    Ok(Tables {
        divisors,
        lambda24,
        a,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lvl(n: u64) -> SquareFreeLevel {
        SquareFreeLevel::new(n).unwrap()
    }

    fn d(l: &SquareFreeLevel, v: u64) -> Divisor {
        Divisor::from_value(l, v).unwrap()
    }

    #[test]
    fn box_addition() {
        let l = lvl(30);
        assert_eq!(box_add(&d(&l, 2), &d(&l, 2)).unwrap().value(), 30);
        for a in [1, 2, 3, 5, 6, 10, 15, 30] {
            assert_eq!(box_add(&d(&l, 1), &d(&l, a)).unwrap().value(), 30 / a);
            assert_eq!(box_add(&d(&l, 30), &d(&l, a)).unwrap().value(), a);
        }
        let other = lvl(10);
        assert_eq!(
            box_add(&d(&l, 2), &d(&other, 2)),
            Err(Error::LevelMismatch(30, 10))
        );
    }

    #[test]
    fn signs() {
        let l = lvl(30);
        assert_eq!(sgn(&l, &d(&l, 30)), 1);
        assert_eq!(sgn(&l, &d(&l, 1)), -1);
        assert_eq!(sgn(&l, &d(&l, 6)), -1);
    }

    #[test]
    fn a_n_values() {
        let l = lvl(30);
        let q = |x: u64| BigRational::from_integer(x.into());
        assert_eq!(a_n(&l, 1, 5).unwrap(), q(6));
        assert_eq!(a_n(&l, 30, 5).unwrap(), q(5));
        assert_eq!(a_n(&l, 30, 30).unwrap(), q(30));
    }

    #[test]
    fn orderings() {
        assert_eq!(
            DivisorTable::new(&lvl(10)).unwrap().values(),
            vec![1, 2, 5, 10]
        );
        assert_eq!(
            DivisorTable::new(&lvl(30)).unwrap().values(),
            vec![1, 2, 3, 5, 6, 10, 15, 30]
        );
    }

    #[test]
    fn lambda_times_a_level_10() {
        let t = build_tables(&lvl(10)).unwrap();
        let prod = t.lambda24.mul(&t.a).unwrap();
        assert_eq!(prod, IntMatrix::identity(4).scale(&BigInt::from(72)));
    }
}
