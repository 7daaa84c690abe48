use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

/// Largest number of prime factors a level may have. Divisor tables grow as
/// `2^n`, so anything beyond this is out of reach anyway.
pub const MAX_PRIMES: usize = 20;

/// Numerator of `a/b` after cancelling `gcd(a, b)`, carrying the sign of the
/// quotient.
pub fn num_parts(a: &BigInt, b: &BigInt) -> Result<BigInt> {
    if b.is_zero() {
        return Err(Error::ZeroDenominator);
    }
    let g = a.gcd(b);
    if g.is_zero() {
        return Ok(BigInt::zero());
    }
    let n = a / &g;
    Ok(if b.is_negative() { -n } else { n })
}

/// Numerator of a rational number in lowest terms.
pub fn num(x: &BigRational) -> BigInt {
    // BigRational keeps itself reduced with a positive denominator.
    x.numer().clone()
}

pub fn gcd_u64(a: u64, b: u64) -> u64 {
    a.gcd(&b)
}

pub fn factor(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p.saturating_mul(p) <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

pub fn is_prime(n: u64) -> bool {
    n >= 2 && factor(n) == [(n, 1)]
}

pub fn is_square_free(n: u64) -> bool {
    n >= 1 && factor(n).iter().all(|&(_, e)| e == 1)
}

pub fn primes_up_to(bound: u64) -> Vec<u64> {
    (2..=bound).filter(|&p| is_prime(p)).collect()
}

/// All positive divisors of `n` in increasing order.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut out = vec![1u64];
    for (p, e) in factor(n) {
        let len = out.len();
        let mut pk = 1u64;
        for _ in 0..e {
            pk *= p;
            for i in 0..len {
                out.push(out[i] * pk);
            }
        }
    }
    out.sort_unstable();
    out
}

/// A square-free positive integer together with its sorted prime factors.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SquareFreeLevel {
    value: u64,
    primes: Vec<u64>,
}

impl SquareFreeLevel {
    pub fn new(n: u64) -> Result<Self> {
        if n == 0 {
            return Err(Error::ZeroLevel);
        }
        let f = factor(n);
        if f.iter().any(|&(_, e)| e > 1) {
            return Err(Error::NotSquareFree(n));
        }
        if f.len() > MAX_PRIMES {
            return Err(Error::TooManyPrimes(n, f.len(), MAX_PRIMES));
        }
        Ok(Self {
            value: n,
            primes: f.into_iter().map(|(p, _)| p).collect(),
        })
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// `ω(N)`, the number of prime factors.
    pub fn omega(&self) -> usize {
        self.primes.len()
    }

    pub fn divides(&self, m: u64) -> bool {
        m != 0 && self.value.is_multiple_of(m)
    }

    /// Whether `N > 6`, the standing hypothesis of the theorems checked here.
    pub fn satisfies_hypothesis(&self) -> bool {
        self.value > 6
    }

    pub fn check_divisor(&self, m: u64) -> Result<()> {
        if self.divides(m) {
            Ok(())
        } else {
            Err(Error::NotADivisor { m, n: self.value })
        }
    }
}

impl std::fmt::Display for SquareFreeLevel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.value)
    }
}

/// `(φ(N), ψ(N), ω(N))` with `φ(N) = Π(p-1)` and `ψ(N) = Π(p+1)`.
pub fn phi_psi_omega(level: &SquareFreeLevel) -> (BigInt, BigInt, usize) {
    let mut phi = BigInt::one();
    let mut psi = BigInt::one();
    for &p in level.primes() {
        phi *= p - 1;
        psi *= p + 1;
    }
    (phi, psi, level.omega())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    #[test]
    fn numerators() {
        assert_eq!(num(&q(10, 24)), BigInt::from(5));
        assert_eq!(num(&q(1, 4)), BigInt::from(1));
        assert_eq!(num(&q(7, 1)), BigInt::from(7));
        assert_eq!(num_parts(&10.into(), &24.into()).unwrap(), BigInt::from(5));
        assert_eq!(
            num_parts(&10.into(), &(-24).into()).unwrap(),
            BigInt::from(-5)
        );
        assert_eq!(num_parts(&1.into(), &0.into()), Err(Error::ZeroDenominator));
    }

    #[test]
    fn phi_psi() {
        let t = |n| {
            let (a, b, c) = phi_psi_omega(&SquareFreeLevel::new(n).unwrap());
            (a, b, c)
        };
        assert_eq!(t(30), (8.into(), 72.into(), 3));
        assert_eq!(t(1), (1.into(), 1.into(), 0));
        assert_eq!(t(11), (10.into(), 12.into(), 1));
    }

    #[test]
    fn levels() {
        assert_eq!(SquareFreeLevel::new(12), Err(Error::NotSquareFree(12)));
        assert_eq!(SquareFreeLevel::new(0), Err(Error::ZeroLevel));
        assert_eq!(
            SquareFreeLevel::new(2310).unwrap().primes(),
            &[2, 3, 5, 7, 11]
        );
        assert_eq!(divisors(30), vec![1, 2, 3, 5, 6, 10, 15, 30]);
        assert!(is_prime(97) && !is_prime(91) && !is_prime(1));
    }
}
