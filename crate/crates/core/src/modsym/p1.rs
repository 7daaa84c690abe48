//! `P^1(Z/N)` for square-free `N`, indexed through the Chinese remainder
//! theorem: a point is a tuple of points of `P^1(F_p)`, each encoded as
//! `u ∈ [0, p)` for `(u : 1)` or `p` for `(1 : 0)`.

use crate::exactnum::SquareFreeLevel;

#[derive(Clone, Debug)]
pub struct P1List {
    n: i64,
    primes: Vec<i64>,
    radix: Vec<usize>,
    reps: Vec<(i64, i64)>,
}

fn inv_mod(a: i64, p: i64) -> i64 {
    // p is prime and a is a unit; Fermat.
    let mut result = 1i64;
    let mut base = a.rem_euclid(p);
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

impl P1List {
    pub fn new(level: &SquareFreeLevel) -> Self {
        let n = level.value() as i64;
        let primes: Vec<i64> = level.primes().iter().map(|&p| p as i64).collect();
        let mut radix = Vec::with_capacity(primes.len());
        let mut size = 1usize;
        for &p in &primes {
            radix.push(size);
            size *= p as usize + 1;
        }
        let crt: Vec<i64> = primes
            .iter()
            .map(|&p| {
                let cof = n / p;
                cof * inv_mod(cof % p, p) % n
            })
            .collect();
        let reps = (0..size)
            .map(|idx| {
                let (mut c, mut d) = (0i64, 0i64);
                for (k, &p) in primes.iter().enumerate() {
                    let u = (idx / radix[k]) as i64 % (p + 1);
                    let (cp, dp) = if u == p { (1, 0) } else { (u, 1) };
                    c = (c + cp * crt[k]) % n;
                    d = (d + dp * crt[k]) % n;
                }
                if n == 1 {
                    (0, 1)
                } else {
                    (c, d)
                }
            })
            .collect();
        Self {
            n,
            primes,
            radix,
            reps,
        }
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn level(&self) -> i64 {
        self.n
    }

    /// Index of `(c : d)`, or `None` when `gcd(c, d, N) ≠ 1`.
    pub fn index(&self, c: i64, d: i64) -> Option<usize> {
        let mut idx = 0usize;
        for (k, &p) in self.primes.iter().enumerate() {
            let cp = c.rem_euclid(p);
            let dp = d.rem_euclid(p);
            let u = if dp != 0 {
                cp * inv_mod(dp, p) % p
            } else if cp != 0 {
                p
            } else {
                return None;
            };
            idx += u as usize * self.radix[k];
        }
        Some(idx)
    }

    /// Canonical representative `(c, d)` with `0 ≤ c, d < N`.
    pub fn rep(&self, i: usize) -> (i64, i64) {
        self.reps[i]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes_and_roundtrip() {
        for n in [1u64, 2, 11, 14, 30, 70] {
            let l = SquareFreeLevel::new(n).unwrap();
            let p1 = P1List::new(&l);
            let psi: u64 = l.primes().iter().map(|p| p + 1).product();
            assert_eq!(p1.len() as u64, psi);
            for i in 0..p1.len() {
                let (c, d) = p1.rep(i);
                assert_eq!(p1.index(c, d), Some(i));
                // scaling by a unit does not move the point
                assert_eq!(
                    p1.index(c * 7, d * 7),
                    if n % 7 == 0 { None } else { Some(i) }
                );
            }
        }
    }

    #[test]
    fn degenerate_pairs() {
        let p1 = P1List::new(&SquareFreeLevel::new(30).unwrap());
        assert_eq!(p1.index(2, 4), None);
        assert!(p1.index(2, 3).is_some());
    }
}
