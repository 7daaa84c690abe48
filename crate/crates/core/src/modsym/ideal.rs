//! The Eisenstein ideal `I_{M,N}` inside the Hecke ring and its index.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use super::ring::HeckeRingModel;
use crate::error::{Error, Result};
use crate::exactnum::{is_prime, IntMatrix, Lattice};
use crate::serde_big;

/// One round of the stabilization loop.
#[derive(Clone, Debug, Serialize)]
pub struct StabilizationStep {
    pub prime_bound: u64,
    #[serde(serialize_with = "serde_big::bigint")]
    pub index: BigInt,
}

#[derive(Clone, Debug, Serialize)]
pub struct EisensteinIdealModel {
    pub n: u64,
    pub m: u64,
    /// Primes `r ∤ N` whose `T_r - (r + 1)` was used.
    pub good_primes: Vec<u64>,
    #[serde(serialize_with = "serde_big::bigint")]
    pub index: BigInt,
    /// Nontrivial invariant factors of `T/I`.
    #[serde(serialize_with = "serde_big::bigint_vec")]
    pub quotient_invariants: Vec<BigInt>,
    pub cyclic: bool,
    pub zero_ring: bool,
    pub stabilization: Vec<StabilizationStep>,
    #[serde(skip)]
    pub ideal: Option<Lattice>,
}

fn ideal_lattice(ring: &HeckeRingModel, gens: &[IntMatrix]) -> Result<Lattice> {
    let d = ring.matrix_dim();
    let basis = ring.lattice().basis();
    let mut rows = Vec::new();
    for k in 0..ring.rank() {
        let b = IntMatrix::from_vec(d, d, basis.row(k).to_vec())?;
        for g in gens {
            rows.push(b.mul(g)?.flatten());
        }
    }
    Lattice::from_rows(d * d, rows)
}

fn next_good_prime(after: u64, n: u64) -> u64 {
    (after + 1..)
        .find(|&r| is_prime(r) && !n.is_multiple_of(r))
        .expect("infinitely many primes")
}

/// Index of `I_{M,N}` in the Hecke ring. Generators `T_r - (r + 1)` are added
/// for primes `r ∤ N` up to the Sturm bound and then one prime at a time until
/// the index is unchanged for two consecutive additions.
pub fn eisenstein_index(ring: &HeckeRingModel, m: u64) -> Result<EisensteinIdealModel> {
    let n = ring.level();
    let level = ring.space().level();
    level.check_divisor(m)?;
    if ring.is_zero_ring() {
        return Ok(EisensteinIdealModel {
            n,
            m,
            good_primes: Vec::new(),
            index: BigInt::one(),
            quotient_invariants: Vec::new(),
            cyclic: true,
            zero_ring: true,
            stabilization: Vec::new(),
            ideal: None,
        });
    }
    let mut gens = Vec::new();
    for &p in level.primes() {
        let eig = if m.is_multiple_of(p) { 1 } else { p };
        gens.push(ring.t(p)?.minus_scalar(&BigInt::from(eig))?);
    }
    let mut good_primes = Vec::new();
    let mut r = next_good_prime(1, n);
    loop {
        good_primes.push(r);
        gens.push(ring.t(r)?.minus_scalar(&BigInt::from(r + 1))?);
        r = next_good_prime(r, n);
        if r > ring.bound() {
            break;
        }
    }

    let mut stabilization = Vec::new();
    let mut stable_rounds = 0;
    let (ideal, index) = loop {
        let ideal = ideal_lattice(ring, &gens)?;
        let index = ideal
            .index_in(ring.lattice())
            .filter(|_| ideal.rank() == ring.rank());
        let prime_bound = *good_primes.last().expect("nonempty");
        match &index {
            Some(t) => {
                if stabilization
                    .last()
                    .is_some_and(|s: &StabilizationStep| &s.index == t)
                {
                    stable_rounds += 1;
                } else {
                    stable_rounds = 0;
                }
                stabilization.push(StabilizationStep {
                    prime_bound,
                    index: t.clone(),
                });
            }
            None => stable_rounds = 0,
        }
        if stable_rounds >= 2 {
            break (ideal, index.expect("stable index"));
        }
        if prime_bound > 4 * ring.bound() + 50 {
            return Err(Error::InfiniteIndex(format!(
                "I_({m},{n}) has rank {} in a ring of rank {} after primes up to {prime_bound}",
                ideal.rank(),
                ring.rank()
            )));
        }
        good_primes.push(r);
        gens.push(ring.t(r)?.minus_scalar(&BigInt::from(r + 1))?);
        r = next_good_prime(r, n);
    };
    let quotient_invariants = ideal
        .quotient_invariants(ring.lattice())
        .ok_or_else(|| Error::Invariant("ideal not contained in the ring".into()))?;
    let cyclic = quotient_invariants.len() <= 1;
    Ok(EisensteinIdealModel {
        n,
        m,
        good_primes,
        index,
        quotient_invariants,
        cyclic,
        zero_ring: false,
        stabilization,
        ideal: Some(ideal),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::SquareFreeLevel;
    use crate::modsym::{hecke_ring, ManinSymbolSpace};

    fn index(n: u64, m: u64) -> EisensteinIdealModel {
        let ring = hecke_ring(ManinSymbolSpace::build(&SquareFreeLevel::new(n).unwrap()).unwrap())
            .unwrap();
        eisenstein_index(&ring, m).unwrap()
    }

    #[test]
    fn anchors() {
        assert_eq!(index(11, 11).index, BigInt::from(5));
        assert_eq!(index(33, 3).index, BigInt::from(10));
        let z = index(7, 7);
        assert!(z.zero_ring);
        assert_eq!(z.index, BigInt::one());
        let t17 = index(17, 17);
        assert!(t17.cyclic);
        assert_eq!(t17.index, BigInt::from(4));
    }
}
