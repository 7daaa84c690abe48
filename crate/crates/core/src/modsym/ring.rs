//! The Hecke ring as a lattice of integer matrices.

use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use serde::Serialize;

use super::space::ManinSymbolSpace;
use crate::error::{Error, Result};
use crate::exactnum::{IntMatrix, Lattice};

/// `T_1, …, T_b` on the cuspidal lattice and the HNF basis of their span.
#[derive(Debug)]
pub struct HeckeRingModel {
    space: ManinSymbolSpace,
    bound: u64,
    generators: Vec<IntMatrix>,
    lattice: Lattice,
    cache: Mutex<HashMap<u64, IntMatrix>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct HeckeRingSummary {
    pub n: u64,
    pub genus: usize,
    pub bound: u64,
    pub rank: usize,
    pub basis: Vec<IntMatrix>,
}

/// `⌈ψ(N)/6⌉`.
pub fn sturm_bound(space: &ManinSymbolSpace) -> u64 {
    let psi = space.p1().len() as u64;
    psi.div_ceil(6)
}

pub fn hecke_ring(space: ManinSymbolSpace) -> Result<HeckeRingModel> {
    let bound = sturm_bound(&space);
    let dim = space.cuspidal_rank();
    let generators = (1..=bound)
        .map(|n| space.hecke_matrix(n))
        .collect::<Result<Vec<_>>>()?;
    let rows: Vec<Vec<BigInt>> = generators.iter().map(|m| m.flatten()).collect();
    let lattice = Lattice::from_rows(dim * dim, rows)?;
    if lattice.rank() != space.genus() {
        return Err(Error::Invariant(format!(
            "Hecke ring at level {} has rank {} but genus is {}",
            space.level().value(),
            lattice.rank(),
            space.genus()
        )));
    }
    let cache = generators
        .iter()
        .enumerate()
        .map(|(i, m)| (i as u64 + 1, m.clone()))
        .collect();
    let model = HeckeRingModel {
        space,
        bound,
        generators,
        lattice,
        cache: Mutex::new(cache),
    };
    model.check_closure()?;
    Ok(model)
}

impl HeckeRingModel {
    pub fn space(&self) -> &ManinSymbolSpace {
        &self.space
    }

    pub fn level(&self) -> u64 {
        self.space.level().value()
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    pub fn genus(&self) -> usize {
        self.space.genus()
    }

    pub fn rank(&self) -> usize {
        self.lattice.rank()
    }

    pub fn is_zero_ring(&self) -> bool {
        self.rank() == 0
    }

    pub fn lattice(&self) -> &Lattice {
        &self.lattice
    }

    pub fn generators(&self) -> &[IntMatrix] {
        &self.generators
    }

    /// Size of the matrices (the cuspidal rank `2g`).
    pub fn matrix_dim(&self) -> usize {
        self.space.cuspidal_rank()
    }

    /// `T_n` on the cuspidal lattice, memoized.
    pub fn t(&self, n: u64) -> Result<IntMatrix> {
        if let Some(m) = self.cache.lock().expect("cache poisoned").get(&n) {
            return Ok(m.clone());
        }
        let m = self.space.hecke_matrix(n)?;
        self.cache
            .lock()
            .expect("cache poisoned")
            .insert(n, m.clone());
        Ok(m)
    }

    /// Coordinates of a matrix in the ring basis, if it lies in the ring.
    pub fn coords(&self, m: &IntMatrix) -> Option<Vec<BigInt>> {
        self.lattice.coords(&m.flatten())
    }

    /// `T_i·T_j` lies in the span for `i·j ≤ b`.
    fn check_closure(&self) -> Result<()> {
        let b = self.bound as usize;
        for i in 2..=b {
            for j in i..=b / i {
                let prod = self.generators[i - 1].mul(&self.generators[j - 1])?;
                if self.coords(&prod).is_none() {
                    return Err(Error::Invariant(format!(
                        "T_{i}·T_{j} outside the Hecke lattice at level {}",
                        self.level()
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn summary(&self) -> HeckeRingSummary {
        let d = self.matrix_dim();
        HeckeRingSummary {
            n: self.level(),
            genus: self.genus(),
            bound: self.bound,
            rank: self.rank(),
            basis: (0..self.rank())
                .map(|i| {
                    IntMatrix::from_vec(d, d, self.lattice.basis().row(i).to_vec())
                        .expect("basis rows are flattened square matrices")
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::SquareFreeLevel;

    fn ring(n: u64) -> HeckeRingModel {
        hecke_ring(ManinSymbolSpace::build(&SquareFreeLevel::new(n).unwrap()).unwrap()).unwrap()
    }

    #[test]
    fn anchors() {
        let r11 = ring(11);
        assert_eq!(r11.rank(), 1);
        assert_eq!(r11.bound(), 2);
        assert!(ring(7).is_zero_ring());
        assert_eq!(ring(30).rank(), 3);
    }
}
