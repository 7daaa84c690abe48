use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::normal_form::{determinant, elementary_divisors, hermite_with_transform};

/// A sublattice of `Z^n`, kept as the nonzero rows of a Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lattice {
    basis: IntMatrix,
    pivots: Vec<usize>,
}

impl Lattice {
    pub fn from_generators(gens: &IntMatrix) -> Self {
        let (h, _, pivots) = hermite_with_transform(gens);
        let keep: Vec<usize> = (0..pivots.len()).collect();
        let basis = if keep.is_empty() {
            IntMatrix::zeros(0, gens.cols())
        } else {
            h.select_rows(&keep)
        };
        Self { basis, pivots }
    }

    pub fn from_rows(cols: usize, rows: Vec<Vec<BigInt>>) -> crate::Result<Self> {
        if rows.is_empty() {
            return Ok(Self {
                basis: IntMatrix::zeros(0, cols),
                pivots: Vec::new(),
            });
        }
        Ok(Self::from_generators(&IntMatrix::from_big_rows(
            cols, rows,
        )?))
    }

    pub fn basis(&self) -> &IntMatrix {
        &self.basis
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.cols()
    }

    /// Coordinates of `v` in the Q-span of the basis, or `None` if `v` is
    /// outside that span.
    pub fn rational_coords(&self, v: &[BigInt]) -> Option<Vec<BigRational>> {
        let mut residual: Vec<BigRational> = v
            .iter()
            .map(|x| BigRational::from_integer(x.clone()))
            .collect();
        let mut out = Vec::with_capacity(self.rank());
        for (k, &p) in self.pivots.iter().enumerate() {
            let x = &residual[p] / BigRational::from_integer(self.basis[(k, p)].clone());
            if !x.is_zero() {
                for (r, b) in residual.iter_mut().zip(self.basis.row(k)) {
                    *r -= &x * BigRational::from_integer(b.clone());
                }
            }
            out.push(x);
        }
        residual.iter().all(Zero::is_zero).then_some(out)
    }

    /// Integer coordinates of `v`, or `None` if `v` is not in the lattice.
    pub fn coords(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        let mut residual = v.to_vec();
        let mut out = Vec::with_capacity(self.rank());
        for (k, &p) in self.pivots.iter().enumerate() {
            let (x, rem) = residual[p].div_rem(&self.basis[(k, p)]);
            if !rem.is_zero() {
                return None;
            }
            if !x.is_zero() {
                for (r, b) in residual.iter_mut().zip(self.basis.row(k)) {
                    *r -= &x * b;
                }
            }
            out.push(x);
        }
        residual.iter().all(Zero::is_zero).then_some(out)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coords(v).is_some()
    }

    /// Smallest `k ≥ 1` with `k·v` in the lattice; `None` if no multiple is.
    pub fn order_of(&self, v: &[BigInt]) -> Option<BigInt> {
        let c = self.rational_coords(v)?;
        Some(c.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom())))
    }

    /// Coordinates of every basis vector of `self` inside `sup`, as a
    /// `rank × sup.rank` matrix. `None` unless `self ⊆ sup`.
    pub fn coords_in(&self, sup: &Lattice) -> Option<IntMatrix> {
        let mut rows = Vec::with_capacity(self.rank());
        for i in 0..self.rank() {
            rows.push(sup.coords(self.basis.row(i))?);
        }
        if rows.is_empty() {
            return Some(IntMatrix::zeros(0, sup.rank()));
        }
        IntMatrix::from_big_rows(sup.rank(), rows).ok()
    }

    /// `[sup : self]` when `self ⊆ sup` has full rank in `sup`.
    pub fn index_in(&self, sup: &Lattice) -> Option<BigInt> {
        if self.rank() != sup.rank() {
            return None;
        }
        let c = self.coords_in(sup)?;
        Some(determinant(&c).abs())
    }

    /// Invariant factors (those `> 1`) of `sup / self`; requires full rank.
    pub fn quotient_invariants(&self, sup: &Lattice) -> Option<Vec<BigInt>> {
        if self.rank() != sup.rank() {
            return None;
        }
        let c = self.coords_in(sup)?;
        Some(
            elementary_divisors(&c)
                .into_iter()
                .filter(|d| !d.is_one())
                .collect(),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| x.into()).collect()
    }

    #[test]
    fn membership_and_order() {
        let l = Lattice::from_generators(&IntMatrix::from_rows(&[vec![2, 0], vec![0, 3]]).unwrap());
        assert!(l.contains(&ints(&[4, -3])));
        assert!(!l.contains(&ints(&[1, 0])));
        assert_eq!(l.order_of(&ints(&[1, 1])), Some(6.into()));
        let full = Lattice::from_generators(&IntMatrix::identity(2));
        assert_eq!(l.index_in(&full), Some(6.into()));
        assert_eq!(l.quotient_invariants(&full), Some(ints(&[6])));
        let line = Lattice::from_generators(&IntMatrix::from_rows(&[vec![1, 1]]).unwrap());
        assert_eq!(line.order_of(&ints(&[1, 0])), None);
    }
}
