//! Weight-2 Manin symbols for `Γ_0(N)`, their integral structure and the
//! cuspidal sublattice.
//!
//! A symbol `(c : d)` stands for `g·{0, ∞} = {b/d, a/c}` where
//! `g = [[a, b], [c, d]] ∈ SL_2(Z)`. The quotient is taken by
//! `x + xS = 0` and `x + xT + xT² = 0` with `S = [[0,-1],[1,0]]`,
//! `T = [[0,-1],[1,-1]]` acting on the right of row vectors. The integral
//! lattice is the image of `Z[P^1(Z/N)]` in the rational quotient, and the
//! cuspidal lattice is the kernel of the boundary map on it.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::Serialize;

use super::p1::P1List;
use crate::divlattice::{Divisor, DivisorTable};
use crate::error::{Error, Result};
use crate::exactnum::{
    gcd_u64, int_row, rational_inverse, row_times, rref, IntMatrix, Lattice, QMatrix,
    SquareFreeLevel,
};

/// Largest level the modular-symbol engine accepts unless told otherwise.
pub const DEFAULT_MAX_LEVEL: u64 = 120;

#[derive(Clone, Debug)]
pub struct ManinSymbolSpace {
    level: SquareFreeLevel,
    p1: P1List,
    cusps: CuspSet,
    /// Row `i`: coordinates of symbol `i` in the integral basis (`ψ × r`).
    symbol_coords: IntMatrix,
    /// `r` symbols whose coordinate rows are linearly independent.
    basis_symbols: Vec<usize>,
    /// Inverse of `symbol_coords` restricted to `basis_symbols`.
    basis_inverse: QMatrix,
    /// Boundary of each integral basis vector (`r × 2^ω`).
    boundary: IntMatrix,
    cuspidal: Lattice,
}

/// The cusps `P_d`, `d | N`, ordered like the divisor table.
#[derive(Clone, Debug)]
pub struct CuspSet {
    table: DivisorTable,
}

impl CuspSet {
    pub fn new(level: &SquareFreeLevel) -> Result<Self> {
        Ok(Self {
            table: DivisorTable::new(level)?,
        })
    }

    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn labels(&self) -> Vec<u64> {
        self.table.values()
    }

    /// Class `P_d` of the cusp `a/c` (with `gcd(a, c) = 1`; `c = 0` is `∞`).
    /// For square-free `N` this is `d = gcd(c, N)`.
    pub fn classify(&self, c: i64) -> Divisor {
        let n = self.table.level().value();
        let d = gcd_u64(c.unsigned_abs() % n, n);
        let d = if d == 0 { n } else { d };
        Divisor::from_value(self.table.level(), d).expect("gcd with N divides N")
    }

    pub fn position(&self, d: &Divisor) -> usize {
        self.table.index_of(d)
    }

    /// `Γ_0(N)`-equivalence of `a1/c1` and `a2/c2`: there must be a unit
    /// `s mod N` with `c2 ≡ s·c1 (mod N)` and `s·a2 ≡ a1 (mod gcd(c1, N))`.
    /// Checked by running over all units, independently of [`Self::classify`].
    pub fn equivalent(&self, (a1, c1): (i64, i64), (a2, c2): (i64, i64)) -> bool {
        let n = self.table.level().value() as i64;
        let g = gcd_u64(c1.unsigned_abs(), n as u64) as i64;
        (1..=n.max(1))
            .filter(|&s| gcd_u64(s as u64, n as u64) == 1)
            .any(|s| (c2 - s * c1).rem_euclid(n) == 0 && (s * a2 - a1).rem_euclid(g.max(1)) == 0)
    }
}

fn torsion_free_image(p1: &P1List) -> Result<(Vec<Vec<BigRational>>, Vec<usize>)> {
    let psi = p1.len();
    let s_img: Vec<usize> = (0..psi)
        .map(|i| {
            let (c, d) = p1.rep(i);
            p1.index(d, -c).expect("S preserves P^1")
        })
        .collect();
    let t_img: Vec<usize> = (0..psi)
        .map(|i| {
            let (c, d) = p1.rep(i);
            p1.index(d, -c - d).expect("T preserves P^1")
        })
        .collect();

    // Two-term relations: pair x with xS; fixed points are 2-torsion.
    let mut rep_of: Vec<Option<(usize, i32)>> = vec![None; psi];
    let mut reps = Vec::new();
    for i in 0..psi {
        let j = s_img[i];
        if i == j || rep_of[i].is_some() {
            continue;
        }
        let k = reps.len();
        reps.push(i);
        rep_of[i] = Some((k, 1));
        rep_of[j] = Some((k, -1));
    }

    // Three-term relations over the representatives.
    let mut relations: QMatrix = Vec::new();
    let mut seen = vec![false; psi];
    for i in 0..psi {
        if seen[i] {
            continue;
        }
        let orbit = [i, t_img[i], t_img[t_img[i]]];
        for &x in &orbit {
            seen[x] = true;
        }
        let members: &[usize] = if orbit[0] == orbit[1] {
            &orbit[..1]
        } else {
            &orbit
        };
        let mut row = vec![BigRational::zero(); reps.len()];
        for &x in members {
            if let Some((k, s)) = rep_of[x] {
                row[k] += BigRational::from_integer(s.into());
            }
        }
        if row.iter().any(|x| !x.is_zero()) {
            relations.push(row);
        }
    }
    let (red, pivots) = if relations.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        rref(&relations)
    };
    let free: Vec<usize> = (0..reps.len()).filter(|k| !pivots.contains(k)).collect();
    let free_pos: std::collections::HashMap<usize, usize> =
        free.iter().enumerate().map(|(pos, &k)| (k, pos)).collect();
    let pivot_row: std::collections::HashMap<usize, usize> = pivots
        .iter()
        .enumerate()
        .map(|(row, &k)| (k, row))
        .collect();
    let r = free.len();
    let images = (0..psi)
        .map(|i| {
            let mut v = vec![BigRational::zero(); r];
            if let Some((k, s)) = rep_of[i] {
                let s = BigRational::from_integer(s.into());
                if let Some(&pos) = free_pos.get(&k) {
                    v[pos] = s;
                } else {
                    let row = &red[pivot_row[&k]];
                    for (pos, &f) in free.iter().enumerate() {
                        v[pos] = -&s * &row[f];
                    }
                }
            }
            v
        })
        .collect();
    let basis_symbols = free.iter().map(|&k| reps[k]).collect();
    Ok((images, basis_symbols))
}

impl ManinSymbolSpace {
    pub fn build(level: &SquareFreeLevel) -> Result<Self> {
        Self::build_with_cap(level, DEFAULT_MAX_LEVEL)
    }

    pub fn build_with_cap(level: &SquareFreeLevel, cap: u64) -> Result<Self> {
        if level.value() > cap {
            return Err(Error::LevelTooLarge(level.value(), cap));
        }
        let p1 = P1List::new(level);
        let cusps = CuspSet::new(level)?;
        let (images, basis_symbols) = torsion_free_image(&p1)?;
        let r = basis_symbols.len();

        // Integral structure: the Z-span of the symbol images.
        let denom = images
            .iter()
            .flatten()
            .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let scaled: Vec<Vec<BigInt>> = images
            .iter()
            .map(|v| v.iter().map(|x| (x * &denom).to_integer()).collect())
            .collect();
        let integral = Lattice::from_rows(r, scaled.clone())?;
        if integral.rank() != r {
            return Err(Error::Invariant("symbols do not span the quotient".into()));
        }
        let coord_rows = scaled
            .iter()
            .map(|v| {
                integral
                    .coords(v)
                    .ok_or_else(|| Error::Invariant("symbol outside its own span".into()))
            })
            .collect::<Result<Vec<_>>>()?;
        let symbol_coords = IntMatrix::from_big_rows(r, coord_rows)?;
        let basis_q: QMatrix = basis_symbols
            .iter()
            .map(|&i| int_row(symbol_coords.row(i)))
            .collect();
        let basis_inverse = if r == 0 {
            Vec::new()
        } else {
            rational_inverse(&basis_q)?
        };

        let mut space = Self {
            level: level.clone(),
            p1,
            cusps,
            symbol_coords,
            basis_symbols,
            basis_inverse,
            boundary: IntMatrix::zeros(0, 0),
            cuspidal: Lattice::from_generators(&IntMatrix::zeros(0, r)),
        };

        // Boundary map, checked on every symbol.
        let s = space.cusps.len();
        let deltas: Vec<Vec<BigInt>> = (0..space.p1.len())
            .map(|i| space.symbol_boundary(i))
            .collect();
        let sub: Vec<Vec<BigInt>> = space
            .basis_symbols
            .iter()
            .map(|&i| deltas[i].clone())
            .collect();
        space.boundary = space.operator_from_images(&sub, s)?;
        for (i, delta) in deltas.iter().enumerate() {
            if &space.boundary.left_apply(space.symbol_coords.row(i))? != delta {
                return Err(Error::Invariant(format!(
                    "boundary not well defined on symbol {i}"
                )));
            }
        }
        let kernel = crate::exactnum::integer_kernel(&space.boundary);
        space.cuspidal = Lattice::from_generators(&kernel);
        if !space.cuspidal.rank().is_multiple_of(2) {
            return Err(Error::Invariant("odd cuspidal rank".into()));
        }
        Ok(space)
    }

    pub fn level(&self) -> &SquareFreeLevel {
        &self.level
    }

    pub fn p1(&self) -> &P1List {
        &self.p1
    }

    pub fn cusps(&self) -> &CuspSet {
        &self.cusps
    }

    /// Rank of the integral modular symbols (torsion-free part).
    pub fn rank(&self) -> usize {
        self.basis_symbols.len()
    }

    pub fn cuspidal_rank(&self) -> usize {
        self.cuspidal.rank()
    }

    /// Genus of `X_0(N)`, half the cuspidal rank.
    pub fn genus(&self) -> usize {
        self.cuspidal.rank() / 2
    }

    pub fn cuspidal(&self) -> &Lattice {
        &self.cuspidal
    }

    pub fn boundary_matrix(&self) -> &IntMatrix {
        &self.boundary
    }

    pub fn symbol_coords(&self, i: usize) -> &[BigInt] {
        self.symbol_coords.row(i)
    }

    pub fn basis_symbols(&self) -> &[usize] {
        &self.basis_symbols
    }

    /// `P_{gcd(c,N)} - P_{gcd(d,N)}` for the symbol `(c : d)`.
    pub fn symbol_boundary(&self, i: usize) -> Vec<BigInt> {
        let (c, d) = self.p1.rep(i);
        let mut v = vec![BigInt::zero(); self.cusps.len()];
        v[self.cusps.position(&self.cusps.classify(c))] += 1;
        v[self.cusps.position(&self.cusps.classify(d))] -= 1;
        v
    }

    /// Given the images (rows of length `cols`) of the basis symbols under a
    /// linear map, returns its integral matrix on the integral basis.
    pub(crate) fn operator_from_images(
        &self,
        images: &[Vec<BigInt>],
        cols: usize,
    ) -> Result<IntMatrix> {
        let r = self.rank();
        let mut out = IntMatrix::zeros(r, cols);
        let q: QMatrix = images.iter().map(|v| int_row(v)).collect();
        for i in 0..r {
            let row = row_times(&self.basis_inverse[i], &q);
            for (j, x) in row.into_iter().enumerate() {
                if !x.is_integer() {
                    return Err(Error::Invariant(format!("non-integral operator entry {x}")));
                }
                out[(i, j)] = x.to_integer();
            }
        }
        Ok(out)
    }

    /// Restricts an operator on the full integral lattice to the cuspidal
    /// lattice, in the cuspidal basis.
    pub fn restrict_to_cuspidal(&self, full: &IntMatrix) -> Result<IntMatrix> {
        let basis = self.cuspidal.basis();
        let dim = self.cuspidal.rank();
        let mut out = IntMatrix::zeros(dim, dim);
        for i in 0..dim {
            let image = full.left_apply(basis.row(i))?;
            let c = self.cuspidal.coords(&image).ok_or_else(|| {
                Error::Invariant("cuspidal lattice is not stable under the operator".into())
            })?;
            for (j, x) in c.into_iter().enumerate() {
                out[(i, j)] = x;
            }
        }
        Ok(out)
    }

    /// Sum of integral coordinates of the symbols `(c_k : d_k)`, skipping pairs
    /// that are not points of `P^1(Z/N)`.
    pub(crate) fn sum_symbols(
        &self,
        pairs: impl IntoIterator<Item = (i64, i64, i64)>,
    ) -> Vec<BigInt> {
        let mut acc = vec![BigInt::zero(); self.rank()];
        for (c, d, mult) in pairs {
            if let Some(j) = self.p1.index(c, d) {
                for (a, x) in acc.iter_mut().zip(self.symbol_coords.row(j)) {
                    if !x.is_zero() {
                        *a += x * mult;
                    }
                }
            }
        }
        acc
    }
}

/// Genus of `X_0(N)` for square-free `N` from the classical formula
/// `1 + ψ/12 - ν_2/4 - ν_3/3 - c/2`.
pub fn genus_formula(level: &SquareFreeLevel) -> usize {
    let mut psi = 1i64;
    let mut nu2 = 1i64;
    let mut nu3 = 1i64;
    for &p in level.primes() {
        let p = p as i64;
        psi *= p + 1;
        nu2 *= match p % 4 {
            _ if p == 2 => 1,
            1 => 2,
            _ => 0,
        };
        nu3 *= match p % 3 {
            _ if p == 3 => 1,
            1 => 2,
            _ => 0,
        };
    }
    let cusps = 1i64 << level.omega();
    // 12g = 12 + ψ - 3ν_2 - 4ν_3 - 6c
    let twelve_g = 12 + psi - 3 * nu2 - 4 * nu3 - 6 * cusps;
    debug_assert!(twelve_g >= 0 && twelve_g % 12 == 0);
    (twelve_g / 12) as usize
}

#[derive(Clone, Debug, Serialize)]
pub struct SpaceSummary {
    pub n: u64,
    pub symbols: usize,
    pub rank: usize,
    pub cuspidal_rank: usize,
    pub genus: usize,
    pub cusps: Vec<u64>,
}

impl ManinSymbolSpace {
    pub fn summary(&self) -> SpaceSummary {
        SpaceSummary {
            n: self.level.value(),
            symbols: self.p1.len(),
            rank: self.rank(),
            cuspidal_rank: self.cuspidal_rank(),
            genus: self.genus(),
            cusps: self.cusps.labels(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactnum::is_square_free;

    fn space(n: u64) -> ManinSymbolSpace {
        ManinSymbolSpace::build(&SquareFreeLevel::new(n).unwrap()).unwrap()
    }

    #[test]
    fn anchors() {
        let s = space(11);
        assert_eq!(s.p1().len(), 12);
        assert_eq!((s.genus(), s.cuspidal_rank()), (1, 2));
        assert_eq!(s.cusps().labels(), vec![1, 11]);
        assert_eq!(space(14).cuspidal_rank(), 2);
        assert_eq!(space(7).cuspidal_rank(), 0);
    }

    #[test]
    fn genus_matches_formula() {
        for n in (2..=120).filter(|&n| is_square_free(n)) {
            let s = space(n);
            assert_eq!(s.genus(), genus_formula(s.level()), "N={n}");
            // rank of all symbols is 2g + (cusps - 1)
            assert_eq!(s.rank(), 2 * s.genus() + s.cusps().len() - 1, "N={n}");
        }
    }

    #[test]
    fn cusp_classes_by_equivalence_search() {
        for n in [6u64, 11, 30, 42, 70] {
            let s = space(n);
            let labels = s.cusps().labels();
            let mut seen = std::collections::BTreeSet::new();
            let mut check = |a: i64, c: i64| {
                let hits: Vec<u64> = labels
                    .iter()
                    .copied()
                    .filter(|&d| s.cusps().equivalent((a, c), (1, d as i64)))
                    .collect();
                assert_eq!(hits.len(), 1, "N={n} cusp {a}/{c}");
                assert_eq!(hits[0], s.cusps().classify(c).value());
                seen.insert(hits[0]);
            };
            for c in 0..=(2 * n as i64) {
                for a in -(n as i64)..=(n as i64) {
                    if a.gcd(&c) == 1 {
                        check(a, c);
                    }
                }
            }
            assert_eq!(seen.len(), 1 << s.level().omega());
        }
    }

    #[test]
    fn boundary_degree_zero() {
        let s = space(30);
        for i in 0..s.rank() {
            let total: BigInt = s.boundary_matrix().row(i).iter().sum();
            assert!(total.is_zero());
        }
    }

    #[test]
    fn cap_enforced() {
        let err = ManinSymbolSpace::build(&SquareFreeLevel::new(127).unwrap()).unwrap_err();
        assert_eq!(err, Error::LevelTooLarge(127, DEFAULT_MAX_LEVEL));
    }
}
