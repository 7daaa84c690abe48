//! Hermite and Smith normal forms over the integers.
//!
//! Both eliminations pick the entry of smallest absolute value as pivot and
//! reduce the rest of its column by Euclidean division, which keeps entries
//! small at the matrix sizes used here (a few hundred rows at most).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Row-style Hermite normal form with transform.
///
/// Returns `(H, U, pivots)` with `U·M = H`, `U` unimodular. `H` is in row
/// echelon form with positive pivots, entries above each pivot reduced into
/// `[0, pivot)`, and all zero rows at the bottom. `pivots[k]` is the column
/// of the leading entry of row `k`.
pub fn hermite_with_transform(m: &IntMatrix) -> (IntMatrix, IntMatrix, Vec<usize>) {
    hermite_impl(m, true)
}

fn hermite_impl(m: &IntMatrix, track: bool) -> (IntMatrix, IntMatrix, Vec<usize>) {
    let mut h = m.clone();
    let rows = h.rows();
    let mut u = if track {
        IntMatrix::identity(rows)
    } else {
        IntMatrix::zeros(0, 0)
    };
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..h.cols() {
        if row == rows {
            break;
        }
        loop {
            let pick = (row..rows)
                .filter(|&r| !h[(r, col)].is_zero())
                .min_by(|&a, &b| h[(a, col)].abs().cmp(&h[(b, col)].abs()));
            let Some(p) = pick else { break };
            h.swap_rows(row, p);
            if track {
                u.swap_rows(row, p);
            }
            let pivot = h[(row, col)].clone();
            let mut clean = true;
            for r in row + 1..rows {
                if h[(r, col)].is_zero() {
                    continue;
                }
                let q = -h[(r, col)].div_floor(&pivot);
                h.add_row_multiple(r, row, &q);
                if track {
                    u.add_row_multiple(r, row, &q);
                }
                if !h[(r, col)].is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h[(row, col)].is_zero() {
            continue;
        }
        if h[(row, col)].is_negative() {
            h.negate_row(row);
            if track {
                u.negate_row(row);
            }
        }
        let pivot = h[(row, col)].clone();
        for r in 0..row {
            let q = -h[(r, col)].div_floor(&pivot);
            h.add_row_multiple(r, row, &q);
            if track {
                u.add_row_multiple(r, row, &q);
            }
        }
        pivots.push(col);
        row += 1;
    }
    (h, u, pivots)
}

/// Canonical basis of the row lattice of `m`: the nonzero rows of its HNF.
pub fn hermite_normal_form(m: &IntMatrix) -> IntMatrix {
    let (h, _, pivots) = hermite_impl(m, false);
    let keep: Vec<usize> = (0..pivots.len()).collect();
    let mut out = h.select_rows(&keep);
    if keep.is_empty() {
        out = IntMatrix::zeros(0, m.cols());
    }
    out
}

/// Basis (in HNF) of `{x ∈ Z^rows : x·m = 0}`.
pub fn integer_kernel(m: &IntMatrix) -> IntMatrix {
    let (_, u, pivots) = hermite_with_transform(m);
    let idx: Vec<usize> = (pivots.len()..m.rows()).collect();
    if idx.is_empty() {
        return IntMatrix::zeros(0, m.rows());
    }
    hermite_normal_form(&u.select_rows(&idx))
}

/// Basis of `(Q-row-span of m) ∩ Z^cols`.
pub fn saturate(m: &IntMatrix) -> IntMatrix {
    if m.rows() == 0 {
        return IntMatrix::zeros(0, m.cols());
    }
    // Vectors orthogonal to the row space, then everything orthogonal to those.
    let orth = integer_kernel(&m.transpose());
    if orth.rows() == 0 {
        return IntMatrix::identity(m.cols());
    }
    integer_kernel(&orth.transpose())
}

/// `U·M·V = D` with `D` diagonal, `d_i | d_{i+1}`, `U`, `V` unimodular.
#[derive(Clone, Debug)]
pub struct Smith {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
}

impl Smith {
    /// Nonzero diagonal entries, in order.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.d.rows().min(self.d.cols()))
            .map(|i| self.d[(i, i)].clone())
            .filter(|x| !x.is_zero())
            .collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> Smith {
    let rows = m.rows();
    let cols = m.cols();
    let mut d = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if d[(i, j)].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| d[(i, j)].abs() < d[(bi, bj)].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return Smith { u, d, v };
            };
            d.swap_rows(t, pi);
            u.swap_rows(t, pi);
            d.swap_cols(t, pj);
            v.swap_cols(t, pj);
            let pivot = d[(t, t)].clone();
            let mut clean = true;
            for i in t + 1..rows {
                if d[(i, t)].is_zero() {
                    continue;
                }
                let q = -d[(i, t)].div_floor(&pivot);
                d.add_row_multiple(i, t, &q);
                u.add_row_multiple(i, t, &q);
                clean &= d[(i, t)].is_zero();
            }
            for j in t + 1..cols {
                if d[(t, j)].is_zero() {
                    continue;
                }
                let q = -d[(t, j)].div_floor(&pivot);
                d.add_col_multiple(j, t, &q);
                v.add_col_multiple(j, t, &q);
                clean &= d[(t, j)].is_zero();
            }
            if !clean {
                continue;
            }
            let offender =
                (t + 1..rows).find(|&i| (t + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&pivot)));
            match offender {
                Some(i) => {
                    d.add_row_multiple(t, i, &BigInt::one());
                    u.add_row_multiple(t, i, &BigInt::one());
                }
                None => break,
            }
        }
        if d[(t, t)].is_negative() {
            d.negate_row(t);
            u.negate_row(t);
        }
    }
    Smith { u, d, v }
}

/// Nonzero invariant factors of `m`.
pub fn elementary_divisors(m: &IntMatrix) -> Vec<BigInt> {
    smith_normal_form(m).invariant_factors()
}

/// Determinant by fraction-free (Bareiss) elimination.
pub fn determinant(m: &IntMatrix) -> BigInt {
    assert!(m.is_square(), "determinant of a non-square matrix");
    let n = m.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[(k, k)].is_zero() {
            match (k + 1..n).find(|&i| !a[(i, k)].is_zero()) {
                Some(i) => {
                    a.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let val = (&a[(i, j)] * &a[(k, k)] - &a[(i, k)] * &a[(k, j)]) / &prev;
                a[(i, j)] = val;
            }
        }
        prev = a[(k, k)].clone();
    }
    sign * &a[(n - 1, n - 1)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows).unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn check_smith(a: &IntMatrix) -> Smith {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).unwrap().mul(&s.v).unwrap(), s.d);
        assert!(s.d.is_diagonal());
        assert_eq!(determinant(&s.u).abs(), BigInt::one());
        assert_eq!(determinant(&s.v).abs(), BigInt::one());
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn smith_examples() {
        assert_eq!(
            check_smith(&IntMatrix::identity(3)).d,
            IntMatrix::identity(3)
        );
        let s = check_smith(&m(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.invariant_factors(), ints(&[1, 6]));
        let z = IntMatrix::zeros(2, 3);
        assert!(check_smith(&z).d.is_zero());
        let s = check_smith(&m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]));
        assert_eq!(s.invariant_factors(), ints(&[2, 6, 12]));
    }

    #[test]
    fn hermite_examples() {
        assert_eq!(
            hermite_normal_form(&IntMatrix::identity(3)),
            IntMatrix::identity(3)
        );
        let h = hermite_normal_form(&m(&[vec![2, 0], vec![0, 3], vec![1, 1]]));
        assert_eq!(h, IntMatrix::identity(2));
        // A single row spans only its own multiples.
        assert_eq!(hermite_normal_form(&m(&[vec![4, 6]])), m(&[vec![4, 6]]));
        assert_eq!(saturate(&m(&[vec![4, 6]])), m(&[vec![2, 3]]));
        let (h, u, piv) =
            hermite_with_transform(&m(&[vec![3, 5, 1], vec![6, 10, 2], vec![1, 1, 1]]));
        assert_eq!(
            u.mul(&m(&[vec![3, 5, 1], vec![6, 10, 2], vec![1, 1, 1]]))
                .unwrap(),
            h
        );
        assert_eq!(piv.len(), 2);
        assert!(h.row(2).iter().all(Zero::is_zero));
    }

    #[test]
    fn kernel() {
        let a = m(&[vec![1, 2], vec![2, 4], vec![3, 6]]);
        let k = integer_kernel(&a);
        assert_eq!(k.rows(), 2);
        assert!(k.mul(&a).unwrap().is_zero());
        assert_eq!(integer_kernel(&IntMatrix::identity(2)).rows(), 0);
    }

    #[test]
    fn determinants() {
        assert_eq!(determinant(&m(&[vec![2, 0], vec![0, 3]])), BigInt::from(6));
        assert_eq!(determinant(&m(&[vec![0, 1], vec![1, 0]])), BigInt::from(-1));
        assert_eq!(determinant(&m(&[vec![1, 2], vec![2, 4]])), BigInt::zero());
        assert_eq!(determinant(&IntMatrix::zeros(0, 0)), BigInt::one());
    }
}
