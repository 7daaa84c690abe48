use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::matrix::IntMatrix;
use crate::error::{Error, Result};

/// Dense rational matrix, row-major.
pub type QMatrix = Vec<Vec<BigRational>>;

pub fn to_qmatrix(m: &IntMatrix) -> QMatrix {
    (0..m.rows())
        .map(|i| {
            m.row(i)
                .iter()
                .map(|x| BigRational::from_integer(x.clone()))
                .collect()
        })
        .collect()
}

/// Reduced row echelon form and pivot columns.
pub fn rref(m: &QMatrix) -> (QMatrix, Vec<usize>) {
    let mut a = m.clone();
    let rows = a.len();
    let cols = a.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else {
            continue;
        };
        a.swap(r, p);
        let inv = a[r][c].recip();
        for x in a[r].iter_mut() {
            *x *= &inv;
        }
        for i in 0..rows {
            if i == r || a[i][c].is_zero() {
                continue;
            }
            let f = a[i][c].clone();
            let pivot_row = a[r].clone();
            for (x, y) in a[i][c..cols].iter_mut().zip(&pivot_row[c..cols]) {
                *x -= &f * y;
            }
        }
        pivots.push(c);
        r += 1;
    }
    (a, pivots)
}

pub fn rational_rank(m: &QMatrix) -> usize {
    rref(m).1.len()
}

pub fn rational_inverse(m: &QMatrix) -> Result<QMatrix> {
    let n = m.len();
    if m.iter().any(|r| r.len() != n) {
        return Err(Error::Dimension("inverse of a non-square matrix".into()));
    }
    let aug: QMatrix = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| {
                if i == j {
                    BigRational::one()
                } else {
                    BigRational::zero()
                }
            }));
            row
        })
        .collect();
    let (red, pivots) = rref(&aug);
    if pivots.len() < n || pivots[n - 1] != n - 1 {
        return Err(Error::Singular);
    }
    Ok(red.into_iter().map(|r| r[n..].to_vec()).collect())
}

/// Solves `x·B = v` for square nonsingular `B`.
pub fn solve_left(b: &QMatrix, v: &[BigRational]) -> Result<Vec<BigRational>> {
    let inv = rational_inverse(b)?;
    Ok(row_times(v, &inv))
}

pub fn row_times(v: &[BigRational], m: &QMatrix) -> Vec<BigRational> {
    let cols = m.first().map_or(0, Vec::len);
    let mut out = vec![BigRational::zero(); cols];
    for (x, row) in v.iter().zip(m) {
        if x.is_zero() {
            continue;
        }
        for (o, a) in out.iter_mut().zip(row) {
            *o += x * a;
        }
    }
    out
}

pub fn q_mul(a: &QMatrix, b: &QMatrix) -> QMatrix {
    a.iter().map(|r| row_times(r, b)).collect()
}

pub fn int_row(v: &[BigInt]) -> Vec<BigRational> {
    v.iter()
        .map(|x| BigRational::from_integer(x.clone()))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[&[i64]]) -> QMatrix {
        v.iter()
            .map(|r| {
                r.iter()
                    .map(|&x| BigRational::from_integer(x.into()))
                    .collect()
            })
            .collect()
    }

    #[test]
    fn inverse_and_solve() {
        let m = q(&[&[2, 1], &[1, 1]]);
        let inv = rational_inverse(&m).unwrap();
        assert_eq!(q_mul(&m, &inv), q(&[&[1, 0], &[0, 1]]));
        let x = solve_left(&m, &int_row(&[3.into(), 2.into()])).unwrap();
        assert_eq!(row_times(&x, &m), int_row(&[3.into(), 2.into()]));
        assert_eq!(
            rational_inverse(&q(&[&[1, 2], &[2, 4]])),
            Err(Error::Singular)
        );
    }

    #[test]
    fn rank() {
        assert_eq!(rational_rank(&q(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]])), 2);
    }
}
