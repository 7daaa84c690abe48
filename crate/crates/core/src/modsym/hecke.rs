//! Hecke operators on Manin symbols.
//!
//! The main route uses Merel's set of matrices of determinant `n`; the
//! cross-check applies coset representatives of the double coset to the
//! endpoints of each symbol and decomposes the result by continued fractions.

use num_bigint::BigInt;
use num_integer::Integer;

use super::space::ManinSymbolSpace;
use crate::error::{Error, Result};
use crate::exactnum::IntMatrix;

/// `[[a, b], [c, d]]` with `a > b ≥ 0`, `d > c ≥ 0`, `ad - bc = n`.
pub fn merel_matrices(n: u64) -> Vec<[i64; 4]> {
    let n = n as i64;
    let mut out = Vec::new();
    for a in 1..=n {
        for d in 1..=(n + 1 - a) {
            let ad = a * d;
            if ad < n {
                continue;
            }
            let bc = ad - n;
            for b in 0..a {
                if b == 0 {
                    if bc == 0 {
                        out.extend((0..d).map(|c| [a, 0, c, d]));
                    }
                    continue;
                }
                if bc % b == 0 && bc / b < d {
                    out.push([a, b, bc / b, d]);
                }
            }
        }
    }
    out
}

impl ManinSymbolSpace {
    /// Image of symbol `i` under `T_n` (or `U_n` for `n | N`), in integral
    /// coordinates of the full space.
    pub fn hecke_on_symbol(&self, i: usize, heilbronn: &[[i64; 4]]) -> Vec<BigInt> {
        let (u, v) = self.p1().rep(i);
        self.sum_symbols(
            heilbronn
                .iter()
                .map(|&[a, b, c, d]| (u * a + v * c, u * b + v * d, 1)),
        )
    }

    /// Matrix of `T_n` on the full integral lattice (row convention).
    pub fn hecke_matrix_full(&self, n: u64) -> Result<IntMatrix> {
        if n == 0 {
            return Err(Error::Dimension("Hecke index must be positive".into()));
        }
        let h = merel_matrices(n);
        let images: Vec<Vec<BigInt>> = self
            .basis_symbols()
            .iter()
            .map(|&i| self.hecke_on_symbol(i, &h))
            .collect();
        self.operator_from_images(&images, self.rank())
    }

    /// Matrix of `T_n` on the integral cuspidal lattice.
    pub fn hecke_matrix(&self, n: u64) -> Result<IntMatrix> {
        self.restrict_to_cuspidal(&self.hecke_matrix_full(n)?)
    }

    /// `{0, a/b}` as a sum of Manin symbols via the convergents of `a/b`.
    fn path_from_zero(&self, a: i64, b: i64, sign: i64, acc: &mut Vec<(i64, i64, i64)>) {
        let (mut a, mut b) = (a, b);
        if b < 0 {
            a = -a;
            b = -b;
        }
        // p_{-2}/q_{-2} = 0/1, p_{-1}/q_{-1} = 1/0
        let (mut p_prev, mut q_prev) = (0i64, 1i64);
        let (mut p_cur, mut q_cur) = (1i64, 0i64);
        let mut k: i64 = -1;
        acc.push((0, 1, sign)); // {0, ∞}
        if b == 0 {
            return;
        }
        let (mut num, mut den) = (a, b);
        loop {
            let t = Integer::div_floor(&num, &den);
            let (p_next, q_next) = (t * p_cur + p_prev, t * q_cur + q_prev);
            p_prev = p_cur;
            q_prev = q_cur;
            p_cur = p_next;
            q_cur = q_next;
            k += 1;
            let s = if (k - 1).rem_euclid(2) == 0 { 1 } else { -1 };
            acc.push((s * q_cur, q_prev, sign));
            let r = num - t * den;
            if r == 0 {
                break;
            }
            num = den;
            den = r;
        }
        debug_assert_eq!(p_cur * b, a * q_cur);
    }

    /// `T_p` (or `U_p` when `p | N`) on symbol `i` computed from coset
    /// representatives `[[1, j], [0, p]]` and, for `p ∤ N`, `[[p, 0], [0, 1]]`.
    pub fn hecke_on_symbol_by_cosets(&self, i: usize, p: u64) -> Vec<BigInt> {
        let (c, d) = self.p1().rep(i);
        // lift (c, d) to SL_2(Z): find a, b with ad - bc = 1
        let (c, d) = lift_to_coprime(c, d, self.level().value() as i64);
        let g = c.extended_gcd(&d);
        let (a, b) = (g.y, -g.x);
        debug_assert_eq!(a * d - b * c, 1);
        let p = p as i64;
        let mut mats: Vec<[i64; 4]> = (0..p).map(|j| [1, j, 0, p]).collect();
        if self.level().value() as i64 % p != 0 {
            mats.push([p, 0, 0, 1]);
        }
        let mut acc = Vec::new();
        for [ma, mb, mc, md] in mats {
            // endpoints b/d and a/c as projective pairs
            let apply = |x: i64, y: i64| (ma * x + mb * y, mc * x + md * y);
            let (x1, y1) = apply(b, d);
            let (x2, y2) = apply(a, c);
            // {x1/y1, x2/y2} = {0, x2/y2} - {0, x1/y1}
            self.path_from_zero(x2, y2, 1, &mut acc);
            self.path_from_zero(x1, y1, -1, &mut acc);
        }
        self.sum_symbols(acc)
    }
}

/// Lifts `(c, d) mod N` to a coprime integer pair with the same residues.
fn lift_to_coprime(c: i64, d: i64, n: i64) -> (i64, i64) {
    for i in 0.. {
        for j in 0..=i {
            for (x, y) in [(c + j * n, d + i * n), (c + i * n, d + j * n)] {
                if x.gcd(&y) == 1 {
                    return (x, y);
                }
            }
        }
    }
    unreachable!()
}
