use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, Zero};
use proptest::prelude::*;

use eislab::divlattice::{box_add, sgn, DivisorTable};
use eislab::exactnum::{
    determinant, elementary_divisors, hermite_normal_form, is_square_free, smith_normal_form,
    IntMatrix,
};
use eislab::modsym::{ManinSymbolSpace, P1List};
use eislab::qseries::{level_raise, series_e, RaiseSign};
use eislab::SquareFreeLevel;

fn matrix(rows: usize, cols: usize) -> impl Strategy<Value = IntMatrix> {
    prop::collection::vec(-9i64..=9, rows * cols).prop_map(move |v| {
        IntMatrix::from_vec(rows, cols, v.into_iter().map(BigInt::from).collect()).unwrap()
    })
}

fn any_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=4, 1usize..=4).prop_flat_map(|(r, c)| matrix(r, c))
}

fn square_matrix() -> impl Strategy<Value = IntMatrix> {
    (1usize..=5).prop_flat_map(|n| matrix(n, n))
}

fn cofactor_det(m: &[Vec<BigInt>]) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::from(1);
    }
    (0..n)
        .map(|j| {
            let minor: Vec<Vec<BigInt>> = m[1..]
                .iter()
                .map(|r| [&r[..j], &r[j + 1..]].concat())
                .collect();
            let term = &m[0][j] * cofactor_det(&minor);
            if j % 2 == 0 {
                term
            } else {
                -term
            }
        })
        .sum()
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    if k == 0 {
        return vec![vec![]];
    }
    if n < k {
        return vec![];
    }
    let mut out = subsets(n - 1, k);
    for mut s in subsets(n - 1, k - 1) {
        s.push(n - 1);
        out.push(s);
    }
    out
}

/// Invariant factors from gcds of k×k minors.
fn determinantal_invariants(m: &IntMatrix) -> Vec<BigInt> {
    let rows = m.row_vecs();
    let mut prev = BigInt::from(1);
    let mut out = Vec::new();
    for k in 1..=m.rows().min(m.cols()) {
        let mut g = BigInt::zero();
        for rs in subsets(m.rows(), k) {
            for cs in subsets(m.cols(), k) {
                let minor: Vec<Vec<BigInt>> = rs
                    .iter()
                    .map(|&i| cs.iter().map(|&j| rows[i][j].clone()).collect())
                    .collect();
                g = g.gcd(&cofactor_det(&minor));
            }
        }
        if g.is_zero() {
            break;
        }
        out.push(&g / &prev);
        prev = g;
    }
    out
}

fn square_free_level() -> impl Strategy<Value = u64> {
    (2u64..3000).prop_filter("square-free", |&n| is_square_free(n))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn smith_matches_determinantal_divisors(m in any_matrix()) {
        let snf: Vec<BigInt> = elementary_divisors(&m).into_iter().filter(|d| !d.is_zero()).collect();
        prop_assert_eq!(snf, determinantal_invariants(&m));
    }

    #[test]
    fn smith_is_permutation_invariant(m in any_matrix(), seed in any::<u64>()) {
        let mut p = m.clone();
        let (r, c) = (m.rows(), m.cols());
        p.swap_rows(seed as usize % r, (seed as usize / 7) % r);
        p.swap_cols((seed as usize / 3) % c, (seed as usize / 11) % c);
        prop_assert_eq!(elementary_divisors(&m), elementary_divisors(&p));
        let s = smith_normal_form(&m);
        prop_assert!(s.d.is_diagonal());
        prop_assert_eq!(s.u.mul(&m).unwrap().mul(&s.v).unwrap(), s.d);
    }

    #[test]
    fn hermite_is_idempotent(m in any_matrix()) {
        let h = hermite_normal_form(&m);
        prop_assert_eq!(hermite_normal_form(&h), h);
    }

    #[test]
    fn invariant_product_is_determinant(m in square_matrix()) {
        let det = cofactor_det(&m.row_vecs());
        prop_assert_eq!(determinant(&m), det.clone());
        let d = elementary_divisors(&m);
        let prod: BigInt = d.iter().product();
        prop_assert_eq!(prod.abs(), det.abs());
    }

    #[test]
    fn box_addition_is_elementary_two_group(n in square_free_level(), i in 0usize..64, j in 0usize..64, k in 0usize..64) {
        let level = SquareFreeLevel::new(n).unwrap();
        let t = DivisorTable::new(&level).unwrap();
        let s = t.len();
        let (a, b, c) = (t.get(i % s), t.get(j % s), t.get(k % s));
        let id = t.get(s - 1);
        prop_assert_eq!(id.value(), n);
        prop_assert_eq!(box_add(a, b).unwrap(), box_add(b, a).unwrap());
        prop_assert_eq!(
            box_add(&box_add(a, b).unwrap(), c).unwrap(),
            box_add(a, &box_add(b, c).unwrap()).unwrap()
        );
        prop_assert_eq!(box_add(a, id).unwrap(), *a);
        prop_assert_eq!(box_add(a, a).unwrap(), *id);
        let ab = box_add(a, b).unwrap();
        let g = a.value().gcd(&b.value());
        prop_assert_eq!(ab.value(), g * (n / a.value().lcm(&b.value())));
        prop_assert_eq!(sgn(&level, &ab), sgn(&level, a) * sgn(&level, b));
        prop_assert_eq!(t.get(i % s).value() * t.get(s - 1 - i % s).value(), n);
    }

    #[test]
    fn p1_indexing_round_trips(n in square_free_level(), c in -500i64..500, d in -500i64..500, u in 1i64..200) {
        let level = SquareFreeLevel::new(n).unwrap();
        let p1 = P1List::new(&level);
        if let Some(i) = p1.index(c, d) {
            let (c2, d2) = p1.rep(i);
            prop_assert_eq!(p1.index(c2, d2), Some(i));
            if u.gcd(&(n as i64)) == 1 {
                prop_assert_eq!(p1.index(u * c, u * d), Some(i));
            }
        } else {
            prop_assert!(c.gcd(&d).gcd(&(n as i64)) != 1);
        }
    }

    #[test]
    fn level_raising_operators_commute(ps in prop::sample::subsequence(vec![2u64, 3, 5, 7, 11], 2), plus in any::<(bool, bool)>()) {
        let e = series_e(120).unwrap();
        let sign = |b: bool| if b { RaiseSign::Plus } else { RaiseSign::Minus };
        let ab = level_raise(&level_raise(&e, ps[0], 2, sign(plus.0)).unwrap(), ps[1], 2, sign(plus.1)).unwrap();
        let ba = level_raise(&level_raise(&e, ps[1], 2, sign(plus.1)).unwrap(), ps[0], 2, sign(plus.0)).unwrap();
        prop_assert_eq!(ab, ba);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn hecke_operators_commute(n in prop::sample::select(vec![11u64, 14, 23, 30, 35, 37, 42, 55]), a in 2u64..12, b in 2u64..12) {
        let space = ManinSymbolSpace::build(&SquareFreeLevel::new(n).unwrap()).unwrap();
        let ta = space.hecke_matrix(a).unwrap();
        let tb = space.hecke_matrix(b).unwrap();
        prop_assert_eq!(ta.mul(&tb).unwrap(), tb.mul(&ta).unwrap());
        if a.gcd(&b) == 1 {
            prop_assert_eq!(space.hecke_matrix(a * b).unwrap(), ta.mul(&tb).unwrap());
        }
    }
}
