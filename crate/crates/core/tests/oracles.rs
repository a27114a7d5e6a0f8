//! Frozen values checked against brute-force oracles written here, independent of the
//! sparse reduction in the library.

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive};
use ordercx_core::chain::ChainComplex;
use ordercx_core::linalg::{smith_normal_form, IntMatrix, RationalMatrix};
use ordercx_core::poset::{order_complex, rank_filtration, subspace_poset_f2};
use ordercx_core::simplicial::models::{polygon, rp2};
use ordercx_core::simplicial::{barycentric_subdivision, deleted_product, discrete_config_exact, Graph};
use ordercx_core::specseq::pages;
use ordercx_core::twist::{enumerate_characters, graph_complex, token_trace_value, twisted_betti, twisted_complex};

const PRIMES: [i64; 2] = [1_000_000_007, 998_244_353];

fn pow_mod(mut b: i64, mut e: i64, p: i64) -> i64 {
    let mut r = 1i64;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = (r as i128 * b as i128 % p as i128) as i64;
        }
        b = (b as i128 * b as i128 % p as i128) as i64;
        e >>= 1;
    }
    r
}

fn rank_mod(m: &RationalMatrix, p: i64) -> usize {
    let mut a: Vec<Vec<i64>> = m
        .to_dense()
        .iter()
        .map(|row| {
            row.iter()
                .map(|x| {
                    let n = (x.numer() % BigInt::from(p)).to_i64().unwrap().rem_euclid(p);
                    let d = (x.denom() % BigInt::from(p)).to_i64().unwrap();
                    (n as i128 * pow_mod(d, p - 2, p) as i128 % p as i128) as i64
                })
                .collect()
        })
        .collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..rows).find(|&i| a[i][c] != 0) else { continue };
        a.swap(r, piv);
        let inv = pow_mod(a[r][c], p - 2, p);
        for i in r + 1..rows {
            if a[i][c] == 0 {
                continue;
            }
            let f = (a[i][c] as i128 * inv as i128 % p as i128) as i64;
            for j in c..cols {
                a[i][j] = (a[i][j] - (f as i128 * a[r][j] as i128 % p as i128) as i64).rem_euclid(p);
            }
        }
        r += 1;
    }
    r
}

/// Betti numbers from dense ranks modulo two large primes, which must agree.
fn dense_betti(cx: &ChainComplex) -> Vec<usize> {
    let mut out = None;
    for p in PRIMES {
        let rank = |d: i32| if cx.degrees().contains(&d) { rank_mod(&cx.boundary(d), p) } else { 0 };
        let b: Vec<usize> = cx.degrees().map(|d| cx.num_cells(d) - rank(d) - rank(d + 1)).collect();
        if let Some(prev) = &out {
            assert_eq!(prev, &b, "ranks differ between primes");
        }
        out = Some(b);
    }
    out.unwrap()
}

fn trimmed(mut v: Vec<usize>) -> Vec<usize> {
    while v.len() > 1 && v.last() == Some(&0) {
        v.pop();
    }
    v
}

#[test]
fn rp2_boundary_has_one_two_in_its_smith_form() {
    let cx = rp2().to_chain_complex();
    let d2 = IntMatrix::from_rational(&cx.boundary(2)).unwrap();
    let diag = smith_normal_form(&d2).diagonal();
    let twos = diag.iter().filter(|x| **x == BigInt::from(2)).count();
    let ones = diag.iter().filter(|x| x.is_one()).count();
    assert_eq!((twos, ones), (1, 9));
    // oracle: rank over F_2 drops by one against the rational rank
    let over_f2 = rank_mod(&cx.boundary(2), 2);
    let over_q = rank_mod(&cx.boundary(2), PRIMES[0]);
    assert_eq!((over_f2, over_q), (9, 10));
}

#[test]
fn deleted_products_of_polygons_are_circles() {
    for n in 4..=8 {
        let cx = deleted_product(&polygon(n)).complex().to_chain_complex();
        assert_eq!(trimmed(dense_betti(&cx)), vec![1, 1], "n = {n}");
        assert_eq!(cx.betti().from_zero(), vec![1, 1], "n = {n}");
    }
}

#[test]
fn two_point_configurations_of_rp2_are_stable() {
    let coarse = deleted_product(&rp2()).complex().to_chain_complex();
    let fine = deleted_product(&barycentric_subdivision(&rp2())).complex().to_chain_complex();
    let recorded = vec![1, 0, 0, 1];
    assert_eq!(dense_betti(&coarse), recorded);
    assert_eq!(coarse.betti().from_zero(), recorded);
    assert_eq!(fine.betti().from_zero(), recorded);
}

#[test]
fn two_tokens_on_a_hexagon() {
    for n in [6, 12] {
        let model = discrete_config_exact(&Graph::cycle(n), 2);
        let cx = model.to_chain_complex();
        assert_eq!(trimmed(dense_betti(&cx)), vec![1, 1], "C_{n}");
        assert_eq!(model.betti().from_zero(), vec![1, 1], "C_{n}");
    }
}

#[test]
fn f2_subspace_poset() {
    let p = subspace_poset_f2(3);
    assert_eq!(p.len(), 14);
    let oc = order_complex(&p).complex;
    assert_eq!(oc.f_vector(), vec![14, 21]);
    let cx = oc.to_chain_complex();
    assert_eq!(dense_betti(&cx), vec![1, 8]);
    assert_eq!(oc.reduced_betti().nonzero(), vec![(1, 8)]);
    // a building of rank 2 over F_2 is a wedge of q^3 = 8 circles
    assert_eq!(1 - oc.euler_characteristic(), 8);
    let ss = pages(&rank_filtration(&p).unwrap()).unwrap();
    assert_eq!(ss.infinity_totals().into_iter().collect::<Vec<_>>(), vec![(0, 1), (1, 8)]);
}

#[test]
fn twisted_rp2() {
    let k = rp2();
    let chars = enumerate_characters(&k);
    let chi = chars.iter().find(|c| !c.is_trivial_class(&k)).expect("a nontrivial class");
    let cx = twisted_complex(&k, chi).unwrap().base;
    assert_eq!(dense_betti(&cx), vec![0, 0, 1]);
    assert_eq!(twisted_betti(&k, chi).unwrap().from_zero(), vec![0, 0, 1]);
}

#[test]
fn token_trace_on_two_points_of_the_hexagon() {
    let model = discrete_config_exact(&Graph::cycle(6), 2);
    let g = graph_complex(&model).unwrap();
    let w = enumerate_characters(&g).into_iter().find(|c| !c.is_trivial_class(&g)).unwrap();
    let lp = model.generator_loop().unwrap();
    assert_eq!(token_trace_value(&model, &g, &w, &lp).unwrap(), -1);
}
