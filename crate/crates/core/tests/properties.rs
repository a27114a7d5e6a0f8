use std::collections::BTreeMap;

use num_traits::Zero;
use ordercx_core::chain::{Betti, ChainComplex};
use ordercx_core::linalg::{rank, rational, RationalMatrix};
use ordercx_core::simplicial::{barycentric_subdivision, cone, join, suspension, SimplicialComplex};
use ordercx_core::specseq::{page_from_ledger_ranks, pages, total_betti_check, FilteredChainComplex};
use ordercx_core::twist::{enumerate_characters, twisted_betti, twisted_complex};
use proptest::prelude::*;

fn complex_from_masks(n: usize, masks: &[u8]) -> SimplicialComplex {
    let labels = (0..n).map(|v| format!("v{v}")).collect();
    let facets = masks.iter().map(|m| (0..n).filter(|v| m & (1 << v) != 0).collect::<Vec<_>>()).filter(|f| !f.is_empty());
    SimplicialComplex::from_facets(labels, facets).expect("masks stay in range")
}

prop_compose! {
    fn small_complex(max_vertices: usize)(n in 2..=max_vertices)(
        masks in prop::collection::vec(1u8..(1u8 << n), 1..6),
        n in Just(n),
    ) -> SimplicialComplex {
        complex_from_masks(n, &masks)
    }
}

fn reduced(b: &Betti) -> BTreeMap<i32, usize> {
    b.nonzero().into_iter().collect()
}

fn cell_euler(cx: &ChainComplex) -> i64 {
    cx.degrees().map(|d| if d.rem_euclid(2) == 0 { 1 } else { -1 } * cx.num_cells(d) as i64).sum()
}

fn nilpotent(cx: &ChainComplex) -> bool {
    cx.degrees().all(|d| cx.boundary(d).mul(&cx.boundary(d + 1)).map(|m| m.is_zero()).unwrap_or(false))
}

/// Levels from per-simplex draws, raised to the maximum over faces.
fn monotone_levels(k: &SimplicialComplex, draws: &[i32]) -> Vec<Vec<i32>> {
    let mut level: Vec<Vec<i32>> = Vec::new();
    let mut next = draws.iter().cycle();
    for d in 0..=k.dim().max(0) as usize {
        let row = k
            .simplices(d)
            .iter()
            .map(|s| {
                let own = *next.next().expect("cycle");
                if d == 0 {
                    return own;
                }
                (0..s.len())
                    .map(|i| {
                        let mut face = s.clone();
                        face.remove(i);
                        level[d - 1][k.index_of(&face).expect("closed")]
                    })
                    .fold(own, i32::max)
            })
            .collect();
        level.push(row);
    }
    level
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn boundary_squares_to_zero_and_euler_agrees(k in small_complex(7)) {
        let cx = k.to_chain_complex();
        prop_assert!(nilpotent(&cx));
        prop_assert_eq!(cell_euler(&cx), cx.betti().euler());
    }

    #[test]
    fn subdivision_keeps_betti(k in small_complex(5)) {
        prop_assert_eq!(barycentric_subdivision(&k).betti(), k.betti());
    }

    #[test]
    fn cones_are_acyclic_and_suspension_shifts(k in small_complex(6)) {
        prop_assert!(cone(&k).reduced_betti().is_zero());
        let shifted: BTreeMap<i32, usize> = reduced(&k.reduced_betti()).into_iter().map(|(d, n)| (d + 1, n)).collect();
        prop_assert_eq!(reduced(&suspension(&k).reduced_betti()), shifted);
    }

    #[test]
    fn cohomology_matches_homology(k in small_complex(7)) {
        let cx = k.to_chain_complex();
        let dual = cx.dual();
        prop_assert!(nilpotent(&dual));
        for d in cx.degrees() {
            prop_assert_eq!(dual.betti().get(-d), cx.betti().get(d));
        }
    }

    #[test]
    fn join_follows_the_reduced_kunneth_formula(a in small_complex(4), b in small_complex(4)) {
        let (ra, rb) = (reduced(&a.reduced_betti()), reduced(&b.reduced_betti()));
        let mut want: BTreeMap<i32, usize> = BTreeMap::new();
        for (&i, &x) in &ra {
            for (&j, &y) in &rb {
                *want.entry(i + j + 1).or_default() += x * y;
            }
        }
        prop_assert_eq!(reduced(&join(&a, &b).reduced_betti()), want);
    }

    #[test]
    fn relative_euler_is_a_difference(k in small_complex(6), keep in prop::collection::vec(any::<bool>(), 6)) {
        let verts: Vec<usize> = (0..k.num_vertices()).filter(|&v| keep[v]).collect();
        let sub = k.induced(&verts);
        let rel = k.relative_betti(&sub).unwrap();
        prop_assert_eq!(rel.euler(), k.euler_characteristic() - sub.euler_characteristic());
    }

    #[test]
    fn filtered_complexes_converge(k in small_complex(6), draws in prop::collection::vec(0i32..4, 1..16)) {
        let f = FilteredChainComplex::new(k.to_chain_complex(), monotone_levels(&k, &draws)).unwrap();
        let ss = pages(&f).unwrap();
        prop_assert!(total_betti_check(&f, &ss).passed());
        let euler = ss.e1().euler();
        for page in &ss.pages {
            prop_assert_eq!(page.euler(), euler);
        }
        prop_assert_eq!(euler, k.euler_characteristic());
    }

    #[test]
    fn twisting_keeps_euler_and_is_gauge_invariant(k in small_complex(5), flips in prop::collection::vec(any::<bool>(), 5)) {
        let chars = enumerate_characters(&k);
        for chi in chars.iter().take(4) {
            let tc = twisted_complex(&k, chi).unwrap();
            prop_assert!(nilpotent(&tc.base));
            prop_assert_eq!(tc.base.betti().euler(), k.euler_characteristic());
            let g: Vec<i8> = (0..k.num_vertices()).map(|v| if flips[v] { -1 } else { 1 }).collect();
            prop_assert_eq!(twisted_betti(&k, &chi.gauge(&k, &g)).unwrap(), twisted_betti(&k, chi).unwrap());
        }
    }

    #[test]
    fn rank_is_transpose_invariant(entries in prop::collection::vec((0usize..6, 0usize..7, -3i64..4), 0..30)) {
        let m = RationalMatrix::from_triplets(6, 7, entries.into_iter().filter(|e| e.2 != 0).map(|(r, c, v)| (r, c, rational(v))));
        let r = rank(&m);
        prop_assert_eq!(r, rank(&m.transpose()));
        let sq = m.transpose().mul(&m).unwrap();
        prop_assert_eq!(rank(&sq), r);
        prop_assert!(m.mul(&RationalMatrix::zeros(7, 2)).unwrap().entries().all(|(_, _, x)| x.is_zero()));
    }

    #[test]
    fn ledger_pages_keep_euler(dims in prop::collection::btree_map((0i32..4, -2i32..3), 2usize..4, 1..8)) {
        // a d^1 rank is supplied wherever both ends are nonzero; later pages take rank 0
        let mut ranks: BTreeMap<usize, BTreeMap<(i32, i32), usize>> = BTreeMap::new();
        for r in 1..=4usize {
            for (&(p, q), _) in &dims {
                ranks.entry(r).or_default().insert((p, q), 0);
            }
        }
        let first = ranks.entry(1).or_default();
        for (&(p, q), &n) in &dims {
            if let Some(&m) = dims.get(&(p - 1, q)) {
                first.insert((p, q), n.min(m).min(1));
            }
        }
        let pages = page_from_ledger_ranks(&dims, &ranks).unwrap();
        let e = pages[0].euler();
        prop_assert!(pages.iter().all(|pg| pg.euler() == e));
    }
}
