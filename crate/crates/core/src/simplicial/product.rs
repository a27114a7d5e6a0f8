//! Staircase products, deleted products and the cellular deleted product.

use std::collections::{BTreeMap, HashMap};

use num_traits::One;

use super::action::GroupAction;
use super::{Simplex, SimplicialComplex};
use crate::chain::{CellSelection, ChainComplex};
use crate::linalg::{Rational, RationalMatrix};
use crate::transfer::{CellAction, SignedPerm};

/// All monotone lattice paths through `sigma x tau`, as lists of `(i, j)` pairs.
fn staircases(sigma: &[usize], tau: &[usize], out: &mut Vec<Vec<(usize, usize)>>) {
    fn walk(s: &[usize], t: &[usize], i: usize, j: usize, cur: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
        cur.push((s[i], t[j]));
        if i + 1 == s.len() && j + 1 == t.len() {
            out.push(cur.clone());
        }
        if i + 1 < s.len() {
            walk(s, t, i + 1, j, cur, out);
        }
        if j + 1 < t.len() {
            walk(s, t, i, j + 1, cur, out);
        }
        cur.pop();
    }
    walk(sigma, tau, 0, 0, &mut Vec::new(), out);
}

/// Staircase triangulation of `|K| x |L|` on vertices `(a, b)` in lexicographic order.
pub fn product_triangulation(k: &SimplicialComplex, l: &SimplicialComplex) -> SimplicialComplex {
    let nl = l.num_vertices();
    let vertices = k
        .vertices()
        .iter()
        .flat_map(|a| l.vertices().iter().map(move |b| format!("({a},{b})")))
        .collect();
    let (kf, lf) = (k.facets(), l.facets());
    let mut facets = Vec::new();
    let mut paths = Vec::new();
    for s in &kf {
        for t in &lf {
            paths.clear();
            staircases(s, t, &mut paths);
            facets.extend(paths.iter().map(|p| p.iter().map(|&(a, b)| a * nl + b).collect::<Simplex>()));
        }
    }
    SimplicialComplex::from_facets(vertices, facets).expect("staircase product")
}

/// The simplicial deleted product together with the factor swap.
#[derive(Debug, Clone)]
pub struct DeletedProduct {
    pub swap: GroupAction,
    /// `pairs[v]` = the two projections of vertex `v`.
    pub pairs: Vec<(usize, usize)>,
}

impl DeletedProduct {
    pub fn complex(&self) -> &SimplicialComplex {
        self.swap.complex()
    }
}

/// Subcomplex of the staircase square `K x K` made of simplices whose two projections
/// are disjoint simplices of `K`.
pub fn deleted_product(k: &SimplicialComplex) -> DeletedProduct {
    let n = k.num_vertices();
    let pairs: Vec<(usize, usize)> =
        (0..n).flat_map(|a| (0..n).filter(move |&b| b != a).map(move |b| (a, b))).collect();
    let id = |a: usize, b: usize| a * (n - 1) + if b < a { b } else { b - 1 };
    let vertices = pairs
        .iter()
        .map(|&(a, b)| format!("({},{})", k.vertex_label(a), k.vertex_label(b)))
        .collect();
    let kf = k.facets();
    let mut facets: Vec<Simplex> = Vec::new();
    let mut paths = Vec::new();
    for s in &kf {
        for t in &kf {
            let common: Vec<usize> = s.iter().copied().filter(|v| t.contains(v)).collect();
            for mask in 0u32..(1 << common.len()) {
                // bit set: the shared vertex is dropped from the second factor
                let s2: Vec<usize> = s
                    .iter()
                    .copied()
                    .filter(|v| common.iter().position(|c| c == v).is_none_or(|i| mask & (1 << i) != 0))
                    .collect();
                let t2: Vec<usize> = t
                    .iter()
                    .copied()
                    .filter(|v| common.iter().position(|c| c == v).is_none_or(|i| mask & (1 << i) == 0))
                    .collect();
                if s2.is_empty() || t2.is_empty() {
                    continue;
                }
                paths.clear();
                staircases(&s2, &t2, &mut paths);
                facets.extend(paths.iter().map(|p| p.iter().map(|&(a, b)| id(a, b)).collect::<Simplex>()));
            }
        }
    }
    facets.sort_unstable();
    facets.dedup();
    let complex = SimplicialComplex::from_facets(vertices, facets).expect("deleted product");
    let swap_perm: Vec<usize> = pairs.iter().map(|&(a, b)| id(b, a)).collect();
    let swap = GroupAction::new(complex, vec![swap_perm]).expect("swap is simplicial");
    DeletedProduct { swap, pairs }
}

/// The staircase square `K x K`, its swap action and the diagonal `{(v, v)}` as a cell
/// selection; the pair computes Borel–Moore homology of the ordered configuration space.
#[derive(Debug, Clone)]
pub struct SquareWithDiagonal {
    pub swap: GroupAction,
    pub pairs: Vec<(usize, usize)>,
    pub diagonal: CellSelection,
}

pub fn square_with_diagonal(k: &SimplicialComplex) -> SquareWithDiagonal {
    let n = k.num_vertices();
    let square = product_triangulation(k, k);
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|a| (0..n).map(move |b| (a, b))).collect();
    let diagonal = square.selection_where(|s| s.iter().all(|&v| pairs[v].0 == pairs[v].1));
    let swap_perm = pairs.iter().map(|&(a, b)| b * n + a).collect();
    let swap = GroupAction::new(square, vec![swap_perm]).expect("swap is simplicial");
    SquareWithDiagonal { swap, pairs, diagonal }
}

/// Cellular chain complex of the deleted product with cells `sigma x tau`, `sigma` and
/// `tau` disjoint simplices, and the swap `sigma x tau -> (-1)^{pq} tau x sigma`.
#[derive(Debug, Clone)]
pub struct CellularDeletedProduct {
    pub complex: ChainComplex,
    pub swap: CellAction,
    /// `cells[d][i]` = (dim of first factor, index, dim of second factor, index)
    pub cells: Vec<Vec<(usize, usize, usize, usize)>>,
}

pub fn cellular_deleted_product(k: &SimplicialComplex) -> CellularDeletedProduct {
    let top = k.dim().max(0) as usize;
    let mut cells: Vec<Vec<(usize, usize, usize, usize)>> = vec![Vec::new(); 2 * top + 1];
    for p in 0..=top {
        for (i, s) in k.simplices(p).iter().enumerate() {
            for q in 0..=top {
                for (j, t) in k.simplices(q).iter().enumerate() {
                    if s.iter().all(|v| !t.contains(v)) {
                        cells[p + q].push((p, i, q, j));
                    }
                }
            }
        }
    }
    while cells.len() > 1 && cells.last().is_some_and(Vec::is_empty) {
        cells.pop();
    }
    let index: Vec<HashMap<(usize, usize, usize, usize), usize>> = cells
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, c)| (*c, i)).collect())
        .collect();
    let faces = |d: usize, i: usize| -> Vec<(usize, Rational)> {
        let s = &k.simplices(d)[i];
        if d == 0 {
            return Vec::new();
        }
        (0..s.len())
            .map(|r| {
                let f = super::remove_at(s, r);
                let c = if r % 2 == 0 { Rational::one() } else { -Rational::one() };
                (k.index_of(&f).expect("face"), c)
            })
            .collect()
    };
    let mut boundary = BTreeMap::new();
    for d in 1..cells.len() {
        let cols = cells[d]
            .iter()
            .map(|&(p, i, q, j)| {
                let mut col = Vec::new();
                for (fi, c) in faces(p, i) {
                    col.push((index[d - 1][&(p - 1, fi, q, j)], c));
                }
                let sign = if p % 2 == 0 { Rational::one() } else { -Rational::one() };
                for (fj, c) in faces(q, j) {
                    col.push((index[d - 1][&(p, i, q - 1, fj)], &sign * c));
                }
                col.sort_by_key(|(r, _)| *r);
                col
            })
            .collect();
        boundary.insert(d as i32, RationalMatrix::from_columns(cells[d - 1].len(), cols));
    }
    let labels = cells
        .iter()
        .map(|l| {
            l.iter()
                .map(|&(p, i, q, j)| {
                    format!("{}x{}", k.simplex_label(&k.simplices(p)[i]), k.simplex_label(&k.simplices(q)[j]))
                })
                .collect()
        })
        .collect();
    let complex = ChainComplex::new(0, labels, boundary).expect("cellular deleted product");
    let swap_map = cells
        .iter()
        .enumerate()
        .map(|(d, l)| {
            let image = l.iter().map(|&(p, i, q, j)| index[d][&(q, j, p, i)]).collect();
            let sign = l.iter().map(|&(p, _, q, _)| if (p * q) % 2 == 0 { 1 } else { -1 }).collect();
            SignedPerm { image, sign }
        })
        .collect();
    let swap = CellAction::new(&complex, vec![swap_map]).expect("swap commutes with the boundary");
    CellularDeletedProduct { complex, swap, cells }
}

#[cfg(test)]
mod tests {
    use super::super::models::*;
    use super::*;

    #[test]
    fn product_examples() {
        let pt = points(1);
        let hex = polygon(6);
        assert_eq!(product_triangulation(&pt, &hex).f_vector(), hex.f_vector());
        let seg = path(2);
        let sq = product_triangulation(&seg, &seg);
        assert_eq!(sq.f_vector(), vec![4, 5, 2]);
        assert_eq!(sq.betti().from_zero(), vec![1]);
        let t = product_triangulation(&polygon(3), &polygon(4));
        assert_eq!(t.betti().from_zero(), vec![1, 2, 1]);
        assert_eq!(t.euler_characteristic(), 0);
    }

    #[test]
    fn deleted_products_of_small_complexes() {
        let two = deleted_product(&points(2));
        assert_eq!(two.complex().betti().from_zero(), vec![2]);
        for n in 4..=8 {
            let d = deleted_product(&polygon(n));
            assert_eq!(d.complex().betti().from_zero(), vec![1, 1], "n = {n}");
            assert!(d.swap.is_free());
        }
    }

    #[test]
    fn cellular_and_simplicial_deleted_products_agree() {
        for k in [polygon(5), barycentric_subdivision_of_triangle()] {
            let simp = deleted_product(&k).complex().betti();
            let cell = cellular_deleted_product(&k).complex.betti();
            assert_eq!(simp, cell);
        }
    }

    fn barycentric_subdivision_of_triangle() -> SimplicialComplex {
        super::super::barycentric_subdivision(&simplex(3))
    }

    #[test]
    fn square_pair_of_a_circle() {
        // H(S^1 x S^1, diagonal) is Borel-Moore homology of an open annulus
        let sq = square_with_diagonal(&polygon(4));
        let cx = sq.swap.complex().to_chain_complex();
        assert_eq!(cx.relative_betti(&sq.diagonal).unwrap().from_zero(), vec![0, 1, 1]);
    }
}
