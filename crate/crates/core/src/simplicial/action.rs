//! Finite groups acting on simplicial complexes by vertex permutations.

use std::collections::{HashMap, VecDeque};

use super::{SimplicialComplex, SimplicialError};
use crate::chain::ChainComplex;
use crate::transfer::{self, CellAction, CellMap, SignedPerm, TransferError, MAX_GROUP_ORDER};

/// Sorts `v` in place and returns the sign of the sorting permutation.
pub(crate) fn sort_with_sign(v: &mut [usize]) -> i8 {
    let mut sign = 1;
    for i in 1..v.len() {
        let mut j = i;
        while j > 0 && v[j - 1] > v[j] {
            v.swap(j - 1, j);
            sign = -sign;
            j -= 1;
        }
    }
    sign
}

#[derive(Debug, Clone)]
pub struct GroupAction {
    complex: SimplicialComplex,
    generators: Vec<Vec<usize>>,
    elements: Vec<Vec<usize>>,
}

impl GroupAction {
    /// Checks every generator is a simplicial automorphism and enumerates the group.
    pub fn new(complex: SimplicialComplex, generators: Vec<Vec<usize>>) -> Result<Self, SimplicialError> {
        let n = complex.num_vertices();
        for g in &generators {
            let mut seen = vec![false; n];
            if g.len() != n || g.iter().any(|&x| x >= n || std::mem::replace(&mut seen[x], true)) {
                return Err(SimplicialError::NotSimplicial);
            }
            for d in 0..=complex.dim().max(0) as usize {
                for s in complex.simplices(d) {
                    let mut t: Vec<usize> = s.iter().map(|&v| g[v]).collect();
                    t.sort_unstable();
                    if !complex.contains(&t) {
                        return Err(SimplicialError::NotSimplicial);
                    }
                }
            }
        }
        let id: Vec<usize> = (0..n).collect();
        let mut elements = vec![id.clone()];
        let mut seen: HashMap<Vec<usize>, usize> = HashMap::from([(id, 0)]);
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for g in &generators {
                let prod: Vec<usize> = elements[e].iter().map(|&v| g[v]).collect();
                if !seen.contains_key(&prod) {
                    if elements.len() >= MAX_GROUP_ORDER {
                        return Err(SimplicialError::GroupTooLarge(MAX_GROUP_ORDER));
                    }
                    seen.insert(prod.clone(), elements.len());
                    queue.push_back(elements.len());
                    elements.push(prod);
                }
            }
        }
        Ok(GroupAction { complex, generators, elements })
    }

    pub fn complex(&self) -> &SimplicialComplex {
        &self.complex
    }

    pub fn generators(&self) -> &[Vec<usize>] {
        &self.generators
    }

    pub fn elements(&self) -> &[Vec<usize>] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    /// Whether no nontrivial element maps a simplex to itself.
    pub fn is_free(&self) -> bool {
        let k = &self.complex;
        self.elements.iter().skip(1).all(|g| {
            (0..=k.dim().max(0) as usize).all(|d| {
                k.simplices(d).iter().all(|s| {
                    let mut t: Vec<usize> = s.iter().map(|&v| g[v]).collect();
                    t.sort_unstable();
                    &t != s
                })
            })
        })
    }

    /// Signed permutation of the oriented simplices induced by a vertex permutation.
    pub fn cell_map(&self, g: &[usize]) -> CellMap {
        let k = &self.complex;
        (0..=k.dim().max(0) as usize)
            .map(|d| {
                let list = k.simplices(d);
                let mut image = Vec::with_capacity(list.len());
                let mut sign = Vec::with_capacity(list.len());
                for s in list {
                    let mut t: Vec<usize> = s.iter().map(|&v| g[v]).collect();
                    let e = sort_with_sign(&mut t);
                    image.push(k.index_of(&t).expect("checked simplicial"));
                    sign.push(e);
                }
                SignedPerm { image, sign }
            })
            .collect()
    }

    /// The action on the oriented chain complex.
    pub fn cell_action(&self, cx: &ChainComplex) -> Result<CellAction, TransferError> {
        let gens = self.generators.iter().map(|g| self.cell_map(g)).collect();
        CellAction::new(cx, gens)
    }
}

/// Dimension of the `character`-isotypic part of `H_degree`, computed with the
/// homology projector. `character` gives the value on each generator.
pub fn isotypic_betti(action: &GroupAction, character: &[i8], degree: i32) -> Result<usize, TransferError> {
    let cx = action.complex().to_chain_complex();
    let cells = action.cell_action(&cx)?;
    transfer::isotypic_dim_homology(&cx, &cells, character, degree)
}

/// The symmetric group on the factors of an iterated join built by [`super::join_all`]
/// from `r` copies of `factor`, generated by adjacent transpositions.
pub fn factor_permutations(factor: &SimplicialComplex, r: usize) -> Result<GroupAction, SimplicialError> {
    let copies = vec![factor.clone(); r];
    let joined = super::join_all(&copies);
    let n = factor.num_vertices();
    let gens = (0..r.saturating_sub(1))
        .map(|i| {
            (0..n * r)
                .map(|v| {
                    let (blk, off) = (v / n, v % n);
                    let b = if blk == i { i + 1 } else if blk == i + 1 { i } else { blk };
                    b * n + off
                })
                .collect()
        })
        .collect();
    GroupAction::new(joined, gens)
}

/// Applies the same vertex map to every factor of an `r`-fold join of `factor`.
pub fn diagonal_map(factor_map: &[usize], r: usize) -> Vec<usize> {
    let n = factor_map.len();
    (0..n * r).map(|v| (v / n) * n + factor_map[v % n]).collect()
}

#[cfg(test)]
mod tests {
    use super::super::models::polygon;
    use super::*;

    #[test]
    fn sorting_sign() {
        let mut v = vec![2, 0, 1];
        assert_eq!(sort_with_sign(&mut v), 1);
        let mut w = vec![1, 0];
        assert_eq!(sort_with_sign(&mut w), -1);
    }

    #[test]
    fn antipodal_hexagon() {
        let hex = polygon(6);
        let g: Vec<usize> = (0..6).map(|i| (i + 3) % 6).collect();
        let act = GroupAction::new(hex, vec![g]).unwrap();
        assert_eq!(act.order(), 2);
        assert!(act.is_free());
        assert_eq!(isotypic_betti(&act, &[1], 1).unwrap(), 1);
        assert_eq!(isotypic_betti(&act, &[-1], 1).unwrap(), 0);
        assert_eq!(isotypic_betti(&act, &[1], 0).unwrap(), 1);
    }

    #[test]
    fn rejects_non_simplicial_maps() {
        let hex = polygon(6);
        let g = vec![0, 2, 1, 3, 4, 5];
        assert_eq!(GroupAction::new(hex, vec![g]).unwrap_err(), SimplicialError::NotSimplicial);
    }

    #[test]
    fn symmetric_join_of_two_circles() {
        let act = factor_permutations(&polygon(3), 2).unwrap();
        assert_eq!(act.order(), 2);
        assert_eq!(isotypic_betti(&act, &[1], 3).unwrap(), 1);
        assert_eq!(isotypic_betti(&act, &[-1], 3).unwrap(), 0);
    }

    #[test]
    fn character_must_be_a_homomorphism() {
        let act = factor_permutations(&polygon(3), 3).unwrap();
        assert_eq!(act.order(), 6);
        // (-1, 1) would send the 3-cycle (01)(12) to -1
        assert_eq!(isotypic_betti(&act, &[-1, 1], 5), Err(TransferError::CharacterNotHomomorphism));
        assert_eq!(isotypic_betti(&act, &[1, 1], 5), Ok(1));
    }
}
