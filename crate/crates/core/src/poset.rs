//! Finite posets, their order complexes, lower links and rank filtrations.

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::simplicial::{SimplicialComplex, SimplicialError};
use crate::specseq::FilteredChainComplex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PosetError {
    #[error("element {0:?} not found")]
    ElementNotFound(String),
    #[error("duplicate element {0:?}")]
    DuplicateElement(String),
    #[error("relation is not transitive: {0:?} < {1:?} < {2:?}")]
    RelationNotTransitive(String, String, String),
    #[error("relation has a cycle through {0:?}")]
    NotAntisymmetric(String),
    #[error("rank is not strictly monotone on {0:?} < {1:?}")]
    RankNotMonotone(String, String),
    #[error("rank missing for {0:?}")]
    RankMissing(String),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
}

/// Finite poset with an optional rank map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    elements: Vec<String>,
    lookup: HashMap<String, usize>,
    // less[a][b] iff a < b
    less: Vec<Vec<bool>>,
    rank: Option<Vec<i32>>,
}

/// `{"elements": [...], "covers": [[a, b], ...], "rank": {...}}`; `a < b` for each cover.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PosetJson {
    pub elements: Vec<String>,
    pub covers: Vec<(String, String)>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rank: Option<BTreeMap<String, i32>>,
}

impl FinitePoset {
    fn index(elements: &[String]) -> Result<HashMap<String, usize>, PosetError> {
        let mut lookup = HashMap::with_capacity(elements.len());
        for (i, e) in elements.iter().enumerate() {
            if lookup.insert(e.clone(), i).is_some() {
                return Err(PosetError::DuplicateElement(e.clone()));
            }
        }
        Ok(lookup)
    }

    fn pairs(lookup: &HashMap<String, usize>, rel: &[(String, String)]) -> Result<Vec<(usize, usize)>, PosetError> {
        rel.iter()
            .map(|(a, b)| {
                let x = *lookup.get(a).ok_or_else(|| PosetError::ElementNotFound(a.clone()))?;
                let y = *lookup.get(b).ok_or_else(|| PosetError::ElementNotFound(b.clone()))?;
                Ok((x, y))
            })
            .collect()
    }

    /// Poset generated by cover relations (transitive closure computed here).
    pub fn from_covers(
        elements: Vec<String>,
        covers: &[(String, String)],
        rank: Option<&BTreeMap<String, i32>>,
    ) -> Result<Self, PosetError> {
        let lookup = Self::index(&elements)?;
        let n = elements.len();
        let mut less = vec![vec![false; n]; n];
        for (a, b) in Self::pairs(&lookup, covers)? {
            less[a][b] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if less[i][k] {
                    for j in 0..n {
                        if less[k][j] {
                            less[i][j] = true;
                        }
                    }
                }
            }
        }
        Self::finish(elements, lookup, less, rank)
    }

    /// Poset from a full strict order relation, which must already be transitive.
    pub fn from_relation(
        elements: Vec<String>,
        relation: &[(String, String)],
        rank: Option<&BTreeMap<String, i32>>,
    ) -> Result<Self, PosetError> {
        let lookup = Self::index(&elements)?;
        let n = elements.len();
        let mut less = vec![vec![false; n]; n];
        for (a, b) in Self::pairs(&lookup, relation)? {
            less[a][b] = true;
        }
        for i in 0..n {
            for j in 0..n {
                if !less[i][j] {
                    continue;
                }
                for k in 0..n {
                    if less[j][k] && !less[i][k] {
                        return Err(PosetError::RelationNotTransitive(
                            elements[i].clone(),
                            elements[j].clone(),
                            elements[k].clone(),
                        ));
                    }
                }
            }
        }
        Self::finish(elements, lookup, less, rank)
    }

    fn finish(
        elements: Vec<String>,
        lookup: HashMap<String, usize>,
        less: Vec<Vec<bool>>,
        rank: Option<&BTreeMap<String, i32>>,
    ) -> Result<Self, PosetError> {
        let n = elements.len();
        if let Some(i) = (0..n).find(|&i| less[i][i]) {
            return Err(PosetError::NotAntisymmetric(elements[i].clone()));
        }
        let rank = match rank {
            None => None,
            Some(map) => {
                for k in map.keys() {
                    if !lookup.contains_key(k) {
                        return Err(PosetError::ElementNotFound(k.clone()));
                    }
                }
                let r: Vec<i32> = elements
                    .iter()
                    .map(|e| map.get(e).copied().ok_or_else(|| PosetError::RankMissing(e.clone())))
                    .collect::<Result<_, _>>()?;
                for i in 0..n {
                    for j in 0..n {
                        if less[i][j] && r[i] >= r[j] {
                            return Err(PosetError::RankNotMonotone(elements[i].clone(), elements[j].clone()));
                        }
                    }
                }
                Some(r)
            }
        };
        Ok(FinitePoset { elements, lookup, less, rank })
    }

    pub fn from_json(json: &PosetJson) -> Result<Self, PosetError> {
        Self::from_covers(json.elements.clone(), &json.covers, json.rank.as_ref())
    }

    pub fn to_json(&self) -> PosetJson {
        PosetJson {
            elements: self.elements.clone(),
            covers: self.covers().into_iter().map(|(a, b)| (self.elements[a].clone(), self.elements[b].clone())).collect(),
            rank: self
                .rank
                .as_ref()
                .map(|r| self.elements.iter().cloned().zip(r.iter().copied()).collect()),
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[String] {
        &self.elements
    }

    pub fn element_index(&self, label: &str) -> Result<usize, PosetError> {
        self.lookup.get(label).copied().ok_or_else(|| PosetError::ElementNotFound(label.to_string()))
    }

    pub fn less(&self, a: usize, b: usize) -> bool {
        self.less[a][b]
    }

    pub fn rank(&self, a: usize) -> Option<i32> {
        self.rank.as_ref().map(|r| r[a])
    }

    /// Hasse diagram edges.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.len();
        let mut out = Vec::new();
        for a in 0..n {
            for b in 0..n {
                if self.less[a][b] && !(0..n).any(|c| self.less[a][c] && self.less[c][b]) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    /// Induced subposet on the given elements (in poset order).
    pub fn restrict(&self, keep: &[usize]) -> FinitePoset {
        let mut keep = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let elements: Vec<String> = keep.iter().map(|&i| self.elements[i].clone()).collect();
        let lookup = elements.iter().enumerate().map(|(i, e)| (e.clone(), i)).collect();
        let less = keep.iter().map(|&i| keep.iter().map(|&j| self.less[i][j]).collect()).collect();
        let rank = self.rank.as_ref().map(|r| keep.iter().map(|&i| r[i]).collect());
        FinitePoset { elements, lookup, less, rank }
    }

    /// All maximal chains, each listed bottom to top.
    pub fn maximal_chains(&self) -> Vec<Vec<usize>> {
        let n = self.len();
        let covers = self.covers();
        let mut up: Vec<Vec<usize>> = vec![Vec::new(); n];
        for &(a, b) in &covers {
            up[a].push(b);
        }
        let minimal: Vec<usize> = (0..n).filter(|&b| !(0..n).any(|a| self.less[a][b])).collect();
        let mut out = Vec::new();
        fn walk(v: usize, up: &[Vec<usize>], cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            cur.push(v);
            if up[v].is_empty() {
                out.push(cur.clone());
            }
            for &w in &up[v] {
                walk(w, up, cur, out);
            }
            cur.pop();
        }
        for m in minimal {
            walk(m, &up, &mut Vec::new(), &mut out);
        }
        out
    }
}

/// Order complex with vertex `i` the `i`-th element of the poset.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderComplexResult {
    pub complex: SimplicialComplex,
    /// `vertex_of[e]` = vertex index of element `e`.
    pub vertex_of: Vec<usize>,
}

pub fn order_complex(p: &FinitePoset) -> OrderComplexResult {
    let complex = SimplicialComplex::from_facets(p.elements.clone(), p.maximal_chains())
        .expect("chains of a poset are simplices");
    OrderComplexResult { complex, vertex_of: (0..p.len()).collect() }
}

/// Order complex of `{Y : Y < X}`.
pub fn lower_link(p: &FinitePoset, x: &str) -> Result<SimplicialComplex, PosetError> {
    let xi = p.element_index(x)?;
    let keep: Vec<usize> = (0..p.len()).filter(|&y| p.less[y][xi]).collect();
    Ok(order_complex(&p.restrict(&keep)).complex)
}

/// Order complex of `{Y : Y <= X}`, a cone with apex `X`.
pub fn subordinate_complex(p: &FinitePoset, x: &str) -> Result<SimplicialComplex, PosetError> {
    let xi = p.element_index(x)?;
    let keep: Vec<usize> = (0..p.len()).filter(|&y| y == xi || p.less[y][xi]).collect();
    Ok(order_complex(&p.restrict(&keep)).complex)
}

/// Filtration of the order complex: a chain sits at the largest rank among its elements.
pub fn rank_filtration(p: &FinitePoset) -> Result<FilteredChainComplex, PosetError> {
    let rank = p.rank.as_ref().ok_or_else(|| PosetError::RankMissing("<all>".into()))?;
    let oc = order_complex(p).complex;
    let cx = oc.to_chain_complex();
    let level = (0..=oc.dim().max(0) as usize)
        .map(|d| {
            oc.simplices(d).iter().map(|s| s.iter().map(|&v| rank[v]).max().expect("nonempty simplex")).collect()
        })
        .collect();
    Ok(FilteredChainComplex::new(cx, level).expect("rank levels are monotone on faces"))
}

/// Nonempty proper subsets of `{1..n}` under inclusion, ranked by cardinality.
pub fn boolean_proper_part(n: usize) -> FinitePoset {
    let name = |m: u32| {
        let items: Vec<String> = (0..n).filter(|i| m & (1 << i) != 0).map(|i| (i + 1).to_string()).collect();
        format!("{{{}}}", items.join(","))
    };
    let masks: Vec<u32> = (1..(1u32 << n) - 1).collect();
    let elements: Vec<String> = masks.iter().map(|&m| name(m)).collect();
    let mut covers = Vec::new();
    for &a in &masks {
        for &b in &masks {
            if a & b == a && (b ^ a).count_ones() == 1 {
                covers.push((name(a), name(b)));
            }
        }
    }
    let rank = masks.iter().map(|&m| (name(m), m.count_ones() as i32)).collect();
    FinitePoset::from_covers(elements, &covers, Some(&rank)).expect("boolean lattice")
}

/// Total order `0 < 1 < ... < k-1`, ranked by position.
pub fn chain_poset(k: usize) -> FinitePoset {
    let elements: Vec<String> = (0..k).map(|i| i.to_string()).collect();
    let covers: Vec<(String, String)> = (1..k).map(|i| ((i - 1).to_string(), i.to_string())).collect();
    let rank = (0..k).map(|i| (i.to_string(), i as i32 + 1)).collect();
    FinitePoset::from_covers(elements, &covers, Some(&rank)).expect("chain")
}

/// Proper nonzero subspaces of `F_2^n` under inclusion, ranked by dimension. Subspaces
/// are labelled by their sorted nonzero vectors written as bit masks.
pub fn subspace_poset_f2(n: usize) -> FinitePoset {
    let full = 1u32 << n;
    let mut subspaces: Vec<Vec<u32>> = Vec::new();
    let mut seen = std::collections::HashSet::new();
    let mut frontier: Vec<Vec<u32>> = vec![vec![0]];
    // grow spans one vector at a time
    while let Some(s) = frontier.pop() {
        for v in 1..full {
            if s.contains(&v) {
                continue;
            }
            let mut t: Vec<u32> = s.iter().flat_map(|&x| [x, x ^ v]).collect();
            t.sort_unstable();
            t.dedup();
            if t.len() as u32 == full || !seen.insert(t.clone()) {
                continue;
            }
            subspaces.push(t.clone());
            frontier.push(t);
        }
    }
    subspaces.sort_by_key(|s| (s.len(), s.clone()));
    let name = |s: &Vec<u32>| {
        let parts: Vec<String> = s.iter().skip(1).map(|x| format!("{x:0n$b}")).collect();
        format!("<{}>", parts.join(","))
    };
    let elements: Vec<String> = subspaces.iter().map(name).collect();
    let mut relation = Vec::new();
    for a in &subspaces {
        for b in &subspaces {
            if a.len() < b.len() && a.iter().all(|x| b.contains(x)) {
                relation.push((name(a), name(b)));
            }
        }
    }
    let rank = subspaces.iter().map(|s| (name(s), s.len().trailing_zeros() as i32)).collect();
    FinitePoset::from_relation(elements, &relation, Some(&rank)).expect("subspace lattice")
}

/// Face poset of a simplicial complex, ranked by `dim + 1`.
pub fn face_poset(k: &SimplicialComplex) -> FinitePoset {
    let mut elements = Vec::new();
    let mut rank = BTreeMap::new();
    let mut covers = Vec::new();
    for d in 0..=k.dim().max(-1) {
        for s in k.simplices(d as usize) {
            let label = k.simplex_label(s);
            rank.insert(label.clone(), d + 1);
            elements.push(label.clone());
            if s.len() > 1 {
                for i in 0..s.len() {
                    let mut f = s.clone();
                    f.remove(i);
                    covers.push((k.simplex_label(&f), label.clone()));
                }
            }
        }
    }
    FinitePoset::from_covers(elements, &covers, Some(&rank)).expect("face poset")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chain::Betti;
    use crate::simplicial::barycentric_subdivision;
    use crate::simplicial::models::{polygon, rp2};
    use crate::specseq::{pages, total_betti_check};

    #[test]
    fn order_complex_examples() {
        let total = order_complex(&chain_poset(3)).complex;
        assert_eq!(total.f_vector(), vec![3, 3, 1]);
        assert!(total.reduced_betti().is_zero());
        let hex = order_complex(&boolean_proper_part(3)).complex;
        assert_eq!(hex.betti().from_zero(), vec![1, 1]);
        let f2 = subspace_poset_f2(3);
        assert_eq!(f2.len(), 14);
        let heawood = order_complex(&f2).complex;
        assert_eq!(heawood.f_vector(), vec![14, 21]);
        assert_eq!(heawood.reduced_betti().nonzero(), vec![(1, 8)]);
    }

    #[test]
    fn rejects_bad_relations() {
        let el = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        let rel = |v: &[(&str, &str)]| v.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect::<Vec<_>>();
        assert!(matches!(
            FinitePoset::from_relation(el(&["a", "b", "c"]), &rel(&[("a", "b"), ("b", "c")]), None),
            Err(PosetError::RelationNotTransitive(..))
        ));
        let rank = BTreeMap::from([("a".to_string(), 2), ("b".to_string(), 1)]);
        assert!(matches!(
            FinitePoset::from_covers(el(&["a", "b"]), &rel(&[("a", "b")]), Some(&rank)),
            Err(PosetError::RankNotMonotone(..))
        ));
        assert!(matches!(
            FinitePoset::from_covers(el(&["a", "b"]), &rel(&[("a", "b"), ("b", "a")]), None),
            Err(PosetError::NotAntisymmetric(_))
        ));
        assert!(matches!(lower_link(&chain_poset(2), "z"), Err(PosetError::ElementNotFound(_))));
    }

    #[test]
    fn links_and_cones() {
        let p = chain_poset(4);
        assert_eq!(subordinate_complex(&p, "0").unwrap().f_vector(), vec![1]);
        assert_eq!(subordinate_complex(&p, "3").unwrap().f_vector(), vec![4, 6, 4, 1]);
        let b = boolean_proper_part(4);
        for x in b.elements() {
            let cone = subordinate_complex(&b, x).unwrap();
            assert!(cone.reduced_betti().is_zero());
            let link = lower_link(&b, x).unwrap();
            let rel = cone.relative_betti(&link).unwrap();
            let red = link.reduced_betti();
            for i in 0..=3 {
                assert_eq!(rel.get(i), red.get(i - 1), "element {x}, degree {i}");
            }
        }
    }

    #[test]
    fn rank_filtration_converges() {
        let f = rank_filtration(&boolean_proper_part(3)).unwrap();
        assert_eq!(f.level_range(), Some((1, 2)));
        let ss = pages(&f).unwrap();
        assert!(total_betti_check(&f, &ss).passed());
        assert_eq!(ss.infinity_totals(), BTreeMap::from([(0, 1), (1, 1)]));
        let g = rank_filtration(&subspace_poset_f2(3)).unwrap();
        let ss = pages(&g).unwrap();
        assert_eq!(ss.infinity_totals(), BTreeMap::from([(0, 1), (1, 8)]));
    }

    #[test]
    fn face_poset_gives_subdivision() {
        for k in [polygon(4), rp2()] {
            let a = order_complex(&face_poset(&k)).complex;
            let b = barycentric_subdivision(&k);
            assert_eq!(a.f_vector(), b.f_vector());
            assert_eq!(a.betti(), b.betti());
        }
        assert_eq!(order_complex(&face_poset(&rp2())).complex.betti().from_zero(), Betti::point().from_zero());
    }

    #[test]
    fn json_roundtrip() {
        let p = boolean_proper_part(3);
        let back = FinitePoset::from_json(&p.to_json()).unwrap();
        assert_eq!(back, p);
    }
}
