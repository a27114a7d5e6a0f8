//! Simplicial complexes and the standard constructions on them.

use std::collections::{BTreeSet, HashMap, HashSet};

use num_traits::One;
use thiserror::Error;

use crate::chain::{Betti, CellSelection, ChainComplex, ChainError};
use crate::linalg::{Rational, RationalMatrix};
use crate::transfer::TransferError;

pub mod action;
pub mod config;
pub mod models;
pub mod product;

pub(crate) use action::sort_with_sign;
pub use action::{isotypic_betti, GroupAction};
pub use config::{discrete_config, discrete_config_exact, loop_monodromy_permutation, CubicalComplex, Graph};
pub use product::{
    cellular_deleted_product, deleted_product, product_triangulation, square_with_diagonal, CellularDeletedProduct,
    DeletedProduct, SquareWithDiagonal,
};

/// A simplex as a strictly increasing list of vertex indices.
pub type Simplex = Vec<usize>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SimplicialError {
    #[error("vertex index {0} out of range")]
    VertexOutOfRange(usize),
    #[error("duplicate vertex label {0:?}")]
    DuplicateVertex(String),
    #[error("unknown vertex label {0:?}")]
    UnknownVertex(String),
    #[error("simplex lists a vertex twice")]
    DegenerateSimplex,
    #[error("vertex map does not send simplices to simplices")]
    NotSimplicial,
    #[error("generated group exceeds {0} elements")]
    GroupTooLarge(usize),
    #[error("graph too small: {0}")]
    GraphTooSmall(String),
    #[error("not a closed loop: {0}")]
    NotAClosedLoop(String),
    #[error("not a subcomplex: {0}")]
    NotASubcomplex(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Transfer(#[from] TransferError),
}

/// Finite abstract simplicial complex. The global vertex order used for orientations and
/// staircase products is the order of `vertices`.
#[derive(Debug, Clone)]
pub struct SimplicialComplex {
    vertices: Vec<String>,
    lookup: HashMap<String, usize>,
    simplices: Vec<Vec<Simplex>>,
    index: Vec<HashMap<Simplex, usize>>,
}

impl PartialEq for SimplicialComplex {
    fn eq(&self, other: &Self) -> bool {
        self.vertices == other.vertices && self.simplices == other.simplices
    }
}

impl Eq for SimplicialComplex {}

impl SimplicialComplex {
    /// Face closure of `facets` on the given vertex list. Every listed vertex is a 0-simplex.
    pub fn from_facets<I>(vertices: Vec<String>, facets: I) -> Result<Self, SimplicialError>
    where
        I: IntoIterator<Item = Vec<usize>>,
    {
        let mut lookup = HashMap::with_capacity(vertices.len());
        for (i, v) in vertices.iter().enumerate() {
            if lookup.insert(v.clone(), i).is_some() {
                return Err(SimplicialError::DuplicateVertex(v.clone()));
            }
        }
        let n = vertices.len();
        let mut by_dim: Vec<HashSet<Simplex>> = vec![(0..n).map(|v| vec![v]).collect()];
        if n == 0 {
            by_dim.clear();
        }
        for mut f in facets {
            f.sort_unstable();
            if f.windows(2).any(|w| w[0] == w[1]) {
                return Err(SimplicialError::DegenerateSimplex);
            }
            if let Some(&bad) = f.iter().find(|&&v| v >= n) {
                return Err(SimplicialError::VertexOutOfRange(bad));
            }
            if f.is_empty() {
                continue;
            }
            insert_closure(&mut by_dim, f);
        }
        Ok(Self::from_sets(vertices, lookup, by_dim))
    }

    /// Complex from facets given by vertex labels; vertices are ordered lexicographically.
    pub fn from_labelled_facets<S: AsRef<str>>(facets: &[Vec<S>]) -> Result<Self, SimplicialError> {
        let labels: BTreeSet<String> =
            facets.iter().flat_map(|f| f.iter().map(|s| s.as_ref().to_string())).collect();
        let vertices: Vec<String> = labels.into_iter().collect();
        let pos: HashMap<&str, usize> =
            vertices.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let idx: Vec<Vec<usize>> = facets
            .iter()
            .map(|f| f.iter().map(|s| pos[s.as_ref()]).collect())
            .collect();
        Self::from_facets(vertices.clone(), idx)
    }

    fn from_sets(vertices: Vec<String>, lookup: HashMap<String, usize>, by_dim: Vec<HashSet<Simplex>>) -> Self {
        let mut simplices = Vec::with_capacity(by_dim.len());
        let mut index = Vec::with_capacity(by_dim.len());
        for set in by_dim {
            let mut list: Vec<Simplex> = set.into_iter().collect();
            list.sort_unstable();
            let map = list.iter().enumerate().map(|(i, s)| (s.clone(), i)).collect();
            simplices.push(list);
            index.push(map);
        }
        while simplices.last().is_some_and(Vec::is_empty) {
            simplices.pop();
            index.pop();
        }
        SimplicialComplex { vertices, lookup, simplices, index }
    }

    pub fn empty() -> Self {
        Self::from_facets(Vec::new(), Vec::<Vec<usize>>::new()).expect("empty complex")
    }

    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn vertex_label(&self, v: usize) -> &str {
        &self.vertices[v]
    }

    pub fn vertex_index(&self, label: &str) -> Option<usize> {
        self.lookup.get(label).copied()
    }

    /// Dimension; -1 for the empty complex.
    pub fn dim(&self) -> i32 {
        self.simplices.len() as i32 - 1
    }

    pub fn simplices(&self, d: usize) -> &[Simplex] {
        self.simplices.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn num_simplices(&self, d: usize) -> usize {
        self.simplices(d).len()
    }

    pub fn total_simplices(&self) -> usize {
        self.simplices.iter().map(Vec::len).sum()
    }

    pub fn f_vector(&self) -> Vec<usize> {
        self.simplices.iter().map(Vec::len).collect()
    }

    /// Position of a sorted simplex within its dimension.
    pub fn index_of(&self, s: &[usize]) -> Option<usize> {
        if s.is_empty() {
            return None;
        }
        self.index.get(s.len() - 1)?.get(s).copied()
    }

    pub fn contains(&self, s: &[usize]) -> bool {
        self.index_of(s).is_some()
    }

    /// Simplices that are not proper faces of another simplex.
    pub fn facets(&self) -> Vec<Simplex> {
        let mut covered: Vec<HashSet<&Simplex>> = vec![HashSet::new(); self.simplices.len()];
        for d in 1..self.simplices.len() {
            for s in &self.simplices[d] {
                for i in 0..s.len() {
                    let f = remove_at(s, i);
                    if let Some(&k) = self.index[d - 1].get(&f) {
                        covered[d - 1].insert(&self.simplices[d - 1][k]);
                    }
                }
            }
        }
        let mut out = Vec::new();
        for d in (0..self.simplices.len()).rev() {
            for s in &self.simplices[d] {
                if !covered[d].contains(s) {
                    out.push(s.clone());
                }
            }
        }
        out
    }

    pub fn simplex_label(&self, s: &[usize]) -> String {
        let names: Vec<&str> = s.iter().map(|&v| self.vertices[v].as_str()).collect();
        format!("[{}]", names.join(","))
    }

    /// Oriented simplicial chain complex, orientation from the vertex order.
    pub fn to_chain_complex(&self) -> ChainComplex {
        self.chain_complex_with(|_, _| Rational::one())
    }

    /// Chain complex whose boundary coefficient of face `i` of `s` is scaled by
    /// `weight(s, i)`; the standard sign `(-1)^i` is applied on top.
    pub(crate) fn chain_complex_with<F>(&self, weight: F) -> ChainComplex
    where
        F: Fn(&[usize], usize) -> Rational,
    {
        self.try_chain_complex_with(weight).expect("simplicial boundary squares to zero")
    }

    pub(crate) fn try_chain_complex_with<F>(&self, weight: F) -> Result<ChainComplex, crate::chain::ChainError>
    where
        F: Fn(&[usize], usize) -> Rational,
    {
        let mut cells = Vec::with_capacity(self.simplices.len().max(1));
        let mut boundary = std::collections::BTreeMap::new();
        if self.simplices.is_empty() {
            cells.push(Vec::new());
        }
        for (d, list) in self.simplices.iter().enumerate() {
            cells.push(list.iter().map(|s| self.simplex_label(s)).collect());
            if d == 0 {
                continue;
            }
            let cols = list
                .iter()
                .map(|s| {
                    let mut col: Vec<(usize, Rational)> = (0..s.len())
                        .map(|i| {
                            let row = self.index[d - 1][&remove_at(s, i)];
                            let w = weight(s, i);
                            (row, if i % 2 == 0 { w } else { -w })
                        })
                        .collect();
                    col.sort_by_key(|(r, _)| *r);
                    col
                })
                .collect();
            boundary.insert(d as i32, RationalMatrix::from_columns(self.simplices[d - 1].len(), cols));
        }
        ChainComplex::new(0, cells, boundary)
    }

    pub fn betti(&self) -> Betti {
        self.to_chain_complex().betti()
    }

    pub fn reduced_betti(&self) -> Betti {
        self.to_chain_complex().reduced_betti().expect("simplicial complexes start in degree 0")
    }

    pub fn euler_characteristic(&self) -> i64 {
        self.simplices
            .iter()
            .enumerate()
            .map(|(d, l)| if d % 2 == 0 { l.len() as i64 } else { -(l.len() as i64) })
            .sum()
    }

    /// The cells of `sub` inside this complex, matched by vertex labels.
    pub fn selection_of(&self, sub: &SimplicialComplex) -> Result<CellSelection, SimplicialError> {
        let mut sel = CellSelection::empty();
        for d in 0..sub.simplices.len() {
            for s in &sub.simplices[d] {
                let mut mapped = Vec::with_capacity(s.len());
                for &v in s {
                    let label = sub.vertex_label(v);
                    let w = self
                        .vertex_index(label)
                        .ok_or_else(|| SimplicialError::UnknownVertex(label.to_string()))?;
                    mapped.push(w);
                }
                mapped.sort_unstable();
                let k = self
                    .index_of(&mapped)
                    .ok_or_else(|| SimplicialError::NotASubcomplex(sub.simplex_label(s)))?;
                sel.insert(d as i32, k);
            }
        }
        Ok(sel)
    }

    /// Cells whose simplex satisfies `pred`.
    pub fn selection_where<F: Fn(&[usize]) -> bool>(&self, pred: F) -> CellSelection {
        let mut sel = CellSelection::empty();
        for (d, list) in self.simplices.iter().enumerate() {
            for (k, s) in list.iter().enumerate() {
                if pred(s) {
                    sel.insert(d as i32, k);
                }
            }
        }
        sel
    }

    /// Homology of the pair `(self, sub)`.
    pub fn relative_betti(&self, sub: &SimplicialComplex) -> Result<Betti, SimplicialError> {
        let sel = self.selection_of(sub)?;
        Ok(self.to_chain_complex().relative_betti(&sel)?)
    }

    /// Full subcomplex on the given vertices, keeping their relative order.
    pub fn induced(&self, keep: &[usize]) -> SimplicialComplex {
        let mut keep: Vec<usize> = keep.to_vec();
        keep.sort_unstable();
        keep.dedup();
        let mut new_index = vec![usize::MAX; self.num_vertices()];
        for (i, &v) in keep.iter().enumerate() {
            new_index[v] = i;
        }
        let facets = self
            .simplices
            .iter()
            .flatten()
            .filter(|s| s.iter().all(|&v| new_index[v] != usize::MAX))
            .map(|s| s.iter().map(|&v| new_index[v]).collect::<Vec<_>>());
        let vertices = keep.iter().map(|&v| self.vertices[v].clone()).collect();
        SimplicialComplex::from_facets(vertices, facets.collect::<Vec<_>>()).expect("induced subcomplex")
    }

    /// Same complex with every vertex label transformed.
    pub fn relabel<F: Fn(&str) -> String>(&self, f: F) -> Result<Self, SimplicialError> {
        let vertices = self.vertices.iter().map(|v| f(v)).collect();
        Self::from_facets(vertices, self.facets())
    }

    /// Whether every simplex of the top dimension is a facet and no other facets exist.
    pub fn is_pure(&self) -> bool {
        let d = self.dim();
        self.facets().iter().all(|f| f.len() as i32 == d + 1)
    }
}

pub(crate) fn remove_at(s: &[usize], i: usize) -> Simplex {
    let mut f = Vec::with_capacity(s.len() - 1);
    f.extend_from_slice(&s[..i]);
    f.extend_from_slice(&s[i + 1..]);
    f
}

fn insert_closure(by_dim: &mut Vec<HashSet<Simplex>>, s: Simplex) {
    let d = s.len() - 1;
    while by_dim.len() <= d {
        by_dim.push(HashSet::new());
    }
    if by_dim[d].contains(&s) {
        return;
    }
    if s.len() > 1 {
        for i in 0..s.len() {
            insert_closure(by_dim, remove_at(&s, i));
        }
    }
    by_dim[d].insert(s);
}

fn fresh_label(k: &SimplicialComplex, base: &str) -> String {
    let mut label = base.to_string();
    while k.vertex_index(&label).is_some() {
        label.push('\'');
    }
    label
}

/// Cone with a new apex placed last in the vertex order.
pub fn cone(k: &SimplicialComplex) -> SimplicialComplex {
    let apex = fresh_label(k, "apex");
    cone_with_apex(k, &apex).expect("fresh apex label")
}

pub fn cone_with_apex(k: &SimplicialComplex, apex: &str) -> Result<SimplicialComplex, SimplicialError> {
    let a = k.num_vertices();
    let mut vertices = k.vertices.clone();
    vertices.push(apex.to_string());
    let mut facets: Vec<Simplex> = k.facets();
    facets.iter_mut().for_each(|f| f.push(a));
    facets.push(vec![a]);
    SimplicialComplex::from_facets(vertices, facets)
}

/// Unreduced suspension: two new apexes placed last.
pub fn suspension(k: &SimplicialComplex) -> SimplicialComplex {
    let n = fresh_label(k, "north");
    let s = fresh_label(k, "south");
    let (a, b) = (k.num_vertices(), k.num_vertices() + 1);
    let mut vertices = k.vertices.clone();
    vertices.push(n);
    vertices.push(s);
    let mut facets = Vec::new();
    for f in k.facets() {
        let mut x = f.clone();
        x.push(a);
        facets.push(x);
        let mut y = f;
        y.push(b);
        facets.push(y);
    }
    facets.push(vec![a]);
    facets.push(vec![b]);
    SimplicialComplex::from_facets(vertices, facets).expect("suspension")
}

/// Join; vertices of `k` come first. Colliding labels are prefixed `0:`/`1:`.
pub fn join(k: &SimplicialComplex, l: &SimplicialComplex) -> SimplicialComplex {
    let collide = l.vertices.iter().any(|v| k.vertex_index(v).is_some());
    let mut vertices: Vec<String> = if collide {
        k.vertices.iter().map(|v| format!("0:{v}")).collect()
    } else {
        k.vertices.clone()
    };
    vertices.extend(l.vertices.iter().map(|v| if collide { format!("1:{v}") } else { v.clone() }));
    let off = k.num_vertices();
    let kf = k.facets();
    let lf = l.facets();
    let mut facets = Vec::with_capacity(kf.len() * lf.len().max(1));
    if kf.is_empty() {
        facets.extend(lf.iter().map(|t| t.iter().map(|v| v + off).collect::<Vec<_>>()));
    }
    for s in &kf {
        if lf.is_empty() {
            facets.push(s.clone());
        }
        for t in &lf {
            let mut u = s.clone();
            u.extend(t.iter().map(|v| v + off));
            facets.push(u);
        }
    }
    SimplicialComplex::from_facets(vertices, facets).expect("join")
}

/// Iterated join `K_1 * ... * K_r` with factor-indexed labels `i:v`.
pub fn join_all(factors: &[SimplicialComplex]) -> SimplicialComplex {
    let mut vertices = Vec::new();
    let mut offsets = Vec::with_capacity(factors.len());
    for (i, k) in factors.iter().enumerate() {
        offsets.push(vertices.len());
        vertices.extend(k.vertices.iter().map(|v| format!("{i}:{v}")));
    }
    let mut facets: Vec<Simplex> = vec![Vec::new()];
    for (k, off) in factors.iter().zip(&offsets) {
        let kf = k.facets();
        if kf.is_empty() {
            continue;
        }
        let mut next = Vec::with_capacity(facets.len() * kf.len());
        for f in &facets {
            for s in &kf {
                let mut u = f.clone();
                u.extend(s.iter().map(|v| v + off));
                next.push(u);
            }
        }
        facets = next;
    }
    SimplicialComplex::from_facets(vertices, facets.into_iter().filter(|f| !f.is_empty()).collect::<Vec<_>>())
        .expect("iterated join")
}

/// Order complex of the face poset. The vertex for a simplex `s` is labelled by
/// `simplex_label(s)`; vertices are ordered by dimension, then by the order within it.
pub fn barycentric_subdivision(k: &SimplicialComplex) -> SimplicialComplex {
    let mut vertices = Vec::with_capacity(k.total_simplices());
    let mut offset = Vec::with_capacity(k.simplices.len());
    for list in &k.simplices {
        offset.push(vertices.len());
        vertices.extend(list.iter().map(|s| k.simplex_label(s)));
    }
    let id = |s: &[usize]| offset[s.len() - 1] + k.index_of(s).expect("face of complex");
    let mut facets = Vec::new();
    for f in k.facets() {
        let mut chain = Vec::with_capacity(f.len());
        flags(&f, &mut chain, &id, &mut facets);
    }
    SimplicialComplex::from_facets(vertices, facets).expect("subdivision")
}

fn flags<F: Fn(&[usize]) -> usize>(s: &[usize], chain: &mut Vec<usize>, id: &F, out: &mut Vec<Simplex>) {
    chain.push(id(s));
    if s.len() == 1 {
        out.push(chain.clone());
    } else {
        for i in 0..s.len() {
            flags(&remove_at(s, i), chain, id, out);
        }
    }
    chain.pop();
}
