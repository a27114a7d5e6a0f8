//! Rank-one local systems with `±1` monodromy: characters on the 1-skeleton, twisted
//! chains, orientation and trace characters, and duality bookkeeping for Borel–Moore
//! homology.
//!
//! A character assigns `±1` to each edge; a simplex is anchored at its minimal vertex
//! and the boundary coefficient of face 0 of `[v0, ..., vd]` is multiplied by the sign
//! of `v0 v1`.

use std::collections::{HashMap, VecDeque};

use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{Betti, ChainComplex, ChainError};
use crate::linalg::Rational;
use crate::simplicial::{
    CubicalComplex, DeletedProduct, GroupAction, Simplex, SimplicialComplex, SimplicialError, SquareWithDiagonal,
};
use crate::transfer::{self, CellAction, SignedPerm, TransferError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TwistError {
    #[error("character has {found} edge signs, complex has {expected} edges")]
    CharacterMismatch { expected: usize, found: usize },
    #[error("edge signs multiply to -1 around {0}")]
    NotACocycle(String),
    #[error("not a pseudomanifold: {0}")]
    NotPseudomanifold(String),
    #[error("projection unavailable: {0}")]
    ProjectionUnavailable(String),
    #[error("character is not invariant under generator {0}")]
    CharacterNotInvariant(usize),
    #[error("invalid loop: {0}")]
    InvalidLoop(String),
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error(transparent)]
    Transfer(#[from] TransferError),
    #[error(transparent)]
    Simplicial(#[from] SimplicialError),
}

/// `±1` on each edge of a 1-skeleton, in the skeleton's edge order. The transport
/// along an edge is the same in both directions.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Character {
    signs: Vec<i8>,
}

/// Serialized form: the edges carrying `-1`, by vertex label.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CharacterJson {
    pub negative_edges: Vec<(String, String)>,
}

fn edge_sign(k: &SimplicialComplex, chi: &Character, a: usize, b: usize) -> i8 {
    if a == b {
        return 1;
    }
    let e = if a < b { [a, b] } else { [b, a] };
    chi.signs[k.index_of(&e).expect("edge of the complex")]
}

impl Character {
    pub fn trivial(k: &SimplicialComplex) -> Self {
        Character { signs: vec![1; k.num_simplices(1)] }
    }

    /// Checks the length and the cocycle condition on every triangle.
    pub fn new(k: &SimplicialComplex, signs: Vec<i8>) -> Result<Self, TwistError> {
        let chi = Self::unchecked(signs);
        chi.check_on(k)?;
        for t in k.simplices(2) {
            let prod = edge_sign(k, &chi, t[0], t[1]) * edge_sign(k, &chi, t[1], t[2]) * edge_sign(k, &chi, t[0], t[2]);
            if prod != 1 {
                return Err(TwistError::NotACocycle(k.simplex_label(t)));
            }
        }
        Ok(chi)
    }

    /// No cocycle check; for skeleta that are not simplicial.
    pub fn unchecked(signs: Vec<i8>) -> Self {
        Character { signs: signs.into_iter().map(|s| if s < 0 { -1 } else { 1 }).collect() }
    }

    pub fn from_negative_edges(k: &SimplicialComplex, edges: &[(usize, usize)]) -> Result<Self, TwistError> {
        let mut signs = vec![1; k.num_simplices(1)];
        for &(a, b) in edges {
            let e = if a < b { [a, b] } else { [b, a] };
            let i = k
                .index_of(&e)
                .ok_or_else(|| TwistError::InvalidLoop(format!("({a},{b}) is not an edge")))?;
            signs[i] = -1;
        }
        Self::new(k, signs)
    }

    pub fn from_json(k: &SimplicialComplex, json: &CharacterJson) -> Result<Self, TwistError> {
        let idx = |l: &str| {
            k.vertex_index(l).ok_or_else(|| TwistError::InvalidLoop(format!("unknown vertex {l:?}")))
        };
        let edges = json
            .negative_edges
            .iter()
            .map(|(a, b)| Ok((idx(a)?, idx(b)?)))
            .collect::<Result<Vec<_>, TwistError>>()?;
        Self::from_negative_edges(k, &edges)
    }

    pub fn to_json(&self, k: &SimplicialComplex) -> CharacterJson {
        let negative_edges = k
            .simplices(1)
            .iter()
            .zip(&self.signs)
            .filter(|(_, &s)| s < 0)
            .map(|(e, _)| (k.vertex_label(e[0]).to_string(), k.vertex_label(e[1]).to_string()))
            .collect();
        CharacterJson { negative_edges }
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn sign(&self, k: &SimplicialComplex, a: usize, b: usize) -> i8 {
        edge_sign(k, self, a, b)
    }

    pub fn is_identically_one(&self) -> bool {
        self.signs.iter().all(|&s| s == 1)
    }

    pub fn check_on(&self, k: &SimplicialComplex) -> Result<(), TwistError> {
        if self.signs.len() != k.num_simplices(1) {
            return Err(TwistError::CharacterMismatch { expected: k.num_simplices(1), found: self.signs.len() });
        }
        Ok(())
    }

    pub fn product(&self, other: &Character) -> Character {
        Character { signs: self.signs.iter().zip(&other.signs).map(|(a, b)| a * b).collect() }
    }

    /// Value on a closed vertex path whose consecutive vertices are equal or adjacent.
    pub fn loop_value(&self, k: &SimplicialComplex, path: &[usize]) -> Result<i8, TwistError> {
        if path.first() != path.last() {
            return Err(TwistError::InvalidLoop("path does not close".into()));
        }
        let mut v = 1;
        for w in path.windows(2) {
            if w[0] != w[1] {
                let e = if w[0] < w[1] { [w[0], w[1]] } else { [w[1], w[0]] };
                let i = k
                    .index_of(&e)
                    .ok_or_else(|| TwistError::InvalidLoop(format!("({},{}) is not an edge", w[0], w[1])))?;
                v *= self.signs[i];
            }
        }
        Ok(v)
    }

    /// Gauge transform by `g`: `s'(a, b) = g(a) s(a, b) g(b)`.
    pub fn gauge(&self, k: &SimplicialComplex, g: &[i8]) -> Character {
        let signs = k.simplices(1).iter().zip(&self.signs).map(|(e, &s)| g[e[0]] * s * g[e[1]]).collect();
        Character { signs }
    }

    /// The gauge-equivalent character that is `+1` on a breadth-first spanning forest
    /// rooted at the smallest vertex of each component, with the gauge used.
    pub fn tree_normalized(&self, k: &SimplicialComplex) -> (Character, Vec<i8>) {
        let g = spanning_gauge(k, self);
        (self.gauge(k, &g), g)
    }

    /// Whether the character is a coboundary.
    pub fn is_trivial_class(&self, k: &SimplicialComplex) -> bool {
        self.tree_normalized(k).0.is_identically_one()
    }

    pub fn gauge_equivalent(&self, k: &SimplicialComplex, other: &Character) -> bool {
        self.product(other).is_trivial_class(k)
    }
}

fn adjacency(k: &SimplicialComplex) -> Vec<Vec<(usize, usize)>> {
    let mut adj = vec![Vec::new(); k.num_vertices()];
    for (i, e) in k.simplices(1).iter().enumerate() {
        adj[e[0]].push((e[1], i));
        adj[e[1]].push((e[0], i));
    }
    adj
}

fn spanning_gauge(k: &SimplicialComplex, chi: &Character) -> Vec<i8> {
    let adj = adjacency(k);
    let mut g = vec![0i8; k.num_vertices()];
    for root in 0..k.num_vertices() {
        if g[root] != 0 {
            continue;
        }
        g[root] = 1;
        let mut queue = VecDeque::from([root]);
        while let Some(a) = queue.pop_front() {
            for &(b, e) in &adj[a] {
                if g[b] == 0 {
                    g[b] = g[a] * chi.signs[e];
                    queue.push_back(b);
                }
            }
        }
    }
    g
}

/// One tree-normalized representative per class of `H^1(K; Z/2)`.
pub fn enumerate_characters(k: &SimplicialComplex) -> Vec<Character> {
    let basis = character_basis(k);
    let trivial = Character::trivial(k);
    let mut out = Vec::with_capacity(1 << basis.len());
    for mask in 0u64..(1u64 << basis.len()) {
        let mut c = trivial.clone();
        for (i, b) in basis.iter().enumerate() {
            if mask & (1 << i) != 0 {
                c = c.product(b);
            }
        }
        out.push(c);
    }
    out
}

/// A basis of the tree-normalized cocycles, by elimination over `F_2`.
pub fn character_basis(k: &SimplicialComplex) -> Vec<Character> {
    let tree_gauge = spanning_gauge(k, &Character::trivial(k));
    debug_assert!(tree_gauge.iter().all(|&g| g == 1));
    // tree edges: recompute the forest to know which edges are free
    let adj = adjacency(k);
    let mut in_tree = vec![false; k.num_simplices(1)];
    let mut seen = vec![false; k.num_vertices()];
    for root in 0..k.num_vertices() {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(a) = queue.pop_front() {
            for &(b, e) in &adj[a] {
                if !seen[b] {
                    seen[b] = true;
                    in_tree[e] = true;
                    queue.push_back(b);
                }
            }
        }
    }
    let free: Vec<usize> = (0..in_tree.len()).filter(|&e| !in_tree[e]).collect();
    let col_of: HashMap<usize, usize> = free.iter().enumerate().map(|(i, &e)| (e, i)).collect();
    let words = free.len().div_ceil(64).max(1);
    let mut rows: Vec<Vec<u64>> = Vec::new();
    for t in k.simplices(2) {
        let mut row = vec![0u64; words];
        for (a, b) in [(t[0], t[1]), (t[1], t[2]), (t[0], t[2])] {
            let e = k.index_of(&[a, b]).expect("edge of a triangle");
            if let Some(&c) = col_of.get(&e) {
                row[c / 64] ^= 1 << (c % 64);
            }
        }
        if row.iter().any(|&w| w != 0) {
            rows.push(row);
        }
    }
    // reduced row echelon form
    let bit = |r: &[u64], c: usize| r[c / 64] >> (c % 64) & 1 == 1;
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..free.len() {
        let Some(p) = (r..rows.len()).find(|&i| bit(&rows[i], c)) else {
            continue;
        };
        rows.swap(r, p);
        let pivot = rows[r].clone();
        for (i, row) in rows.iter_mut().enumerate() {
            if i != r && bit(row, c) {
                for (w, pw) in row.iter_mut().zip(&pivot) {
                    *w ^= pw;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let pivot_rows: HashMap<usize, usize> = pivots.iter().enumerate().map(|(i, &c)| (c, i)).collect();
    (0..free.len())
        .filter(|c| !pivot_rows.contains_key(c))
        .map(|c| {
            let mut signs = vec![1i8; k.num_simplices(1)];
            signs[free[c]] = -1;
            for (&pc, &ri) in &pivot_rows {
                if bit(&rows[ri], c) {
                    signs[free[pc]] = -1;
                }
            }
            Character { signs }
        })
        .collect()
}

/// Chains with coefficients in a rank-one local system.
#[derive(Debug, Clone)]
pub struct TwistedComplex {
    /// Chain complex carrying the twisted boundary.
    pub base: ChainComplex,
    pub character: Character,
}

pub fn twisted_complex(k: &SimplicialComplex, chi: &Character) -> Result<TwistedComplex, TwistError> {
    chi.check_on(k)?;
    let base = k.try_chain_complex_with(|s, i| {
        if i == 0 && s.len() >= 2 && edge_sign(k, chi, s[0], s[1]) < 0 {
            -Rational::one()
        } else {
            Rational::one()
        }
    })?;
    Ok(TwistedComplex { base, character: chi.clone() })
}

pub fn twisted_betti(k: &SimplicialComplex, chi: &Character) -> Result<Betti, TwistError> {
    Ok(twisted_complex(k, chi)?.base.betti())
}

/// `dim H^i(K; χ)` listed for `i = 0..=dim K`.
pub fn twisted_cohomology(k: &SimplicialComplex, chi: &Character) -> Result<Vec<usize>, TwistError> {
    let dual = twisted_complex(k, chi)?.base.dual();
    let b = dual.betti();
    Ok((0..=k.dim().max(0)).map(|i| b.get(-i)).collect())
}

/// Lift of a group action to the twisted chains. For each generator the vertex gauge
/// `t` with `s(ga, gb) = t(a) s(a, b) t(b)` is fixed by `t = +1` at the smallest vertex
/// of each component; the opposite lift is picked out by the sign character.
#[derive(Debug, Clone)]
pub struct LiftedAction {
    pub twisted: TwistedComplex,
    pub cells: CellAction,
    pub gauges: Vec<Vec<i8>>,
}

pub fn lift_action(action: &GroupAction, chi: &Character) -> Result<LiftedAction, TwistError> {
    let k = action.complex();
    let twisted = twisted_complex(k, chi)?;
    let adj = adjacency(k);
    let mut gauges = Vec::new();
    let mut maps = Vec::new();
    for (gi, g) in action.generators().iter().enumerate() {
        let mut t = vec![0i8; k.num_vertices()];
        for root in 0..k.num_vertices() {
            if t[root] != 0 {
                continue;
            }
            t[root] = 1;
            let mut queue = VecDeque::from([root]);
            while let Some(a) = queue.pop_front() {
                for &(b, e) in &adj[a] {
                    let want = edge_sign(k, chi, g[a], g[b]) * t[a] * chi.signs[e];
                    if t[b] == 0 {
                        t[b] = want;
                        queue.push_back(b);
                    } else if t[b] != want {
                        return Err(TwistError::CharacterNotInvariant(gi));
                    }
                }
            }
        }
        let map = (0..=k.dim().max(0) as usize)
            .map(|d| {
                let mut image = Vec::with_capacity(k.num_simplices(d));
                let mut sign = Vec::with_capacity(k.num_simplices(d));
                for s in k.simplices(d) {
                    let mut img: Simplex = s.iter().map(|&v| g[v]).collect();
                    let perm_sign = crate::simplicial::sort_with_sign(&mut img);
                    let transport = edge_sign(k, chi, g[s[0]], img[0]);
                    image.push(k.index_of(&img).expect("action is simplicial"));
                    sign.push(t[s[0]] * transport * perm_sign);
                }
                SignedPerm { image, sign }
            })
            .collect();
        gauges.push(t);
        maps.push(map);
    }
    let cells = CellAction::new(&twisted.base, maps)?;
    Ok(LiftedAction { twisted, cells, gauges })
}

/// Betti numbers of the `ψ`-isotypic part of twisted homology (orbit-sum route).
pub fn isotypic_twisted_betti(action: &GroupAction, chi: &Character, psi: &[i8]) -> Result<Betti, TwistError> {
    let lifted = lift_action(action, chi)?;
    Ok(transfer::isotypic_betti_chain(&lifted.twisted.base, &lifted.cells, psi)?)
}

/// The same dimensions through the homology projector.
pub fn isotypic_twisted_betti_projector(
    action: &GroupAction,
    chi: &Character,
    psi: &[i8],
) -> Result<Betti, TwistError> {
    let lifted = lift_action(action, chi)?;
    Ok(transfer::isotypic_betti_homology(&lifted.twisted.base, &lifted.cells, psi)?)
}

/// Orientation character of a pure complex in which every codimension-one face lies in
/// one or two facets (boundary faces allowed). Vertex stars must be connected through
/// codimension-one faces and locally orientable.
pub fn orientation_character(k: &SimplicialComplex) -> Result<Character, TwistError> {
    let n = k.dim();
    if n < 1 {
        return Err(TwistError::NotPseudomanifold("dimension below one".into()));
    }
    if !k.is_pure() {
        return Err(TwistError::NotPseudomanifold("not pure".into()));
    }
    let n = n as usize;
    let facets = k.simplices(n);
    // (n-1)-face -> [(facet, position of the removed vertex)]
    let mut cofaces: Vec<Vec<(usize, usize)>> = vec![Vec::new(); k.num_simplices(n - 1)];
    for (fi, f) in facets.iter().enumerate() {
        for i in 0..f.len() {
            let mut face = f.clone();
            face.remove(i);
            cofaces[k.index_of(&face).expect("face")].push((fi, i));
        }
    }
    if let Some(t) = cofaces.iter().position(|c| c.len() > 2) {
        return Err(TwistError::NotPseudomanifold(format!(
            "face {} lies in {} facets",
            k.simplex_label(&k.simplices(n - 1)[t]),
            cofaces[t].len()
        )));
    }
    // facet adjacency with coherence sign of the sorted orientations
    let mut dual: Vec<Vec<(usize, usize, i8)>> = vec![Vec::new(); facets.len()];
    for (t, c) in cofaces.iter().enumerate() {
        if let [(f, i), (g, j)] = c[..] {
            let eps = if (i + j) % 2 == 0 { -1 } else { 1 };
            dual[f].push((g, t, eps));
            dual[g].push((f, t, eps));
        }
    }
    let mut star: Vec<Vec<usize>> = vec![Vec::new(); k.num_vertices()];
    for (fi, f) in facets.iter().enumerate() {
        for &v in f {
            star[v].push(fi);
        }
    }
    // pi[v]: facet -> orientation relative to the reference facet of the star of v
    let mut pi: Vec<HashMap<usize, i8>> = Vec::with_capacity(k.num_vertices());
    for v in 0..k.num_vertices() {
        let mut m = HashMap::with_capacity(star[v].len());
        let root = star[v][0];
        m.insert(root, 1i8);
        let mut queue = VecDeque::from([root]);
        while let Some(f) = queue.pop_front() {
            for &(g, t, eps) in &dual[f] {
                if !k.simplices(n - 1)[t].contains(&v) {
                    continue;
                }
                let want = m[&f] * eps;
                match m.get(&g) {
                    None => {
                        m.insert(g, want);
                        queue.push_back(g);
                    }
                    Some(&x) if x != want => {
                        return Err(TwistError::NotPseudomanifold(format!(
                            "star of {} is not orientable",
                            k.vertex_label(v)
                        )));
                    }
                    Some(_) => {}
                }
            }
        }
        if m.len() != star[v].len() {
            return Err(TwistError::NotPseudomanifold(format!(
                "star of {} is not connected through faces",
                k.vertex_label(v)
            )));
        }
        pi.push(m);
    }
    let signs = k
        .simplices(1)
        .iter()
        .map(|e| {
            let f = *star[e[0]].iter().find(|&&f| facets[f].contains(&e[1])).expect("pure complex");
            pi[e[0]][&f] * pi[e[1]][&f]
        })
        .collect();
    Character::new(k, signs).map_err(|_| TwistError::NotPseudomanifold("local orientations do not glue".into()))
}

/// A model whose vertices record where the points of a configuration sit in a base
/// complex.
#[derive(Debug, Clone, Copy)]
pub enum TraceModel<'a> {
    DeletedProduct(&'a DeletedProduct),
    Square(&'a SquareWithDiagonal),
    Bare(&'a SimplicialComplex),
}

impl<'a> TraceModel<'a> {
    pub fn complex(&self) -> &'a SimplicialComplex {
        match self {
            TraceModel::DeletedProduct(d) => d.complex(),
            TraceModel::Square(s) => s.swap.complex(),
            TraceModel::Bare(k) => k,
        }
    }

    fn pairs(&self) -> Result<&'a [(usize, usize)], TwistError> {
        match self {
            TraceModel::DeletedProduct(d) => Ok(&d.pairs),
            TraceModel::Square(s) => Ok(&s.pairs),
            TraceModel::Bare(_) => Err(TwistError::ProjectionUnavailable("model has no coordinate projections".into())),
        }
    }
}

/// The character sending an edge of a two-point model to the product of `w` over the
/// steps taken by both points.
pub fn trace_character(model: TraceModel<'_>, base: &SimplicialComplex, w: &Character) -> Result<Character, TwistError> {
    w.check_on(base)?;
    let pairs = model.pairs()?;
    let k = model.complex();
    if pairs.len() != k.num_vertices() || pairs.iter().any(|&(a, b)| a >= base.num_vertices() || b >= base.num_vertices()) {
        return Err(TwistError::ProjectionUnavailable("projections do not match the base".into()));
    }
    let step = |a: usize, c: usize| -> Result<i8, TwistError> {
        if a == c {
            return Ok(1);
        }
        let e = if a < c { [a, c] } else { [c, a] };
        let i = base
            .index_of(&e)
            .ok_or_else(|| TwistError::ProjectionUnavailable("projection of an edge is not an edge".into()))?;
        Ok(w.signs[i])
    };
    let signs = k
        .simplices(1)
        .iter()
        .map(|e| {
            let ((a, b), (c, d)) = (pairs[e[0]], pairs[e[1]]);
            Ok(step(a, c)? * step(b, d)?)
        })
        .collect::<Result<Vec<_>, TwistError>>()?;
    Character::new(k, signs)
}

/// Graph edge `e` of `model` as an edge of `base`, where `base` has the graph's vertices.
fn graph_edge_sign(model: &CubicalComplex, base: &SimplicialComplex, w: &Character, e: usize) -> Result<i8, TwistError> {
    let (a, b) = model.graph().edges[e];
    let key = if a < b { [a, b] } else { [b, a] };
    let i = base
        .index_of(&key)
        .ok_or_else(|| TwistError::ProjectionUnavailable("graph edge missing from the base".into()))?;
    Ok(w.signs[i])
}

/// The base as a 1-dimensional simplicial complex on the graph's vertices.
pub fn graph_complex(model: &CubicalComplex) -> Result<SimplicialComplex, TwistError> {
    let g = model.graph();
    let facets: Vec<Simplex> = g.edges.iter().map(|&(a, b)| if a < b { vec![a, b] } else { vec![b, a] }).collect();
    Ok(SimplicialComplex::from_facets(g.vertices.clone(), facets)?)
}

/// Trace character on the 1-cells of a discrete configuration model: each 1-cell moves
/// one token along one graph edge.
pub fn trace_character_config(
    model: &CubicalComplex,
    base: &SimplicialComplex,
    w: &Character,
) -> Result<Character, TwistError> {
    w.check_on(base)?;
    if base.num_vertices() != model.graph().vertices.len() {
        return Err(TwistError::ProjectionUnavailable("base does not carry the graph".into()));
    }
    let signs = (0..model.cells(1).len())
        .map(|c| graph_edge_sign(model, base, w, model.moving_edge(c)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Character::unchecked(signs))
}

/// Value of a character on the 1-cells of a cube complex along a path of 0-cells.
pub fn config_loop_value(model: &CubicalComplex, chi: &Character, path: &[usize]) -> Result<i8, TwistError> {
    if path.first() != path.last() {
        return Err(TwistError::InvalidLoop("path does not close".into()));
    }
    let mut ends: HashMap<(usize, usize), usize> = HashMap::new();
    for c in 0..model.cells(1).len() {
        let (a, b) = model.one_cell_ends(c);
        ends.insert((a, b), c);
        ends.insert((b, a), c);
    }
    let mut v = 1;
    for w in path.windows(2) {
        if w[0] == w[1] {
            continue;
        }
        let c = ends.get(&(w[0], w[1])).ok_or_else(|| TwistError::InvalidLoop("step is not a 1-cell".into()))?;
        v *= chi.signs[*c];
    }
    Ok(v)
}

/// `w` on the total trace of a loop, found by following each token: for every token the
/// graph edges it crosses are collected and `w` is multiplied over all of them.
pub fn token_trace_value(
    model: &CubicalComplex,
    base: &SimplicialComplex,
    w: &Character,
    path: &[usize],
) -> Result<i8, TwistError> {
    let zero = model.cells(0);
    let graph = model.graph();
    let first = *path.first().ok_or_else(|| TwistError::InvalidLoop("empty path".into()))?;
    let mut tokens = zero[first].0.clone();
    let mut traces: Vec<Vec<usize>> = vec![Vec::new(); tokens.len()];
    for s in path.windows(2) {
        let (a, b) = (&zero[s[0]].0, &zero[s[1]].0);
        let from: Vec<usize> = a.iter().copied().filter(|x| !b.contains(x)).collect();
        let to: Vec<usize> = b.iter().copied().filter(|x| !a.contains(x)).collect();
        match (from.as_slice(), to.as_slice()) {
            ([], []) => continue,
            ([u], [v]) => {
                let e = graph
                    .edges
                    .iter()
                    .position(|&(x, y)| (x, y) == (*u, *v) || (x, y) == (*v, *u))
                    .ok_or_else(|| TwistError::InvalidLoop("step is not along an edge".into()))?;
                let t = tokens.iter().position(|x| x == u).expect("token present");
                tokens[t] = *v;
                traces[t].push(e);
            }
            _ => return Err(TwistError::InvalidLoop("step moves more than one token".into())),
        }
    }
    let mut end = tokens.clone();
    end.sort_unstable();
    if end != zero[first].0 {
        return Err(TwistError::InvalidLoop("path does not close".into()));
    }
    let mut v = 1;
    for e in traces.iter().flatten() {
        v *= graph_edge_sign(model, base, w, *e)?;
    }
    Ok(v)
}

/// Result of a duality computation, with the unchecked geometric assumption attached.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DualityReport {
    /// `bm[i]` = dim of Borel–Moore homology in degree `i`, for `i = 0..=n`.
    pub bm: Vec<usize>,
    pub dimension: usize,
    pub assumption: String,
}

/// `H̄_i(M; χ) = H^{n-i}(K; χ·w)` for a compact model `K ≃ M` of an open `n`-manifold
/// with orientation character `w`. The manifold claim is recorded, not checked.
pub fn bm_via_duality(
    k: &SimplicialComplex,
    chi: &Character,
    n: usize,
    w: &Character,
    assumption: &str,
) -> Result<DualityReport, TwistError> {
    chi.check_on(k)?;
    w.check_on(k)?;
    let coh = twisted_cohomology(k, &chi.product(w))?;
    let bm = (0..=n).map(|i| coh.get(n - i).copied().unwrap_or(0)).collect();
    Ok(DualityReport { bm, dimension: n, assumption: assumption.to_string() })
}

/// Duality on the quotient of a free action: the local system `χ·w` of the quotient is
/// given by its pullback `cover_character` with the lift fixed as in [`lift_action`]
/// and the group character `psi`. Cohomology of the quotient is the `ψ`-isotypic part
/// of the twisted cochains upstairs.
pub fn bm_via_duality_quotient(
    action: &GroupAction,
    cover_character: &Character,
    psi: &[i8],
    n: usize,
    assumption: &str,
) -> Result<DualityReport, TwistError> {
    let lifted = lift_action(action, cover_character)?;
    let (dual, dual_cells) = transfer::dual_action(&lifted.twisted.base, &lifted.cells)?;
    let coh = transfer::isotypic_betti_chain(&dual, &dual_cells, psi)?;
    let bm = (0..=n).map(|i| coh.get(i as i32 - n as i32)).collect();
    Ok(DualityReport { bm, dimension: n, assumption: assumption.to_string() })
}

/// Relative twisted homology `H_*(X, A; χ)^ψ` of an invariant pair, the Borel–Moore
/// homology of `X \ A` when the local system extends over `X`.
pub fn isotypic_relative_twisted_betti(
    action: &GroupAction,
    chi: &Character,
    sub: &crate::chain::CellSelection,
    psi: &[i8],
) -> Result<Betti, TwistError> {
    let lifted = lift_action(action, chi)?;
    let (q, qa) = transfer::quotient_action(&lifted.twisted.base, &lifted.cells, sub)?;
    Ok(transfer::isotypic_betti_chain(&q, &qa, psi)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::models::*;
    use crate::simplicial::{barycentric_subdivision, deleted_product, discrete_config_exact, Graph};

    #[test]
    fn character_counts() {
        assert_eq!(enumerate_characters(&polygon(6)).len(), 2);
        assert_eq!(enumerate_characters(&rp2()).len(), 2);
        assert_eq!(enumerate_characters(&torus()).len(), 4);
        assert_eq!(enumerate_characters(&klein_bottle()).len(), 4);
        assert_eq!(enumerate_characters(&octahedron()).len(), 1);
    }

    #[test]
    fn twisted_examples() {
        let c = polygon(6);
        let chars = enumerate_characters(&c);
        assert_eq!(twisted_betti(&c, &chars[0]).unwrap().from_zero(), vec![1, 1]);
        assert!(twisted_betti(&c, &chars[1]).unwrap().is_zero());
        let p = rp2();
        let w = enumerate_characters(&p).pop().unwrap();
        assert_eq!(twisted_betti(&p, &w).unwrap().dims, vec![0, 0, 1]);
        assert_eq!(twisted_cohomology(&p, &w).unwrap(), vec![0, 0, 1]);
        assert_eq!(
            twisted_betti(&p, &Character::trivial(&polygon(3))),
            Err(TwistError::CharacterMismatch { expected: 15, found: 3 })
        );
    }

    #[test]
    fn rejects_non_cocycles() {
        let p = rp2();
        let mut signs = vec![1; p.num_simplices(1)];
        signs[0] = -1;
        assert!(matches!(Character::new(&p, signs), Err(TwistError::NotACocycle(_))));
    }

    #[test]
    fn orientation_characters() {
        assert!(orientation_character(&torus()).unwrap().is_trivial_class(&torus()));
        assert!(orientation_character(&octahedron()).unwrap().is_trivial_class(&octahedron()));
        assert!(!orientation_character(&rp2()).unwrap().is_trivial_class(&rp2()));
        assert!(!orientation_character(&klein_bottle()).unwrap().is_trivial_class(&klein_bottle()));
        let bowtie = SimplicialComplex::from_labelled_facets(&[vec!["a", "b", "c"], vec!["a", "b", "d"], vec!["a", "b", "e"]])
            .unwrap();
        assert!(matches!(orientation_character(&bowtie), Err(TwistError::NotPseudomanifold(_))));
        // a disc has boundary faces and the trivial character
        let disc = barycentric_subdivision(&simplex(3));
        assert!(orientation_character(&disc).unwrap().is_trivial_class(&disc));
    }

    #[test]
    fn json_roundtrip() {
        let p = rp2();
        let w = orientation_character(&p).unwrap().tree_normalized(&p).0;
        let back = Character::from_json(&p, &w.to_json(&p)).unwrap();
        assert_eq!(back, w);
    }

    #[test]
    fn lifted_swap_on_a_small_deleted_product() {
        let p = rp2();
        let w = orientation_character(&p).unwrap();
        let d = deleted_product(&p);
        let s = trace_character(TraceModel::DeletedProduct(&d), &p, &w).unwrap();
        for psi in [1, -1] {
            let a = isotypic_twisted_betti(&d.swap, &s, &[psi]).unwrap();
            let b = isotypic_twisted_betti_projector(&d.swap, &s, &[psi]).unwrap();
            assert_eq!(a, b);
        }
        assert!(matches!(
            trace_character(TraceModel::Bare(&p), &p, &w),
            Err(TwistError::ProjectionUnavailable(_))
        ));
    }

    #[test]
    fn config_trace_on_the_generator_loop() {
        let model = discrete_config_exact(&Graph::cycle(6), 2);
        let base = graph_complex(&model).unwrap();
        let w = enumerate_characters(&base).pop().unwrap();
        let path = model.generator_loop().unwrap();
        let chi = trace_character_config(&model, &base, &w).unwrap();
        assert_eq!(config_loop_value(&model, &chi, &path).unwrap(), -1);
        assert_eq!(token_trace_value(&model, &base, &w, &path).unwrap(), -1);
    }
}
