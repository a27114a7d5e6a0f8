//! Discrete models of unordered configuration spaces of graphs.
//!
//! A cell of `UD_p(G)` is a set of `p` vertices and edges of `G` whose closures are
//! pairwise disjoint; its dimension is the number of edges.

use std::collections::{BTreeMap, HashMap, VecDeque};

use num_traits::One;
use serde::{Deserialize, Serialize};

use super::{SimplicialComplex, SimplicialError};
use crate::chain::{Betti, ChainComplex};
use crate::linalg::{Rational, RationalMatrix};

/// Upper bound on the vertex count after auto-subdivision.
pub const SUBDIVISION_BUDGET: usize = 400;

/// Simple graph; edges are stored as given, `(tail, head)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Graph {
    pub vertices: Vec<String>,
    pub edges: Vec<(usize, usize)>,
}

impl Graph {
    pub fn new(vertices: Vec<String>, edges: Vec<(usize, usize)>) -> Result<Self, SimplicialError> {
        let n = vertices.len();
        for &(a, b) in &edges {
            if a >= n || b >= n {
                return Err(SimplicialError::VertexOutOfRange(a.max(b)));
            }
            if a == b {
                return Err(SimplicialError::DegenerateSimplex);
            }
        }
        Ok(Graph { vertices, edges })
    }

    pub fn cycle(n: usize) -> Self {
        Graph { vertices: (0..n).map(|i| i.to_string()).collect(), edges: (0..n).map(|i| (i, (i + 1) % n)).collect() }
    }

    pub fn path(n: usize) -> Self {
        Graph { vertices: (0..n).map(|i| i.to_string()).collect(), edges: (1..n).map(|i| (i - 1, i)).collect() }
    }

    /// The 1-skeleton of a simplicial complex.
    pub fn from_complex(k: &SimplicialComplex) -> Self {
        Graph { vertices: k.vertices().to_vec(), edges: k.simplices(1).iter().map(|e| (e[0], e[1])).collect() }
    }

    pub fn degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|&&(a, b)| a == v || b == v).count()
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertices.len()];
        for (i, &(a, b)) in self.edges.iter().enumerate() {
            adj[a].push((b, i));
            adj[b].push((a, i));
        }
        adj
    }

    /// Length of a shortest cycle, if any.
    pub fn girth(&self) -> Option<usize> {
        let adj = self.adjacency();
        let mut best: Option<usize> = None;
        for s in 0..self.vertices.len() {
            let mut dist = vec![usize::MAX; adj.len()];
            let mut via = vec![usize::MAX; adj.len()];
            dist[s] = 0;
            let mut q = VecDeque::from([s]);
            while let Some(u) = q.pop_front() {
                for &(w, e) in &adj[u] {
                    if e == via[u] {
                        continue;
                    }
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        via[w] = e;
                        q.push_back(w);
                    } else {
                        let len = dist[u] + dist[w] + 1;
                        best = Some(best.map_or(len, |b| b.min(len)));
                    }
                }
            }
        }
        best
    }

    /// Shortest path between vertices of degree other than two, through degree-two vertices.
    pub fn shortest_segment(&self) -> Option<usize> {
        let adj = self.adjacency();
        let essential: Vec<bool> = adj.iter().map(|a| a.len() != 2).collect();
        let mut best: Option<usize> = None;
        for s in (0..adj.len()).filter(|&v| essential[v]) {
            for &(first, e0) in &adj[s] {
                let (mut prev_edge, mut cur, mut len) = (e0, first, 1);
                while !essential[cur] && cur != s {
                    let &(next, e) = adj[cur].iter().find(|&&(_, e)| e != prev_edge).expect("degree two");
                    prev_edge = e;
                    cur = next;
                    len += 1;
                }
                best = Some(best.map_or(len, |b| b.min(len)));
            }
        }
        best
    }

    /// Replaces every edge by a path of `m` edges.
    pub fn subdivide(&self, m: usize) -> Graph {
        assert!(m >= 1);
        let mut vertices = self.vertices.clone();
        let mut edges = Vec::with_capacity(self.edges.len() * m);
        for &(a, b) in &self.edges {
            let mut prev = a;
            for k in 1..m {
                vertices.push(format!("{}~{}.{k}", self.vertices[a], self.vertices[b]));
                let v = vertices.len() - 1;
                edges.push((prev, v));
                prev = v;
            }
            edges.push((prev, b));
        }
        Graph { vertices, edges }
    }

    /// Vertices of a connected 2-regular graph in cyclic order, starting at vertex 0.
    pub fn cyclic_order(&self) -> Option<Vec<usize>> {
        let adj = self.adjacency();
        if adj.is_empty() || adj.iter().any(|a| a.len() != 2) {
            return None;
        }
        let mut order = vec![0];
        let mut prev = usize::MAX;
        let mut cur = 0;
        loop {
            let next = if adj[cur][0].0 != prev { adj[cur][0].0 } else { adj[cur][1].0 };
            if next == 0 {
                break;
            }
            order.push(next);
            prev = cur;
            cur = next;
        }
        (order.len() == adj.len()).then_some(order)
    }
}

/// Cube complex `UD_p(G)`.
#[derive(Debug, Clone)]
pub struct CubicalComplex {
    graph: Graph,
    p: usize,
    // cells[d] = sorted (vertices, edges) with edges.len() == d
    cells: Vec<Vec<(Vec<usize>, Vec<usize>)>>,
    index: Vec<HashMap<(Vec<usize>, Vec<usize>), usize>>,
}

impl CubicalComplex {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }

    pub fn tokens(&self) -> usize {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.cells.len().saturating_sub(1)
    }

    pub fn cells(&self, d: usize) -> &[(Vec<usize>, Vec<usize>)] {
        self.cells.get(d).map_or(&[], Vec::as_slice)
    }

    pub fn cell_index(&self, vertices: &[usize], edges: &[usize]) -> Option<usize> {
        self.index.get(edges.len())?.get(&(vertices.to_vec(), edges.to_vec())).copied()
    }

    /// Index of the configuration with tokens at `positions`.
    pub fn vertex_index(&self, positions: &[usize]) -> Option<usize> {
        let mut v = positions.to_vec();
        v.sort_unstable();
        self.cell_index(&v, &[])
    }

    /// The graph edge traversed by a 1-cell.
    pub fn moving_edge(&self, one_cell: usize) -> usize {
        self.cells[1][one_cell].1[0]
    }

    /// Endpoints `(tail, head)` of a 1-cell as 0-cell indices.
    pub fn one_cell_ends(&self, one_cell: usize) -> (usize, usize) {
        let (vs, es) = &self.cells[1][one_cell];
        let (a, b) = self.graph.edges[es[0]];
        let with = |x: usize| {
            let mut v = vs.clone();
            v.push(x);
            v.sort_unstable();
            self.cell_index(&v, &[]).expect("face of a cell")
        };
        (with(a), with(b))
    }

    pub fn to_chain_complex(&self) -> ChainComplex {
        let mut labels = Vec::new();
        for list in &self.cells {
            labels.push(
                list.iter()
                    .map(|(vs, es)| {
                        let v: Vec<&str> = vs.iter().map(|&x| self.graph.vertices[x].as_str()).collect();
                        let e: Vec<String> = es
                            .iter()
                            .map(|&x| {
                                let (a, b) = self.graph.edges[x];
                                format!("{}-{}", self.graph.vertices[a], self.graph.vertices[b])
                            })
                            .collect();
                        format!("{{{}|{}}}", v.join(","), e.join(","))
                    })
                    .collect(),
            );
        }
        if labels.is_empty() {
            labels.push(Vec::new());
        }
        let mut boundary = BTreeMap::new();
        for d in 1..self.cells.len() {
            let cols = self.cells[d]
                .iter()
                .map(|(vs, es)| {
                    let mut col = Vec::with_capacity(2 * es.len());
                    for (i, &e) in es.iter().enumerate() {
                        let sign = if i % 2 == 0 { Rational::one() } else { -Rational::one() };
                        let rest: Vec<usize> = es.iter().copied().filter(|&x| x != e).collect();
                        let (tail, head) = self.graph.edges[e];
                        for (end, s) in [(head, sign.clone()), (tail, -sign.clone())] {
                            let mut v = vs.clone();
                            v.push(end);
                            v.sort_unstable();
                            col.push((self.index[d - 1][&(v, rest.clone())], s));
                        }
                    }
                    col.sort_by_key(|(r, _)| *r);
                    col
                })
                .collect();
            boundary.insert(d as i32, RationalMatrix::from_columns(self.cells[d - 1].len(), cols));
        }
        ChainComplex::new(0, labels, boundary).expect("cubical boundary squares to zero")
    }

    pub fn betti(&self) -> Betti {
        self.to_chain_complex().betti()
    }

    /// A loop that advances every token to the next token's starting position around a
    /// cycle graph; requires the graph to be a single cycle.
    pub fn generator_loop(&self) -> Result<Vec<usize>, SimplicialError> {
        let order = self
            .graph
            .cyclic_order()
            .ok_or_else(|| SimplicialError::NotAClosedLoop("graph is not a single cycle".into()))?;
        let (n, p) = (order.len(), self.p);
        if p == 0 {
            return Ok(vec![self.vertex_index(&[]).expect("empty configuration")]);
        }
        let start: Vec<usize> = (0..p).map(|i| i * n / p).collect();
        let gaps: Vec<usize> = (0..p).map(|i| if i + 1 < p { start[i + 1] - start[i] } else { n - start[i] }).collect();
        let mut offset = vec![0usize; p];
        let at = |offset: &[usize]| -> Vec<usize> { (0..p).map(|i| order[(start[i] + offset[i]) % n]).collect() };
        let mut path = vec![self.vertex_index(&at(&offset)).expect("spread configuration")];
        let rounds = *gaps.iter().max().expect("p > 0");
        for _ in 0..rounds {
            for j in (0..p).rev() {
                if offset[j] < gaps[j] {
                    offset[j] += 1;
                    let c = self
                        .vertex_index(&at(&offset))
                        .ok_or_else(|| SimplicialError::NotAClosedLoop("collision while advancing".into()))?;
                    path.push(c);
                }
            }
        }
        Ok(path)
    }
}

/// Builds `UD_p(G)` on the graph as given.
pub fn discrete_config_exact(graph: &Graph, p: usize) -> CubicalComplex {
    let (n, m) = (graph.vertices.len(), graph.edges.len());
    // item i < n is vertex i, item n + e is edge e
    let closure = |item: usize| -> Vec<usize> {
        if item < n {
            vec![item]
        } else {
            let (a, b) = graph.edges[item - n];
            vec![a, b]
        }
    };
    let mut cells: Vec<Vec<(Vec<usize>, Vec<usize>)>> = Vec::new();
    let mut used = vec![false; n];
    let mut chosen = Vec::with_capacity(p);
    fn rec(
        start: usize,
        total: usize,
        p: usize,
        n: usize,
        closure: &dyn Fn(usize) -> Vec<usize>,
        used: &mut Vec<bool>,
        chosen: &mut Vec<usize>,
        cells: &mut Vec<Vec<(Vec<usize>, Vec<usize>)>>,
    ) {
        if chosen.len() == p {
            let vs: Vec<usize> = chosen.iter().copied().filter(|&i| i < n).collect();
            let es: Vec<usize> = chosen.iter().copied().filter(|&i| i >= n).map(|i| i - n).collect();
            let d = es.len();
            while cells.len() <= d {
                cells.push(Vec::new());
            }
            cells[d].push((vs, es));
            return;
        }
        for item in start..total {
            let cl = closure(item);
            if cl.iter().any(|&v| used[v]) {
                continue;
            }
            cl.iter().for_each(|&v| used[v] = true);
            chosen.push(item);
            rec(item + 1, total, p, n, closure, used, chosen, cells);
            chosen.pop();
            cl.iter().for_each(|&v| used[v] = false);
        }
    }
    rec(0, n + m, p, n, &closure, &mut used, &mut chosen, &mut cells);
    for list in &mut cells {
        list.sort();
    }
    let index = cells
        .iter()
        .map(|l| l.iter().enumerate().map(|(i, c)| (c.clone(), i)).collect())
        .collect();
    CubicalComplex { graph: graph.clone(), p, cells, index }
}

/// Subdivision factor used by [`discrete_config`].
pub fn subdivision_factor(graph: &Graph, p: usize) -> usize {
    let need = p + 1;
    let mut m = 1;
    for len in [graph.girth(), graph.shortest_segment()].into_iter().flatten() {
        m = m.max(need.div_ceil(len));
    }
    2 * m
}

/// `UD_p(G)` after subdividing `G` until cycles and segments have at least `p + 1`
/// edges, then doubling once more.
pub fn discrete_config(graph: &Graph, p: usize) -> Result<CubicalComplex, SimplicialError> {
    let m = subdivision_factor(graph, p);
    let sub = graph.subdivide(m);
    let n = sub.vertices.len();
    if n > SUBDIVISION_BUDGET {
        return Err(SimplicialError::GraphTooSmall(format!(
            "subdivision needs {n} vertices, budget is {SUBDIVISION_BUDGET}"
        )));
    }
    if n < 2 * p + 2 {
        return Err(SimplicialError::GraphTooSmall(format!("{n} vertices after subdivision, need {}", 2 * p + 2)));
    }
    Ok(discrete_config_exact(&sub, p))
}

/// Token permutation along a closed edge path of 0-cells.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Monodromy {
    /// Token `i` (numbered by the sorted start positions) ends on start position `perm[i]`.
    pub perm: Vec<usize>,
    pub sign: i8,
}

pub fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1;
    for s in 0..perm.len() {
        if seen[s] {
            continue;
        }
        let mut len = 0;
        let mut c = s;
        while !seen[c] {
            seen[c] = true;
            c = perm[c];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

pub fn loop_monodromy_permutation(model: &CubicalComplex, path: &[usize]) -> Result<Monodromy, SimplicialError> {
    let zero = model.cells(0);
    let Some(&first) = path.first() else {
        return Err(SimplicialError::NotAClosedLoop("empty path".into()));
    };
    if path.iter().any(|&c| c >= zero.len()) {
        return Err(SimplicialError::NotAClosedLoop("unknown 0-cell".into()));
    }
    if path.len() > 1 && path.last() != Some(&first) {
        return Err(SimplicialError::NotAClosedLoop("path does not return to its start".into()));
    }
    let start = zero[first].0.clone();
    let mut tokens = start.clone();
    for w in path.windows(2) {
        let (a, b) = (&zero[w[0]].0, &zero[w[1]].0);
        if a == b {
            continue;
        }
        let from: Vec<usize> = a.iter().copied().filter(|x| !b.contains(x)).collect();
        let to: Vec<usize> = b.iter().copied().filter(|x| !a.contains(x)).collect();
        if from.len() != 1 || to.len() != 1 {
            return Err(SimplicialError::NotAClosedLoop("step moves more than one token".into()));
        }
        let (u, v) = (from[0], to[0]);
        let edge = model
            .graph
            .edges
            .iter()
            .position(|&(x, y)| (x, y) == (u, v) || (x, y) == (v, u))
            .ok_or_else(|| SimplicialError::NotAClosedLoop("step is not along an edge".into()))?;
        let rest: Vec<usize> = a.iter().copied().filter(|&x| x != u).collect();
        if model.cell_index(&rest, &[edge]).is_none() {
            return Err(SimplicialError::NotAClosedLoop("step is not a 1-cell".into()));
        }
        let t = tokens.iter().position(|&x| x == u).expect("token present");
        tokens[t] = v;
    }
    let perm: Vec<usize> = tokens
        .iter()
        .map(|x| start.iter().position(|y| y == x).expect("closed loop"))
        .collect();
    let sign = permutation_sign(&perm);
    Ok(Monodromy { perm, sign })
}
