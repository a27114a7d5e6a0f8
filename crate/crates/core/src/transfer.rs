//! Finite groups acting on chain complexes by signed cell permutations, and the
//! isotypic parts of homology they cut out.
//!
//! Two independent routes are provided: a projector on a homology basis, and the
//! chain-level complex of orbit sums.

use std::collections::{HashMap, VecDeque};

use num_traits::Zero;
use thiserror::Error;

use crate::chain::{Betti, CellSelection, ChainComplex, ChainError};
use crate::linalg::{rank, Rational, RationalMatrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransferError {
    #[error("generator {generator} does not commute with the boundary in degree {degree}")]
    NotChainMap { generator: usize, degree: i32 },
    #[error("generator {generator} has the wrong shape in degree {degree}")]
    ShapeMismatch { generator: usize, degree: i32 },
    #[error("generator {generator} is not a permutation in degree {degree}")]
    NotAPermutation { generator: usize, degree: i32 },
    #[error("generated group exceeds {0} elements")]
    GroupTooLarge(usize),
    #[error("group character is not a homomorphism")]
    CharacterNotHomomorphism,
    #[error("expected {expected} generator values, got {found}")]
    CharacterArity { expected: usize, found: usize },
    #[error("subcomplex is not invariant under generator {0}")]
    SubcomplexNotInvariant(usize),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

/// Upper bound on enumerated group orders.
pub const MAX_GROUP_ORDER: usize = 100_000;

/// `sigma -> sign[sigma] * cell[image[sigma]]` in one degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignedPerm {
    pub image: Vec<usize>,
    pub sign: Vec<i8>,
}

impl SignedPerm {
    pub fn identity(n: usize) -> Self {
        SignedPerm { image: (0..n).collect(), sign: vec![1; n] }
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &SignedPerm) -> SignedPerm {
        let image = other.image.iter().map(|&j| self.image[j]).collect();
        let sign = other.image.iter().zip(&other.sign).map(|(&j, &s)| s * self.sign[j]).collect();
        SignedPerm { image, sign }
    }

    fn is_permutation(&self) -> bool {
        let mut seen = vec![false; self.image.len()];
        self.image.iter().all(|&j| j < seen.len() && !std::mem::replace(&mut seen[j], true))
    }
}

/// Signed permutation per degree, indexed from the complex's `min_degree`.
pub type CellMap = Vec<SignedPerm>;

/// A finite group acting on a chain complex by signed cell permutations.
#[derive(Debug, Clone)]
pub struct CellAction {
    min_degree: i32,
    elements: Vec<CellMap>,
    generators: Vec<usize>,
    // cayley[e][s] = element index of generator s applied after element e
    cayley: Vec<Vec<usize>>,
}

impl CellAction {
    /// Enumerates the group generated by `generators`, checking each one commutes with ∂.
    pub fn new(cx: &ChainComplex, generators: Vec<CellMap>) -> Result<Self, TransferError> {
        for (gi, g) in generators.iter().enumerate() {
            check_generator(cx, gi, g)?;
        }
        let id: CellMap = cx.degrees().map(|d| SignedPerm::identity(cx.num_cells(d))).collect();
        let mut elements = vec![id.clone()];
        let mut lookup: HashMap<CellMap, usize> = HashMap::new();
        lookup.insert(id, 0);
        let mut cayley: Vec<Vec<usize>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            let mut row = Vec::with_capacity(generators.len());
            for g in &generators {
                let prod: CellMap = g.iter().zip(&elements[e]).map(|(a, b)| a.compose(b)).collect();
                let k = match lookup.get(&prod) {
                    Some(&k) => k,
                    None => {
                        if elements.len() >= MAX_GROUP_ORDER {
                            return Err(TransferError::GroupTooLarge(MAX_GROUP_ORDER));
                        }
                        let k = elements.len();
                        lookup.insert(prod.clone(), k);
                        elements.push(prod);
                        queue.push_back(k);
                        k
                    }
                };
                row.push(k);
            }
            if cayley.len() <= e {
                cayley.resize(e + 1, Vec::new());
            }
            cayley[e] = row;
        }
        let generators = (0..generators.len()).map(|s| cayley[0][s]).collect();
        Ok(CellAction { min_degree: cx.min_degree(), elements, generators, cayley })
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    /// The cell map of generator `s`.
    pub fn generator(&self, s: usize) -> &CellMap {
        &self.elements[self.generators[s]]
    }

    pub fn element(&self, g: usize, degree: i32) -> &SignedPerm {
        &self.elements[g][(degree - self.min_degree) as usize]
    }

    /// Extends generator values to a `±1` character on the whole group.
    pub fn character(&self, on_generators: &[i8]) -> Result<Vec<i8>, TransferError> {
        if on_generators.len() != self.generators.len() {
            return Err(TransferError::CharacterArity {
                expected: self.generators.len(),
                found: on_generators.len(),
            });
        }
        if on_generators.iter().any(|&x| x != 1 && x != -1) {
            return Err(TransferError::CharacterNotHomomorphism);
        }
        let mut value = vec![0i8; self.order()];
        value[0] = 1;
        let mut queue = VecDeque::from([0usize]);
        while let Some(e) = queue.pop_front() {
            for (s, &k) in self.cayley[e].iter().enumerate() {
                let v = value[e] * on_generators[s];
                if value[k] == 0 {
                    value[k] = v;
                    queue.push_back(k);
                } else if value[k] != v {
                    return Err(TransferError::CharacterNotHomomorphism);
                }
            }
        }
        Ok(value)
    }

    fn apply(&self, g: usize, degree: i32, v: &[Rational]) -> Vec<Rational> {
        let p = self.element(g, degree);
        let mut out = vec![Rational::zero(); v.len()];
        for (i, x) in v.iter().enumerate() {
            if !x.is_zero() {
                let y = if p.sign[i] < 0 { -x.clone() } else { x.clone() };
                out[p.image[i]] += y;
            }
        }
        out
    }
}

fn check_generator(cx: &ChainComplex, gi: usize, g: &CellMap) -> Result<(), TransferError> {
    if g.len() != cx.degrees().count() {
        return Err(TransferError::ShapeMismatch { generator: gi, degree: cx.min_degree() });
    }
    for (i, d) in cx.degrees().enumerate() {
        let p = &g[i];
        if p.image.len() != cx.num_cells(d) || p.sign.len() != p.image.len() {
            return Err(TransferError::ShapeMismatch { generator: gi, degree: d });
        }
        if !p.is_permutation() || p.sign.iter().any(|&s| s != 1 && s != -1) {
            return Err(TransferError::NotAPermutation { generator: gi, degree: d });
        }
    }
    for (i, d) in cx.degrees().enumerate().skip(1) {
        let b = cx.boundary_ref(d).expect("degree in range");
        let (p, q) = (&g[i], &g[i - 1]);
        for c in 0..b.cols() {
            // g(∂c) versus ∂(g c)
            let mut lhs: Vec<(usize, Rational)> = b
                .column(c)
                .iter()
                .map(|(r, x)| (q.image[*r], if q.sign[*r] < 0 { -x.clone() } else { x.clone() }))
                .collect();
            lhs.sort_by_key(|(r, _)| *r);
            let rhs: Vec<(usize, Rational)> = b
                .column(p.image[c])
                .iter()
                .map(|(r, x)| (*r, if p.sign[c] < 0 { -x.clone() } else { x.clone() }))
                .collect();
            if lhs != rhs {
                return Err(TransferError::NotChainMap { generator: gi, degree: d });
            }
        }
    }
    Ok(())
}

/// The action induced on `C / A` for an invariant subcomplex `A`.
pub fn quotient_action(
    cx: &ChainComplex,
    action: &CellAction,
    sub: &CellSelection,
) -> Result<(ChainComplex, CellAction), TransferError> {
    let quotient = cx.quotient(sub)?;
    let mut gens = Vec::with_capacity(action.num_generators());
    for s in 0..action.num_generators() {
        let g = action.generator(s);
        let mut map = Vec::with_capacity(g.len());
        for (i, d) in cx.degrees().enumerate() {
            let keep: Vec<usize> = (0..cx.num_cells(d)).filter(|&c| !sub.contains(d, c)).collect();
            let mut new_index = vec![usize::MAX; cx.num_cells(d)];
            for (k, &c) in keep.iter().enumerate() {
                new_index[c] = k;
            }
            let mut image = Vec::with_capacity(keep.len());
            let mut sign = Vec::with_capacity(keep.len());
            for &c in &keep {
                let t = g[i].image[c];
                if sub.contains(d, t) {
                    return Err(TransferError::SubcomplexNotInvariant(s));
                }
                image.push(new_index[t]);
                sign.push(g[i].sign[c]);
            }
            map.push(SignedPerm { image, sign });
        }
        gens.push(map);
    }
    let induced = CellAction::new(&quotient, gens)?;
    Ok((quotient, induced))
}

/// The contragredient action on the dual complex [`ChainComplex::dual`]. Signed
/// permutation matrices are orthogonal, so each generator keeps its cell map.
pub fn dual_action(cx: &ChainComplex, action: &CellAction) -> Result<(ChainComplex, CellAction), TransferError> {
    let dual = cx.dual();
    let gens = (0..action.num_generators())
        .map(|s| action.generator(s).iter().rev().cloned().collect())
        .collect();
    let induced = CellAction::new(&dual, gens)?;
    Ok((dual, induced))
}

/// Homology route: rank of `(1/|G|) Σ ψ(g) g_*` on `H_degree`.
pub fn isotypic_dim_homology(
    cx: &ChainComplex,
    action: &CellAction,
    psi: &[i8],
    degree: i32,
) -> Result<usize, TransferError> {
    let chi = action.character(psi)?;
    let rk = |d: i32| if cx.degrees().contains(&d) { rank(&cx.boundary(d)) } else { 0 };
    if cx.num_cells(degree) == rk(degree) + rk(degree + 1) {
        return Ok(0);
    }
    let basis = cx.homology_basis(degree);
    let n = basis.dim();
    if n == 0 {
        return Ok(0);
    }
    let mut sum = vec![vec![Rational::zero(); n]; n];
    for (g, &sign) in chi.iter().enumerate() {
        for (j, z) in basis.reps.iter().enumerate() {
            let gz = action.apply(g, degree, z);
            let coords = basis.coordinates(&gz).expect("group acts by chain maps");
            for (i, c) in coords.into_iter().enumerate() {
                if sign > 0 {
                    sum[i][j] += c;
                } else {
                    sum[i][j] -= c;
                }
            }
        }
    }
    Ok(rank(&RationalMatrix::from_dense(&sum)))
}

/// Chain-level route: the complex spanned by nonzero orbit sums `P(b)`, `b` an orbit
/// representative. Its homology is the `ψ`-isotypic part of the homology of `cx`.
pub fn isotypic_complex(
    cx: &ChainComplex,
    action: &CellAction,
    psi: &[i8],
) -> Result<ChainComplex, TransferError> {
    let chi = action.character(psi)?;
    // per degree: for each cell, (live orbit index, factor) with P(cell) = factor * P(rep)
    let mut pos: Vec<Vec<Option<(usize, i8)>>> = Vec::new();
    let mut reps: Vec<Vec<usize>> = Vec::new();
    for d in cx.degrees() {
        let n = cx.num_cells(d);
        let mut assigned: Vec<Option<(usize, i8)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut live = Vec::new();
        for b in 0..n {
            if seen[b] {
                continue;
            }
            let mut orbit = Vec::new();
            let mut dead = false;
            let mut factor: HashMap<usize, i8> = HashMap::new();
            for (g, &x) in chi.iter().enumerate() {
                let p = action.element(g, d);
                let (t, lam) = (p.image[b], p.sign[b]);
                let f = lam * x;
                match factor.get(&t) {
                    Some(&old) if old != f => dead = true,
                    Some(_) => {}
                    None => {
                        factor.insert(t, f);
                        orbit.push(t);
                    }
                }
            }
            for &t in &orbit {
                seen[t] = true;
            }
            if !dead {
                let k = live.len();
                live.push(b);
                for &t in &orbit {
                    assigned[t] = Some((k, factor[&t]));
                }
            }
        }
        pos.push(assigned);
        reps.push(live);
    }
    let mut cells = Vec::new();
    let mut boundary = std::collections::BTreeMap::new();
    for (i, d) in cx.degrees().enumerate() {
        cells.push(reps[i].iter().map(|&b| cx.cells(d)[b].clone()).collect::<Vec<_>>());
        if i == 0 {
            continue;
        }
        let bd = cx.boundary_ref(d).expect("degree in range");
        let cols = reps[i]
            .iter()
            .map(|&b| {
                let mut acc: HashMap<usize, Rational> = HashMap::new();
                for (r, x) in bd.column(b) {
                    if let Some((k, f)) = pos[i - 1][*r] {
                        let y = if f < 0 { -x.clone() } else { x.clone() };
                        *acc.entry(k).or_insert_with(Rational::zero) += y;
                    }
                }
                let mut col: Vec<(usize, Rational)> = acc.into_iter().filter(|(_, v)| !v.is_zero()).collect();
                col.sort_by_key(|(r, _)| *r);
                col
            })
            .collect();
        boundary.insert(d, RationalMatrix::from_columns(reps[i - 1].len(), cols));
    }
    Ok(ChainComplex::new(cx.min_degree(), cells, boundary).expect("orbit sums form a subcomplex"))
}

/// Betti numbers of the `ψ`-isotypic part, via the orbit-sum complex.
pub fn isotypic_betti_chain(cx: &ChainComplex, action: &CellAction, psi: &[i8]) -> Result<Betti, TransferError> {
    Ok(isotypic_complex(cx, action, psi)?.betti())
}

/// Betti numbers of the `ψ`-isotypic part, via the homology projector.
pub fn isotypic_betti_homology(cx: &ChainComplex, action: &CellAction, psi: &[i8]) -> Result<Betti, TransferError> {
    let dims = cx
        .degrees()
        .map(|d| isotypic_dim_homology(cx, action, psi, d))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(Betti::new(cx.min_degree(), dims))
}
