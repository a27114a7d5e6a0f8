//! Chain complexes over the rationals, homology, relative homology of pairs and
//! induced maps.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{
    format_rational, kernel_basis, parse_rational, reduce_columns, Echelon, Rational,
    RationalMatrix, Vector,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainError {
    #[error("boundary composition is nonzero at degree {degree}")]
    BoundaryNotNilpotent { degree: i32 },
    #[error("duplicate cell label {label:?} in degree {degree}")]
    DuplicateLabel { degree: i32, label: String },
    #[error("boundary matrix in degree {degree} has shape {found:?}, expected {expected:?}")]
    ShapeMismatch { degree: i32, expected: (usize, usize), found: (usize, usize) },
    #[error("cell {cell} of degree {degree} has a boundary face outside the subcomplex")]
    NotASubcomplex { degree: i32, cell: usize },
    #[error("map does not commute with the boundary at degree {degree}")]
    NotChainMap { degree: i32 },
    #[error("malformed complex: {0}")]
    Malformed(String),
}

/// Betti numbers indexed by degree, starting at `min_degree`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Betti {
    pub min_degree: i32,
    pub dims: Vec<usize>,
}

impl Betti {
    pub fn new(min_degree: i32, dims: Vec<usize>) -> Self {
        Betti { min_degree, dims }
    }

    pub fn get(&self, degree: i32) -> usize {
        let i = degree - self.min_degree;
        if i < 0 {
            return 0;
        }
        self.dims.get(i as usize).copied().unwrap_or(0)
    }

    /// Nonzero `(degree, dim)` pairs.
    pub fn nonzero(&self) -> Vec<(i32, usize)> {
        self.dims
            .iter()
            .enumerate()
            .filter(|(_, d)| **d > 0)
            .map(|(i, d)| (self.min_degree + i as i32, *d))
            .collect()
    }

    /// Dimensions in degrees `0..=max`, trailing zeros removed (`[0]` stays as `[]`).
    pub fn from_zero(&self) -> Vec<usize> {
        let top = self.nonzero().last().map_or(-1, |(d, _)| *d);
        (0..=top).map(|d| self.get(d)).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.dims.iter().all(|d| *d == 0)
    }

    pub fn total(&self) -> usize {
        self.dims.iter().sum()
    }

    /// Alternating sum.
    pub fn euler(&self) -> i64 {
        self.nonzero()
            .iter()
            .map(|(d, k)| if d.rem_euclid(2) == 0 { *k as i64 } else { -(*k as i64) })
            .sum()
    }

    /// Betti numbers of a sphere of the given dimension (unreduced).
    pub fn sphere(n: usize) -> Self {
        let mut dims = vec![0; n + 1];
        dims[0] += 1;
        dims[n] += 1;
        Betti { min_degree: 0, dims }
    }

    pub fn point() -> Self {
        Betti { min_degree: 0, dims: vec![1] }
    }
}

/// A subset of the cells of a chain complex, degree by degree.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct CellSelection {
    pub cells: BTreeMap<i32, BTreeSet<usize>>,
}

impl CellSelection {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, degree: i32, cell: usize) {
        self.cells.entry(degree).or_default().insert(cell);
    }

    pub fn contains(&self, degree: i32, cell: usize) -> bool {
        self.cells.get(&degree).is_some_and(|s| s.contains(&cell))
    }

    pub fn len(&self) -> usize {
        self.cells.values().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Finite chain complex of rational vector spaces with labelled cells.
///
/// `boundary(d)` maps degree-`d` cells to degree-`(d-1)` cells. Degrees run over the
/// explicit range `min_degree..=max_degree`; degree -1 is allowed for augmented
/// complexes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainComplex {
    min_degree: i32,
    cells: Vec<Vec<String>>,
    // boundary[i] is the boundary out of degree min_degree + i
    boundary: Vec<RationalMatrix>,
}

impl ChainComplex {
    /// Builds and validates a complex. Missing boundary matrices are zero.
    pub fn new(
        min_degree: i32,
        cells: Vec<Vec<String>>,
        mut boundaries: BTreeMap<i32, RationalMatrix>,
    ) -> Result<Self, ChainError> {
        let cx = Self::assemble(min_degree, cells, &mut boundaries)?;
        cx.validate()?;
        Ok(cx)
    }

    fn assemble(
        min_degree: i32,
        cells: Vec<Vec<String>>,
        boundaries: &mut BTreeMap<i32, RationalMatrix>,
    ) -> Result<Self, ChainError> {
        for (i, labels) in cells.iter().enumerate() {
            let mut seen = HashSet::with_capacity(labels.len());
            for l in labels {
                if !seen.insert(l.as_str()) {
                    return Err(ChainError::DuplicateLabel {
                        degree: min_degree + i as i32,
                        label: l.clone(),
                    });
                }
            }
        }
        let mut boundary = Vec::with_capacity(cells.len());
        for i in 0..cells.len() {
            let d = min_degree + i as i32;
            let rows = if i == 0 { 0 } else { cells[i - 1].len() };
            let cols = cells[i].len();
            let m = boundaries.remove(&d).unwrap_or_else(|| RationalMatrix::zeros(rows, cols));
            if (m.rows(), m.cols()) != (rows, cols) {
                return Err(ChainError::ShapeMismatch {
                    degree: d,
                    expected: (rows, cols),
                    found: (m.rows(), m.cols()),
                });
            }
            boundary.push(m);
        }
        if let Some((&d, _)) = boundaries.iter().next() {
            return Err(ChainError::Malformed(format!("boundary given for absent degree {d}")));
        }
        Ok(ChainComplex { min_degree, cells, boundary })
    }

    fn validate(&self) -> Result<(), ChainError> {
        for i in 1..self.boundary.len() {
            let prod = self.boundary[i - 1]
                .mul(&self.boundary[i])
                .map_err(|e| ChainError::Malformed(e.to_string()))?;
            if !prod.is_zero() {
                return Err(ChainError::BoundaryNotNilpotent { degree: self.min_degree + i as i32 });
            }
        }
        Ok(())
    }

    pub fn min_degree(&self) -> i32 {
        self.min_degree
    }

    pub fn max_degree(&self) -> i32 {
        self.min_degree + self.cells.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.min_degree..=self.max_degree()
    }

    fn index(&self, degree: i32) -> Option<usize> {
        let i = degree - self.min_degree;
        (i >= 0 && (i as usize) < self.cells.len()).then_some(i as usize)
    }

    pub fn cells(&self, degree: i32) -> &[String] {
        self.index(degree).map_or(&[], |i| &self.cells[i])
    }

    pub fn num_cells(&self, degree: i32) -> usize {
        self.cells(degree).len()
    }

    pub fn total_cells(&self) -> usize {
        self.cells.iter().map(Vec::len).sum()
    }

    /// Boundary out of `degree`; a zero matrix of the right shape outside the range.
    pub fn boundary(&self, degree: i32) -> RationalMatrix {
        match self.index(degree) {
            Some(i) => self.boundary[i].clone(),
            None => RationalMatrix::zeros(self.num_cells(degree - 1), self.num_cells(degree)),
        }
    }

    pub fn boundary_ref(&self, degree: i32) -> Option<&RationalMatrix> {
        self.index(degree).map(|i| &self.boundary[i])
    }

    /// Ranks of every boundary map, computed top-down with clearing.
    pub fn boundary_ranks(&self) -> BTreeMap<i32, usize> {
        let mut ranks = BTreeMap::new();
        let mut cleared: Option<Vec<bool>> = None;
        for i in (0..self.cells.len()).rev() {
            let d = self.min_degree + i as i32;
            let red = reduce_columns(&self.boundary[i], cleared.as_deref());
            ranks.insert(d, red.rank);
            let rows = self.boundary[i].rows();
            let mut next = vec![false; rows];
            for r in red.pivot_rows.iter().flatten() {
                next[*r] = true;
            }
            cleared = Some(next);
        }
        ranks
    }

    pub fn betti(&self) -> Betti {
        let ranks = self.boundary_ranks();
        let dims = self
            .degrees()
            .map(|d| {
                let n = self.num_cells(d);
                let out = ranks.get(&d).copied().unwrap_or(0);
                let inc = ranks.get(&(d + 1)).copied().unwrap_or(0);
                n - out - inc
            })
            .collect();
        Betti { min_degree: self.min_degree, dims }
    }

    /// Alternating sum of cell counts.
    pub fn euler_characteristic(&self) -> i64 {
        self.degrees()
            .map(|d| {
                let n = self.num_cells(d) as i64;
                if d.rem_euclid(2) == 0 {
                    n
                } else {
                    -n
                }
            })
            .sum()
    }

    /// Adds a degree -1 cell with every vertex mapping to it. The result computes reduced
    /// homology. Requires `min_degree == 0`.
    pub fn augmented(&self) -> Result<ChainComplex, ChainError> {
        if self.min_degree != 0 {
            return Err(ChainError::Malformed("augmentation needs degree-0 start".into()));
        }
        let mut cells = vec![vec!["()".to_string()]];
        cells.extend(self.cells.iter().cloned());
        let mut b = BTreeMap::new();
        let n0 = self.num_cells(0);
        b.insert(0, RationalMatrix::from_triplets(1, n0, (0..n0).map(|c| (0, c, Rational::one()))));
        for (i, m) in self.boundary.iter().enumerate().skip(1) {
            b.insert(i as i32, m.clone());
        }
        let cx = Self::assemble(-1, cells, &mut b)?;
        cx.validate()?;
        Ok(cx)
    }

    /// Reduced Betti numbers (degree -1 included, nonzero only for the empty complex).
    pub fn reduced_betti(&self) -> Result<Betti, ChainError> {
        Ok(self.augmented()?.betti())
    }

    /// Checks that `sub` is closed under taking boundary faces.
    pub fn check_subcomplex(&self, sub: &CellSelection) -> Result<(), ChainError> {
        for (&d, set) in &sub.cells {
            let Some(m) = self.boundary_ref(d) else {
                if set.iter().any(|&c| c >= self.num_cells(d)) || !set.is_empty() {
                    return Err(ChainError::Malformed(format!("no cells in degree {d}")));
                }
                continue;
            };
            for &c in set {
                if c >= m.cols() {
                    return Err(ChainError::Malformed(format!("cell {c} out of range in degree {d}")));
                }
                if m.column(c).iter().any(|(r, _)| !sub.contains(d - 1, *r)) {
                    return Err(ChainError::NotASubcomplex { degree: d, cell: c });
                }
            }
        }
        Ok(())
    }

    /// The quotient complex `C / A`, realized by deleting the cells of `A`.
    pub fn quotient(&self, sub: &CellSelection) -> Result<ChainComplex, ChainError> {
        self.check_subcomplex(sub)?;
        let keep: Vec<Vec<usize>> = self
            .degrees()
            .map(|d| (0..self.num_cells(d)).filter(|&c| !sub.contains(d, c)).collect())
            .collect();
        let cells: Vec<Vec<String>> = keep
            .iter()
            .enumerate()
            .map(|(i, ks)| ks.iter().map(|&c| self.cells[i][c].clone()).collect())
            .collect();
        let mut b = BTreeMap::new();
        for i in 0..self.cells.len() {
            let rows: &[usize] = if i == 0 { &[] } else { &keep[i - 1] };
            b.insert(self.min_degree + i as i32, self.boundary[i].submatrix(rows, &keep[i]));
        }
        let cx = Self::assemble(self.min_degree, cells, &mut b)?;
        Ok(cx)
    }

    /// The cochain complex `Hom(C, Q)` as a chain complex in negated degrees: degree
    /// `-k` holds the cochains on `k`-cells and `boundary(-k)` is `boundary(k+1)` transposed.
    pub fn dual(&self) -> ChainComplex {
        let top = self.max_degree();
        let cells: Vec<Vec<String>> = self.cells.iter().rev().cloned().collect();
        let mut b = BTreeMap::new();
        for d in self.min_degree..top {
            b.insert(-d, self.boundary(d + 1).transpose());
        }
        Self::assemble(-top, cells, &mut b).expect("transposed boundaries have matching shapes")
    }

    /// Homology of the pair `(C, A)`.
    pub fn relative_betti(&self, sub: &CellSelection) -> Result<Betti, ChainError> {
        Ok(self.quotient(sub)?.betti())
    }

    /// Deterministic homology basis in one degree.
    pub fn homology_basis(&self, degree: i32) -> HomologyBasis {
        let n = self.num_cells(degree);
        let mut ech = Echelon::new(n);
        let up = self.boundary(degree + 1);
        for c in 0..up.cols() {
            let mut v = vec![Rational::zero(); n];
            for (r, x) in up.column(c) {
                v[*r] = x.clone();
            }
            ech.insert(&v);
        }
        let boundary_rank = ech.rank();
        let mut reps = Vec::new();
        for z in kernel_basis(&self.boundary(degree)) {
            if ech.insert(&z) {
                reps.push(z);
            }
        }
        HomologyBasis { degree, boundary_rank, echelon: ech, reps }
    }

    pub fn to_json(&self) -> ChainComplexJson {
        let mut cells = BTreeMap::new();
        let mut boundary = BTreeMap::new();
        for d in self.degrees() {
            cells.insert(d.to_string(), self.cells(d).to_vec());
            let m = self.boundary_ref(d).expect("degree in range");
            if !m.is_zero() {
                let entries = m
                    .entries()
                    .map(|(r, c, v)| (r, c, JsonScalar::Text(format_rational(v))))
                    .collect();
                boundary.insert(d.to_string(), entries);
            }
        }
        ChainComplexJson { cells, boundary }
    }

    pub fn from_json(json: &ChainComplexJson) -> Result<Self, ChainError> {
        let mut by_degree = BTreeMap::new();
        for (k, v) in &json.cells {
            let d: i32 =
                k.trim().parse().map_err(|_| ChainError::Malformed(format!("bad degree {k:?}")))?;
            by_degree.insert(d, v.clone());
        }
        let (Some(&lo), Some(&hi)) = (by_degree.keys().next(), by_degree.keys().last()) else {
            return Err(ChainError::Malformed("no cells".into()));
        };
        let cells: Vec<Vec<String>> =
            (lo..=hi).map(|d| by_degree.get(&d).cloned().unwrap_or_default()).collect();
        let count = |d: i32| by_degree.get(&d).map_or(0, Vec::len);
        let mut b = BTreeMap::new();
        for (k, entries) in &json.boundary {
            let d: i32 =
                k.trim().parse().map_err(|_| ChainError::Malformed(format!("bad degree {k:?}")))?;
            let (rows, cols) = (if d == lo { 0 } else { count(d - 1) }, count(d));
            let mut trip = Vec::with_capacity(entries.len());
            for (r, c, v) in entries {
                if *r >= rows || *c >= cols {
                    return Err(ChainError::Malformed(format!(
                        "boundary entry ({r},{c}) out of range in degree {d}"
                    )));
                }
                let q = v.to_rational().ok_or_else(|| {
                    ChainError::Malformed(format!("bad coefficient in degree {d}"))
                })?;
                trip.push((*r, *c, q));
            }
            b.insert(d, RationalMatrix::from_triplets(rows, cols, trip));
        }
        ChainComplex::new(lo, cells, b)
    }
}

/// A homology basis built from (boundaries, then cycle representatives) in one echelon.
#[derive(Debug, Clone)]
pub struct HomologyBasis {
    pub degree: i32,
    boundary_rank: usize,
    echelon: Echelon,
    pub reps: Vec<Vector>,
}

impl HomologyBasis {
    pub fn dim(&self) -> usize {
        self.reps.len()
    }

    /// Coordinates of the class of a cycle in terms of `reps`; `None` if `z` is not a
    /// cycle of the right degree.
    pub fn coordinates(&self, z: &[Rational]) -> Option<Vector> {
        let c = self.echelon.coordinates(z)?;
        Some(c[self.boundary_rank..].to_vec())
    }
}

/// A chain map between two complexes, checked against both boundaries.
#[derive(Debug, Clone)]
pub struct ChainMap {
    components: BTreeMap<i32, RationalMatrix>,
}

impl ChainMap {
    pub fn new(
        source: &ChainComplex,
        target: &ChainComplex,
        components: BTreeMap<i32, RationalMatrix>,
    ) -> Result<Self, ChainError> {
        let lo = source.min_degree().min(target.min_degree());
        let hi = source.max_degree().max(target.max_degree());
        let comp = |d: i32| {
            components.get(&d).cloned().unwrap_or_else(|| {
                RationalMatrix::zeros(target.num_cells(d), source.num_cells(d))
            })
        };
        for d in lo..=hi {
            let f = comp(d);
            if (f.rows(), f.cols()) != (target.num_cells(d), source.num_cells(d)) {
                return Err(ChainError::ShapeMismatch {
                    degree: d,
                    expected: (target.num_cells(d), source.num_cells(d)),
                    found: (f.rows(), f.cols()),
                });
            }
            let left = target.boundary(d).mul(&f).map_err(|e| ChainError::Malformed(e.to_string()))?;
            let right = comp(d - 1)
                .mul(&source.boundary(d))
                .map_err(|e| ChainError::Malformed(e.to_string()))?;
            if left != right {
                return Err(ChainError::NotChainMap { degree: d });
            }
        }
        Ok(ChainMap { components })
    }

    pub fn component(&self, degree: i32) -> Option<&RationalMatrix> {
        self.components.get(&degree)
    }
}

/// Matrix of `f_*` on `H_degree`, in the deterministic bases of [`ChainComplex::homology_basis`].
pub fn induced_map(
    source: &ChainComplex,
    target: &ChainComplex,
    f: &ChainMap,
    degree: i32,
) -> RationalMatrix {
    let hs = source.homology_basis(degree);
    let ht = target.homology_basis(degree);
    induced_map_in_bases(&hs, &ht, f.component(degree), target.num_cells(degree))
}

pub(crate) fn induced_map_in_bases(
    hs: &HomologyBasis,
    ht: &HomologyBasis,
    comp: Option<&RationalMatrix>,
    target_cells: usize,
) -> RationalMatrix {
    let mut cols = Vec::with_capacity(hs.dim());
    for z in &hs.reps {
        let image = match comp {
            Some(m) => m.mul_vector(z).expect("component shape checked"),
            None => vec![Rational::zero(); target_cells],
        };
        let coords = ht.coordinates(&image).expect("chain maps send cycles to cycles");
        cols.push(coords.into_iter().enumerate().filter(|(_, v)| !v.is_zero()).collect());
    }
    RationalMatrix::from_columns(ht.dim(), cols)
}

/// Boundary coefficient as it appears in JSON: a `"p/q"` string or a plain integer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum JsonScalar {
    Int(i64),
    Text(String),
}

impl JsonScalar {
    pub fn to_rational(&self) -> Option<Rational> {
        match self {
            JsonScalar::Int(n) => Some(crate::linalg::rational(*n)),
            JsonScalar::Text(s) => parse_rational(s),
        }
    }
}

/// `{"cells": {"0": [...], ...}, "boundary": {"1": [[row, col, "p/q"], ...]}}`
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainComplexJson {
    pub cells: BTreeMap<String, Vec<String>>,
    #[serde(default)]
    pub boundary: BTreeMap<String, Vec<(usize, usize, JsonScalar)>>,
}
