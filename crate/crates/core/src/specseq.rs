//! Spectral sequence of a filtered chain complex, computed on explicit subquotient bases,
//! plus the page algebra for E^1 data given only by dimensions and ranks.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::chain::{Betti, ChainComplex, ChainComplexJson, ChainError};
use crate::linalg::{kernel_basis, rank, Echelon, Rational, RationalMatrix, Vector};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SpecSeqError {
    #[error("cell {cell} in degree {degree} has a boundary face of higher filtration level")]
    FiltrationNotMonotone { degree: i32, cell: usize },
    #[error("level map has the wrong shape in degree {0}")]
    LevelShape(i32),
    #[error("rank {rank} of the differential at ({p},{q}) on page {r} is infeasible")]
    InfeasibleRank { r: usize, p: i32, q: i32, rank: usize },
    #[error("page {r}: the differential at ({p},{q}) may be nonzero but no rank was supplied")]
    UndeterminedDifferential { r: usize, p: i32, q: i32 },
    #[error("page {r} fails an internal consistency check: {what}")]
    Inconsistent { r: usize, what: String },
    #[error(transparent)]
    Chain(#[from] ChainError),
    #[error("malformed input: {0}")]
    Malformed(String),
}

/// A chain complex with a filtration level on every cell.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FilteredChainComplex {
    total: ChainComplex,
    level: Vec<Vec<i32>>,
}

impl FilteredChainComplex {
    pub fn new(total: ChainComplex, level: Vec<Vec<i32>>) -> Result<Self, SpecSeqError> {
        let degrees: Vec<i32> = total.degrees().collect();
        if level.len() != degrees.len() {
            return Err(SpecSeqError::LevelShape(total.min_degree()));
        }
        for (i, &d) in degrees.iter().enumerate() {
            if level[i].len() != total.num_cells(d) {
                return Err(SpecSeqError::LevelShape(d));
            }
            if i == 0 {
                continue;
            }
            let b = total.boundary_ref(d).expect("degree in range");
            for c in 0..b.cols() {
                if b.column(c).iter().any(|(r, _)| level[i - 1][*r] > level[i][c]) {
                    return Err(SpecSeqError::FiltrationNotMonotone { degree: d, cell: c });
                }
            }
        }
        Ok(FilteredChainComplex { total, level })
    }

    /// Filtration by dimension: a `d`-cell sits at level `d + shift`.
    pub fn skeletal(total: ChainComplex, shift: i32) -> Self {
        let level = total.degrees().map(|d| vec![d + shift; total.num_cells(d)]).collect();
        FilteredChainComplex::new(total, level).expect("skeletal filtration is monotone")
    }

    pub fn total(&self) -> &ChainComplex {
        &self.total
    }

    pub fn level(&self, degree: i32, cell: usize) -> i32 {
        self.level[(degree - self.total.min_degree()) as usize][cell]
    }

    pub fn levels(&self, degree: i32) -> &[i32] {
        let i = degree - self.total.min_degree();
        if i < 0 || i as usize >= self.level.len() {
            return &[];
        }
        &self.level[i as usize]
    }

    /// `(min, max)` level over all cells, if any.
    pub fn level_range(&self) -> Option<(i32, i32)> {
        let all = self.level.iter().flatten();
        Some((*all.clone().min()?, *all.max()?))
    }

    pub fn to_json(&self) -> FilteredJson {
        let level = self.total.degrees().map(|d| (d.to_string(), self.levels(d).to_vec())).collect();
        FilteredJson { complex: self.total.to_json(), level }
    }

    pub fn from_json(json: &FilteredJson) -> Result<Self, SpecSeqError> {
        let total = ChainComplex::from_json(&json.complex)?;
        let level = total
            .degrees()
            .map(|d| json.level.get(&d.to_string()).cloned().unwrap_or_default())
            .collect();
        FilteredChainComplex::new(total, level)
    }
}

/// Chain-complex JSON with an added `"level": {"d": [...]}` map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FilteredJson {
    #[serde(flatten)]
    pub complex: ChainComplexJson,
    pub level: BTreeMap<String, Vec<i32>>,
}

/// One differential `d^r: E^r_{p,q} -> E^r_{p-r, q+r-1}`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Differential {
    pub source: (i32, i32),
    pub target: (i32, i32),
    pub rank: usize,
    /// Matrix in the page's subquotient bases, when computed from a complex.
    pub matrix: Option<RationalMatrix>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Page {
    pub r: usize,
    /// Nonzero entries only.
    pub dims: BTreeMap<(i32, i32), usize>,
    /// Nonzero differentials only, keyed by source.
    pub differentials: BTreeMap<(i32, i32), Differential>,
}

impl Page {
    pub fn dim(&self, p: i32, q: i32) -> usize {
        self.dims.get(&(p, q)).copied().unwrap_or(0)
    }

    pub fn rank_out(&self, p: i32, q: i32) -> usize {
        self.differentials.get(&(p, q)).map_or(0, |d| d.rank)
    }

    pub fn rank_in(&self, p: i32, q: i32) -> usize {
        let r = self.r as i32;
        self.rank_out(p + r, q - r + 1)
    }

    /// Dimensions of the next page, from this page's dims and ranks.
    pub fn next_dims(&self) -> BTreeMap<(i32, i32), usize> {
        self.dims
            .iter()
            .map(|(&(p, q), &n)| ((p, q), n - self.rank_out(p, q) - self.rank_in(p, q)))
            .filter(|(_, n)| *n > 0)
            .collect()
    }

    /// `Σ_p dim E_{p, n-p}` by total degree `n`.
    pub fn totals(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for (&(p, q), &n) in &self.dims {
            *out.entry(p + q).or_insert(0) += n;
        }
        out
    }

    pub fn euler(&self) -> i64 {
        self.totals()
            .iter()
            .map(|(d, n)| if d.rem_euclid(2) == 0 { *n as i64 } else { -(*n as i64) })
            .sum()
    }

    pub fn has_nonzero_differential(&self) -> bool {
        !self.differentials.is_empty()
    }

    pub fn to_json(&self) -> PageJson {
        PageJson {
            r: self.r,
            dims: self.dims.iter().map(|(&(p, q), &n)| (format!("({p},{q})"), n)).collect(),
            differentials: self
                .differentials
                .values()
                .map(|d| DifferentialJson {
                    source: format!("({},{})", d.source.0, d.source.1),
                    target: format!("({},{})", d.target.0, d.target.1),
                    rank: d.rank,
                    matrix: d.matrix.as_ref().map(|m| {
                        m.entries().map(|(r, c, v)| (r, c, crate::linalg::format_rational(v))).collect()
                    }),
                })
                .collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PageJson {
    pub r: usize,
    pub dims: BTreeMap<String, usize>,
    pub differentials: Vec<DifferentialJson>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DifferentialJson {
    pub source: String,
    pub target: String,
    pub rank: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub matrix: Option<Vec<(usize, usize, String)>>,
}

/// Parses `"(p,q)"`.
pub fn parse_bidegree(s: &str) -> Option<(i32, i32)> {
    let inner = s.trim().strip_prefix('(')?.strip_suffix(')')?;
    let (a, b) = inner.split_once(',')?;
    Some((a.trim().parse().ok()?, b.trim().parse().ok()?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpectralSequence {
    /// Pages `E^1, E^2, ...` through the last one carrying a nonzero differential, then
    /// the first page after it (which equals E^∞).
    pub pages: Vec<Page>,
    pub infinity: BTreeMap<(i32, i32), usize>,
    /// First page from which every differential vanishes.
    pub stable_from: usize,
    /// Number of filtration levels; pages beyond it cannot carry differentials.
    pub filtration_length: usize,
}

impl SpectralSequence {
    pub fn infinity_totals(&self) -> BTreeMap<i32, usize> {
        let mut out = BTreeMap::new();
        for (&(p, q), &n) in &self.infinity {
            *out.entry(p + q).or_insert(0) += n;
        }
        out
    }

    pub fn e1(&self) -> &Page {
        &self.pages[0]
    }
}

// Subspace of C_n given by an echelon of a spanning set.
fn span(vectors: &[Vector], dim: usize) -> Echelon {
    let mut e = Echelon::new(dim);
    for v in vectors {
        e.insert(v);
    }
    e
}

struct Subquotient {
    // echelon of the denominator, then representatives appended
    echelon: Echelon,
    denominator_rank: usize,
    reps: Vec<Vector>,
}

impl Subquotient {
    fn coordinates(&self, v: &[Rational]) -> Option<Vector> {
        let c = self.echelon.coordinates(v)?;
        Some(c[self.denominator_rank..].to_vec())
    }
}

struct Engine<'a> {
    f: &'a FilteredChainComplex,
}

impl Engine<'_> {
    fn n_cells(&self, n: i32) -> usize {
        self.f.total.num_cells(n)
    }

    /// `Z^r_p` in degree `n`: chains of level `<= p` whose boundary has level `<= p - r`.
    fn z(&self, r: i32, p: i32, n: i32) -> Vec<Vector> {
        let cells = self.n_cells(n);
        let lv = self.f.levels(n);
        let cols: Vec<usize> = (0..cells).filter(|&c| lv[c] <= p).collect();
        if cols.is_empty() {
            return Vec::new();
        }
        let lower = self.f.levels(n - 1);
        let rows: Vec<usize> = (0..self.n_cells(n - 1)).filter(|&x| lower[x] > p - r).collect();
        let b = self.f.total.boundary(n);
        let m = b.submatrix(&rows, &cols);
        kernel_basis(&m)
            .into_iter()
            .map(|k| {
                let mut v = vec![Rational::zero(); cells];
                for (i, &c) in cols.iter().enumerate() {
                    v[c] = k[i].clone();
                }
                v
            })
            .collect()
    }

    fn boundary_of(&self, n: i32, v: &[Rational]) -> Vector {
        self.f.total.boundary(n).mul_vector(v).expect("shape")
    }

    /// `E^r_{p}` in degree `n`.
    fn subquotient(&self, r: i32, p: i32, n: i32) -> Subquotient {
        let dim = self.n_cells(n);
        let num = self.z(r, p, n);
        let mut den = self.z(r - 1, p - 1, n);
        for c in self.z(r - 1, p + r - 1, n + 1) {
            den.push(self.boundary_of(n + 1, &c));
        }
        let mut echelon = span(&den, dim);
        let denominator_rank = echelon.rank();
        let mut reps = Vec::new();
        for z in num {
            if echelon.insert(&z) {
                reps.push(z);
            }
        }
        Subquotient { echelon, denominator_rank, reps }
    }
}

/// All pages of the spectral sequence of `f`, checked for `d∘d = 0` and for each page
/// being the homology of the previous one.
pub fn pages(f: &FilteredChainComplex) -> Result<SpectralSequence, SpecSeqError> {
    let Some((lo, hi)) = f.level_range() else {
        return Ok(SpectralSequence {
            pages: vec![Page { r: 1, dims: BTreeMap::new(), differentials: BTreeMap::new() }],
            infinity: BTreeMap::new(),
            stable_from: 1,
            filtration_length: 0,
        });
    };
    let eng = Engine { f };
    let degrees: Vec<i32> = f.total.degrees().collect();
    let last_r = (hi - lo + 1) as usize;
    let mut all = Vec::new();
    for r in 1..=last_r + 1 {
        let ri = r as i32;
        let mut sq: BTreeMap<(i32, i32), Subquotient> = BTreeMap::new();
        for p in lo..=hi {
            for &n in &degrees {
                let s = eng.subquotient(ri, p, n);
                if !s.reps.is_empty() {
                    sq.insert((p, n - p), s);
                }
            }
        }
        let mut differentials = BTreeMap::new();
        for (&(p, q), s) in &sq {
            let target = (p - ri, q + ri - 1);
            let Some(t) = sq.get(&target) else { continue };
            let n = p + q;
            let cols: Vec<Vec<(usize, Rational)>> = s
                .reps
                .iter()
                .map(|c| {
                    let img = eng.boundary_of(n, c);
                    let coords = t.coordinates(&img).ok_or_else(|| SpecSeqError::Inconsistent {
                        r,
                        what: format!("boundary of a class at ({p},{q}) leaves Z^r"),
                    })?;
                    Ok(coords.into_iter().enumerate().filter(|(_, x)| !x.is_zero()).collect())
                })
                .collect::<Result<_, SpecSeqError>>()?;
            let m = RationalMatrix::from_columns(t.reps.len(), cols);
            let rk = rank(&m);
            if rk > 0 {
                differentials.insert((p, q), Differential { source: (p, q), target, rank: rk, matrix: Some(m) });
            }
        }
        let dims = sq.iter().map(|(k, s)| (*k, s.reps.len())).collect();
        let page = Page { r, dims, differentials };
        check_square_zero(&page)?;
        if let Some(prev) = all.last() {
            let prev: &Page = prev;
            if prev.next_dims() != page.dims {
                return Err(SpecSeqError::Inconsistent { r, what: "page is not the homology of the previous page".into() });
            }
            if prev.euler() != page.euler() {
                return Err(SpecSeqError::Inconsistent { r, what: "Euler characteristic changed".into() });
            }
        }
        all.push(page);
    }
    let infinity = all.last().expect("at least one page").dims.clone();
    let last_nonzero = all.iter().rposition(Page::has_nonzero_differential);
    let stable_from = last_nonzero.map_or(1, |i| i + 2);
    all.truncate(stable_from);
    Ok(SpectralSequence { pages: all, infinity, stable_from, filtration_length: last_r })
}

fn check_square_zero(page: &Page) -> Result<(), SpecSeqError> {
    for d in page.differentials.values() {
        if let Some(next) = page.differentials.get(&d.target) {
            if let (Some(a), Some(b)) = (&d.matrix, &next.matrix) {
                if !b.mul(a).map_err(|e| SpecSeqError::Malformed(e.to_string()))?.is_zero() {
                    return Err(SpecSeqError::Inconsistent { r: page.r, what: format!("d∘d ≠ 0 at {:?}", d.source) });
                }
            }
        }
    }
    Ok(())
}

/// Convergence audit: per total degree, `Σ_p dim E^∞` against `dim H_n(total)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub rows: Vec<(i32, usize, usize)>,
    pub violations: Vec<i32>,
}

impl ConvergenceReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

pub fn total_betti_check(f: &FilteredChainComplex, ss: &SpectralSequence) -> ConvergenceReport {
    let betti: Betti = f.total.betti();
    let totals = ss.infinity_totals();
    let mut rows = Vec::new();
    let mut violations = Vec::new();
    for n in f.total.degrees() {
        let e = totals.get(&n).copied().unwrap_or(0);
        let b = betti.get(n);
        if e != b {
            violations.push(n);
        }
        rows.push((n, e, b));
    }
    for &n in totals.keys() {
        if !f.total.degrees().contains(&n) {
            violations.push(n);
        }
    }
    ConvergenceReport { rows, violations }
}

/// Runs the page algebra on E^1 data with d^1 ranks only.
pub fn page_from_ledger(
    dims: &BTreeMap<(i32, i32), usize>,
    d1_ranks: &BTreeMap<(i32, i32), usize>,
) -> Result<Vec<Page>, SpecSeqError> {
    page_from_ledger_ranks(dims, &BTreeMap::from([(1, d1_ranks.clone())]))
}

/// Page algebra with ranks supplied per page (`ranks[r][(p,q)]` = rank of `d^r` out of
/// `(p,q)`). A differential whose source and target are both nonzero must have a
/// supplied rank; otherwise the result is undetermined and an error.
pub fn page_from_ledger_ranks(
    dims: &BTreeMap<(i32, i32), usize>,
    ranks: &BTreeMap<usize, BTreeMap<(i32, i32), usize>>,
) -> Result<Vec<Page>, SpecSeqError> {
    let dims: BTreeMap<(i32, i32), usize> = dims.iter().filter(|(_, n)| **n > 0).map(|(k, v)| (*k, *v)).collect();
    let span = match (dims.keys().map(|k| k.0).min(), dims.keys().map(|k| k.0).max()) {
        (Some(a), Some(b)) => (b - a) as usize,
        _ => 0,
    };
    let mut pages = Vec::new();
    let mut cur = dims;
    let mut r = 1usize;
    loop {
        let ri = r as i32;
        let given = ranks.get(&r).cloned().unwrap_or_default();
        let mut differentials = BTreeMap::new();
        for (&(p, q), &rk) in &given {
            let target = (p - ri, q + ri - 1);
            let src = cur.get(&(p, q)).copied().unwrap_or(0);
            let tgt = cur.get(&target).copied().unwrap_or(0);
            if rk > src.min(tgt) {
                return Err(SpecSeqError::InfeasibleRank { r, p, q, rank: rk });
            }
            if rk > 0 {
                differentials.insert((p, q), Differential { source: (p, q), target, rank: rk, matrix: None });
            }
        }
        for &(p, q) in cur.keys() {
            let target = (p - ri, q + ri - 1);
            if cur.contains_key(&target) && !given.contains_key(&(p, q)) {
                return Err(SpecSeqError::UndeterminedDifferential { r, p, q });
            }
        }
        let page = Page { r, dims: cur.clone(), differentials };
        for (&(p, q), &n) in &page.dims {
            if page.rank_out(p, q) + page.rank_in(p, q) > n {
                return Err(SpecSeqError::InfeasibleRank { r, p, q, rank: page.rank_out(p, q) });
            }
        }
        let next = page.next_dims();
        let done = r > span;
        pages.push(page);
        if done {
            break;
        }
        cur = next;
        r += 1;
    }
    Ok(pages)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simplicial::models::{octahedron, polygon};
    use crate::simplicial::{cone, SimplicialComplex};

    fn fig1() -> BTreeMap<(i32, i32), usize> {
        BTreeMap::from([((1, -1), 1), ((3, 5), 1), ((4, 5), 1), ((5, 8), 1)])
    }

    #[test]
    fn skeletal_octahedron() {
        let f = FilteredChainComplex::skeletal(octahedron().to_chain_complex(), 1);
        let ss = pages(&f).unwrap();
        let e1 = ss.e1();
        assert_eq!(e1.dims, BTreeMap::from([((1, -1), 6), ((2, -1), 12), ((3, -1), 8)]));
        assert_eq!(ss.infinity, BTreeMap::from([((1, -1), 1), ((3, -1), 1)]));
        assert!(total_betti_check(&f, &ss).passed());
        assert_eq!(ss.pages.len(), 2);
    }

    #[test]
    fn disc_relative_to_boundary() {
        let disc = cone(&polygon(6));
        let cx = disc.to_chain_complex();
        let circle: SimplicialComplex = polygon(6);
        let sel = disc.selection_of(&circle).unwrap();
        let level = cx
            .degrees()
            .map(|d| (0..cx.num_cells(d)).map(|c| if sel.contains(d, c) { 1 } else { 2 }).collect())
            .collect();
        let f = FilteredChainComplex::new(cx, level).unwrap();
        let ss = pages(&f).unwrap();
        assert_eq!(ss.e1().dims, BTreeMap::from([((1, -1), 1), ((1, 0), 1), ((2, 0), 1)]));
        assert_eq!(ss.e1().rank_out(2, 0), 1);
        assert_eq!(ss.infinity, BTreeMap::from([((1, -1), 1)]));
    }

    #[test]
    fn rejects_non_monotone_levels() {
        let cx = polygon(3).to_chain_complex();
        let level = vec![vec![2, 1, 1], vec![1, 1, 1]];
        assert!(matches!(FilteredChainComplex::new(cx, level), Err(SpecSeqError::FiltrationNotMonotone { .. })));
    }

    #[test]
    fn ledger_algebra() {
        let pages = page_from_ledger(&fig1(), &BTreeMap::from([((4, 5), 1)])).unwrap();
        let last = pages.last().unwrap();
        assert_eq!(pages[1].dims, BTreeMap::from([((1, -1), 1), ((5, 8), 1)]));
        assert_eq!(last.dims, pages[1].dims);
        let zero = page_from_ledger(&fig1(), &BTreeMap::from([((4, 5), 0)])).unwrap();
        assert_eq!(zero.last().unwrap().dims.len(), 4);
        assert!(page_from_ledger(&BTreeMap::new(), &BTreeMap::new()).unwrap().iter().all(|p| p.dims.is_empty()));
    }

    #[test]
    fn ledger_errors() {
        assert!(matches!(
            page_from_ledger(&fig1(), &BTreeMap::from([((4, 5), 2)])),
            Err(SpecSeqError::InfeasibleRank { .. })
        ));
        assert!(matches!(
            page_from_ledger(&fig1(), &BTreeMap::new()),
            Err(SpecSeqError::UndeterminedDifferential { r: 1, p: 4, q: 5 })
        ));
    }

    #[test]
    fn json_roundtrip() {
        let f = FilteredChainComplex::skeletal(polygon(4).to_chain_complex(), 1);
        let text = serde_json::to_string(&f.to_json()).unwrap();
        let back: FilteredJson = serde_json::from_str(&text).unwrap();
        assert_eq!(FilteredChainComplex::from_json(&back).unwrap(), f);
        assert_eq!(parse_bidegree("(4,-5)"), Some((4, -5)));
        let page = pages(&f).unwrap().e1().to_json();
        assert_eq!(page.dims["(1,-1)"], 4);
    }
}
