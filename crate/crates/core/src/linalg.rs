//! Exact sparse linear algebra over the rationals, plus integer Smith normal form.
//!
//! Nothing in here touches floating point. Ranks are computed by fraction-free
//! column reduction over the integers (columns are scaled to primitive integer
//! vectors first), which is exact and keeps boundary-matrix entries small.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational scalar used everywhere in the crate.
pub type Rational = BigRational;

/// Dense exact vector.
pub type Vector = Vec<Rational>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LinalgError {
    #[error("vector {index} of the subspace is not contained in the ambient span")]
    SubspaceNotContained { index: usize },
    #[error("dimension mismatch: expected length {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
}

pub fn rational(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"p/q"` or `"p"`.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().ok()?;
            let d: BigInt = d.trim().parse().ok()?;
            if d.is_zero() {
                None
            } else {
                Some(Rational::new(n, d))
            }
        }
        None => s.parse::<BigInt>().ok().map(Rational::from_integer),
    }
}

pub fn format_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Sparse rational matrix, stored column-major. Immutable once built.
#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    // sorted by row, no zeros
    columns: Vec<Vec<(usize, Rational)>>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalMatrix({}x{}, [", self.rows, self.cols)?;
        for (r, c, v) in self.entries() {
            write!(f, "({r},{c})={} ", format_rational(v))?;
        }
        write!(f, "])")
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    pub fn identity(n: usize) -> Self {
        let columns = (0..n).map(|i| vec![(i, Rational::one())]).collect();
        RationalMatrix { rows: n, cols: n, columns }
    }

    /// Builds a matrix from `(row, col, value)` triplets. Duplicate positions are summed.
    ///
    /// Panics if a position is out of range.
    pub fn from_triplets<I>(rows: usize, cols: usize, triplets: I) -> Self
    where
        I: IntoIterator<Item = (usize, usize, Rational)>,
    {
        let mut acc: Vec<BTreeMap<usize, Rational>> = vec![BTreeMap::new(); cols];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r},{c}) outside {rows}x{cols}");
            let slot = acc[c].entry(r).or_insert_with(Rational::zero);
            *slot += v;
        }
        let columns = acc
            .into_iter()
            .map(|m| m.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        RationalMatrix { rows, cols, columns }
    }

    /// Builds a matrix from sparse columns; entries within a column must have distinct rows.
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, Rational)>>) -> Self {
        let cols = columns.len();
        let columns = columns
            .into_iter()
            .map(|mut col| {
                col.retain(|(_, v)| !v.is_zero());
                col.sort_by_key(|(r, _)| *r);
                debug_assert!(col.windows(2).all(|w| w[0].0 != w[1].0));
                assert!(col.iter().all(|(r, _)| *r < rows));
                col
            })
            .collect();
        RationalMatrix { rows, cols, columns }
    }

    pub fn from_dense(rows: &[Vec<Rational>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let triplets = rows.iter().enumerate().flat_map(|(i, row)| {
            assert_eq!(row.len(), ncols);
            row.iter().enumerate().map(move |(j, v)| (i, j, v.clone()))
        });
        Self::from_triplets(nrows, ncols, triplets)
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let dense: Vec<Vec<Rational>> =
            rows.iter().map(|r| r.iter().map(|&x| rational(x)).collect()).collect();
        if dense.is_empty() {
            return Self::zeros(0, 0);
        }
        Self::from_dense(&dense)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn column(&self, c: usize) -> &[(usize, Rational)] {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        match self.columns[c].binary_search_by_key(&r, |(row, _)| *row) {
            Ok(i) => self.columns[c][i].1.clone(),
            Err(_) => Rational::zero(),
        }
    }

    /// Nonzero entries in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &Rational)> + '_ {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut out: Vec<Vec<(usize, Rational)>> = vec![Vec::new(); self.rows];
        for (r, c, v) in self.entries() {
            out[r].push((c, v.clone()));
        }
        RationalMatrix { rows: self.cols, cols: self.rows, columns: out }
    }

    pub fn mul(&self, other: &RationalMatrix) -> Result<RationalMatrix, LinalgError> {
        if self.cols != other.rows {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: other.rows });
        }
        let columns = other
            .columns
            .iter()
            .map(|col| {
                let mut acc: BTreeMap<usize, Rational> = BTreeMap::new();
                for (k, b) in col {
                    for (i, a) in &self.columns[*k] {
                        *acc.entry(*i).or_insert_with(Rational::zero) += a * b;
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        Ok(RationalMatrix { rows: self.rows, cols: other.cols, columns })
    }

    pub fn mul_vector(&self, v: &[Rational]) -> Result<Vector, LinalgError> {
        if v.len() != self.cols {
            return Err(LinalgError::DimensionMismatch { expected: self.cols, found: v.len() });
        }
        let mut out = vec![Rational::zero(); self.rows];
        for (c, x) in v.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (r, a) in &self.columns[c] {
                out[*r] += a * x;
            }
        }
        Ok(out)
    }

    pub fn to_dense(&self) -> Vec<Vector> {
        let mut out = vec![vec![Rational::zero(); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            out[r][c] = v.clone();
        }
        out
    }

    /// Keeps the listed rows and columns, in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> RationalMatrix {
        let mut row_map = vec![usize::MAX; self.rows];
        for (i, &r) in rows.iter().enumerate() {
            row_map[r] = i;
        }
        let columns = cols
            .iter()
            .map(|&c| {
                let mut col: Vec<(usize, Rational)> = self.columns[c]
                    .iter()
                    .filter(|(r, _)| row_map[*r] != usize::MAX)
                    .map(|(r, v)| (row_map[*r], v.clone()))
                    .collect();
                col.sort_by_key(|(r, _)| *r);
                col
            })
            .collect();
        RationalMatrix { rows: rows.len(), cols: cols.len(), columns }
    }
}

// ---------------------------------------------------------------------------
// Rank: fraction-free sparse column reduction.

type IntColumn = Vec<(usize, BigInt)>;

fn primitive_integer_column(col: &[(usize, Rational)]) -> IntColumn {
    let mut lcm = BigInt::one();
    for (_, v) in col {
        lcm = lcm.lcm(v.denom());
    }
    let mut out: IntColumn =
        col.iter().map(|(r, v)| (*r, (v * Rational::from_integer(lcm.clone())).to_integer())).collect();
    make_primitive(&mut out);
    out
}

fn make_primitive(col: &mut IntColumn) {
    let mut g = BigInt::zero();
    for (_, v) in col.iter() {
        g = g.gcd(v);
        if g.is_one() {
            return;
        }
    }
    if g > BigInt::one() {
        for (_, v) in col.iter_mut() {
            *v /= &g;
        }
    }
}

/// `a * x - b * y` on sparse integer columns, dropping zeros.
fn combine(a: &BigInt, x: &IntColumn, b: &BigInt, y: &IntColumn) -> IntColumn {
    let mut out = Vec::with_capacity(x.len() + y.len());
    let (mut i, mut j) = (0, 0);
    while i < x.len() || j < y.len() {
        let take = match (x.get(i), y.get(j)) {
            (Some((rx, _)), Some((ry, _))) => rx.cmp(ry),
            (Some(_), None) => std::cmp::Ordering::Less,
            (None, Some(_)) => std::cmp::Ordering::Greater,
            (None, None) => unreachable!(),
        };
        match take {
            std::cmp::Ordering::Less => {
                out.push((x[i].0, a * &x[i].1));
                i += 1;
            }
            std::cmp::Ordering::Greater => {
                out.push((y[j].0, -(b * &y[j].1)));
                j += 1;
            }
            std::cmp::Ordering::Equal => {
                let v = a * &x[i].1 - b * &y[j].1;
                if !v.is_zero() {
                    out.push((x[i].0, v));
                }
                i += 1;
                j += 1;
            }
        }
    }
    out
}

/// Result of reducing the columns of a matrix: rank and the pivot ("lowest") row of
/// every column that survived.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColumnReduction {
    pub rank: usize,
    /// `pivot_rows[c]` is the lowest nonzero row of reduced column `c`, if any.
    pub pivot_rows: Vec<Option<usize>>,
}

/// Column reduction in the style used for persistence computations: each column is
/// reduced against earlier columns until its lowest entry is not yet a pivot. Columns
/// flagged in `skip` are treated as already zero (clearing).
pub fn reduce_columns(m: &RationalMatrix, skip: Option<&[bool]>) -> ColumnReduction {
    let mut pivot_owner: Vec<Option<usize>> = vec![None; m.rows];
    let mut reduced: Vec<IntColumn> = Vec::with_capacity(m.cols);
    let mut pivot_rows = vec![None; m.cols];
    let mut rank = 0;
    for c in 0..m.cols {
        if skip.is_some_and(|s| s[c]) || m.columns[c].is_empty() {
            reduced.push(Vec::new());
            continue;
        }
        let mut col = primitive_integer_column(&m.columns[c]);
        while let Some(&(low, _)) = col.last() {
            match pivot_owner[low] {
                None => break,
                Some(k) => {
                    let pk = &reduced[k].last().expect("pivot column is nonempty").1;
                    let a = &col.last().unwrap().1;
                    let g = pk.gcd(a);
                    let (mult_col, mult_piv) = (pk / &g, a / &g);
                    col = combine(&mult_col, &col, &mult_piv, &reduced[k]);
                    make_primitive(&mut col);
                }
            }
        }
        if let Some(&(low, _)) = col.last() {
            pivot_owner[low] = Some(c);
            pivot_rows[c] = Some(low);
            rank += 1;
        }
        reduced.push(col);
    }
    ColumnReduction { rank, pivot_rows }
}

/// Rank over the rationals.
pub fn rank(m: &RationalMatrix) -> usize {
    // Reduce along the smaller dimension.
    if m.rows < m.cols {
        reduce_columns(&m.transpose(), None).rank
    } else {
        reduce_columns(m, None).rank
    }
}

// ---------------------------------------------------------------------------
// Dense echelon machinery for kernels, spans and coordinates.

/// Incrementally built echelon basis of a subspace of `Q^n`.
///
/// Every stored row remembers how it was obtained from the accepted generators, so
/// membership tests can also return coordinates.
#[derive(Debug, Clone)]
pub struct Echelon {
    dim: usize,
    rows: Vec<Vector>,
    pivots: Vec<usize>,
    // combination of accepted generators that produced each row
    combos: Vec<Vector>,
}

impl Echelon {
    pub fn new(dim: usize) -> Self {
        Echelon { dim, rows: Vec::new(), pivots: Vec::new(), combos: Vec::new() }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the basis; returns the residual and the generator
    /// coefficients `c` with `v = residual + sum c_i g_i`.
    pub fn reduce(&self, v: &[Rational]) -> (Vector, Vector) {
        assert_eq!(v.len(), self.dim);
        let mut res = v.to_vec();
        let mut coeffs = vec![Rational::zero(); self.rows.len()];
        for (i, row) in self.rows.iter().enumerate() {
            let p = self.pivots[i];
            if res[p].is_zero() {
                continue;
            }
            let f = res[p].clone();
            for (j, x) in row.iter().enumerate() {
                if !x.is_zero() {
                    res[j] -= &f * x;
                }
            }
            for (j, x) in self.combos[i].iter().enumerate() {
                if !x.is_zero() {
                    coeffs[j] += &f * x;
                }
            }
        }
        (res, coeffs)
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).0.iter().all(Zero::is_zero)
    }

    /// Coordinates of `v` in terms of the accepted generators, if `v` lies in the span.
    pub fn coordinates(&self, v: &[Rational]) -> Option<Vector> {
        let (res, coeffs) = self.reduce(v);
        res.iter().all(Zero::is_zero).then_some(coeffs)
    }

    /// Adds `v`; returns `false` (and changes nothing) if it is already in the span.
    pub fn insert(&mut self, v: &[Rational]) -> bool {
        let (mut res, coeffs) = self.reduce(v);
        let Some(p) = res.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let k = self.rows.len();
        // new row = (v - sum coeffs_i g_i) / res[p], expressed on generators 0..=k
        let inv = Rational::one() / &res[p];
        for x in res.iter_mut() {
            *x *= &inv;
        }
        let mut combo: Vector = coeffs.iter().map(|c| -(c * &inv)).collect();
        combo.push(inv);
        for c in self.combos.iter_mut() {
            c.push(Rational::zero());
        }
        // keep fully reduced: clear column p from earlier rows
        for i in 0..k {
            if self.rows[i][p].is_zero() {
                continue;
            }
            let f = self.rows[i][p].clone();
            for j in 0..self.dim {
                if !res[j].is_zero() {
                    let t = &f * &res[j];
                    self.rows[i][j] -= t;
                }
            }
            for j in 0..=k {
                if !combo[j].is_zero() {
                    let t = &f * &combo[j];
                    self.combos[i][j] -= t;
                }
            }
        }
        self.rows.push(res);
        self.pivots.push(p);
        self.combos.push(combo);
        true
    }
}

/// Exact basis of `{v : M v = 0}`; its size is `cols - rank(M)`.
pub fn kernel_basis(m: &RationalMatrix) -> Vec<Vector> {
    // RREF of M by rows.
    let t = m.transpose();
    let mut ech = Echelon::new(m.cols);
    for r in 0..m.rows {
        let mut row = vec![Rational::zero(); m.cols];
        for (c, v) in t.column(r) {
            row[*c] = v.clone();
        }
        ech.insert(&row);
    }
    // sort rows by pivot so each pivot row is unique in its column
    let mut order: Vec<usize> = (0..ech.rows.len()).collect();
    order.sort_by_key(|&i| ech.pivots[i]);
    let pivot_set: Vec<Option<usize>> = {
        let mut s = vec![None; m.cols];
        for &i in &order {
            s[ech.pivots[i]] = Some(i);
        }
        s
    };
    let mut basis = Vec::new();
    for free in 0..m.cols {
        if pivot_set[free].is_some() {
            continue;
        }
        let mut v = vec![Rational::zero(); m.cols];
        v[free] = Rational::one();
        for &i in &order {
            let coeff = &ech.rows[i][free];
            if !coeff.is_zero() {
                v[ech.pivots[i]] = -coeff.clone();
            }
        }
        basis.push(v);
    }
    basis
}

/// Rank of a list of vectors of a common length.
pub fn span_rank(vectors: &[Vector], dim: usize) -> usize {
    let mut ech = Echelon::new(dim);
    for v in vectors {
        ech.insert(v);
    }
    ech.rank()
}

/// `dim span(ambient) - dim span(sub)`, after checking that `sub` lies in `span(ambient)`.
pub fn quotient_dim(ambient: &[Vector], sub: &[Vector]) -> Result<usize, LinalgError> {
    let dim = ambient.first().or(sub.first()).map_or(0, Vec::len);
    for v in ambient.iter().chain(sub) {
        if v.len() != dim {
            return Err(LinalgError::DimensionMismatch { expected: dim, found: v.len() });
        }
    }
    let mut amb = Echelon::new(dim);
    for v in ambient {
        amb.insert(v);
    }
    for (index, v) in sub.iter().enumerate() {
        if !amb.contains(v) {
            return Err(LinalgError::SubspaceNotContained { index });
        }
    }
    Ok(amb.rank() - span_rank(sub, dim))
}

// ---------------------------------------------------------------------------
// Smith normal form.

/// Dense integer matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Vec<BigInt>>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix { rows, cols, data: vec![vec![BigInt::zero(); cols]; rows] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.data[i][i] = BigInt::one();
        }
        m
    }

    pub fn from_i64(rows: &[&[i64]]) -> Self {
        let data: Vec<Vec<BigInt>> =
            rows.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect();
        let cols = data.first().map_or(0, Vec::len);
        IntMatrix { rows: data.len(), cols, data }
    }

    /// Converts a rational matrix with integral entries; `None` if some entry is fractional.
    pub fn from_rational(m: &RationalMatrix) -> Option<Self> {
        let mut out = Self::zeros(m.rows(), m.cols());
        for (r, c, v) in m.entries() {
            if !v.is_integer() {
                return None;
            }
            out.data[r][c] = v.to_integer();
        }
        Some(out)
    }

    pub fn mul(&self, other: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, other.rows);
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                if self.data[i][k].is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    if !other.data[k][j].is_zero() {
                        out.data[i][j] += &self.data[i][k] * &other.data[k][j];
                    }
                }
            }
        }
        out
    }

    /// Determinant by fraction-free (Bareiss) elimination.
    pub fn determinant(&self) -> BigInt {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        if n == 0 {
            return BigInt::one();
        }
        let mut a = self.data.clone();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n - 1 {
            if a[k][k].is_zero() {
                match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                    Some(i) => {
                        a.swap(i, k);
                        sign = -sign;
                    }
                    None => return BigInt::zero(),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    a[i][j] = (&a[i][j] * &a[k][k] - &a[i][k] * &a[k][j]) / &prev;
                }
            }
            prev = a[k][k].clone();
        }
        sign * a[n - 1][n - 1].clone()
    }
}

/// `U * M * V = D` with `D` diagonal, `d_1 | d_2 | ...`, and `U`, `V` unimodular.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SmithForm {
    pub d: IntMatrix,
    pub u: IntMatrix,
    pub v: IntMatrix,
}

impl SmithForm {
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.d.rows.min(self.d.cols)).map(|i| self.d.data[i][i].clone()).collect()
    }

    pub fn rank(&self) -> usize {
        self.diagonal().iter().filter(|x| !x.is_zero()).count()
    }

    /// Diagonal entries greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.diagonal().into_iter().filter(|x| *x > BigInt::one()).collect()
    }
}

pub fn smith_normal_form(m: &IntMatrix) -> SmithForm {
    let (rows, cols) = (m.rows, m.cols);
    let mut a = m.data.clone();
    let mut u = IntMatrix::identity(rows).data;
    let mut v = IntMatrix::identity(cols).data;

    fn row_axpy(a: &mut [Vec<BigInt>], dst: usize, src: usize, f: &BigInt) {
        // row dst -= f * row src
        let srow = a[src].clone();
        for (x, s) in a[dst].iter_mut().zip(srow.iter()) {
            *x -= f * s;
        }
    }
    fn col_axpy(a: &mut [Vec<BigInt>], dst: usize, src: usize, f: &BigInt) {
        for row in a.iter_mut() {
            let s = row[src].clone();
            row[dst] -= f * &s;
        }
    }
    fn swap_cols(a: &mut [Vec<BigInt>], i: usize, j: usize) {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }

    let n = rows.min(cols);
    for t in 0..n {
        loop {
            // smallest nonzero |entry| in the trailing block
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                break;
            };
            a.swap(t, pi);
            u.swap(t, pi);
            swap_cols(&mut a, t, pj);
            swap_cols(&mut v, t, pj);

            let mut clean = true;
            for i in t + 1..rows {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                row_axpy(&mut a, i, t, &q);
                row_axpy(&mut u, i, t, &q);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..cols {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                col_axpy(&mut a, j, t, &q);
                col_axpy(&mut v, j, t, &q);
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: fold an offending row into row t and retry
            let offending = (t + 1..rows)
                .find(|&i| (t + 1..cols).any(|j| !(&a[i][j] % &a[t][t]).is_zero()));
            match offending {
                Some(i) => {
                    let minus_one = -BigInt::one();
                    row_axpy(&mut a, t, i, &minus_one);
                    row_axpy(&mut u, t, i, &minus_one);
                }
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for x in a[t].iter_mut() {
                *x = -x.clone();
            }
            for x in u[t].iter_mut() {
                *x = -x.clone();
            }
        }
    }
    SmithForm {
        d: IntMatrix { rows, cols, data: a },
        u: IntMatrix { rows, cols: rows, data: u },
        v: IntMatrix { rows: cols, cols, data: v },
    }
}
