//! Hand-built cell complexes given by a ledger of cells and incidence blocks.

use std::collections::{BTreeMap, BTreeSet};

use ordercx_core::chain::{Betti, ChainComplex, ChainError};
use ordercx_core::linalg::{rational, RationalMatrix};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const LEMMA5B_CELLS: &str = include_str!("../fixtures/lemma5b.json");

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CellLedgerError {
    #[error("cell ledger does not parse: {0}")]
    Parse(String),
    #[error("incidence block {index} is not square: {upper} upper cells, {lower} lower cells, matrix {rows}x{cols}")]
    IncidenceNotSquare { index: usize, upper: usize, lower: usize, rows: usize, cols: usize },
    #[error("unknown cell {0}")]
    UnknownCell(String),
    #[error("incidence block {0} does not drop dimension by one")]
    DegreeMismatch(usize),
    #[error(transparent)]
    Chain(#[from] ChainError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub name: String,
    pub dim: i32,
    pub stratum: String,
    pub piece: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pairing {
    pub upper: Vec<String>,
    pub lower: Vec<String>,
    /// `matrix[i][j]` = incidence of `upper[j]` on `lower[i]`.
    pub matrix: Vec<Vec<i64>>,
    pub role: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CellLedger {
    pub description: String,
    pub cells: Vec<Cell>,
    pub pairings: Vec<Pairing>,
    pub residual: Vec<String>,
    #[serde(default)]
    pub notes: Vec<String>,
}

impl CellLedger {
    pub fn shipped() -> CellLedger {
        CellLedger::from_json(LEMMA5B_CELLS).expect("shipped cell ledger parses")
    }

    pub fn from_json(text: &str) -> Result<CellLedger, CellLedgerError> {
        serde_json::from_str(text).map_err(|e| CellLedgerError::Parse(e.to_string()))
    }

    /// The same ledger with every block of the given role replaced by zero.
    pub fn with_zeroed(&self, role: &str) -> CellLedger {
        let mut out = self.clone();
        for p in out.pairings.iter_mut().filter(|p| p.role == role) {
            p.matrix.iter_mut().flatten().for_each(|x| *x = 0);
        }
        out
    }

    /// The same ledger with only the first block of the given role zeroed.
    pub fn with_first_zeroed(&self, role: &str) -> CellLedger {
        let mut out = self.clone();
        if let Some(p) = out.pairings.iter_mut().find(|p| p.role == role) {
            p.matrix.iter_mut().flatten().for_each(|x| *x = 0);
        }
        out
    }

    pub fn complex(&self) -> Result<ChainComplex, CellLedgerError> {
        self.build(None)
    }

    /// The subcomplex on the residual cells.
    pub fn residual_complex(&self) -> Result<ChainComplex, CellLedgerError> {
        let keep: BTreeSet<&str> = self.residual.iter().map(String::as_str).collect();
        self.build(Some(&keep))
    }

    fn build(&self, keep: Option<&BTreeSet<&str>>) -> Result<ChainComplex, CellLedgerError> {
        let kept = |name: &str| keep.is_none_or(|k| k.contains(name));
        for (index, p) in self.pairings.iter().enumerate() {
            let (rows, cols) = (p.matrix.len(), p.matrix.first().map_or(0, Vec::len));
            let ragged = p.matrix.iter().any(|r| r.len() != cols);
            if p.upper.len() != p.lower.len() || rows != p.lower.len() || cols != p.upper.len() || ragged {
                return Err(CellLedgerError::IncidenceNotSquare {
                    index,
                    upper: p.upper.len(),
                    lower: p.lower.len(),
                    rows,
                    cols,
                });
            }
        }
        let dims: Vec<i32> = self.cells.iter().map(|c| c.dim).collect();
        let (lo, hi) = (dims.iter().copied().min().unwrap_or(0), dims.iter().copied().max().unwrap_or(0));
        let mut by_degree: Vec<Vec<String>> = vec![Vec::new(); (hi - lo + 1) as usize];
        let mut position: BTreeMap<&str, (i32, usize)> = BTreeMap::new();
        for c in self.cells.iter().filter(|c| kept(&c.name)) {
            let list = &mut by_degree[(c.dim - lo) as usize];
            position.insert(c.name.as_str(), (c.dim, list.len()));
            list.push(c.name.clone());
        }
        let lookup = |name: &str| -> Result<Option<(i32, usize)>, CellLedgerError> {
            if !self.cells.iter().any(|c| c.name == name) {
                return Err(CellLedgerError::UnknownCell(name.to_string()));
            }
            Ok(position.get(name).copied())
        };
        let mut triplets: BTreeMap<i32, Vec<(usize, usize, ordercx_core::linalg::Rational)>> = BTreeMap::new();
        for (index, p) in self.pairings.iter().enumerate() {
            for (j, up) in p.upper.iter().enumerate() {
                for (i, low) in p.lower.iter().enumerate() {
                    let (u, l) = (lookup(up)?, lookup(low)?);
                    let (Some((du, cu)), Some((dl, cl))) = (u, l) else { continue };
                    if du != dl + 1 {
                        return Err(CellLedgerError::DegreeMismatch(index));
                    }
                    if p.matrix[i][j] != 0 {
                        triplets.entry(du).or_default().push((cl, cu, rational(p.matrix[i][j])));
                    }
                }
            }
        }
        let mut boundaries = BTreeMap::new();
        for (i, cells) in by_degree.iter().enumerate().skip(1) {
            let d = lo + i as i32;
            let rows = by_degree[i - 1].len();
            let t = triplets.remove(&d).unwrap_or_default();
            boundaries.insert(d, RationalMatrix::from_triplets(rows, cells.len(), t));
        }
        Ok(ChainComplex::new(lo, by_degree, boundaries)?)
    }
}

/// Betti numbers of the shipped link ledger.
pub fn lemma5b_link() -> Result<Betti, CellLedgerError> {
    Ok(CellLedger::shipped().complex()?.betti())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_ledger_is_s7() {
        assert_eq!(lemma5b_link().unwrap().from_zero(), vec![1, 0, 0, 0, 0, 0, 0, 1]);
        let l = CellLedger::shipped();
        assert_eq!(l.complex().unwrap().euler_characteristic(), 0);
    }

    #[test]
    fn residual_is_acyclic() {
        let r = CellLedger::shipped().residual_complex().unwrap();
        assert!(r.reduced_betti().unwrap().is_zero());
    }

    #[test]
    fn zeroed_units_leave_extra_classes() {
        let l = CellLedger::shipped();
        let b = l.with_first_zeroed("unit").complex().unwrap().betti();
        assert_eq!(b.from_zero(), vec![1, 0, 0, 0, 0, 2, 2, 1]);
        let b = l.with_zeroed("unit").complex().unwrap().betti();
        assert_eq!(b.from_zero(), vec![1, 0, 0, 2, 2, 2, 2, 1]);
    }

    #[test]
    fn mismatched_pairing() {
        let mut l = CellLedger::shipped();
        l.pairings[0].lower.pop();
        assert!(matches!(l.complex(), Err(CellLedgerError::IncidenceNotSquare { index: 0, .. })));
        let mut l = CellLedger::shipped();
        l.pairings[1].upper = vec!["A".into(), "B1".into()];
        assert!(matches!(l.complex(), Err(CellLedgerError::DegreeMismatch(1))));
    }
}
