//! The stratum ledger: one record per stratum, every field carrying its evidence.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const SHIPPED_LEDGER: &str = include_str!("../fixtures/ledger.json");

/// Stratum ids in the order of the stratification.
pub const STRATA: [&str; 15] = [
    "J_1", "J_2(a)", "J_2(b)", "J_3(a)", "J_3(b)", "J_3(c)", "J_3(d)", "J_4(a)", "J_4(b)", "J_4(c)", "J_4(d)",
    "J_4(e)", "J_5(a)", "J_5(b)", "J_5(c)",
];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LedgerError {
    #[error("ledger does not parse: {0}")]
    Parse(String),
    #[error("ledger incomplete: {0}")]
    LedgerIncomplete(String),
    #[error("contribution mismatch in {stratum}: convolution gives {expected:?}, ledger records {found:?} (reduction cited: {cited})")]
    ContributionMismatch {
        stratum: String,
        expected: Vec<(i32, usize)>,
        found: Vec<(i32, usize)>,
        cited: String,
    },
    #[error("trusted evidence without a citation in {0}")]
    MissingCitation(String),
    #[error("malformed column data: {0}")]
    Column(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum EvidenceKind {
    Computed,
    Trusted,
    DerivedOracle,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Citation {
    pub id: String,
    pub claim: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvidenceTag {
    pub kind: EvidenceKind,
    /// A registry id for computed evidence, a description otherwise.
    pub source: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub citations: Vec<Citation>,
    /// Degree shift between the certified value and the recorded one.
    #[serde(default, skip_serializing_if = "is_zero")]
    pub shift: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn is_zero(x: &i32) -> bool {
    *x == 0
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Field<T> {
    pub value: Option<T>,
    pub evidence: EvidenceTag,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct BaseEntry {
    pub degree: i32,
    pub dim: usize,
    pub coefficients: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StratumRecord {
    pub id: String,
    pub column: i32,
    pub base_description: String,
    pub base_bm: Field<Vec<BaseEntry>>,
    pub fiber_bm: Field<Vec<(i32, usize)>>,
    pub monodromy: Field<String>,
    pub contribution: Field<Vec<(i32, usize)>>,
}

impl StratumRecord {
    pub fn fields(&self) -> [(&'static str, &EvidenceTag); 4] {
        [
            ("base_bm", &self.base_bm.evidence),
            ("fiber_bm", &self.fiber_bm.evidence),
            ("monodromy", &self.monodromy.evidence),
            ("contribution", &self.contribution.evidence),
        ]
    }

    /// The recorded value of a degree-valued field, without coefficient tags.
    pub fn degrees(&self, field: &str) -> Option<Vec<(i32, usize)>> {
        match field {
            "base_bm" => self.base_bm.value.as_ref().map(|v| v.iter().map(|e| (e.degree, e.dim)).collect()),
            "fiber_bm" => self.fiber_bm.value.clone(),
            "contribution" => self.contribution.value.clone(),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Connecting {
    pub from: String,
    pub to: String,
    /// Degree of the source group.
    pub degree: i32,
    pub rank: usize,
    pub evidence: EvidenceTag,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ColumnSpec {
    pub column: i32,
    /// Strata of the column, closed end of the auxiliary filtration first.
    pub order: Vec<String>,
    pub connecting: Vec<Connecting>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MainDifferential {
    pub r: usize,
    pub source: (i32, i32),
    pub rank: usize,
    pub evidence: EvidenceTag,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Ledger {
    pub strata: Vec<StratumRecord>,
    pub columns: Vec<ColumnSpec>,
    pub main_differentials: Vec<MainDifferential>,
}

/// Nonzero entries of `(degree, dim)` pairs, summed by degree.
pub fn normalize(v: &[(i32, usize)]) -> Vec<(i32, usize)> {
    let mut m: BTreeMap<i32, usize> = BTreeMap::new();
    for &(d, n) in v {
        *m.entry(d).or_default() += n;
    }
    m.into_iter().filter(|(_, n)| *n > 0).collect()
}

/// Degree convolution of base and fiber groups.
pub fn convolve(base: &[(i32, usize)], fiber: &[(i32, usize)]) -> Vec<(i32, usize)> {
    let mut out = Vec::new();
    for &(a, m) in base {
        for &(b, n) in fiber {
            out.push((a + b, m * n));
        }
    }
    normalize(&out)
}

impl Ledger {
    pub fn shipped() -> Ledger {
        Ledger::from_json(SHIPPED_LEDGER).expect("shipped ledger parses")
    }

    pub fn from_json(text: &str) -> Result<Ledger, LedgerError> {
        serde_json::from_str(text).map_err(|e| LedgerError::Parse(e.to_string()))
    }

    pub fn stratum(&self, id: &str) -> Option<&StratumRecord> {
        self.strata.iter().find(|s| s.id == id)
    }

    pub fn stratum_mut(&mut self, id: &str) -> Option<&mut StratumRecord> {
        self.strata.iter_mut().find(|s| s.id == id)
    }

    pub fn column(&self, p: i32) -> Option<&ColumnSpec> {
        self.columns.iter().find(|c| c.column == p)
    }

    /// Every evidence tag with where it sits.
    pub fn evidence(&self) -> Vec<(String, &EvidenceTag)> {
        let mut out = Vec::new();
        for s in &self.strata {
            for (name, e) in s.fields() {
                out.push((format!("{}.{}", s.id, name), e));
            }
        }
        for c in &self.columns {
            for k in &c.connecting {
                out.push((format!("column {}: {} -> {}", c.column, k.from, k.to), &k.evidence));
            }
        }
        for d in &self.main_differentials {
            out.push((format!("d^{} out of {:?}", d.r, d.source), &d.evidence));
        }
        out
    }

    /// Trusted citation ids in first-use order.
    pub fn trusted_inputs(&self) -> Vec<String> {
        let mut seen = BTreeSet::new();
        let mut out = Vec::new();
        for (_, e) in self.evidence() {
            if e.kind == EvidenceKind::Trusted {
                for c in &e.citations {
                    if seen.insert(c.id.clone()) {
                        out.push(c.id.clone());
                    }
                }
            }
        }
        out
    }

    /// Completeness, per-stratum arithmetic and column bookkeeping.
    pub fn validate(&self) -> Result<(), LedgerError> {
        let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
        for s in &self.strata {
            *counts.entry(s.id.as_str()).or_default() += 1;
        }
        let missing: Vec<&str> = STRATA.iter().copied().filter(|id| !counts.contains_key(id)).collect();
        if !missing.is_empty() {
            return Err(LedgerError::LedgerIncomplete(format!("missing strata {missing:?}")));
        }
        if let Some((id, _)) = counts.iter().find(|(_, n)| **n > 1) {
            return Err(LedgerError::LedgerIncomplete(format!("stratum {id} recorded more than once")));
        }
        if let Some(id) = counts.keys().find(|id| !STRATA.contains(id)) {
            return Err(LedgerError::LedgerIncomplete(format!("unknown stratum {id}")));
        }
        for (place, e) in self.evidence() {
            if e.kind == EvidenceKind::Trusted && (e.citations.is_empty() || e.citations.iter().any(|c| c.claim.trim().is_empty())) {
                return Err(LedgerError::MissingCitation(place));
            }
        }
        for s in &self.strata {
            self.check_stratum(s)?;
        }
        self.check_columns()
    }

    fn check_stratum(&self, s: &StratumRecord) -> Result<(), LedgerError> {
        let incomplete = |what: &str| LedgerError::LedgerIncomplete(format!("{}: {what} is blank", s.id));
        let fiber = s.fiber_bm.value.as_ref().ok_or_else(|| incomplete("fiber_bm"))?;
        let contribution = s.contribution.value.as_ref().ok_or_else(|| incomplete("contribution"))?;
        if s.monodromy.value.is_none() {
            return Err(incomplete("monodromy"));
        }
        let expected = match s.degrees("base_bm") {
            Some(base) => convolve(&base, fiber),
            None if normalize(fiber).is_empty() => Vec::new(),
            None => return Err(incomplete("base_bm (needed for a nonzero fiber)")),
        };
        let found = normalize(contribution);
        if expected != found {
            let cited: Vec<&str> = s.contribution.evidence.citations.iter().map(|c| c.id.as_str()).collect();
            let cited = if cited.is_empty() { s.contribution.evidence.source.clone() } else { cited.join(", ") };
            return Err(LedgerError::ContributionMismatch { stratum: s.id.clone(), expected, found, cited });
        }
        Ok(())
    }

    fn check_columns(&self) -> Result<(), LedgerError> {
        let mut placed: BTreeMap<&str, i32> = BTreeMap::new();
        for c in &self.columns {
            for id in &c.order {
                let s = self
                    .stratum(id)
                    .ok_or_else(|| LedgerError::Column(format!("column {} lists unknown stratum {id}", c.column)))?;
                if s.column != c.column {
                    return Err(LedgerError::Column(format!("{id} is recorded in column {} but filtered in {}", s.column, c.column)));
                }
                if placed.insert(id, c.column).is_some() {
                    return Err(LedgerError::Column(format!("{id} is filtered twice")));
                }
            }
            for k in &c.connecting {
                if !(c.order.contains(&k.from) && c.order.contains(&k.to)) {
                    return Err(LedgerError::Column(format!("connecting map {} -> {} leaves column {}", k.from, k.to, c.column)));
                }
            }
        }
        if let Some(s) = self.strata.iter().find(|s| !placed.contains_key(s.id.as_str())) {
            return Err(LedgerError::LedgerIncomplete(format!("{} is in no auxiliary filtration", s.id)));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_ledger_is_consistent() {
        let l = Ledger::shipped();
        assert_eq!(l.strata.len(), 15);
        l.validate().unwrap();
    }

    #[test]
    fn convolution() {
        assert_eq!(convolve(&[(3, 1), (6, 1)], &[(2, 1)]), vec![(5, 1), (8, 1)]);
        assert_eq!(convolve(&[], &[(2, 1)]), vec![]);
        assert_eq!(convolve(&[(0, 2)], &[(1, 3), (1, 0)]), vec![(1, 6)]);
    }

    #[test]
    fn blanked_contribution() {
        let mut l = Ledger::shipped();
        l.stratum_mut("J_5(a)").unwrap().contribution.value = None;
        assert!(matches!(l.validate(), Err(LedgerError::LedgerIncomplete(_))));
    }

    #[test]
    fn shifted_fiber() {
        let mut l = Ledger::shipped();
        l.stratum_mut("J_3(b)").unwrap().fiber_bm.value = Some(vec![(5, 1)]);
        match l.validate() {
            Err(LedgerError::ContributionMismatch { stratum, cited, .. }) => {
                assert_eq!(stratum, "J_3(b)");
                assert_eq!(cited, "lemma39");
            }
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn duplicate_and_missing() {
        let mut l = Ledger::shipped();
        let dup = l.strata[0].clone();
        l.strata.push(dup);
        assert!(matches!(l.validate(), Err(LedgerError::LedgerIncomplete(_))));
        let mut l = Ledger::shipped();
        l.strata.retain(|s| s.id != "J_4(e)");
        assert!(matches!(l.validate(), Err(LedgerError::LedgerIncomplete(_))));
    }

    #[test]
    fn trusted_evidence_needs_a_claim() {
        let mut l = Ledger::shipped();
        l.stratum_mut("J_4(b)").unwrap().contribution.evidence.citations.clear();
        assert!(matches!(l.validate(), Err(LedgerError::MissingCitation(_))));
    }
}
