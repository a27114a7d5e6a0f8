//! Column-by-column assembly of the main E^1 page and the main sequence run.

use std::collections::BTreeMap;

use ordercx_core::specseq::{page_from_ledger_ranks, Page, PageJson, SpecSeqError};
use serde::Serialize;
use thiserror::Error;

use crate::audit::{audit, AuditReport};
use crate::ledger::{EvidenceKind, Ledger, LedgerError};
use crate::verify::{verify_many, Certified, LemmaReport, Models, Status, VerifyError};

/// Range of the printed E^1 grid.
pub const P_RANGE: (i32, i32) = (1, 5);
pub const Q_RANGE: (i32, i32) = (-1, 9);

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AssemblyError {
    #[error(transparent)]
    Ledger(#[from] LedgerError),
    #[error("column {column}: {source}")]
    Spectral { column: i32, source: SpecSeqError },
    #[error("column {0} is missing from the ledger")]
    MissingColumn(i32),
    #[error("column {column}: connecting map {from} -> {to} does not lower the filtration")]
    BadConnecting { column: i32, from: String, to: String },
    #[error("column {column}: direct count {direct:?} disagrees with the auxiliary sequence {filtered:?}")]
    RoutesDisagree { column: i32, direct: BTreeMap<i32, usize>, filtered: BTreeMap<i32, usize> },
    #[error(transparent)]
    Verify(#[from] VerifyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ColumnReport {
    pub column: i32,
    pub order: Vec<String>,
    pub pages: Vec<PageJson>,
    /// Total degree -> dimension of H̄ of the column.
    pub totals: BTreeMap<i32, usize>,
}

fn contributions(ledger: &Ledger, id: &str) -> Vec<(i32, usize)> {
    ledger
        .stratum(id)
        .and_then(|s| s.contribution.value.clone())
        .map(|v| crate::ledger::normalize(&v))
        .unwrap_or_default()
}

/// Replays the auxiliary filtration of column `p`: the `s`-th stratum of the order
/// contributes `E^1_{s, i-s}` for each degree `i` of its contribution.
pub fn assemble_column(p: i32, ledger: &Ledger) -> Result<ColumnReport, AssemblyError> {
    let spec = ledger.column(p).ok_or(AssemblyError::MissingColumn(p))?;
    let position = |id: &str| spec.order.iter().position(|x| x == id).map(|i| i as i32 + 1);
    let mut dims: BTreeMap<(i32, i32), usize> = BTreeMap::new();
    for id in &spec.order {
        let s = position(id).expect("listed");
        for (i, n) in contributions(ledger, id) {
            *dims.entry((s, i - s)).or_default() += n;
        }
    }
    let mut ranks: BTreeMap<usize, BTreeMap<(i32, i32), usize>> = BTreeMap::new();
    for k in &spec.connecting {
        let bad = || AssemblyError::BadConnecting { column: p, from: k.from.clone(), to: k.to.clone() };
        let (a, b) = (position(&k.from).ok_or_else(bad)?, position(&k.to).ok_or_else(bad)?);
        if a <= b {
            return Err(bad());
        }
        ranks.entry((a - b) as usize).or_default().insert((a, k.degree - a), k.rank);
    }
    let pages = page_from_ledger_ranks(&dims, &ranks).map_err(|source| AssemblyError::Spectral { column: p, source })?;
    let totals = pages.last().map(|pg| pg.totals()).unwrap_or_default();
    Ok(ColumnReport {
        column: p,
        order: spec.order.clone(),
        pages: pages.iter().map(Page::to_json).collect(),
        totals: totals.into_iter().filter(|(_, n)| *n > 0).collect(),
    })
}

/// Direct count: contributions summed by degree, minus the connecting ranks at both ends.
fn direct_totals(p: i32, ledger: &Ledger) -> Result<BTreeMap<i32, usize>, AssemblyError> {
    let spec = ledger.column(p).ok_or(AssemblyError::MissingColumn(p))?;
    let mut m: BTreeMap<i32, i64> = BTreeMap::new();
    for id in &spec.order {
        for (i, n) in contributions(ledger, id) {
            *m.entry(i).or_default() += n as i64;
        }
    }
    for k in &spec.connecting {
        *m.entry(k.degree).or_default() -= k.rank as i64;
        *m.entry(k.degree - 1).or_default() -= k.rank as i64;
    }
    if m.values().any(|n| *n < 0) {
        let bad = &spec.connecting[0];
        return Err(AssemblyError::BadConnecting { column: p, from: bad.from.clone(), to: bad.to.clone() });
    }
    Ok(m.into_iter().filter(|(_, n)| *n > 0).map(|(i, n)| (i, n as usize)).collect())
}

/// The main E^1 page: column `p` in total degree `i` sits at `(p, i - p)`. Each column
/// is counted directly and through its auxiliary sequence, and the two must agree.
pub fn assemble_main_e1(ledger: &Ledger) -> Result<(Page, Vec<ColumnReport>), AssemblyError> {
    ledger.validate()?;
    let mut dims = BTreeMap::new();
    let mut columns = Vec::new();
    for p in P_RANGE.0..=P_RANGE.1 {
        let report = assemble_column(p, ledger)?;
        let direct = direct_totals(p, ledger)?;
        if direct != report.totals {
            return Err(AssemblyError::RoutesDisagree { column: p, direct, filtered: report.totals });
        }
        for (&i, &n) in &report.totals {
            dims.insert((p, i - p), n);
        }
        columns.push(report);
    }
    Ok((Page { r: 1, dims, differentials: BTreeMap::new() }, columns))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct RunOptions {
    pub counterfactual_d1_zero: bool,
    pub models: Option<Models>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LemmaOutcome {
    pub expected: String,
    pub computed: String,
    pub status: Status,
}

/// A ledger field backed by computed evidence, compared with what its verification certified.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FieldCheck {
    pub field: String,
    pub source: String,
    pub recorded: String,
    pub certified: Option<String>,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AssemblyReport {
    /// `"default"` for the shipped reading, `"counterfactual-d1-zero"` otherwise.
    pub mode: String,
    pub non_paper: bool,
    pub models: Models,
    #[serde(rename = "E1")]
    pub e1: PageJson,
    /// Rows `p = 1..=5`, columns `q = -1..=9`.
    pub e1_grid: Vec<Vec<usize>>,
    pub pages: Vec<PageJson>,
    pub columns: Vec<ColumnReport>,
    /// `final_betti[i]` = dim H_i; absent when a non-trusted entry failed or the audit failed.
    pub final_betti: Option<Vec<usize>>,
    pub withheld: Vec<String>,
    pub lemma_results: BTreeMap<String, LemmaOutcome>,
    pub field_checks: Vec<FieldCheck>,
    pub audit: AuditReport,
}

impl AssemblyReport {
    pub fn all_checks_pass(&self) -> bool {
        self.lemma_results.values().all(|l| l.status != Status::Fail) && self.field_checks.iter().all(|f| f.passed)
    }
}

pub fn e1_grid(page: &Page) -> Vec<Vec<usize>> {
    (P_RANGE.0..=P_RANGE.1).map(|p| (Q_RANGE.0..=Q_RANGE.1).map(|q| page.dim(p, q)).collect()).collect()
}

fn monodromy_class(text: &str) -> &str {
    text.split(':').next().unwrap_or("").trim()
}

fn compare_fields(ledger: &Ledger, reports: &BTreeMap<String, LemmaReport>) -> Vec<FieldCheck> {
    let mut out = Vec::new();
    for s in &ledger.strata {
        for (name, e) in s.fields() {
            if e.kind != EvidenceKind::Computed {
                continue;
            }
            let field = format!("{}.{}", s.id, name);
            let certified = reports.get(&e.source).and_then(|r| r.certifies.get(&field));
            let (recorded, certified, passed) = match (name, certified) {
                ("monodromy", Some(Certified::Character(c))) => {
                    let rec = s.monodromy.value.clone().unwrap_or_default();
                    let ok = monodromy_class(&rec) == c;
                    (rec, Some(c.clone()), ok)
                }
                (_, Some(Certified::Degrees(v))) => {
                    let rec = s.degrees(name).map(|d| crate::ledger::normalize(&d));
                    let shifted: Vec<(i32, usize)> = v.iter().map(|&(d, n)| (d + e.shift, n)).collect();
                    let ok = rec.as_ref() == Some(&crate::ledger::normalize(&shifted));
                    (format!("{rec:?}"), Some(format!("{shifted:?}")), ok)
                }
                (_, other) => (String::from("-"), other.map(|c| format!("{c:?}")), false),
            };
            out.push(FieldCheck { field, source: e.source.clone(), recorded, certified, passed });
        }
    }
    out
}

/// Registry ids named by computed evidence in the ledger.
pub fn computed_sources(ledger: &Ledger) -> Vec<String> {
    let mut ids: Vec<String> = ledger
        .evidence()
        .into_iter()
        .filter(|(_, e)| e.kind == EvidenceKind::Computed)
        .map(|(_, e)| e.source.clone())
        .collect();
    ids.sort();
    ids.dedup();
    ids
}

/// Main sequence with the verifications behind the ledger run now.
pub fn run_main_sequence(ledger: &Ledger, opts: RunOptions) -> Result<AssemblyReport, AssemblyError> {
    let models = opts.models.unwrap_or(Models::Quick);
    ledger.validate()?;
    let ids = computed_sources(ledger);
    let refs: Vec<&str> = ids.iter().map(String::as_str).collect();
    let reports = verify_many(&refs, models)?;
    run_main_sequence_with(ledger, opts, reports)
}

/// Main sequence against verification reports computed elsewhere.
pub fn run_main_sequence_with(
    ledger: &Ledger,
    opts: RunOptions,
    reports: Vec<LemmaReport>,
) -> Result<AssemblyReport, AssemblyError> {
    let models = opts.models.unwrap_or(Models::Quick);
    let (e1, columns) = assemble_main_e1(ledger)?;
    let mut ranks: BTreeMap<usize, BTreeMap<(i32, i32), usize>> = BTreeMap::new();
    for d in &ledger.main_differentials {
        let rank = if opts.counterfactual_d1_zero && d.r == 1 { 0 } else { d.rank };
        ranks.entry(d.r).or_default().insert(d.source, rank);
    }
    let pages = page_from_ledger_ranks(&e1.dims, &ranks).map_err(|source| AssemblyError::Spectral { column: 0, source })?;
    let totals = pages.last().map(|pg| pg.totals()).unwrap_or_default();

    let reports: BTreeMap<String, LemmaReport> = reports.into_iter().map(|r| (r.id.clone(), r)).collect();
    let mut lemma_results = BTreeMap::new();
    for id in computed_sources(ledger) {
        let outcome = match reports.get(&id) {
            Some(r) => LemmaOutcome { expected: r.expected.clone(), computed: r.computed.clone(), status: r.status },
            None => LemmaOutcome { expected: "a verification report".into(), computed: "missing".into(), status: Status::Fail },
        };
        lemma_results.insert(id, outcome);
    }
    let field_checks = compare_fields(ledger, &reports);
    let audit = audit(ledger);

    let mut withheld = Vec::new();
    for (id, l) in &lemma_results {
        if l.status == Status::Fail {
            withheld.push(format!("verification {id} failed"));
        }
    }
    for f in field_checks.iter().filter(|f| !f.passed) {
        withheld.push(format!("{} does not match {}", f.field, f.source));
    }
    if !audit.passed {
        withheld.push(format!("undeclared trusted inputs {:?}", audit.undeclared));
    }
    let top = totals.keys().copied().max().unwrap_or(0).max(0);
    let final_betti = withheld
        .is_empty()
        .then(|| (0..=top).map(|i| totals.get(&i).copied().unwrap_or(0)).collect());

    Ok(AssemblyReport {
        mode: if opts.counterfactual_d1_zero { "counterfactual-d1-zero" } else { "default" }.to_string(),
        non_paper: opts.counterfactual_d1_zero,
        models,
        e1_grid: e1_grid(&e1),
        e1: e1.to_json(),
        pages: pages.iter().map(Page::to_json).collect(),
        columns,
        final_betti,
        withheld,
        lemma_results,
        field_checks,
        audit,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> BTreeMap<(i32, i32), usize> {
        BTreeMap::from([((1, -1), 1), ((3, 5), 1), ((4, 5), 1), ((5, 8), 1)])
    }

    #[test]
    fn shipped_e1() {
        let (e1, columns) = assemble_main_e1(&Ledger::shipped()).unwrap();
        assert_eq!(e1.dims, fig1());
        let totals: Vec<_> = columns.iter().map(|c| c.totals.clone()).collect();
        assert_eq!(
            totals,
            vec![
                BTreeMap::from([(0, 1)]),
                BTreeMap::new(),
                BTreeMap::from([(8, 1)]),
                BTreeMap::from([(9, 1)]),
                BTreeMap::from([(13, 1)]),
            ]
        );
    }

    #[test]
    fn column_three_uses_the_connecting_map() {
        let c = assemble_column(3, &Ledger::shipped()).unwrap();
        assert_eq!(c.pages[0].differentials.len(), 1);
        assert_eq!(c.pages[0].differentials[0].source, "(4,1)");
        assert_eq!(c.pages[0].differentials[0].target, "(3,1)");
    }

    #[test]
    fn missing_connecting_map_is_undetermined() {
        let mut l = Ledger::shipped();
        l.columns[2].connecting.clear();
        assert!(matches!(
            assemble_column(3, &l),
            Err(AssemblyError::Spectral { column: 3, source: SpecSeqError::UndeterminedDifferential { .. } })
        ));
    }

    #[test]
    fn uniform_shift_is_caught() {
        let mut l = Ledger::shipped();
        for s in &mut l.strata {
            if let Some(v) = s.base_bm.value.as_mut() {
                v.iter_mut().for_each(|e| e.degree += 1);
            }
            for f in [&mut s.fiber_bm.value, &mut s.contribution.value].into_iter().flatten() {
                f.iter_mut().for_each(|e| e.0 += 1);
            }
        }
        assert!(matches!(assemble_main_e1(&l), Err(AssemblyError::Ledger(LedgerError::ContributionMismatch { .. }))));
    }

    #[test]
    fn blanked_j5a() {
        let mut l = Ledger::shipped();
        l.stratum_mut("J_5(a)").unwrap().contribution.value = None;
        assert!(matches!(assemble_main_e1(&l), Err(AssemblyError::Ledger(LedgerError::LedgerIncomplete(_)))));
    }
}
