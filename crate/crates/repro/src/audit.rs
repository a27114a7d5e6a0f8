//! Trusted-input audit: every cited result the ledger leans on must be declared here.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::ledger::Ledger;

/// Results taken on trust, by citation id.
pub const DECLARED_TRUSTED: &[&str] = &[
    "lemma12",
    "lemma13",
    "lemma17",
    "cor22",
    "lemma23",
    "lemma32",
    "lemma321",
    "lemma333",
    "lemma35",
    "lemma39",
    "lemma48",
    "lemma4a1",
    "lemma4b1",
    "lemma5a",
    "lemma5b2",
    "cor5b",
    "odd-incidence",
];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub used: Vec<String>,
    pub undeclared: Vec<String>,
    pub declared_unused: Vec<String>,
    pub passed: bool,
}

pub fn audit(ledger: &Ledger) -> AuditReport {
    audit_against(ledger, DECLARED_TRUSTED)
}

pub fn audit_against(ledger: &Ledger, declared: &[&str]) -> AuditReport {
    let used = ledger.trusted_inputs();
    let used_set: BTreeSet<&str> = used.iter().map(String::as_str).collect();
    let declared_set: BTreeSet<&str> = declared.iter().copied().collect();
    let undeclared: Vec<String> = used.iter().filter(|u| !declared_set.contains(u.as_str())).cloned().collect();
    let declared_unused = declared.iter().filter(|d| !used_set.contains(*d)).map(|d| d.to_string()).collect();
    AuditReport { passed: undeclared.is_empty(), used, undeclared, declared_unused }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ledger::Citation;

    #[test]
    fn shipped_ledger_is_covered() {
        let r = audit(&Ledger::shipped());
        assert!(r.passed, "{r:?}");
        assert!(r.declared_unused.is_empty(), "{r:?}");
    }

    #[test]
    fn undeclared_citation_fails() {
        let mut l = Ledger::shipped();
        let c = &mut l.stratum_mut("J_2(b)").unwrap().fiber_bm.evidence.citations;
        c.push(Citation { id: "folklore".into(), claim: "an unverified vanishing".into() });
        let r = audit(&l);
        assert!(!r.passed);
        assert_eq!(r.undeclared, vec!["folklore".to_string()]);
    }
}
