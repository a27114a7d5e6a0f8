use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use ordercx_core::chain::{ChainComplex, ChainComplexJson};
use ordercx_core::poset::{lower_link, order_complex, FinitePoset, PosetJson};
use ordercx_core::simplicial::SimplicialComplex;
use ordercx_core::specseq::{pages, total_betti_check, FilteredChainComplex, FilteredJson, Page};
use ordercx_repro::assembly::{run_main_sequence, AssemblyError, AssemblyReport, RunOptions, P_RANGE, Q_RANGE};
use ordercx_repro::ledger::{Ledger, LedgerError};
use ordercx_repro::verify::{self, LemmaReport, Models, Status};
use serde::{Deserialize, Serialize};

const EXIT_MISMATCH: u8 = 1;
const EXIT_INPUT: u8 = 2;
const EXIT_AUDIT: u8 = 3;

#[derive(Parser)]
#[command(name = "ordercx", version, about = "Exact homology of chain complexes, order complexes and spectral sequences")]
struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Table, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Subcommand)]
enum Command {
    /// Rational Betti numbers of a chain complex or a simplicial complex given by facets.
    Homology { path: PathBuf },
    /// Order complex of a poset, or the order complex of the elements below X.
    Poset {
        path: PathBuf,
        #[arg(long, conflicts_with = "link")]
        order_complex: bool,
        #[arg(long, value_name = "X")]
        link: Option<String>,
    },
    /// Pages of the spectral sequence of a filtered chain complex.
    Specseq { path: PathBuf },
    /// Run one registered verification, or all of them.
    Verify {
        id: String,
        #[arg(long, value_enum, default_value_t = Models::Full)]
        models: Models,
    },
    /// Assemble the main spectral sequence from the stratum ledger.
    Reproduce {
        #[arg(value_enum)]
        target: Target,
        #[arg(long)]
        counterfactual_d1_zero: bool,
        #[arg(long)]
        ledger: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Models::Quick)]
        models: Models,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Target {
    Fig1,
}

struct Failure {
    code: u8,
    error: anyhow::Error,
}

fn input<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure { code: EXIT_INPUT, error: e.into() }
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display())).map_err(input)
}

fn parse<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, Failure> {
    serde_json::from_str(&read(path)?).with_context(|| format!("parsing {}", path.display())).map_err(input)
}

fn emit<T: Serialize>(format: Format, value: &T, table: impl FnOnce() -> String) {
    match format {
        Format::Json => println!("{}", serde_json::to_string_pretty(value).expect("reports serialize")),
        Format::Table => print!("{}", table()),
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ComplexInput {
    Facets { facets: Vec<Vec<String>> },
    Chain(ChainComplexJson),
}

#[derive(Serialize)]
struct HomologyReport {
    betti: Vec<(i32, usize)>,
    cells: Vec<(i32, usize)>,
    euler_characteristic: i64,
}

fn homology_report(cx: &ChainComplex) -> HomologyReport {
    HomologyReport {
        betti: cx.degrees().map(|d| (d, cx.betti().get(d))).collect(),
        cells: cx.degrees().map(|d| (d, cx.num_cells(d))).collect(),
        euler_characteristic: cx.euler_characteristic(),
    }
}

fn homology_table(r: &HomologyReport) -> String {
    let mut s = String::from("degree  cells  betti\n");
    for ((d, c), (_, b)) in r.cells.iter().zip(&r.betti) {
        s += &format!("{d:>6}  {c:>5}  {b:>5}\n");
    }
    s += &format!("euler characteristic {}\n", r.euler_characteristic);
    s
}

fn homology(format: Format, path: &Path) -> Result<(), Failure> {
    let cx = match parse::<ComplexInput>(path)? {
        ComplexInput::Facets { facets } => {
            SimplicialComplex::from_labelled_facets(&facets).map_err(input)?.to_chain_complex()
        }
        ComplexInput::Chain(json) => ChainComplex::from_json(&json).map_err(input)?,
    };
    let r = homology_report(&cx);
    emit(format, &r, || homology_table(&r));
    Ok(())
}

#[derive(Serialize)]
struct PosetReport {
    complex: String,
    f_vector: Vec<usize>,
    reduced_betti: Vec<(i32, usize)>,
    euler_characteristic: i64,
}

fn poset(format: Format, path: &Path, link: Option<&str>) -> Result<(), Failure> {
    let json: PosetJson = parse(path)?;
    let p = FinitePoset::from_json(&json).map_err(input)?;
    let (name, k) = match link {
        Some(x) => (format!("link below {x}"), lower_link(&p, x).map_err(input)?),
        None => ("order complex".to_string(), order_complex(&p).complex),
    };
    let reduced = k.reduced_betti();
    let r = PosetReport {
        complex: name,
        f_vector: k.f_vector(),
        reduced_betti: reduced.nonzero(),
        euler_characteristic: k.euler_characteristic(),
    };
    emit(format, &r, || {
        let mut s = format!("{}\nf-vector {:?}\n", r.complex, r.f_vector);
        if r.reduced_betti.is_empty() {
            s += "reduced homology vanishes\n";
        }
        for (d, n) in &r.reduced_betti {
            s += &format!("reduced H_{d} = Q^{n}\n");
        }
        s += &format!("euler characteristic {}\n", r.euler_characteristic);
        s
    });
    Ok(())
}

fn page_table(page: &Page) -> String {
    let mut s = format!("E^{}\n", page.r);
    let ps: Vec<i32> = page.dims.keys().map(|k| k.0).collect();
    let qs: Vec<i32> = page.dims.keys().map(|k| k.1).collect();
    let (Some(&p0), Some(&p1)) = (ps.iter().min(), ps.iter().max()) else {
        return s + "  (zero)\n";
    };
    let (q0, q1) = (*qs.iter().min().expect("nonempty"), *qs.iter().max().expect("nonempty"));
    grid(&mut s, (p0, p1), (q0, q1), |p, q| page.dim(p, q));
    for d in page.differentials.values() {
        s += &format!("  d^{} {:?} -> {:?} rank {}\n", page.r, d.source, d.target, d.rank);
    }
    s
}

fn grid(s: &mut String, (p0, p1): (i32, i32), (q0, q1): (i32, i32), dim: impl Fn(i32, i32) -> usize) {
    *s += "  q\\p";
    for p in p0..=p1 {
        *s += &format!("{p:>4}");
    }
    *s += "\n";
    for q in (q0..=q1).rev() {
        *s += &format!("  {q:>3}");
        for p in p0..=p1 {
            let n = dim(p, q);
            *s += &if n == 0 { format!("{:>4}", ".") } else { format!("{n:>4}") };
        }
        *s += "\n";
    }
}

#[derive(Serialize)]
struct SpecseqReport {
    pages: Vec<ordercx_core::specseq::PageJson>,
    stable_from: usize,
    infinity_totals: Vec<(i32, usize)>,
    total_betti: Vec<(i32, usize)>,
    converged: bool,
}

fn specseq(format: Format, path: &Path) -> Result<u8, Failure> {
    let json: FilteredJson = parse(path)?;
    let f = FilteredChainComplex::from_json(&json).map_err(input)?;
    let ss = pages(&f).map_err(input)?;
    let check = total_betti_check(&f, &ss);
    let r = SpecseqReport {
        pages: ss.pages.iter().map(Page::to_json).collect(),
        stable_from: ss.stable_from,
        infinity_totals: ss.infinity_totals().into_iter().collect(),
        total_betti: check.rows.iter().map(|&(n, _, b)| (n, b)).collect(),
        converged: check.passed(),
    };
    emit(format, &r, || {
        let mut s: String = ss.pages.iter().map(page_table).collect();
        s += &format!("stable from E^{}\n", ss.stable_from);
        for (n, e, b) in &check.rows {
            s += &format!("degree {n}: sum E^inf = {e}, betti = {b}\n");
        }
        s += if check.passed() { "converged\n" } else { "CONVERGENCE FAILED\n" };
        s
    });
    Ok(if check.passed() { 0 } else { EXIT_MISMATCH })
}

fn verify_table(reports: &[LemmaReport]) -> String {
    let mut s = String::new();
    for r in reports {
        let status = match r.status {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Trusted => "trusted",
        };
        s += &format!("{:<14} {:<8} {:>7} ms  {}\n", r.id, status, r.runtime_ms, r.claim);
        for c in &r.checks {
            let mark = if c.passed { " " } else { "!" };
            s += &format!("  {mark} {}: expected {}, computed {}\n", c.name, c.expected, c.computed);
        }
        if let Some(t) = &r.trusted_shape {
            s += &format!("    shape taken on trust: {t}\n");
        }
    }
    s
}

fn run_verify(format: Format, id: &str, models: Models) -> Result<u8, Failure> {
    let reports = if id == "all" {
        verify::verify_all(models)
    } else {
        vec![verify::verify(id, models).map_err(input)?]
    };
    emit(format, &reports, || verify_table(&reports));
    Ok(if reports.iter().any(|r| r.status == Status::Fail) { EXIT_MISMATCH } else { 0 })
}

fn report_table(r: &AssemblyReport) -> String {
    let mut s = String::new();
    if r.non_paper {
        s += &format!("mode {} (non-paper)\n", r.mode);
    }
    s += "E^1\n";
    grid(&mut s, P_RANGE, Q_RANGE, |p, q| r.e1_grid[(p - P_RANGE.0) as usize][(q - Q_RANGE.0) as usize]);
    for page in &r.pages {
        for d in &page.differentials {
            s += &format!("d^{} {} -> {} rank {}\n", page.r, d.source, d.target, d.rank);
        }
    }
    for c in &r.columns {
        let totals: Vec<String> = c.totals.iter().map(|(i, n)| format!("{i}:{n}")).collect();
        s += &format!("column {}: totals {{{}}}\n", c.column, totals.join(", "));
    }
    for (id, l) in &r.lemma_results {
        s += &format!("{id:<14} {:?}\n", l.status);
    }
    for f in r.field_checks.iter().filter(|f| !f.passed) {
        s += &format!("field {} recorded {} but {} certified {:?}\n", f.field, f.recorded, f.source, f.certified);
    }
    s += &format!("trusted inputs: {}\n", r.audit.used.join(", "));
    if !r.audit.passed {
        s += &format!("AUDIT FAILED: undeclared {}\n", r.audit.undeclared.join(", "));
    }
    match &r.final_betti {
        Some(b) => {
            let degrees: Vec<String> = b.iter().enumerate().filter(|(_, n)| **n > 0).map(|(i, n)| format!("H_{i} = Q^{n}")).collect();
            s += &format!("homology: {}\n", degrees.join(", "));
        }
        None => s += &format!("homology withheld: {}\n", r.withheld.join("; ")),
    }
    s
}

fn reproduce(format: Format, ledger: Option<&Path>, opts: RunOptions) -> Result<u8, Failure> {
    let ledger = match ledger {
        Some(path) => Ledger::from_json(&read(path)?).map_err(input)?,
        None => Ledger::shipped(),
    };
    let report = run_main_sequence(&ledger, opts).map_err(|e| {
        let code = match &e {
            AssemblyError::Ledger(LedgerError::ContributionMismatch { .. }) | AssemblyError::RoutesDisagree { .. } => {
                EXIT_MISMATCH
            }
            _ => EXIT_INPUT,
        };
        Failure { code, error: e.into() }
    })?;
    emit(format, &report, || report_table(&report));
    Ok(if !report.all_checks_pass() {
        EXIT_MISMATCH
    } else if !report.audit.passed {
        EXIT_AUDIT
    } else {
        0
    })
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let format = cli.format;
    match cli.command {
        Command::Homology { path } => homology(format, &path).map(|_| 0),
        Command::Poset { path, order_complex: _, link } => poset(format, &path, link.as_deref()).map(|_| 0),
        Command::Specseq { path } => specseq(format, &path),
        Command::Verify { id, models } => run_verify(format, &id, models),
        Command::Reproduce { target: Target::Fig1, counterfactual_d1_zero, ledger, models } => {
            reproduce(format, ledger.as_deref(), RunOptions { counterfactual_d1_zero, models: Some(models) })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {:#}", f.error);
            ExitCode::from(f.code)
        }
    }
}
