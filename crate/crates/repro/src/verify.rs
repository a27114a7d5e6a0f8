//! Registry of finite-model verifications, one entry per lemma that admits one.

use std::collections::BTreeMap;
use std::fmt::Debug;
use std::time::Instant;

use ordercx_core::chain::{induced_map, Betti, ChainComplex, ChainMap};
use ordercx_core::linalg::{rational, RationalMatrix};
use ordercx_core::poset::{lower_link, subordinate_complex};
use ordercx_core::simplicial::action::diagonal_map;
use ordercx_core::simplicial::config::permutation_sign;
use ordercx_core::simplicial::models::{rp2, simplex, simplex_boundary};
use ordercx_core::simplicial::{
    barycentric_subdivision, cone_with_apex, deleted_product, discrete_config, isotypic_betti,
    loop_monodromy_permutation, square_with_diagonal, GroupAction, Graph, SimplicialComplex,
};
use ordercx_core::transfer::CellMap;
use ordercx_core::twist::{
    bm_via_duality_quotient, config_loop_value, enumerate_characters, graph_complex,
    isotypic_relative_twisted_betti, orientation_character, token_trace_value, trace_character,
    trace_character_config, twisted_betti, Character, TraceModel,
};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cells::CellLedger;
use crate::models::{
    coned, invariant_betti, is_disc, isotypic_relative_betti, line_with_singular_point, intersection, open_cone_bm,
    shipped_poset, singular_point_link, suspended, symmetric_join, J4C, J4D, J3C,
};

type BoxError = Box<dyn std::error::Error + Send + Sync>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VerifyError {
    #[error("unknown lemma id {0}")]
    UnknownLemma(String),
}

/// Which models to use where a slow and a fast model compute the same groups.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum Models {
    Quick,
    Full,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Trusted,
}

/// A value certified for a ledger field, keyed in reports as `<stratum>.<field>`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Certified {
    Degrees(Vec<(i32, usize)>),
    Character(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub expected: String,
    pub computed: String,
    pub passed: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaReport {
    pub id: String,
    pub claim: String,
    pub model: String,
    pub status: Status,
    pub expected: String,
    pub computed: String,
    pub checks: Vec<Check>,
    pub certifies: BTreeMap<String, Certified>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trusted_shape: Option<String>,
    pub runtime_ms: u64,
}

struct Outcome {
    model: String,
    checks: Vec<Check>,
    certifies: BTreeMap<String, Certified>,
}

impl Outcome {
    fn new(model: impl Into<String>) -> Self {
        Outcome { model: model.into(), checks: Vec::new(), certifies: BTreeMap::new() }
    }

    fn check<T: PartialEq + Debug>(&mut self, name: impl Into<String>, expected: T, computed: T) {
        let passed = expected == computed;
        self.checks.push(Check {
            name: name.into(),
            expected: format!("{expected:?}"),
            computed: format!("{computed:?}"),
            passed,
        });
    }

    fn degrees(&mut self, key: &str, v: Vec<(i32, usize)>) {
        self.certifies.insert(key.to_string(), Certified::Degrees(v));
    }

    fn character(&mut self, key: &str, v: &str) {
        self.certifies.insert(key.to_string(), Certified::Character(v.to_string()));
    }
}

pub struct Entry {
    pub id: &'static str,
    pub claim: &'static str,
    pub trusted_shape: Option<&'static str>,
    run: fn(Models) -> Result<Outcome, BoxError>,
}

static REGISTRY: &[Entry] = &[
    Entry {
        id: "carat-r2",
        claim: "the join of two circles modulo the factor swap has the homology of S^3",
        trusted_shape: None,
        run: |_| carat(2, &[3, 4]),
    },
    Entry {
        id: "carat-r3",
        claim: "the join of three circles modulo S_3 has the homology of S^5",
        trusted_shape: None,
        run: |_| carat(3, &[3, 4]),
    },
    Entry {
        id: "carat-r4",
        claim: "the join of four circles modulo S_4 has the homology of S^7, so the open cone has H̄ = Q in degree 8",
        trusted_shape: None,
        run: |_| carat(4, &[3]),
    },
    Entry {
        id: "lemma1-p2",
        claim: "B(S^1,2) is a circle and the generator loop permutes the two points oddly",
        trusted_shape: None,
        run: |_| config_circle(2),
    },
    Entry {
        id: "lemma1-p3",
        claim: "B(S^1,3) is a circle and the generator loop permutes the three points evenly",
        trusted_shape: None,
        run: |_| config_circle(3),
    },
    Entry {
        id: "lemma1-p4",
        claim: "B(S^1,4) is a circle and the generator loop permutes the four points oddly",
        trusted_shape: None,
        run: |_| config_circle(4),
    },
    Entry {
        id: "lemma77",
        claim: "the orientation character of a two-point configuration space is w evaluated on the traces of both points",
        trusted_shape: None,
        run: trace_cross_check,
    },
    Entry {
        id: "lemma11",
        claim: "H̄(B(RP^2,2)) vanishes with Q and ±Q coefficients, and is Q in degrees 1 and 4 with Or coefficients",
        trusted_shape: None,
        run: two_point_bm,
    },
    Entry {
        id: "rp2-rational",
        claim: "H(RP^2; Q) = Q in degree 0",
        trusted_shape: None,
        run: |_| rp2_rational(),
    },
    Entry {
        id: "rp2-twisted",
        claim: "H(RP^2; Or) = Q in degree 2",
        trusted_shape: None,
        run: |_| rp2_twisted(),
    },
    Entry {
        id: "lemma3cd",
        claim: "the links for a point pair with one direction and for a singular point are a segment and a disc",
        trusted_shape: None,
        run: |_| links_3cd(),
    },
    Entry {
        id: "lemma39-link",
        claim: "the link of a line is Sym^{*2}(S^1), a homology S^3, so the fiber has H̄ = Q in degree 4",
        trusted_shape: None,
        run: |_| line_link(),
    },
    Entry {
        id: "lemma442",
        claim: "the links of the strata J_4(c), J_4(d), J_4(e) are acyclic",
        trusted_shape: None,
        run: |_| links_4cde(),
    },
    Entry {
        id: "lemma417",
        claim: "the suspension of Sym^{*2}(S^1) is a homology S^4, so the fiber has H̄ = Q in degree 5",
        trusted_shape: None,
        run: |_| suspension_link(),
    },
    Entry {
        id: "lemma33",
        claim: "factor swaps act by +1 on the top homology of a join of circles, a simultaneous reflection by (-1)^r",
        trusted_shape: None,
        run: |_| join_signs(),
    },
    Entry {
        id: "lemma5b",
        claim: "the cell ledger of the link of two lines has the homology of S^7 and an acyclic residual",
        trusted_shape: None,
        run: |_| two_lines_link(),
    },
    Entry {
        id: "lemma5c",
        claim: "the link of a double line is a cone on Sym^{*2}(S^1), hence acyclic",
        trusted_shape: None,
        run: |_| double_line_link(),
    },
    Entry {
        id: "lemma4a1",
        claim: "an open 3-simplex has H̄ = Q in degree 3, carried by the sign representation of S_4",
        trusted_shape: Some("the fiber over four generic points is an open 3-simplex"),
        run: |_| open_simplex(4, "J_4(a)"),
    },
    Entry {
        id: "lemma35",
        claim: "an open triangle has H̄ = Q in degree 2, carried by the sign representation of S_3",
        trusted_shape: Some("the fiber over three generic points is an open triangle"),
        run: |_| open_simplex(3, "J_3(a)"),
    },
];

pub fn registry() -> &'static [Entry] {
    REGISTRY
}

pub fn ids() -> Vec<&'static str> {
    REGISTRY.iter().map(|e| e.id).collect()
}

pub fn verify(id: &str, models: Models) -> Result<LemmaReport, VerifyError> {
    let entry = REGISTRY.iter().find(|e| e.id == id).ok_or_else(|| VerifyError::UnknownLemma(id.to_string()))?;
    let start = Instant::now();
    let (model, mut checks, certifies) = match (entry.run)(models) {
        Ok(o) => (o.model, o.checks, o.certifies),
        Err(e) => {
            let failed = Check { name: "error".into(), expected: "no error".into(), computed: e.to_string(), passed: false };
            (String::new(), vec![failed], BTreeMap::new())
        }
    };
    if checks.is_empty() {
        checks.push(Check { name: "ran".into(), expected: "checks".into(), computed: "none".into(), passed: false });
    }
    let all = checks.iter().all(|c| c.passed);
    let status = match (all, entry.trusted_shape) {
        (false, _) => Status::Fail,
        (true, Some(_)) => Status::Trusted,
        (true, None) => Status::Pass,
    };
    let expected = checks.iter().map(|c| format!("{}: {}", c.name, c.expected)).collect::<Vec<_>>().join("; ");
    let computed = checks.iter().map(|c| format!("{}: {}", c.name, c.computed)).collect::<Vec<_>>().join("; ");
    Ok(LemmaReport {
        id: entry.id.to_string(),
        claim: entry.claim.to_string(),
        model,
        status,
        expected,
        computed,
        checks,
        certifies,
        trusted_shape: entry.trusted_shape.map(str::to_string),
        runtime_ms: start.elapsed().as_millis() as u64,
    })
}

/// Runs the given verifications concurrently; reports come back in the order asked.
pub fn verify_many(ids: &[&str], models: Models) -> Result<Vec<LemmaReport>, VerifyError> {
    if let Some(bad) = ids.iter().find(|id| !REGISTRY.iter().any(|e| e.id == **id)) {
        return Err(VerifyError::UnknownLemma(bad.to_string()));
    }
    let reports = std::thread::scope(|s| {
        let handles: Vec<_> = ids.iter().map(|id| s.spawn(move || verify(id, models))).collect();
        handles.into_iter().map(|h| h.join().expect("verification thread panicked")).collect::<Vec<_>>()
    });
    reports.into_iter().collect()
}

pub fn verify_all(models: Models) -> Vec<LemmaReport> {
    verify_many(&ids(), models).expect("registry ids are known")
}

fn from_zero(b: &Betti) -> Vec<usize> {
    b.from_zero()
}

fn carat(r: usize, ns: &[usize]) -> Result<Outcome, BoxError> {
    let mut o = Outcome::new(format!("{r}-fold join of n-gons for n in {ns:?}, symmetric group on the factors"));
    let want = Betti::sphere(2 * r - 1).from_zero();
    for (i, &n) in ns.iter().enumerate() {
        let a = symmetric_join(n, r)?;
        let (orbit, _) = invariant_betti(&a)?;
        let psi = vec![1; a.generators().len()];
        let dim = a.complex().dim();
        let projector: Vec<usize> = (0..=dim).map(|d| isotypic_betti(&a, &psi, d)).collect::<Result<_, _>>()?;
        let projector = Betti::new(0, projector);
        o.check(format!("{n}-gon, orbit-sum complex"), want.clone(), from_zero(&orbit));
        o.check(format!("{n}-gon, homology projector"), want.clone(), from_zero(&projector));
        if i == 0 && r == 4 {
            o.degrees("J_5(a).fiber_bm", open_cone_bm(&orbit));
        }
    }
    Ok(o)
}

fn cycle_length(perm: &[usize]) -> usize {
    let mut c = perm[0];
    let mut len = 1;
    while c != 0 {
        c = perm[c];
        len += 1;
    }
    len
}

fn config_circle(p: usize) -> Result<Outcome, BoxError> {
    let model = discrete_config(&Graph::cycle(3), p)?;
    let mut o = Outcome::new(format!(
        "discrete configurations of {p} tokens on a {}-cycle",
        model.graph().vertices.len()
    ));
    o.check("Betti", vec![1, 1], model.betti().from_zero());
    let lp = model.generator_loop()?;
    let m = loop_monodromy_permutation(&model, &lp)?;
    let sign = [(2, -1i8), (3, 1), (4, -1)].iter().find(|(q, _)| *q == p).map_or(0, |x| x.1);
    o.check("monodromy sign", sign, m.sign);
    o.check("sign of the permutation", m.sign, permutation_sign(&m.perm));
    o.check("monodromy is a single p-cycle", p, cycle_length(&m.perm));
    Ok(o)
}

fn trace_cross_check(models: Models) -> Result<Outcome, BoxError> {
    let base = match models {
        Models::Full => barycentric_subdivision(&rp2()),
        Models::Quick => rp2(),
    };
    let mut o = Outcome::new(format!("deleted product of RP^2 with {} vertices", base.num_vertices()));
    let w = orientation_character(&base)?;
    let d = deleted_product(&base);
    let s = trace_character(TraceModel::DeletedProduct(&d), &base, &w)?;
    o.check("w is nontrivial on RP^2", false, w.is_trivial_class(&base));
    o.check("trace character is nontrivial", false, s.is_trivial_class(d.complex()));
    if d.complex().dim() == 4 && d.complex().is_pure() {
        let or = orientation_character(d.complex())?;
        o.check("trace character = orientation character, up to gauge", true, s.gauge_equivalent(d.complex(), &or));
    } else {
        o.model += "; orientation cross-check needs a 4-dimensional model (full models)";
    }
    for p in 2..=4 {
        let model = discrete_config(&Graph::cycle(3), p)?;
        let g = graph_complex(&model)?;
        let wg = enumerate_characters(&g).into_iter().find(|c| !c.is_trivial_class(&g)).ok_or("cycle has no nontrivial character")?;
        let chi = trace_character_config(&model, &g, &wg)?;
        let lp = model.generator_loop()?;
        o.check(format!("p = {p}: trace on the generator loop, edge by edge"), -1, config_loop_value(&model, &chi, &lp)?);
        o.check(format!("p = {p}: trace on the generator loop, token by token"), -1, token_trace_value(&model, &g, &wg, &lp)?);
    }
    Ok(o)
}

fn two_point_bm(models: Models) -> Result<Outcome, BoxError> {
    let base = match models {
        Models::Full => barycentric_subdivision(&rp2()),
        Models::Quick => rp2(),
    };
    let d = deleted_product(&base);
    let mut o = Outcome::new(format!(
        "RP^2 with {} vertices; deleted product f = {:?}",
        base.num_vertices(),
        d.complex().f_vector()
    ));
    let w = orientation_character(&base)?;
    let s = trace_character(TraceModel::DeletedProduct(&d), &base, &w)?;
    if d.complex().dim() == 4 && d.complex().is_pure() {
        let or = orientation_character(d.complex())?;
        o.check("trace and orientation characters agree up to gauge", true, s.gauge_equivalent(d.complex(), &or));
    } else {
        o.model += "; orientation cross-check needs a 4-dimensional model (full models)";
    }
    let one = Character::trivial(d.complex());
    let note = "the deleted product is a compact deformation retract of the open 4-manifold F(RP^2,2)";
    let nz = |v: Vec<usize>| v.into_iter().enumerate().filter(|(_, n)| *n > 0).map(|(i, n)| (i as i32, n)).collect::<Vec<_>>();
    let q = nz(bm_via_duality_quotient(&d.swap, &s, &[1], 4, note)?.bm);
    let pm = nz(bm_via_duality_quotient(&d.swap, &s, &[-1], 4, note)?.bm);
    let or = nz(bm_via_duality_quotient(&d.swap, &one, &[1], 4, note)?.bm);
    o.check("duality, Q", vec![], q.clone());
    o.check("duality, ±Q", vec![], pm.clone());
    o.check("duality, Or", vec![(1, 1), (4, 1)], or);
    let sq = square_with_diagonal(&base);
    let one2 = Character::trivial(sq.swap.complex());
    let s2 = trace_character(TraceModel::Square(&sq), &base, &w)?;
    let rel = |chi: &Character, psi: i8| -> Result<Vec<(i32, usize)>, BoxError> {
        Ok(isotypic_relative_twisted_betti(&sq.swap, chi, &sq.diagonal, &[psi])?.nonzero())
    };
    o.check("pair (K x K, diagonal), Q", vec![], rel(&one2, 1)?);
    o.check("pair (K x K, diagonal), ±Q", vec![], rel(&one2, -1)?);
    o.check("pair (K x K, diagonal), Or", vec![(1, 1), (4, 1)], rel(&s2, 1)?);
    o.degrees("J_2(a).base_bm", pm);
    o.degrees("J_5(b).base_bm", q);
    Ok(o)
}

fn rp2_rational() -> Result<Outcome, BoxError> {
    let mut o = Outcome::new("6-vertex RP^2 and its barycentric subdivision");
    let k = rp2();
    o.check("Betti", vec![(0, 1)], k.betti().nonzero());
    o.check("Betti, subdivided", vec![(0, 1)], barycentric_subdivision(&k).betti().nonzero());
    o.degrees("J_1.base_bm", k.betti().nonzero());
    o.degrees("J_3(b).base_bm", k.betti().nonzero());
    Ok(o)
}

fn rp2_twisted() -> Result<Outcome, BoxError> {
    let mut o = Outcome::new("6-vertex RP^2 and its barycentric subdivision, orientation character");
    let mut first = None;
    for k in [rp2(), barycentric_subdivision(&rp2())] {
        let w = orientation_character(&k)?;
        let nontrivial = enumerate_characters(&k).into_iter().find(|c| !c.is_trivial_class(&k)).ok_or("no nontrivial character")?;
        o.check(format!("{} vertices: Or is the nontrivial class", k.num_vertices()), true, w.gauge_equivalent(&k, &nontrivial));
        let b = twisted_betti(&k, &w)?.nonzero();
        o.check(format!("{} vertices: H(RP^2; Or)", k.num_vertices()), vec![(2, 1)], b.clone());
        first.get_or_insert(b);
    }
    let b = first.expect("two models");
    o.degrees("J_4(b).base_bm", b.clone());
    o.degrees("J_5(a).base_bm", b);
    Ok(o)
}

/// H̄ of the open cone on `link` as the homology of (closed cone, link).
fn open_cone_relative(link: &SimplicialComplex) -> Result<Vec<(i32, usize)>, BoxError> {
    let c = cone_with_apex(link, "X")?;
    Ok(c.relative_betti(link)?.nonzero())
}

fn links_3cd() -> Result<Outcome, BoxError> {
    let mut o = Outcome::new("lower link in the J_3(c) poset fixture; singular point link over a hexagon");
    let p = shipped_poset(J3C);
    let link = lower_link(&p, "X")?;
    o.check("J_3(c) link f-vector (a path)", vec![4, 3], link.f_vector());
    o.check("J_3(c) link reduced Betti", vec![], link.reduced_betti().nonzero());
    let closed = subordinate_complex(&p, "X")?;
    let fiber = closed.relative_betti(&link)?.nonzero();
    o.check("J_3(c) fiber H̄", vec![], fiber.clone());
    o.degrees("J_3(c).fiber_bm", fiber);
    let disc = singular_point_link(6);
    o.check("J_3(d) link reduced Betti", vec![], disc.reduced_betti().nonzero());
    o.check("J_3(d) link is a disc", true, is_disc(&disc));
    let fiber = open_cone_relative(&disc)?;
    o.check("J_3(d) fiber H̄", vec![], fiber.clone());
    o.degrees("J_3(d).fiber_bm", fiber);
    Ok(o)
}

fn line_link() -> Result<Outcome, BoxError> {
    let mut o = Outcome::new("cone on the join of two n-gons with the swap fixing the apex, n = 3, 4");
    for n in [3, 4] {
        let a = symmetric_join(n, 2)?;
        let c = coned(&a)?;
        let rel = isotypic_relative_betti(&c, a.complex(), &[1])?.nonzero();
        let (orbit, _) = invariant_betti(&a)?;
        o.check(format!("{n}-gon: H of (cone, link) modulo the swap"), vec![(4, 1)], rel.clone());
        o.check(format!("{n}-gon: shifted reduced homology of the link"), vec![(4, 1)], open_cone_bm(&orbit));
        if n == 3 {
            o.degrees("J_3(b).fiber_bm", rel);
        }
    }
    Ok(o)
}

fn links_4cde() -> Result<Outcome, BoxError> {
    let mut o = Outcome::new("lower links in the J_4(c), J_4(d) poset fixtures; two cones glued along a segment");
    for (name, text) in [("J_4(c)", J4C), ("J_4(d)", J4D)] {
        let p = shipped_poset(text);
        let link = lower_link(&p, "X")?;
        o.check(format!("{name} link reduced Betti"), vec![], link.reduced_betti().nonzero());
        let fiber = subordinate_complex(&p, "X")?.relative_betti(&link)?.nonzero();
        o.check(format!("{name} fiber H̄"), vec![], fiber.clone());
        o.degrees(&format!("{name}.fiber_bm"), fiber);
    }
    let (line, point, union) = line_with_singular_point();
    let meet = intersection(&line, &point);
    o.check("J_4(e) order complex of the line", vec![], line.reduced_betti().nonzero());
    o.check("J_4(e) order complex of the point", vec![], point.reduced_betti().nonzero());
    o.check("J_4(e) intersection is a segment", vec![2, 1], meet.f_vector());
    o.check("J_4(e) union reduced Betti", vec![], union.reduced_betti().nonzero());
    let chi = |k: &SimplicialComplex| k.euler_characteristic();
    o.check("J_4(e) Mayer-Vietoris Euler count", chi(&union), chi(&line) + chi(&point) - chi(&meet));
    let fiber = open_cone_relative(&union)?;
    o.check("J_4(e) fiber H̄", vec![], fiber.clone());
    o.degrees("J_4(e).fiber_bm", fiber);
    Ok(o)
}

fn suspension_link() -> Result<Outcome, BoxError> {
    let mut o = Outcome::new("suspension of the join of two n-gons with the swap fixing both apexes, n = 3, 4");
    for n in [3, 4] {
        let s = suspended(&symmetric_join(n, 2)?)?;
        let (orbit, projector) = invariant_betti(&s)?;
        o.check(format!("{n}-gon, orbit-sum complex"), Betti::sphere(4).from_zero(), orbit.from_zero());
        o.check(format!("{n}-gon, homology projector"), Betti::sphere(4).from_zero(), projector.from_zero());
        if n == 3 {
            o.degrees("J_4(b).fiber_bm", open_cone_bm(&orbit));
        }
    }
    Ok(o)
}

/// The chain map of a signed cell permutation of a simplicial chain complex.
fn chain_map(cx: &ChainComplex, map: &CellMap) -> Result<ChainMap, BoxError> {
    let mut components = BTreeMap::new();
    for (d, perm) in map.iter().enumerate() {
        let n = perm.image.len();
        let t = (0..n).map(|i| (perm.image[i], i, rational(perm.sign[i] as i64)));
        components.insert(d as i32, RationalMatrix::from_triplets(n, n, t));
    }
    Ok(ChainMap::new(cx, cx, components)?)
}

fn top_degree_sign(action: &GroupAction, g: &[usize]) -> Result<i64, BoxError> {
    let cx = action.complex().to_chain_complex();
    let f = chain_map(&cx, &action.cell_map(g))?;
    let top = cx.max_degree();
    let m = induced_map(&cx, &cx, &f, top);
    if (m.rows(), m.cols()) != (1, 1) {
        return Err(format!("top homology has rank {}", m.rows()).into());
    }
    let v = m.get(0, 0);
    if v == rational(1) {
        Ok(1)
    } else if v == rational(-1) {
        Ok(-1)
    } else {
        Err(format!("induced map is {v}").into())
    }
}

fn join_signs() -> Result<Outcome, BoxError> {
    let mut o = Outcome::new("r-fold join of triangles, r = 2, 3, 4; induced maps on the top homology");
    let reflection = [0, 2, 1];
    let mut trivial = BTreeMap::new();
    for r in [2usize, 3, 4] {
        let a = symmetric_join(3, r)?;
        let swap = top_degree_sign(&a, &a.generators()[0])?;
        let refl = top_degree_sign(&a, &diagonal_map(&reflection, r))?;
        o.check(format!("r = {r}: factor swap"), 1, swap);
        o.check(format!("r = {r}: simultaneous reflection"), if r % 2 == 0 { 1 } else { -1 }, refl);
        trivial.insert(r, swap == 1 && refl == 1);
    }
    let class = |r: usize| if trivial[&r] { "trivial" } else { "nontrivial" };
    o.character("J_3(b).monodromy", class(2));
    o.character("J_5(a).monodromy", class(4));
    Ok(o)
}

fn two_lines_link() -> Result<Outcome, BoxError> {
    let mut o = Outcome::new("shipped cell ledger of the link of a pair of lines");
    let l = CellLedger::shipped();
    let b = l.complex()?.betti();
    o.check("Betti", Betti::sphere(7).from_zero(), b.from_zero());
    o.check("residual reduced Betti", vec![], l.residual_complex()?.reduced_betti()?.nonzero());
    let cf = l.with_first_zeroed("unit").complex()?.betti();
    o.check("counterfactual: first unit block zeroed (non-paper)", vec![1, 0, 0, 0, 0, 2, 2, 1], cf.from_zero());
    o.degrees("J_5(b).fiber_bm", open_cone_bm(&b));
    Ok(o)
}

fn double_line_link() -> Result<Outcome, BoxError> {
    let mut o = Outcome::new("cone on the join of two triangles with the swap fixing the apex");
    let c = coned(&symmetric_join(3, 2)?)?;
    let (orbit, projector) = invariant_betti(&c)?;
    o.check("orbit-sum complex", Betti::point().from_zero(), orbit.from_zero());
    o.check("homology projector", Betti::point().from_zero(), projector.from_zero());
    o.degrees("J_5(c).fiber_bm", open_cone_bm(&orbit));
    Ok(o)
}

fn open_simplex(n: usize, stratum: &str) -> Result<Outcome, BoxError> {
    let d = n as i32 - 1;
    let mut o = Outcome::new(format!("the {d}-simplex modulo its boundary, S_{n} permuting the vertices"));
    let gens = (0..n - 1).map(|i| (0..n).map(|v| if v == i { i + 1 } else if v == i + 1 { i } else { v }).collect()).collect();
    let a = GroupAction::new(simplex(n), gens)?;
    let boundary = simplex_boundary(n);
    let all = a.complex().relative_betti(&boundary)?.nonzero();
    o.check("H̄ of the open simplex", vec![(d, 1)], all.clone());
    let sign = isotypic_relative_betti(&a, &boundary, &vec![-1; n - 1])?.nonzero();
    let inv = isotypic_relative_betti(&a, &boundary, &vec![1; n - 1])?.nonzero();
    o.check("sign-isotypic part", vec![(d, 1)], sign);
    o.check("invariant part", vec![], inv.clone());
    o.degrees(&format!("{stratum}.fiber_bm"), all);
    o.character(&format!("{stratum}.monodromy"), if inv.is_empty() { "±Q" } else { "trivial" });
    Ok(o)
}
