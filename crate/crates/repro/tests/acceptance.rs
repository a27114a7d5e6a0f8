use std::collections::BTreeMap;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigInt;
use num_traits::{One, Zero};
use ordercx_core::chain::{Betti, ChainComplex};
use ordercx_core::linalg::RationalMatrix;
use ordercx_core::poset::{lower_link, order_complex, rank_filtration, subspace_poset_f2};
use ordercx_core::simplicial::action::isotypic_betti;
use ordercx_core::simplicial::models::{klein_bottle, octahedron, polygon, rp2, simplex_boundary, torus};
use ordercx_core::simplicial::{
    barycentric_subdivision, deleted_product, discrete_config, loop_monodromy_permutation, Graph, SimplicialComplex,
};
use ordercx_core::specseq::{pages, total_betti_check, FilteredChainComplex};
use ordercx_core::twist::{enumerate_characters, orientation_character, twisted_complex};
use ordercx_repro::cells::{lemma5b_link, CellLedger};
use ordercx_repro::models::{
    invariant_betti, is_disc, shipped_poset, singular_point_link, suspended, symmetric_join, J4C, J4D, J3C,
};
use ordercx_repro::verify::{verify, LemmaReport, Models, Status};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

fn timed<T>(limit: Duration, what: &str, f: impl FnOnce() -> T) -> Result<(T, Duration), String> {
    let start = Instant::now();
    let out = f();
    let took = start.elapsed();
    ensure!(took < limit, "{what} took {took:?}, limit {limit:?}");
    Ok((out, took))
}

fn check_value(report: &LemmaReport, name: &str) -> Result<String, String> {
    report
        .checks
        .iter()
        .find(|c| c.name == name)
        .map(|c| c.computed.clone())
        .ok_or_else(|| format!("{} has no check named {name:?}", report.id))
}

fn run_lemma(id: &str, models: Models) -> Result<LemmaReport, String> {
    let r = verify(id, models).map_err(|e| e.to_string())?;
    ensure!(r.status == Status::Pass, "{id} did not pass: {}", r.computed);
    Ok(r)
}

fn criterion_1() -> Outcome {
    let (out, took) = timed(Duration::from_secs(1), "reproduce fig1", || {
        Command::new(env!("CARGO_BIN_EXE_ordercx")).args(["reproduce", "fig1", "--format", "json"]).output()
    })?;
    let out = out.map_err(|e| e.to_string())?;
    ensure!(out.status.code() == Some(0), "exit status {:?}: {}", out.status, String::from_utf8_lossy(&out.stderr));
    let report: Value = serde_json::from_slice(&out.stdout).map_err(|e| e.to_string())?;
    let grid = &report["e1_grid"];
    let want = [(1, -1), (3, 5), (4, 5), (5, 8)];
    for p in 1..=5i32 {
        for q in -1..=9i32 {
            let n = grid[(p - 1) as usize][(q + 1) as usize].as_u64().ok_or("grid entry missing")?;
            let expect = u64::from(want.contains(&(p, q)));
            ensure!(n == expect, "E^1_({p},{q}) = {n}, expected {expect}");
        }
    }
    let d1 = &report["pages"][0]["differentials"];
    ensure!(d1.as_array().map(Vec::len) == Some(1), "expected one d^1, got {d1}");
    ensure!(
        d1[0]["source"] == "(4,5)" && d1[0]["target"] == "(3,5)" && d1[0]["rank"] == 1,
        "unexpected d^1 {}",
        d1[0]
    );
    let betti: Vec<u64> = serde_json::from_value(report["final_betti"].clone()).map_err(|e| e.to_string())?;
    let mut expect = vec![0u64; 14];
    expect[0] = 1;
    expect[13] = 1;
    ensure!(betti == expect, "final Betti {betti:?}");
    ensure!(report["non_paper"] == false && report["audit"]["passed"] == true, "report flags {}", report["audit"]);
    Ok(format!("E^1 matches, H = Q in degrees 0 and 13, {took:?}"))
}

fn criterion_2() -> Outcome {
    let (reports, took) = timed(Duration::from_secs(120), "carat-r2 and carat-r3", || {
        (run_lemma("carat-r2", Models::Full), run_lemma("carat-r3", Models::Full))
    })?;
    let (r2, r3) = (reports.0?, reports.1?);
    for (r, sphere) in [(2usize, 3usize), (3, 5)] {
        let want = Betti::sphere(sphere).from_zero();
        for n in [3, 4] {
            let a = symmetric_join(n, r).map_err(|e| e.to_string())?;
            let psi = vec![1; a.generators().len()];
            let projector: Vec<usize> = (0..=a.complex().dim())
                .map(|d| isotypic_betti(&a, &psi, d).map_err(|e| e.to_string()))
                .collect::<Result<_, _>>()?;
            let (orbit, _) = invariant_betti(&a).map_err(|e| e.to_string())?;
            ensure!(projector == want, "r = {r}, {n}-gon: projector gives {projector:?}");
            ensure!(orbit.from_zero() == want, "r = {r}, {n}-gon: orbit complex gives {:?}", orbit.from_zero());
        }
    }
    let stable = [&r2, &r3].iter().all(|r| r.checks.iter().any(|c| c.name.starts_with("4-gon")));
    ensure!(stable, "the 4-gon model was not checked");
    Ok(format!("S^3 and S^5 on 3- and 4-gons, carat-r3 {} ms, both {took:?}", r3.runtime_ms))
}

fn criterion_3() -> Outcome {
    let (r, took) = timed(Duration::from_secs(300), "lemma11", || run_lemma("lemma11", Models::Full))?;
    let r = r?;
    ensure!(check_value(&r, "duality, Q")? == "[]", "Q part not zero");
    ensure!(check_value(&r, "duality, ±Q")? == "[]", "±Q part not zero");
    ensure!(check_value(&r, "duality, Or")? == "[(1, 1), (4, 1)]", "Or part wrong");
    ensure!(check_value(&r, "pair (K x K, diagonal), Or")? == "[(1, 1), (4, 1)]", "relative Or part wrong");
    ensure!(check_value(&r, "trace and orientation characters agree up to gauge")? == "true", "characters differ");
    let r77 = run_lemma("lemma77", Models::Full)?;
    ensure!(check_value(&r77, "trace character = orientation character, up to gauge")? == "true", "lemma77 characters differ");
    Ok(format!("Q = ±Q = 0, Or = Q in degrees 1 and 4, characters agree, {took:?}"))
}

fn criterion_4() -> Outcome {
    let (res, took) = timed(Duration::from_secs(60), "discrete configurations", || -> Result<(), String> {
        for (p, sign) in [(2usize, -1i8), (3, 1), (4, -1)] {
            let model = discrete_config(&Graph::cycle(3), p).map_err(|e| e.to_string())?;
            ensure!(model.betti().from_zero() == vec![1, 1], "p = {p}: Betti {:?}", model.betti().from_zero());
            let lp = model.generator_loop().map_err(|e| e.to_string())?;
            let m = loop_monodromy_permutation(&model, &lp).map_err(|e| e.to_string())?;
            ensure!(m.sign == sign, "p = {p}: monodromy sign {}", m.sign);
            run_lemma(&format!("lemma1-p{p}"), Models::Full)?;
        }
        Ok(())
    })?;
    res?;
    Ok(format!("Betti (1,1) with signs -1, +1, -1, {took:?}"))
}

fn criterion_5() -> Outcome {
    for (name, text) in [("J_4(c)", J4C), ("J_4(d)", J4D)] {
        let link = lower_link(&shipped_poset(text), "X").map_err(|e| e.to_string())?;
        ensure!(link.reduced_betti().is_zero(), "{name}: reduced Betti {:?}", link.reduced_betti());
    }
    let j3c = lower_link(&shipped_poset(J3C), "X").map_err(|e| e.to_string())?;
    ensure!(j3c.reduced_betti().is_zero() && j3c.dim() == 1, "J_3(c) link is not a contractible graph");
    let j3d = singular_point_link(6);
    ensure!(j3d.reduced_betti().is_zero() && is_disc(&j3d), "J_3(d) link is not a disc");
    run_lemma("lemma3cd", Models::Full)?;
    run_lemma("lemma442", Models::Full)?;
    Ok("J_4(c) and J_4(d) links acyclic, J_3(c) and J_3(d) links contractible".into())
}

fn criterion_6() -> Outcome {
    let b = lemma5b_link().map_err(|e| e.to_string())?;
    ensure!(b.from_zero() == vec![1, 0, 0, 0, 0, 0, 0, 1], "Betti {:?}", b.from_zero());
    let residual = CellLedger::shipped().residual_complex().map_err(|e| e.to_string())?;
    let reduced = residual.reduced_betti().map_err(|e| e.to_string())?;
    ensure!(reduced.is_zero(), "residual reduced Betti {reduced:?}");
    Ok("cell ledger gives S^7, residual acyclic".into())
}

fn criterion_7() -> Outcome {
    let r = run_lemma("lemma33", Models::Full)?;
    ensure!(check_value(&r, "r = 2: factor swap")? == "1", "swap on H_3");
    ensure!(check_value(&r, "r = 2: simultaneous reflection")? == "1", "reflection for r = 2");
    ensure!(check_value(&r, "r = 3: simultaneous reflection")? == "-1", "reflection for r = 3");
    Ok("swap +1; reflection +1 (r = 2), -1 (r = 3)".into())
}

fn criterion_8() -> Outcome {
    let a = suspended(&symmetric_join(3, 2).map_err(|e| e.to_string())?).map_err(|e| e.to_string())?;
    let (orbit, projector) = invariant_betti(&a).map_err(|e| e.to_string())?;
    let want = Betti::sphere(4).from_zero();
    ensure!(orbit.from_zero() == want && projector.from_zero() == want, "got {:?} / {:?}", orbit, projector);
    run_lemma("lemma417", Models::Full)?;
    Ok("suspension has the Betti numbers of S^4".into())
}

/// Fraction-free elimination on a dense integer copy.
fn bareiss_rank(m: &RationalMatrix) -> usize {
    let mut a: Vec<Vec<BigInt>> = m
        .to_dense()
        .into_iter()
        .map(|row| {
            row.into_iter()
                .map(|x| {
                    assert!(x.is_integer(), "integral boundary expected");
                    x.to_integer()
                })
                .collect()
        })
        .collect();
    let (rows, cols) = (m.rows(), m.cols());
    let mut prev = BigInt::one();
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..rows).find(|&i| !a[i][c].is_zero()) else { continue };
        a.swap(r, p);
        for i in r + 1..rows {
            for j in c + 1..cols {
                a[i][j] = (&a[r][c] * &a[i][j] - &a[i][c] * &a[r][j]) / &prev;
            }
            a[i][c] = BigInt::zero();
        }
        prev = a[r][c].clone();
        r += 1;
        if r == rows {
            break;
        }
    }
    r
}

fn oracle_betti(cx: &ChainComplex) -> BTreeMap<i32, usize> {
    let rank = |d: i32| if cx.degrees().contains(&d) { bareiss_rank(&cx.boundary(d)) } else { 0 };
    cx.degrees().map(|d| (d, cx.num_cells(d) - rank(d) - rank(d + 1))).collect()
}

fn random_filtered(rng: &mut ChaCha8Rng) -> FilteredChainComplex {
    loop {
        let n = rng.gen_range(3..=7);
        let facets: Vec<Vec<usize>> = (0..rng.gen_range(1..=6))
            .map(|_| {
                let mut f: Vec<usize> = (0..n).filter(|_| rng.gen_bool(0.45)).collect();
                if f.is_empty() {
                    f.push(rng.gen_range(0..n));
                }
                f.truncate(4);
                f
            })
            .collect();
        let labels = (0..n).map(|v| format!("v{v}")).collect();
        let Ok(k) = SimplicialComplex::from_facets(labels, facets) else { continue };
        if k.total_simplices() > 60 {
            continue;
        }
        let mut level: Vec<Vec<i32>> = Vec::new();
        for d in 0..=k.dim() as usize {
            let row = k
                .simplices(d)
                .iter()
                .map(|s| {
                    let own = rng.gen_range(0..4);
                    if d == 0 {
                        return own;
                    }
                    (0..s.len())
                        .map(|i| {
                            let mut face = s.clone();
                            face.remove(i);
                            let fi = k.simplices(d - 1).iter().position(|t| *t == face).expect("closed");
                            level[d - 1][fi]
                        })
                        .fold(own, i32::max)
                })
                .collect();
            level.push(row);
        }
        return FilteredChainComplex::new(k.to_chain_complex(), level).expect("monotone by construction");
    }
}

fn nilpotent(cx: &ChainComplex) -> bool {
    cx.degrees().skip(1).all(|d| {
        !cx.degrees().contains(&(d + 1)) || cx.boundary(d).mul(&cx.boundary(d + 1)).map(|m| m.is_zero()).unwrap_or(false)
    })
}

fn cell_euler(cx: &ChainComplex) -> i64 {
    cx.degrees().map(|d| if d.rem_euclid(2) == 0 { 1 } else { -1 } * cx.num_cells(d) as i64).sum()
}

fn corpus() -> Vec<(String, ChainComplex)> {
    let mut out: Vec<(String, ChainComplex)> = Vec::new();
    let mut spaces = vec![
        ("pentagon".to_string(), polygon(5)),
        ("boundary of the 4-simplex".to_string(), simplex_boundary(4)),
        ("octahedron".to_string(), octahedron()),
        ("RP^2".to_string(), rp2()),
        ("sd RP^2".to_string(), barycentric_subdivision(&rp2())),
        ("torus".to_string(), torus()),
        ("Klein bottle".to_string(), klein_bottle()),
        ("deleted product of RP^2".to_string(), deleted_product(&rp2()).complex().clone()),
        ("join of two triangles".to_string(), symmetric_join(3, 2).expect("join").complex().clone()),
        ("F_2^3 subspace order complex".to_string(), order_complex(&subspace_poset_f2(3)).complex),
    ];
    for (name, text) in [("J_4(c) link", J4C), ("J_4(d) link", J4D), ("J_3(c) link", J3C)] {
        spaces.push((name.to_string(), lower_link(&shipped_poset(text), "X").expect("fixture")));
    }
    for (name, k) in &spaces {
        out.push((name.clone(), k.to_chain_complex()));
        if k.num_simplices(1) <= 40 {
            for (i, chi) in enumerate_characters(k).into_iter().enumerate().take(4) {
                out.push((format!("{name}, character {i}"), twisted_complex(k, &chi).expect("twist").base));
            }
        }
        if let Ok(w) = orientation_character(k) {
            out.push((format!("{name}, orientation twist"), twisted_complex(k, &w).expect("twist").base));
        }
    }
    for p in 2..=4 {
        out.push((format!("B(S^1,{p}) cube model"), discrete_config(&Graph::cycle(3), p).expect("config").to_chain_complex()));
    }
    out.push(("cell ledger".into(), CellLedger::shipped().complex().expect("cells")));
    out
}

fn criterion_9() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    for i in 0..50 {
        let f = random_filtered(&mut rng);
        let (lo, hi) = f.level_range().unwrap_or((0, 0));
        ensure!(f.total().total_cells() <= 60 && hi - lo < 4, "sample {i} out of bounds");
        let ss = pages(&f).map_err(|e| e.to_string())?;
        ensure!(total_betti_check(&f, &ss).passed(), "sample {i}: E^inf disagrees with total Betti");
        let oracle = oracle_betti(f.total());
        let totals = ss.infinity_totals();
        for (&d, &b) in &oracle {
            ensure!(totals.get(&d).copied().unwrap_or(0) == b, "sample {i}, degree {d}: E^inf vs oracle {b}");
        }
    }
    let corpus = corpus();
    for (name, cx) in &corpus {
        ensure!(nilpotent(cx), "{name}: boundary squared is nonzero");
        ensure!(cell_euler(cx) == cx.betti().euler(), "{name}: Euler characteristic mismatch");
    }
    let poset = subspace_poset_f2(3);
    let oc = order_complex(&poset).complex.to_chain_complex();
    let dense = oracle_betti(&oc);
    let h1_dense = dense.get(&1).copied().unwrap_or(0);
    let f = rank_filtration(&poset).map_err(|e| e.to_string())?;
    let ss = pages(&f).map_err(|e| e.to_string())?;
    let h1_seq = ss.infinity_totals().get(&1).copied().unwrap_or(0);
    ensure!(h1_dense == 8 && h1_seq == 8, "reduced H_1 of the F_2 poset: dense {h1_dense}, spectral {h1_seq}");
    ensure!(dense.get(&0) == Some(&1), "F_2 order complex is not connected");
    Ok(format!("50 filtered samples converge, {} corpus complexes nilpotent with matching Euler, H_1 = 8 twice", corpus.len()))
}

#[test]
fn acceptance() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 fig1 reproduction", criterion_1),
        ("2 symmetric joins of circles", criterion_2),
        ("3 two-point configurations of RP^2", criterion_3),
        ("4 discrete configurations on a cycle", criterion_4),
        ("5 order complexes of the fixtures", criterion_5),
        ("6 cell ledger of the two-line link", criterion_6),
        ("7 join orientation signs", criterion_7),
        ("8 suspended symmetric join", criterion_8),
        ("9 engine soundness", criterion_9),
    ];
    let mut failed = Vec::new();
    for (name, run) in criteria {
        match run() {
            Ok(detail) => println!("criterion {name}: PASS ({detail})"),
            Err(why) => {
                println!("criterion {name}: FAIL ({why})");
                failed.push(name);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
