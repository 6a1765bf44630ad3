//! Acceptance suite: one line per criterion, non-zero exit if any fails.

mod common;

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use classagg::axioms::{check_essential_dictatorship, Caf};
use classagg::cli::{dispatch, render_table1};
use classagg::model::{CategoryPermutation, CategoryVector, Individual};
use classagg::rules::{make_essential_dictatorship, table1_plurality, table1_profiles};
use classagg::search::{enumerate_independent_cafs, SearchReport, SearchSpec, TableConstraint};
use classagg::theorem_lab::{
    build_lemma_profile, check_complementary_pairs, compute_pi, constant_image_violation,
    extract_dictator_pivotal, replay_generalized_unanimity, satisfies_complement_rule,
    verify_claim_with_population, Claim, ClaimOptions, LemmaStage,
};
use classagg::{Axiom, Budget, Category, IndependentCaf, Params};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn ensure(ok: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(what())
    }
}

fn params(n: usize, m: usize, rho: usize) -> Params {
    Params::new(n, m, rho).expect("admissible sizes")
}

fn options(prune: bool) -> ClaimOptions {
    ClaimOptions {
        prune,
        ..ClaimOptions::default()
    }
}

fn population(claim: Claim, p: Params) -> Result<Vec<IndependentCaf>, String> {
    verify_claim_with_population(claim, &p, options(true))
        .map(|(_, cafs)| cafs)
        .map_err(|e| e.to_string())
}

fn criterion_1() -> Outcome {
    let golden = include_str!("../golden/table1.txt");
    let rendered = render_table1().map_err(|e| e.to_string())?;
    ensure(rendered == golden, || {
        "rendered table differs from golden file".into()
    })?;

    let plurality = table1_plurality();
    let (c, c_prime) = table1_profiles();
    let out = |p| {
        plurality
            .evaluate(p)
            .iter()
            .map(|c: &Category| c.index())
            .collect::<Vec<_>>()
    };
    // p = 0, q = 1
    ensure(out(&c) == [0, 1, 1], || format!("alpha(c) = {:?}", out(&c)))?;
    ensure(out(&c_prime) == [1, 1, 0], || {
        format!("alpha(c') = {:?}", out(&c_prime))
    })?;

    let (mut stdout, mut stderr) = (Vec::new(), Vec::new());
    let argv: Vec<String> = ["classagg", "demo", "table1"].map(String::from).to_vec();
    let code = dispatch(&argv, &mut stdout, &mut stderr);
    ensure(code == 0 && stdout == golden.as_bytes(), || {
        format!(
            "demo exited {code}, output matches: {}",
            stdout == golden.as_bytes()
        )
    })?;
    Ok("alpha(c) = (p, q, q), alpha(c') = (q, q, p), byte-exact".into())
}

fn census_set(cafs: &[IndependentCaf]) -> BTreeSet<common::Tables> {
    cafs.iter().map(common::raw).collect()
}

fn criterion_2() -> Outcome {
    let p = params(2, 3, 2);
    let cafs = population(Claim::Thm1, p)?;
    let expected: BTreeSet<common::Tables> = (0..2)
        .flat_map(|d| common::permutations(2).into_iter().map(move |pi| (d, pi)))
        .map(|(d, pi)| common::essential_tables(2, 3, 2, d, &pi))
        .collect();
    let oracle = common::brute_population(2, 3, 2, false, |t, profiles| {
        common::sovereign(t, profiles, 2)
    });
    ensure(oracle == expected, || {
        format!("oracle found {} CAFs", oracle.len())
    })?;
    ensure(census_set(&cafs) == expected, || {
        format!("search found {} CAFs", cafs.len())
    })?;
    Ok("4096 tuples -> exactly the 4 essential dictatorships (search and oracle)".into())
}

fn criterion_3() -> Outcome {
    let p = params(2, 3, 2);
    let cafs = population(Claim::Coro1, p)?;
    let expected: BTreeSet<common::Tables> = (0..2)
        .map(|d| common::essential_tables(2, 3, 2, d, &[0, 1]))
        .collect();
    let oracle = common::brute_population(2, 3, 2, false, |t, _| common::unanimous(t, 3, 2, 2));
    ensure(oracle == expected, || {
        format!("oracle found {} CAFs", oracle.len())
    })?;
    ensure(census_set(&cafs) == expected, || {
        format!("search found {} CAFs", cafs.len())
    })?;
    Ok("unanimous census = the 2 dictatorships (search and oracle)".into())
}

fn criterion_4() -> Outcome {
    let mut lines = Vec::new();
    for (n, count) in [(2usize, 4usize), (3, 64)] {
        let p = params(n, 2, 2);
        let (verdict, cafs) = verify_claim_with_population(Claim::Prop1, &p, options(false))
            .map_err(|e| e.to_string())?;
        let oracle = common::brute_population(n, 2, 2, false, |t, _| common::unanimous(t, 2, n, 2));
        ensure(verdict.holds, || format!("prop1 fails at n={n}"))?;
        ensure(cafs.len() == count && oracle.len() == count, || {
            format!(
                "n={n}: search {} oracle {} expected {count}",
                cafs.len(),
                oracle.len()
            )
        })?;
        ensure(census_set(&cafs) == oracle, || {
            format!("n={n}: search and oracle differ")
        })?;
        ensure(cafs.iter().all(satisfies_complement_rule), || {
            format!("n={n}: a CAF breaks the complement rule")
        })?;
        let mut dictatorships = 0;
        let mut not_essential = 0;
        for caf in &cafs {
            match check_essential_dictatorship(caf, Budget::default()).map_err(|e| e.to_string())? {
                Some(e) if e.is_dictatorship() => dictatorships += 1,
                Some(_) => {}
                None => not_essential += 1,
            }
        }
        ensure(dictatorships == n, || {
            format!("n={n}: {dictatorships} dictatorships")
        })?;
        ensure(not_essential >= 1, || {
            format!("n={n}: every CAF is an essential dictatorship")
        })?;
        ensure(
            verdict.dictatorships == dictatorships as u64
                && verdict.not_essential_dictatorships == not_essential as u64,
            || format!("n={n}: verdict counts disagree"),
        )?;
        lines.push(format!(
            "n={n}: {count} CAFs, {dictatorships} dictatorships, {not_essential} not essential"
        ));
    }
    Ok(lines.join("; "))
}

fn criterion_5() -> Outcome {
    let p = params(2, 3, 3);
    let (verdict, cafs) =
        verify_claim_with_population(Claim::Thm2, &p, options(true)).map_err(|e| e.to_string())?;
    ensure(
        verdict.holds && cafs.len() == 2 && verdict.dictatorships == 2,
        || format!("holds {} population {}", verdict.holds, cafs.len()),
    )?;
    let expected: BTreeSet<common::Tables> = (0..2)
        .map(|d| common::essential_tables(2, 3, 3, d, &[0, 1, 2]))
        .collect();
    ensure(census_set(&cafs) == expected, || {
        "survivors are not the dictatorships".into()
    })?;
    Ok(format!(
        "{} unanimous-table candidates -> 2 dictatorships",
        verdict.search.candidates
    ))
}

fn criterion_6() -> Outcome {
    let p = params(3, 3, 2);
    let (verdict, cafs) =
        verify_claim_with_population(Claim::Thm1, &p, options(true)).map_err(|e| e.to_string())?;
    let expected: BTreeSet<common::Tables> = (0..3)
        .flat_map(|d| common::permutations(2).into_iter().map(move |pi| (d, pi)))
        .map(|(d, pi)| common::essential_tables(3, 3, 2, d, &pi))
        .collect();
    ensure(verdict.holds && census_set(&cafs) == expected, || {
        format!("holds {} population {}", verdict.holds, cafs.len())
    })?;
    Ok(format!(
        "{} candidates -> 6 essential dictatorships",
        verdict.search.candidates
    ))
}

fn all_populations() -> Result<Vec<(String, Vec<IndependentCaf>)>, String> {
    Ok(vec![
        (
            "thm1 (2,3,2)".into(),
            population(Claim::Thm1, params(2, 3, 2))?,
        ),
        (
            "coro1 (2,3,2)".into(),
            population(Claim::Coro1, params(2, 3, 2))?,
        ),
        (
            "prop1 n=2".into(),
            population(Claim::Prop1, params(2, 2, 2))?,
        ),
        (
            "prop1 n=3".into(),
            population(Claim::Prop1, params(3, 2, 2))?,
        ),
        (
            "thm2 (2,3,3)".into(),
            population(Claim::Thm2, params(2, 3, 3))?,
        ),
        (
            "thm1 (3,3,2)".into(),
            population(Claim::Thm1, params(3, 3, 2))?,
        ),
    ])
}

fn criterion_7() -> Outcome {
    let budget = Budget::default();
    let mut compared = 0;
    for (name, cafs) in all_populations()? {
        for caf in &cafs {
            let Some(found) =
                check_essential_dictatorship(caf, budget).map_err(|e| e.to_string())?
            else {
                continue;
            };
            let report = extract_dictator_pivotal(caf, budget)
                .map_err(|e| format!("{name}: pivotal extraction failed: {e}"))?;
            ensure(
                report.verified
                    && report.individual == found.individual
                    && report.permutation == found.permutation,
                || format!("{name}: pivotal and exhaustive disagree"),
            )?;
            compared += 1;
        }
    }
    Ok(format!("{compared} CAFs, identical (d, pi), all verified"))
}

fn criterion_8() -> Outcome {
    let budget = Budget::default();
    let cafs = population(Claim::Thm1, params(2, 3, 2))?;
    for caf in &cafs {
        let pi = compute_pi(caf, budget).map_err(|e| format!("(a) {e}"))?;
        ensure(constant_image_violation(caf, &pi).is_none(), || {
            "(a) alpha_x(p..p) != pi(p)".into()
        })?;
        let replayed = replay_generalized_unanimity(caf, budget).map_err(|e| format!("(a) {e}"))?;
        ensure(replayed == pi, || "(a) replay disagrees".into())?;
        ensure(check_complementary_pairs(caf, &pi).is_none(), || {
            "(b) complementary pair violated".into()
        })?;
    }

    let mut built = 0usize;
    for (rho, m, n) in [(2, 3, 2), (2, 3, 3), (3, 4, 2)] {
        let p = params(n, m, rho);
        for d in 0..n {
            for pi in CategoryPermutation::all(rho) {
                let caf = make_essential_dictatorship(&p, Individual::from_index(d), pi)
                    .map_err(|e| e.to_string())?
                    .to_independent();
                for stage in lemma_stages(&p) {
                    let profile = build_lemma_profile(&caf, &stage)
                        .map_err(|e| format!("(c) {stage:?} at {p}: {e}"))?;
                    ensure(
                        profile.members().iter().all(|c| {
                            (0..rho).all(|q| c.categories().iter().any(|x| x.index() == q))
                        }),
                        || format!("(c) {stage:?} at {p}: not surjective"),
                    )?;
                    built += 1;
                }
            }
        }
    }
    Ok(format!(
        "(a) GU with bijective pi and (b) pair sets on {} CAFs; (c) {built} profiles surjective",
        cafs.len()
    ))
}

/// Every stage with every admissible parameter choice.
fn lemma_stages(p: &Params) -> Vec<LemmaStage> {
    let (n, m, rho) = (p.n(), p.m(), p.rho());
    let cat = |i: usize| Category::new(i, rho).unwrap();
    let mut stages = Vec::new();
    for r in (0..rho).map(cat) {
        stages.push(LemmaStage::Step1 { r });
        for i in 0..rho {
            for j in rho..m {
                stages.push(LemmaStage::Step2 { r, i, j });
            }
            for j in (0..rho).filter(|&j| j != i) {
                stages.push(LemmaStage::Step3 { r, i, j });
            }
        }
    }
    for a in 0..rho {
        for b in (0..rho).filter(|&b| b != a) {
            for mask in 0..(1usize << n) {
                let pick = |bit: bool| cat(if bit { b } else { a });
                let r: Vec<Category> = (0..n).map(|k| pick(mask >> k & 1 == 1)).collect();
                let r_prime: Vec<Category> = (0..n).map(|k| pick(mask >> k & 1 == 0)).collect();
                if r[0].index() != a {
                    continue;
                }
                for x in 0..m {
                    for y in (0..m).filter(|&y| y != x) {
                        stages.push(LemmaStage::Claim1 {
                            r: CategoryVector::new(p, r.clone()).unwrap(),
                            r_prime: CategoryVector::new(p, r_prime.clone()).unwrap(),
                            x,
                            y,
                        });
                    }
                }
            }
        }
    }
    for d in 0..n {
        for code in 0..p.table_len() {
            let t = CategoryVector::decode(p, code).unwrap();
            if t.get(d).index() == 0 {
                stages.push(LemmaStage::Claim2 {
                    t,
                    d: Individual::from_index(d),
                });
            }
        }
    }
    stages
}

fn same_counts(a: &SearchReport, b: &SearchReport) -> bool {
    a.valid_count == b.valid_count
        && a.axiom_counts == b.axiom_counts
        && a.emitted_count == b.emitted_count
        && a.emitted_digest == b.emitted_digest
}

fn criterion_9() -> Outcome {
    let runs = [
        (
            params(2, 3, 2),
            Axiom::CitizenSovereignty,
            TableConstraint::None,
        ),
        (
            params(2, 3, 2),
            Axiom::Unanimity,
            TableConstraint::UnanimousOnConstants,
        ),
        (
            params(2, 2, 2),
            Axiom::Unanimity,
            TableConstraint::UnanimousOnConstants,
        ),
        (
            params(3, 2, 2),
            Axiom::Unanimity,
            TableConstraint::UnanimousOnConstants,
        ),
    ];
    let mut summary = Vec::new();
    for (p, axiom, constraint) in runs {
        let spec = SearchSpec::new(p).require(axiom).constraint(constraint);
        let plain =
            enumerate_independent_cafs(&spec.clone().prune(false)).map_err(|e| e.to_string())?;
        let pruned = enumerate_independent_cafs(&spec.prune(true)).map_err(|e| e.to_string())?;
        ensure(
            same_counts(&plain.report, &pruned.report) && plain.cafs == pruned.cafs,
            || format!("{p} {axiom}: pruned run differs"),
        )?;
        summary.push(format!("{p} {axiom}: {} valid", plain.report.valid_count));
    }
    Ok(summary.join("; "))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("plurality tie-break table reproduction", criterion_1),
        ("sovereign independent CAFs are essential dictatorships at (n=2, m=3, rho=2)", criterion_2),
        ("unanimous independent CAFs are dictatorships at (n=2, m=3, rho=2)", criterion_3),
        ("complement characterization at m = rho = 2, n=2 and n=3", criterion_4),
        ("unanimous independent CAFs are dictatorships at (n=2, m=3, rho=3)", criterion_5),
        ("sovereign independent CAFs are essential dictatorships at (n=3, m=3, rho=2)", criterion_6),
        ("pivotal and exhaustive extraction agree", criterion_7),
        ("generalized unanimity constructions", criterion_8),
        ("pruning soundness", criterion_9),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let started = Instant::now();
        let outcome = run();
        let elapsed = started.elapsed();
        match outcome {
            Ok(detail) => println!(
                "criterion {}: PASS  {name} [{}] ({})",
                i + 1,
                detail,
                millis(elapsed)
            ),
            Err(reason) => {
                failed += 1;
                println!(
                    "criterion {}: FAIL  {name}: {reason} ({})",
                    i + 1,
                    millis(elapsed)
                );
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 9 criteria passed");
}

fn millis(d: Duration) -> String {
    format!("{} ms", d.as_millis())
}
