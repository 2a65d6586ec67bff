//! Acceptance suite. Runs every criterion, prints one line per criterion and
//! fails if any of them fails.

use std::collections::BTreeSet;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::Value;

use clusterlie::charcluster::{check_hom_law, check_tensor_power_law, cluster, fp_span};
use clusterlie::formations::{hypercentre, hypercentre_nilpotent_fast, is_hypercentral, nilpotent_formation};
use clusterlie::gf::{poly, Embedding, Field, FieldCtx};
use clusterlie::liealg::LieAlgebra;
use clusterlie::linalg::Subspace;
use clusterlie::repmod::LModule;
use clusterlie::schema::InstanceRecord;
use clusterlie::theorem::{check_theorem_instance, random_instance, Instance, Status};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_clusterlie")
}

fn data(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name).display().to_string()
}

/// Runs `clusterlie campaign` with the default flags.
fn run_campaign() -> (Vec<u8>, Option<i32>, Duration) {
    let start = Instant::now();
    let out = Command::new(bin())
        .args(["campaign", "--compact", "--outcomes", "--primes", "2,3,5", "--per-prime", "200"])
        .args(["--max-dim-l", "4", "--max-dim-v", "4", "--seed", "0"])
        .output()
        .expect("campaign runs");
    (out.stdout, out.status.code(), start.elapsed())
}

fn criterion_1(summary: &Value, code: Option<i32>, elapsed: Duration) -> Outcome {
    let mut pass = code == Some(0) && summary["violations"] == 0 && summary["errors"] == 0;
    let mut parts = Vec::new();
    for p in summary["per_prime"].as_array().into_iter().flatten() {
        let confirmed = p["confirmed"].as_u64().unwrap_or(0);
        pass &= confirmed >= 50 && p["violation"] == 0 && p["instances"] == 200;
        parts.push(format!("p={} {} confirmed {} vacuous {} violations", p["p"], confirmed, p["vacuous"], p["violation"]));
    }
    pass &= parts.len() == 3 && elapsed < Duration::from_secs(300);
    outcome(pass, format!("{}; {:.1} s", parts.join(", "), elapsed.as_secs_f64()))
}

fn criterion_2(summary: &Value) -> Outcome {
    let outcomes = summary["outcomes"].as_array().cloned().unwrap_or_default();
    let confirmed: Vec<&Value> = outcomes.iter().filter(|o| o["status"] == "CONFIRMED").collect();
    let completed = confirmed.iter().filter(|o| o["pipeline_completed"] == true).count();
    let flagged = confirmed.iter().filter(|o| o["zero_discrepancy"] == true).count();
    let misplaced = outcomes.iter().filter(|o| o["unexpected_discrepancy"] == true).count();
    outcome(
        !confirmed.is_empty() && completed == confirmed.len() && misplaced == 0,
        format!(
            "{completed}/{} confirmed instances replayed; {flagged} zero-character discrepancies, {misplaced} outside the k = 1 pattern",
            confirmed.len()
        ),
    )
}

fn criterion_3() -> Outcome {
    let load = |name: &str| -> Instance {
        let text = std::fs::read_to_string(data(name)).unwrap();
        Instance::from_record(&serde_json::from_str::<InstanceRecord>(&text).unwrap()).unwrap()
    };
    let inst = load("worked.json");
    let cv = cluster(&inst.v, 0).unwrap();
    let cw = cluster(&inst.w, 0).unwrap();
    let span = fp_span(&cv);
    let verdict = check_theorem_instance(&inst).unwrap();
    let mut pass = cv.values() == [vec![0, 1]]
        && span.values() == [vec![0, 0], vec![0, 1], vec![0, 2]]
        && cw.values() == [vec![0, 2]]
        && verdict.status == Status::Confirmed;

    let twisted = check_theorem_instance(&load("worked_twisted.json")).unwrap();
    let incl = twisted.hypothesis("cluster_inclusion").unwrap();
    pass &= twisted.status == Status::Vacuous && !incl.holds && incl.witness["offending_character"]["values"] == serde_json::json!([1, 0]);

    // the binary agrees and exits cleanly on both
    for (name, status) in [("worked.json", "CONFIRMED"), ("worked_twisted.json", "VACUOUS")] {
        let out = Command::new(bin()).args(["check", "--compact", &data(name)]).output().unwrap();
        let v: Value = serde_json::from_slice(&out.stdout).unwrap();
        pass &= out.status.success() && v["status"] == status;
    }
    outcome(pass, format!("cl(V) = {:?}, span = {:?}, cl(W) = {:?}, twisted: {:?}", cv.values(), span.values(), cw.values(), twisted.status))
}

/// Modules of dimension at most 3 taken from generated instances.
fn small_modules(p: u64, count: usize) -> Vec<(LModule, LModule)> {
    let mut out = Vec::new();
    let mut seed = 1000 * p;
    while out.len() < count {
        seed += 1;
        let inst = random_instance(p, 4, 3, seed).unwrap();
        if inst.v.dim() <= 3 && inst.w.dim() <= 3 {
            out.push((inst.v, inst.w));
        }
    }
    out
}

fn criterion_4() -> Outcome {
    let mut power_runs = 0;
    let mut power_fail = 0;
    let mut hom_runs = 0;
    let mut hom_fail = 0;
    for p in [2, 3] {
        for (i, (v, w)) in small_modules(p, 50).into_iter().enumerate() {
            let r = 1 + i % 3;
            let r = if v.dim().pow(r as u32) > 27 { 2 } else { r };
            power_runs += 1;
            if !check_tensor_power_law(&v, r, i as u64).unwrap().holds {
                power_fail += 1;
            }
            hom_runs += 1;
            if !check_hom_law(&v, &w, i as u64).unwrap().holds {
                hom_fail += 1;
            }
        }
    }
    outcome(
        power_fail == 0 && hom_fail == 0 && power_runs >= 100 && hom_runs >= 100,
        format!("tensor power law {}/{power_runs}, hom law {}/{hom_runs}", power_runs - power_fail, hom_runs - hom_fail),
    )
}

fn criterion_5() -> Outcome {
    let n = nilpotent_formation();
    let mut restricted_runs = 0;
    let mut restricted_fail = 0;
    let mut closure_runs = 0;
    let mut closure_fail = 0;
    for p in [2, 3, 5] {
        for seed in 0..40u64 {
            let inst = random_instance(p, 4, 4, 7000 + seed).unwrap();
            let s = &inst.subalgebra;
            let central = |m: &LModule| is_hypercentral(&m.restrict_to_subalgebra(s).unwrap(), &n, seed).is_hypercentral;

            // restricted modules over the centre-killed algebra
            let ad = LModule::adjoint(&inst.algebra);
            let mut restricted = vec![ad.clone(), ad.dual(), LModule::trivial(inst.algebra.clone(), 1).direct_sum(&ad).unwrap()];
            if ad.dim() <= 3 {
                restricted.push(ad.tensor(&ad).unwrap());
            }
            for m in [&inst.v, &inst.w] {
                if m.is_restricted_module() {
                    restricted.push(m.clone());
                }
            }
            restricted_runs += 1;
            if !restricted.iter().all(|m| m.is_restricted_module() && central(m)) {
                restricted_fail += 1;
            }

            // sums and products of hypercentral modules
            let mut central_mods: Vec<LModule> = [&inst.v, &inst.w, &ad].into_iter().filter(|m| central(m)).cloned().collect();
            if central_mods.len() < 2 {
                central_mods.push(LModule::trivial(inst.algebra.clone(), 2));
            }
            closure_runs += 1;
            let a = &central_mods[0];
            let b = &central_mods[1];
            if !(central(&a.tensor(b).unwrap()) && central(&a.direct_sum(b).unwrap())) {
                closure_fail += 1;
            }
        }
    }
    outcome(
        restricted_fail == 0 && closure_fail == 0 && restricted_runs >= 100 && closure_runs >= 100,
        format!(
            "restricted modules hypercentral on {}/{restricted_runs} instances; sums and tensor products on {}/{closure_runs}",
            restricted_runs - restricted_fail,
            closure_runs - closure_fail
        ),
    )
}

/// All subspaces of `F^n`, by their echelon bases.
fn all_subspaces(f: &Field, n: usize) -> Vec<Subspace> {
    let q = f.order();
    let vectors: Vec<Vec<u64>> = (0..q.pow(n as u32))
        .map(|mut k| {
            (0..n)
                .map(|_| {
                    let d = k % q;
                    k /= q;
                    d
                })
                .collect()
        })
        .collect();
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut frontier = vec![Subspace::zero(f, n)];
    while let Some(s) = frontier.pop() {
        if !seen.insert(s.vectors()) {
            continue;
        }
        for v in &vectors {
            if !s.contains(v) {
                frontier.push(s.sum(&Subspace::from_vectors(f, n, vec![v.clone()])).unwrap());
            }
        }
        out.push(s);
    }
    out
}

/// Subnormality by search over all chains of subalgebras.
fn subnormal_by_search(lie: &LieAlgebra, subalgebras: &[Subspace], s: &Subspace) -> bool {
    let full = lie.full_space();
    let mut reached = vec![s.clone()];
    let mut i = 0;
    while i < reached.len() {
        let t = reached[i].clone();
        if t == full {
            return true;
        }
        for u in subalgebras {
            if t.is_subspace_of(u) && !reached.contains(u) && lie.is_ideal(&t, u) {
                reached.push(u.clone());
            }
        }
        i += 1;
    }
    false
}

fn criterion_6() -> Outcome {
    // subnormality against exhaustive search
    let mut algebras = 0;
    let mut pairs = 0;
    let mut mismatches = 0;
    for p in [2, 3] {
        let f = FieldCtx::prime(p).unwrap();
        for n in 1..=3usize {
            let spaces = all_subspaces(&f, n);
            let brackets: Vec<(usize, usize)> = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j))).collect();
            let slots = brackets.len() * n;
            for code in 0..p.pow(slots as u32) {
                let mut k = code;
                let table: Vec<(usize, usize, Vec<u64>)> = brackets
                    .iter()
                    .map(|&(i, j)| {
                        let v = (0..n)
                            .map(|_| {
                                let d = k % p;
                                k /= p;
                                d
                            })
                            .collect();
                        (i, j, v)
                    })
                    .collect();
                let lie = LieAlgebra::from_brackets(&f, n, &table).unwrap();
                if !lie.verify_lie().is_empty() {
                    continue;
                }
                algebras += 1;
                let subs: Vec<Subspace> = spaces.iter().filter(|s| lie.is_subalgebra(s)).cloned().collect();
                for s in &subs {
                    pairs += 1;
                    if lie.is_subnormal(s).0 != subnormal_by_search(&lie, &subs, s) {
                        mismatches += 1;
                    }
                }
            }
        }
    }

    // fast and generic hypercentres, and Jordan–Hölder dimensions across seeds
    let n = nilpotent_formation();
    let mut modules = 0;
    let mut hc_mismatch = 0;
    let mut jh_mismatch = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for p in [2, 3, 5] {
        for seed in 0..60u64 {
            let inst = random_instance(p, 4, 4, 9000 + seed).unwrap();
            let mut mods = vec![inst.v.clone(), inst.w.clone(), LModule::adjoint(&inst.algebra)];
            if inst.v.dim() * inst.w.dim() <= 16 {
                mods.push(inst.v.tensor(&inst.w).unwrap());
            }
            for m in mods {
                modules += 1;
                let r = m.restrict_to_subalgebra(&inst.subalgebra).unwrap();
                if hypercentre_nilpotent_fast(&r).0 != hypercentre(&r, &n, seed).0 {
                    hc_mismatch += 1;
                }
                let mut dims: Vec<Vec<usize>> = (0..5)
                    .map(|_| {
                        let mut d = m.composition_series(rng.gen()).factor_dims();
                        d.sort_unstable();
                        d
                    })
                    .collect();
                dims.dedup();
                if dims.len() != 1 {
                    jh_mismatch += 1;
                }
            }
        }
    }
    outcome(
        mismatches == 0 && hc_mismatch == 0 && jh_mismatch == 0,
        format!(
            "subnormality: {pairs} subalgebras of {algebras} algebras, {mismatches} mismatches; hypercentre paths: {hc_mismatch} of {modules} modules differ; composition dimensions: {jh_mismatch} seed-dependent"
        ),
    )
}

/// Elements to test: all of them for fields of at most 729 elements, else 1000 samples.
fn sample(f: &Field, rng: &mut ChaCha8Rng) -> Vec<u64> {
    if f.order() <= 729 {
        f.elements().collect()
    } else {
        (0..1000).map(|_| rng.gen_range(0..f.order())).collect()
    }
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut checks = 0u64;
    let mut failures = 0u64;
    let mut fields = 0;
    let mut embeddings = 0;
    for p in [2, 3, 5] {
        for m in 1..=6 {
            let f = FieldCtx::canonical(p, m).unwrap();
            fields += 1;
            for a in sample(&f, &mut rng) {
                checks += 1;
                if f.pth_root(f.frobenius(a)) != a || f.frobenius(f.pth_root(a)) != a {
                    failures += 1;
                }
            }
            for d in (1..=m).filter(|d| m % d == 0) {
                let small = FieldCtx::canonical(p, d).unwrap();
                let e = Embedding::canonical(&small, &f).unwrap();
                embeddings += 1;
                if poly::eval(&f, small.modulus(), e.image_of_generator().value()) != 0 {
                    failures += 1;
                }
                let xs = sample(&small, &mut rng);
                for c in 0..p {
                    if e.apply(c) != c {
                        failures += 1;
                    }
                }
                for &a in &xs {
                    checks += 1;
                    if (e.apply(a) == 0) != (a == 0) {
                        failures += 1;
                    }
                }
                // pairs: exhaustive on small fields, sampled otherwise
                let ys: Vec<u64> = if small.order() <= 27 { xs.clone() } else { (0..200).map(|_| rng.gen_range(0..small.order())).collect() };
                for &a in &xs {
                    for &b in &ys {
                        checks += 1;
                        if e.apply(small.add(a, b)) != f.add(e.apply(a), e.apply(b))
                            || e.apply(small.mul(a, b)) != f.mul(e.apply(a), e.apply(b))
                        {
                            failures += 1;
                        }
                    }
                }
            }
        }
    }
    outcome(failures == 0, format!("{fields} fields, {embeddings} embeddings, {checks} checks, {failures} failures"))
}

fn main() -> ExitCode {
    let (first, code, elapsed) = run_campaign();
    let summary: Value = serde_json::from_slice(&first).unwrap_or(Value::Null);
    let mut results = vec![
        ("theorem campaign", criterion_1(&summary, code, elapsed)),
        ("proof replay", criterion_2(&summary)),
        ("worked instance", criterion_3()),
        ("cluster laws", criterion_4()),
        ("cited-theorem suites", criterion_5()),
        ("algebra-core oracles", criterion_6()),
        ("field-layer roundtrips", criterion_7()),
    ];
    let (second, _, _) = run_campaign();
    results.push((
        "determinism",
        outcome(!first.is_empty() && first == second, format!("two campaign runs, {} bytes each, identical: {}", first.len(), first == second)),
    ));

    let mut all = true;
    for (i, (name, o)) in results.iter().enumerate() {
        all &= o.pass;
        println!("criterion {} ({name}): {}: {}", i + 1, if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
