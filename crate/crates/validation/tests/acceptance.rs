//! Acceptance run: one line per criterion, nonzero exit if any fails.
//!
//! All comparisons are exact; the only knobs are the sweep sizes and seeds
//! pinned below.

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use qdc_core::covariance::{
    associativity, constraint_bindings, matching_group, AnsatzSystem, CovarianceSetup,
};
use qdc_core::differential::{check_nilpotency, d_compatibility, CalculusSpec, Differentiator};
use qdc_core::expr::parse_expr;
use qdc_core::ncalgebra::{Obstruction, Presentation, Strategy};
use qdc_core::presets::{
    displayed_relations, imported_relations, limit_target, p_to_q, pq_is_j2, preset, rule_differences, specialize,
    PresetId,
};
use qdc_core::scalar::{Scalar, Var};
use qdc_validation::{identity_pair, oracle_equal, random_element};

const SEED: u64 = 0x5eed;
/// Exhaustive nilpotency sweep bound and random words on top of it.
const NILPOTENCY_MAX_LEN: usize = 4;
const NILPOTENCY_SAMPLES: usize = 200;
/// Random elements per confluent presentation for the strategy comparison.
const STRATEGY_ELEMENTS: usize = 50;
const SCALAR_IDENTITIES: usize = 200;
const ORACLE_TRIALS: usize = 5;
const TIME_BUDGET: Duration = Duration::from_secs(60);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict { pass, detail: detail.into() }
}

fn rng(salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(SEED ^ salt)
}

fn relation_closure() -> Verdict {
    let mut count = 0;
    let mut bad = Vec::new();
    for id in PresetId::ALL {
        let p = preset(id);
        for (label, e) in displayed_relations(id).into_iter().chain(imported_relations(id)) {
            count += 1;
            if !p.normalize(&e).is_zero() {
                bad.push(format!("{id}: {label}"));
            }
        }
    }
    verdict(bad.is_empty(), format!("{count} relations over 10 presets, {} nonzero {bad:?}", bad.len()))
}

fn d_compatible() -> Verdict {
    let mut count = 0;
    let mut bad = Vec::new();
    for id in PresetId::calculi() {
        let c = CalculusSpec::for_preset(id);
        let p = &c.presentation;
        let dd = Differentiator::new(&c);
        for (label, e) in displayed_relations(id).into_iter().chain(imported_relations(id)) {
            count += 1;
            if !p.normalize(&dd.d(&e)).is_zero() {
                bad.push(format!("{id}: d({label})"));
            }
        }
        for (w, _) in d_compatibility(&c) {
            bad.push(format!("{id}: rule {}", p.word_name(&w)));
        }
        count += p.rules().len();
    }
    verdict(bad.is_empty(), format!("{count} relations and rules, {} nonzero {bad:?}", bad.len()))
}

fn nilpotency() -> Verdict {
    let mut pass = true;
    let mut parts = Vec::new();
    for (k, id) in PresetId::calculi().enumerate() {
        let c = CalculusSpec::for_preset(id);
        let r = check_nilpotency(&c, NILPOTENCY_MAX_LEN, NILPOTENCY_SAMPLES, &mut rng(k as u64));
        pass &= r.passed;
        parts.push(format!("{id} {}/{} failing", r.failures, r.checked));
    }
    let plane = preset(PresetId::PlanePqD3);
    let cubes_vanish = ["dx", "dy"].iter().all(|g| {
        let e = parse_expr(&format!("{g}*{g}*{g}"), &plane).expect("cube parses");
        plane.normalize(&e).is_zero()
    });
    pass &= cubes_vanish;
    parts.push(format!("cubes vanish: {cubes_vanish}"));
    verdict(pass, parts.join(", "))
}

fn vanish_under(obs: &[Obstruction], bindings: &[(Var, Scalar)]) -> bool {
    obs.iter().all(|o| o.difference.coeffs().all(|c| c.substitute(bindings).map(|s| s.is_zero()).unwrap_or(false)))
}

fn confluence() -> Verdict {
    let d2 = preset(PresetId::PlanePqD2).critical_pairs();
    let plane3 = preset(PresetId::PlanePqD3);
    let d3 = plane3.critical_pairs();
    let xdxdy = plane3.word(&["x", "dx", "dy"]).expect("generators");
    let has_xdxdy = d3.iter().any(|o| o.overlap == xdxdy);
    let plane3_at_j2 = vanish_under(&d3, &pq_is_j2());
    let s3 = preset(PresetId::SplaneQD3).critical_pairs();
    let s3_at_j = vanish_under(&s3, &[(Var::Q, Scalar::j())]);
    let spq3 = preset(PresetId::SplanePqD3).critical_pairs();
    let pass = d2.is_empty() && !d3.is_empty() && has_xdxdy && plane3_at_j2 && s3_at_j && !spq3.is_empty();
    verdict(
        pass,
        format!(
            "plane-pq-d2 {} obstructions; plane-pq-d3 {} (x*dx*dy among them: {has_xdxdy}, vanish at pq=j^2: {plane3_at_j2}); \
             splane-q-d3 {} (vanish at q=j: {s3_at_j}); splane-pq-d3 {}",
            d2.len(),
            d3.len(),
            s3.len(),
            spq3.len()
        ),
    )
}

fn limits() -> Verdict {
    let mut bad = Vec::new();
    let mut n = 0;
    for id in PresetId::ALL {
        if let Some(to) = limit_target(id) {
            n += 1;
            let got = specialize(&preset(id), &p_to_q()).expect("no pole at p=q");
            for d in rule_differences(&got, &preset(to)) {
                bad.push(format!("{id}: {d}"));
            }
        }
    }
    verdict(bad.is_empty(), format!("{n} limits compared rule by rule, {} differences {bad:?}", bad.len()))
}

fn covariance() -> Verdict {
    let mut parts = Vec::new();
    let mut pass = true;
    for id in PresetId::calculi() {
        let setup = CovarianceSetup::for_preset(id).expect("setup");
        let reports = setup.check().expect("transformations");
        let failing: usize = reports.iter().map(|r| r.failing().count()).sum();
        pass &= failing == 0;
        parts.push(format!("{id} {failing} nonzero of {}", 2 * setup.relations.len()));
    }

    // q12 = 1 instead of q/p
    let (group, mut table) = matching_group(PresetId::PlanePqD2).expect("group");
    table.insert("x", "b", Scalar::one());
    let setup = CovarianceSetup::with_table(PresetId::PlanePqD2, &group, &table).expect("setup");
    let p = &setup.combined.presentation;
    let rel = vec![("x*dx".to_string(), parse_expr("x*dx - (1/(p*q))*dx*x", p).expect("relation"))];
    let control = !setup.check_relations(&rel).expect("check")[0].covariant();
    pass &= control;
    parts.push(format!("q12=1 control detected: {control}"));

    let mut undetected = Vec::new();
    for id in [PresetId::PlanePqD2, PresetId::SplanePqD2] {
        let (group, table) = matching_group(id).expect("group");
        for (g, h, c) in table.iter() {
            let mut bad = table.clone();
            bad.insert(g, h, c * &Scalar::from_int(2));
            let s = CovarianceSetup::with_table(id, &group, &bad).expect("setup");
            if s.check().expect("check").iter().all(|r| r.covariant()) {
                undetected.push(format!("{id} ({g},{h})"));
            }
        }
    }
    pass &= undetected.is_empty();
    parts.push(format!("doubled single entries undetected: {undetected:?}"));
    verdict(pass, parts.join(", "))
}

fn derivation() -> Verdict {
    let system = AnsatzSystem::generate().expect("system");
    let c1 = Var::unknown(1);
    let generic = system.solve(c1, &[]).expect("generic solve");
    let constraint = constraint_bindings();
    let residuals_vanish =
        generic.residual_constraints.iter().all(|r| Scalar::from_poly(r.clone()).substitute(&constraint).expect("no pole").is_zero());
    let rank_constrained = system.rank(&constraint).expect("rank");
    let constrained = system.solve(c1, &constraint).expect("constrained solve");
    let assoc = associativity(&constrained).expect("associativity");
    let displayed = assoc.roots.iter().filter(|r| r.matches_displayed).count();
    let roots: Vec<String> = assoc
        .roots
        .iter()
        .map(|r| format!("{}{}", r.value, if r.matches_displayed { " (displayed)" } else { "" }))
        .collect();
    let pass = generic.rank == 15
        && generic.free == vec![c1]
        && rank_constrained == 15
        && residuals_vanish
        && assoc.unique()
        && displayed == 1;
    verdict(
        pass,
        format!(
            "rank {} with C1 free, rank {rank_constrained} of 16 at q'=q k=q/p, residuals vanish there: {residuals_vanish}; \
             associativity {} = 0 has {} roots [{}]",
            generic.rank,
            assoc.equation,
            assoc.roots.len(),
            roots.join(", ")
        ),
    )
}

fn confluent_presentations() -> Vec<(String, Presentation)> {
    let mut out: Vec<(String, Presentation)> = PresetId::ALL
        .into_iter()
        .map(|id| (id.to_string(), preset(id)))
        .filter(|(_, p)| p.critical_pairs().is_empty())
        .collect();
    let special = [
        (PresetId::PlanePqD3, pq_is_j2()),
        (PresetId::SplanePqD3, pq_is_j2()),
        (PresetId::SplaneQD3, vec![(Var::Q, Scalar::j())]),
    ];
    for (id, b) in special {
        let p = specialize(&preset(id), &b).expect("specialization");
        if p.critical_pairs().is_empty() {
            out.push((format!("{id} specialized"), p));
        }
    }
    out
}

fn oracle_agreement() -> Verdict {
    let mut r = rng(8);
    let mut mismatched = Vec::new();
    let presentations = confluent_presentations();
    for (name, p) in &presentations {
        for _ in 0..STRATEGY_ELEMENTS {
            let e = random_element(&mut r, p);
            if p.normalize_with(&e, Strategy::Leftmost) != p.normalize_with(&e, Strategy::Rightmost) {
                mismatched.push(format!("{name}: {}", p.show(&e)));
            }
        }
    }
    let mut disagreements = 0;
    let mut equal = 0;
    for _ in 0..SCALAR_IDENTITIES {
        let (a, b, _) = identity_pair(&mut r);
        let canonical = a.to_scalar().expect("scalar") == b.to_scalar().expect("scalar");
        equal += canonical as usize;
        if canonical != oracle_equal(&a, &b, ORACLE_TRIALS, &mut r) {
            disagreements += 1;
        }
    }
    verdict(
        mismatched.is_empty() && disagreements == 0,
        format!(
            "{} presentations x {STRATEGY_ELEMENTS} elements, {} strategy mismatches; \
             {SCALAR_IDENTITIES} scalar pairs ({equal} equal), {disagreements} oracle disagreements",
            presentations.len(),
            mismatched.len()
        ),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Verdict); 8] = [
        ("relation closure", relation_closure),
        ("d-compatibility", d_compatible),
        ("nilpotency", nilpotency),
        ("confluence obstructions", confluence),
        ("p=q limits", limits),
        ("covariance", covariance),
        ("ansatz derivation", derivation),
        ("oracle agreement", oracle_agreement),
    ];
    let start = Instant::now();
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            verdict(false, format!("panicked: {}", msg.unwrap_or_default()))
        });
        failed += !v.pass as usize;
        println!(
            "criterion {}: {} {name} ({:.2}s): {}",
            i + 1,
            if v.pass { "PASS" } else { "FAIL" },
            t.elapsed().as_secs_f64(),
            v.detail
        );
    }
    let total = start.elapsed();
    let in_budget = total <= TIME_BUDGET;
    println!("total {:.2}s, budget {}s: {}", total.as_secs_f64(), TIME_BUDGET.as_secs(), if in_budget { "ok" } else { "exceeded" });
    if failed > 0 || !in_budget {
        println!("{failed} of {} criteria failed", criteria.len());
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
