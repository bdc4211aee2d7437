//! One PASS/FAIL line per acceptance criterion.

use std::time::Instant;

use mbm::bimonoid::Verdict;
use mbm::mcat::MMorphism;
use mbm::morphism::{check_comonoid_morphism, check_mbm_morphism, sharp_criterion, sharp_cases};
use mbm::suite::{self, campaigns, example_names};

struct Outcome {
    ok: bool,
    detail: String,
}

fn line(n: usize, what: &str, o: &Outcome) {
    println!("CRITERION {n} {} {what}: {}", if o.ok { "PASS" } else { "FAIL" }, o.detail);
}

fn section(s: mbm::error::Result<suite::Section>) -> Outcome {
    match s {
        Ok(s) => {
            let failed: Vec<&str> = s.checks.iter().filter(|c| !c.1).map(|c| c.0.as_str()).collect();
            Outcome { ok: s.passed(), detail: format!("{} checks, failed [{}]; {}", s.checks.len(), failed.join(" "), s.log.lines().find(|l| !l.ends_with("PASS")).unwrap_or("")) }
        }
        Err(e) => Outcome { ok: false, detail: format!("error {e}") },
    }
}

fn sharp_agreement() -> mbm::error::Result<Outcome> {
    let cases = sharp_cases()?;
    let mut agree = 0;
    let mut comonoid_agree = 0;
    let mut passing = 0;
    for c in &cases {
        let f = MMorphism::sharp(&c.map, &c.src.base, &c.dst.base)?;
        let full = check_mbm_morphism(&f, &c.src, &c.dst)?;
        let co = check_comonoid_morphism(&f, &c.src.derived_comonoid()?, &c.dst.derived_comonoid()?)?;
        agree += usize::from(sharp_criterion(&c.map, &c.src, &c.dst)? == full);
        comonoid_agree += usize::from(co == full);
        passing += usize::from(full);
    }
    let n = cases.len();
    Ok(Outcome {
        ok: n >= 20 && agree == n && comonoid_agree == n && passing > 0 && passing < n,
        detail: format!("{n} cases, {passing} morphisms, sharp agrees {agree}/{n}, comonoid agrees {comonoid_agree}/{n}"),
    })
}

fn main() {
    let mut results: Vec<(usize, &str, Outcome)> = Vec::new();
    let mut report = |n: usize, what: &'static str, o: Outcome| results.push((n, what, o));

    let names = example_names(8);
    let t = Instant::now();
    let one_core = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
    let runs = one_core.install(|| campaigns(&names, 42, 200));
    let secs = t.elapsed().as_secs_f64();
    match runs {
        Ok(runs) => {
            let base = runs.iter().all(|c| c.base.verdict == Verdict::AgreePass);
            let fail: usize = runs.iter().map(|c| c.agree_fail()).sum();
            let dis: usize = runs.iter().map(|c| c.disagree()).sum();
            let total: usize = runs.iter().map(|c| c.mutants.len()).sum();
            report(
                1,
                "equivalence and mutation campaign",
                Outcome {
                    ok: base && fail == total && total == 200 * names.len() && dis == 0 && secs < 60.0,
                    detail: format!("base AGREE_PASS {base}, AGREE_FAIL {fail}/{total}, DISAGREE {dis}, {secs:.1}s on one core"),
                },
            );
            let violations: usize = runs.iter().map(|c| c.violations()).sum();
            let implied = runs.iter().all(|c| {
                c.base.to_report().lines.iter().filter(|l| l.key.starts_with("IMPLIES")).all(|l| l.outcome.is_pass())
            });
            report(
                6,
                "derivation chain",
                Outcome { ok: violations == 0 && implied, detail: format!("base implications hold {implied}, violations {violations}") },
            );
        }
        Err(e) => {
            report(1, "equivalence and mutation campaign", Outcome { ok: false, detail: format!("error {e}") });
            report(6, "derivation chain", Outcome { ok: false, detail: format!("error {e}") });
        }
    }

    report(2, "category laws", section(suite::category_laws(42, 40)));
    report(3, "multiplier monoids", section(suite::multiplier_monoids(&names)));
    report(4, "monoidality", section(suite::monoidality(42, 24)));
    report(5, "morphisms", sharp_agreement().unwrap_or_else(|e| Outcome { ok: false, detail: format!("error {e}") }));
    report(7, "annihilator oracle", section(suite::oracle_section()));

    let args = ["mbm", "suite", "--seed", "42", "--jobs", "4"];
    let (c1, r1) = mbm::cli::run(args);
    let (c2, r2) = mbm::cli::run(args);
    report(
        8,
        "determinism",
        Outcome {
            ok: c1 == 0 && c2 == 0 && r1 == r2,
            detail: format!("exit {c1} {c2}, {} bytes, identical {}", r1.len(), r1 == r2),
        },
    );

    results.sort_by_key(|r| r.0);
    for (n, what, o) in &results {
        line(*n, what, o);
    }
    if !results.iter().all(|r| r.2.ok) {
        eprintln!("acceptance criteria failed");
        std::process::exit(1);
    }
}
