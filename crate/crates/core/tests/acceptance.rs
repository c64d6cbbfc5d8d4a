//! Acceptance run: one PASS/FAIL line per criterion, nonzero exit on failure.

use rbhier::bialgebra::{BasisFunction, Coefficient};
use rbhier::hierarchy::{convolve, HierarchyElement};
use rbhier::matrixsubst::SubstMatrix;
use rbhier::opring::OperatorExpr;
use rbhier::rational::{int, rat};
use rbhier::syntax::parse_function;
use rbhier::verify::{
    apply, check_bialgebra_axioms, check_hierarchy_axioms, check_normalization, check_polynomial_embedding,
    check_rules, probe_confluence, CheckResult, TrialConfig,
};
use std::process::ExitCode;
use std::time::{Duration, Instant};

struct Line {
    id: u8,
    title: &'static str,
    ok: bool,
    elapsed: Duration,
    limit: Duration,
    note: String,
}

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let out = f();
    (out, start.elapsed())
}

fn summarize(results: &[CheckResult]) -> (bool, String) {
    let failing: Vec<String> = results
        .iter()
        .filter(|r| !r.ok())
        .map(|r| format!("{} {}/{} failed, first: {:?}", r.name, r.fail, r.trials, r.failures.first()))
        .collect();
    let trials: usize = results.iter().map(|r| r.trials).sum();
    if failing.is_empty() {
        (true, format!("{} checks, {trials} cases", results.len()))
    } else {
        (false, failing.join("; "))
    }
}

fn worked_identities() -> Result<(), String> {
    let one = HierarchyElement::one();
    let x = |a| HierarchyElement::var(a);
    if apply(&OperatorExpr::integ(1), &one) != x(1) {
        return Err("A1 applied to 1".into());
    }
    let expanded = x(1).pow(2).substitute(&SubstMatrix::transvection(1, &[int(1)]));
    if expanded != parse_function("x^2 + 2*x*y + y^2").map_err(|e| e.to_string())? {
        return Err("shear expansion of x^2".into());
    }
    let xc = Coefficient::basis(BasisFunction::x());
    if convolve(&xc, &xc) != Coefficient::term(rat(1, 6), BasisFunction::new(3, int(0))) {
        return Err("x * x convolution".into());
    }
    let xe = Coefficient::basis(BasisFunction::new(1, int(1)));
    let want = Coefficient::from_terms([
        (BasisFunction::new(1, int(1)), int(1)),
        (BasisFunction::exp(int(1)), int(-1)),
        (BasisFunction::unit(), int(1)),
    ]);
    let got = xe.integrate();
    if got != want || got.derivative() != xe || got.counit() != int(0) {
        return Err("integral of x e^x".into());
    }
    Ok(())
}

fn main() -> ExitCode {
    let cfg = TrialConfig::default();
    let mut lines = Vec::new();

    let (res, t) = timed(check_bialgebra_axioms);
    let (ok, note) = summarize(&res);
    lines.push(Line { id: 1, title: "bialgebra and Rota-Baxter axioms", ok, elapsed: t, limit: Duration::from_secs(10), note });

    let (res, t) = timed(|| check_polynomial_embedding(6));
    let (ok, note) = summarize(&[res]);
    lines.push(Line { id: 2, title: "polynomial embedding P(1)^i = i! P^i(1)", ok, elapsed: t, limit: Duration::from_secs(1), note });

    let (res, t) = timed(|| check_hierarchy_axioms(&cfg));
    let (ok, note) = summarize(&res);
    lines.push(Line { id: 3, title: "hierarchy axiom suite", ok, elapsed: t, limit: Duration::from_secs(120), note });

    let (res, t) = timed(|| check_rules(&cfg));
    let (ok, note) = summarize(&res);
    lines.push(Line { id: 4, title: "rule soundness", ok, elapsed: t, limit: Duration::from_secs(300), note });

    let corpus_cfg = TrialConfig { trials: 500, ..cfg.clone() };
    let (corpus, t) = timed(|| check_normalization(&corpus_cfg));
    let (ok, note) = summarize(&[corpus.sound.clone(), corpus.shape.clone(), corpus.idempotent.clone()]);
    lines.push(Line { id: 5, title: "normalization soundness and shape", ok, elapsed: t, limit: Duration::from_secs(600), note });

    let probe_cfg = TrialConfig { trials: 1000, ..cfg.clone() };
    let (probe, probe_t) = timed(|| probe_confluence(&probe_cfg));
    let probe_errors = probe.results.iter().flat_map(|r| &r.digests).filter(|d| d.digest.starts_with("error")).count();

    let (ok, mut note) = summarize(&[corpus.measure.clone(), corpus.budget.clone()]);
    note.push_str(&format!(
        "; {} steps, max {} per word, per rule {:?}; probe errors {probe_errors}",
        corpus.total_steps, corpus.max_steps, corpus.per_rule
    ));
    lines.push(Line { id: 6, title: "termination monitoring", ok: ok && probe_errors == 0, elapsed: t, limit: Duration::from_secs(600), note });

    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("probe-report.json");
    let emitted = std::fs::write(&path, probe.to_json()).is_ok();
    lines.push(Line {
        id: 7,
        title: "confluence probe",
        ok: emitted,
        elapsed: probe_t,
        limit: Duration::from_secs(1200),
        note: format!(
            "agreement {}/{} ({:.1}%), report at {}",
            probe.summary.pass,
            probe.results.len(),
            100.0 * probe.summary.agree_rate,
            path.display()
        ),
    });

    let (res, t) = timed(worked_identities);
    lines.push(Line {
        id: 8,
        title: "worked identities",
        ok: res.is_ok(),
        elapsed: t,
        limit: Duration::from_secs(1),
        note: res.err().unwrap_or_else(|| "all exact".into()),
    });

    let mut all = true;
    for l in &lines {
        let in_time = l.elapsed <= l.limit;
        let pass = l.ok && in_time;
        all &= pass;
        println!(
            "criterion {}: {} {} [{:.2?} / limit {:?}{}] {}",
            l.id,
            if pass { "PASS" } else { "FAIL" },
            l.title,
            l.elapsed,
            l.limit,
            if in_time { "" } else { ", over time" },
            l.note
        );
    }
    if all {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
