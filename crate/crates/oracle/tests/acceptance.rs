//! Acceptance run at the default configuration. Prints one PASS/FAIL line per
//! criterion and exits nonzero when any of them fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use idrt_core::checker::{check_source, equal};
use idrt_core::declarative::DeclRule;
use idrt_core::parse::{parse_context, parse_kind, parse_term};
use idrt_oracle::curated::{curated, headed_rules};
use idrt_oracle::{run_suite, EnumConfig, Property, SuiteReport};

const NAT_VECT: &str = include_str!("../../cli/examples/nat_vect.idrt");
const DUP_LABEL: &str = include_str!("../../cli/examples/dup_label.idrt");
const TIME_BUDGET: Duration = Duration::from_secs(300);

struct Verdict {
    name: &'static str,
    ok: bool,
    detail: String,
}

fn properties(suite: &SuiteReport, name: &'static str, props: &[Property]) -> Verdict {
    let mut detail = Vec::new();
    let mut ok = true;
    for p in props {
        let r = suite.report(*p).expect("every property ran");
        ok &= r.passed();
        detail.push(format!("{p}: {} instances, {} failures", r.instances_checked, r.failures.len()));
        if let Some(f) = r.failures.first() {
            detail.push(format!("first counterexample `{}` expected {} got {}", f.input, f.expected, f.got));
        }
    }
    Verdict { name, ok, detail: detail.join("; ") }
}

fn coverage(suite: &SuiteReport, elapsed: Duration) -> Verdict {
    let (me, md) = (suite.coverage.missing_evaluator(), suite.coverage.missing_declarative());
    let ok = me.is_empty() && md.is_empty() && elapsed <= TIME_BUDGET;
    Verdict {
        name: "rule coverage",
        ok,
        detail: format!(
            "{} evaluator and {} declarative rules, missing {me:?} / {md:?}, suite took {:.1}s",
            suite.coverage.evaluator.len(),
            suite.coverage.declarative.len(),
            elapsed.as_secs_f64()
        ),
    }
}

fn bridge(suite: &SuiteReport) -> Verdict {
    let mut v = properties(suite, "soundness/completeness bridge", &[Property::SoundnessBridge, Property::CompletenessBridge]);
    let suite_items = curated();
    let headed = headed_rules(&suite_items);
    let uncovered: Vec<&str> = DeclRule::ALL.iter().filter(|r| !headed.contains(r)).map(|r| r.name()).collect();
    v.ok &= suite_items.len() >= 40 && uncovered.is_empty();
    v.detail = format!("{} curated derivations, rules never heading one {uncovered:?}; {}", suite_items.len(), v.detail);
    v
}

fn worked_example() -> Verdict {
    let mut problems = Vec::new();
    match check_source(NAT_VECT) {
        Ok(r) if r.accepted() => {}
        Ok(r) => problems.push(format!("nat/vect rejected: {r}")),
        Err(e) => problems.push(format!("nat/vect does not parse: {e}")),
    }
    let g = parse_context("T:Type, a:El(T), r:El(<<>, k : [_:El(<>)]T>)").unwrap();
    let g2 = parse_context("T:Type, r:El(<<<>, k : [_:El(<>)]T>, l : [_:El(<<>, k : [_:El(<>)]T>)]T>)").unwrap();
    let pair = "<r, l = a : [_:El(<<>, k : [_:El(<>)]T>)]T>";
    let golden = [
        (&g, format!("[{pair}]"), "r", "El(<<>, k : [_:El(<>)]T>)"),
        (&g, format!("{pair}.l"), "a", "El(T)"),
        (&g2, "r.k".to_string(), "[r].k", "El(T)"),
    ];
    for (ctx, lhs, rhs, kind) in golden {
        let report = equal(ctx, &parse_term(&lhs).unwrap(), &parse_term(rhs).unwrap(), &parse_kind(kind).unwrap());
        if !report.accepted() {
            problems.push(format!("{lhs} = {rhs} : {kind} rejected: {report}"));
        }
    }
    match check_source(DUP_LABEL) {
        Ok(r) if !r.accepted() && r.to_string().contains("l ∉ L") => {}
        Ok(r) => problems.push(format!("duplicate label not rejected with the side condition: {r}")),
        Err(e) => problems.push(format!("duplicate-label file does not parse: {e}")),
    }
    Verdict {
        name: "worked example",
        ok: problems.is_empty(),
        detail: if problems.is_empty() { "file checks, 3 golden equalities, duplicate label rejected".into() } else { problems.join("; ") },
    }
}

fn main() -> ExitCode {
    let cfg = EnumConfig::default();
    let start = Instant::now();
    let suite = run_suite(&cfg);
    let elapsed = start.elapsed();
    println!(
        "acceptance at term size {} / context length {}: {} items, {} accepted",
        cfg.max_term_size, cfg.max_context_len, suite.corpus_items, suite.accepted_items
    );

    let verdicts = [
        coverage(&suite, elapsed),
        properties(&suite, "determinacy", &[Property::Determinacy]),
        properties(&suite, "adequacy", &[Property::AdequacyReduction, Property::AdequacyForms]),
        properties(&suite, "subject reduction", &[Property::SubjectReduction]),
        properties(&suite, "church-rosser (with record-eta control)", &[Property::ChurchRosser]),
        properties(&suite, "strong normalization (with omega control)", &[Property::StrongNormalization]),
        properties(&suite, "parallel subject reduction", &[Property::PSR]),
        bridge(&suite),
        worked_example(),
    ];
    for v in &verdicts {
        println!("{} {}: {}", if v.ok { "PASS" } else { "FAIL" }, v.name, v.detail);
    }
    if verdicts.iter().all(|v| v.ok) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
