//! The property suites over an evaluated corpus.

use std::collections::BTreeMap;

use idrt_core::declarative::{
    check_derivation, derivation_depth, rule_usage, AutoDeriver, DeclRuleCounts, Judgement, SystemVariant,
};
use idrt_core::print::{context_to_string, term_in_context};
use idrt_core::reduction::{
    is_normal, is_whnf, normalize_with, one_step, parallel_reducts, reduction_graph, ReductionGraph, Strategy,
};
use idrt_core::syntax::fresh_name;
use idrt_core::tos::{Engine, EvalResult};
use idrt_core::{Context, Kind, Name, Term};
use rayon::prelude::*;

use crate::curated::{algorithmic_verdict, curated};
use crate::enumerate::{duplicate_label_type, omega, Corpus, Evaluated, Origin};
use crate::report::{Failure, Property, PropertyReport};

fn show(g: &Context, m: &Term) -> String {
    format!("{} |- {}", context_to_string(g), term_in_context(g, m))
}

fn show_result(g: &Context, r: &EvalResult) -> String {
    format!(
        "whnf {}, nf {}, kind {}",
        term_in_context(g, &r.whnf),
        term_in_context(g, &r.nf),
        idrt_core::print::kind_in_context(g, &r.kind_nf)
    )
}

/// Runs `check` on every accepted item; each call reports its instances.
fn per_accepted<F>(corpus: &Corpus, p: Property, check: F) -> PropertyReport
where
    F: Fn(&Context, &Evaluated, &EvalResult, &mut PropertyReport) + Sync,
{
    let accepted: Vec<(&Evaluated, &EvalResult)> = corpus.accepted().collect();
    let parts: Vec<PropertyReport> = accepted
        .par_iter()
        .map(|(e, r)| {
            let mut rep = PropertyReport::new(p);
            check(corpus.context_of(e), e, r, &mut rep);
            rep
        })
        .collect();
    let mut out = PropertyReport::new(p);
    for part in parts {
        out.merge(part);
    }
    out
}

fn graph(corpus: &Corpus, m: &Term) -> ReductionGraph {
    reduction_graph(m, corpus.config.graph_fuel)
}

fn determinacy(corpus: &Corpus) -> PropertyReport {
    let fuel = corpus.config.reduction_fuel;
    per_accepted(corpus, Property::Determinacy, |g, e, _, rep| {
        let m = &e.item.term;
        let (lo, ex1) = normalize_with(m, fuel, Strategy::LeftmostOutermost);
        let (ri, ex2) = normalize_with(m, fuel, Strategy::RightmostInnermost);
        let fail = if ex1 || ex2 {
            Some(Failure::new(show(g, m), "both strategies terminate", "reduction fuel exhausted"))
        } else if lo != ri {
            Some(Failure::new(
                show(g, m),
                format!("leftmost-outermost {}", term_in_context(g, &lo)),
                format!("rightmost-innermost {}", term_in_context(g, &ri)),
            ))
        } else {
            None
        };
        rep.record(fail);
    })
}

fn adequacy_reduction(corpus: &Corpus) -> PropertyReport {
    per_accepted(corpus, Property::AdequacyReduction, |g, e, r, rep| {
        let m = &e.item.term;
        let gr = graph(corpus, m);
        for (what, target) in [("whnf", &r.whnf), ("nf", &r.nf)] {
            let ok = !gr.truncated && gr.node_of(target).is_some_and(|t| gr.reaches_beta_r_then_eta(gr.root, t));
            rep.record((!ok).then(|| {
                Failure::new(
                    show(g, m),
                    format!("{what} {} reachable by βR-steps then η-steps", term_in_context(g, target)),
                    if gr.truncated { "reduction graph truncated".to_string() } else { "not reachable".to_string() },
                )
            }));
        }
    })
}

fn adequacy_forms(corpus: &Corpus) -> PropertyReport {
    per_accepted(corpus, Property::AdequacyForms, |g, e, r, rep| {
        let m = &e.item.term;
        rep.record((!is_whnf(&r.whnf)).then(|| {
            Failure::new(show(g, m), "whnf in weak-head normal form", term_in_context(g, &r.whnf))
        }));
        rep.record((!is_normal(&r.nf)).then(|| Failure::new(show(g, m), "nf in normal form", term_in_context(g, &r.nf))));
    })
}

fn psr(corpus: &Corpus) -> PropertyReport {
    per_accepted(corpus, Property::PSR, |g, e, r, rep| {
        let m = &e.item.term;
        let mut engine = Engine::new();
        for p in parallel_reducts(m) {
            let got = engine.eval_against(g, &p, &r.kind_nf).map(|(x, _)| x);
            let fail = match got {
                Ok(x) if x.nf == r.nf && x.kind_nf == r.kind_nf => None,
                Ok(x) => Some(Failure::new(show(g, &p), show_result(g, r), show_result(g, &x))),
                Err(err) => Some(Failure::new(show(g, &p), show_result(g, r), err.to_string())),
            };
            rep.record(fail.map(|f| Failure { input: format!("{} (parallel reduct of {})", f.input, term_in_context(g, m)), ..f }));
        }
    })
}

fn subject_reduction(corpus: &Corpus) -> PropertyReport {
    per_accepted(corpus, Property::SubjectReduction, |g, e, r, rep| {
        let m = &e.item.term;
        let mut engine = Engine::new();
        for (step, n) in one_step(m) {
            let fail = engine.eval_against(g, &n, &r.kind_nf).err().map(|err| {
                Failure::new(
                    format!("{} ({step}-reduct of {})", show(g, &n), term_in_context(g, m)),
                    format!("accepted at {}", idrt_core::print::kind_in_context(g, &r.kind_nf)),
                    err.to_string(),
                )
            });
            rep.record(fail);
        }
    })
}

/// The shape that record-η would contract: `<[r], l = r.l : A>` to `r`.
fn record_eta_candidate() -> (Context, Term, Term) {
    let g = idrt_core::parse::parse_context("T:Type, r:El(<<>, l : [_:El(<>)]T>)").expect("context parses");
    let r = Term::var("r");
    let fam = Term::lam("_", Kind::el(Term::EmptyRec), Term::var("T"));
    let m = Term::rec(Term::restr(r.clone()), "l", Term::sel(r.clone(), "l"), fam);
    (g, m, r)
}

fn church_rosser(corpus: &Corpus) -> PropertyReport {
    let mut rep = per_accepted(corpus, Property::ChurchRosser, |g, e, _, rep| {
        let m = &e.item.term;
        let gr = graph(corpus, m);
        let fail = if gr.truncated {
            Some(Failure::new(show(g, m), "a finite reduction graph", "reduction graph truncated"))
        } else {
            gr.unjoinable_pair().map(|(i, j)| {
                Failure::new(
                    show(g, m),
                    "every pair of reducts joinable",
                    format!("{} and {} have no common reduct", term_in_context(g, &gr.nodes[i]), term_in_context(g, &gr.nodes[j])),
                )
            })
        };
        rep.record(fail);
    });
    // Record-η is not a reduction, so its critical pair cannot arise.
    let (g, m, r) = record_eta_candidate();
    let accepted = Engine::new().eval_term(&g, &m).is_ok();
    let contracts = reduction_graph(&m, corpus.config.graph_fuel).node_of(&r).is_some();
    rep.record((!accepted || contracts).then(|| {
        Failure::new(
            show(&g, &m),
            "well-typed and not reducible to r",
            if contracts { "reduces to r" } else { "rejected by the evaluator" },
        )
    }));
    rep
}

fn strong_normalization(corpus: &Corpus) -> PropertyReport {
    let mut rep = per_accepted(corpus, Property::StrongNormalization, |g, e, _, rep| {
        let m = &e.item.term;
        let gr = graph(corpus, m);
        let fail = if gr.node_limit_hit {
            Some(Failure::new(show(g, m), "reduction graph closes", format!("more than {} terms", corpus.config.graph_fuel)))
        } else if !gr.is_acyclic() {
            Some(Failure::new(show(g, m), "acyclic reduction graph", "cycle"))
        } else {
            None
        };
        rep.record(fail);
    });
    // negative control
    let om = omega();
    let found: Vec<&Evaluated> =
        corpus.items.iter().filter(|e| e.item.origin == Origin::Negative && e.item.term == om).collect();
    if found.is_empty() {
        rep.record(Some(Failure::new(om.to_string(), "Ω in the corpus", "absent")));
    }
    for e in found {
        let g = corpus.context_of(e);
        rep.record(e.outcome.is_ok().then(|| Failure::new(show(g, &om), "rejected by the evaluator", "accepted")));
        let truncated = reduction_graph(&om, corpus.config.graph_fuel).truncated;
        rep.record((!truncated).then(|| Failure::new(show(g, &om), "reduction graph truncates", "closes")));
    }
    rep
}

/// Declarative verdicts against algorithmic ones on the curated suite.
pub fn soundness_bridge() -> (PropertyReport, DeclRuleCounts) {
    let mut rep = PropertyReport::new(Property::SoundnessBridge);
    let mut counts = DeclRuleCounts::default();
    for c in curated() {
        let d = match &c.derivation {
            Ok(d) => d,
            Err(msg) => {
                rep.record(Some(Failure::new(c.name, "derivation assembles", msg.clone())));
                continue;
            }
        };
        let full = check_derivation(d, SystemVariant::FullIDRT);
        let minus = check_derivation(d, SystemVariant::IDRTMinus);
        let alg = algorithmic_verdict(&d.conclusion);
        let input = format!("{} ({})", c.name, d.conclusion);
        let fail = if full.is_ok() != alg {
            Some(Failure::new(
                input,
                format!("declarative and algorithmic verdicts agree (algorithmic: {alg})"),
                match &full {
                    Ok(()) => "declarative: valid".to_string(),
                    Err(e) => format!("declarative: {e}"),
                },
            ))
        } else if full.is_ok() != c.expect_valid {
            Some(Failure::new(input, format!("valid: {}", c.expect_valid), format!("valid: {}", full.is_ok())))
        } else if minus.is_ok() && full.is_err() {
            Some(Failure::new(input, "accepted in IDRT⁻ implies accepted in IDRT", "rejected in IDRT"))
        } else {
            None
        };
        if full.is_ok() {
            counts.merge(&rule_usage(d));
        }
        rep.record(fail);
    }
    (rep, counts)
}

/// How many corpus items one automatic deriver handles before its tables
/// are dropped.
const DERIVER_BATCH: usize = 2000;

/// IDRT⁻ derivations of `M : A`, `M = N : A` and `M = P : A` for every
/// accepted item; also returns the rules those derivations use.
pub fn completeness_bridge(corpus: &Corpus) -> (PropertyReport, DeclRuleCounts) {
    let depth = corpus.config.derive_depth;
    let mut groups: BTreeMap<usize, Vec<(&Evaluated, &EvalResult)>> = BTreeMap::new();
    for (e, r) in corpus.accepted() {
        groups.entry(e.item.context).or_default().push((e, r));
    }
    let chunks: Vec<&[(&Evaluated, &EvalResult)]> = groups.values().flat_map(|v| v.chunks(DERIVER_BATCH)).collect();
    let parts: Vec<(PropertyReport, DeclRuleCounts)> = chunks
        .par_iter()
        .map(|chunk| {
            let mut rep = PropertyReport::new(Property::CompletenessBridge);
            let mut counts = DeclRuleCounts::default();
            let mut deriver = AutoDeriver::new();
            for (e, r) in chunk.iter() {
                let g = corpus.context_of(e);
                let m = &e.item.term;
                let facts = match deriver.evaluation(g, m) {
                    Ok(f) => f,
                    Err(err) => {
                        for _ in 0..3 {
                            rep.record(Some(Failure::new(show(g, m), "derivations constructed", err.to_string())));
                        }
                        continue;
                    }
                };
                let wanted = [
                    Judgement::HasKind(g.clone(), m.clone(), r.kind_nf.clone()),
                    Judgement::TermEq(g.clone(), m.clone(), r.whnf.clone(), r.kind_nf.clone()),
                    Judgement::TermEq(g.clone(), m.clone(), r.nf.clone(), r.kind_nf.clone()),
                ];
                for (d, want) in [&facts.has, &facts.eq_whnf, &facts.eq_nf].into_iter().zip(wanted) {
                    let h = derivation_depth(d);
                    let fail = if d.conclusion != want {
                        Some(Failure::new(show(g, m), want.to_string(), d.conclusion.to_string()))
                    } else if let Err(err) = check_derivation(d, SystemVariant::IDRTMinus) {
                        Some(Failure::new(want.to_string(), "an IDRT⁻ derivation", err.to_string()))
                    } else if h > depth {
                        Some(Failure::new(want.to_string(), format!("depth ≤ {depth}"), format!("depth {h}")))
                    } else {
                        counts.merge(&rule_usage(d));
                        None
                    };
                    rep.record(fail);
                }
            }
            (rep, counts)
        })
        .collect();
    let mut rep = PropertyReport::new(Property::CompletenessBridge);
    let mut counts = DeclRuleCounts::default();
    for (r, c) in parts {
        rep.merge(r);
        counts.merge(&c);
    }
    (rep, counts)
}

fn fresh_decl(g: &Context) -> Name {
    fresh_name("w", |n| g.declares(n))
}

fn weakening(corpus: &Corpus) -> PropertyReport {
    per_accepted(corpus, Property::Weakening, |g, e, r, rep| {
        let m = &e.item.term;
        let mut engine = Engine::new();
        let w = fresh_decl(g);
        let mut extensions = vec![Kind::Type, Kind::RType];
        if let Some((x, _)) = g.entries().iter().find(|(_, k)| *k == Kind::Type) {
            extensions.push(Kind::el(Term::Var(x.clone())));
        }
        for k in extensions {
            let g2 = g.extended(w.clone(), k);
            let got = engine.eval_term(&g2, m).map(|(x, _)| x);
            rep.record(match got {
                Ok(x) if x == *r => None,
                Ok(x) => Some(Failure::new(show(&g2, m), show_result(g, r), show_result(&g2, &x))),
                Err(err) => Some(Failure::new(show(&g2, m), show_result(g, r), err.to_string())),
            });
        }
    })
}

fn without(g: &Context, i: usize) -> Context {
    let mut entries = g.entries().to_vec();
    entries.remove(i);
    Context::from_entries(entries)
}

fn strengthening(corpus: &Corpus) -> PropertyReport {
    per_accepted(corpus, Property::Strengthening, |g, e, r, rep| {
        let m = &e.item.term;
        let fv = m.free_vars();
        let mut engine = Engine::new();
        for (i, (z, _)) in g.entries().iter().enumerate() {
            let later_use = g.entries()[i + 1..].iter().any(|(_, k)| k.mentions(z));
            if later_use {
                continue;
            }
            let g2 = without(g, i);
            let got = engine.eval_term(&g2, m).map(|(x, _)| x);
            if fv.contains(z) {
                // negative control: the declaration is needed
                rep.record(got.is_ok().then(|| Failure::new(show(&g2, m), format!("rejected without {z}"), "accepted")));
            } else {
                rep.record(match got {
                    Ok(x) if x == *r => None,
                    Ok(x) => Some(Failure::new(show(&g2, m), show_result(g, r), show_result(&g2, &x))),
                    Err(err) => Some(Failure::new(show(&g2, m), show_result(g, r), err.to_string())),
                });
            }
        }
    })
}

/// Contexts met under the binders of `m`.
fn binder_contexts(g: &Context, m: &Term, out: &mut Vec<Context>) {
    match m {
        Term::Var(_) | Term::Bound(_) | Term::EmptyRec => {}
        Term::Lam(h, k, body) => {
            let x = g.fresh(h.as_str(), &body.free_vars());
            let g2 = g.extended(x.clone(), (**k).clone());
            binder_kind_contexts(g, k, out);
            binder_contexts(&g2, &body.open(&x), out);
            out.push(g2);
        }
        Term::App(a, c) | Term::RecTypeExt(a, _, c) => {
            binder_contexts(g, a, out);
            binder_contexts(g, c, out);
        }
        Term::RecExt(a, _, c, f) => {
            binder_contexts(g, a, out);
            binder_contexts(g, c, out);
            binder_contexts(g, f, out);
        }
        Term::Restr(a) | Term::Sel(a, _) => binder_contexts(g, a, out),
    }
}

fn binder_kind_contexts(g: &Context, k: &Kind, out: &mut Vec<Context>) {
    match k {
        Kind::El(t) => binder_contexts(g, t, out),
        Kind::Prod(h, d, c) => {
            let x = g.fresh(h.as_str(), &c.free_vars());
            let g2 = g.extended(x.clone(), (**d).clone());
            binder_kind_contexts(g, d, out);
            binder_kind_contexts(&g2, &c.open(&x), out);
            out.push(g2);
        }
        _ => {}
    }
}

fn context_validity(corpus: &Corpus) -> PropertyReport {
    per_accepted(corpus, Property::ContextValidity, |g, e, _, rep| {
        let mut contexts: Vec<Context> = (0..=g.len()).map(|n| g.prefix(n)).collect();
        binder_contexts(g, &e.item.term, &mut contexts);
        let mut engine = Engine::new();
        for c in contexts {
            let fail = engine.eval_context(&c).err().map(|err| {
                Failure::new(
                    format!("{} (within {})", context_to_string(&c), show(g, &e.item.term)),
                    "valid context",
                    err.to_string(),
                )
            });
            rep.record(fail);
        }
    })
}

/// Runs one property on a built corpus.
pub fn run_property_on(p: Property, corpus: &Corpus) -> PropertyReport {
    match p {
        Property::Determinacy => determinacy(corpus),
        Property::AdequacyReduction => adequacy_reduction(corpus),
        Property::AdequacyForms => adequacy_forms(corpus),
        Property::PSR => psr(corpus),
        Property::SubjectReduction => subject_reduction(corpus),
        Property::ChurchRosser => church_rosser(corpus),
        Property::StrongNormalization => strong_normalization(corpus),
        Property::SoundnessBridge => soundness_bridge().0,
        Property::CompletenessBridge => completeness_bridge(corpus).0,
        Property::Weakening => weakening(corpus),
        Property::Strengthening => strengthening(corpus),
        Property::ContextValidity => context_validity(corpus),
    }
}

/// Whether the duplicate-label negative is present and rejected.
pub fn duplicate_label_rejected(corpus: &Corpus) -> bool {
    let t = duplicate_label_type();
    corpus.items.iter().any(|e| e.item.term == t && e.outcome.as_ref().is_err_and(|m| m.contains("l ∉ L")))
}
