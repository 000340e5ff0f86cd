use std::collections::BTreeSet;

use idrt_core::tos::Engine;
use idrt_core::Term;
use idrt_oracle::enumerate::{base_contexts, duplicate_label_type, omega, raw_terms, Pools};
use idrt_oracle::{enumerate, EnumConfig, Origin};

#[test]
fn enumeration_is_deterministic() {
    let cfg = EnumConfig::small();
    assert_eq!(enumerate(&cfg), enumerate(&cfg));
    let other = EnumConfig { seed: cfg.seed + 1, ..cfg.clone() };
    let randoms = |c: &EnumConfig| -> Vec<Term> {
        enumerate(c).into_iter().filter(|i| i.origin == Origin::Random).map(|i| i.term).collect()
    };
    assert_ne!(randoms(&cfg), randoms(&other), "the seed drives the supplement");
}

#[test]
fn enumeration_is_canonically_ordered_and_duplicate_free() {
    let items = enumerate(&EnumConfig::small());
    let keys: Vec<_> = items.iter().map(|i| (i.context, i.term.size(), i.term.to_string())).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    let distinct: BTreeSet<_> = items.iter().map(|i| (i.context, i.term.clone())).collect();
    assert_eq!(distinct.len(), items.len());
}

#[test]
fn size_one_over_a_constant_lists_the_atoms() {
    let cfg = EnumConfig::default();
    let b = base_contexts(&cfg).into_iter().find(|b| b.name == "const").unwrap();
    let printed: BTreeSet<String> = raw_terms(&b.ctx, &cfg.base_labels, 1).iter().map(Term::to_string).collect();
    for atom in ["c", "T", "<>"] {
        assert!(printed.contains(atom), "{atom} missing from {printed:?}");
    }
}

#[test]
fn raw_listing_contains_ill_typed_terms() {
    let cfg = EnumConfig::default();
    let b = base_contexts(&cfg).into_iter().find(|b| b.name == "const").unwrap();
    let mut e = Engine::new();
    let rejected = raw_terms(&b.ctx, &cfg.base_labels, 2).iter().filter(|t| e.eval_term(&b.ctx, t).is_err()).count();
    assert!(rejected > 0);
}

#[test]
fn negatives_are_in_the_stream() {
    let items = enumerate(&EnumConfig::small());
    for t in [omega(), duplicate_label_type()] {
        assert!(items.iter().any(|i| i.term == t), "{t} missing");
    }
}

/// Up to the raw bound, composing accepted subterms finds exactly the raw
/// terms the evaluator accepts.
#[test]
fn composition_agrees_with_exhaustive_listing() {
    let cfg = EnumConfig::default();
    for b in base_contexts(&cfg) {
        let mut pools = Pools::new(&cfg.base_labels);
        let mut e = Engine::new();
        for n in 1..=cfg.raw_size {
            let raw: BTreeSet<Term> =
                raw_terms(&b.ctx, &cfg.base_labels, n).into_iter().filter(|t| e.eval_term(&b.ctx, t).is_ok()).collect();
            let composed: BTreeSet<Term> = pools.terms(&b.ctx, n).iter().map(|a| a.term.clone()).collect();
            assert_eq!(raw, composed, "context {} size {n}", b.name);
        }
    }
}

#[test]
fn contexts_respect_the_bounds() {
    let cfg = EnumConfig { base_types: 1, max_context_len: 3, ..EnumConfig::default() };
    let names: Vec<&str> = base_contexts(&cfg).iter().map(|b| b.name).collect();
    assert!(!names.contains(&"two-types"));
    assert!(!names.contains(&"opaque-row"));
    assert!(base_contexts(&cfg).iter().all(|b| b.ctx.len() <= 3));
    assert!(EnumConfig { max_term_size: 0, ..EnumConfig::default() }.validate().is_err());
}
