use idrt_core::parse::{parse_context, parse_kind, parse_term};
use idrt_core::reduction::{one_step, reduction_graph, StepKind};
use idrt_core::tos::Engine;
use idrt_oracle::props::duplicate_label_rejected;
use idrt_oracle::{run_property_on, structural_suite, Corpus, EnumConfig, Failure, Property, PropertyReport};
use proptest::prelude::*;

#[test]
fn structural_suite_passes_at_small_scale() {
    let reports = structural_suite(&EnumConfig::small());
    assert_eq!(reports.len(), 3);
    for r in reports {
        assert!(r.property.is_structural());
        assert!(r.instances_checked > 0);
        assert!(r.passed(), "{r}");
    }
}

#[test]
fn weakening_and_strengthening_examples() {
    let c = parse_term("c").unwrap();
    let eval = |g: &str| Engine::new().eval_term(&parse_context(g).unwrap(), &c).map(|(r, _)| r);
    let base = eval("T:Type, c:El(T)").unwrap();
    assert_eq!(eval("T:Type, c:El(T), U:Type").unwrap(), base);
    assert_eq!(eval("T:Type, U:Type, c:El(T)").unwrap(), base);
    assert!(eval("U:Type, c:El(T)").is_err(), "dropping a used declaration breaks evaluation");
}

#[test]
fn reports_are_reproducible() {
    let corpus = Corpus::build(&EnumConfig::small());
    assert!(duplicate_label_rejected(&corpus));
    for p in [Property::Determinacy, Property::StrongNormalization, Property::AdequacyReduction] {
        assert_eq!(run_property_on(p, &corpus), run_property_on(p, &corpus));
    }
}

/// Under η, a well-typed abstraction whose domain is a strict subkind of its
/// body function's domain has two normal forms of different kinds.
#[test]
fn eta_with_kind_inclusion_is_not_confluent() {
    let g = parse_context("").unwrap();
    let m = parse_term("[x:RType[]]([_:RType]<>)(x)").unwrap();
    let (r, _) = Engine::new().eval_term(&g, &m).unwrap();
    assert_eq!(r.nf.to_string(), "[_:RType[]]<>");
    let reducts = one_step(&m);
    let eta = reducts.iter().find(|(k, _)| *k == StepKind::Eta).map(|(_, t)| t.clone()).unwrap();
    assert_eq!(eta.to_string(), "[_:RType]<>");
    assert!(Engine::new().eval_against(&g, &eta, &parse_kind("(_:RType[])El(<>)").unwrap()).is_err());
    assert!(reduction_graph(&m, 64).unjoinable_pair().is_some());
}

/// Selecting a non-last field of a variable is computed by the evaluator
/// but has no untyped redex.
#[test]
fn field_selection_on_a_variable_has_no_untyped_step() {
    let g = parse_context("T:Type, r:El(<<<>, k : [_:El(<>)]T>, l : [_:El(<<>, k : [_:El(<>)]T>)]T>)").unwrap();
    let m = parse_term("r.k").unwrap();
    let (res, _) = Engine::new().eval_term(&g, &m).unwrap();
    assert_eq!(res.nf.to_string(), "[r].k");
    assert!(one_step(&m).is_empty());
}

fn failure() -> impl Strategy<Value = Failure> {
    ("[a-z]{1,3}", "[a-z]{1,3}", "[a-z]{1,3}").prop_map(|(i, e, g)| Failure::new(i, e, g))
}

fn report() -> impl Strategy<Value = PropertyReport> {
    (0u64..50, prop::collection::vec(failure(), 0..4)).prop_map(|(n, fs)| {
        let mut r = PropertyReport::new(Property::PSR);
        r.instances_checked = n;
        r.failures = fs;
        r
    })
}

proptest! {
    #[test]
    fn merging_reports_is_associative(a in report(), b in report(), c in report()) {
        let mut left = a.clone();
        left.merge(b.clone());
        left.merge(c.clone());
        let mut bc = b;
        bc.merge(c);
        let mut right = a;
        right.merge(bc);
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(left.passed(), left.failures.is_empty());
    }
}
