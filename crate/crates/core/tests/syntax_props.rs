use idrt_core::parse::{parse_kind, parse_term};
use idrt_core::reduction::{is_normal, is_whnf, one_step, parallel_reducts, reduction_graph};
use idrt_core::{Kind, Name, Term};
use proptest::prelude::*;

const NAMES: [&str; 4] = ["x", "y", "z", "c"];
const LABELS: [&str; 2] = ["k", "l"];

fn name() -> impl Strategy<Value = &'static str> {
    prop::sample::select(&NAMES[..])
}

fn label() -> impl Strategy<Value = &'static str> {
    prop::sample::select(&LABELS[..])
}

fn term() -> BoxedStrategy<Term> {
    let leaf = prop_oneof![
        name().prop_map(Term::var),
        Just(Term::var("T")),
        Just(Term::EmptyRec),
    ];
    leaf.prop_recursive(4, 24, 3, |t| {
        prop_oneof![
            (name(), kind_over(t.clone()), t.clone()).prop_map(|(x, k, b)| Term::lam(x, k, b)),
            (t.clone(), t.clone()).prop_map(|(f, a)| Term::app(f, a)),
            (t.clone(), label(), t.clone()).prop_map(|(r, l, a)| Term::rec_type(r, l, a)),
            (t.clone(), label(), t.clone(), t.clone()).prop_map(|(r, l, v, a)| Term::rec(r, l, v, a)),
            t.clone().prop_map(Term::restr),
            (t.clone(), label()).prop_map(|(r, l)| Term::sel(r, l)),
        ]
    })
    .boxed()
}

fn kind_over(t: impl Strategy<Value = Term> + Clone + 'static) -> impl Strategy<Value = Kind> {
    let base = prop_oneof![
        Just(Kind::Type),
        Just(Kind::RType),
        prop::collection::vec(label(), 0..3).prop_map(Kind::rtype_l),
        t.prop_map(Kind::el),
    ];
    base.prop_recursive(2, 6, 2, |k| (name(), k.clone(), k).prop_map(|(x, a, b)| Kind::prod(x, a, b)))
}

fn kind() -> impl Strategy<Value = Kind> {
    kind_over(term())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(400))]

    #[test]
    fn printed_terms_parse_back(t in term()) {
        let back = parse_term(&t.to_string()).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(back.to_string(), t.to_string());
    }

    #[test]
    fn printed_kinds_parse_back(k in kind()) {
        prop_assert_eq!(parse_kind(&k.to_string()).unwrap(), k);
    }

    #[test]
    fn alpha_equivalence_is_an_equivalence(a in term(), b in term(), c in term()) {
        prop_assert!(a.alpha_eq(&a));
        prop_assert_eq!(a.alpha_eq(&b), b.alpha_eq(&a));
        if a.alpha_eq(&b) && b.alpha_eq(&c) {
            prop_assert!(a.alpha_eq(&c));
        }
    }

    #[test]
    fn renaming_a_binder_is_alpha_equivalent(k in kind(), body in term()) {
        let fresh = Name::new("w");
        let renamed = body.subst(&Name::new("x"), &Term::var("w"));
        prop_assume!(!body.mentions(&fresh));
        prop_assert_eq!(Term::lam("x", k.clone(), body), Term::lam("w", k, renamed));
    }

    #[test]
    fn substituting_a_variable_for_itself_is_the_identity(t in term(), x in name()) {
        prop_assert_eq!(t.subst(&Name::new(x), &Term::var(x)), t);
    }

    #[test]
    fn substitutions_compose(t in term(), u in term(), v in term()) {
        let (x, y) = (Name::new("x"), Name::new("y"));
        prop_assume!(!v.mentions(&x));
        let left = t.subst(&x, &u).subst(&y, &v);
        let right = t.subst(&y, &v).subst(&x, &u.subst(&y, &v));
        prop_assert_eq!(left, right);
    }

    #[test]
    fn substitution_bounds_free_variables(t in term(), u in term(), x in name()) {
        let x = Name::new(x);
        let mut bound = t.free_vars();
        bound.remove(&x);
        bound.extend(u.free_vars());
        prop_assert!(t.subst(&x, &u).free_vars().is_subset(&bound));
    }

    #[test]
    fn normal_exactly_when_no_step(t in term()) {
        prop_assert_eq!(is_normal(&t), one_step(&t).is_empty());
        if is_normal(&t) {
            prop_assert!(is_whnf(&t));
        }
    }

    #[test]
    fn one_step_within_parallel_within_many(t in term()) {
        let par = parallel_reducts(&t);
        prop_assert!(par.contains(&t), "parallel reduction is reflexive");
        for (_, s) in one_step(&t) {
            prop_assert!(par.contains(&s), "{} is a one-step reduct of {} but not a parallel one", s, t);
        }
        let g = reduction_graph(&t, 512);
        if !g.node_limit_hit {
            for p in &par {
                prop_assert!(g.node_of(p).is_some(), "{} not reachable from {}", p, t);
            }
        }
    }
}
