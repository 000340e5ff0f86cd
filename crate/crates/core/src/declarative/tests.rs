use super::build as b;
use super::*;
use crate::parse::{parse_context, parse_term};

fn ctx(s: &str) -> Context {
    parse_context(s).unwrap()
}
fn t(s: &str) -> Term {
    parse_term(s).unwrap()
}

const TWO: &str = "T:Type, r:El(<<<>, k : [_:El(<>)]T>, l : [_:El(<<>, k : [_:El(<>)]T>)]T>)";

fn auto_ok(g: &str, m: &str) {
    let g = ctx(g);
    let m = t(m);
    let mut d = AutoDeriver::new();
    let f = d.evaluation(&g, &m).unwrap_or_else(|e| panic!("{m}: {e}"));
    for j in [&f.has, &f.eq_whnf, &f.eq_nf] {
        if let Err(e) = check_derivation(j, SystemVariant::IDRTMinus) {
            panic!("{m}: {e}");
        }
    }
    let (r, _) = crate::tos::Engine::new().eval_term(&g, &m).unwrap();
    assert_eq!(f.has.conclusion, Judgement::HasKind(g.clone(), m.clone(), r.kind_nf.clone()));
    assert_eq!(f.eq_whnf.conclusion, Judgement::TermEq(g.clone(), m.clone(), r.whnf, r.kind_nf.clone()));
    assert_eq!(f.eq_nf.conclusion, Judgement::TermEq(g, m, r.nf, r.kind_nf));
}

#[test]
fn automatic_derivations_check() {
    let base = "T:Type, c:El(T), f:(x:El(T))El(T)";
    for m in [
        "c",
        "f(c)",
        "[y:El(T)]f(y)",
        "([x:El(T)]x)(c)",
        "([x:El(T)]f(x))(f(c))",
        "<>",
        "<<>, l : [_:El(<>)]T>",
        "<<>, l = c : [_:El(<>)]T>",
        "<<>, l = c : [_:El(<>)]T>.l",
        "[<<>, l = c : [_:El(<>)]T>]",
        "([g:(x:El(T))El(T)]g(c))(f)",
        "([R:RType]R)(<<>, l : [_:El(<>)]T>)",
    ] {
        auto_ok(base, m);
    }
    for m in ["r", "r.l", "[r]", "[r].k", "r.k", "<r, m = [r].k : [_:El(<<<>, k : [_:El(<>)]T>, l : [_:El(<<>, k : [_:El(<>)]T>)]T>)]T>"] {
        auto_ok(TWO, m);
    }
}

#[test]
fn derive_auto_handles_every_form() {
    let g = ctx("T:Type, c:El(T)");
    let js = [
        Judgement::CtxValid(g.clone()),
        parse_judgement("T:Type, c:El(T) |- El(([x:Type]x)(T)) kind").unwrap(),
        parse_judgement("T:Type, c:El(T) |- El(([x:Type]x)(T)) = El(T)").unwrap(),
        parse_judgement("T:Type, c:El(T) |- <<>, l : [_:El(<>)]T> : Type").unwrap(),
        parse_judgement("T:Type, c:El(T) |- ([x:El(T)]x)(c) = c : El(([x:Type]x)(T))").unwrap(),
    ];
    for j in &js {
        let d = derive_auto(j, 40).unwrap_or_else(|e| panic!("{j}: {e}"));
        check_derivation(&d, SystemVariant::IDRTMinus).unwrap();
        assert_eq!(&d.conclusion, j);
    }
    let bad = parse_judgement("T:Type, c:El(T) |- c = T : El(T)").unwrap();
    assert!(derive_auto(&bad, 40).is_err());
}

#[test]
fn scripts_round_trip() {
    let j = parse_judgement("T:Type, c:El(T) |- ([x:El(T)]x)(c) = c : El(T)").unwrap();
    let d = derive_auto(&j, 40).unwrap();
    let text = print_script(&d);
    let back = parse_script(&text).unwrap();
    assert_eq!(back, d);
    check_derivation(&back, SystemVariant::IDRTMinus).unwrap();
}

#[test]
fn judgement_forms_parse() {
    assert_eq!(parse_judgement("() |- valid").unwrap(), Judgement::CtxValid(Context::new()));
    assert_eq!(parse_judgement("|- Type kind").unwrap(), Judgement::KindWf(Context::new(), Kind::Type));
    let j = parse_judgement("A:Type |- El(A) = El(A)").unwrap();
    assert!(matches!(j, Judgement::KindEq(..)));
    assert!(parse_judgement("|- Type : Type").is_err());
}

#[test]
fn diagnostics_locate_the_fault() {
    let v = b::ctx_empty();
    let ty = b::type_kind(&v).unwrap();
    let g = b::ctx_ext("A", &ty).unwrap();
    let a = b::var(&g, "A").unwrap();
    // claims A : RType
    let wrong = Derivation::new(DeclRule::Var, Judgement::HasKind(ctx("A:Type"), t("A"), Kind::RType), vec![g.clone()]);
    let top = Derivation::new(
        DeclRule::RTypeToType,
        Judgement::HasKind(ctx("A:Type"), t("A"), Kind::Type),
        vec![wrong],
    );
    let e = check_derivation(&top, SystemVariant::FullIDRT).unwrap_err();
    assert_eq!(e.path, vec![0]);
    assert_eq!(e.slot, "conclusion");
    let el = b::el_kind(&a).unwrap();
    let g2 = b::ctx_ext("x", &el).unwrap();
    let sub = b::subst(DeclRule::SubstCtx, &g2, &a).unwrap_err();
    assert_eq!(sub.slot, "premise 2 kind");
}

#[test]
fn substitution_rules_only_in_full_system() {
    // T:Type, A:Type, x:El(A) |- x : El(A)  with  T:Type |- T : Type
    let v = b::ctx_empty();
    let gt = b::ctx_ext("T", &b::type_kind(&v).unwrap()).unwrap();
    let ga = b::ctx_ext("A", &b::type_kind(&gt).unwrap()).unwrap();
    let gx = b::ctx_ext("x", &b::el_kind(&b::var(&ga, "A").unwrap()).unwrap()).unwrap();
    let d = b::subst(DeclRule::SubstTerm, &b::var(&gx, "x").unwrap(), &b::var(&gt, "T").unwrap()).unwrap();
    assert_eq!(d.conclusion, parse_judgement("T:Type, x:El(T) |- x : El(T)").unwrap());
    assert!(check_derivation(&d, SystemVariant::FullIDRT).is_ok());
    let e = check_derivation(&d, SystemVariant::IDRTMinus).unwrap_err();
    assert_eq!(e.message, "rule excluded in IDRT⁻");
    assert!(e.path.is_empty());
}

#[test]
fn duplicate_label_side_condition() {
    let one = derive_auto(&parse_judgement("T:Type |- <<>, l : [_:El(<>)]T> : RType[l]").unwrap(), 40).unwrap();
    let fam = derive_auto(
        &parse_judgement("T:Type |- [_:El(<<>, l : [_:El(<>)]T>)]T : (_:El(<<>, l : [_:El(<>)]T>))Type").unwrap(),
        40,
    )
    .unwrap();
    let err = b::rec_type_form(&one, &fam, "l").unwrap_err();
    assert_eq!(err.slot, "side condition l ∉ L");
    // a forged conclusion is caught by the checker too
    let forged = Derivation::new(
        DeclRule::RecTypeForm,
        parse_judgement("T:Type |- <<<>, l : [_:El(<>)]T>, l : [_:El(<<>, l : [_:El(<>)]T>)]T> : RType[l]").unwrap(),
        vec![one.clone(), fam.clone()],
    );
    let e = check_derivation(&forged, SystemVariant::FullIDRT).unwrap_err();
    assert!(e.to_string().contains("l ∉ L"), "{e}");
    assert!(b::rec_type_form(&one, &fam, "m").is_ok());
}
