use idrt_core::checker::{check_source, equal};
use idrt_core::parse::{parse_context, parse_kind, parse_term};

const NAT_VECT: &str = include_str!("../../cli/examples/nat_vect.idrt");
const DUP_LABEL: &str = include_str!("../../cli/examples/dup_label.idrt");

#[test]
fn nat_vect_file_checks() {
    let r = check_source(NAT_VECT).unwrap();
    assert!(r.accepted(), "{r}");
    let last = r.outcomes.last().unwrap();
    assert_eq!(last.report.nf.as_ref().unwrap().to_string(), "[p].n");
}

#[test]
fn dependent_record_against_its_type() {
    let src = "Nat : Type; two : El(Nat); Vect : (n:El(Nat))Type; v2 : El(Vect(two));\n\
               check <n = two, v = v2> : El(<n : Nat, v : Vect(n)>);\n\
               check <n = two, v = two> : El(<n : Nat, v : Vect(n)>);";
    let r = check_source(src).unwrap();
    assert!(r.outcomes[4].report.accepted());
    assert!(!r.outcomes[5].report.accepted(), "a value of the wrong type is rejected");
}

#[test]
fn duplicate_label_file_is_rejected() {
    let r = check_source(DUP_LABEL).unwrap();
    assert!(!r.accepted());
    assert!(r.to_string().contains("l ∉ L"), "{r}");
}

#[test]
fn golden_equalities() {
    let g = parse_context("T:Type, a:El(T), r:El(<<>, k : [_:El(<>)]T>)").unwrap();
    let fam = "[_:El(<<>, k : [_:El(<>)]T>)]T";
    let pair = format!("<r, l = a : {fam}>");
    let k = |s: &str| parse_kind(s).unwrap();
    let t = |s: &str| parse_term(s).unwrap();
    assert!(equal(&g, &t(&format!("[{pair}]")), &t("r"), &k("El(<<>, k : [_:El(<>)]T>)")).accepted());
    assert!(equal(&g, &t(&format!("{pair}.l")), &t("a"), &k("El(T)")).accepted());
    let two = parse_context("T:Type, r:El(<<<>, k : [_:El(<>)]T>, l : [_:El(<<>, k : [_:El(<>)]T>)]T>)").unwrap();
    assert!(equal(&two, &t("r.k"), &t("[r].k"), &k("El(T)")).accepted());
}
