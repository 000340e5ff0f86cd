//! Hand-built declarative derivations: one positive instance headed by each
//! rule, a few larger examples, and forged derivations of false judgements.

use std::sync::Arc;

use idrt_core::declarative::build::{self as b, D};
use idrt_core::declarative::{derive_auto, parse_judgement, DeclRule, Derivation, Judgement};
use idrt_core::tos::Engine;
use idrt_core::{checker, Label, LabelSet};

use crate::enumerate::TWO_FIELDS;

/// A curated derivation with its expected verdict.
pub struct Curated {
    pub name: &'static str,
    /// The derivation, or why it could not be assembled.
    pub derivation: Result<D, String>,
    pub expect_valid: bool,
}

type R = Result<D, String>;

const G1: &str = "T:Type, c:El(T)";
const G2: &str = "T:Type, c:El(T), f:(x:El(T))El(T)";
const G4: &str = "T:Type, U:Type, c:El(T), d:El(U)";
const PAIR: &str = "<<>, l = c : [_:El(<>)]T>";
const ONE: &str = "<<>, l : [_:El(<>)]T>";

fn j(s: &str) -> Result<Judgement, String> {
    parse_judgement(s).map_err(|e| format!("`{s}`: {e}"))
}

fn auto(s: &str) -> R {
    derive_auto(&j(s)?, 200).map_err(|e| format!("`{s}`: {e}"))
}

fn two() -> String {
    format!("T:Type, r:El({TWO_FIELDS})")
}

fn labels(ls: &[&str]) -> LabelSet {
    ls.iter().map(|l| Label::new(l)).collect()
}

fn e<T>(r: Result<T, b::BuildError>) -> Result<T, String> {
    r.map_err(|e| e.to_string())
}

/// A node with a stated (forged) conclusion.
fn forged(rule: DeclRule, conclusion: &str, premises: Vec<D>) -> R {
    Ok(Derivation::new(rule, j(conclusion)?, premises))
}

macro_rules! curated {
    ($($name:literal, $expect:expr => $body:block)*) => {
        vec![$(Curated { name: $name, derivation: (|| -> R { $body })(), expect_valid: $expect }),*]
    };
}

/// The curated suite.
pub fn curated() -> Vec<Curated> {
    let two = two();
    let beta_t = "T:Type |- El(([y:Type]y)(T)) = El(T)";
    let beta_c = format!("{G1} |- ([x:El(T)]x)(c) = c : El(T)");
    let el_beta_c = format!("{G1} |- El(([y:Type]y)(T)) = El(T)");
    curated! {
        "ctx-empty", true => { Ok(b::ctx_empty()) }
        "ctx-ext", true => { e(b::ctx_ext("T", &e(b::type_kind(&b::ctx_empty()))?)) }
        "var", true => { e(b::var(&auto(&format!("{G1} |- valid"))?, "c")) }
        "kind-refl", true => { e(b::kind_refl(&auto("T:Type |- El(T) kind")?)) }
        "kind-sym", true => { e(b::kind_sym(&auto(beta_t)?)) }
        "kind-trans", true => {
            let q = auto(beta_t)?;
            e(b::kind_trans(&q, &e(b::kind_sym(&q))?))
        }
        "term-refl", true => { e(b::refl(&auto(&format!("{G1} |- c : El(T)"))?)) }
        "term-sym", true => { e(b::sym(&auto(&beta_c)?)) }
        "term-trans", true => {
            let q = auto(&beta_c)?;
            e(b::trans(&q, &e(b::sym(&q))?))
        }
        "conv", true => {
            let k = e(b::kind_sym(&auto(&el_beta_c)?))?;
            e(b::conv(&auto(&format!("{G1} |- c : El(T)"))?, &k))
        }
        "conv-eq", true => {
            let k = e(b::kind_sym(&auto(&el_beta_c)?))?;
            e(b::conv_eq(&auto(&beta_c)?, &k))
        }
        "subst-ctx", true => {
            e(b::subst(DeclRule::SubstCtx, &auto("T:Type, A:Type, x:El(A) |- valid")?, &auto("T:Type |- T : Type")?))
        }
        "subst-kind", true => {
            e(b::subst(DeclRule::SubstKind, &auto("T:Type, A:Type |- El(A) kind")?, &auto("T:Type |- T : Type")?))
        }
        "subst-kind-eq-arg", true => {
            e(b::subst(
                DeclRule::SubstKindEqArg,
                &auto("T:Type, A:Type |- El(A) kind")?,
                &auto("T:Type |- ([y:Type]y)(T) = T : Type")?,
            ))
        }
        "subst-term", true => {
            e(b::subst(DeclRule::SubstTerm, &auto("T:Type, A:Type, x:El(A) |- x : El(A)")?, &auto("T:Type |- T : Type")?))
        }
        "subst-term-eq-arg", true => {
            e(b::subst(DeclRule::SubstTermEqArg, &auto(&format!("{G1}, y:El(T) |- y : El(T)"))?, &auto(&beta_c)?))
        }
        "subst-kind-eq", true => {
            e(b::subst(
                DeclRule::SubstKindEq,
                &auto("T:Type, A:Type |- El(([y:Type]y)(A)) = El(A)")?,
                &auto("T:Type |- T : Type")?,
            ))
        }
        "subst-term-eq", true => {
            e(b::subst(
                DeclRule::SubstTermEq,
                &auto("T:Type, A:Type, x:El(A) |- ([z:El(A)]z)(x) = x : El(A)")?,
                &auto("T:Type |- T : Type")?,
            ))
        }
        "type-kind", true => { e(b::type_kind(&auto("T:Type |- valid")?)) }
        "el-kind", true => { e(b::el_kind(&auto("T:Type |- T : Type")?)) }
        "el-eq", true => { e(b::el_eq(&auto("T:Type |- ([y:Type]y)(T) = T : Type")?)) }
        "prod-kind", true => {
            e(b::prod_kind(&auto("T:Type |- El(T) kind")?, &auto("T:Type, x:El(T) |- El(T) kind")?))
        }
        "prod-eq", true => {
            e(b::prod_eq(&auto(beta_t)?, &auto("T:Type, x:El(([y:Type]y)(T)) |- El(T) = El(T)")?))
        }
        "lam", true => { e(b::lam(&auto("T:Type, x:El(T) |- x : El(T)")?)) }
        "lam-eq", true => {
            e(b::lam_eq(
                &auto(beta_t)?,
                &auto("T:Type, x:El(([y:Type]y)(T)) |- x = x : El(([y:Type]y)(T))")?,
            ))
        }
        "app", true => {
            e(b::app_rule(&auto(&format!("{G2} |- f : (x:El(T))El(T)"))?, &auto(&format!("{G2} |- c : El(T)"))?))
        }
        "app-eq", true => {
            e(b::app_eq(
                &auto(&format!("{G2} |- f = f : (x:El(T))El(T)"))?,
                &auto(&format!("{G2} |- ([z:El(T)]z)(c) = c : El(T)"))?,
            ))
        }
        "beta", true => {
            e(b::beta(&auto(&format!("{G1}, x:El(T) |- x : El(T)"))?, &auto(&format!("{G1} |- c : El(T)"))?))
        }
        "eta", true => { e(b::eta(&auto(&format!("{G2} |- f : (x:El(T))El(T)"))?)) }
        "rtype-kind", true => { e(b::rtype_kind(&b::ctx_empty())) }
        "rtype-l-kind", true => { e(b::rtype_l_kind(&b::ctx_empty(), labels(&["k", "l"]))) }
        "rtype-l-sub", true => {
            e(b::rtype_l_sub(&auto(&format!("T:Type |- {ONE} : RType[l]"))?, labels(&["k", "l"])))
        }
        "rtype-l-to-rtype", true => { e(b::rtype_l_to_rtype(&auto(&format!("T:Type |- {ONE} : RType[l]"))?)) }
        "rtype-to-type", true => {
            let h = e(b::rtype_l_to_rtype(&auto(&format!("T:Type |- {ONE} : RType[l]"))?))?;
            e(b::rtype_to_type(&h))
        }
        "empty-rec-type", true => { e(b::empty_rec_type(&auto("T:Type |- valid")?)) }
        "rec-type-form", true => {
            let v = auto("T:Type |- valid")?;
            e(b::rec_type_form(&e(b::empty_rec_type(&v))?, &auto("T:Type |- [_:El(<>)]T : (_:El(<>))Type")?, "l"))
        }
        "empty-rec", true => { e(b::empty_rec(&auto("T:Type |- valid")?)) }
        "rec-intro", true => {
            let v = auto(&format!("{G1} |- valid"))?;
            let rt = e(b::rtype_l_to_rtype(&auto(&format!("{G1} |- {ONE} : RType[l]"))?))?;
            let k = auto(&format!("{G1} |- El(T) = El(([_:El(<>)]T)(<>))"))?;
            let a = e(b::conv(&auto(&format!("{G1} |- c : El(T)"))?, &k))?;
            e(b::rec_intro(&rt, &e(b::empty_rec(&v))?, &a))
        }
        "restr", true => { e(b::restr(&auto(&format!("{two} |- r : El({TWO_FIELDS})"))?)) }
        "sel", true => { e(b::sel(&auto(&format!("{two} |- r : El({TWO_FIELDS})"))?)) }
        "sel-other", true => {
            e(b::sel_other(&auto(&format!("{two} |- r : El({TWO_FIELDS})"))?, &auto(&format!("{two} |- [r].k : El(T)"))?))
        }
        "restr-comp", true => { e(b::restr_comp(&auto(&format!("{G1} |- {PAIR} : El({ONE})"))?)) }
        "sel-comp", true => { e(b::sel_comp(&auto(&format!("{G1} |- {PAIR} : El({ONE})"))?)) }
        "sel-other-comp", true => {
            e(b::sel_other_comp(
                &auto(&format!("{two} |- r : El({TWO_FIELDS})"))?,
                &auto(&format!("{two} |- [r].k : El(T)"))?,
            ))
        }
        "empty-rec-type-eq", true => { e(b::empty_rec_type_eq(&auto("T:Type |- valid")?)) }
        "rec-type-eq", true => {
            let v = auto("T:Type |- valid")?;
            e(b::rec_type_eq(
                &e(b::empty_rec_type_eq(&v))?,
                &auto("T:Type |- [_:El(<>)]([y:Type]y)(T) = [_:El(<>)]T : (_:El(<>))Type")?,
                "l",
            ))
        }
        "empty-rec-eq", true => { e(b::empty_rec_eq(&auto("T:Type |- valid")?)) }
        "rec-eq", true => {
            let v = auto(&format!("{G1} |- valid"))?;
            e(b::rec_eq(
                &e(b::empty_rec_type(&v))?,
                &e(b::empty_rec_eq(&v))?,
                &auto(&format!("{G1} |- ([x:El(T)]x)(c) = c : El(([_:El(<>)]T)(<>))"))?,
                &auto(&format!("{G1} |- [_:El(<>)]T = [_:El(<>)]([y:Type]y)(T) : (_:El(<>))Type"))?,
                "l",
            ))
        }
        "restr-eq", true => { e(b::restr_eq(&auto(&format!("{two} |- r = r : El({TWO_FIELDS})"))?)) }
        "sel-eq", true => { e(b::sel_eq(&auto(&format!("{two} |- r = r : El({TWO_FIELDS})"))?)) }
        "dependent-record", true => {
            let rt = "<<<>, n : [_:El(<>)]Nat>, v : [x:El(<<>, n : [_:El(<>)]Nat>)]Vect(x.n)>";
            let rec = "<<<>, n = two : [_:El(<>)]Nat>, v = v2 : [x:El(<<>, n : [_:El(<>)]Nat>)]Vect(x.n)>";
            auto(&format!("Nat:Type, two:El(Nat), Vect:(n:El(Nat))Type, v2:El(Vect(two)) |- {rec} : El({rt})"))
        }
        "dependent-selection", true => { auto(&format!("{two} |- r.k = [r].k : El(T)")) }
        "beta-under-record", true => {
            auto(&format!("{G2} |- <<>, l = ([x:El(T)]f(x))(c) : [_:El(<>)]T>.l = f(c) : El(T)"))
        }
        // forged derivations of false judgements
        "forged-duplicate-label", false => {
            let one = auto(&format!("T:Type |- {ONE} : RType[l]"))?;
            let fam = auto(&format!("T:Type |- [_:El({ONE})]T : (_:El({ONE}))Type"))?;
            forged(DeclRule::RecTypeForm, &format!("T:Type |- <{ONE}, l : [_:El({ONE})]T> : RType[l]"), vec![one, fam])
        }
        "forged-var-kind", false => {
            forged(DeclRule::Var, &format!("{G4} |- c : El(U)"), vec![auto(&format!("{G4} |- valid"))?])
        }
        "forged-conv", false => {
            let h = auto(&format!("{G4} |- c : El(T)"))?;
            let q = auto(&format!("{G4} |- El(T) = El(T)"))?;
            forged(DeclRule::Conv, &format!("{G4} |- c : El(U)"), vec![h, q])
        }
        "forged-beta", false => {
            let body = auto(&format!("{G4}, x:El(T) |- x : El(T)"))?;
            let arg = auto(&format!("{G4} |- c : El(T)"))?;
            forged(DeclRule::Beta, &format!("{G4} |- ([x:El(T)]x)(c) = d : El(T)"), vec![body, arg])
        }
        "forged-sel-comp", false => {
            let h = auto(&format!("{G4} |- {PAIR} : El({ONE})"))?;
            forged(DeclRule::SelComp, &format!("{G4} |- {PAIR}.l = d : El(([_:El(<>)]T)(<>))"), vec![h])
        }
        "forged-label-inclusion", false => {
            let h = auto(&format!("T:Type |- {ONE} : RType[l]"))?;
            forged(DeclRule::RTypeLSub, &format!("T:Type |- {ONE} : RType[k]"), vec![h])
        }
        "forged-redeclaration", false => {
            forged(DeclRule::CtxExt, "T:Type, T:Type |- valid", vec![auto("T:Type |- Type kind")?])
        }
        "forged-application", false => {
            let f = auto(&format!("{G2} |- f : (x:El(T))El(T)"))?;
            let a = auto(&format!("{G2} |- T : Type"))?;
            forged(DeclRule::App, &format!("{G2} |- f(T) : El(T)"), vec![f, a])
        }
        "forged-eta", false => {
            forged(DeclRule::Eta, &format!("{G1} |- [x:El(T)]c(x) = c : El(T)"), vec![auto(&format!("{G1} |- c : El(T)"))?])
        }
        "forged-restriction", false => {
            forged(DeclRule::Restr, &format!("{G1} |- [c] : El(<>)"), vec![auto(&format!("{G1} |- c : El(T)"))?])
        }
    }
}

/// The algorithmic verdict on a judgement.
pub fn algorithmic_verdict(j: &Judgement) -> bool {
    match j {
        Judgement::CtxValid(g) => checker::check_context(g).accepted(),
        Judgement::KindWf(g, k) => checker::Checker::new().check_kind(g, k).accepted(),
        Judgement::KindEq(g, a, c) => {
            let mut e = Engine::new();
            match (e.eval_kind(g, a), e.eval_kind(g, c)) {
                (Ok((x, _)), Ok((y, _))) => x == y,
                _ => false,
            }
        }
        Judgement::HasKind(g, m, k) => checker::check(g, m, k).accepted(),
        Judgement::TermEq(g, m, n, k) => checker::equal(g, m, n, k).accepted(),
    }
}

/// Rules heading the positive curated derivations.
pub fn headed_rules(suite: &[Curated]) -> Vec<DeclRule> {
    suite
        .iter()
        .filter(|c| c.expect_valid)
        .filter_map(|c| c.derivation.as_ref().ok().map(|d: &Arc<Derivation>| d.rule))
        .collect()
}
