//! Forward construction of derivations. Each rule is a function from premise
//! judgements (plus the few parameters a conclusion carries that its premises
//! do not) to the conclusion. The derivation checker reuses the same schema
//! functions, so constructing and checking cannot drift apart.

use std::sync::Arc;

use thiserror::Error;

use super::{DeclRule, Derivation, Judgement};
use crate::print::{kind_in_context, term_in_context};
use crate::syntax::{Context, Hint, Kind, Label, LabelSet, Name, Term};

/// Data in a conclusion that is not determined by the premises.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Params {
    /// The declared variable (`CtxExt`) or the variable itself (`Var`).
    pub name: Option<Name>,
    /// The label set of `RTypeLKind` and `RTypeLSub`.
    pub labels: Option<LabelSet>,
    /// The new label of `RecTypeForm`, `RecTypeEq` and `RecEq`.
    pub label: Option<Label>,
}

impl Params {
    pub fn name(x: &Name) -> Self {
        Params { name: Some(x.clone()), ..Params::default() }
    }
    pub fn labels(l: LabelSet) -> Self {
        Params { labels: Some(l), ..Params::default() }
    }
    pub fn label(l: &Label) -> Self {
        Params { label: Some(l.clone()), ..Params::default() }
    }
}

/// A rule instance that does not fit its schema. `slot` names the offending
/// premise or side condition.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{slot}: {message}")]
pub struct BuildError {
    pub rule: DeclRule,
    pub slot: String,
    pub message: String,
}

type R<T> = Result<T, (String, String)>;

fn err<T>(slot: impl Into<String>, message: impl Into<String>) -> R<T> {
    Err((slot.into(), message.into()))
}

fn slot(i: usize) -> String {
    format!("premise {}", i + 1)
}

fn valid(j: &Judgement, i: usize) -> R<&Context> {
    match j {
        Judgement::CtxValid(g) => Ok(g),
        other => err(slot(i), format!("expected a judgement of form `Γ valid`, found `{other}`")),
    }
}

fn kwf(j: &Judgement, i: usize) -> R<(&Context, &Kind)> {
    match j {
        Judgement::KindWf(g, k) => Ok((g, k)),
        other => err(slot(i), format!("expected a judgement of form `Γ ⊢ K kind`, found `{other}`")),
    }
}

fn keq(j: &Judgement, i: usize) -> R<(&Context, &Kind, &Kind)> {
    match j {
        Judgement::KindEq(g, a, b) => Ok((g, a, b)),
        other => err(slot(i), format!("expected a judgement of form `Γ ⊢ K = K'`, found `{other}`")),
    }
}

fn has(j: &Judgement, i: usize) -> R<(&Context, &Term, &Kind)> {
    match j {
        Judgement::HasKind(g, m, k) => Ok((g, m, k)),
        other => err(slot(i), format!("expected a judgement of form `Γ ⊢ k : K`, found `{other}`")),
    }
}

fn teq(j: &Judgement, i: usize) -> R<(&Context, &Term, &Term, &Kind)> {
    match j {
        Judgement::TermEq(g, m, n, k) => Ok((g, m, n, k)),
        other => err(slot(i), format!("expected a judgement of form `Γ ⊢ k = k' : K`, found `{other}`")),
    }
}

fn same_ctx(base: &Context, g: &Context, i: usize) -> R<()> {
    if base == g {
        Ok(())
    } else {
        err(format!("{} context", slot(i)), format!("`{g}` differs from `{base}`"))
    }
}

fn same_kind(g: &Context, want: &Kind, got: &Kind, what: String) -> R<()> {
    if want == got {
        Ok(())
    } else {
        err(what, format!("kind {} should be {}", kind_in_context(g, got), kind_in_context(g, want)))
    }
}

fn same_term(g: &Context, want: &Term, got: &Term, what: String) -> R<()> {
    if want == got {
        Ok(())
    } else {
        err(what, format!("term {} should be {}", term_in_context(g, got), term_in_context(g, want)))
    }
}

/// Splits `Γ, y:K` for a premise under a binder; `base` is the conclusion's
/// context.
fn binder<'a>(g: &'a Context, base: &Context, i: usize) -> R<(&'a Name, &'a Kind)> {
    let n = base.len();
    if g.len() != n + 1 || g.prefix(n) != *base {
        return err(format!("{} context", slot(i)), format!("`{g}` should extend `{base}` by one declaration"));
    }
    let (y, k) = &g.entries()[n];
    Ok((y, k))
}

fn prod_parts(g: &Context, k: &Kind, what: String) -> R<(Kind, Kind)> {
    match k {
        Kind::Prod(_, d, c) => Ok(((**d).clone(), (**c).clone())),
        other => err(what, format!("kind {} is not a product", kind_in_context(g, other))),
    }
}

fn rtype_l(g: &Context, k: &Kind, what: String) -> R<LabelSet> {
    match k {
        Kind::RTypeL(l) => Ok(l.clone()),
        other => err(what, format!("kind {} should be RType[L]", kind_in_context(g, other))),
    }
}

/// `El(<R, l : A>)` into `(R, l, A)`.
fn el_ext(g: &Context, k: &Kind, what: String) -> R<(Term, Label, Term)> {
    if let Kind::El(t) = k {
        if let Term::RecTypeExt(r, l, a) = &**t {
            return Ok(((**r).clone(), l.clone(), (**a).clone()));
        }
    }
    err(what, format!("kind {} should be El(<R, l : A>)", kind_in_context(g, k)))
}

fn app(f: &Term, a: &Term) -> Term {
    Term::App(Arc::new(f.clone()), Arc::new(a.clone()))
}

fn el(t: Term) -> Kind {
    Kind::El(Arc::new(t))
}

fn hint(y: &Name) -> Hint {
    Hint::new(y.as_str())
}

/// Splits the context of a substitution premise `Γ, x:K, Γ'` at the length
/// of `Γ`, the context of the substituted term's premise.
fn subst_split(delta: &Context, g: &Context) -> R<(Name, Kind, Vec<(Name, Kind)>)> {
    let n = g.len();
    if delta.len() <= n || delta.prefix(n) != *g {
        return err("premise 1 context", format!("`{delta}` should have the form `{g}, x:K, Γ'`"));
    }
    let (x, k) = delta.entries()[n].clone();
    Ok((x, k, delta.entries()[n + 1..].to_vec()))
}

fn subst_ctx(g: &Context, x: &Name, v: &Term, rest: &[(Name, Kind)]) -> Context {
    let mut out = g.clone();
    for (y, k) in rest {
        out.push(y.clone(), k.subst(x, v));
    }
    out
}

fn label_fresh(g: &Context, l: &Label, labels: &LabelSet) -> R<()> {
    if labels.contains(l) {
        err("side condition l ∉ L", format!("label `{l}` already occurs in {}", kind_in_context(g, &Kind::RTypeL(labels.clone()))))
    } else {
        Ok(())
    }
}

fn need<'a, T>(v: &'a Option<T>, what: &str) -> R<&'a T> {
    v.as_ref().ok_or_else(|| ("conclusion".to_string(), format!("does not determine the {what}")))
}

/// The conclusion of `rule` applied to premises `ps` with parameters `p`.
pub(crate) fn conclude(rule: DeclRule, ps: &[&Judgement], p: &Params) -> R<Judgement> {
    use DeclRule::*;
    use Judgement as J;
    if ps.len() != rule.arity() {
        return err("premises", format!("{} expects {} premises, found {}", rule, rule.arity(), ps.len()));
    }
    Ok(match rule {
        CtxEmpty => J::CtxValid(Context::new()),
        CtxExt => {
            let (g, k) = kwf(ps[0], 0)?;
            let x = need(&p.name, "declared variable")?;
            if g.declares(x) || g.free_vars().contains(x) {
                return err("side condition x ∉ FV(Γ)", format!("`{x}` already occurs in `{g}`"));
            }
            J::CtxValid(g.extended(x.clone(), k.clone()))
        }
        Var => {
            let g = valid(ps[0], 0)?;
            let x = need(&p.name, "variable")?;
            let Some(k) = g.lookup(x) else {
                return err("side condition x:K ∈ Γ", format!("`{x}` is not declared in `{g}`"));
            };
            J::HasKind(g.clone(), Term::Var(x.clone()), k.clone())
        }
        KindRefl => {
            let (g, k) = kwf(ps[0], 0)?;
            J::KindEq(g.clone(), k.clone(), k.clone())
        }
        KindSym => {
            let (g, a, b) = keq(ps[0], 0)?;
            J::KindEq(g.clone(), b.clone(), a.clone())
        }
        KindTrans => {
            let (g, a, b) = keq(ps[0], 0)?;
            let (g2, b2, c) = keq(ps[1], 1)?;
            same_ctx(g, g2, 1)?;
            same_kind(g, b, b2, "premise 2 left side".into())?;
            J::KindEq(g.clone(), a.clone(), c.clone())
        }
        TermRefl => {
            let (g, m, k) = has(ps[0], 0)?;
            J::TermEq(g.clone(), m.clone(), m.clone(), k.clone())
        }
        TermSym => {
            let (g, m, n, k) = teq(ps[0], 0)?;
            J::TermEq(g.clone(), n.clone(), m.clone(), k.clone())
        }
        TermTrans => {
            let (g, m, n, k) = teq(ps[0], 0)?;
            let (g2, n2, o, k2) = teq(ps[1], 1)?;
            same_ctx(g, g2, 1)?;
            same_term(g, n, n2, "premise 2 left side".into())?;
            same_kind(g, k, k2, "premise 2 kind".into())?;
            J::TermEq(g.clone(), m.clone(), o.clone(), k.clone())
        }
        Conv => {
            let (g, m, k) = has(ps[0], 0)?;
            let (g2, k1, k2) = keq(ps[1], 1)?;
            same_ctx(g, g2, 1)?;
            same_kind(g, k, k1, "premise 2 left side".into())?;
            J::HasKind(g.clone(), m.clone(), k2.clone())
        }
        ConvEq => {
            let (g, m, n, k) = teq(ps[0], 0)?;
            let (g2, k1, k2) = keq(ps[1], 1)?;
            same_ctx(g, g2, 1)?;
            same_kind(g, k, k1, "premise 2 left side".into())?;
            J::TermEq(g.clone(), m.clone(), n.clone(), k2.clone())
        }
        SubstCtx | SubstKind | SubstKindEq | SubstTerm | SubstTermEq => {
            let (g, v, k) = has(ps[1], 1)?;
            let (x, kx, rest) = subst_split(ps[0].context(), g)?;
            same_kind(g, &kx, k, "premise 2 kind".into())?;
            let g2 = subst_ctx(g, &x, v, &rest);
            match (rule, ps[0]) {
                (SubstCtx, J::CtxValid(_)) => J::CtxValid(g2),
                (SubstKind, J::KindWf(_, k1)) => J::KindWf(g2, k1.subst(&x, v)),
                (SubstKindEq, J::KindEq(_, a, b)) => J::KindEq(g2, a.subst(&x, v), b.subst(&x, v)),
                (SubstTerm, J::HasKind(_, m, a)) => J::HasKind(g2, m.subst(&x, v), a.subst(&x, v)),
                (SubstTermEq, J::TermEq(_, m, n, a)) => J::TermEq(g2, m.subst(&x, v), n.subst(&x, v), a.subst(&x, v)),
                (_, other) => return err("premise 1", format!("has the wrong judgement form: `{other}`")),
            }
        }
        SubstKindEqArg | SubstTermEqArg => {
            let (g, v1, v2, k) = teq(ps[1], 1)?;
            let (x, kx, rest) = subst_split(ps[0].context(), g)?;
            same_kind(g, &kx, k, "premise 2 kind".into())?;
            let g2 = subst_ctx(g, &x, v1, &rest);
            match (rule, ps[0]) {
                (SubstKindEqArg, J::KindWf(_, a)) => J::KindEq(g2, a.subst(&x, v1), a.subst(&x, v2)),
                (SubstTermEqArg, J::HasKind(_, m, a)) => J::TermEq(g2, m.subst(&x, v1), m.subst(&x, v2), a.subst(&x, v1)),
                (_, other) => return err("premise 1", format!("has the wrong judgement form: `{other}`")),
            }
        }
        TypeKind => J::KindWf(valid(ps[0], 0)?.clone(), Kind::Type),
        ElKind => {
            let (g, a, k) = has(ps[0], 0)?;
            same_kind(g, &Kind::Type, k, "premise 1 kind".into())?;
            J::KindWf(g.clone(), el(a.clone()))
        }
        ElEq => {
            let (g, a, b, k) = teq(ps[0], 0)?;
            same_kind(g, &Kind::Type, k, "premise 1 kind".into())?;
            J::KindEq(g.clone(), el(a.clone()), el(b.clone()))
        }
        ProdKind => {
            let (g, k) = kwf(ps[0], 0)?;
            let (g2, body) = kwf(ps[1], 1)?;
            let (y, ky) = binder(g2, g, 1)?;
            same_kind(g, k, ky, "premise 2 bound variable".into())?;
            J::KindWf(g.clone(), Kind::Prod(hint(y), Arc::new(k.clone()), Arc::new(body.abstract_name(y))))
        }
        ProdEq => {
            let (g, k1, k2) = keq(ps[0], 0)?;
            let (g2, c1, c2) = keq(ps[1], 1)?;
            let (y, ky) = binder(g2, g, 1)?;
            same_kind(g, k1, ky, "premise 2 bound variable".into())?;
            let h = hint(y);
            J::KindEq(
                g.clone(),
                Kind::Prod(h.clone(), Arc::new(k1.clone()), Arc::new(c1.abstract_name(y))),
                Kind::Prod(h, Arc::new(k2.clone()), Arc::new(c2.abstract_name(y))),
            )
        }
        Lam => {
            let (g2, m, k) = has(ps[0], 0)?;
            if g2.is_empty() {
                return err("premise 1 context", "has no bound variable to abstract");
            }
            let g = g2.prefix(g2.len() - 1);
            let (y, ky) = &g2.entries()[g.len()];
            let h = hint(y);
            J::HasKind(
                g.clone(),
                Term::Lam(h.clone(), Arc::new(ky.clone()), Arc::new(m.abstract_name(y))),
                Kind::Prod(h, Arc::new(ky.clone()), Arc::new(k.abstract_name(y))),
            )
        }
        LamEq => {
            let (g, k1, k2) = keq(ps[0], 0)?;
            let (g2, m1, m2, k) = teq(ps[1], 1)?;
            let (y, ky) = binder(g2, g, 1)?;
            same_kind(g, k1, ky, "premise 2 bound variable".into())?;
            let h = hint(y);
            J::TermEq(
                g.clone(),
                Term::Lam(h.clone(), Arc::new(k1.clone()), Arc::new(m1.abstract_name(y))),
                Term::Lam(h.clone(), Arc::new(k2.clone()), Arc::new(m2.abstract_name(y))),
                Kind::Prod(h, Arc::new(k1.clone()), Arc::new(k.abstract_name(y))),
            )
        }
        App => {
            let (g, f, kf) = has(ps[0], 0)?;
            let (g2, a, ka) = has(ps[1], 1)?;
            same_ctx(g, g2, 1)?;
            let (dom, cod) = prod_parts(g, kf, "premise 1 kind".into())?;
            same_kind(g, &dom, ka, "premise 2 kind".into())?;
            J::HasKind(g.clone(), app(f, a), cod.instantiate(a))
        }
        AppEq => {
            let (g, f1, f2, kf) = teq(ps[0], 0)?;
            let (g2, a1, a2, ka) = teq(ps[1], 1)?;
            same_ctx(g, g2, 1)?;
            let (dom, cod) = prod_parts(g, kf, "premise 1 kind".into())?;
            same_kind(g, &dom, ka, "premise 2 kind".into())?;
            J::TermEq(g.clone(), app(f1, a1), app(f2, a2), cod.instantiate(a1))
        }
        Beta => {
            let (g, a, ka) = has(ps[1], 1)?;
            let (g2, body, kb) = has(ps[0], 0)?;
            let (y, ky) = binder(g2, g, 0)?;
            same_kind(g, ky, ka, "premise 2 kind".into())?;
            let lam = Term::Lam(hint(y), Arc::new(ky.clone()), Arc::new(body.abstract_name(y)));
            J::TermEq(g.clone(), app(&lam, a), body.subst(y, a), kb.subst(y, a))
        }
        Eta => {
            let (g, f, kf) = has(ps[0], 0)?;
            let Kind::Prod(h, dom, _) = kf else {
                return err("premise 1 kind", format!("kind {} is not a product", kind_in_context(g, kf)));
            };
            let body = Term::App(Arc::new(f.shift(1, 0)), Arc::new(Term::Bound(0)));
            J::TermEq(g.clone(), Term::Lam(h.clone(), dom.clone(), Arc::new(body)), f.clone(), kf.clone())
        }
        RTypeKind => J::KindWf(valid(ps[0], 0)?.clone(), Kind::RType),
        RTypeLKind => J::KindWf(valid(ps[0], 0)?.clone(), Kind::RTypeL(need(&p.labels, "label set")?.clone())),
        RTypeLSub => {
            let (g, r, k) = has(ps[0], 0)?;
            let l = rtype_l(g, k, "premise 1 kind".into())?;
            let l2 = need(&p.labels, "label set")?;
            if !l.is_subset(l2) {
                return err(
                    "side condition L ⊆ L'",
                    format!("{} is not included in {}", Kind::RTypeL(l.clone()), Kind::RTypeL(l2.clone())),
                );
            }
            J::HasKind(g.clone(), r.clone(), Kind::RTypeL(l2.clone()))
        }
        RTypeLToRType => {
            let (g, r, k) = has(ps[0], 0)?;
            rtype_l(g, k, "premise 1 kind".into())?;
            J::HasKind(g.clone(), r.clone(), Kind::RType)
        }
        RTypeToType => {
            let (g, r, k) = has(ps[0], 0)?;
            same_kind(g, &Kind::RType, k, "premise 1 kind".into())?;
            J::HasKind(g.clone(), r.clone(), Kind::Type)
        }
        EmptyRecType => J::HasKind(valid(ps[0], 0)?.clone(), Term::EmptyRec, Kind::RTypeL(LabelSet::new())),
        RecTypeForm => {
            let (g, r, kr) = has(ps[0], 0)?;
            let (g2, a, ka) = has(ps[1], 1)?;
            same_ctx(g, g2, 1)?;
            let labels = rtype_l(g, kr, "premise 1 kind".into())?;
            same_kind(g, &Kind::family(r.clone()), ka, "premise 2 kind".into())?;
            let l = need(&p.label, "new label")?;
            label_fresh(g, l, &labels)?;
            J::HasKind(g.clone(), Term::RecTypeExt(Arc::new(r.clone()), l.clone(), Arc::new(a.clone())), Kind::RTypeL(labels.with(l.clone())))
        }
        EmptyRec => J::HasKind(valid(ps[0], 0)?.clone(), Term::EmptyRec, el(Term::EmptyRec)),
        RecIntro => {
            let (g, rt, krt) = has(ps[0], 0)?;
            same_kind(g, &Kind::RType, krt, "premise 1 kind".into())?;
            let Term::RecTypeExt(big_r, l, fam) = rt else {
                return err("premise 1", format!("{} is not a record type extension", term_in_context(g, rt)));
            };
            let (g2, r, kr) = has(ps[1], 1)?;
            same_ctx(g, g2, 1)?;
            same_kind(g, &el((**big_r).clone()), kr, "premise 2 kind".into())?;
            let (g3, a, ka) = has(ps[2], 2)?;
            same_ctx(g, g3, 2)?;
            same_kind(g, &el(app(fam, r)), ka, "premise 3 kind".into())?;
            J::HasKind(
                g.clone(),
                Term::RecExt(Arc::new(r.clone()), l.clone(), Arc::new(a.clone()), fam.clone()),
                el(rt.clone()),
            )
        }
        Restr | Sel => {
            let (g, r, k) = has(ps[0], 0)?;
            let (big_r, l, fam) = el_ext(g, k, "premise 1 kind".into())?;
            if rule == Restr {
                J::HasKind(g.clone(), Term::Restr(Arc::new(r.clone())), el(big_r))
            } else {
                let rr = Term::Restr(Arc::new(r.clone()));
                J::HasKind(g.clone(), Term::Sel(Arc::new(r.clone()), l), el(app(&fam, &rr)))
            }
        }
        SelOther | SelOtherComp => {
            let (g, r, k) = has(ps[0], 0)?;
            let (_, l, _) = el_ext(g, k, "premise 1 kind".into())?;
            let (g2, via, b) = has(ps[1], 1)?;
            same_ctx(g, g2, 1)?;
            let Term::Sel(inner, l2) = via else {
                return err("premise 2", format!("{} should have the form [r].l'", term_in_context(g, via)));
            };
            same_term(g, &Term::Restr(Arc::new(r.clone())), inner, "premise 2 subject".into())?;
            if *l2 == l {
                return err("side condition l ≠ l'", format!("both labels are `{l}`"));
            }
            let sel = Term::Sel(Arc::new(r.clone()), l2.clone());
            if rule == SelOther {
                J::HasKind(g.clone(), sel, b.clone())
            } else {
                J::TermEq(g.clone(), sel, via.clone(), b.clone())
            }
        }
        RestrComp | SelComp => {
            let (g, pair, k) = has(ps[0], 0)?;
            let Term::RecExt(r, l, a, fam) = pair else {
                return err("premise 1", format!("{} is not a pair-record", term_in_context(g, pair)));
            };
            let (big_r, l2, fam2) = el_ext(g, k, "premise 1 kind".into())?;
            if *l != l2 {
                return err("premise 1 kind", format!("label `{l2}` should be `{l}`"));
            }
            same_term(g, fam, &fam2, "premise 1 field family".into())?;
            if rule == RestrComp {
                J::TermEq(g.clone(), Term::Restr(Arc::new(pair.clone())), (**r).clone(), el(big_r))
            } else {
                J::TermEq(g.clone(), Term::Sel(Arc::new(pair.clone()), l.clone()), (**a).clone(), el(app(fam, r)))
            }
        }
        EmptyRecTypeEq => {
            J::TermEq(valid(ps[0], 0)?.clone(), Term::EmptyRec, Term::EmptyRec, Kind::RTypeL(LabelSet::new()))
        }
        RecTypeEq => {
            let (g, r1, r2, kr) = teq(ps[0], 0)?;
            let (g2, a1, a2, ka) = teq(ps[1], 1)?;
            same_ctx(g, g2, 1)?;
            let labels = rtype_l(g, kr, "premise 1 kind".into())?;
            same_kind(g, &Kind::family(r1.clone()), ka, "premise 2 kind".into())?;
            let l = need(&p.label, "new label")?;
            label_fresh(g, l, &labels)?;
            J::TermEq(
                g.clone(),
                Term::RecTypeExt(Arc::new(r1.clone()), l.clone(), Arc::new(a1.clone())),
                Term::RecTypeExt(Arc::new(r2.clone()), l.clone(), Arc::new(a2.clone())),
                Kind::RTypeL(labels.with(l.clone())),
            )
        }
        EmptyRecEq => J::TermEq(valid(ps[0], 0)?.clone(), Term::EmptyRec, Term::EmptyRec, el(Term::EmptyRec)),
        RecEq => {
            let (g, big_r, kr) = has(ps[0], 0)?;
            let labels = rtype_l(g, kr, "premise 1 kind".into())?;
            let (g2, r1, r2, k2) = teq(ps[1], 1)?;
            same_ctx(g, g2, 1)?;
            same_kind(g, &el(big_r.clone()), k2, "premise 2 kind".into())?;
            let (g4, f1, f2, k4) = teq(ps[3], 3)?;
            same_ctx(g, g4, 3)?;
            same_kind(g, &Kind::family(big_r.clone()), k4, "premise 4 kind".into())?;
            let (g3, a1, a2, k3) = teq(ps[2], 2)?;
            same_ctx(g, g3, 2)?;
            same_kind(g, &el(app(f1, r1)), k3, "premise 3 kind".into())?;
            let l = need(&p.label, "new label")?;
            label_fresh(g, l, &labels)?;
            J::TermEq(
                g.clone(),
                Term::RecExt(Arc::new(r1.clone()), l.clone(), Arc::new(a1.clone()), Arc::new(f1.clone())),
                Term::RecExt(Arc::new(r2.clone()), l.clone(), Arc::new(a2.clone()), Arc::new(f2.clone())),
                el(Term::RecTypeExt(Arc::new(big_r.clone()), l.clone(), Arc::new(f1.clone()))),
            )
        }
        RestrEq | SelEq => {
            let (g, r1, r2, k) = teq(ps[0], 0)?;
            let (big_r, l, fam) = el_ext(g, k, "premise 1 kind".into())?;
            if rule == RestrEq {
                J::TermEq(g.clone(), Term::Restr(Arc::new(r1.clone())), Term::Restr(Arc::new(r2.clone())), el(big_r))
            } else {
                J::TermEq(
                    g.clone(),
                    Term::Sel(Arc::new(r1.clone()), l.clone()),
                    Term::Sel(Arc::new(r2.clone()), l),
                    el(app(&fam, &Term::Restr(Arc::new(r1.clone())))),
                )
            }
        }
    })
}

/// Applies `rule` to `premises`, computing the conclusion.
pub fn apply(rule: DeclRule, premises: Vec<Arc<Derivation>>, p: &Params) -> Result<Arc<Derivation>, BuildError> {
    let js: Vec<&Judgement> = premises.iter().map(|d| &d.conclusion).collect();
    let conclusion = conclude(rule, &js, p).map_err(|(slot, message)| BuildError { rule, slot, message })?;
    Ok(Derivation::new(rule, conclusion, premises))
}

pub type D = Arc<Derivation>;
pub type BResult = Result<D, BuildError>;

fn none(rule: DeclRule, ps: Vec<D>) -> BResult {
    apply(rule, ps, &Params::default())
}

pub fn ctx_empty() -> D {
    none(DeclRule::CtxEmpty, vec![]).expect("CtxEmpty has no premises")
}
pub fn ctx_ext(x: &str, k: &D) -> BResult {
    apply(DeclRule::CtxExt, vec![k.clone()], &Params::name(&Name::new(x)))
}
pub fn var(v: &D, x: &str) -> BResult {
    apply(DeclRule::Var, vec![v.clone()], &Params::name(&Name::new(x)))
}
pub fn kind_refl(k: &D) -> BResult {
    none(DeclRule::KindRefl, vec![k.clone()])
}
pub fn kind_sym(e: &D) -> BResult {
    none(DeclRule::KindSym, vec![e.clone()])
}
pub fn kind_trans(a: &D, b: &D) -> BResult {
    none(DeclRule::KindTrans, vec![a.clone(), b.clone()])
}
pub fn refl(h: &D) -> BResult {
    none(DeclRule::TermRefl, vec![h.clone()])
}
pub fn sym(e: &D) -> BResult {
    none(DeclRule::TermSym, vec![e.clone()])
}
pub fn trans(a: &D, b: &D) -> BResult {
    none(DeclRule::TermTrans, vec![a.clone(), b.clone()])
}
pub fn conv(h: &D, e: &D) -> BResult {
    none(DeclRule::Conv, vec![h.clone(), e.clone()])
}
pub fn conv_eq(h: &D, e: &D) -> BResult {
    none(DeclRule::ConvEq, vec![h.clone(), e.clone()])
}
/// Any of the seven substitution rules.
pub fn subst(rule: DeclRule, major: &D, arg: &D) -> BResult {
    none(rule, vec![major.clone(), arg.clone()])
}
pub fn type_kind(v: &D) -> BResult {
    none(DeclRule::TypeKind, vec![v.clone()])
}
pub fn el_kind(h: &D) -> BResult {
    none(DeclRule::ElKind, vec![h.clone()])
}
pub fn el_eq(e: &D) -> BResult {
    none(DeclRule::ElEq, vec![e.clone()])
}
pub fn prod_kind(dom: &D, cod: &D) -> BResult {
    none(DeclRule::ProdKind, vec![dom.clone(), cod.clone()])
}
pub fn prod_eq(dom: &D, cod: &D) -> BResult {
    none(DeclRule::ProdEq, vec![dom.clone(), cod.clone()])
}
pub fn lam(body: &D) -> BResult {
    none(DeclRule::Lam, vec![body.clone()])
}
pub fn lam_eq(dom: &D, body: &D) -> BResult {
    none(DeclRule::LamEq, vec![dom.clone(), body.clone()])
}
pub fn app_rule(f: &D, a: &D) -> BResult {
    none(DeclRule::App, vec![f.clone(), a.clone()])
}
pub fn app_eq(f: &D, a: &D) -> BResult {
    none(DeclRule::AppEq, vec![f.clone(), a.clone()])
}
pub fn beta(body: &D, arg: &D) -> BResult {
    none(DeclRule::Beta, vec![body.clone(), arg.clone()])
}
pub fn eta(f: &D) -> BResult {
    none(DeclRule::Eta, vec![f.clone()])
}
pub fn rtype_kind(v: &D) -> BResult {
    none(DeclRule::RTypeKind, vec![v.clone()])
}
pub fn rtype_l_kind(v: &D, l: LabelSet) -> BResult {
    apply(DeclRule::RTypeLKind, vec![v.clone()], &Params::labels(l))
}
pub fn rtype_l_sub(h: &D, l: LabelSet) -> BResult {
    apply(DeclRule::RTypeLSub, vec![h.clone()], &Params::labels(l))
}
pub fn rtype_l_to_rtype(h: &D) -> BResult {
    none(DeclRule::RTypeLToRType, vec![h.clone()])
}
pub fn rtype_to_type(h: &D) -> BResult {
    none(DeclRule::RTypeToType, vec![h.clone()])
}
pub fn empty_rec_type(v: &D) -> BResult {
    none(DeclRule::EmptyRecType, vec![v.clone()])
}
pub fn rec_type_form(r: &D, a: &D, l: &str) -> BResult {
    apply(DeclRule::RecTypeForm, vec![r.clone(), a.clone()], &Params::label(&Label::new(l)))
}
pub fn empty_rec(v: &D) -> BResult {
    none(DeclRule::EmptyRec, vec![v.clone()])
}
pub fn rec_intro(rt: &D, r: &D, a: &D) -> BResult {
    none(DeclRule::RecIntro, vec![rt.clone(), r.clone(), a.clone()])
}
pub fn restr(h: &D) -> BResult {
    none(DeclRule::Restr, vec![h.clone()])
}
pub fn sel(h: &D) -> BResult {
    none(DeclRule::Sel, vec![h.clone()])
}
pub fn sel_other(h: &D, via: &D) -> BResult {
    none(DeclRule::SelOther, vec![h.clone(), via.clone()])
}
pub fn restr_comp(h: &D) -> BResult {
    none(DeclRule::RestrComp, vec![h.clone()])
}
pub fn sel_comp(h: &D) -> BResult {
    none(DeclRule::SelComp, vec![h.clone()])
}
pub fn sel_other_comp(h: &D, via: &D) -> BResult {
    none(DeclRule::SelOtherComp, vec![h.clone(), via.clone()])
}
pub fn empty_rec_type_eq(v: &D) -> BResult {
    none(DeclRule::EmptyRecTypeEq, vec![v.clone()])
}
pub fn rec_type_eq(r: &D, a: &D, l: &str) -> BResult {
    apply(DeclRule::RecTypeEq, vec![r.clone(), a.clone()], &Params::label(&Label::new(l)))
}
pub fn empty_rec_eq(v: &D) -> BResult {
    none(DeclRule::EmptyRecEq, vec![v.clone()])
}
pub fn rec_eq(big_r: &D, r: &D, a: &D, fam: &D, l: &str) -> BResult {
    apply(DeclRule::RecEq, vec![big_r.clone(), r.clone(), a.clone(), fam.clone()], &Params::label(&Label::new(l)))
}
pub fn restr_eq(e: &D) -> BResult {
    none(DeclRule::RestrEq, vec![e.clone()])
}
pub fn sel_eq(e: &D) -> BResult {
    none(DeclRule::SelEq, vec![e.clone()])
}
