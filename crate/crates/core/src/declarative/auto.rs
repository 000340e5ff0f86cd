//! Automatic derivations in the restricted system, read off an evaluation.
//!
//! For an evaluation `Γ ⊨ M → N → P : A` the deriver builds, in the
//! restricted system, derivations of `Γ ⊢ M : A`, `Γ ⊢ M = N : A` and
//! `Γ ⊢ M = P : A`. It follows the evaluator rule by rule, with the same kind
//! hints, so the derivation mirrors the algorithmic run.
//!
//! Kind inclusions only exist for typing judgements. Equalities are moved up
//! an inclusion `A ≤ K` through the identity `I = [x:A]x : (x:A)K`:
//! `M = I(M) = I(N) = N : K`.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::sync::Arc;

use super::build::{self as b, D};
use super::{BuildError, Derivation, Judgement};
use crate::print::{kind_in_context, term_in_context};
use crate::reduction::is_eta_redex;
use crate::syntax::{Context, Kind, Name, Term};
use crate::tos::kind_leq;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AutoError(pub String);

impl fmt::Display for AutoError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for AutoError {}

impl From<BuildError> for AutoError {
    fn from(e: BuildError) -> Self {
        AutoError(format!("rule {} does not apply: {e}", e.rule))
    }
}

type AR<T> = Result<T, AutoError>;

fn fail<T>(msg: impl Into<String>) -> AR<T> {
    Err(AutoError(msg.into()))
}

#[derive(Clone)]
struct KindFacts {
    nf: Kind,
    /// `Γ ⊢ K kind`
    wf: D,
    /// `Γ ⊢ K = B`
    eq: D,
}

/// Derivations for one evaluation of a term.
#[derive(Clone)]
pub struct TermFacts {
    pub whnf: Term,
    pub nf: Term,
    pub kind: Kind,
    /// `Γ ⊢ M : A`
    pub has: D,
    /// `Γ ⊢ M = N : A`
    pub eq_whnf: D,
    /// `Γ ⊢ M = P : A`
    pub eq_nf: D,
}

type TermKey = (Context, Term, Option<Kind>);

/// Builds derivations, sharing every sub-derivation it has built before.
pub struct AutoDeriver {
    budget: u64,
    spent: u64,
    valid: HashMap<Context, D>,
    kinds: HashMap<(Context, Kind), KindFacts>,
    terms: HashMap<TermKey, AR<TermFacts>>,
    active: HashSet<TermKey>,
}

impl Default for AutoDeriver {
    fn default() -> Self {
        AutoDeriver::new()
    }
}

fn cut(a: Arc<Term>) -> Term {
    (*a).clone()
}

fn el(t: Term) -> Kind {
    Kind::El(Arc::new(t))
}

fn app(f: &Term, a: &Term) -> Term {
    Term::App(Arc::new(f.clone()), Arc::new(a.clone()))
}

fn kind_sides(d: &D) -> Option<(&Kind, &Kind)> {
    match &d.conclusion {
        Judgement::KindEq(_, a, b) => Some((a, b)),
        _ => None,
    }
}

/// `Conv`, skipped when the kind equation is trivial.
fn conv(h: &D, e: &D) -> AR<D> {
    match kind_sides(e) {
        Some((a, b)) if a == b => Ok(h.clone()),
        _ => Ok(b::conv(h, e)?),
    }
}

fn conv_eq(h: &D, e: &D) -> AR<D> {
    match kind_sides(e) {
        Some((a, b)) if a == b => Ok(h.clone()),
        _ => Ok(b::conv_eq(h, e)?),
    }
}

/// `TermTrans`, dropping reflexive steps.
fn trans(x: &D, y: &D) -> AR<D> {
    let refl = |d: &D| matches!(&d.conclusion, Judgement::TermEq(_, m, n, _) if m == n);
    if refl(x) && !refl(y) {
        return Ok(y.clone());
    }
    if refl(y) {
        return Ok(x.clone());
    }
    Ok(b::trans(x, y)?)
}

impl AutoDeriver {
    pub fn new() -> Self {
        AutoDeriver::with_budget(2_000_000)
    }

    /// `budget` bounds the number of term visits per top-level call.
    pub fn with_budget(budget: u64) -> Self {
        AutoDeriver {
            budget,
            spent: 0,
            valid: HashMap::new(),
            kinds: HashMap::new(),
            terms: HashMap::new(),
            active: HashSet::new(),
        }
    }

    fn tick(&mut self) -> AR<()> {
        self.spent += 1;
        if self.spent > self.budget {
            return fail("derivation budget exhausted");
        }
        Ok(())
    }

    fn fresh(g: &Context, hint: &str, avoid: &Term) -> Name {
        g.fresh(hint, &avoid.free_vars())
    }

    fn valid(&mut self, g: &Context) -> AR<D> {
        if let Some(d) = self.valid.get(g) {
            return Ok(d.clone());
        }
        let d = match g.entries().last() {
            None => b::ctx_empty(),
            Some((x, k)) => {
                let prefix = g.prefix(g.len() - 1);
                let kf = self.kind(&prefix, k)?;
                b::ctx_ext(x.as_str(), &kf.wf)?
            }
        };
        self.valid.insert(g.clone(), d.clone());
        Ok(d)
    }

    fn kind(&mut self, g: &Context, k: &Kind) -> AR<KindFacts> {
        let key = (g.clone(), k.clone());
        if let Some(f) = self.kinds.get(&key) {
            return Ok(f.clone());
        }
        self.tick()?;
        let f = match k {
            Kind::Type | Kind::RType | Kind::RTypeL(_) => {
                let v = self.valid(g)?;
                let wf = match k {
                    Kind::Type => b::type_kind(&v)?,
                    Kind::RType => b::rtype_kind(&v)?,
                    Kind::RTypeL(l) => b::rtype_l_kind(&v, l.clone())?,
                    _ => unreachable!(),
                };
                let eq = b::kind_refl(&wf)?;
                KindFacts { nf: k.clone(), wf, eq }
            }
            Kind::El(m) => {
                let f = self.at(g, m, &Kind::Type)?;
                KindFacts { nf: el(f.nf.clone()), wf: b::el_kind(&f.has)?, eq: b::el_eq(&f.eq_nf)? }
            }
            Kind::Prod(h, a1, a2) => {
                let k1 = self.kind(g, a1)?;
                let x = g.fresh(h.as_str(), &a2.free_vars());
                let g1 = g.extended(x.clone(), (**a1).clone());
                let k2 = self.kind(&g1, &a2.open(&x))?;
                KindFacts {
                    nf: Kind::Prod(h.clone(), Arc::new(k1.nf.clone()), Arc::new(k2.nf.abstract_name(&x))),
                    wf: b::prod_kind(&k1.wf, &k2.wf)?,
                    eq: b::prod_eq(&k1.eq, &k2.eq)?,
                }
            }
        };
        self.kinds.insert(key, f.clone());
        Ok(f)
    }

    /// `Γ ⊢ M : K` from `Γ ⊢ M : A` with `A ≤ K`.
    fn subsume(&mut self, h: &D, from: &Kind, to: &Kind) -> AR<D> {
        Ok(match (from, to) {
            _ if from == to => h.clone(),
            (Kind::RTypeL(_), Kind::RTypeL(l)) => b::rtype_l_sub(h, l.clone())?,
            (Kind::RTypeL(_), Kind::RType) => b::rtype_l_to_rtype(h)?,
            (Kind::RTypeL(_), Kind::Type) => b::rtype_to_type(&b::rtype_l_to_rtype(h)?)?,
            (Kind::RType, Kind::Type) => b::rtype_to_type(h)?,
            _ => return fail(format!("no inclusion from {from} to {to}")),
        })
    }

    /// Moves `Γ ⊢ M = N : A` up to `K ≥ A`, given `Γ ⊢ M : A`.
    fn lift_eq(&mut self, g: &Context, e: &D, has_m: &D, from: &Kind, to: &Kind) -> AR<D> {
        if from == to {
            return Ok(e.clone());
        }
        let Judgement::TermEq(_, m, n, _) = &e.conclusion else { return fail("not an equation") };
        if m == n {
            return Ok(b::refl(&self.subsume(has_m, from, to)?)?);
        }
        let n = n.clone();
        let has_n = self.at(g, &n, from)?.has;
        let x = g.fresh("x", &Default::default());
        let g1 = g.extended(x.clone(), from.clone());
        let v1 = self.valid(&g1)?;
        let hx = self.subsume(&b::var(&v1, x.as_str())?, from, to)?;
        let id = b::lam(&hx)?;
        let through = b::app_eq(&b::refl(&id)?, e)?;
        let bm = b::beta(&hx, has_m)?;
        let bn = b::beta(&hx, &has_n)?;
        Ok(b::trans(&b::sym(&bm)?, &b::trans(&through, &bn)?)?)
    }

    fn lift(&mut self, g: &Context, f: TermFacts, to: &Kind) -> AR<TermFacts> {
        if f.kind == *to {
            return Ok(f);
        }
        if !kind_leq(&f.kind, to) {
            return fail(format!("kind {} is not included in {}", kind_in_context(g, &f.kind), kind_in_context(g, to)));
        }
        let has = self.subsume(&f.has, &f.kind, to)?;
        let eq_whnf = self.lift_eq(g, &f.eq_whnf, &f.has, &f.kind, to)?;
        let eq_nf = self.lift_eq(g, &f.eq_nf, &f.has, &f.kind, to)?;
        Ok(TermFacts { has, eq_whnf, eq_nf, kind: to.clone(), ..f })
    }

    /// Evaluation against a normal kind, as the evaluator's `at`.
    fn at(&mut self, g: &Context, m: &Term, expected: &Kind) -> AR<TermFacts> {
        let f = self.term(g, m, Some(expected))?;
        self.lift(g, f, expected)
    }

    /// Derivations for `m` in `g`, evaluated with the kind hint `hint`.
    pub fn term(&mut self, g: &Context, m: &Term, hint: Option<&Kind>) -> AR<TermFacts> {
        // the hint only matters for ⟨⟩ and abstractions
        let hint = match (m, hint) {
            (Term::EmptyRec, Some(k @ (Kind::Type | Kind::RType | Kind::RTypeL(_)))) => Some(k.clone()),
            (Term::Lam(..), Some(k @ Kind::Prod(..))) => Some(k.clone()),
            _ => None,
        };
        let key = (g.clone(), m.clone(), hint.clone());
        if let Some(r) = self.terms.get(&key) {
            return r.clone();
        }
        if !self.active.insert(key.clone()) {
            return fail(format!("evaluation of {} depends on itself", term_in_context(g, m)));
        }
        let r = self.tick().and_then(|_| self.term_uncached(g, m, hint.as_ref()));
        self.active.remove(&key);
        self.terms.insert(key, r.clone());
        r
    }

    fn refl_facts(m: &Term, kind: Kind, has: D) -> AR<TermFacts> {
        let e = b::refl(&has)?;
        Ok(TermFacts { whnf: m.clone(), nf: m.clone(), kind, has, eq_whnf: e.clone(), eq_nf: e })
    }

    /// `Γ ⊢ E = E'` for two kinds with the same normal form.
    fn kind_eq(&mut self, g: &Context, a: &Kind, c: &Kind) -> AR<D> {
        let ka = self.kind(g, a)?;
        let kc = self.kind(g, c)?;
        if ka.nf != kc.nf {
            return fail(format!("kinds {} and {} differ", kind_in_context(g, a), kind_in_context(g, c)));
        }
        Ok(b::kind_trans(&ka.eq, &b::kind_sym(&kc.eq)?)?)
    }

    /// `Γ ⊢ q : El(<P, l : F>)` for a pair-record `q = <p, l = b : F>` whose
    /// evaluated kind is `El(<P, l : B>)`.
    fn pair_at_own_family(&mut self, g: &Context, q: &Term) -> AR<D> {
        let Term::RecExt(_, l, _, fam) = q else { return fail("not a pair-record") };
        let fq = self.term(g, q, None)?;
        let Kind::El(t) = &fq.kind else { return fail("pair-record without a record kind") };
        let Term::RecTypeExt(p, _, _) = &**t else { return fail("pair-record without a record kind") };
        let own = Term::RecTypeExt(p.clone(), l.clone(), fam.clone());
        let e = self.kind_eq(g, &fq.kind, &el(own))?;
        conv(&fq.has, &e)
    }

    fn term_uncached(&mut self, g: &Context, m: &Term, hint: Option<&Kind>) -> AR<TermFacts> {
        match m {
            Term::Var(x) => {
                let Some(raw) = g.lookup(x).cloned() else { return fail(format!("`{x}` is not declared")) };
                let v = self.valid(g)?;
                let kf = self.kind(g, &raw)?;
                let has = conv(&b::var(&v, x.as_str())?, &kf.eq)?;
                Self::refl_facts(m, kf.nf, has)
            }
            Term::Bound(_) => fail("dangling bound variable"),
            Term::EmptyRec => {
                let v = self.valid(g)?;
                let (has, kind) = if hint.is_some() {
                    (b::empty_rec_type(&v)?, Kind::RTypeL(Default::default()))
                } else {
                    (b::empty_rec(&v)?, el(Term::EmptyRec))
                };
                Self::refl_facts(m, kind, has)
            }
            Term::Lam(h, a1, m0) => {
                let k1 = self.kind(g, a1)?;
                let x = Self::fresh(g, h.as_str(), m0);
                let g1 = g.extended(x.clone(), (**a1).clone());
                let body = m0.open(&x);
                let cod_hint = match hint {
                    Some(Kind::Prod(_, _, c)) => Some(c.open(&x)),
                    _ => None,
                };
                let mut ob = self.term(&g1, &body, cod_hint.as_ref())?;
                if let Some(c) = &cod_hint {
                    if kind_leq(&ob.kind, c) {
                        ob = self.lift(&g1, ob, c)?;
                    }
                }
                let b2 = ob.kind.abstract_name(&x);
                let kind = Kind::Prod(h.clone(), Arc::new(k1.nf.clone()), Arc::new(b2));
                let body_kind = self.kind(&g1, &ob.kind)?;
                let pe = b::prod_eq(&k1.eq, &b::kind_refl(&body_kind.wf)?)?;
                let has = conv(&b::lam(&ob.has)?, &pe)?;
                let to_nf = conv_eq(&b::lam_eq(&k1.eq, &ob.eq_nf)?, &pe)?;
                let candidate = Term::Lam(h.clone(), Arc::new(k1.nf.clone()), Arc::new(ob.nf.abstract_name(&x)));
                if !is_eta_redex(&candidate) {
                    let refl = b::refl(&has)?;
                    return Ok(TermFacts { whnf: m.clone(), nf: candidate, kind, has, eq_whnf: refl, eq_nf: to_nf });
                }
                let Term::App(p, _) = &ob.nf else { unreachable!("η-redex body is an application") };
                let p = cut(p.clone());
                let op = self.term(g, &p, Some(&kind))?;
                if op.whnf != p || op.nf != p || op.kind != kind {
                    return fail(format!("η-contractum {} does not evaluate to itself", term_in_context(g, &p)));
                }
                let eta = b::eta(&op.has)?;
                Ok(TermFacts { whnf: m.clone(), nf: p, kind, has: has.clone(), eq_whnf: b::refl(&has)?, eq_nf: trans(&to_nf, &eta)? })
            }
            Term::App(m1, m2) => {
                let of = self.term(g, m1, None)?;
                let Kind::Prod(_, b1, b2) = &of.kind else {
                    return fail(format!("{} is applied but is not a function", term_in_context(g, m1)));
                };
                let (b1, b2) = ((**b1).clone(), (**b2).clone());
                let oa = self.at(g, m2, &b1)?;
                let kc = self.kind(g, &b2.instantiate(m2))?;
                let c = kc.nf.clone();
                let has = conv(&b::app_rule(&of.has, &oa.has)?, &kc.eq)?;
                let head = conv_eq(&b::app_eq(&of.eq_whnf, &b::refl(&oa.has)?)?, &kc.eq)?;
                match &of.whnf {
                    Term::Lam(h, a1, n0) => {
                        let x = Self::fresh(g, h.as_str(), n0);
                        let g1 = g.extended(x.clone(), (**a1).clone());
                        let body_kind = b2.open(&x);
                        let ob0 = self.at(&g1, &n0.open(&x), &body_kind)?;
                        let to_a1 = self.kind_eq(g, &b1, a1)?;
                        let arg = conv(&oa.has, &to_a1)?;
                        let contract = conv_eq(&b::beta(&ob0.has, &arg)?, &kc.eq)?;
                        let ob = self.at(g, &n0.instantiate(m2), &c)?;
                        let pre = trans(&head, &contract)?;
                        Ok(TermFacts {
                            whnf: ob.whnf.clone(),
                            nf: ob.nf.clone(),
                            kind: c,
                            has,
                            eq_whnf: trans(&pre, &ob.eq_whnf)?,
                            eq_nf: trans(&pre, &ob.eq_nf)?,
                        })
                    }
                    n1 => {
                        let whnf = app(n1, m2);
                        let nf = app(&of.nf, &oa.nf);
                        let eq_nf = conv_eq(&b::app_eq(&of.eq_nf, &oa.eq_nf)?, &kc.eq)?;
                        Ok(TermFacts { whnf, nf, kind: c, has, eq_whnf: head, eq_nf })
                    }
                }
            }
            Term::RecTypeExt(r, l, a) => {
                let or = self.term(g, r, Some(&Kind::RType))?;
                let Kind::RTypeL(labels) = &or.kind else {
                    return fail(format!("{} is not a record type with known labels", term_in_context(g, r)));
                };
                if labels.contains(l) {
                    return fail(format!("duplicate label `{l}`: side condition l ∉ L fails"));
                }
                let labels = labels.clone();
                let oa = self.at(g, a, &Kind::family(or.nf.clone()))?;
                let fam_eq = self.kind_eq(g, &Kind::family(or.nf.clone()), &Kind::family((**r).clone()))?;
                let has = b::rec_type_form(&or.has, &conv(&oa.has, &fam_eq)?, l.as_str())?;
                let eq_nf = b::rec_type_eq(&or.eq_nf, &conv_eq(&oa.eq_nf, &fam_eq)?, l.as_str())?;
                let nf = Term::RecTypeExt(Arc::new(or.nf.clone()), l.clone(), Arc::new(oa.nf.clone()));
                Ok(TermFacts {
                    whnf: m.clone(),
                    nf,
                    kind: Kind::RTypeL(labels.with(l.clone())),
                    eq_whnf: b::refl(&has)?,
                    has,
                    eq_nf,
                })
            }
            Term::RecExt(r, l, a, fam) => {
                let or = self.term(g, r, None)?;
                let Kind::El(p) = &or.kind else {
                    return fail(format!("{} is not a record", term_in_context(g, r)));
                };
                let p = cut(p.clone());
                let rt = Term::RecTypeExt(Arc::new(p.clone()), l.clone(), fam.clone());
                let ort = self.term(g, &rt, Some(&Kind::RType))?;
                let Term::RecTypeExt(p2, _, bfam) = &ort.nf else { return fail("record type did not normalize") };
                if **p2 != p {
                    return fail("record type of the base record is not normal");
                }
                let bfam = cut(bfam.clone());
                let fam_r = app(fam, r);
                let oc = self.at(g, &fam_r, &Kind::Type)?;
                let ob = self.at(g, a, &el(oc.nf.clone()))?;
                let rt_rtype = self.lift(g, ort.clone(), &Kind::RType)?;
                let to_fam = b::el_eq(&b::sym(&oc.eq_nf)?)?;
                let has_a = conv(&ob.has, &to_fam)?;
                let intro = b::rec_intro(&rt_rtype.has, &or.has, &has_a)?;
                let rt_nf = self.kind_eq(g, &el(rt.clone()), &el(ort.nf.clone()))?;
                let has = conv(&intro, &rt_nf)?;
                let op = self.term(g, &p, Some(&Kind::RType))?;
                let of = self.at(g, fam, &Kind::family(p.clone()))?;
                let congr = b::rec_eq(&op.has, &or.eq_nf, &conv_eq(&ob.eq_nf, &to_fam)?, &of.eq_nf, l.as_str())?;
                let nf = Term::RecExt(Arc::new(or.nf.clone()), l.clone(), Arc::new(ob.nf.clone()), Arc::new(bfam));
                Ok(TermFacts {
                    whnf: m.clone(),
                    nf,
                    kind: el(ort.nf.clone()),
                    eq_whnf: b::refl(&has)?,
                    eq_nf: conv_eq(&congr, &rt_nf)?,
                    has,
                })
            }
            Term::Restr(r) => {
                let (or, p, _, _) = self.record_subject(g, r)?;
                let kind = el(p);
                let has = b::restr(&or.has)?;
                let step = b::restr_eq(&or.eq_whnf)?;
                match &or.whnf {
                    q @ Term::RecExt(p1, ..) => {
                        let o1 = self.at(g, p1, &kind)?;
                        let hq = self.pair_at_own_family(g, q)?;
                        let pre = trans(&step, &b::restr_comp(&hq)?)?;
                        Ok(TermFacts {
                            whnf: o1.whnf.clone(),
                            nf: o1.nf.clone(),
                            kind,
                            has,
                            eq_whnf: trans(&pre, &o1.eq_whnf)?,
                            eq_nf: trans(&pre, &o1.eq_nf)?,
                        })
                    }
                    _ if or.nf.is_pair_record() => fail("normal form is a pair-record but the weak-head normal form is not"),
                    q => Ok(TermFacts {
                        whnf: Term::Restr(Arc::new(q.clone())),
                        nf: Term::Restr(Arc::new(or.nf.clone())),
                        kind,
                        has,
                        eq_whnf: step,
                        eq_nf: b::restr_eq(&or.eq_nf)?,
                    }),
                }
            }
            Term::Sel(r, l2) => {
                let (or, _, l, bfam) = self.record_subject(g, r)?;
                if *l2 != l {
                    let via = Term::Sel(Arc::new(Term::Restr(r.clone())), l2.clone());
                    let ov = self.term(g, &via, None)?;
                    let has = b::sel_other(&or.has, &ov.has)?;
                    let comp = b::sel_other_comp(&or.has, &ov.has)?;
                    return Ok(TermFacts {
                        whnf: ov.whnf.clone(),
                        nf: ov.nf.clone(),
                        kind: ov.kind.clone(),
                        has,
                        eq_whnf: trans(&comp, &ov.eq_whnf)?,
                        eq_nf: trans(&comp, &ov.eq_nf)?,
                    });
                }
                let restr = Term::Restr(r.clone());
                let obr = self.at(g, &app(&bfam, &restr), &Kind::Type)?;
                let to_c = b::el_eq(&obr.eq_nf)?;
                let has = conv(&b::sel(&or.has)?, &to_c)?;
                let step = conv_eq(&b::sel_eq(&or.eq_whnf)?, &to_c)?;
                match &or.whnf {
                    q @ Term::RecExt(p1, l1, bv, afam) => {
                        if *l1 != l {
                            return fail(format!("pair-record label `{l1}` differs from its type's label `{l}`"));
                        }
                        let oc = self.at(g, &app(afam, p1), &Kind::Type)?;
                        if oc.nf != obr.nf {
                            return fail("field types disagree");
                        }
                        let kind = el(oc.nf.clone());
                        let ob = self.at(g, bv, &kind)?;
                        let hq = self.pair_at_own_family(g, q)?;
                        let comp = conv_eq(&b::sel_comp(&hq)?, &b::el_eq(&oc.eq_nf)?)?;
                        let pre = trans(&step, &comp)?;
                        Ok(TermFacts {
                            whnf: ob.whnf.clone(),
                            nf: ob.nf.clone(),
                            kind,
                            has,
                            eq_whnf: trans(&pre, &ob.eq_whnf)?,
                            eq_nf: trans(&pre, &ob.eq_nf)?,
                        })
                    }
                    _ if or.nf.is_pair_record() => fail("normal form is a pair-record but the weak-head normal form is not"),
                    q => Ok(TermFacts {
                        whnf: Term::Sel(Arc::new(q.clone()), l.clone()),
                        nf: Term::Sel(Arc::new(or.nf.clone()), l.clone()),
                        kind: el(obr.nf.clone()),
                        has,
                        eq_whnf: step,
                        eq_nf: conv_eq(&b::sel_eq(&or.eq_nf)?, &to_c)?,
                    }),
                }
            }
        }
    }

    fn record_subject(&mut self, g: &Context, r: &Term) -> AR<(TermFacts, Term, crate::syntax::Label, Term)> {
        let or = self.term(g, r, None)?;
        if let Kind::El(t) = &or.kind {
            if let Term::RecTypeExt(p, l, bf) = &**t {
                let (p, l, bf) = (cut(p.clone()), l.clone(), cut(bf.clone()));
                return Ok((or, p, l, bf));
            }
        }
        fail(format!("{} is not a record with a field", term_in_context(g, r)))
    }

    /// The three derivations for `Γ ⊨ M → N → P : A` (kind synthesized).
    pub fn evaluation(&mut self, g: &Context, m: &Term) -> AR<TermFacts> {
        self.spent = 0;
        self.valid(g)?;
        self.term(g, m, None)
    }

    /// A derivation of `j` in the restricted system.
    pub fn derive(&mut self, j: &Judgement) -> AR<D> {
        self.spent = 0;
        let d = match j {
            Judgement::CtxValid(g) => self.valid(g)?,
            Judgement::KindWf(g, k) => {
                self.valid(g)?;
                self.kind(g, k)?.wf
            }
            Judgement::KindEq(g, a, c) => {
                self.valid(g)?;
                self.kind_eq(g, a, c)?
            }
            Judgement::HasKind(g, m, k) => {
                self.valid(g)?;
                let kf = self.kind(g, k)?;
                let f = self.at(g, m, &kf.nf)?;
                conv(&f.has, &b::kind_sym(&kf.eq)?)?
            }
            Judgement::TermEq(g, m, n, k) => {
                self.valid(g)?;
                let kf = self.kind(g, k)?;
                let fm = self.at(g, m, &kf.nf)?;
                let fnn = self.at(g, n, &kf.nf)?;
                if fm.nf != fnn.nf {
                    return fail(format!(
                        "normal forms differ: {} vs {}",
                        term_in_context(g, &fm.nf),
                        term_in_context(g, &fnn.nf)
                    ));
                }
                let e = if m == n { b::refl(&fm.has)? } else { b::trans(&fm.eq_nf, &b::sym(&fnn.eq_nf)?)? };
                conv_eq(&e, &b::kind_sym(&kf.eq)?)?
            }
        };
        if d.conclusion != *j {
            return fail(format!("constructed `{}` instead", d.conclusion));
        }
        Ok(d)
    }
}

/// Height of a derivation, not counting context-validity subproofs.
pub fn derivation_depth(d: &Arc<Derivation>) -> usize {
    fn go(d: &Arc<Derivation>, memo: &mut HashMap<*const Derivation, usize>) -> usize {
        if matches!(d.conclusion, Judgement::CtxValid(_)) {
            return 0;
        }
        if let Some(&h) = memo.get(&Arc::as_ptr(d)) {
            return h;
        }
        let h = 1 + d.premises.iter().map(|p| go(p, memo)).max().unwrap_or(0);
        memo.insert(Arc::as_ptr(d), h);
        h
    }
    go(d, &mut HashMap::new())
}

/// Derives `j` in the restricted system, failing when the derivation found
/// is deeper than `depth` (see [`derivation_depth`]).
pub fn derive_auto(j: &Judgement, depth: usize) -> AR<Arc<Derivation>> {
    let d = AutoDeriver::new().derive(j)?;
    let h = derivation_depth(&d);
    if h > depth {
        return fail(format!("derivation depth {h} exceeds the bound {depth}"));
    }
    Ok(d)
}
