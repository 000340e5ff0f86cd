//! Typed operational semantics: a syntax-directed evaluator computing, for a
//! term `M` in context `Γ`, its weak-head normal form `N`, normal form `P` and
//! normal kind `A` (the judgement `Γ ⊨ M → N → P : A`), plus the context and
//! kind normalization judgements.
//!
//! The engine synthesizes kinds. A caller may pass an expected kind as a hint.
//! The hint only matters for `<>`, which is the empty record type (rule
//! EMP_RCDT) when a record type is expected and the empty record (EMP_RCD)
//! otherwise, and for abstractions whose body kind is widened to an expected
//! codomain along the record-kind inclusions.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::print::{context_to_string, kind_in_context, term_in_context};
use crate::reduction::is_eta_redex;
use crate::syntax::{Context, Hint, Kind, LabelSet, Name, Term};

pub const DEFAULT_FUEL: u64 = 1_000_000;

/// Rule labels of the evaluator, one per inference rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Rule {
    Emp,
    Weak,
    Type,
    El,
    Pi,
    Var,
    Lam,
    Eta,
    Base,
    Beta,
    RType,
    RTypeL,
    EmpRcdt,
    Rcdt,
    EmpRcd,
    Rcd,
    BaseRestr,
    Restr,
    BaseFldsel,
    Fldsel,
    FldslPrime,
}

impl Rule {
    pub const ALL: [Rule; 21] = [
        Rule::Emp,
        Rule::Weak,
        Rule::Type,
        Rule::El,
        Rule::Pi,
        Rule::Var,
        Rule::Lam,
        Rule::Eta,
        Rule::Base,
        Rule::Beta,
        Rule::RType,
        Rule::RTypeL,
        Rule::EmpRcdt,
        Rule::Rcdt,
        Rule::EmpRcd,
        Rule::Rcd,
        Rule::BaseRestr,
        Rule::Restr,
        Rule::BaseFldsel,
        Rule::Fldsel,
        Rule::FldslPrime,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Rule::Emp => "EMP",
            Rule::Weak => "WEAK",
            Rule::Type => "TYPE",
            Rule::El => "EL",
            Rule::Pi => "PI",
            Rule::Var => "VAR",
            Rule::Lam => "LAM",
            Rule::Eta => "ETA",
            Rule::Base => "BASE",
            Rule::Beta => "BETA",
            Rule::RType => "RTYPE",
            Rule::RTypeL => "RTYPE[L]",
            Rule::EmpRcdt => "EMP_RCDT",
            Rule::Rcdt => "RCDT",
            Rule::EmpRcd => "EMP_RCD",
            Rule::Rcd => "RCD",
            Rule::BaseRestr => "BASE_RESTR",
            Rule::Restr => "RESTR",
            Rule::BaseFldsel => "BASE_FLDSEL",
            Rule::Fldsel => "FLDSEL",
            Rule::FldslPrime => "FLDSL'",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// How often each rule fired.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct RuleCounts([u64; 21]);

impl RuleCounts {
    pub fn get(&self, r: Rule) -> u64 {
        self.0[r.index()]
    }
    pub fn bump(&mut self, r: Rule) {
        self.0[r.index()] += 1;
    }
    pub fn merge(&mut self, other: &RuleCounts) {
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            *a += b;
        }
    }
    pub fn missing(&self) -> Vec<Rule> {
        Rule::ALL.into_iter().filter(|r| self.get(*r) == 0).collect()
    }
    pub fn iter(&self) -> impl Iterator<Item = (Rule, u64)> + '_ {
        Rule::ALL.into_iter().map(|r| (r, self.get(r)))
    }
}

/// A derivation tree of the evaluator.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trace {
    pub rule: Rule,
    pub conclusion: String,
    pub premises: Vec<Arc<Trace>>,
}

impl Trace {
    /// Indented proof tree, conclusion first, premises below.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        self.write_text(0, &mut out);
        out
    }

    fn write_text(&self, depth: usize, out: &mut String) {
        out.push_str(&"  ".repeat(depth));
        out.push_str(&format!("[{}] {}\n", self.rule, self.conclusion));
        for p in &self.premises {
            p.write_text(depth + 1, out);
        }
    }

    /// Every rule label used in the tree.
    pub fn rules(&self) -> Vec<Rule> {
        let mut out = vec![self.rule];
        for p in &self.premises {
            out.extend(p.rules());
        }
        out
    }
}

/// Result of `Γ ⊨ M → N → P : A`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvalResult {
    pub whnf: Term,
    pub nf: Term,
    pub kind_nf: Kind,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TosError {
    #[error("ill-formed context at `{entry}`: {reason}")]
    IllFormed { entry: String, reason: String },
    #[error("{rule}: cannot evaluate `{subject}`: {reason}")]
    NotDerivable { subject: String, rule: &'static str, reason: String },
    #[error("evaluation fuel exhausted")]
    FuelExhausted,
}

impl TosError {
    pub fn rule(&self) -> Option<&'static str> {
        match self {
            TosError::NotDerivable { rule, .. } => Some(rule),
            _ => None,
        }
    }
}

pub type TosResult<T> = Result<T, TosError>;

/// Record-kind inclusions, at the top of a kind only: `RType[L] ≤ RType[L']`
/// for `L ⊆ L'`, `RType[L] ≤ RType`, and every record kind is below `Type`.
pub fn kind_leq(a: &Kind, b: &Kind) -> bool {
    match (a, b) {
        _ if a == b => true,
        (Kind::RTypeL(l1), Kind::RTypeL(l2)) => l1.is_subset(l2),
        (Kind::RTypeL(_), Kind::RType) => true,
        (Kind::RTypeL(_) | Kind::RType, Kind::Type) => true,
        _ => false,
    }
}

fn expects_record_type(hint: Option<&Kind>) -> bool {
    matches!(hint, Some(Kind::Type | Kind::RType | Kind::RTypeL(_)))
}

/// Raw declarations alongside their normal forms.
#[derive(Clone, Debug)]
struct Scope {
    raw: Context,
    nf: Context,
}

impl Scope {
    fn fresh(&self, hint: &str, t: &Term) -> Name {
        self.raw.fresh(hint, &t.free_vars())
    }

    fn extended(&self, x: &Name, raw: &Kind, nf: &Kind) -> Scope {
        Scope { raw: self.raw.extended(x.clone(), raw.clone()), nf: self.nf.extended(x.clone(), nf.clone()) }
    }
}

struct Out {
    whnf: Term,
    nf: Term,
    kind: Kind,
    trace: Option<Arc<Trace>>,
}

/// The evaluator. Holds the fuel budget, whether to record derivation trees,
/// and per-rule counters accumulated over all calls.
#[derive(Debug, Clone)]
pub struct Engine {
    pub fuel_limit: u64,
    pub tracing: bool,
    used: u64,
    counts: RuleCounts,
}

impl Default for Engine {
    fn default() -> Self {
        Engine::new()
    }
}

impl Engine {
    pub fn new() -> Self {
        Engine { fuel_limit: DEFAULT_FUEL, tracing: false, used: 0, counts: RuleCounts::default() }
    }

    pub fn with_fuel(fuel: u64) -> Self {
        Engine { fuel_limit: fuel, ..Engine::new() }
    }

    pub fn traced(mut self) -> Self {
        self.tracing = true;
        self
    }

    pub fn counts(&self) -> &RuleCounts {
        &self.counts
    }

    pub fn take_counts(&mut self) -> RuleCounts {
        std::mem::take(&mut self.counts)
    }

    // -- public judgements --------------------------------------------------

    /// `⊨ Γ → Δ`.
    pub fn eval_context(&mut self, g: &Context) -> TosResult<(Context, Option<Arc<Trace>>)> {
        self.used = 0;
        let (scope, trace) = self.context(g)?;
        Ok((scope.nf, trace))
    }

    /// `Γ ⊨ K → B`, after validating `Γ`.
    pub fn eval_kind(&mut self, g: &Context, k: &Kind) -> TosResult<(Kind, Option<Arc<Trace>>)> {
        self.used = 0;
        let (scope, _) = self.context(g)?;
        self.kind(&scope, k)
    }

    /// `Γ ⊨ M → N → P : A` with the kind synthesized.
    pub fn eval_term(&mut self, g: &Context, m: &Term) -> TosResult<(EvalResult, Option<Arc<Trace>>)> {
        self.eval_term_hinted(g, m, None)
    }

    /// As [`Engine::eval_term`], with an expected normal kind as a hint. The
    /// synthesized kind is returned unchanged (it need not match the hint).
    pub fn eval_term_hinted(
        &mut self,
        g: &Context,
        m: &Term,
        hint: Option<&Kind>,
    ) -> TosResult<(EvalResult, Option<Arc<Trace>>)> {
        self.used = 0;
        let (scope, _) = self.context(g)?;
        let o = self.term(&scope, m, hint)?;
        Ok((EvalResult { whnf: o.whnf, nf: o.nf, kind_nf: o.kind }, o.trace))
    }

    /// Evaluates `M` against the (unnormalized) kind `K`: the synthesized kind
    /// must be included in the normal form of `K`, which becomes the result
    /// kind.
    pub fn eval_against(&mut self, g: &Context, m: &Term, k: &Kind) -> TosResult<(EvalResult, Option<Arc<Trace>>)> {
        self.used = 0;
        let (scope, _) = self.context(g)?;
        let (expected, _) = self.kind(&scope, k)?;
        let o = self.at(&scope, m, &expected, "check")?;
        Ok((EvalResult { whnf: o.whnf, nf: o.nf, kind_nf: o.kind }, o.trace))
    }

    // -- internals ----------------------------------------------------------

    fn tick(&mut self) -> TosResult<()> {
        self.used += 1;
        if self.used > self.fuel_limit {
            Err(TosError::FuelExhausted)
        } else {
            Ok(())
        }
    }

    fn node(&mut self, rule: Rule, concl: impl FnOnce() -> String, premises: Vec<Option<Arc<Trace>>>) -> Option<Arc<Trace>> {
        self.counts.bump(rule);
        if !self.tracing {
            return None;
        }
        Some(Arc::new(Trace { rule, conclusion: concl(), premises: premises.into_iter().flatten().collect() }))
    }

    fn fail<T>(&self, s: &Scope, subject: &Term, rule: &'static str, reason: impl Into<String>) -> TosResult<T> {
        Err(TosError::NotDerivable { subject: term_in_context(&s.raw, subject), rule, reason: reason.into() })
    }

    fn term_judgement(s: &Scope, m: &Term, n: &Term, p: &Term, a: &Kind) -> String {
        let c = &s.raw;
        format!(
            "{} |= {} -> {} -> {} : {}",
            context_to_string(c),
            term_in_context(c, m),
            term_in_context(c, n),
            term_in_context(c, p),
            kind_in_context(c, a)
        )
    }

    fn kind_judgement(s: &Scope, k: &Kind, b: &Kind) -> String {
        format!("{} |= {} -> {}", context_to_string(&s.raw), kind_in_context(&s.raw, k), kind_in_context(&s.raw, b))
    }

    fn context(&mut self, g: &Context) -> TosResult<(Scope, Option<Arc<Trace>>)> {
        let mut scope = Scope { raw: Context::new(), nf: Context::new() };
        let mut trace = self.node(Rule::Emp, || "|= () -> ()".to_string(), vec![]);
        for (x, k) in g.entries() {
            if scope.raw.declares(x) {
                return Err(TosError::IllFormed { entry: format!("{x}:{k}"), reason: format!("`{x}` is already declared") });
            }
            let (b, kt) = self.kind(&scope, k).map_err(|e| match e {
                TosError::FuelExhausted => e,
                other => TosError::IllFormed { entry: format!("{x}:{}", kind_in_context(&scope.raw, k)), reason: other.to_string() },
            })?;
            let next = scope.extended(x, k, &b);
            trace = self.node(
                Rule::Weak,
                || format!("|= {} -> {}", context_to_string(&next.raw), context_to_string(&next.nf)),
                vec![trace, kt],
            );
            scope = next;
        }
        Ok((scope, trace))
    }

    fn kind(&mut self, s: &Scope, k: &Kind) -> TosResult<(Kind, Option<Arc<Trace>>)> {
        self.tick()?;
        match k {
            Kind::Type => Ok((Kind::Type, self.node(Rule::Type, || Self::kind_judgement(s, k, k), vec![]))),
            Kind::RType => Ok((Kind::RType, self.node(Rule::RType, || Self::kind_judgement(s, k, k), vec![]))),
            Kind::RTypeL(_) => Ok((k.clone(), self.node(Rule::RTypeL, || Self::kind_judgement(s, k, k), vec![]))),
            Kind::El(m) => {
                let o = self.at(s, m, &Kind::Type, "EL")?;
                let b = Kind::El(Arc::new(o.nf));
                let t = self.node(Rule::El, || Self::kind_judgement(s, k, &b), vec![o.trace]);
                Ok((b, t))
            }
            Kind::Prod(h, a1, a2) => {
                let (b1, t1) = self.kind(s, a1)?;
                let x = s.raw.fresh(h.as_str(), &a2.free_vars());
                let inner = s.extended(&x, a1, &b1);
                let (b2, t2) = self.kind(&inner, &a2.open(&x))?;
                let b = Kind::Prod(h.clone(), Arc::new(b1), Arc::new(b2.abstract_name(&x)));
                let t = self.node(Rule::Pi, || Self::kind_judgement(s, k, &b), vec![t1, t2]);
                Ok((b, t))
            }
        }
    }

    /// Evaluates `m` and includes its kind into `expected`, which becomes the
    /// kind of the result.
    fn at(&mut self, s: &Scope, m: &Term, expected: &Kind, rule: &'static str) -> TosResult<Out> {
        let mut o = self.term(s, m, Some(expected))?;
        if !kind_leq(&o.kind, expected) {
            return self.fail(
                s,
                m,
                rule,
                format!(
                    "has kind {} but {} is required",
                    kind_in_context(&s.raw, &o.kind),
                    kind_in_context(&s.raw, expected)
                ),
            );
        }
        o.kind = expected.clone();
        Ok(o)
    }

    /// Evaluates `m`, which must have the kind `El(R)` of a non-empty normal
    /// record type `R = <P, l : B>`; returns `(o, P, l, B)`.
    fn record_subject(&mut self, s: &Scope, m: &Term, rule: &'static str) -> TosResult<(Out, Term, crate::syntax::Label, Term)> {
        let o = self.term(s, m, None)?;
        if let Kind::El(r) = &o.kind {
            if let Term::RecTypeExt(p, l, b) = &**r {
                let (p, l, b) = ((**p).clone(), l.clone(), (**b).clone());
                return Ok((o, p, l, b));
            }
        }
        self.fail(s, m, rule, format!("expected a record with a field, found kind {}", kind_in_context(&s.raw, &o.kind)))
    }

    fn term(&mut self, s: &Scope, m: &Term, hint: Option<&Kind>) -> TosResult<Out> {
        self.tick()?;
        match m {
            Term::Var(x) => {
                let Some(b) = s.nf.lookup(x).cloned() else {
                    return self.fail(s, m, "VAR", format!("`{x}` is not declared"));
                };
                // the declared kind's own evaluation, when tracing
                let kt = if self.tracing {
                    let pos = s.raw.position(x).expect("declared");
                    let prefix = Scope { raw: s.raw.prefix(pos), nf: s.nf.prefix(pos) };
                    self.kind(&prefix, &s.raw.entries()[pos].1)?.1
                } else {
                    None
                };
                let t = self.node(Rule::Var, || Self::term_judgement(s, m, m, m, &b), vec![kt]);
                Ok(Out { whnf: m.clone(), nf: m.clone(), kind: b, trace: t })
            }
            Term::Bound(_) => self.fail(s, m, "VAR", "dangling bound variable"),
            Term::Lam(h, a1, m0) => self.lam(s, m, h, a1, m0, hint),
            Term::App(m1, m2) => self.app(s, m, m1, m2),
            Term::EmptyRec => {
                if expects_record_type(hint) {
                    let k = Kind::RTypeL(LabelSet::new());
                    let t = self.node(Rule::EmpRcdt, || Self::term_judgement(s, m, m, m, &k), vec![]);
                    Ok(Out { whnf: m.clone(), nf: m.clone(), kind: k, trace: t })
                } else {
                    let k = Kind::El(Arc::new(Term::EmptyRec));
                    let t = self.node(Rule::EmpRcd, || Self::term_judgement(s, m, m, m, &k), vec![]);
                    Ok(Out { whnf: m.clone(), nf: m.clone(), kind: k, trace: t })
                }
            }
            Term::RecTypeExt(r, l, a) => {
                let or = self.term(s, r, Some(&Kind::RType))?;
                let Kind::RTypeL(labels) = &or.kind else {
                    return self.fail(
                        s,
                        r,
                        "RCDT",
                        format!("must be a record type with known labels, found kind {}", kind_in_context(&s.raw, &or.kind)),
                    );
                };
                if labels.contains(l) {
                    return self.fail(s, m, "RCDT", format!("duplicate label `{l}`: side condition l ∉ L fails"));
                }
                let fam = Kind::family(or.nf.clone());
                let oa = self.at(s, a, &fam, "RCDT")?;
                let nf = Term::RecTypeExt(Arc::new(or.nf), l.clone(), Arc::new(oa.nf));
                let k = Kind::RTypeL(labels.with(l.clone()));
                let t = self.node(Rule::Rcdt, || Self::term_judgement(s, m, m, &nf, &k), vec![or.trace, oa.trace]);
                Ok(Out { whnf: m.clone(), nf, kind: k, trace: t })
            }
            Term::RecExt(r, l, a, fam) => self.rcd(s, m, r, l, a, fam),
            Term::Restr(r) => self.restr(s, m, r),
            Term::Sel(r, l) => self.sel(s, m, r, l),
        }
    }

    fn lam(&mut self, s: &Scope, m: &Term, h: &Hint, a1: &Arc<Kind>, m0: &Arc<Term>, hint: Option<&Kind>) -> TosResult<Out> {
        let (b1, t1) = self.kind(s, a1)?;
        let x = s.fresh(h.as_str(), m0);
        let inner = s.extended(&x, a1, &b1);
        let body = m0.open(&x);
        let cod_hint = match hint {
            Some(Kind::Prod(_, _, c)) => Some(c.open(&x)),
            _ => None,
        };
        let mut ob = self.term(&inner, &body, cod_hint.as_ref())?;
        if let Some(c) = &cod_hint {
            if kind_leq(&ob.kind, c) {
                ob.kind = c.clone();
            }
        }
        let p0 = ob.nf.abstract_name(&x);
        let b2 = ob.kind.abstract_name(&x);
        let kind = Kind::Prod(h.clone(), Arc::new(b1.clone()), Arc::new(b2));
        let candidate = Term::Lam(h.clone(), Arc::new(b1), Arc::new(p0));
        if !is_eta_redex(&candidate) {
            let t = self.node(Rule::Lam, || Self::term_judgement(s, m, m, &candidate, &kind), vec![t1, ob.trace]);
            return Ok(Out { whnf: m.clone(), nf: candidate, kind, trace: t });
        }
        // ETA: the body normalizes to P(x) with x not free in P
        let Term::App(p, _) = &ob.nf else { unreachable!("η-redex body is an application") };
        let p = (**p).clone();
        let op = self.term(s, &p, Some(&kind))?;
        if op.whnf != p || op.nf != p || op.kind != kind {
            return self.fail(
                s,
                m,
                "ETA",
                format!(
                    "η-contractum {} does not evaluate to itself at {} (got {})",
                    term_in_context(&s.raw, &p),
                    kind_in_context(&s.raw, &kind),
                    kind_in_context(&s.raw, &op.kind)
                ),
            );
        }
        let t = self.node(Rule::Eta, || Self::term_judgement(s, m, m, &p, &kind), vec![t1, ob.trace, op.trace]);
        Ok(Out { whnf: m.clone(), nf: p, kind, trace: t })
    }

    fn app(&mut self, s: &Scope, m: &Term, m1: &Term, m2: &Term) -> TosResult<Out> {
        let of = self.term(s, m1, None)?;
        let Kind::Prod(_, b1, b2) = &of.kind else {
            return self.fail(s, m1, "BASE", format!("is applied but has kind {}", kind_in_context(&s.raw, &of.kind)));
        };
        let (b1, b2) = (b1.clone(), b2.clone());
        let oa = self.at(s, m2, &b1, "BASE")?;
        let (c, tc) = self.kind(s, &b2.instantiate(m2))?;
        match &of.whnf {
            Term::Lam(_, _, n0) => {
                let ob = self.at(s, &n0.instantiate(m2), &c, "BETA")?;
                let t = self.node(
                    Rule::Beta,
                    || Self::term_judgement(s, m, &ob.whnf, &ob.nf, &c),
                    vec![of.trace, oa.trace, ob.trace, tc],
                );
                Ok(Out { whnf: ob.whnf, nf: ob.nf, kind: c, trace: t })
            }
            n1 => {
                let whnf = Term::App(Arc::new(n1.clone()), Arc::new(m2.clone()));
                let nf = Term::App(Arc::new(of.nf), Arc::new(oa.nf));
                let t = self.node(Rule::Base, || Self::term_judgement(s, m, &whnf, &nf, &c), vec![of.trace, oa.trace, tc]);
                Ok(Out { whnf, nf, kind: c, trace: t })
            }
        }
    }

    /// The record's type is read off the kind of `r` (it does not occur in
    /// the subject), then `<P, l : A>` is evaluated as a record type.
    fn rcd(&mut self, s: &Scope, m: &Term, r: &Term, l: &crate::syntax::Label, a: &Term, fam: &Term) -> TosResult<Out> {
        let or = self.term(s, r, None)?;
        let Kind::El(p) = &or.kind else {
            return self.fail(s, r, "RCD", format!("must be a record, found kind {}", kind_in_context(&s.raw, &or.kind)));
        };
        let rt = Term::RecTypeExt(p.clone(), l.clone(), Arc::new(fam.clone()));
        let ort = self.term(s, &rt, Some(&Kind::RType))?;
        let Term::RecTypeExt(p2, _, bfam) = &ort.nf else {
            return self.fail(s, &rt, "RCD", "record type did not normalize to an extension");
        };
        if p2 != p {
            return self.fail(s, r, "RCD", "record type of the base record is not normal");
        }
        let oc = self.at(s, &Term::App(Arc::new(fam.clone()), Arc::new(r.clone())), &Kind::Type, "RCD")?;
        let ob = self.at(s, a, &Kind::El(Arc::new(oc.nf.clone())), "RCD")?;
        let nf = Term::RecExt(Arc::new(or.nf), l.clone(), Arc::new(ob.nf), bfam.clone());
        let kind = Kind::El(Arc::new(ort.nf.clone()));
        let t = self.node(Rule::Rcd, || Self::term_judgement(s, m, m, &nf, &kind), vec![ort.trace, or.trace, oc.trace, ob.trace]);
        Ok(Out { whnf: m.clone(), nf, kind, trace: t })
    }

    fn restr(&mut self, s: &Scope, m: &Term, r: &Term) -> TosResult<Out> {
        let (or, p, _, _) = self.record_subject(s, r, "BASE_RESTR")?;
        let kind = Kind::El(Arc::new(p));
        match (&or.whnf, or.nf.is_pair_record()) {
            (Term::RecExt(p1, ..), _) => {
                let o1 = self.at(s, p1, &kind, "RESTR")?;
                let t = self.node(Rule::Restr, || Self::term_judgement(s, m, &o1.whnf, &o1.nf, &kind), vec![or.trace, o1.trace]);
                Ok(Out { whnf: o1.whnf, nf: o1.nf, kind, trace: t })
            }
            (q, false) => {
                let whnf = Term::Restr(Arc::new(q.clone()));
                let nf = Term::Restr(Arc::new(or.nf.clone()));
                let t = self.node(Rule::BaseRestr, || Self::term_judgement(s, m, &whnf, &nf, &kind), vec![or.trace]);
                Ok(Out { whnf, nf, kind, trace: t })
            }
            (_, true) => self.fail(s, r, "BASE_RESTR", "normal form is a pair-record but the weak-head normal form is not"),
        }
    }

    fn sel(&mut self, s: &Scope, m: &Term, r: &Term, l2: &crate::syntax::Label) -> TosResult<Out> {
        let (or, _p, l, b) = self.record_subject(s, r, "BASE_FLDSEL")?;
        if *l2 != l {
            // FLDSL': go through [r].l'
            let via = Term::Sel(Arc::new(Term::Restr(Arc::new(r.clone()))), l2.clone());
            let ov = self.term(s, &via, None)?;
            let t = self.node(Rule::FldslPrime, || Self::term_judgement(s, m, &ov.whnf, &ov.nf, &ov.kind), vec![or.trace, ov.trace]);
            return Ok(Out { whnf: ov.whnf, nf: ov.nf, kind: ov.kind, trace: t });
        }
        match (&or.whnf, or.nf.is_pair_record()) {
            (Term::RecExt(p1, l1, bv, afam), _) => {
                if *l1 != l {
                    return self.fail(s, r, "FLDSEL", format!("pair-record label `{l1}` differs from its type's label `{l}`"));
                }
                let oc = self.at(s, &Term::App(afam.clone(), p1.clone()), &Kind::Type, "FLDSEL")?;
                let kind = Kind::El(Arc::new(oc.nf));
                let ob = self.at(s, bv, &kind, "FLDSEL")?;
                let t = self.node(Rule::Fldsel, || Self::term_judgement(s, m, &ob.whnf, &ob.nf, &kind), vec![or.trace, ob.trace, oc.trace]);
                Ok(Out { whnf: ob.whnf, nf: ob.nf, kind, trace: t })
            }
            (q, false) => {
                let restr = Term::Restr(Arc::new(r.clone()));
                let oc = self.at(s, &Term::App(Arc::new(b), Arc::new(restr)), &Kind::Type, "BASE_FLDSEL")?;
                let kind = Kind::El(Arc::new(oc.nf));
                let whnf = Term::Sel(Arc::new(q.clone()), l.clone());
                let nf = Term::Sel(Arc::new(or.nf.clone()), l.clone());
                let t = self.node(Rule::BaseFldsel, || Self::term_judgement(s, m, &whnf, &nf, &kind), vec![or.trace, oc.trace]);
                Ok(Out { whnf, nf, kind, trace: t })
            }
            (_, true) => self.fail(s, r, "BASE_FLDSEL", "normal form is a pair-record but the weak-head normal form is not"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::{parse_context, parse_kind, parse_term};

    fn ctx(s: &str) -> Context {
        parse_context(s).unwrap()
    }
    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }
    fn k(s: &str) -> Kind {
        parse_kind(s).unwrap()
    }

    fn eval(g: &str, m: &str) -> TosResult<EvalResult> {
        Engine::new().eval_term(&ctx(g), &t(m)).map(|r| r.0)
    }

    #[test]
    fn contexts() {
        let mut e = Engine::new();
        assert_eq!(e.eval_context(&ctx("")).unwrap().0, Context::new());
        let (d, _) = e.eval_context(&ctx("A:Type, x:El(([y:Type]y)(A))")).unwrap();
        assert_eq!(d, ctx("A:Type, x:El(A)"));
        assert!(matches!(e.eval_context(&ctx("x:Type, x:Type")), Err(TosError::IllFormed { .. })));
        assert!(e.eval_context(&ctx("x:El(y)")).is_err());
    }

    #[test]
    fn kinds() {
        let mut e = Engine::new();
        assert_eq!(e.eval_kind(&Context::new(), &Kind::Type).unwrap().0, Kind::Type);
        assert_eq!(e.eval_kind(&Context::new(), &k("RType[l]")).unwrap().0, k("RType[l]"));
        let got = e.eval_kind(&Context::new(), &k("(x:Type)El(([y:Type]y)(x))")).unwrap().0;
        assert_eq!(got, k("(x:Type)El(x)"));
    }

    #[test]
    fn empty_record_overloading() {
        let r = eval("", "<>").unwrap();
        assert_eq!((r.whnf, r.nf, r.kind_nf), (t("<>"), t("<>"), Kind::el(t("<>"))));
        let (r, _) = Engine::new().eval_term_hinted(&Context::new(), &t("<>"), Some(&Kind::RType)).unwrap();
        assert_eq!(r.kind_nf, Kind::RTypeL(LabelSet::new()));
    }

    #[test]
    fn field_selection_of_literal() {
        let r = eval("T:Type, a:El(T)", "<<>, l = a : [_:El(<>)]T>.l").unwrap();
        assert_eq!((r.whnf, r.nf, r.kind_nf), (t("a"), t("a"), Kind::el(t("T"))));
    }

    #[test]
    fn restriction_of_variable() {
        let r = eval("T:Type, r:El(<<>, l : [_:El(<>)]T>)", "[r]").unwrap();
        assert_eq!((r.whnf, r.nf, r.kind_nf), (t("[r]"), t("[r]"), Kind::el(t("<>"))));
    }

    #[test]
    fn record_types() {
        let r = eval("T:Type", "<<>, l : [_:El(<>)]T>").unwrap();
        assert_eq!(r.kind_nf, k("RType[l]"));
        let err = eval("T:Type", "<<<>, l : [_:El(<>)]T>, l : [_:El(<<>, l : [_:El(<>)]T>)]T>").unwrap_err();
        assert!(err.to_string().contains("l ∉ L"), "{err}");
    }

    #[test]
    fn other_field_goes_through_restriction() {
        let g = "T:Type, r:El(<<<>, k : [_:El(<>)]T>, l : [_:El(<<>, k : [_:El(<>)]T>)]T>)";
        let (r, tr) = Engine::new().traced().eval_term(&ctx(g), &t("r.k")).unwrap();
        assert_eq!(r.kind_nf, Kind::el(t("T")));
        assert_eq!(r.nf, t("[r].k"));
        let tr = tr.unwrap();
        assert_eq!(tr.rule, Rule::FldslPrime);
        assert!(tr.rules().contains(&Rule::BaseFldsel));
    }

    #[test]
    fn lambda_and_eta() {
        let r = eval("T:Type, f:(x:El(T))El(T)", "[y:El(T)]f(y)").unwrap();
        assert_eq!(r.nf, t("f"));
        assert_eq!(r.whnf, t("[y:El(T)]f(y)"));
        let r = eval("T:Type", "([x:El(T)]x)").unwrap();
        assert_eq!(r.kind_nf, k("(x:El(T))El(T)"));
        let r = eval("T:Type, c:El(T)", "([x:El(T)]x)(c)").unwrap();
        assert_eq!((r.whnf, r.nf), (t("c"), t("c")));
    }

    #[test]
    fn ill_typed_terms_are_rejected() {
        assert!(eval("", "([x:K]x(x))([x:K]x(x))").is_err());
        assert!(eval("T:Type", "T(T)").is_err());
        assert!(eval("T:Type, c:El(T)", "c.l").is_err());
    }

    #[test]
    fn fuel_is_enforced() {
        let g = ctx("T:Type, c:El(T)");
        let mut e = Engine::with_fuel(2);
        assert_eq!(e.eval_term(&g, &t("([x:El(T)]x)(c)")).unwrap_err(), TosError::FuelExhausted);
    }
}
