//! Bounded enumeration of contexts and terms.
//!
//! Small terms are listed exhaustively, well- and ill-typed alike. Larger
//! terms are composed from accepted subterms only: every subterm of an
//! accepted term is itself accepted in the appropriate context, so this
//! still reaches every accepted term of the bound.

use std::collections::{BTreeSet, HashMap};
use std::sync::Arc;

use idrt_core::parse::parse_context;
use idrt_core::syntax::fresh_name;
use idrt_core::tos::{Engine, EvalResult, RuleCounts};
use idrt_core::{Context, Hint, Kind, Label, LabelSet, Name, Term};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::config::EnumConfig;

/// A named base context of the enumeration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BaseContext {
    pub name: &'static str,
    pub ctx: Context,
}

/// The record-typed variable with two fields used by several contexts.
pub const TWO_FIELDS: &str = "<<<>, k : [_:El(<>)]T>, l : [_:El(<<>, k : [_:El(<>)]T>)]T>";

/// The base contexts admitted by `cfg`, in a fixed order.
pub fn base_contexts(cfg: &EnumConfig) -> Vec<BaseContext> {
    let two = format!("T:Type, r:El({TWO_FIELDS})");
    let menu: Vec<(&'static str, String, usize)> = vec![
        ("empty", String::new(), 0),
        ("const", "T:Type, c:El(T)".into(), 1),
        ("two-types", "T:Type, U:Type, c:El(T), d:El(U)".into(), 2),
        ("function", "T:Type, c:El(T), f:(x:El(T))El(T)".into(), 1),
        ("record-var", two, 1),
        ("opaque-row", "T:Type, R:RType[k], s:El(<R, l : [_:El(R)]T>), c:El(T)".into(), 1),
        ("family", "T:Type, F:(x:El(T))Type, c:El(T)".into(), 1),
    ];
    menu.into_iter()
        .filter(|(_, _, types)| *types <= cfg.base_types)
        .map(|(name, text, _)| BaseContext { name, ctx: parse_context(&text).expect("menu contexts parse") })
        .filter(|b| b.ctx.len() <= cfg.max_context_len)
        .collect()
}

/// How a corpus term came about.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Origin {
    /// Exhaustive listing of small raw terms.
    Raw,
    /// Composition of accepted subterms.
    Typed,
    /// Hand-picked ill-typed term.
    Negative,
    /// Seeded random composition beyond the size bound.
    Random,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusItem {
    /// Index into the base contexts.
    pub context: usize,
    pub term: Term,
    pub origin: Origin,
}

fn all_subsets(labels: &[Label]) -> Vec<LabelSet> {
    (0u32..(1 << labels.len()))
        .map(|mask| labels.iter().enumerate().filter(|(i, _)| mask & (1 << i) != 0).map(|(_, l)| l.clone()).collect())
        .collect()
}

/// `Type`, `RType` and the `RType[L]` of exactly `n` nodes.
fn atomic_kinds(label_sets: &[LabelSet], n: usize) -> Vec<Kind> {
    let mut out = Vec::new();
    if n == 1 {
        out.push(Kind::Type);
        out.push(Kind::RType);
    }
    out.extend(label_sets.iter().filter(|l| 1 + l.len() == n).cloned().map(Kind::RTypeL));
    out
}

fn binder_hint(body: &Term) -> Hint {
    if body.has_loose(0) {
        Hint::new("x")
    } else {
        Hint::anon()
    }
}

fn prod_hint(cod: &Kind) -> Hint {
    if cod.has_loose(0) {
        Hint::new("x")
    } else {
        Hint::anon()
    }
}

// ---------------------------------------------------------------------------
// raw terms

struct Raw {
    vars: Vec<Name>,
    labels: Vec<Label>,
    label_sets: Vec<LabelSet>,
    terms: HashMap<(u32, usize), Arc<Vec<Term>>>,
    kinds: HashMap<(u32, usize), Arc<Vec<Kind>>>,
}

impl Raw {
    fn kinds(&mut self, depth: u32, n: usize) -> Arc<Vec<Kind>> {
        if let Some(v) = self.kinds.get(&(depth, n)) {
            return v.clone();
        }
        let mut out = atomic_kinds(&self.label_sets, n);
        if n > 1 {
            for t in self.terms(depth, n - 1).iter() {
                out.push(Kind::El(Arc::new(t.clone())));
            }
            for a in 1..n - 1 {
                let doms = self.kinds(depth, a);
                let cods = self.kinds(depth + 1, n - 1 - a);
                for d in doms.iter() {
                    for c in cods.iter() {
                        out.push(Kind::Prod(prod_hint(c), Arc::new(d.clone()), Arc::new(c.clone())));
                    }
                }
            }
        }
        let out = Arc::new(out);
        self.kinds.insert((depth, n), out.clone());
        out
    }

    fn terms(&mut self, depth: u32, n: usize) -> Arc<Vec<Term>> {
        if let Some(v) = self.terms.get(&(depth, n)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if n == 1 {
            out.extend(self.vars.iter().cloned().map(Term::Var));
            out.extend((0..depth).map(Term::Bound));
            out.push(Term::EmptyRec);
        } else {
            let labels = self.labels.clone();
            for r in self.terms(depth, n - 1).iter() {
                out.push(Term::Restr(Arc::new(r.clone())));
                for l in &labels {
                    out.push(Term::Sel(Arc::new(r.clone()), l.clone()));
                }
            }
            for a in 1..n - 1 {
                let left = self.terms(depth, a);
                let right = self.terms(depth, n - 1 - a);
                for x in left.iter() {
                    for y in right.iter() {
                        out.push(Term::App(Arc::new(x.clone()), Arc::new(y.clone())));
                        for l in &labels {
                            out.push(Term::RecTypeExt(Arc::new(x.clone()), l.clone(), Arc::new(y.clone())));
                        }
                    }
                }
            }
            for a in 1..n - 1 {
                for b in 1..n - 1 - a {
                    let c = n - 1 - a - b;
                    if c == 0 {
                        continue;
                    }
                    let (rs, vs, fs) = (self.terms(depth, a), self.terms(depth, b), self.terms(depth, c));
                    for r in rs.iter() {
                        for v in vs.iter() {
                            for f in fs.iter() {
                                for l in &labels {
                                    out.push(Term::RecExt(
                                        Arc::new(r.clone()),
                                        l.clone(),
                                        Arc::new(v.clone()),
                                        Arc::new(f.clone()),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
            for a in 1..n - 1 {
                let doms = self.kinds(depth, a);
                let bodies = self.terms(depth + 1, n - 1 - a);
                for d in doms.iter() {
                    for b in bodies.iter() {
                        out.push(Term::Lam(binder_hint(b), Arc::new(d.clone()), Arc::new(b.clone())));
                    }
                }
            }
        }
        let out = Arc::new(out);
        self.terms.insert((depth, n), out.clone());
        out
    }
}

/// Every raw term of exactly `size` nodes over the variables of `g`.
pub fn raw_terms(g: &Context, labels: &LabelSet, size: usize) -> Vec<Term> {
    let labels: Vec<Label> = labels.iter().cloned().collect();
    let mut raw = Raw {
        vars: g.entries().iter().map(|(x, _)| x.clone()).collect(),
        label_sets: all_subsets(&labels),
        labels,
        terms: HashMap::new(),
        kinds: HashMap::new(),
    };
    raw.terms(0, size).as_ref().clone()
}

// ---------------------------------------------------------------------------
// typed pools

/// An accepted term with its evaluation.
#[derive(Debug, Clone)]
pub struct Accepted {
    pub term: Term,
    pub result: EvalResult,
}

/// Accepted terms and kinds by context and exact size.
pub struct Pools {
    labels: Vec<Label>,
    label_sets: Vec<LabelSet>,
    terms: HashMap<(Context, usize), Arc<Vec<Accepted>>>,
    kinds: HashMap<(Context, usize), Arc<Vec<Kind>>>,
    engine: Engine,
}

fn mentions_empty(t: &Term) -> bool {
    match t {
        Term::EmptyRec => true,
        Term::Var(_) | Term::Bound(_) => false,
        Term::Lam(_, _, b) => mentions_empty(b),
        Term::App(f, a) => mentions_empty(f) || mentions_empty(a),
        Term::RecTypeExt(..) | Term::RecExt(..) => true,
        Term::Restr(r) | Term::Sel(r, _) => mentions_empty(r),
    }
}

impl Pools {
    pub fn new(labels: &LabelSet) -> Self {
        let labels: Vec<Label> = labels.iter().cloned().collect();
        Pools {
            label_sets: all_subsets(&labels),
            labels,
            terms: HashMap::new(),
            kinds: HashMap::new(),
            engine: Engine::new(),
        }
    }

    fn accept(&mut self, g: &Context, t: Term, out: &mut Vec<Accepted>) {
        if let Ok((result, _)) = self.engine.eval_term(g, &t) {
            out.push(Accepted { term: t, result });
        }
    }

    fn fresh(g: &Context) -> Name {
        fresh_name("x", |n| g.declares(n))
    }

    /// Accepted kinds of exactly `n` nodes in `g`.
    pub fn kinds(&mut self, g: &Context, n: usize) -> Arc<Vec<Kind>> {
        if let Some(v) = self.kinds.get(&(g.clone(), n)) {
            return v.clone();
        }
        let mut out = atomic_kinds(&self.label_sets, n);
        if n > 1 {
            let mut cands = Vec::new();
            for a in self.terms(g, n - 1).iter() {
                let k = &a.result.kind_nf;
                if matches!(k, Kind::Type | Kind::RType | Kind::RTypeL(_)) || mentions_empty(&a.term) {
                    cands.push(Kind::El(Arc::new(a.term.clone())));
                }
            }
            for a in 1..n - 1 {
                for d in self.kinds(g, a).iter() {
                    let y = Self::fresh(g);
                    let inner = g.extended(y.clone(), d.clone());
                    for c in self.kinds(&inner, n - 1 - a).iter() {
                        let c = c.abstract_name(&y);
                        cands.push(Kind::Prod(prod_hint(&c), Arc::new(d.clone()), Arc::new(c)));
                    }
                }
            }
            for k in cands {
                if self.engine.eval_kind(g, &k).is_ok() {
                    out.push(k);
                }
            }
        }
        let out = Arc::new(out);
        self.kinds.insert((g.clone(), n), out.clone());
        out
    }

    /// Accepted terms of exactly `n` nodes in `g`.
    pub fn terms(&mut self, g: &Context, n: usize) -> Arc<Vec<Accepted>> {
        if let Some(v) = self.terms.get(&(g.clone(), n)) {
            return v.clone();
        }
        let mut out = Vec::new();
        if n == 1 {
            for (x, _) in g.entries() {
                self.accept(g, Term::Var(x.clone()), &mut out);
            }
            self.accept(g, Term::EmptyRec, &mut out);
        } else {
            let labels = self.labels.clone();
            let mut cands = Vec::new();
            for r in self.terms(g, n - 1).iter() {
                if matches!(r.result.kind_nf, Kind::El(_)) {
                    cands.push(Term::Restr(Arc::new(r.term.clone())));
                    for l in &labels {
                        cands.push(Term::Sel(Arc::new(r.term.clone()), l.clone()));
                    }
                }
            }
            for a in 1..n - 1 {
                let left = self.terms(g, a);
                let right = self.terms(g, n - 1 - a);
                for f in left.iter() {
                    if matches!(f.result.kind_nf, Kind::Prod(..)) {
                        for x in right.iter() {
                            cands.push(Term::App(Arc::new(f.term.clone()), Arc::new(x.term.clone())));
                        }
                    }
                }
                for r in left.iter() {
                    let fresh_for = |l: &Label| match &r.result.kind_nf {
                        Kind::RTypeL(ls) => !ls.contains(l),
                        _ => mentions_empty(&r.term),
                    };
                    for fam in right.iter() {
                        if !matches!(fam.result.kind_nf, Kind::Prod(..)) {
                            continue;
                        }
                        for l in labels.iter().filter(|l| fresh_for(l)) {
                            cands.push(Term::RecTypeExt(Arc::new(r.term.clone()), l.clone(), Arc::new(fam.term.clone())));
                        }
                    }
                }
            }
            for a in 1..n - 1 {
                for b in 1..n - 1 - a {
                    let c = n - 1 - a - b;
                    if c == 0 {
                        continue;
                    }
                    let (rs, vs, fs) = (self.terms(g, a), self.terms(g, b), self.terms(g, c));
                    for r in rs.iter().filter(|r| matches!(r.result.kind_nf, Kind::El(_))) {
                        for f in fs.iter().filter(|f| matches!(f.result.kind_nf, Kind::Prod(..))) {
                            for v in vs.iter() {
                                for l in &labels {
                                    cands.push(Term::RecExt(
                                        Arc::new(r.term.clone()),
                                        l.clone(),
                                        Arc::new(v.term.clone()),
                                        Arc::new(f.term.clone()),
                                    ));
                                }
                            }
                        }
                    }
                }
            }
            for a in 1..n - 1 {
                for d in self.kinds(g, a).iter() {
                    let y = Self::fresh(g);
                    let inner = g.extended(y.clone(), d.clone());
                    for body in self.terms(&inner, n - 1 - a).iter() {
                        let b = body.term.abstract_name(&y);
                        cands.push(Term::Lam(binder_hint(&b), Arc::new(d.clone()), Arc::new(b)));
                    }
                }
            }
            for t in cands {
                self.accept(g, t, &mut out);
            }
        }
        let out = Arc::new(out);
        self.terms.insert((g.clone(), n), out.clone());
        out
    }
}

// ---------------------------------------------------------------------------
// curated negatives and random supplement

/// `([x:K]x(x))([x:K]x(x))` with `K = El(T)`.
pub fn omega() -> Term {
    let k = Kind::el(Term::var("T"));
    let half = Term::lam("x", k, Term::app(Term::var("x"), Term::var("x")));
    Term::app(half.clone(), half)
}

/// `<<<>, l : A>, l : A'>`: a record type declaring `l` twice.
pub fn duplicate_label_type() -> Term {
    let one = Term::rec_type(Term::EmptyRec, "l", Term::lam("_", Kind::el(Term::EmptyRec), Term::var("T")));
    let fam = Term::lam("_", Kind::el(one.clone()), Term::var("T"));
    Term::rec_type(one, "l", fam)
}

fn negatives(contexts: &[BaseContext]) -> Vec<CorpusItem> {
    let Some(i) = contexts.iter().position(|b| b.name == "const") else { return Vec::new() };
    vec![
        CorpusItem { context: i, term: omega(), origin: Origin::Negative },
        CorpusItem { context: i, term: duplicate_label_type(), origin: Origin::Negative },
    ]
}

fn random_supplement(
    cfg: &EnumConfig,
    contexts: &[BaseContext],
    pools: &mut [Vec<Accepted>],
) -> Vec<CorpusItem> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let labels: Vec<Label> = cfg.base_labels.iter().cloned().collect();
    let mut out = Vec::new();
    let mut seen = BTreeSet::new();
    let mut attempts = 0;
    while out.len() < cfg.random_samples && attempts < cfg.random_samples * 50 {
        attempts += 1;
        let ci = rng.gen_range(0..contexts.len());
        let pool = &pools[ci];
        if pool.is_empty() {
            continue;
        }
        let pick = |rng: &mut ChaCha8Rng| pool.choose(rng).expect("nonempty pool").term.clone();
        let mut t = pick(&mut rng);
        while t.size() <= cfg.max_term_size {
            let other = pick(&mut rng);
            t = match rng.gen_range(0..6) {
                0 => Term::app(t, other),
                1 => Term::app(other, t),
                2 => Term::Restr(Arc::new(t)),
                3 => Term::Sel(Arc::new(t), labels.choose(&mut rng).expect("labels").clone()),
                4 => Term::RecTypeExt(Arc::new(t), labels.choose(&mut rng).expect("labels").clone(), Arc::new(other)),
                _ => {
                    let fam = pick(&mut rng);
                    Term::RecExt(Arc::new(t), labels.choose(&mut rng).expect("labels").clone(), Arc::new(other), Arc::new(fam))
                }
            };
        }
        if t.size() <= cfg.random_max_size && seen.insert((ci, t.clone())) {
            out.push(CorpusItem { context: ci, term: t, origin: Origin::Random });
        }
    }
    out
}

// ---------------------------------------------------------------------------

/// The enumeration: raw terms up to `raw_size`, accepted compositions up to
/// `max_term_size`, the curated negatives and the random supplement, in
/// canonical order (context, size, printed form).
pub fn enumerate(cfg: &EnumConfig) -> Vec<CorpusItem> {
    enumerate_in(cfg, &base_contexts(cfg))
}

pub fn enumerate_in(cfg: &EnumConfig, contexts: &[BaseContext]) -> Vec<CorpusItem> {
    let per_context: Vec<(Vec<CorpusItem>, Vec<Accepted>)> = contexts
        .par_iter()
        .enumerate()
        .map(|(ci, b)| {
            let mut items = Vec::new();
            for n in 1..=cfg.raw_size {
                for t in raw_terms(&b.ctx, &cfg.base_labels, n) {
                    items.push(CorpusItem { context: ci, term: t, origin: Origin::Raw });
                }
            }
            let mut pools = Pools::new(&cfg.base_labels);
            let mut accepted = Vec::new();
            for n in 1..=cfg.max_term_size {
                let level = pools.terms(&b.ctx, n);
                if n > cfg.raw_size {
                    for a in level.iter() {
                        items.push(CorpusItem { context: ci, term: a.term.clone(), origin: Origin::Typed });
                    }
                }
                accepted.extend(level.iter().cloned());
            }
            (items, accepted)
        })
        .collect();
    let mut items = Vec::new();
    let mut pools = Vec::new();
    for (i, p) in per_context {
        items.extend(i);
        pools.push(p);
    }
    items.extend(negatives(contexts));
    items.extend(random_supplement(cfg, contexts, &mut pools));
    canonical_sort(&mut items);
    items.dedup_by(|a, b| a.context == b.context && a.term == b.term);
    items
}

fn canonical_sort(items: &mut [CorpusItem]) {
    items.sort_by_cached_key(|it| (it.context, it.term.size(), it.term.to_string(), it.origin));
}

/// A corpus item together with its evaluation.
#[derive(Debug, Clone)]
pub struct Evaluated {
    pub item: CorpusItem,
    pub outcome: Result<EvalResult, String>,
}

/// The evaluated enumeration shared by the property suites.
pub struct Corpus {
    pub config: EnumConfig,
    pub contexts: Vec<BaseContext>,
    pub items: Vec<Evaluated>,
    /// How often each evaluator rule fired over the corpus.
    pub tos_counts: RuleCounts,
}

impl Corpus {
    pub fn build(cfg: &EnumConfig) -> Corpus {
        let contexts = base_contexts(cfg);
        let items = enumerate_in(cfg, &contexts);
        let evaluated: Vec<(Evaluated, RuleCounts)> = items
            .into_par_iter()
            .map(|item| {
                let mut e = Engine::new();
                let outcome = e.eval_term(&contexts[item.context].ctx, &item.term).map(|(r, _)| r).map_err(|e| e.to_string());
                (Evaluated { item, outcome }, e.take_counts())
            })
            .collect();
        let mut tos_counts = RuleCounts::default();
        let mut out = Vec::with_capacity(evaluated.len());
        for (ev, c) in evaluated {
            tos_counts.merge(&c);
            out.push(ev);
        }
        Corpus { config: cfg.clone(), contexts, items: out, tos_counts }
    }

    pub fn context_of(&self, e: &Evaluated) -> &Context {
        &self.contexts[e.item.context].ctx
    }

    /// Items the evaluator accepts.
    pub fn accepted(&self) -> impl Iterator<Item = (&Evaluated, &EvalResult)> {
        self.items.iter().filter_map(|e| e.outcome.as_ref().ok().map(|r| (e, r)))
    }

    pub fn accepted_count(&self) -> usize {
        self.accepted().count()
    }
}
