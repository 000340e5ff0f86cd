//! Abstract syntax of kinds, terms and contexts.
//!
//! Terms are locally nameless: variables bound by `[x:K]M` and `(x:K)K'` are
//! de Bruijn indices ([`Term::Bound`]), free variables are names
//! ([`Term::Var`]). Binders keep their source name as a [`Hint`] for printing
//! only, so derived structural equality *is* α-equivalence.

use std::collections::BTreeSet;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use thiserror::Error;

/// A free variable name.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Name(Arc<str>);

impl Name {
    pub fn new(s: &str) -> Self {
        Name(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Name {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Name {
    fn from(s: &str) -> Self {
        Name::new(s)
    }
}

/// A record label. Labels live in their own namespace and are never bound.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Label(Arc<str>);

impl Label {
    pub fn new(s: &str) -> Self {
        Label(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Debug for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for Label {
    fn from(s: &str) -> Self {
        Label::new(s)
    }
}

/// A finite set of labels, as in `RType[L]`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LabelSet(BTreeSet<Label>);

impl LabelSet {
    pub fn new() -> Self {
        LabelSet(BTreeSet::new())
    }

    pub fn contains(&self, l: &Label) -> bool {
        self.0.contains(l)
    }

    pub fn insert(&mut self, l: Label) -> bool {
        self.0.insert(l)
    }

    pub fn with(&self, l: Label) -> LabelSet {
        let mut s = self.clone();
        s.insert(l);
        s
    }

    pub fn union(&self, other: &LabelSet) -> LabelSet {
        LabelSet(self.0.union(&other.0).cloned().collect())
    }

    pub fn is_subset(&self, other: &LabelSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Label> {
        self.0.iter()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl FromIterator<Label> for LabelSet {
    fn from_iter<I: IntoIterator<Item = Label>>(iter: I) -> Self {
        LabelSet(iter.into_iter().collect())
    }
}

impl fmt::Debug for LabelSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.0.iter()).finish()
    }
}

/// Source name of a binder. Carries no meaning: it compares equal to every
/// other hint and does not contribute to hashes.
#[derive(Clone)]
pub struct Hint(Arc<str>);

impl Hint {
    pub fn new(s: &str) -> Self {
        Hint(Arc::from(s))
    }

    pub fn anon() -> Self {
        Hint::new("_")
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn is_anon(&self) -> bool {
        &*self.0 == "_"
    }
}

impl PartialEq for Hint {
    fn eq(&self, _: &Hint) -> bool {
        true
    }
}

impl Eq for Hint {}

impl Hash for Hint {
    fn hash<H: Hasher>(&self, _: &mut H) {}
}

impl PartialOrd for Hint {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Hint {
    fn cmp(&self, _: &Self) -> std::cmp::Ordering {
        std::cmp::Ordering::Equal
    }
}

impl fmt::Debug for Hint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Terms of LF extended with record types and records.
///
/// `EmptyRec` is both the empty record type and the empty record; typing
/// decides which one is meant.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(Name),
    Bound(u32),
    /// `[x:K]M`
    Lam(Hint, Arc<Kind>, Arc<Term>),
    /// `M(N)`
    App(Arc<Term>, Arc<Term>),
    /// `<>`
    EmptyRec,
    /// `<R, l : A>`
    RecTypeExt(Arc<Term>, Label, Arc<Term>),
    /// `<r, l = a : A>`, a pair-record
    RecExt(Arc<Term>, Label, Arc<Term>, Arc<Term>),
    /// `[r]`
    Restr(Arc<Term>),
    /// `r.l`
    Sel(Arc<Term>, Label),
}

/// Kinds: `Type | El(A) | (x:K)K' | RType | RType[L]`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Kind {
    Type,
    El(Arc<Term>),
    Prod(Hint, Arc<Kind>, Arc<Kind>),
    RType,
    RTypeL(LabelSet),
}

impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::print::term_to_string(self))
    }
}

impl fmt::Debug for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::print::kind_to_string(self))
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::print::term_to_string(self))
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::print::kind_to_string(self))
    }
}

// ---------------------------------------------------------------------------
// Named construction helpers

impl Term {
    pub fn var(x: &str) -> Term {
        Term::Var(Name::new(x))
    }

    /// `[x:K]body`, abstracting the free occurrences of `x` in `body`.
    pub fn lam(x: &str, dom: Kind, body: Term) -> Term {
        let name = Name::new(x);
        Term::Lam(Hint::new(x), Arc::new(dom), Arc::new(body.abstract_name(&name)))
    }

    pub fn app(f: Term, a: Term) -> Term {
        Term::App(Arc::new(f), Arc::new(a))
    }

    pub fn rec_type(r: Term, l: &str, fam: Term) -> Term {
        Term::RecTypeExt(Arc::new(r), Label::new(l), Arc::new(fam))
    }

    pub fn rec(r: Term, l: &str, val: Term, fam: Term) -> Term {
        Term::RecExt(Arc::new(r), Label::new(l), Arc::new(val), Arc::new(fam))
    }

    pub fn restr(r: Term) -> Term {
        Term::Restr(Arc::new(r))
    }

    pub fn sel(r: Term, l: &str) -> Term {
        Term::Sel(Arc::new(r), Label::new(l))
    }
}

impl Kind {
    pub fn el(t: Term) -> Kind {
        Kind::El(Arc::new(t))
    }

    /// `(x:K)K'`, abstracting free occurrences of `x` in `cod`.
    pub fn prod(x: &str, dom: Kind, cod: Kind) -> Kind {
        let name = Name::new(x);
        Kind::Prod(Hint::new(x), Arc::new(dom), Arc::new(cod.abstract_name(&name)))
    }

    /// `(R)Type`, the kind of field families over the record type `R`.
    pub fn family(r: Term) -> Kind {
        Kind::Prod(Hint::anon(), Arc::new(Kind::el(r)), Arc::new(Kind::Type))
    }

    pub fn rtype_l<'a>(labels: impl IntoIterator<Item = &'a str>) -> Kind {
        Kind::RTypeL(labels.into_iter().map(Label::new).collect())
    }
}

// ---------------------------------------------------------------------------
// De Bruijn machinery. Each function works at a binder depth `k` and returns
// the input unchanged (pointer-equal) when nothing needs rewriting.

fn same<T>(a: &Arc<T>, b: &Arc<T>) -> bool {
    Arc::ptr_eq(a, b)
}

trait Rewrite: Sized {
    fn rewrite(this: &Arc<Self>, k: u32, f: &mut dyn FnMut(&Term, u32) -> Option<Term>) -> Arc<Self>;
}

impl Rewrite for Term {
    fn rewrite(this: &Arc<Term>, k: u32, f: &mut dyn FnMut(&Term, u32) -> Option<Term>) -> Arc<Term> {
        if let Some(t) = f(this, k) {
            return Arc::new(t);
        }
        match &**this {
            Term::Var(_) | Term::Bound(_) | Term::EmptyRec => this.clone(),
            Term::Lam(h, dom, body) => {
                let d = Kind::rewrite(dom, k, f);
                let b = Term::rewrite(body, k + 1, f);
                if same(&d, dom) && same(&b, body) {
                    this.clone()
                } else {
                    Arc::new(Term::Lam(h.clone(), d, b))
                }
            }
            Term::App(m, n) => {
                let m2 = Term::rewrite(m, k, f);
                let n2 = Term::rewrite(n, k, f);
                if same(&m2, m) && same(&n2, n) {
                    this.clone()
                } else {
                    Arc::new(Term::App(m2, n2))
                }
            }
            Term::RecTypeExt(r, l, a) => {
                let r2 = Term::rewrite(r, k, f);
                let a2 = Term::rewrite(a, k, f);
                if same(&r2, r) && same(&a2, a) {
                    this.clone()
                } else {
                    Arc::new(Term::RecTypeExt(r2, l.clone(), a2))
                }
            }
            Term::RecExt(r, l, a, fam) => {
                let r2 = Term::rewrite(r, k, f);
                let a2 = Term::rewrite(a, k, f);
                let fam2 = Term::rewrite(fam, k, f);
                if same(&r2, r) && same(&a2, a) && same(&fam2, fam) {
                    this.clone()
                } else {
                    Arc::new(Term::RecExt(r2, l.clone(), a2, fam2))
                }
            }
            Term::Restr(r) => {
                let r2 = Term::rewrite(r, k, f);
                if same(&r2, r) {
                    this.clone()
                } else {
                    Arc::new(Term::Restr(r2))
                }
            }
            Term::Sel(r, l) => {
                let r2 = Term::rewrite(r, k, f);
                if same(&r2, r) {
                    this.clone()
                } else {
                    Arc::new(Term::Sel(r2, l.clone()))
                }
            }
        }
    }
}

impl Rewrite for Kind {
    fn rewrite(this: &Arc<Kind>, k: u32, f: &mut dyn FnMut(&Term, u32) -> Option<Term>) -> Arc<Kind> {
        match &**this {
            Kind::Type | Kind::RType | Kind::RTypeL(_) => this.clone(),
            Kind::El(t) => {
                let t2 = Term::rewrite(t, k, f);
                if same(&t2, t) {
                    this.clone()
                } else {
                    Arc::new(Kind::El(t2))
                }
            }
            Kind::Prod(h, d, c) => {
                let d2 = Kind::rewrite(d, k, f);
                let c2 = Kind::rewrite(c, k + 1, f);
                if same(&d2, d) && same(&c2, c) {
                    this.clone()
                } else {
                    Arc::new(Kind::Prod(h.clone(), d2, c2))
                }
            }
        }
    }
}

fn shift_fn(d: i64, cutoff: u32) -> impl FnMut(&Term, u32) -> Option<Term> {
    move |t, k| match t {
        Term::Bound(i) if *i >= cutoff + k => {
            let j = *i as i64 + d;
            assert!(j >= 0, "negative de Bruijn index after shift");
            Some(Term::Bound(j as u32))
        }
        _ => None,
    }
}

fn instantiate_fn<'a>(v: &'a Term) -> impl FnMut(&Term, u32) -> Option<Term> + 'a {
    move |t, k| match t {
        Term::Bound(i) if *i == k => Some(if k == 0 { v.clone() } else { v.shift(k as i64, 0) }),
        Term::Bound(i) if *i > k => Some(Term::Bound(i - 1)),
        _ => None,
    }
}

fn abstract_fn<'a>(x: &'a Name) -> impl FnMut(&Term, u32) -> Option<Term> + 'a {
    move |t, k| match t {
        Term::Var(y) if y == x => Some(Term::Bound(k)),
        Term::Bound(i) if *i >= k => Some(Term::Bound(i + 1)),
        _ => None,
    }
}

fn subst_fn<'a>(x: &'a Name, v: &'a Term) -> impl FnMut(&Term, u32) -> Option<Term> + 'a {
    move |t, k| match t {
        Term::Var(y) if y == x => Some(if k == 0 { v.clone() } else { v.shift(k as i64, 0) }),
        _ => None,
    }
}

macro_rules! debruijn_ops {
    ($ty:ty) => {
        impl $ty {
            /// Adds `d` to every bound index at or above `cutoff` (relative to
            /// the binders crossed).
            pub fn shift(&self, d: i64, cutoff: u32) -> $ty {
                if d == 0 {
                    return self.clone();
                }
                let a = Arc::new(self.clone());
                (*<$ty as Rewrite>::rewrite(&a, 0, &mut shift_fn(d, cutoff))).clone()
            }

            /// Replaces bound index 0 by `v`, lowering the others. Used to open
            /// the body of a binder.
            pub fn instantiate(&self, v: &Term) -> $ty {
                let a = Arc::new(self.clone());
                (*<$ty as Rewrite>::rewrite(&a, 0, &mut instantiate_fn(v))).clone()
            }

            /// Turns free occurrences of `x` into bound index 0 (the inverse of
            /// `instantiate(Var(x))` when `x` is fresh).
            pub fn abstract_name(&self, x: &Name) -> $ty {
                let a = Arc::new(self.clone());
                (*<$ty as Rewrite>::rewrite(&a, 0, &mut abstract_fn(x))).clone()
            }

            /// Capture-avoiding substitution `[v/x]self`.
            pub fn subst(&self, x: &Name, v: &Term) -> $ty {
                let a = Arc::new(self.clone());
                (*<$ty as Rewrite>::rewrite(&a, 0, &mut subst_fn(x, v))).clone()
            }

            /// Free (named) variables.
            pub fn free_vars(&self) -> BTreeSet<Name> {
                let mut out = BTreeSet::new();
                let a = Arc::new(self.clone());
                <$ty as Rewrite>::rewrite(&a, 0, &mut |t, _| {
                    if let Term::Var(x) = t {
                        out.insert(x.clone());
                    }
                    None
                });
                out
            }

            /// Whether the free (named) variable `x` occurs.
            pub fn mentions(&self, x: &Name) -> bool {
                let mut found = false;
                let a = Arc::new(self.clone());
                <$ty as Rewrite>::rewrite(&a, 0, &mut |t, _| {
                    if matches!(t, Term::Var(y) if y == x) {
                        found = true;
                    }
                    None
                });
                found
            }

            /// Whether bound index `j` (counted from the outside of `self`)
            /// occurs, i.e. whether a binder `j` levels up is used.
            pub fn has_loose(&self, j: u32) -> bool {
                let mut found = false;
                let a = Arc::new(self.clone());
                <$ty as Rewrite>::rewrite(&a, 0, &mut |t, k| {
                    if matches!(t, Term::Bound(i) if *i == j + k) {
                        found = true;
                    }
                    None
                });
                found
            }

            /// No dangling bound indices.
            pub fn is_locally_closed(&self) -> bool {
                let mut ok = true;
                let a = Arc::new(self.clone());
                <$ty as Rewrite>::rewrite(&a, 0, &mut |t, k| {
                    if matches!(t, Term::Bound(i) if *i >= k) {
                        ok = false;
                    }
                    None
                });
                ok
            }
        }
    };
}

debruijn_ops!(Term);
debruijn_ops!(Kind);

impl Term {
    /// Structural α-equivalence. Binder hints are ignored by construction.
    pub fn alpha_eq(&self, other: &Term) -> bool {
        self == other
    }

    pub fn is_pair_record(&self) -> bool {
        matches!(self, Term::RecExt(..))
    }

    pub fn is_abstraction(&self) -> bool {
        matches!(self, Term::Lam(..))
    }

    /// Node count; kinds embedded in abstractions count too.
    pub fn size(&self) -> usize {
        match self {
            Term::Var(_) | Term::Bound(_) | Term::EmptyRec => 1,
            Term::Lam(_, k, b) => 1 + k.size() + b.size(),
            Term::App(m, n) => 1 + m.size() + n.size(),
            Term::RecTypeExt(r, _, a) => 1 + r.size() + a.size(),
            Term::RecExt(r, _, a, f) => 1 + r.size() + a.size() + f.size(),
            Term::Restr(r) | Term::Sel(r, _) => 1 + r.size(),
        }
    }

    /// Labels of the top-level fields of a syntactic record type.
    pub fn top_labels(&self) -> Result<LabelSet, ShapeError> {
        let mut out = LabelSet::new();
        let mut cur = self;
        loop {
            match cur {
                Term::EmptyRec => return Ok(out),
                Term::RecTypeExt(r, l, _) => {
                    out.insert(l.clone());
                    cur = r;
                }
                _ => return Err(ShapeError::NotRecordType(self.clone())),
            }
        }
    }

    /// Opens the body of a binder with the free variable `x`.
    pub fn open(&self, x: &Name) -> Term {
        self.instantiate(&Term::Var(x.clone()))
    }
}

impl Kind {
    pub fn alpha_eq(&self, other: &Kind) -> bool {
        self == other
    }

    /// Node count; each label of `RType[L]` counts as a node.
    pub fn size(&self) -> usize {
        match self {
            Kind::Type | Kind::RType => 1,
            Kind::RTypeL(l) => 1 + l.len(),
            Kind::El(t) => 1 + t.size(),
            Kind::Prod(_, d, c) => 1 + d.size() + c.size(),
        }
    }

    pub fn open(&self, x: &Name) -> Kind {
        self.instantiate(&Term::Var(x.clone()))
    }

    /// Whether this kind classifies record types (`RType` or `RType[L]`).
    pub fn is_record_kind(&self) -> bool {
        matches!(self, Kind::RType | Kind::RTypeL(_))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ShapeError {
    #[error("not a syntactic record type: {0}")]
    NotRecordType(Term),
}

// ---------------------------------------------------------------------------
// Contexts

/// An ordered list of declarations `x : K`.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Context {
    entries: Vec<(Name, Kind)>,
}

impl Context {
    pub fn new() -> Self {
        Context { entries: Vec::new() }
    }

    pub fn from_entries(entries: Vec<(Name, Kind)>) -> Self {
        Context { entries }
    }

    pub fn entries(&self) -> &[(Name, Kind)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn push(&mut self, x: Name, k: Kind) {
        self.entries.push((x, k));
    }

    pub fn extended(&self, x: Name, k: Kind) -> Context {
        let mut c = self.clone();
        c.push(x, k);
        c
    }

    pub fn prefix(&self, n: usize) -> Context {
        Context { entries: self.entries[..n].to_vec() }
    }

    pub fn lookup(&self, x: &Name) -> Option<&Kind> {
        self.entries.iter().rev().find(|(y, _)| y == x).map(|(_, k)| k)
    }

    pub fn position(&self, x: &Name) -> Option<usize> {
        self.entries.iter().position(|(y, _)| y == x)
    }

    pub fn dom(&self) -> BTreeSet<Name> {
        self.entries.iter().map(|(x, _)| x.clone()).collect()
    }

    pub fn declares(&self, x: &Name) -> bool {
        self.entries.iter().any(|(y, _)| y == x)
    }

    /// Free variables of the declared kinds.
    pub fn free_vars(&self) -> BTreeSet<Name> {
        let mut out = BTreeSet::new();
        for (_, k) in &self.entries {
            out.extend(k.free_vars());
        }
        out
    }

    pub fn alpha_eq(&self, other: &Context) -> bool {
        self == other
    }

    /// Applies `[v/x]` to every declared kind.
    pub fn subst(&self, x: &Name, v: &Term) -> Context {
        Context { entries: self.entries.iter().map(|(y, k)| (y.clone(), k.subst(x, v))).collect() }
    }

    /// A name based on `hint` that is not declared here and not in `avoid`.
    pub fn fresh(&self, hint: &str, avoid: &BTreeSet<Name>) -> Name {
        fresh_name(hint, |n| self.declares(n) || avoid.contains(n))
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", crate::print::context_to_string(self))
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::print::context_to_string(self))
    }
}

/// First of `hint`, `hint'`, `hint''`, ... rejected by `taken`. Anonymous
/// hints become `x`.
pub fn fresh_name(hint: &str, mut taken: impl FnMut(&Name) -> bool) -> Name {
    let base = if hint.is_empty() || hint == "_" { "x" } else { hint };
    let mut candidate = base.to_string();
    loop {
        let n = Name::new(&candidate);
        if !taken(&n) {
            return n;
        }
        candidate.push('\'');
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Term {
        Term::var("x")
    }

    fn y() -> Term {
        Term::var("y")
    }

    #[test]
    fn alpha_renaming_of_binders() {
        let a = Term::lam("x", Kind::Type, x());
        let b = Term::lam("y", Kind::Type, y());
        assert!(a.alpha_eq(&b));
    }

    #[test]
    fn labels_are_not_renamed() {
        let fam = Term::var("A");
        let a = Term::rec_type(Term::EmptyRec, "l", fam.clone());
        let b = Term::rec_type(Term::EmptyRec, "m", fam);
        assert!(!a.alpha_eq(&b));
    }

    #[test]
    fn distinct_free_variables_differ() {
        assert!(!x().alpha_eq(&y()));
    }

    #[test]
    fn substitution_basics() {
        assert_eq!(x().subst(&Name::new("x"), &y()), y());
        // [y/x]([y:Type]x) = [y':Type]y
        let t = Term::lam("y", Kind::Type, x());
        let got = t.subst(&Name::new("x"), &y());
        let want = Term::lam("z", Kind::Type, y());
        assert!(got.alpha_eq(&want));
        assert!(!got.alpha_eq(&Term::lam("y", Kind::Type, y())));
    }

    #[test]
    fn substitution_under_record_value() {
        let fam = Term::lam("_", Kind::el(Term::EmptyRec), Term::var("B"));
        let t = Term::rec(Term::EmptyRec, "l", x(), fam.clone());
        let got = t.subst(&Name::new("x"), &Term::var("a"));
        assert_eq!(got, Term::rec(Term::EmptyRec, "l", Term::var("a"), fam));
    }

    #[test]
    fn free_variable_sets() {
        assert!(Term::lam("x", Kind::Type, x()).free_vars().is_empty());
        let t = Term::rec(Term::var("p"), "l", Term::var("q"), Term::var("s"));
        let fv: Vec<_> = t.free_vars().into_iter().map(|n| n.to_string()).collect();
        assert_eq!(fv, ["p", "q", "s"]);
        let fv: Vec<_> = Term::app(x(), y()).free_vars().into_iter().map(|n| n.to_string()).collect();
        assert_eq!(fv, ["x", "y"]);
        // x stays free when it occurs in the domain kind
        let t = Term::Lam(Hint::new("x"), Arc::new(Kind::el(x())), Arc::new(Term::Bound(0)));
        assert!(t.free_vars().contains(&Name::new("x")));
    }

    #[test]
    fn pair_record_predicate() {
        let a = Term::var("A");
        assert!(Term::rec(Term::EmptyRec, "l", Term::var("a"), a.clone()).is_pair_record());
        assert!(!Term::EmptyRec.is_pair_record());
        assert!(!Term::rec_type(Term::EmptyRec, "l", a).is_pair_record());
    }

    #[test]
    fn top_level_labels() {
        assert!(Term::EmptyRec.top_labels().unwrap().is_empty());
        let r = Term::rec_type(Term::rec_type(Term::EmptyRec, "n", Term::var("A")), "v", Term::var("B"));
        assert_eq!(r.top_labels().unwrap(), LabelSet::from_iter([Label::new("n"), Label::new("v")]));
        let err = Term::app(Term::var("f"), Term::var("a")).top_labels().unwrap_err();
        assert!(err.to_string().contains("not a syntactic record type"));
    }

    #[test]
    fn instantiate_shifts_under_binders() {
        // body = [z:Type] (#1)(#0) ; instantiate #1 := v where v contains a loose index
        let body = Term::Lam(
            Hint::new("z"),
            Arc::new(Kind::Type),
            Arc::new(Term::App(Arc::new(Term::Bound(1)), Arc::new(Term::Bound(0)))),
        );
        let v = Term::Bound(3);
        let got = body.instantiate(&v);
        let want = Term::Lam(
            Hint::new("z"),
            Arc::new(Kind::Type),
            Arc::new(Term::App(Arc::new(Term::Bound(4)), Arc::new(Term::Bound(0)))),
        );
        assert_eq!(got, want);
    }

    #[test]
    fn fresh_names_avoid_declared_and_extra() {
        let mut g = Context::new();
        g.push(Name::new("x"), Kind::Type);
        let avoid: BTreeSet<Name> = [Name::new("x'")].into_iter().collect();
        assert_eq!(g.fresh("x", &avoid).as_str(), "x''");
        assert_eq!(g.fresh("_", &BTreeSet::new()).as_str(), "x'");
    }
}
