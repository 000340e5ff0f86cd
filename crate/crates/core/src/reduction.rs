//! Untyped reduction: the five root rules, their compatible closure over every
//! immediate subterm (kind annotations and field families included), normal
//! form predicates, parallel reduction and finite reduction graphs.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::syntax::{Kind, Term};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum StepKind {
    Beta,
    Eta,
    Pi1,
    Pi2,
    Pi2Prime,
}

impl StepKind {
    pub const ALL: [StepKind; 5] = [StepKind::Beta, StepKind::Eta, StepKind::Pi1, StepKind::Pi2, StepKind::Pi2Prime];

    /// β together with the three record rules.
    pub fn is_beta_r(self) -> bool {
        self != StepKind::Eta
    }

    pub fn name(self) -> &'static str {
        match self {
            StepKind::Beta => "beta",
            StepKind::Eta => "eta",
            StepKind::Pi1 => "pi1",
            StepKind::Pi2 => "pi2",
            StepKind::Pi2Prime => "pi2'",
        }
    }

    pub fn from_name(s: &str) -> Option<StepKind> {
        StepKind::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl fmt::Display for StepKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The contractum of `t` if `t` itself is a redex.
pub fn root_redex(t: &Term) -> Option<(StepKind, Term)> {
    match t {
        Term::App(f, n) => match &**f {
            Term::Lam(_, _, body) => Some((StepKind::Beta, body.instantiate(n))),
            _ => None,
        },
        Term::Lam(_, _, body) => match &**body {
            Term::App(f, a) if **a == Term::Bound(0) && !f.has_loose(0) => Some((StepKind::Eta, f.shift(-1, 0))),
            _ => None,
        },
        Term::Restr(r) => match &**r {
            Term::RecExt(inner, ..) => Some((StepKind::Pi1, (**inner).clone())),
            _ => None,
        },
        Term::Sel(r, l2) => match &**r {
            Term::RecExt(_, l, a, _) if l == l2 => Some((StepKind::Pi2, (**a).clone())),
            Term::RecExt(inner, _, _, _) => Some((StepKind::Pi2Prime, Term::Sel(inner.clone(), l2.clone()))),
            _ => None,
        },
        _ => None,
    }
}

fn push_unique<T: PartialEq>(out: &mut Vec<T>, x: T) {
    if !out.contains(&x) {
        out.push(x);
    }
}

/// Every one-step reduct of `t`, each with the rule fired. Duplicates (up to
/// α) are removed; the order is root first, then subterms left to right.
pub fn one_step(t: &Term) -> Vec<(StepKind, Term)> {
    let mut out = Vec::new();
    if let Some(r) = root_redex(t) {
        out.push(r);
    }
    let sub = |out: &mut Vec<(StepKind, Term)>, child: &Arc<Term>, rebuild: &dyn Fn(Arc<Term>) -> Term| {
        for (k, c) in one_step(child) {
            push_unique(out, (k, rebuild(Arc::new(c))));
        }
    };
    match t {
        Term::Var(_) | Term::Bound(_) | Term::EmptyRec => {}
        Term::Lam(h, dom, body) => {
            for (k, d) in one_step_kind(dom) {
                push_unique(&mut out, (k, Term::Lam(h.clone(), Arc::new(d), body.clone())));
            }
            sub(&mut out, body, &|b| Term::Lam(h.clone(), dom.clone(), b));
        }
        Term::App(f, a) => {
            sub(&mut out, f, &|x| Term::App(x, a.clone()));
            sub(&mut out, a, &|x| Term::App(f.clone(), x));
        }
        Term::RecTypeExt(r, l, a) => {
            sub(&mut out, r, &|x| Term::RecTypeExt(x, l.clone(), a.clone()));
            sub(&mut out, a, &|x| Term::RecTypeExt(r.clone(), l.clone(), x));
        }
        Term::RecExt(r, l, a, fam) => {
            sub(&mut out, r, &|x| Term::RecExt(x, l.clone(), a.clone(), fam.clone()));
            sub(&mut out, a, &|x| Term::RecExt(r.clone(), l.clone(), x, fam.clone()));
            sub(&mut out, fam, &|x| Term::RecExt(r.clone(), l.clone(), a.clone(), x));
        }
        Term::Restr(r) => sub(&mut out, r, &|x| Term::Restr(x)),
        Term::Sel(r, l) => sub(&mut out, r, &|x| Term::Sel(x, l.clone())),
    }
    out
}

pub fn one_step_kind(k: &Kind) -> Vec<(StepKind, Kind)> {
    let mut out = Vec::new();
    match k {
        Kind::Type | Kind::RType | Kind::RTypeL(_) => {}
        Kind::El(t) => {
            for (s, t2) in one_step(t) {
                push_unique(&mut out, (s, Kind::El(Arc::new(t2))));
            }
        }
        Kind::Prod(h, d, c) => {
            for (s, d2) in one_step_kind(d) {
                push_unique(&mut out, (s, Kind::Prod(h.clone(), Arc::new(d2), c.clone())));
            }
            for (s, c2) in one_step_kind(c) {
                push_unique(&mut out, (s, Kind::Prod(h.clone(), d.clone(), Arc::new(c2))));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Deterministic strategies

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    LeftmostOutermost,
    RightmostInnermost,
}

fn step_term(t: &Term, s: Strategy) -> Option<Term> {
    let outer = s == Strategy::LeftmostOutermost;
    if outer {
        if let Some((_, c)) = root_redex(t) {
            return Some(c);
        }
    }
    // children in strategy order
    let found = match t {
        Term::Var(_) | Term::Bound(_) | Term::EmptyRec => None,
        Term::Lam(h, d, b) => {
            let kd = || step_kind(d, s).map(|d2| Term::Lam(h.clone(), Arc::new(d2), b.clone()));
            let kb = || step_term(b, s).map(|b2| Term::Lam(h.clone(), d.clone(), Arc::new(b2)));
            if outer { kd().or_else(kb) } else { kb().or_else(kd) }
        }
        Term::App(f, a) => {
            let kf = || step_term(f, s).map(|x| Term::App(Arc::new(x), a.clone()));
            let ka = || step_term(a, s).map(|x| Term::App(f.clone(), Arc::new(x)));
            if outer { kf().or_else(ka) } else { ka().or_else(kf) }
        }
        Term::RecTypeExt(r, l, a) => {
            let kr = || step_term(r, s).map(|x| Term::RecTypeExt(Arc::new(x), l.clone(), a.clone()));
            let ka = || step_term(a, s).map(|x| Term::RecTypeExt(r.clone(), l.clone(), Arc::new(x)));
            if outer { kr().or_else(ka) } else { ka().or_else(kr) }
        }
        Term::RecExt(r, l, a, fam) => {
            let kr = || step_term(r, s).map(|x| Term::RecExt(Arc::new(x), l.clone(), a.clone(), fam.clone()));
            let ka = || step_term(a, s).map(|x| Term::RecExt(r.clone(), l.clone(), Arc::new(x), fam.clone()));
            let kf = || step_term(fam, s).map(|x| Term::RecExt(r.clone(), l.clone(), a.clone(), Arc::new(x)));
            if outer { kr().or_else(ka).or_else(kf) } else { kf().or_else(ka).or_else(kr) }
        }
        Term::Restr(r) => step_term(r, s).map(|x| Term::Restr(Arc::new(x))),
        Term::Sel(r, l) => step_term(r, s).map(|x| Term::Sel(Arc::new(x), l.clone())),
    };
    if found.is_some() || outer {
        return found;
    }
    root_redex(t).map(|(_, c)| c)
}

fn step_kind(k: &Kind, s: Strategy) -> Option<Kind> {
    match k {
        Kind::Type | Kind::RType | Kind::RTypeL(_) => None,
        Kind::El(t) => step_term(t, s).map(|t2| Kind::El(Arc::new(t2))),
        Kind::Prod(h, d, c) => {
            let kd = || step_kind(d, s).map(|x| Kind::Prod(h.clone(), Arc::new(x), c.clone()));
            let kc = || step_kind(c, s).map(|x| Kind::Prod(h.clone(), d.clone(), Arc::new(x)));
            if s == Strategy::LeftmostOutermost { kd().or_else(kc) } else { kc().or_else(kd) }
        }
    }
}

/// Reduces with `strategy` until normal or `fuel` steps were taken. The flag
/// is true when fuel ran out first.
pub fn normalize_with(t: &Term, fuel: usize, strategy: Strategy) -> (Term, bool) {
    let mut cur = t.clone();
    for _ in 0..fuel {
        match step_term(&cur, strategy) {
            Some(next) => cur = next,
            None => return (cur, false),
        }
    }
    let exhausted = step_term(&cur, strategy).is_some();
    (cur, exhausted)
}

/// Leftmost-outermost normalization.
pub fn normalize_untyped(t: &Term, fuel: usize) -> (Term, bool) {
    normalize_with(t, fuel, Strategy::LeftmostOutermost)
}

pub fn normalize_kind_untyped(k: &Kind, fuel: usize) -> (Kind, bool) {
    let mut cur = k.clone();
    for _ in 0..fuel {
        match step_kind(&cur, Strategy::LeftmostOutermost) {
            Some(next) => cur = next,
            None => return (cur, false),
        }
    }
    let exhausted = step_kind(&cur, Strategy::LeftmostOutermost).is_some();
    (cur, exhausted)
}

// ---------------------------------------------------------------------------
// Normal forms

pub fn is_whnf(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::Bound(_) | Term::Lam(..) | Term::EmptyRec | Term::RecExt(..) => true,
        // record types are inert at the head
        Term::RecTypeExt(..) => true,
        Term::App(f, _) => !f.is_abstraction() && is_whnf(f),
        Term::Restr(r) | Term::Sel(r, _) => !r.is_pair_record() && is_whnf(r),
    }
}

/// `[x:K]f(x)` with `x` not free in `f`.
pub fn is_eta_redex(t: &Term) -> bool {
    matches!(root_redex(t), Some((StepKind::Eta, _)))
}

pub fn is_normal(t: &Term) -> bool {
    match t {
        Term::Var(_) | Term::Bound(_) | Term::EmptyRec => true,
        Term::Lam(_, k, b) => !is_eta_redex(t) && is_normal_kind(k) && is_normal(b),
        Term::App(f, a) => !f.is_abstraction() && is_normal(f) && is_normal(a),
        Term::RecTypeExt(r, _, a) => is_normal(r) && is_normal(a),
        Term::RecExt(r, _, a, fam) => is_normal(r) && is_normal(a) && is_normal(fam),
        Term::Restr(r) | Term::Sel(r, _) => !r.is_pair_record() && is_normal(r),
    }
}

/// A kind is normal when every term inside it is.
pub fn is_normal_kind(k: &Kind) -> bool {
    match k {
        Kind::Type | Kind::RType | Kind::RTypeL(_) => true,
        Kind::El(t) => is_normal(t),
        Kind::Prod(_, d, c) => is_normal_kind(d) && is_normal_kind(c),
    }
}

// ---------------------------------------------------------------------------
// Parallel reduction

fn cartesian<A: Clone, B: Clone>(xs: &BTreeSet<A>, ys: &BTreeSet<B>) -> Vec<(A, B)> {
    let mut out = Vec::with_capacity(xs.len() * ys.len());
    for x in xs {
        for y in ys {
            out.push((x.clone(), y.clone()));
        }
    }
    out
}

/// All `t'` with `t ⇒ t'`. Always contains `t`.
pub fn parallel_reducts(t: &Term) -> BTreeSet<Term> {
    let mut out = BTreeSet::new();
    match t {
        Term::Var(_) | Term::Bound(_) | Term::EmptyRec => {
            out.insert(t.clone());
        }
        Term::Lam(h, dom, body) => {
            let bodies = parallel_reducts(body);
            for (d, b) in cartesian(&parallel_reducts_kind(dom), &bodies) {
                out.insert(Term::Lam(h.clone(), Arc::new(d), Arc::new(b)));
            }
            // η: the body reduces to M'(x) with x not free in M'
            for b in &bodies {
                if let Term::App(f, a) = b {
                    if **a == Term::Bound(0) && !f.has_loose(0) {
                        out.insert(f.shift(-1, 0));
                    }
                }
            }
        }
        Term::App(f, a) => {
            let args = parallel_reducts(a);
            for (f2, a2) in cartesian(&parallel_reducts(f), &args) {
                out.insert(Term::App(Arc::new(f2), Arc::new(a2)));
            }
            if let Term::Lam(_, _, body) = &**f {
                for (b2, a2) in cartesian(&parallel_reducts(body), &args) {
                    out.insert(b2.instantiate(&a2));
                }
            }
        }
        Term::RecTypeExt(r, l, a) => {
            for (r2, a2) in cartesian(&parallel_reducts(r), &parallel_reducts(a)) {
                out.insert(Term::RecTypeExt(Arc::new(r2), l.clone(), Arc::new(a2)));
            }
        }
        Term::RecExt(r, l, a, fam) => {
            let rs = parallel_reducts(r);
            let ra = cartesian(&rs, &parallel_reducts(a));
            for fam2 in parallel_reducts(fam) {
                for (r2, a2) in &ra {
                    out.insert(Term::RecExt(Arc::new(r2.clone()), l.clone(), Arc::new(a2.clone()), Arc::new(fam2.clone())));
                }
            }
        }
        Term::Restr(r) => {
            for r2 in parallel_reducts(r) {
                out.insert(Term::Restr(Arc::new(r2)));
            }
            if let Term::RecExt(inner, ..) = &**r {
                out.extend(parallel_reducts(inner));
            }
        }
        Term::Sel(r, l2) => {
            for r2 in parallel_reducts(r) {
                out.insert(Term::Sel(Arc::new(r2), l2.clone()));
            }
            if let Term::RecExt(inner, l, a, _) = &**r {
                if l == l2 {
                    out.extend(parallel_reducts(a));
                } else {
                    for r2 in parallel_reducts(inner) {
                        out.insert(Term::Sel(Arc::new(r2), l2.clone()));
                    }
                }
            }
        }
    }
    out
}

pub fn parallel_reducts_kind(k: &Kind) -> BTreeSet<Kind> {
    let mut out = BTreeSet::new();
    match k {
        Kind::Type | Kind::RType | Kind::RTypeL(_) => {
            out.insert(k.clone());
        }
        Kind::El(t) => {
            for t2 in parallel_reducts(t) {
                out.insert(Kind::El(Arc::new(t2)));
            }
        }
        Kind::Prod(h, d, c) => {
            for (d2, c2) in cartesian(&parallel_reducts_kind(d), &parallel_reducts_kind(c)) {
                out.insert(Kind::Prod(h.clone(), Arc::new(d2), Arc::new(c2)));
            }
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Reduction graphs

/// The finite graph of all `→`-reducts of a root term, nodes quotiented by α
/// (structural equality on the locally nameless representation).
#[derive(Debug, Clone)]
pub struct ReductionGraph {
    pub nodes: Vec<Term>,
    pub edges: Vec<(usize, StepKind, usize)>,
    /// Node 0 is the root.
    pub root: usize,
    /// The reduction sequences from the root were not exhausted: either the
    /// node bound was hit or a cycle makes some sequence infinite.
    pub truncated: bool,
    /// The node bound was hit before the closure was complete.
    pub node_limit_hit: bool,
    index: HashMap<Term, usize>,
    succ: Vec<Vec<(StepKind, usize)>>,
}

/// Breadth-first closure of [`one_step`] from `t`, stopping once more than
/// `node_fuel` distinct terms would be needed. Nodes are α-classes, so a
/// looping term such as `([x:K]x(x))([x:K]x(x))` closes into a finite cyclic
/// graph; it is still reported as truncated because its reduction sequences
/// cannot be exhausted.
pub fn reduction_graph(t: &Term, node_fuel: usize) -> ReductionGraph {
    let mut g = ReductionGraph {
        nodes: vec![t.clone()],
        edges: Vec::new(),
        root: 0,
        truncated: false,
        node_limit_hit: false,
        index: HashMap::from([(t.clone(), 0)]),
        succ: vec![Vec::new()],
    };
    let mut queue = VecDeque::from([0usize]);
    while let Some(i) = queue.pop_front() {
        let reducts = one_step(&g.nodes[i]);
        for (k, u) in reducts {
            let j = match g.index.get(&u) {
                Some(&j) => j,
                None => {
                    if g.nodes.len() >= node_fuel {
                        g.node_limit_hit = true;
                        continue;
                    }
                    let j = g.nodes.len();
                    g.nodes.push(u.clone());
                    g.index.insert(u, j);
                    g.succ.push(Vec::new());
                    queue.push_back(j);
                    j
                }
            };
            g.edges.push((i, k, j));
            g.succ[i].push((k, j));
        }
    }
    g.truncated = g.node_limit_hit || !g.is_acyclic();
    g
}

/// Fixed-width bitset over graph nodes.
#[derive(Clone, PartialEq, Eq)]
pub struct NodeSet(Vec<u64>);

impl NodeSet {
    pub fn new(n: usize) -> Self {
        NodeSet(vec![0; n.div_ceil(64)])
    }
    pub fn insert(&mut self, i: usize) -> bool {
        let (w, b) = (i / 64, 1u64 << (i % 64));
        let fresh = self.0[w] & b == 0;
        self.0[w] |= b;
        fresh
    }
    pub fn contains(&self, i: usize) -> bool {
        self.0[i / 64] & (1u64 << (i % 64)) != 0
    }
    pub fn union_with(&mut self, other: &NodeSet) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a |= b;
        }
    }
    pub fn intersects(&self, other: &NodeSet) -> bool {
        self.0.iter().zip(&other.0).any(|(a, b)| a & b != 0)
    }
    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(w, bits)| (0..64).filter(move |b| bits & (1 << b) != 0).map(move |b| w * 64 + b))
    }
}

impl ReductionGraph {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node_of(&self, t: &Term) -> Option<usize> {
        self.index.get(t).copied()
    }

    pub fn successors(&self, i: usize) -> &[(StepKind, usize)] {
        &self.succ[i]
    }

    /// Nodes without outgoing edges (normal forms, unless truncated).
    pub fn sinks(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.succ[i].is_empty()).collect()
    }

    pub fn is_acyclic(&self) -> bool {
        self.topological_order().is_some()
    }

    /// Sources before targets; `None` on a cycle.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.len();
        let mut indeg = vec![0usize; n];
        for &(_, _, j) in &self.edges {
            indeg[j] += 1;
        }
        let mut ready: Vec<usize> = (0..n).filter(|&i| indeg[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = ready.pop() {
            order.push(i);
            for &(_, j) in &self.succ[i] {
                indeg[j] -= 1;
                if indeg[j] == 0 {
                    ready.push(j);
                }
            }
        }
        (order.len() == n).then_some(order)
    }

    /// Nodes reachable from `start` (inclusive) through edges accepted by `allow`.
    pub fn reachable_from(&self, start: &[usize], allow: impl Fn(StepKind) -> bool) -> NodeSet {
        let mut seen = NodeSet::new(self.len());
        let mut stack: Vec<usize> = start.to_vec();
        for &s in start {
            seen.insert(s);
        }
        while let Some(i) = stack.pop() {
            for &(k, j) in &self.succ[i] {
                if allow(k) && seen.insert(j) {
                    stack.push(j);
                }
            }
        }
        seen
    }

    /// Reflexive-transitive descendants of every node.
    pub fn descendants(&self) -> Vec<NodeSet> {
        let n = self.len();
        match self.topological_order() {
            Some(order) => {
                let mut desc: Vec<NodeSet> = (0..n).map(|_| NodeSet::new(n)).collect();
                for &i in order.iter().rev() {
                    let mut d = NodeSet::new(n);
                    d.insert(i);
                    for &(_, j) in &self.succ[i] {
                        d.union_with(&desc[j]);
                    }
                    desc[i] = d;
                }
                desc
            }
            None => (0..n).map(|i| self.reachable_from(&[i], |_| true)).collect(),
        }
    }

    /// The first pair of nodes without a common reduct, if any.
    pub fn unjoinable_pair(&self) -> Option<(usize, usize)> {
        let desc = self.descendants();
        for i in 0..self.len() {
            for j in (i + 1)..self.len() {
                if !desc[i].intersects(&desc[j]) {
                    return Some((i, j));
                }
            }
        }
        None
    }

    /// Whether `target` is reachable from `from` by βR-steps followed by η-steps.
    pub fn reaches_beta_r_then_eta(&self, from: usize, target: usize) -> bool {
        let phase1 = self.reachable_from(&[from], StepKind::is_beta_r);
        let starts: Vec<usize> = phase1.iter().collect();
        self.reachable_from(&starts, |k| k == StepKind::Eta).contains(target)
    }

    /// Plain-text edge list: one `src -kind-> dst` line per edge, printed terms.
    pub fn to_edge_list(&self) -> String {
        let mut s = String::new();
        for &(i, k, j) in &self.edges {
            s.push_str(&format!("{}  --{}-->  {}\n", self.nodes[i], k, self.nodes[j]));
        }
        s
    }

    /// Structured dump: `node <i> <term>` lines then `edge <i> <kind> <j>` lines.
    pub fn to_dump(&self) -> String {
        let mut s = String::new();
        for (i, t) in self.nodes.iter().enumerate() {
            s.push_str(&format!("node {i} {t}\n"));
        }
        for &(i, k, j) in &self.edges {
            s.push_str(&format!("edge {i} {k} {j}\n"));
        }
        if self.truncated {
            s.push_str("truncated\n");
        }
        s
    }

    pub fn to_serializable(&self) -> GraphDump {
        GraphDump {
            nodes: self.nodes.clone(),
            edges: self.edges.iter().map(|&(i, k, j)| (i, k, j)).collect(),
            truncated: self.truncated,
        }
    }
}

/// Serializable view of a [`ReductionGraph`] (terms as printed strings).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GraphDump {
    pub nodes: Vec<Term>,
    pub edges: Vec<(usize, StepKind, usize)>,
    pub truncated: bool,
}

/// Parses the output of [`ReductionGraph::to_dump`].
pub fn parse_dump(text: &str) -> Result<GraphDump, String> {
    let mut dump = GraphDump { nodes: Vec::new(), edges: Vec::new(), truncated: false };
    for line in text.lines() {
        if line == "truncated" {
            dump.truncated = true;
        } else if let Some(rest) = line.strip_prefix("node ") {
            let (_, term) = rest.split_once(' ').ok_or("malformed node line")?;
            dump.nodes.push(crate::parse::parse_term(term).map_err(|e| e.to_string())?);
        } else if let Some(rest) = line.strip_prefix("edge ") {
            let parts: Vec<&str> = rest.split(' ').collect();
            let [i, k, j] = parts[..] else { return Err(format!("malformed edge line `{line}`")) };
            let k = StepKind::from_name(k).ok_or_else(|| format!("unknown step `{k}`"))?;
            dump.edges.push((i.parse().map_err(|_| "bad index")?, k, j.parse().map_err(|_| "bad index")?));
        } else if !line.is_empty() {
            return Err(format!("unexpected line `{line}`"));
        }
    }
    Ok(dump)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse::parse_term;

    fn t(s: &str) -> Term {
        parse_term(s).unwrap()
    }

    #[test]
    fn root_rules() {
        assert_eq!(root_redex(&t("([x:Type]x)(y)")), Some((StepKind::Beta, t("y"))));
        assert_eq!(root_redex(&t("[<r, l = a : A>]")), Some((StepKind::Pi1, t("r"))));
        assert_eq!(root_redex(&t("<r, l = a : A>.l")), Some((StepKind::Pi2, t("a"))));
        assert_eq!(root_redex(&t("<r, l = a : A>.m")), Some((StepKind::Pi2Prime, t("r.m"))));
        assert_eq!(root_redex(&t("[x:Type]f(x)")), Some((StepKind::Eta, t("f"))));
        assert_eq!(root_redex(&t("[x:Type]x(x)")), None);
        assert_eq!(root_redex(&t("x")), None);
    }

    #[test]
    fn eta_under_binder_shifts() {
        // [y:Type][x:Type]y(x) -> [y:Type]y
        let m = t("[y:Type][x:Type]y(x)");
        let rs: Vec<Term> = one_step(&m).into_iter().map(|(_, r)| r).collect();
        assert_eq!(rs, vec![t("[y:Type]y")]);
    }

    #[test]
    fn compatible_closure() {
        assert!(one_step(&t("x")).is_empty());
        let rs: BTreeSet<Term> = one_step(&t("([x:K]x)(([y:K]y)(z))")).into_iter().map(|(_, r)| r).collect();
        assert_eq!(rs, BTreeSet::from([t("([x:K]x)(z)"), t("([y:K]y)(z)")]));
        let rs: Vec<Term> = one_step(&t("<<>, l = ([x:K]x)(a) : A>")).into_iter().map(|(_, r)| r).collect();
        assert_eq!(rs, vec![t("<<>, l = a : A>")]);
        // inside a kind annotation
        let rs: Vec<Term> = one_step(&t("[z:El(([x:Type]x)(T))]z")).into_iter().map(|(_, r)| r).collect();
        assert_eq!(rs, vec![t("[z:El(T)]z")]);
    }

    #[test]
    fn strategies_and_fuel() {
        assert_eq!(normalize_untyped(&t("([x:K]x)(y)"), 10), (t("y"), false));
        assert_eq!(normalize_untyped(&t("<<>, l = a : A>.l"), 1), (t("a"), false));
        let omega = t("([x:K]x(x))([x:K]x(x))");
        assert!(normalize_untyped(&omega, 50).1);
        let m = t("([x:K]f(x)(x))(([y:K]y)(z))");
        let lo = normalize_with(&m, 100, Strategy::LeftmostOutermost);
        let ri = normalize_with(&m, 100, Strategy::RightmostInnermost);
        assert_eq!(lo, ri);
        assert_eq!(lo.0, t("f(z)(z)"));
    }

    #[test]
    fn normal_form_predicates() {
        assert!(is_whnf(&t("[x:K]x")));
        assert!(!is_whnf(&t("[<r, l = a : A>]")));
        assert!(is_whnf(&t("x.l")));
        assert!(is_whnf(&t("f(([x:K]x)(y))")));
        assert!(!is_normal(&t("f(([x:K]x)(y))")));
        assert!(!is_normal(&t("[x:K]f(x)")));
        assert!(is_normal(&t("<<>, l = x : [y:El(<>)]T>")));
        assert!(is_normal(&t("<<>, l : [_:El(<>)]T>")));
    }

    #[test]
    fn parallel() {
        assert_eq!(parallel_reducts(&t("x")), BTreeSet::from([t("x")]));
        let p = parallel_reducts(&t("([x:K]x)(y)"));
        assert!(p.contains(&t("([x:K]x)(y)")) && p.contains(&t("y")));
        assert!(parallel_reducts(&t("([x:K]x)(([y:K]y)(z))")).contains(&t("z")));
        let p = parallel_reducts(&t("<<r, l = a : A>, m = b : B>.l"));
        assert!(p.contains(&t("<r, l = a : A>.l")) && !p.contains(&t("a")));
    }

    #[test]
    fn graphs() {
        let g = reduction_graph(&t("y"), 100);
        assert_eq!((g.len(), g.edges.len()), (1, 0));
        let g = reduction_graph(&t("([x:K]x)(y)"), 100);
        assert_eq!((g.len(), g.edges.len()), (2, 1));
        assert!(g.is_acyclic() && g.unjoinable_pair().is_none());
        let g = reduction_graph(&t("([x:K]x(x))([x:K]x(x))"), 100);
        assert!(g.truncated && !g.node_limit_hit);
        assert!(!g.is_acyclic());
        let grow = t("([x:K]x(x)(x))([x:K]x(x)(x))");
        let g = reduction_graph(&grow, 50);
        assert!(g.truncated && g.node_limit_hit);
    }

    #[test]
    fn dump_round_trip() {
        let g = reduction_graph(&t("([x:K]x)(([y:K]y)(z))"), 100);
        let d = parse_dump(&g.to_dump()).unwrap();
        assert_eq!(d, g.to_serializable());
    }
}
