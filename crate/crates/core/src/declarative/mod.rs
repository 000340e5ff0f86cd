//! Declarative IDRT: judgements, explicit derivation trees, a node-by-node
//! derivation checker, a textual script format and automatic construction of
//! derivations from evaluator runs.

mod auto;
pub mod build;
mod rules;
mod script;

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::print::{context_to_string, kind_in_context, term_in_context};
use crate::syntax::{Context, Kind, Term};

pub use auto::{derivation_depth, derive_auto, AutoDeriver};
pub use build::{BuildError, Params};
pub use rules::{check_derivation, rule_usage, DeclError, DeclRuleCounts};
pub use script::{parse_judgement, parse_script, print_script, ScriptError};

/// The five judgement forms.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Judgement {
    /// `Γ valid`
    CtxValid(Context),
    /// `Γ ⊢ K kind`
    KindWf(Context, Kind),
    /// `Γ ⊢ K = K'`
    KindEq(Context, Kind, Kind),
    /// `Γ ⊢ k : K`
    HasKind(Context, Term, Kind),
    /// `Γ ⊢ k = k' : K`
    TermEq(Context, Term, Term, Kind),
}

impl Judgement {
    pub fn context(&self) -> &Context {
        match self {
            Judgement::CtxValid(g)
            | Judgement::KindWf(g, _)
            | Judgement::KindEq(g, _, _)
            | Judgement::HasKind(g, _, _)
            | Judgement::TermEq(g, _, _, _) => g,
        }
    }

    /// The schematic shape of this judgement form.
    pub fn form(&self) -> &'static str {
        match self {
            Judgement::CtxValid(_) => "Γ valid",
            Judgement::KindWf(..) => "Γ ⊢ K kind",
            Judgement::KindEq(..) => "Γ ⊢ K = K'",
            Judgement::HasKind(..) => "Γ ⊢ k : K",
            Judgement::TermEq(..) => "Γ ⊢ k = k' : K",
        }
    }
}

impl fmt::Display for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let g = self.context();
        let gs = context_to_string(g);
        match self {
            Judgement::CtxValid(_) => write!(f, "{gs} |- valid"),
            Judgement::KindWf(_, k) => write!(f, "{gs} |- {} kind", kind_in_context(g, k)),
            Judgement::KindEq(_, a, b) => write!(f, "{gs} |- {} = {}", kind_in_context(g, a), kind_in_context(g, b)),
            Judgement::HasKind(_, m, k) => write!(f, "{gs} |- {} : {}", term_in_context(g, m), kind_in_context(g, k)),
            Judgement::TermEq(_, m, n, k) => write!(
                f,
                "{gs} |- {} = {} : {}",
                term_in_context(g, m),
                term_in_context(g, n),
                kind_in_context(g, k)
            ),
        }
    }
}

impl fmt::Debug for Judgement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

macro_rules! decl_rules {
    ($($v:ident => $name:literal),* $(,)?) => {
        /// Every rule of the declarative system, individually named.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
        pub enum DeclRule { $($v),* }

        impl DeclRule {
            pub const ALL: &'static [DeclRule] = &[$(DeclRule::$v),*];

            pub fn name(self) -> &'static str {
                match self { $(DeclRule::$v => $name),* }
            }

            pub fn from_name(s: &str) -> Option<DeclRule> {
                match s { $($name => Some(DeclRule::$v),)* _ => None }
            }
        }
    };
}

decl_rules! {
    // LF: contexts and assumptions
    CtxEmpty => "CtxEmpty",
    CtxExt => "CtxExt",
    Var => "Var",
    // general equality
    KindRefl => "KindRefl",
    KindSym => "KindSym",
    KindTrans => "KindTrans",
    TermRefl => "TermRefl",
    TermSym => "TermSym",
    TermTrans => "TermTrans",
    // equality typing
    Conv => "Conv",
    ConvEq => "ConvEq",
    // substitution
    SubstCtx => "SubstCtx",
    SubstKind => "SubstKind",
    SubstKindEqArg => "SubstKindEqArg",
    SubstTerm => "SubstTerm",
    SubstTermEqArg => "SubstTermEqArg",
    SubstKindEq => "SubstKindEq",
    SubstTermEq => "SubstTermEq",
    // Type and products
    TypeKind => "TypeKind",
    ElKind => "ElKind",
    ElEq => "ElEq",
    ProdKind => "ProdKind",
    ProdEq => "ProdEq",
    Lam => "Lam",
    LamEq => "LamEq",
    App => "App",
    AppEq => "AppEq",
    Beta => "Beta",
    Eta => "Eta",
    // kinds of record types
    RTypeKind => "RTypeKind",
    RTypeLKind => "RTypeLKind",
    RTypeLSub => "RTypeLSub",
    RTypeLToRType => "RTypeLToRType",
    RTypeToType => "RTypeToType",
    // formation, introduction, elimination
    EmptyRecType => "EmptyRecType",
    RecTypeForm => "RecTypeForm",
    EmptyRec => "EmptyRec",
    RecIntro => "RecIntro",
    Restr => "Restr",
    Sel => "Sel",
    SelOther => "SelOther",
    // computation
    RestrComp => "RestrComp",
    SelComp => "SelComp",
    SelOtherComp => "SelOtherComp",
    // congruence
    EmptyRecTypeEq => "EmptyRecTypeEq",
    RecTypeEq => "RecTypeEq",
    EmptyRecEq => "EmptyRecEq",
    RecEq => "RecEq",
    RestrEq => "RestrEq",
    SelEq => "SelEq",
}

impl DeclRule {
    /// The seven substitution rules, absent from the restricted system.
    pub fn is_substitution(self) -> bool {
        matches!(
            self,
            DeclRule::SubstCtx
                | DeclRule::SubstKind
                | DeclRule::SubstKindEqArg
                | DeclRule::SubstTerm
                | DeclRule::SubstTermEqArg
                | DeclRule::SubstKindEq
                | DeclRule::SubstTermEq
        )
    }

    /// Rules added for record types (the rest are the LF rules).
    pub fn is_record_rule(self) -> bool {
        (self as usize) >= (DeclRule::RTypeKind as usize)
    }

    pub fn arity(self) -> usize {
        use DeclRule::*;
        match self {
            CtxEmpty => 0,
            CtxExt | Var | KindRefl | KindSym | TermRefl | TermSym | TypeKind | ElKind | ElEq | Lam | Eta => 1,
            RTypeKind | RTypeLKind | RTypeLSub | RTypeLToRType | RTypeToType | EmptyRecType | EmptyRec => 1,
            Restr | Sel | RestrComp | SelComp | EmptyRecTypeEq | EmptyRecEq | RestrEq | SelEq => 1,
            KindTrans | TermTrans | Conv | ConvEq | ProdKind | ProdEq | LamEq | App | AppEq | Beta => 2,
            SubstCtx | SubstKind | SubstKindEqArg | SubstTerm | SubstTermEqArg | SubstKindEq | SubstTermEq => 2,
            RecTypeForm | SelOther | SelOtherComp | RecTypeEq => 2,
            RecIntro => 3,
            RecEq => 4,
        }
    }
}

impl fmt::Display for DeclRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Which rule set a derivation is checked against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SystemVariant {
    FullIDRT,
    /// Without the seven substitution rules.
    IDRTMinus,
}

impl SystemVariant {
    pub fn permits(self, r: DeclRule) -> bool {
        self == SystemVariant::FullIDRT || !r.is_substitution()
    }
}

/// A derivation node. Premises are shared, so a derivation is a DAG.
#[derive(Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Derivation {
    pub rule: DeclRule,
    pub conclusion: Judgement,
    pub premises: Vec<Arc<Derivation>>,
    /// Free-form note on the side condition, for printing only.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub side: Option<String>,
}

impl Derivation {
    pub fn new(rule: DeclRule, conclusion: Judgement, premises: Vec<Arc<Derivation>>) -> Arc<Derivation> {
        Arc::new(Derivation { rule, conclusion, premises, side: None })
    }

    /// Number of distinct nodes (shared subtrees counted once).
    pub fn node_count(self: &Arc<Self>) -> usize {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(d) = stack.pop() {
            if seen.insert(Arc::as_ptr(&d)) {
                stack.extend(d.premises.iter().cloned());
            }
        }
        seen.len()
    }

    /// Visits each distinct node once.
    pub fn for_each_node(self: &Arc<Self>, mut f: impl FnMut(&Derivation)) {
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![self.clone()];
        while let Some(d) = stack.pop() {
            if seen.insert(Arc::as_ptr(&d)) {
                f(&d);
                stack.extend(d.premises.iter().cloned());
            }
        }
    }

    /// Height of the tree.
    pub fn height(self: &Arc<Self>) -> usize {
        fn go(d: &Arc<Derivation>, memo: &mut std::collections::HashMap<*const Derivation, usize>) -> usize {
            if let Some(&h) = memo.get(&Arc::as_ptr(d)) {
                return h;
            }
            let h = 1 + d.premises.iter().map(|p| go(p, memo)).max().unwrap_or(0);
            memo.insert(Arc::as_ptr(d), h);
            h
        }
        go(self, &mut Default::default())
    }
}

impl fmt::Debug for Derivation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} ⊢ {} ({} premises)", self.rule, self.conclusion, self.premises.len())
    }
}

#[cfg(test)]
mod tests;
