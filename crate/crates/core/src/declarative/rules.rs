//! Node-by-node checking of derivations.

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::build::{conclude, Params};
use super::{DeclRule, Derivation, Judgement, SystemVariant};
use crate::syntax::{Kind, Term};

/// Why a derivation fails, located by the premise path from the root
/// (`[]` is the root, `[1, 0]` the first premise of its second premise).
#[derive(Debug, Clone, PartialEq, Eq, Error, Serialize, Deserialize)]
pub struct DeclError {
    pub path: Vec<usize>,
    pub rule: String,
    pub conclusion: String,
    /// The premise, conclusion part or side condition at fault.
    pub slot: String,
    pub message: String,
}

impl fmt::Display for DeclError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let path: Vec<String> = self.path.iter().map(|i| (i + 1).to_string()).collect();
        let at = if path.is_empty() { "root".to_string() } else { format!("node {}", path.join(".")) };
        write!(f, "{at} ({} concluding `{}`): {}: {}", self.rule, self.conclusion, self.slot, self.message)
    }
}

/// Reads the parameters a conclusion carries for its rule.
fn params_of(rule: DeclRule, c: &Judgement) -> Params {
    use DeclRule::*;
    let mut p = Params::default();
    match (rule, c) {
        (CtxExt, Judgement::CtxValid(g)) => p.name = g.entries().last().map(|(x, _)| x.clone()),
        (Var, Judgement::HasKind(_, Term::Var(x), _)) => p.name = Some(x.clone()),
        (RTypeLKind, Judgement::KindWf(_, Kind::RTypeL(l))) => p.labels = Some(l.clone()),
        (RTypeLSub, Judgement::HasKind(_, _, Kind::RTypeL(l))) => p.labels = Some(l.clone()),
        (RecTypeForm, Judgement::HasKind(_, Term::RecTypeExt(_, l, _), _)) => p.label = Some(l.clone()),
        (RecTypeEq, Judgement::TermEq(_, Term::RecTypeExt(_, l, _), _, _)) => p.label = Some(l.clone()),
        (RecEq, Judgement::TermEq(_, Term::RecExt(_, l, _, _), _, _)) => p.label = Some(l.clone()),
        _ => {}
    }
    p
}

struct Checker {
    variant: SystemVariant,
    done: HashSet<*const Derivation>,
}

impl Checker {
    fn node(&mut self, d: &Arc<Derivation>, path: &mut Vec<usize>) -> Result<(), DeclError> {
        if self.done.contains(&Arc::as_ptr(d)) {
            return Ok(());
        }
        let fail = |path: &Vec<usize>, slot: String, message: String| DeclError {
            path: path.clone(),
            rule: d.rule.name().to_string(),
            conclusion: d.conclusion.to_string(),
            slot,
            message,
        };
        if !self.variant.permits(d.rule) {
            return Err(fail(path, "rule".into(), "rule excluded in IDRT⁻".into()));
        }
        let premises: Vec<&Judgement> = d.premises.iter().map(|p| &p.conclusion).collect();
        let expected = conclude(d.rule, &premises, &params_of(d.rule, &d.conclusion)).map_err(|(s, m)| fail(path, s, m))?;
        if expected != d.conclusion {
            return Err(fail(path, "conclusion".into(), format!("the rule yields `{expected}`")));
        }
        for (i, p) in d.premises.iter().enumerate() {
            path.push(i);
            self.node(p, path)?;
            path.pop();
        }
        self.done.insert(Arc::as_ptr(d));
        Ok(())
    }
}

/// Checks every node of `d` against the rules of `variant`. Shared subtrees
/// are checked once.
pub fn check_derivation(d: &Arc<Derivation>, variant: SystemVariant) -> Result<(), DeclError> {
    Checker { variant, done: HashSet::new() }.node(d, &mut Vec::new())
}

/// How often each rule occurs in a derivation (shared nodes counted once).
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeclRuleCounts(pub BTreeMap<DeclRule, u64>);

impl DeclRuleCounts {
    pub fn get(&self, r: DeclRule) -> u64 {
        self.0.get(&r).copied().unwrap_or(0)
    }

    pub fn merge(&mut self, other: &DeclRuleCounts) {
        for (r, n) in &other.0 {
            *self.0.entry(*r).or_default() += n;
        }
    }

    /// Rules of `among` never used.
    pub fn missing(&self, among: &[DeclRule]) -> Vec<DeclRule> {
        among.iter().copied().filter(|r| self.get(*r) == 0).collect()
    }
}

pub fn rule_usage(d: &Arc<Derivation>) -> DeclRuleCounts {
    let mut c = DeclRuleCounts::default();
    d.for_each_node(|n| *c.0.entry(n.rule).or_default() += 1);
    c
}
