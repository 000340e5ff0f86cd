//! Bounded enumeration of contexts and terms, brute-force reduction analysis
//! and the executable meta-theorem suites over them.
//!
//! A [`Corpus`] is built once from an [`EnumConfig`]; every property then
//! runs over its accepted items and reports the instances it checked and
//! the counterexamples it met. [`run_suite`] runs everything and adds the
//! rule-coverage counts.

pub mod config;
pub mod curated;
pub mod enumerate;
pub mod props;
pub mod report;

use std::collections::BTreeMap;

use idrt_core::declarative::{DeclRule, DeclRuleCounts};
use idrt_core::tos::Rule;
use serde::{Deserialize, Serialize};

pub use config::EnumConfig;
pub use enumerate::{enumerate, BaseContext, Corpus, CorpusItem, Evaluated, Origin};
pub use props::run_property_on;
pub use report::{Failure, Property, PropertyReport};

/// Builds the corpus for `cfg` and runs `p` over it.
pub fn run_property(p: Property, cfg: &EnumConfig) -> PropertyReport {
    run_property_on(p, &Corpus::build(cfg))
}

/// Weakening, strengthening and context validity.
pub fn structural_suite(cfg: &EnumConfig) -> Vec<PropertyReport> {
    let corpus = Corpus::build(cfg);
    [Property::Weakening, Property::Strengthening, Property::ContextValidity]
        .into_iter()
        .map(|p| run_property_on(p, &corpus))
        .collect()
}

/// How often each rule was exercised.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Coverage {
    /// Evaluator rules fired while evaluating the corpus.
    pub evaluator: BTreeMap<String, u64>,
    /// Declarative rules used by the curated and automatic derivations that
    /// were checked.
    pub declarative: BTreeMap<String, u64>,
}

impl Coverage {
    fn new(tos: &idrt_core::tos::RuleCounts, decl: &DeclRuleCounts) -> Self {
        Coverage {
            evaluator: tos.iter().map(|(r, n)| (r.name().to_string(), n)).collect(),
            declarative: DeclRule::ALL.iter().map(|r| (r.name().to_string(), decl.get(*r))).collect(),
        }
    }

    pub fn missing_evaluator(&self) -> Vec<String> {
        Rule::ALL.iter().map(|r| r.name().to_string()).filter(|n| self.evaluator.get(n).copied().unwrap_or(0) == 0).collect()
    }

    pub fn missing_declarative(&self) -> Vec<String> {
        DeclRule::ALL
            .iter()
            .map(|r| r.name().to_string())
            .filter(|n| self.declarative.get(n).copied().unwrap_or(0) == 0)
            .collect()
    }

    pub fn complete(&self) -> bool {
        self.missing_evaluator().is_empty() && self.missing_declarative().is_empty()
    }

    pub fn to_text(&self) -> String {
        let mut s = String::from("evaluator rules:\n");
        for (r, n) in &self.evaluator {
            s.push_str(&format!("  {r:<12} {n}\n"));
        }
        s.push_str("declarative rules:\n");
        for (r, n) in &self.declarative {
            s.push_str(&format!("  {r:<16} {n}\n"));
        }
        s
    }
}

/// Everything the suite found.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub config: EnumConfig,
    pub corpus_items: u64,
    pub accepted_items: u64,
    pub reports: Vec<PropertyReport>,
    pub coverage: Coverage,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.reports.iter().all(PropertyReport::passed) && self.coverage.complete()
    }

    pub fn report(&self, p: Property) -> Option<&PropertyReport> {
        self.reports.iter().find(|r| r.property == p)
    }

    /// Human table: one line per property, then the coverage verdict.
    pub fn to_text(&self, shown: usize) -> String {
        let mut s = format!("corpus: {} items, {} accepted\n", self.corpus_items, self.accepted_items);
        for r in &self.reports {
            s.push_str(&r.to_text(shown));
        }
        let (me, md) = (self.coverage.missing_evaluator(), self.coverage.missing_declarative());
        if me.is_empty() && md.is_empty() {
            s.push_str("rule coverage: complete\n");
        } else {
            s.push_str(&format!("rule coverage: missing evaluator {me:?}, declarative {md:?}\n"));
        }
        s
    }
}

/// Runs `props` (all of them when empty) over one corpus. Coverage counts
/// declarative rules only from the bridges that ran.
pub fn run_selected(corpus: &Corpus, props: &[Property]) -> SuiteReport {
    let selected: Vec<Property> = if props.is_empty() { Property::ALL.to_vec() } else { props.to_vec() };
    let mut decl = DeclRuleCounts::default();
    let mut reports = Vec::new();
    for p in Property::ALL.into_iter().filter(|p| selected.contains(p)) {
        let r = match p {
            Property::SoundnessBridge => {
                let (r, c) = props::soundness_bridge();
                decl.merge(&c);
                r
            }
            Property::CompletenessBridge => {
                let (r, c) = props::completeness_bridge(corpus);
                decl.merge(&c);
                r
            }
            other => run_property_on(other, corpus),
        };
        reports.push(r);
    }
    SuiteReport {
        config: corpus.config.clone(),
        corpus_items: corpus.items.len() as u64,
        accepted_items: corpus.accepted_count() as u64,
        reports,
        coverage: Coverage::new(&corpus.tos_counts, &decl),
    }
}

/// The full suite at `cfg`.
pub fn run_suite(cfg: &EnumConfig) -> SuiteReport {
    run_selected(&Corpus::build(cfg), &[])
}
