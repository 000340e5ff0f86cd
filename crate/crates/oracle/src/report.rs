use std::fmt;

use serde::{Deserialize, Serialize};

/// The executable meta-theorems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Property {
    Determinacy,
    AdequacyReduction,
    AdequacyForms,
    PSR,
    SubjectReduction,
    ChurchRosser,
    StrongNormalization,
    SoundnessBridge,
    CompletenessBridge,
    Weakening,
    Strengthening,
    ContextValidity,
}

impl Property {
    pub const ALL: [Property; 12] = [
        Property::Determinacy,
        Property::AdequacyReduction,
        Property::AdequacyForms,
        Property::PSR,
        Property::SubjectReduction,
        Property::ChurchRosser,
        Property::StrongNormalization,
        Property::SoundnessBridge,
        Property::CompletenessBridge,
        Property::Weakening,
        Property::Strengthening,
        Property::ContextValidity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::Determinacy => "Determinacy",
            Property::AdequacyReduction => "AdequacyReduction",
            Property::AdequacyForms => "AdequacyForms",
            Property::PSR => "PSR",
            Property::SubjectReduction => "SubjectReduction",
            Property::ChurchRosser => "ChurchRosser",
            Property::StrongNormalization => "StrongNormalization",
            Property::SoundnessBridge => "SoundnessBridge",
            Property::CompletenessBridge => "CompletenessBridge",
            Property::Weakening => "Weakening",
            Property::Strengthening => "Strengthening",
            Property::ContextValidity => "ContextValidity",
        }
    }

    pub fn from_name(s: &str) -> Option<Property> {
        Property::ALL.into_iter().find(|p| p.name().eq_ignore_ascii_case(s))
    }

    /// The structural properties, run together by the structural suite.
    pub fn is_structural(self) -> bool {
        matches!(self, Property::Weakening | Property::Strengthening | Property::ContextValidity)
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// One counterexample.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Failure {
    pub input: String,
    pub expected: String,
    pub got: String,
}

impl Failure {
    pub fn new(input: impl Into<String>, expected: impl Into<String>, got: impl Into<String>) -> Self {
        Failure { input: input.into(), expected: expected.into(), got: got.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PropertyReport {
    pub property: Property,
    pub instances_checked: u64,
    /// In corpus order.
    pub failures: Vec<Failure>,
}

impl PropertyReport {
    pub fn new(property: Property) -> Self {
        PropertyReport { property, instances_checked: 0, failures: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    /// Adds the outcome of one instance.
    pub fn record(&mut self, failure: Option<Failure>) {
        self.instances_checked += 1;
        self.failures.extend(failure);
    }

    /// Appends `other` (same property); merging is associative.
    pub fn merge(&mut self, other: PropertyReport) {
        debug_assert_eq!(self.property, other.property);
        self.instances_checked += other.instances_checked;
        self.failures.extend(other.failures);
    }

    /// Summary line plus the first `shown` failures.
    pub fn to_text(&self, shown: usize) -> String {
        let mut s = format!(
            "{:<20} {:>9} instances  {:>7} failures  {}\n",
            self.property.name(),
            self.instances_checked,
            self.failures.len(),
            if self.passed() { "PASS" } else { "FAIL" }
        );
        for f in self.failures.iter().take(shown) {
            s.push_str(&format!("    input:    {}\n    expected: {}\n    got:      {}\n", f.input, f.expected, f.got));
        }
        if self.failures.len() > shown {
            s.push_str(&format!("    ... {} more\n", self.failures.len() - shown));
        }
        s
    }
}

impl fmt::Display for PropertyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text(3))
    }
}
