use idrt_core::{Label, LabelSet};
use serde::{Deserialize, Serialize};

/// Bounds of the enumeration. Everything downstream is a deterministic
/// function of this value.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnumConfig {
    /// Largest term (node count, kinds inside abstractions included).
    pub max_term_size: usize,
    /// Longest base context.
    pub max_context_len: usize,
    /// Labels used for selection and record (type) extension.
    #[serde(with = "label_list")]
    pub base_labels: LabelSet,
    /// Opaque type constants `T`, `U`, ... available to the contexts.
    pub base_types: usize,
    /// Seed of the randomized supplement.
    pub seed: u64,
    /// Up to this size every raw term is listed, ill-typed ones included.
    /// Above it only terms built from accepted subterms are listed.
    pub raw_size: usize,
    /// Number of random larger terms added to the corpus.
    pub random_samples: usize,
    /// Largest size of a random term.
    pub random_max_size: usize,
    /// Node bound for reduction graphs.
    pub graph_fuel: usize,
    /// Step bound for the untyped strategies.
    pub reduction_fuel: usize,
    /// Depth bound for automatic derivations.
    pub derive_depth: usize,
}

impl Default for EnumConfig {
    fn default() -> Self {
        EnumConfig {
            max_term_size: 8,
            max_context_len: 4,
            base_labels: ["k", "l", "m"].into_iter().map(Label::new).collect(),
            base_types: 2,
            seed: 0x1d27,
            raw_size: 4,
            random_samples: 200,
            random_max_size: 12,
            graph_fuel: 4096,
            reduction_fuel: 10_000,
            derive_depth: 20,
        }
    }
}

impl EnumConfig {
    /// A small configuration for quick checks.
    pub fn small() -> Self {
        EnumConfig { max_term_size: 5, raw_size: 3, random_samples: 20, random_max_size: 8, ..EnumConfig::default() }
    }

    pub fn validate(&self) -> Result<(), String> {
        let positive = [
            ("max_term_size", self.max_term_size),
            ("max_context_len", self.max_context_len),
            ("base_types", self.base_types),
            ("raw_size", self.raw_size),
            ("graph_fuel", self.graph_fuel),
            ("reduction_fuel", self.reduction_fuel),
            ("derive_depth", self.derive_depth),
        ];
        for (name, v) in positive {
            if v == 0 {
                return Err(format!("{name} must be positive"));
            }
        }
        if self.base_labels.is_empty() {
            return Err("base_labels must not be empty".into());
        }
        if self.raw_size > self.max_term_size {
            return Err("raw_size must not exceed max_term_size".into());
        }
        Ok(())
    }
}

mod label_list {
    use idrt_core::{Label, LabelSet};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    pub fn serialize<S: Serializer>(l: &LabelSet, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<&str> = l.iter().map(Label::as_str).collect();
        v.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<LabelSet, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        Ok(v.iter().map(|s| Label::new(s)).collect())
    }
}
