use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const DEFAULT_REGISTRY: &str = include_str!("../../assets/domains.json");

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DomainLabel(pub String);

impl DomainLabel {
    pub fn new(label: impl Into<String>) -> Self {
        DomainLabel(label.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for DomainLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl From<&str> for DomainLabel {
    fn from(s: &str) -> Self {
        DomainLabel(s.to_owned())
    }
}

#[derive(Debug, Error)]
pub enum RegistryError {
    #[error("domain registry is empty")]
    Empty,
    #[error("duplicate domain label `{0}`")]
    Duplicate(String),
    #[error("invalid domain registry: {0}")]
    Parse(#[from] serde_json::Error),
}

/// The fixed set of `n` domains every matrix is indexed by.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct DomainRegistry {
    labels: Vec<DomainLabel>,
}

impl DomainRegistry {
    pub fn new<I, S>(labels: I) -> Result<Self, RegistryError>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<DomainLabel> = labels.into_iter().map(|s| DomainLabel(s.into())).collect();
        if labels.is_empty() {
            return Err(RegistryError::Empty);
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(RegistryError::Duplicate(l.0.clone()));
            }
        }
        Ok(DomainRegistry { labels })
    }

    /// Parses a JSON array of label strings.
    pub fn from_json(src: &str) -> Result<Self, RegistryError> {
        let labels: Vec<String> = serde_json::from_str(src)?;
        Self::new(labels)
    }

    pub fn labels(&self) -> &[DomainLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn contains(&self, label: &DomainLabel) -> bool {
        self.labels.contains(label)
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l.as_str() == label)
    }
}

impl Default for DomainRegistry {
    /// The shipped 23-domain registry.
    fn default() -> Self {
        Self::from_json(DEFAULT_REGISTRY).expect("shipped registry is valid")
    }
}

impl<'de> Deserialize<'de> for DomainRegistry {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let labels = Vec::<String>::deserialize(d)?;
        DomainRegistry::new(labels).map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_has_23_distinct_domains() {
        let r = DomainRegistry::default();
        assert_eq!(r.len(), 23);
        for l in ["sports", "education", "real estate", "law, govt and politics"] {
            assert!(r.position(l).is_some(), "{l}");
        }
    }

    #[test]
    fn rejects_duplicates_and_empty() {
        assert!(matches!(DomainRegistry::new(["a", "a"]), Err(RegistryError::Duplicate(_))));
        assert!(matches!(DomainRegistry::new(Vec::<String>::new()), Err(RegistryError::Empty)));
        assert!(DomainRegistry::from_json(r#"["x","y"]"#).is_ok());
    }
}
