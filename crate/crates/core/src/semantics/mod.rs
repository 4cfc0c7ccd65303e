//! Taxonomy and sentiment inference behind a swappable provider contract.

mod lexicon;
mod registry;
mod resolver;

use serde::{Deserialize, Serialize};

pub use lexicon::{Lexicon, LexiconError, LexiconProvider, SentimentLexicon};
pub use registry::{DomainLabel, DomainRegistry, RegistryError};
pub use resolver::{FixtureResolver, NullResolver, ResolveError, UrlResolver};

/// At most this many assignments are returned per classified text.
pub const MAX_ASSIGNMENTS: usize = 3;

/// One inferred domain for a text, with a score in `[0, 1]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TaxonomyAssignment {
    pub domain: DomainLabel,
    pub score: f64,
    pub confident: bool,
}

/// Signed sentiment in `[-1, 1]`; zero is neutral.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct SentimentScore(f64);

impl SentimentScore {
    pub const NEUTRAL: SentimentScore = SentimentScore(0.0);

    /// Clamps into `[-1, 1]`; NaN maps to neutral.
    pub fn new(value: f64) -> Self {
        if value.is_nan() {
            Self::NEUTRAL
        } else {
            SentimentScore(value.clamp(-1.0, 1.0))
        }
    }

    pub fn value(self) -> f64 {
        self.0
    }

    pub fn is_positive(self) -> bool {
        self.0 > 0.0
    }

    pub fn is_negative(self) -> bool {
        self.0 < 0.0
    }
}

/// Domain and sentiment inference used by cleansing and scoring.
///
/// Implementations must be deterministic and safe to share between threads.
pub trait SemanticsProvider: Send + Sync {
    /// Zero to three assignments with distinct domains. An empty list means
    /// no domain could be inferred.
    fn classify_text(&self, text: &str) -> Vec<TaxonomyAssignment>;

    fn sentiment(&self, text: &str) -> SentimentScore;

    fn is_english(&self, text: &str) -> bool;

    /// Classifies the content behind `url`. Resolution failures are logged
    /// and yield no assignments.
    fn classify_url(&self, url: &str, resolver: &dyn UrlResolver) -> Vec<TaxonomyAssignment> {
        let parsed = match url::Url::parse(url) {
            Ok(u) => u,
            Err(e) => {
                log::debug!("skipping invalid url {url}: {e}");
                return Vec::new();
            }
        };
        match resolver.resolve(&parsed) {
            Ok(content) => self.classify_text(&content),
            Err(e) => {
                log::debug!("could not resolve {url}: {e}");
                Vec::new()
            }
        }
    }
}
