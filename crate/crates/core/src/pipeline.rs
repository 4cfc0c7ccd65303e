//! Whole-run configuration and the fixed stage order
//! ingest -> cleanse -> partition -> score.
//!
//! The configuration document is a JSON object carrying the credibility
//! fields at top level, plus optional `cleansing` and `resources` objects:
//!
//! ```json
//! {
//!   "rho": 2.0,
//!   "window": 6,
//!   "period": "month",
//!   "weights": {"alpha": 0.2, "beta": 0.2, "gamma": 0.2, "delta": 0.1, "theta": 0.1, "vartheta": 0.2},
//!   "cleansing": {"min_posts": 50},
//!   "resources": {"domain_registry": "domains.json"}
//! }
//! ```
//!
//! Relative resource paths resolve against the configuration file's directory.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{cleanse, partition, CleansingConfig, CleansingReport, Corpus, TimeChunk};
use crate::credibility::{ConfigError, CredibilityConfig, CredibilityError, Scorer, WindowScores};
use crate::semantics::{DomainRegistry, FixtureResolver, Lexicon, LexiconProvider, SentimentLexicon, UrlResolver};
use crate::text::Stopwords;

#[derive(Debug, Error)]
pub enum PipelineError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("configuration: {0}")]
    Document(String),
    #[error("{path}: {message}")]
    Resource { path: PathBuf, message: String },
    #[error(transparent)]
    Credibility(#[from] CredibilityError),
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ResourcePaths {
    pub domain_registry: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    pub sentiment_lexicon: Option<PathBuf>,
    pub stopwords: Option<PathBuf>,
    /// JSON object `{url: text}` served by the URL resolver.
    pub url_fixtures: Option<PathBuf>,
}

impl ResourcePaths {
    fn resolve(&mut self, base: &Path) {
        for p in [
            &mut self.domain_registry,
            &mut self.lexicon,
            &mut self.sentiment_lexicon,
            &mut self.stopwords,
            &mut self.url_fixtures,
        ]
        .into_iter()
        .flatten()
        {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PipelineConfig {
    #[serde(flatten)]
    pub credibility: CredibilityConfig,
    pub cleansing: CleansingConfig,
    pub resources: ResourcePaths,
}

impl PipelineConfig {
    /// Parses and validates a configuration document. Unknown top-level
    /// keys are rejected.
    pub fn from_json(src: &str) -> Result<Self, PipelineError> {
        let value: serde_json::Value = serde_json::from_str(src).map_err(|e| PipelineError::Document(e.to_string()))?;
        let obj = value
            .as_object()
            .ok_or_else(|| PipelineError::Document("expected a JSON object".into()))?;
        let known = serde_json::to_value(PipelineConfig::default()).expect("default config serializes");
        let known = known.as_object().expect("config is an object");
        if let Some(k) = obj.keys().find(|k| !known.contains_key(*k)) {
            return Err(PipelineError::Document(format!("unknown field `{k}`")));
        }
        let cfg: PipelineConfig = serde_json::from_value(value).map_err(|e| PipelineError::Document(e.to_string()))?;
        cfg.credibility.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: &Path) -> Result<Self, PipelineError> {
        let src = fs::read_to_string(path).map_err(|e| PipelineError::Resource {
            path: path.to_owned(),
            message: e.to_string(),
        })?;
        let mut cfg = Self::from_json(&src).map_err(|e| match e {
            PipelineError::Document(m) => PipelineError::Document(format!("{}: {m}", path.display())),
            other => other,
        })?;
        cfg.resources.resolve(path.parent().unwrap_or(Path::new(".")));
        Ok(cfg)
    }
}

/// Registry, provider, stopwords and resolver for one run.
pub struct Resources {
    pub registry: DomainRegistry,
    pub provider: LexiconProvider,
    pub stopwords: Stopwords,
    pub resolver: Box<dyn UrlResolver>,
}

impl Default for Resources {
    fn default() -> Self {
        let registry = DomainRegistry::default();
        Resources {
            provider: LexiconProvider::shipped(&registry),
            registry,
            stopwords: Stopwords::english().clone(),
            resolver: Box::new(FixtureResolver::new()),
        }
    }
}

fn read(path: &Path) -> Result<String, PipelineError> {
    fs::read_to_string(path).map_err(|e| PipelineError::Resource {
        path: path.to_owned(),
        message: e.to_string(),
    })
}

fn bad(path: &Path) -> impl FnOnce(String) -> PipelineError + '_ {
    move |message| PipelineError::Resource {
        path: path.to_owned(),
        message,
    }
}

impl Resources {
    /// Loads each configured file, falling back to the shipped default.
    pub fn load(paths: &ResourcePaths) -> Result<Self, PipelineError> {
        let registry = match &paths.domain_registry {
            Some(p) => DomainRegistry::from_json(&read(p)?).map_err(|e| bad(p)(e.to_string()))?,
            None => DomainRegistry::default(),
        };
        let provider = if paths.lexicon.is_none() && paths.sentiment_lexicon.is_none() {
            LexiconProvider::shipped(&registry)
        } else {
            let lexicon: Lexicon = match &paths.lexicon {
                Some(p) => serde_json::from_str(&read(p)?).map_err(|e| bad(p)(e.to_string()))?,
                None => {
                    let mut lex = LexiconProvider::shipped_lexicon();
                    lex.retain(|label, _| registry.position(label).is_some());
                    lex
                }
            };
            let sentiment: SentimentLexicon = match &paths.sentiment_lexicon {
                Some(p) => serde_json::from_str(&read(p)?).map_err(|e| bad(p)(e.to_string()))?,
                None => LexiconProvider::shipped_sentiment(),
            };
            let path = paths.lexicon.as_deref().or(paths.sentiment_lexicon.as_deref()).unwrap_or(Path::new(""));
            LexiconProvider::new(&registry, &lexicon, &sentiment).map_err(|e| bad(path)(e.to_string()))?
        };
        let stopwords = match &paths.stopwords {
            Some(p) => Stopwords::parse(&read(p)?),
            None => Stopwords::english().clone(),
        };
        let resolver: Box<dyn UrlResolver> = match &paths.url_fixtures {
            Some(p) => Box::new(FixtureResolver::from_json_file(p).map_err(|e| bad(p)(e.to_string()))?),
            None => Box::new(FixtureResolver::new()),
        };
        Ok(Resources {
            registry,
            provider,
            stopwords,
            resolver,
        })
    }

    pub fn scorer<'a>(&'a self, config: &'a CredibilityConfig) -> Scorer<'a> {
        Scorer {
            config,
            registry: &self.registry,
            provider: &self.provider,
            resolver: self.resolver.as_ref(),
            stopwords: &self.stopwords,
        }
    }
}

/// Wall-clock duration of one stage.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

pub struct RunOutput {
    pub corpus: Corpus,
    pub report: CleansingReport,
    pub chunks: Vec<TimeChunk>,
    pub scores: WindowScores,
    pub timings: Vec<StageTiming>,
}

/// Cleanses, partitions and scores an ingested corpus, then checks the
/// range invariants.
pub fn run(corpus: Corpus, config: &PipelineConfig, resources: &Resources) -> Result<RunOutput, PipelineError> {
    config.credibility.validate()?;
    let mut timings = Vec::new();
    let mut timed = |stage: &str, t: Instant| {
        timings.push(StageTiming {
            stage: stage.to_owned(),
            seconds: t.elapsed().as_secs_f64(),
        })
    };

    let t = Instant::now();
    let (corpus, report) = cleanse(corpus, &config.cleansing, &resources.provider);
    timed("cleanse", t);

    let t = Instant::now();
    let chunks = partition(&corpus, &config.credibility.window_spec()).map_err(CredibilityError::from)?;
    timed("partition", t);

    let t = Instant::now();
    let scores = resources.scorer(&config.credibility).score(&corpus, &chunks)?;
    scores.check_invariants()?;
    timed("score", t);

    Ok(RunOutput {
        corpus,
        report,
        chunks,
        scores,
        timings,
    })
}
