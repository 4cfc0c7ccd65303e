//! Domain-based, time-aware credibility ranking for social-post corpora.
//!
//! The crate is organised as a pipeline:
//!
//! ```text
//! ingest -> cleanse -> partition -> score -> rank
//! ```
//!
//! * [`corpus`] owns the record types, JSONL ingestion, cleansing rules and
//!   calendar partitioning into time chunks.
//! * [`semantics`] defines the taxonomy / sentiment provider contract and a
//!   deterministic lexicon-backed implementation.
//! * [`credibility`] computes the per-chunk domain matrices, the temporal
//!   aggregate, the 0..5 rescaling and the seven-level trust ladder.
//! * [`anomaly`] answers "very untrustworthy" retrieval queries.
//! * [`evaluation`] scores rankings against a labelled ground truth.
//! * [`pipeline`] and [`artifacts`] tie the stages together and persist
//!   their outputs.
//! * [`synth`] generates seeded corpora with planted influencers and spammers.

pub mod anomaly;
pub mod artifacts;
pub mod corpus;
pub mod credibility;
pub mod pipeline;
pub mod evaluation;
pub mod semantics;
pub mod synth;
pub mod text;

pub use corpus::{Corpus, Post, Reply, UserId, UserProfile};
pub use credibility::{CredibilityConfig, DomainMatrix, TrustLevel};
pub use semantics::{DomainLabel, DomainRegistry, LexiconProvider, SemanticsProvider};
