//! Per-chunk domain matrices, temporal aggregation and the trust ladder.
//!
//! For each time chunk and each user `u` / domain `d`:
//!
//! ```text
//! Sc[u,d] = twt_sim[u] * sum(text scores) + url_sim[u] * sum(url scores)
//! W[u,d]  = Sc[u,d] * log(n / DF[u])      if Sc[u,d] > rho, else 0
//! R, L, P = retweet / favorite / reply counts split over each post's domains
//! S[u,d]  = SP[u,d] - |SN[u,d]|           (reply sentiment, owner replies dropped)
//! C[u,d]  = a*FF'[u] + b*W' + g*R' + d*L' + t*P' + v*S'
//! ```
//!
//! Primed matrices are column-normalized (by max, or min-max for `S` and
//! `FF`). Across chunks `TC = sum w(k) C^k / sum w(k)`, rescaled per domain
//! onto `[0, 5]` and mapped to a [`TrustLevel`].

mod aggregate;
mod config;
mod content;
mod ffr;
mod interaction;
mod matrix;
mod penalties;
mod score;
mod trust;

use chrono::{DateTime, Utc};
use thiserror::Error;

use crate::corpus::{PartitionError, UserId};

pub use aggregate::{chunk_credibility, scale_credibility, temporal_credibility, ChunkAttributes};
pub use config::{AttributeWeights, ConfigError, CredibilityConfig, MissingChunk, WeightFunction};
pub use content::{content_scores, domain_frequency, domain_weight, inverse_domain_frequency, PostSemantics};
pub use ffr::{follower_friend_ratio, normalize_ffr, profile_age_years, FollowerFriendRatio};
pub use interaction::{
    distribute_over_assignments, interaction_matrices, relativeness_distribute, sentiment_matrices, Interactions, Sentiments,
};
pub use matrix::{min_max, DomainMatrix, MatrixName};
pub use penalties::{similarity_penalties, tweet_similarity_penalty, url_similarity_penalty, SimilarityPenalties};
pub use score::{ChunkScores, Scorer, WindowScores};
pub use trust::{rank_domain, RankedUser, TrustLevel};

#[derive(Debug, Error)]
pub enum CredibilityError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Partition(#[from] PartitionError),
    #[error("unknown domain `{0}`")]
    UnknownDomain(String),
    #[error("expected {expected} chunk matrices, got {got}")]
    ChunkCount { expected: usize, got: usize },
    #[error("profile of `{user}` was created after the reference time {as_of}")]
    ProfileAfterReference { user: UserId, as_of: DateTime<Utc> },
    #[error("scaled credibility {0} outside [0, 5]")]
    ScaledOutOfRange(f64),
    #[error("invariant violated: {0}")]
    Invariant(String),
}
