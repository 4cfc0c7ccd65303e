use std::collections::{BTreeMap, BTreeSet};

use chrono::{DateTime, Utc};
use rayon::prelude::*;

use crate::corpus::{partition, Corpus, Post, PostId, TimeChunk, UserId};
use crate::semantics::{DomainLabel, DomainRegistry, SemanticsProvider, UrlResolver};
use crate::text::Stopwords;

use super::aggregate::{chunk_credibility, scale_credibility, temporal_credibility, ChunkAttributes};
use super::config::CredibilityConfig;
use super::content::{content_scores, domain_frequency, domain_weight, inverse_domain_frequency, PostSemantics};
use super::ffr::{follower_friend_ratio, normalize_ffr, FollowerFriendRatio};
use super::interaction::{interaction_matrices, sentiment_matrices};
use super::matrix::{DomainMatrix, MatrixName};
use super::penalties::{similarity_penalties, SimilarityPenalties};
use super::trust::{rank_domain, RankedUser, TrustLevel};
use super::CredibilityError;

const RANGE_TOLERANCE: f64 = 1e-9;

/// Every matrix of one time chunk.
#[derive(Debug, Clone, PartialEq)]
pub struct ChunkScores {
    pub index: usize,
    pub period_start: DateTime<Utc>,
    pub period_end: DateTime<Utc>,
    pub penalties: BTreeMap<UserId, SimilarityPenalties>,
    pub idf: BTreeMap<UserId, f64>,
    /// Users with at least one domain of positive content score.
    pub rankable: BTreeSet<UserId>,
    pub sc: DomainMatrix,
    pub w: DomainMatrix,
    pub w_norm: DomainMatrix,
    pub r: DomainMatrix,
    pub r_norm: DomainMatrix,
    pub l: DomainMatrix,
    pub l_norm: DomainMatrix,
    pub p: DomainMatrix,
    pub p_norm: DomainMatrix,
    pub sp: DomainMatrix,
    pub sn: DomainMatrix,
    pub s: DomainMatrix,
    pub s_norm: DomainMatrix,
    pub c: DomainMatrix,
}

impl ChunkScores {
    pub fn matrices(&self) -> [&DomainMatrix; 14] {
        [
            &self.sc,
            &self.w,
            &self.w_norm,
            &self.r,
            &self.r_norm,
            &self.l,
            &self.l_norm,
            &self.p,
            &self.p_norm,
            &self.sp,
            &self.sn,
            &self.s,
            &self.s_norm,
            &self.c,
        ]
    }
}

/// Scores for a whole credibility window.
#[derive(Debug, Clone, PartialEq)]
pub struct WindowScores {
    pub registry: DomainRegistry,
    pub chunks: Vec<ChunkScores>,
    /// Reference instant for profile ages (end of the newest chunk).
    pub as_of: DateTime<Utc>,
    pub ffr: BTreeMap<UserId, FollowerFriendRatio>,
    pub tc: DomainMatrix,
    pub tc_scaled: DomainMatrix,
    /// Penalties over the whole window, for every corpus user.
    pub window_penalties: BTreeMap<UserId, SimilarityPenalties>,
}

impl WindowScores {
    /// True when the user has a credibility row (rankable in some chunk).
    pub fn is_rankable(&self, user: &UserId) -> bool {
        self.tc.has_row(user)
    }

    pub fn trust_level(&self, user: &UserId, domain: &DomainLabel) -> Result<TrustLevel, CredibilityError> {
        let v = self.tc_scaled.contains(user, domain).then(|| self.tc_scaled.get(user, domain));
        TrustLevel::from_scaled(v)
    }

    pub fn rank(&self, domain: &str, top: usize) -> Result<Vec<RankedUser>, CredibilityError> {
        rank_domain(&self.tc_scaled, &self.registry, domain, top)
    }

    /// Range checks on every normalized quantity.
    pub fn check_invariants(&self) -> Result<(), CredibilityError> {
        let bad = |what: String| Err(CredibilityError::Invariant(what));
        for chunk in &self.chunks {
            for m in chunk.matrices() {
                for (u, d, v) in m.iter() {
                    let ok = match m.name {
                        n if n.is_unit_normalized() => (-RANGE_TOLERANCE..=1.0 + RANGE_TOLERANCE).contains(&v),
                        MatrixName::SN => v <= 0.0,
                        MatrixName::SP => v >= 0.0,
                        _ => v.is_finite(),
                    };
                    if !ok {
                        return bad(format!("{} chunk {} entry ({u}, {d}) = {v}", m.name, chunk.index));
                    }
                }
            }
        }
        for (u, r) in &self.ffr {
            if !(0.0..=1.0).contains(&r.ff_r_norm) || r.age_years <= 0.0 {
                return bad(format!("follower-friend ratio of {u} = {r:?}"));
            }
        }
        for (u, d, v) in self.tc_scaled.iter() {
            if !(0.0..=5.0).contains(&v) {
                return bad(format!("tc_scaled ({u}, {d}) = {v}"));
            }
        }
        Ok(())
    }
}

/// Runs the credibility computation over a partitioned corpus.
pub struct Scorer<'a> {
    pub config: &'a CredibilityConfig,
    pub registry: &'a DomainRegistry,
    pub provider: &'a dyn SemanticsProvider,
    pub resolver: &'a dyn UrlResolver,
    pub stopwords: &'a Stopwords,
}

impl<'a> Scorer<'a> {
    /// Partitions with the configured window, then scores.
    pub fn score_corpus(&self, corpus: &Corpus) -> Result<WindowScores, CredibilityError> {
        self.config.validate()?;
        let chunks = partition(corpus, &self.config.window_spec())?;
        self.score(corpus, &chunks)
    }

    pub fn score(&self, corpus: &Corpus, chunks: &[TimeChunk]) -> Result<WindowScores, CredibilityError> {
        self.config.validate()?;
        if chunks.len() != self.config.window {
            return Err(CredibilityError::ChunkCount {
                expected: self.config.window,
                got: chunks.len(),
            });
        }
        let as_of = chunks.last().map(|c| c.period_end).unwrap_or_else(Utc::now);

        let window_posts: BTreeMap<PostId, &Post> =
            chunks.iter().flat_map(|c| c.posts.iter()).map(|p| (p.post_id.clone(), p)).collect();
        let semantics: BTreeMap<PostId, PostSemantics> = window_posts
            .par_iter()
            .map(|(id, p)| {
                let sem = PostSemantics::annotate(p, self.provider, self.resolver, self.registry, self.config.require_confident);
                (id.clone(), sem)
            })
            .collect::<Vec<_>>()
            .into_iter()
            .collect();

        let mut ffr = BTreeMap::new();
        let active: BTreeSet<&UserId> = window_posts.values().map(|p| &p.user_id).collect();
        for u in active {
            let profile = corpus.user(u).ok_or_else(|| CredibilityError::Invariant(format!("post author {u} has no profile")))?;
            ffr.insert(u.clone(), follower_friend_ratio(profile, as_of)?);
        }
        normalize_ffr(&mut ffr);
        let ff_norm: BTreeMap<UserId, f64> = ffr.iter().map(|(u, r)| (u.clone(), r.ff_r_norm)).collect();

        let chunk_scores = chunks
            .par_iter()
            .map(|chunk| self.score_chunk(chunk, &semantics, &window_posts, &ff_norm))
            .collect::<Result<Vec<_>, _>>()?;

        let cs: Vec<DomainMatrix> = chunk_scores.iter().map(|c| c.c.clone()).collect();
        let tc = temporal_credibility(&cs, self.config.window, &self.config.weight_function, self.config.missing_chunk)?;
        let tc_scaled = scale_credibility(&tc, self.registry.labels());

        let mut by_user: BTreeMap<&UserId, Vec<&Post>> = BTreeMap::new();
        for p in window_posts.values() {
            by_user.entry(&p.user_id).or_default().push(p);
        }
        let window_penalties = corpus
            .users()
            .map(|u| {
                let posts = by_user.get(&u.user_id).map(Vec::as_slice).unwrap_or_default();
                (u.user_id.clone(), similarity_penalties(posts.iter().copied(), self.stopwords))
            })
            .collect();

        Ok(WindowScores {
            registry: self.registry.clone(),
            chunks: chunk_scores,
            as_of,
            ffr,
            tc,
            tc_scaled,
            window_penalties,
        })
    }

    fn score_chunk(
        &self,
        chunk: &TimeChunk,
        semantics: &BTreeMap<PostId, PostSemantics>,
        window_posts: &BTreeMap<PostId, &Post>,
        ff_norm: &BTreeMap<UserId, f64>,
    ) -> Result<ChunkScores, CredibilityError> {
        let k = Some(chunk.index);
        let domains = self.registry.labels();
        let n = self.registry.len();

        let mut by_user: BTreeMap<&UserId, Vec<&Post>> = BTreeMap::new();
        for p in &chunk.posts {
            by_user.entry(&p.user_id).or_default().push(p);
        }
        for posts in by_user.values_mut() {
            posts.sort_by(|a, b| a.post_id.cmp(&b.post_id));
        }

        let mut penalties = BTreeMap::new();
        let mut idf = BTreeMap::new();
        let mut sc = DomainMatrix::new(MatrixName::Sc, k);
        let mut w = DomainMatrix::new(MatrixName::W, k);
        for (&user, posts) in &by_user {
            let pen = similarity_penalties(posts.iter().copied(), self.stopwords);
            let row = content_scores(posts.iter().copied(), semantics, &pen);
            penalties.insert(user.clone(), pen);
            for (d, &v) in &row {
                sc.set(user, d, v);
            }
            if let Some(user_idf) = inverse_domain_frequency(domain_frequency(&row), n, self.config.log_base) {
                idf.insert(user.clone(), user_idf);
                w.touch(user);
                for (d, &v) in &row {
                    w.set(user, d, domain_weight(v, user_idf, self.config.rho));
                }
            }
        }
        let rankable: BTreeSet<UserId> = idf.keys().cloned().collect();
        let pool: Vec<UserId> = rankable.iter().cloned().collect();

        let w_norm = w.normalize_by_column_max(MatrixName::WNorm, &pool, domains);
        let inter = interaction_matrices(chunk.posts.iter(), semantics, k);
        let r_norm = inter.retweets.normalize_by_column_max(MatrixName::RNorm, &pool, domains);
        let l_norm = inter.likes.normalize_by_column_max(MatrixName::LNorm, &pool, domains);
        let p_norm = inter.replies.normalize_by_column_max(MatrixName::PNorm, &pool, domains);
        let sent = sentiment_matrices(chunk.replies.iter(), window_posts, semantics, self.provider, k);
        let s_norm = sent.net.min_max_scale(MatrixName::SNorm, &pool, domains, 1.0);

        let attrs = ChunkAttributes {
            w: &w_norm,
            r: &r_norm,
            l: &l_norm,
            p: &p_norm,
            s: &s_norm,
        };
        let c = chunk_credibility(k, attrs, ff_norm, &self.config.weights, &rankable, domains)?;

        Ok(ChunkScores {
            index: chunk.index,
            period_start: chunk.period_start,
            period_end: chunk.period_end,
            penalties,
            idf,
            rankable,
            sc,
            w,
            w_norm,
            r: inter.retweets,
            r_norm,
            l: inter.likes,
            l_norm,
            p: inter.replies,
            p_norm,
            sp: sent.positive,
            sn: sent.negative,
            s: sent.net,
            s_norm,
            c,
        })
    }
}
