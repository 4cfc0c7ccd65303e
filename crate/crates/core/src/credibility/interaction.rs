use std::collections::BTreeMap;

use crate::corpus::{Post, PostId, Reply};
use crate::semantics::{DomainLabel, SemanticsProvider, TaxonomyAssignment};

use super::content::PostSemantics;
use super::matrix::{DomainMatrix, MatrixName};

/// Splits `value` across domains in proportion to their scores.
///
/// Returns an empty map when there is nothing to split over (no domains or
/// a non-positive score total).
pub fn relativeness_distribute(value: f64, weights: &BTreeMap<DomainLabel, f64>) -> BTreeMap<DomainLabel, f64> {
    let total: f64 = weights.values().sum();
    if !(total > 0.0) {
        return BTreeMap::new();
    }
    weights
        .iter()
        .map(|(d, &w)| (d.clone(), value * w / total))
        .collect()
}

/// [`relativeness_distribute`] over a list of assignments; repeated domains
/// are merged first.
pub fn distribute_over_assignments(value: f64, assignments: &[TaxonomyAssignment]) -> BTreeMap<DomainLabel, f64> {
    let mut weights = BTreeMap::new();
    for a in assignments {
        *weights.entry(a.domain.clone()).or_insert(0.0) += a.score;
    }
    relativeness_distribute(value, &weights)
}

/// Raw retweet (R), favorite (L) and reply-count (P) matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct Interactions {
    pub retweets: DomainMatrix,
    pub likes: DomainMatrix,
    pub replies: DomainMatrix,
}

/// Distributes each original post's counts over its domains. Retweets
/// contribute nothing: their counts belong to the original author.
pub fn interaction_matrices<'a>(
    posts: impl IntoIterator<Item = &'a Post>,
    semantics: &BTreeMap<PostId, PostSemantics>,
    chunk: Option<usize>,
) -> Interactions {
    let mut out = Interactions {
        retweets: DomainMatrix::new(MatrixName::R, chunk),
        likes: DomainMatrix::new(MatrixName::L, chunk),
        replies: DomainMatrix::new(MatrixName::P, chunk),
    };
    for post in posts {
        if post.is_retweet {
            continue;
        }
        let Some(sem) = semantics.get(&post.post_id) else {
            continue;
        };
        let weights = sem.domain_weights();
        for (m, count) in [
            (&mut out.retweets, post.retweet_count),
            (&mut out.likes, post.favorite_count),
            (&mut out.replies, post.replies_count),
        ] {
            for (d, share) in relativeness_distribute(count as f64, &weights) {
                m.add(&post.user_id, &d, share);
            }
        }
    }
    out
}

/// Positive (SP), negative (SN) and net (S = SP - |SN|) reply sentiment.
#[derive(Debug, Clone, PartialEq)]
pub struct Sentiments {
    pub positive: DomainMatrix,
    pub negative: DomainMatrix,
    pub net: DomainMatrix,
}

/// Sums reply sentiment per parent post (positive and negative pools kept
/// apart, neutral replies ignored) and distributes each pool over the
/// parent's domains. Replies by the parent's owner and replies to retweets
/// are skipped, as are replies whose parent is not in `posts`.
pub fn sentiment_matrices<'a>(
    replies: impl IntoIterator<Item = &'a Reply>,
    posts: &BTreeMap<PostId, &Post>,
    semantics: &BTreeMap<PostId, PostSemantics>,
    provider: &dyn SemanticsProvider,
    chunk: Option<usize>,
) -> Sentiments {
    let mut pools: BTreeMap<&PostId, (f64, f64)> = BTreeMap::new();
    let mut ordered: Vec<&Reply> = replies.into_iter().collect();
    ordered.sort_by(|a, b| a.reply_id.cmp(&b.reply_id));
    for reply in ordered {
        let Some(parent) = posts.get(&reply.parent_post_id) else {
            continue;
        };
        if parent.is_retweet || parent.user_id == reply.author_user_id {
            continue;
        }
        let s = provider.sentiment(&reply.text);
        let pool = pools.entry(&parent.post_id).or_insert((0.0, 0.0));
        if s.is_positive() {
            pool.0 += s.value();
        } else if s.is_negative() {
            pool.1 += s.value();
        }
    }

    let mut positive = DomainMatrix::new(MatrixName::SP, chunk);
    let mut negative = DomainMatrix::new(MatrixName::SN, chunk);
    for (post_id, (pos, neg)) in pools {
        let parent = posts[post_id];
        let Some(sem) = semantics.get(post_id) else {
            continue;
        };
        let weights = sem.domain_weights();
        for (d, share) in relativeness_distribute(pos, &weights) {
            positive.add(&parent.user_id, &d, share);
        }
        for (d, share) in relativeness_distribute(neg, &weights) {
            negative.add(&parent.user_id, &d, share);
        }
    }

    let mut net = DomainMatrix::new(MatrixName::S, chunk);
    for (u, d, v) in positive.iter() {
        net.add(u, d, v);
    }
    for (u, d, v) in negative.iter() {
        net.add(u, d, -v.abs());
    }
    Sentiments { positive, negative, net }
}
