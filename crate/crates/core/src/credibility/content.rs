use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::{Post, PostId};
use crate::semantics::{DomainLabel, DomainRegistry, SemanticsProvider, TaxonomyAssignment, UrlResolver};

use super::penalties::SimilarityPenalties;

/// Taxonomy assignments for one post's text and each of its URLs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct PostSemantics {
    pub text: Vec<TaxonomyAssignment>,
    pub urls: Vec<Vec<TaxonomyAssignment>>,
}

impl PostSemantics {
    /// Runs the provider over a post, keeping only registry domains and,
    /// when `require_confident`, only confident assignments.
    pub fn annotate(
        post: &Post,
        provider: &dyn SemanticsProvider,
        resolver: &dyn UrlResolver,
        registry: &DomainRegistry,
        require_confident: bool,
    ) -> Self {
        let keep = |v: Vec<TaxonomyAssignment>| -> Vec<TaxonomyAssignment> {
            v.into_iter()
                .filter(|a| (a.confident || !require_confident) && registry.contains(&a.domain))
                .collect()
        };
        PostSemantics {
            text: keep(provider.classify_text(&post.text)),
            urls: post.urls.iter().map(|u| keep(provider.classify_url(u, resolver))).collect(),
        }
    }

    /// Per-domain score mass of the post's text and URLs together; drives
    /// the distribution of the post's metadata over domains.
    pub fn domain_weights(&self) -> BTreeMap<DomainLabel, f64> {
        let mut out = BTreeMap::new();
        for a in self.text.iter().chain(self.urls.iter().flatten()) {
            *out.entry(a.domain.clone()).or_insert(0.0) += a.score;
        }
        out
    }
}

/// Content-score row of one user:
/// `Sc[d] = twt_sim * sum(text scores in d) + url_sim * sum(url scores in d)`.
/// Only domains with a positive raw score appear.
pub fn content_scores<'a>(
    posts: impl IntoIterator<Item = &'a Post>,
    semantics: &BTreeMap<PostId, PostSemantics>,
    penalties: &SimilarityPenalties,
) -> BTreeMap<DomainLabel, f64> {
    let mut twt: BTreeMap<DomainLabel, f64> = BTreeMap::new();
    let mut url: BTreeMap<DomainLabel, f64> = BTreeMap::new();
    for post in posts {
        let Some(sem) = semantics.get(&post.post_id) else {
            continue;
        };
        for a in &sem.text {
            *twt.entry(a.domain.clone()).or_insert(0.0) += a.score;
        }
        for a in sem.urls.iter().flatten() {
            *url.entry(a.domain.clone()).or_insert(0.0) += a.score;
        }
    }
    let domains: BTreeSet<&DomainLabel> = twt.keys().chain(url.keys()).collect();
    domains
        .into_iter()
        .filter_map(|d| {
            let t = twt.get(d).copied().unwrap_or(0.0);
            let u = url.get(d).copied().unwrap_or(0.0);
            (t > 0.0 || u > 0.0).then(|| (d.clone(), penalties.twt_sim * t + penalties.url_sim * u))
        })
        .collect()
}

/// Number of domains with `Sc > 0`.
pub fn domain_frequency(row: &BTreeMap<DomainLabel, f64>) -> usize {
    row.values().filter(|&&v| v > 0.0).count()
}

/// `log(n / df)` in the given base (natural log when `None`). `None` for
/// `df = 0`: such a user cannot be ranked.
pub fn inverse_domain_frequency(df: usize, n: usize, log_base: Option<f64>) -> Option<f64> {
    if df == 0 {
        return None;
    }
    let ln = (n as f64 / df as f64).ln();
    Some(match log_base {
        Some(b) => ln / b.ln(),
        None => ln,
    })
}

/// `Sc * idf` where `Sc > rho`, else 0.
pub fn domain_weight(sc: f64, idf: f64, rho: f64) -> f64 {
    if sc > rho {
        sc * idf
    } else {
        0.0
    }
}
