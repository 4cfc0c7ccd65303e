use std::collections::{BTreeMap, BTreeSet, HashMap};

use serde::{Deserialize, Serialize};
use url::Url;

use super::model::{Corpus, Post, PostId, Reply, ReplyId, UserId, UserProfile};
use crate::semantics::SemanticsProvider;
use crate::text::normalize_whitespace;

const DEFAULT_MEDIA_HOSTS: &str = include_str!("../../assets/media_hosts.txt");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct CleansingConfig {
    /// Users with fewer posts than this (after deduplication) are dropped.
    pub min_posts: usize,
    /// Hosts whose URLs carry no extractable text. Subdomains match too.
    pub media_hosts: Vec<String>,
    /// Zero retweet/favorite/reply counts on posts that are retweets.
    pub zero_retweet_metadata: bool,
    /// Drop replies written by the owner of the parent post.
    pub drop_owner_replies: bool,
}

impl Default for CleansingConfig {
    fn default() -> Self {
        CleansingConfig {
            min_posts: 50,
            media_hosts: default_media_hosts(),
            zero_retweet_metadata: true,
            drop_owner_replies: true,
        }
    }
}

pub fn default_media_hosts() -> Vec<String> {
    parse_host_list(DEFAULT_MEDIA_HOSTS)
}

/// One host per line; blank lines and `#` comments ignored.
pub fn parse_host_list(src: &str) -> Vec<String> {
    src.lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'))
        .map(str::to_ascii_lowercase)
        .collect()
}

/// True when the URL's host equals a blocklisted host or is a subdomain of one.
pub fn is_media_url(url: &str, hosts: &[String]) -> bool {
    let Some(host) = Url::parse(url).ok().and_then(|u| u.host_str().map(str::to_ascii_lowercase)) else {
        return false;
    };
    hosts.iter().any(|h| {
        let h = h.trim_start_matches('.');
        host == h || host.strip_suffix(h).is_some_and(|rest| rest.ends_with('.'))
    })
}

/// Records examined / removed / retained by one rule.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct RuleCounts {
    pub examined: usize,
    pub removed: usize,
    pub retained: usize,
}

impl RuleCounts {
    fn accumulate(&mut self, first_pass: bool, examined: usize, removed: usize) {
        if first_pass {
            self.examined = examined;
        }
        self.removed += removed;
        self.retained = self.examined - self.removed;
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CleansingReport {
    /// Posts; removed = exact duplicates.
    pub duplicates: RuleCounts,
    /// Users; removed = below `min_posts`.
    pub low_activity_users: RuleCounts,
    /// URLs; removed = media-host URLs stripped from posts.
    pub media_urls: RuleCounts,
    /// Posts; removed = flagged non-English.
    pub non_english: RuleCounts,
    /// Posts; removed = retweets whose counts were zeroed.
    pub retweet_metadata_zeroing: RuleCounts,
    /// Replies; removed = written by the parent post's owner.
    pub owner_replies: RuleCounts,
    /// Posts dropped because their author was dropped.
    pub cascaded_posts: usize,
    /// Replies dropped because their parent post or author was dropped.
    pub cascaded_replies: usize,
    /// Rule passes until nothing changed.
    pub passes: usize,
}

struct Parts {
    users: BTreeMap<UserId, UserProfile>,
    posts: BTreeMap<PostId, Post>,
    replies: BTreeMap<ReplyId, Reply>,
}

impl Parts {
    fn drop_replies_of(&mut self, removed_posts: &BTreeSet<PostId>) -> usize {
        let before = self.replies.len();
        self.replies.retain(|_, r| !removed_posts.contains(&r.parent_post_id));
        before - self.replies.len()
    }
}

/// Applies, in order: exact-duplicate removal, low-activity user removal,
/// media URL stripping, non-English post removal, retweet metadata zeroing
/// and owner-reply removal. The sequence repeats until a pass changes
/// nothing, so the result is a fixpoint and cleansing is idempotent.
pub fn cleanse(corpus: Corpus, config: &CleansingConfig, provider: &dyn SemanticsProvider) -> (Corpus, CleansingReport) {
    let (users, posts, replies) = corpus.into_parts();
    let mut parts = Parts { users, posts, replies };
    let mut report = CleansingReport::default();

    loop {
        let first = report.passes == 0;
        report.passes += 1;
        let mut changed = false;

        // (1) exact duplicates: same author, same normalized text, same URL multiset
        let examined = parts.posts.len();
        let mut keep: HashMap<(UserId, String, Vec<String>), &Post> = HashMap::new();
        for p in parts.posts.values() {
            let mut urls = p.urls.clone();
            urls.sort();
            let key = (p.user_id.clone(), normalize_whitespace(&p.text), urls);
            keep.entry(key)
                .and_modify(|kept| {
                    if (p.created_at, &p.post_id) < (kept.created_at, &kept.post_id) {
                        *kept = p;
                    }
                })
                .or_insert(p);
        }
        let kept: BTreeSet<PostId> = keep.values().map(|p| p.post_id.clone()).collect();
        let dupes: BTreeSet<PostId> = parts.posts.keys().filter(|id| !kept.contains(*id)).cloned().collect();
        parts.posts.retain(|id, _| kept.contains(id));
        report.cascaded_replies += parts.drop_replies_of(&dupes);
        report.duplicates.accumulate(first, examined, dupes.len());
        changed |= !dupes.is_empty();

        // (2) low-activity users
        let examined = parts.users.len();
        let mut counts: HashMap<&UserId, usize> = HashMap::new();
        for p in parts.posts.values() {
            *counts.entry(&p.user_id).or_default() += 1;
        }
        let low: BTreeSet<UserId> = parts
            .users
            .keys()
            .filter(|u| counts.get(u).copied().unwrap_or(0) < config.min_posts)
            .cloned()
            .collect();
        parts.users.retain(|u, _| !low.contains(u));
        let gone: BTreeSet<PostId> = parts
            .posts
            .values()
            .filter(|p| low.contains(&p.user_id))
            .map(|p| p.post_id.clone())
            .collect();
        parts.posts.retain(|id, _| !gone.contains(id));
        report.cascaded_posts += gone.len();
        report.cascaded_replies += parts.drop_replies_of(&gone);
        let before = parts.replies.len();
        parts.replies.retain(|_, r| !low.contains(&r.author_user_id));
        report.cascaded_replies += before - parts.replies.len();
        report.low_activity_users.accumulate(first, examined, low.len());
        changed |= !low.is_empty();

        // (3) media URLs
        let (mut examined, mut stripped) = (0usize, 0usize);
        for p in parts.posts.values_mut() {
            examined += p.urls.len();
            let before = p.urls.len();
            p.urls.retain(|u| !is_media_url(u, &config.media_hosts));
            stripped += before - p.urls.len();
        }
        report.media_urls.accumulate(first, examined, stripped);
        changed |= stripped > 0;

        // (4) non-English posts, with their replies
        let examined = parts.posts.len();
        let foreign: BTreeSet<PostId> = parts
            .posts
            .values()
            .filter(|p| !provider.is_english(&p.text))
            .map(|p| p.post_id.clone())
            .collect();
        parts.posts.retain(|id, _| !foreign.contains(id));
        report.cascaded_replies += parts.drop_replies_of(&foreign);
        report.non_english.accumulate(first, examined, foreign.len());
        changed |= !foreign.is_empty();

        // (5) retweet metadata
        let examined = parts.posts.len();
        let mut zeroed = 0usize;
        if config.zero_retweet_metadata {
            for p in parts.posts.values_mut().filter(|p| p.is_retweet) {
                if p.retweet_count + p.favorite_count + p.replies_count > 0 {
                    p.retweet_count = 0;
                    p.favorite_count = 0;
                    p.replies_count = 0;
                    zeroed += 1;
                }
            }
        }
        report.retweet_metadata_zeroing.accumulate(first, examined, zeroed);
        changed |= zeroed > 0;

        // (6) replies by the post owner
        let examined = parts.replies.len();
        let mut owner = 0usize;
        if config.drop_owner_replies {
            let posts = &parts.posts;
            parts.replies.retain(|_, r| {
                let own = posts.get(&r.parent_post_id).is_some_and(|p| p.user_id == r.author_user_id);
                owner += own as usize;
                !own
            });
        }
        report.owner_replies.accumulate(first, examined, owner);
        changed |= owner > 0;

        if !changed {
            break;
        }
    }

    (Corpus::from_parts(parts.users, parts.posts, parts.replies), report)
}
