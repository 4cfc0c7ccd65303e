//! Seeded synthetic corpora with planted influencers, spammers and generic
//! users.
//!
//! * Influencers post on-domain keyword mixes with varied filler words, draw
//!   heavy engagement and mostly positive replies.
//! * Spammers repeat one four-word off-lexicon phrase (only the `@mention`
//!   varies) with a single repeated URL and get almost no engagement.
//! * Generic users chat with filler words, occasionally touch one of their
//!   interest domains, and have the smallest audiences.
//!
//! A sprinkling of retweets, owner replies, media links, duplicates and
//! non-English posts exercises every cleansing rule. The same spec and seed
//! always give the same bytes.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{self, BufWriter, Write};
use std::path::Path;

use chrono::{DateTime, Duration, Months, NaiveDate, TimeZone, Utc};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::anomaly::{AnomalyLabel, AnomalyLabelSet};
use crate::corpus::{write_dir, Corpus, IntegrityError, Post, PostId, Reply, ReplyId, UserId, UserProfile};
use crate::evaluation::{GroundTruth, TruthEntry};
use crate::semantics::{Lexicon, LexiconProvider, SentimentLexicon};
use crate::text::Stopwords;

pub const LABELS_FILE: &str = "labels.csv";
pub const ANOMALY_LABELS_FILE: &str = "anomaly_labels.csv";
pub const TRUTH_FILE: &str = "truth.json";

const FILLER: &[&str] = &[
    "morning", "coffee", "window", "street", "yellow", "quiet", "river", "bridge", "corner", "weekend", "afternoon",
    "evening", "sunday", "monday", "friday", "thinking", "walking", "waiting", "weather", "rain", "sunny", "cloudy",
    "cold", "warm", "breeze", "neighbor", "friend", "cousin", "brother", "sister", "lunch", "dinner", "breakfast",
    "tea", "sandwich", "bus", "train", "ticket", "queue", "office", "desk", "chair", "paper", "pencil", "notebook",
    "phone", "charger", "battery", "umbrella", "jacket", "shoes", "socks", "hat", "blue", "green", "orange", "purple",
    "tiny", "huge", "little", "big", "long", "short", "early", "late", "tomorrow", "yesterday", "today", "tonight",
    "plan", "idea", "story", "moment", "minute", "hour", "week", "month", "year", "thing", "stuff", "place", "road",
    "city", "town", "village", "park", "lake", "hill", "mountain", "forest", "tree", "flower", "bird", "cloud",
    "star", "moon", "sun", "light", "shadow", "noise", "sound", "voice", "song", "whistle", "laugh", "smile", "nap",
    "dream", "sleep", "wake", "stretch", "errand", "chores", "laundry", "dishes", "keys", "wallet", "door", "stairs",
    "elevator", "hallway", "kitchen", "balcony", "rooftop", "sidewalk", "crosswalk", "traffic", "parking", "list",
];

const SPAM_WORDS: &[&str] = &[
    "claim", "exclusive", "bonus", "voucher", "click", "winner", "instant", "reward", "giveaway", "promo", "lucky",
    "limited", "unlock", "secret", "guaranteed", "followback", "retweetnow", "dm", "link", "bio", "trick", "hack",
    "viral", "boost", "cheap", "followers", "likes", "grab", "hurry", "today",
];

const NON_ENGLISH: &[&str] = &[
    "これは とても 面白い です ね",
    "今日 は いい 天気 です",
    "это очень интересно правда",
    "сегодня хорошая погода",
    "هذا جميل جدا اليوم",
];

#[derive(Debug, Error)]
pub enum SynthError {
    #[error("invalid synthetic spec: {0}")]
    Spec(String),
    #[error("domain `{0}` has no keywords in the lexicon")]
    UnknownDomain(String),
    #[error(transparent)]
    Integrity(#[from] IntegrityError),
    #[error(transparent)]
    Io(#[from] io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Knobs of the generator. Ranges are inclusive `[min, max]`; per-chunk
/// post counts exclude the extra duplicate and non-English posts.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SyntheticSpec {
    pub seed: u64,
    pub influencer_domains: Vec<String>,
    pub influencers_per_domain: usize,
    pub spammers: usize,
    pub generic: usize,
    pub chunks: usize,
    /// First day of the oldest monthly chunk.
    pub start: NaiveDate,
    pub influencer_posts_per_chunk: [usize; 2],
    pub spammer_posts_per_chunk: [usize; 2],
    pub generic_posts_per_chunk: [usize; 2],
    /// Probability a generic post carries two interest-domain keywords.
    pub generic_topical_rate: f64,
    pub influencer_replies_per_post: [usize; 2],
    /// Probability a reply to an influencer is negative rather than positive.
    pub influencer_negative_reply_rate: f64,
    pub generic_reply_rate: f64,
    pub spammer_reply_rate: f64,
    pub owner_reply_rate: f64,
    pub retweet_rate: f64,
    pub media_url_rate: f64,
    pub duplicate_rate: f64,
    pub non_english_rate: f64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            seed: 42,
            influencer_domains: ["sports", "computing and technology", "education", "arts and entertainment"]
                .map(String::from)
                .to_vec(),
            influencers_per_domain: 20,
            spammers: 20,
            generic: 100,
            chunks: 6,
            start: NaiveDate::from_ymd_opt(2014, 11, 1).expect("valid date"),
            influencer_posts_per_chunk: [12, 20],
            spammer_posts_per_chunk: [10, 14],
            generic_posts_per_chunk: [9, 14],
            generic_topical_rate: 0.3,
            influencer_replies_per_post: [0, 3],
            influencer_negative_reply_rate: 0.1,
            generic_reply_rate: 0.2,
            spammer_reply_rate: 0.1,
            owner_reply_rate: 0.05,
            retweet_rate: 0.05,
            media_url_rate: 0.05,
            duplicate_rate: 0.02,
            non_english_rate: 0.02,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |m: &str| Err(SynthError::Spec(m.to_owned()));
        if self.chunks == 0 {
            return bad("chunks must be at least 1");
        }
        for (name, [lo, hi]) in [
            ("influencer_posts_per_chunk", self.influencer_posts_per_chunk),
            ("spammer_posts_per_chunk", self.spammer_posts_per_chunk),
            ("generic_posts_per_chunk", self.generic_posts_per_chunk),
            ("influencer_replies_per_post", self.influencer_replies_per_post),
        ] {
            if lo > hi {
                return Err(SynthError::Spec(format!("{name}: min {lo} exceeds max {hi}")));
            }
        }
        for (name, p) in [
            ("generic_topical_rate", self.generic_topical_rate),
            ("influencer_negative_reply_rate", self.influencer_negative_reply_rate),
            ("generic_reply_rate", self.generic_reply_rate),
            ("spammer_reply_rate", self.spammer_reply_rate),
            ("owner_reply_rate", self.owner_reply_rate),
            ("retweet_rate", self.retweet_rate),
            ("media_url_rate", self.media_url_rate),
            ("duplicate_rate", self.duplicate_rate),
            ("non_english_rate", self.non_english_rate),
        ] {
            if !(0.0..=1.0).contains(&p) {
                return Err(SynthError::Spec(format!("{name} must lie in [0, 1], got {p}")));
            }
        }
        let distinct: BTreeSet<&String> = self.influencer_domains.iter().collect();
        if distinct.len() != self.influencer_domains.len() {
            return bad("influencer_domains contains duplicates");
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Influencer,
    Spammer,
    Generic,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RoleLabel {
    pub user_id: UserId,
    pub role: Role,
    /// Planted domain for influencers, empty otherwise.
    pub domain: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticCorpus {
    pub corpus: Corpus,
    pub labels: Vec<RoleLabel>,
    pub influencer_domains: Vec<String>,
}

impl SyntheticCorpus {
    pub fn influencers(&self, domain: &str) -> BTreeSet<UserId> {
        self.labels
            .iter()
            .filter(|l| l.role == Role::Influencer && l.domain == domain)
            .map(|l| l.user_id.clone())
            .collect()
    }

    pub fn spammers(&self) -> BTreeSet<UserId> {
        self.labels.iter().filter(|l| l.role == Role::Spammer).map(|l| l.user_id.clone()).collect()
    }

    /// Spammers are anomalous, everyone else normal.
    pub fn anomaly_labels(&self) -> AnomalyLabelSet {
        AnomalyLabelSet::new(
            self.labels
                .iter()
                .map(|l| {
                    let label = if l.role == Role::Spammer { AnomalyLabel::Anomalous } else { AnomalyLabel::Normal };
                    (l.user_id.clone(), label)
                })
                .collect(),
        )
    }

    /// Every user graded in every planted domain: 3 for that domain's
    /// influencers, 0 otherwise.
    pub fn ground_truth(&self) -> GroundTruth {
        let domains = self
            .influencer_domains
            .iter()
            .map(|d| {
                let entries = self
                    .labels
                    .iter()
                    .map(|l| TruthEntry {
                        user_id: l.user_id.clone(),
                        grade: Some(if l.role == Role::Influencer && &l.domain == d { 3 } else { 0 }),
                    })
                    .collect();
                (d.clone(), entries)
            })
            .collect();
        GroundTruth::new(domains).expect("generated truth is well formed")
    }

    /// Writes the corpus JSONL files plus role labels, anomaly labels and
    /// ground truth.
    pub fn write_dir(&self, dir: &Path) -> Result<(), SynthError> {
        fs::create_dir_all(dir)?;
        write_dir(&self.corpus, dir)?;

        let mut wtr = csv::Writer::from_writer(BufWriter::new(fs::File::create(dir.join(LABELS_FILE))?));
        for l in &self.labels {
            wtr.serialize(l)?;
        }
        wtr.flush()?;

        let mut w = BufWriter::new(fs::File::create(dir.join(ANOMALY_LABELS_FILE))?);
        self.anomaly_labels().write_csv(&mut w).map_err(|e| SynthError::Spec(e.to_string()))?;
        w.flush()?;

        let mut w = BufWriter::new(fs::File::create(dir.join(TRUTH_FILE))?);
        self.ground_truth().to_writer(&mut w).map_err(|e| SynthError::Spec(e.to_string()))?;
        w.write_all(b"\n")?;
        w.flush()?;
        Ok(())
    }
}

/// Generates with the shipped lexicon, sentiment words and stopwords.
pub fn generate(spec: &SyntheticSpec) -> Result<SyntheticCorpus, SynthError> {
    generate_with(
        spec,
        &LexiconProvider::shipped_lexicon(),
        &LexiconProvider::shipped_sentiment(),
        Stopwords::english(),
    )
}

pub fn generate_with(
    spec: &SyntheticSpec,
    lexicon: &Lexicon,
    sentiment: &SentimentLexicon,
    stopwords: &Stopwords,
) -> Result<SyntheticCorpus, SynthError> {
    spec.validate()?;
    for d in &spec.influencer_domains {
        if lexicon.get(d).is_none_or(Vec::is_empty) {
            return Err(SynthError::UnknownDomain(d.clone()));
        }
    }
    let reserved: BTreeSet<&str> = lexicon
        .values()
        .flatten()
        .chain(&sentiment.positive)
        .chain(&sentiment.negative)
        .map(String::as_str)
        .collect();
    let neutral = |words: &[&'static str]| -> Vec<&'static str> {
        words.iter().copied().filter(|w| !reserved.contains(w) && !stopwords.contains(w)).collect()
    };
    let filler = neutral(FILLER);
    let spam_words = neutral(SPAM_WORDS);
    if filler.len() < 20 || spam_words.len() < 4 {
        return Err(SynthError::Spec("lexicon leaves too few neutral words to generate text".into()));
    }
    let interest_domains: Vec<&String> = lexicon.iter().filter(|(_, v)| !v.is_empty()).map(|(k, _)| k).collect();

    let mut g = Generator {
        spec,
        rng: ChaCha8Rng::seed_from_u64(spec.seed),
        lexicon,
        sentiment,
        filler,
        posts: Vec::new(),
        replies: Vec::new(),
        post_seq: 0,
        reply_seq: 0,
    };

    let mut roles: Vec<(Role, String)> = Vec::new();
    for d in &spec.influencer_domains {
        roles.extend((0..spec.influencers_per_domain).map(|_| (Role::Influencer, d.clone())));
    }
    roles.extend((0..spec.spammers).map(|_| (Role::Spammer, String::new())));
    roles.extend((0..spec.generic).map(|_| (Role::Generic, String::new())));
    roles.shuffle(&mut g.rng);

    let width = roles.len().max(1).to_string().len().max(3);
    let mut users = Vec::with_capacity(roles.len());
    let mut labels = Vec::with_capacity(roles.len());
    for (i, (role, domain)) in roles.into_iter().enumerate() {
        let user_id = UserId::from(format!("u{:0width$}", i + 1));
        users.push(g.profile(&user_id, &role, i));
        labels.push(RoleLabel { user_id, role, domain });
    }
    let audience: Vec<UserId> = labels.iter().filter(|l| l.role != Role::Spammer).map(|l| l.user_id.clone()).collect();

    for l in &labels {
        match l.role {
            Role::Influencer => g.influencer(&l.user_id, &l.domain, &audience),
            Role::Spammer => {
                let mut phrase = spam_words.clone();
                phrase.shuffle(&mut g.rng);
                phrase.truncate(4);
                g.spammer(&l.user_id, &phrase.join(" "), &audience);
            }
            Role::Generic => {
                let interests: Vec<&String> = interest_domains.choose_multiple(&mut g.rng, 2).copied().collect();
                g.generic(&l.user_id, &interests, &audience);
            }
        }
    }

    let Generator { posts, replies, .. } = g;
    let corpus = Corpus::new(users, posts, replies)?;
    Ok(SyntheticCorpus {
        corpus,
        labels,
        influencer_domains: spec.influencer_domains.clone(),
    })
}

struct Generator<'a> {
    spec: &'a SyntheticSpec,
    rng: ChaCha8Rng,
    lexicon: &'a Lexicon,
    sentiment: &'a SentimentLexicon,
    filler: Vec<&'static str>,
    posts: Vec<Post>,
    replies: Vec<Reply>,
    post_seq: usize,
    reply_seq: usize,
}

impl Generator<'_> {
    fn month_start(&self, chunk: usize) -> DateTime<Utc> {
        let day = self.spec.start.checked_add_months(Months::new(chunk as u32)).expect("date in range");
        Utc.from_utc_datetime(&day.and_hms_opt(0, 0, 0).expect("midnight"))
    }

    /// Uniform instant within the first 27 days of the chunk's month, so
    /// replies a day or two later stay inside the same month.
    fn instant(&mut self, chunk: usize) -> DateTime<Utc> {
        self.month_start(chunk) + Duration::seconds(self.rng.gen_range(0..27 * 86_400))
    }

    fn range(&mut self, [lo, hi]: [usize; 2]) -> usize {
        self.rng.gen_range(lo..=hi)
    }

    fn chance(&mut self, p: f64) -> bool {
        self.rng.gen_bool(p)
    }

    fn filler_words(&mut self, lo: usize, hi: usize) -> Vec<String> {
        let n = self.rng.gen_range(lo..=hi);
        (0..n).map(|_| (*self.filler.choose(&mut self.rng).expect("filler")).to_owned()).collect()
    }

    fn keywords(&mut self, domain: &str, n: usize) -> Vec<String> {
        let pool = &self.lexicon[domain];
        pool.choose_multiple(&mut self.rng, n.min(pool.len())).cloned().collect()
    }

    fn sentiment_words(&mut self, positive: bool, n: usize) -> Vec<String> {
        let pool = if positive { &self.sentiment.positive } else { &self.sentiment.negative };
        pool.choose_multiple(&mut self.rng, n.min(pool.len())).cloned().collect()
    }

    fn profile(&mut self, user_id: &UserId, role: &Role, index: usize) -> UserProfile {
        let (followers, friends, first_year, years) = match role {
            Role::Influencer => (self.rng.gen_range(2_000..=8_000), self.rng.gen_range(100..=600), 2009, 3),
            Role::Spammer => (self.rng.gen_range(150..=600), self.rng.gen_range(1_500..=5_000), 2013, 1),
            Role::Generic => (self.rng.gen_range(0..=200), self.rng.gen_range(50..=400), 2010, 4),
        };
        let base = Utc.with_ymd_and_hms(first_year, 1, 1, 0, 0, 0).single().expect("valid date");
        let created_at = base + Duration::seconds(self.rng.gen_range(0..years * 365 * 86_400));
        UserProfile {
            user_id: user_id.clone(),
            handle: format!("user{}", index + 1),
            created_at,
            followers_count: followers,
            friends_count: friends,
            bio: String::new(),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn push_post(
        &mut self,
        user: &UserId,
        created_at: DateTime<Utc>,
        text: String,
        urls: Vec<String>,
        engagement: (u64, u64, u64),
        is_retweet: bool,
        language: Option<&str>,
    ) -> usize {
        self.post_seq += 1;
        self.posts.push(Post {
            post_id: PostId::from(format!("p{:06}", self.post_seq)),
            user_id: user.clone(),
            created_at,
            text,
            urls,
            retweet_count: engagement.0,
            favorite_count: engagement.1,
            replies_count: engagement.2,
            is_retweet,
            language: language.map(str::to_owned),
        });
        self.posts.len() - 1
    }

    fn push_reply(&mut self, post: usize, author: &UserId, text: String) {
        let parent = &self.posts[post];
        let created_at = parent.created_at + Duration::minutes(self.rng.gen_range(5..=36 * 60));
        let parent_post_id = parent.post_id.clone();
        self.reply_seq += 1;
        self.replies.push(Reply {
            reply_id: ReplyId::from(format!("r{:07}", self.reply_seq)),
            parent_post_id,
            author_user_id: author.clone(),
            created_at,
            text,
        });
    }

    fn replier<'u>(&mut self, audience: &'u [UserId], owner: &UserId) -> Option<&'u UserId> {
        let others: Vec<&UserId> = audience.iter().filter(|u| *u != owner).collect();
        others.choose(&mut self.rng).copied()
    }

    fn reply_text(&mut self, positive: bool) -> String {
        let mut words = self.sentiment_words(positive, 2);
        words.extend(self.filler_words(1, 3));
        words.shuffle(&mut self.rng);
        words.join(" ")
    }

    fn shuffled(&mut self, mut words: Vec<String>) -> String {
        words.shuffle(&mut self.rng);
        words.join(" ")
    }

    /// Occasional cleansing fodder attached to a generated post.
    fn extras(&mut self, user: &UserId, post: usize, chunk: usize) {
        if self.chance(self.spec.duplicate_rate) {
            let p = self.posts[post].clone();
            let at = p.created_at + Duration::minutes(1);
            self.push_post(user, at, p.text, p.urls, (0, 0, 0), false, Some("en"));
        }
        if self.chance(self.spec.non_english_rate) {
            let text = (*NON_ENGLISH.choose(&mut self.rng).expect("samples")).to_owned();
            let at = self.instant(chunk);
            self.push_post(user, at, text, Vec::new(), (0, 1, 0), false, None);
        }
    }

    fn influencer(&mut self, user: &UserId, domain: &str, audience: &[UserId]) {
        let host_count = self.rng.gen_range(1..=3);
        let hosts: Vec<String> = (0..host_count).map(|h| format!("{}-{h}.example.org", user.as_str())).collect();
        for chunk in 0..self.spec.chunks {
            for _ in 0..self.range(self.spec.influencer_posts_per_chunk) {
                let n = self.rng.gen_range(2..=3);
                let mut words = self.keywords(domain, n);
                if self.chance(0.3) {
                    words[0] = format!("#{}", words[0]);
                }
                words.extend(self.filler_words(3, 5));
                let text = self.shuffled(words);
                let at = self.instant(chunk);
                let mut urls = Vec::new();
                if self.chance(0.3) {
                    let host = hosts.choose(&mut self.rng).expect("hosts").clone();
                    urls.push(format!("https://{host}/articles/{}", self.post_seq + 1));
                }
                let engagement = (
                    self.rng.gen_range(20..=300),
                    self.rng.gen_range(50..=800),
                    self.rng.gen_range(2..=40),
                );
                let is_retweet = self.chance(self.spec.retweet_rate);
                let post = self.push_post(user, at, text, urls, engagement, is_retweet, Some("en"));

                for _ in 0..self.range(self.spec.influencer_replies_per_post) {
                    let positive = !self.chance(self.spec.influencer_negative_reply_rate);
                    if let Some(author) = self.replier(audience, user) {
                        let text = self.reply_text(positive);
                        self.push_reply(post, author, text);
                    }
                }
                if self.chance(self.spec.owner_reply_rate) {
                    let text = self.reply_text(true);
                    self.push_reply(post, user, text);
                }
                self.extras(user, post, chunk);
            }
        }
    }

    fn spammer(&mut self, user: &UserId, phrase: &str, audience: &[UserId]) {
        let url = format!("http://spam{}.example.net/offer", user.as_str());
        let mut victim = 0usize;
        for chunk in 0..self.spec.chunks {
            for _ in 0..self.range(self.spec.spammer_posts_per_chunk) {
                victim += 1;
                let text = format!("@victim{victim} {phrase} {url}");
                let at = self.instant(chunk);
                let engagement = (self.rng.gen_range(0..=1), self.rng.gen_range(0..=2), 0);
                let post = self.push_post(user, at, text, vec![url.clone()], engagement, false, Some("en"));
                if self.chance(self.spec.spammer_reply_rate) {
                    if let Some(author) = self.replier(audience, user) {
                        let text = self.reply_text(false);
                        self.push_reply(post, author, text);
                    }
                }
            }
        }
    }

    fn generic(&mut self, user: &UserId, interests: &[&String], audience: &[UserId]) {
        for chunk in 0..self.spec.chunks {
            for _ in 0..self.range(self.spec.generic_posts_per_chunk) {
                let mut words = self.filler_words(5, 9);
                if !interests.is_empty() && self.chance(self.spec.generic_topical_rate) {
                    let d = interests[self.rng.gen_range(0..interests.len())].clone();
                    words.extend(self.keywords(&d, 2));
                }
                let at = self.instant(chunk);
                let is_retweet = self.chance(self.spec.retweet_rate);
                let (text, engagement) = if is_retweet {
                    let source = audience.choose(&mut self.rng).map(|u| u.as_str().to_owned()).unwrap_or_default();
                    let body = self.shuffled(words);
                    (
                        format!("RT @{source} {body}"),
                        (self.rng.gen_range(0..=50), self.rng.gen_range(0..=50), self.rng.gen_range(0..=5)),
                    )
                } else {
                    (
                        self.shuffled(words),
                        (self.rng.gen_range(0..=5), self.rng.gen_range(0..=10), self.rng.gen_range(0..=3)),
                    )
                };
                let mut urls = Vec::new();
                if self.chance(self.spec.media_url_rate) {
                    urls.push(format!("https://www.instagram.com/p/{}", self.post_seq + 1));
                }
                let post = self.push_post(user, at, text, urls, engagement, is_retweet, Some("en"));
                if self.chance(self.spec.generic_reply_rate) {
                    if let Some(author) = self.replier(audience, user) {
                        let positive = self.chance(0.5);
                        let text = self.reply_text(positive);
                        self.push_reply(post, author, text);
                    }
                }
                self.extras(user, post, chunk);
            }
        }
    }
}

/// Convenience for specs read from JSON: every omitted field takes its default.
pub fn spec_from_json(src: &str) -> Result<SyntheticSpec, SynthError> {
    serde_json::from_str(src).map_err(|e| SynthError::Spec(e.to_string()))
}

/// Counts of generated users per role, for summaries.
pub fn role_counts(labels: &[RoleLabel]) -> BTreeMap<Role, usize> {
    let mut out = BTreeMap::new();
    for l in labels {
        *out.entry(l.role.clone()).or_insert(0) += 1;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::credibility::tweet_similarity_penalty;

    fn small() -> SyntheticSpec {
        SyntheticSpec {
            influencers_per_domain: 2,
            spammers: 2,
            generic: 4,
            chunks: 2,
            ..SyntheticSpec::default()
        }
    }

    #[test]
    fn deterministic_for_a_seed() {
        let a = generate(&small()).unwrap();
        let b = generate(&small()).unwrap();
        assert_eq!(a, b);
        let c = generate(&SyntheticSpec { seed: 7, ..small() }).unwrap();
        assert_ne!(a.corpus, c.corpus);
    }

    #[test]
    fn role_populations() {
        let s = generate(&small()).unwrap();
        assert_eq!(s.corpus.user_count(), 2 * 4 + 2 + 4);
        assert_eq!(s.spammers().len(), 2);
        assert_eq!(s.influencers("sports").len(), 2);
        let truth = s.ground_truth();
        assert_eq!(truth.influencers("sports"), s.influencers("sports"));
        let labels = s.anomaly_labels();
        assert_eq!(labels.iter().filter(|(_, l)| *l == AnomalyLabel::Anomalous).count(), 2);
    }

    #[test]
    fn spammer_text_is_one_repeated_phrase() {
        let s = generate(&small()).unwrap();
        let spammer = s.spammers().into_iter().next().unwrap();
        let posts: Vec<&Post> = s.corpus.posts().filter(|p| p.user_id == spammer).collect();
        assert!(posts.len() >= 20);
        let (sim, words, distinct) = tweet_similarity_penalty(posts.iter().map(|p| p.text.as_str()), Stopwords::english());
        assert_eq!(distinct, 4);
        assert_eq!(words, 4 * posts.len());
        assert!((sim - 1.0 / posts.len() as f64).abs() < 1e-12);
        let urls: BTreeSet<&String> = posts.iter().flat_map(|p| &p.urls).collect();
        assert_eq!(urls.len(), 1);
    }

    #[test]
    fn rejects_bad_specs() {
        let bad = SyntheticSpec {
            generic_reply_rate: 1.5,
            ..small()
        };
        assert!(matches!(generate(&bad), Err(SynthError::Spec(_))));
        let bad = SyntheticSpec {
            influencer_domains: vec!["nope".into()],
            ..small()
        };
        assert!(matches!(generate(&bad), Err(SynthError::UnknownDomain(_))));
        assert!(spec_from_json(r#"{"seed": 1, "typo": 2}"#).is_err());
        assert_eq!(spec_from_json(r#"{"seed": 9}"#).unwrap().seed, 9);
    }
}
