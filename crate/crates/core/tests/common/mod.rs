//! Small random corpora over a toy lexicon, shared by the integration tests.

#![allow(dead_code)]

pub mod oracle;

use std::collections::BTreeMap;

use chrono::{DateTime, Duration, TimeZone, Utc};
use credrank::corpus::{Post, PostId, Reply, ReplyId};
use credrank::credibility::{AttributeWeights, CredibilityConfig, Scorer};
use credrank::semantics::{FixtureResolver, Lexicon, SentimentLexicon};
use credrank::text::Stopwords;
use credrank::{Corpus, DomainRegistry, LexiconProvider, UserId, UserProfile};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const TOY_DOMAINS: [(&str, [&str; 3]); 4] = [
    ("alpha", ["apple", "apricot", "avocado"]),
    ("beta", ["banana", "blueberry", "basil"]),
    ("gamma", ["cherry", "cabbage", "celery"]),
    ("delta", ["date", "dill", "durian"]),
];

const FILLER: [&str; 8] = ["river", "stone", "cloud", "lamp", "mint", "the", "and", "is"];
const TONE: [&str; 6] = ["good", "great", "bad", "awful", "fine", "meh"];
const URLS: [&str; 6] = [
    "http://h1.test/a",
    "http://h1.test/b",
    "http://h2.test/a",
    "http://h3.test:8080/x",
    "https://www.h4.test/long/path",
    "http://h5.test/",
];

pub struct Setup {
    pub corpus: Corpus,
    pub registry: DomainRegistry,
    pub provider: LexiconProvider,
    pub resolver: FixtureResolver,
    pub fixtures: BTreeMap<String, String>,
    pub stopwords: Stopwords,
    pub config: CredibilityConfig,
}

impl Setup {
    pub fn scorer(&self) -> Scorer<'_> {
        Scorer {
            config: &self.config,
            registry: &self.registry,
            provider: &self.provider,
            resolver: &self.resolver,
            stopwords: &self.stopwords,
        }
    }

    pub fn with_corpus(&self, corpus: Corpus) -> Setup {
        Setup {
            corpus,
            registry: self.registry.clone(),
            provider: self.provider.clone(),
            resolver: self.resolver.clone(),
            fixtures: self.fixtures.clone(),
            stopwords: self.stopwords.clone(),
            config: self.config.clone(),
        }
    }
}

fn month(y: i32, m: u32) -> DateTime<Utc> {
    Utc.with_ymd_and_hms(y, m, 1, 0, 0, 0).unwrap()
}

/// Random corpus with at most `max_users` users over `domains` toy domains
/// and `chunks` monthly chunks starting January 2015.
pub fn random_setup(seed: u64, max_users: usize, domains: usize, chunks: usize) -> Setup {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let toy = &TOY_DOMAINS[..domains];
    let registry = DomainRegistry::new(toy.iter().map(|(d, _)| *d)).unwrap();
    let lexicon: Lexicon = toy.iter().map(|(d, ws)| (d.to_string(), ws.iter().map(|w| w.to_string()).collect())).collect();
    let sentiment = SentimentLexicon {
        positive: vec!["good".into(), "great".into()],
        negative: vec!["bad".into(), "awful".into()],
    };
    let provider = LexiconProvider::new(&registry, &lexicon, &sentiment).unwrap();
    let keywords: Vec<&str> = toy.iter().flat_map(|(_, ws)| ws.iter().copied()).collect();

    let mut fixtures = BTreeMap::new();
    fixtures.insert(URLS[0].to_string(), format!("{} {} {}", keywords[0], keywords[1], keywords[3]));
    fixtures.insert(URLS[2].to_string(), format!("{} {}", keywords[keywords.len() - 1], keywords[keywords.len() - 2]));
    fixtures.insert(URLS[4].to_string(), format!("{} river", keywords[4]));
    let mut resolver = FixtureResolver::new().allow_files(false);
    for (u, t) in &fixtures {
        resolver.insert(u, t.clone());
    }

    let n_users = rng.gen_range(2..=max_users);
    let mut users = Vec::new();
    for i in 0..n_users {
        let followers = rng.gen_range(0..1000u64);
        let friends = if rng.gen_bool(0.2) { followers } else { rng.gen_range(0..1000u64) };
        users.push(UserProfile {
            user_id: UserId::from(format!("u{i}")),
            handle: format!("h{i}"),
            created_at: month(2010, 1) + Duration::days(rng.gen_range(0..1800)),
            followers_count: followers,
            friends_count: friends,
            bio: String::new(),
        });
    }

    let mut posts = Vec::new();
    for u in &users {
        for c in 0..chunks {
            let start = month(2015, 1 + c as u32);
            for _ in 0..rng.gen_range(0..=5) {
                let mut words: Vec<String> = Vec::new();
                for _ in 0..rng.gen_range(1..=7) {
                    let w = if rng.gen_bool(0.5) {
                        keywords.choose(&mut rng).unwrap().to_string()
                    } else {
                        FILLER.choose(&mut rng).unwrap().to_string()
                    };
                    words.push(match rng.gen_range(0..10) {
                        0 => format!("#{w}"),
                        1 => format!("{w},"),
                        2 => format!("@{w}"),
                        _ => w,
                    });
                }
                let urls: Vec<String> = (0..rng.gen_range(0..=2)).map(|_| URLS.choose(&mut rng).unwrap().to_string()).collect();
                posts.push(Post {
                    post_id: PostId::from(format!("p{:04}", posts.len())),
                    user_id: u.user_id.clone(),
                    created_at: start + Duration::seconds(rng.gen_range(0..27 * 86_400)),
                    text: words.join(" "),
                    urls,
                    retweet_count: rng.gen_range(0..20),
                    favorite_count: rng.gen_range(0..20),
                    replies_count: rng.gen_range(0..5),
                    is_retweet: rng.gen_bool(0.15),
                    language: Some("en".into()),
                });
            }
        }
    }
    if posts.is_empty() {
        posts.push(Post {
            post_id: PostId::from("p0000"),
            user_id: users[0].user_id.clone(),
            created_at: month(2015, chunks as u32) + Duration::days(1),
            text: format!("{} {}", keywords[0], keywords[1]),
            urls: vec![],
            retweet_count: 1,
            favorite_count: 1,
            replies_count: 0,
            is_retweet: false,
            language: None,
        });
    }

    let mut replies = Vec::new();
    for p in &posts {
        for _ in 0..rng.gen_range(0..=3) {
            let author = &users.choose(&mut rng).unwrap().user_id;
            let text: Vec<&str> = (0..rng.gen_range(1..=3)).map(|_| *TONE.choose(&mut rng).unwrap()).collect();
            replies.push(Reply {
                reply_id: ReplyId::from(format!("r{:05}", replies.len())),
                parent_post_id: p.post_id.clone(),
                author_user_id: author.clone(),
                created_at: p.created_at + Duration::hours(rng.gen_range(1..24 * 40)),
                text: text.join(" "),
            });
        }
    }

    let weights = {
        let raw: Vec<f64> = (0..6).map(|_| rng.gen_range(0.05..1.0)).collect();
        let total: f64 = raw.iter().sum();
        let mut w: Vec<f64> = raw.iter().map(|x| x / total).collect();
        w[5] = 1.0 - w[..5].iter().sum::<f64>();
        AttributeWeights::from_slice(&w).unwrap()
    };
    let config = CredibilityConfig {
        rho: *[0.0, 0.5, 1.0, 2.0].choose(&mut rng).unwrap(),
        window: chunks,
        weights,
        ..CredibilityConfig::default()
    };

    Setup {
        corpus: Corpus::new(users, posts, replies).unwrap(),
        registry,
        provider,
        resolver,
        fixtures,
        stopwords: Stopwords::english().clone(),
        config,
    }
}
