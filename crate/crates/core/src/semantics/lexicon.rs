use std::collections::{BTreeMap, HashMap, HashSet};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{DomainLabel, DomainRegistry, SemanticsProvider, SentimentScore, TaxonomyAssignment, MAX_ASSIGNMENTS};
use crate::text::{content_tokens, is_url_like};

const DEFAULT_LEXICON: &str = include_str!("../../assets/lexicon.json");
const DEFAULT_SENTIMENT: &str = include_str!("../../assets/sentiment.json");

/// `{domain_label: [keyword, ...]}`
pub type Lexicon = BTreeMap<String, Vec<String>>;

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SentimentLexicon {
    pub positive: Vec<String>,
    pub negative: Vec<String>,
}

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("lexicon domain `{0}` is not in the domain registry")]
    UnknownDomain(String),
    #[error("invalid lexicon: {0}")]
    Parse(#[from] serde_json::Error),
}

/// Bag-of-tokens keyword classifier.
///
/// `hits(d)` counts tokens that appear in domain `d`'s keyword list. The top
/// three domains by hits are returned with `score = hits(d) / max hits`;
/// every assignment is confident when the total hit count is at least
/// `min_confident_hits`. Sentiment is `(pos - neg) / (pos + neg)`.
#[derive(Debug, Clone)]
pub struct LexiconProvider {
    labels: Vec<DomainLabel>,
    keywords: HashMap<String, Vec<usize>>,
    positive: HashSet<String>,
    negative: HashSet<String>,
    min_confident_hits: usize,
    english_ratio: f64,
}

impl LexiconProvider {
    pub fn new(
        registry: &DomainRegistry,
        lexicon: &Lexicon,
        sentiment: &SentimentLexicon,
    ) -> Result<Self, LexiconError> {
        let mut keywords: HashMap<String, Vec<usize>> = HashMap::new();
        for (label, words) in lexicon {
            let idx = registry
                .position(label)
                .ok_or_else(|| LexiconError::UnknownDomain(label.clone()))?;
            for w in words {
                let entry = keywords.entry(w.to_lowercase()).or_default();
                if !entry.contains(&idx) {
                    entry.push(idx);
                }
            }
        }
        let lower = |v: &[String]| v.iter().map(|w| w.to_lowercase()).collect::<HashSet<_>>();
        Ok(LexiconProvider {
            labels: registry.labels().to_vec(),
            keywords,
            positive: lower(&sentiment.positive),
            negative: lower(&sentiment.negative),
            min_confident_hits: 2,
            english_ratio: 0.7,
        })
    }

    /// Parses lexicon and sentiment lexicon JSON documents.
    pub fn from_json(registry: &DomainRegistry, lexicon: &str, sentiment: &str) -> Result<Self, LexiconError> {
        let lex: Lexicon = serde_json::from_str(lexicon)?;
        let sent: SentimentLexicon = serde_json::from_str(sentiment)?;
        Self::new(registry, &lex, &sent)
    }

    /// Shipped keyword lists; domains missing from `registry` are dropped.
    pub fn shipped(registry: &DomainRegistry) -> Self {
        let mut lex: Lexicon = serde_json::from_str(DEFAULT_LEXICON).expect("shipped lexicon is valid");
        lex.retain(|label, _| registry.position(label).is_some());
        let sent: SentimentLexicon = serde_json::from_str(DEFAULT_SENTIMENT).expect("shipped sentiment lexicon is valid");
        Self::new(registry, &lex, &sent).expect("filtered lexicon matches registry")
    }

    pub fn shipped_lexicon() -> Lexicon {
        serde_json::from_str(DEFAULT_LEXICON).expect("shipped lexicon is valid")
    }

    pub fn shipped_sentiment() -> SentimentLexicon {
        serde_json::from_str(DEFAULT_SENTIMENT).expect("shipped sentiment lexicon is valid")
    }

    pub fn with_min_confident_hits(mut self, hits: usize) -> Self {
        self.min_confident_hits = hits;
        self
    }

    fn domain_hits(&self, text: &str) -> Vec<usize> {
        let mut hits = vec![0usize; self.labels.len()];
        for tok in content_tokens(text) {
            if let Some(domains) = self.keywords.get(&tok) {
                for &d in domains {
                    hits[d] += 1;
                }
            }
        }
        hits
    }
}

impl Default for LexiconProvider {
    fn default() -> Self {
        Self::shipped(&DomainRegistry::default())
    }
}

impl SemanticsProvider for LexiconProvider {
    fn classify_text(&self, text: &str) -> Vec<TaxonomyAssignment> {
        let hits = self.domain_hits(text);
        let total: usize = hits.iter().sum();
        if total == 0 {
            return Vec::new();
        }
        let mut ranked: Vec<(usize, usize)> = hits
            .iter()
            .enumerate()
            .filter(|(_, &h)| h > 0)
            .map(|(d, &h)| (d, h))
            .collect();
        ranked.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| self.labels[a.0].cmp(&self.labels[b.0])));
        ranked.truncate(MAX_ASSIGNMENTS);
        let max = ranked[0].1 as f64;
        let confident = total >= self.min_confident_hits;
        ranked
            .into_iter()
            .map(|(d, h)| TaxonomyAssignment {
                domain: self.labels[d].clone(),
                score: (h as f64 / max).clamp(0.0, 1.0),
                confident,
            })
            .collect()
    }

    fn sentiment(&self, text: &str) -> SentimentScore {
        let (mut pos, mut neg) = (0usize, 0usize);
        for tok in content_tokens(text) {
            if self.positive.contains(&tok) {
                pos += 1;
            }
            if self.negative.contains(&tok) {
                neg += 1;
            }
        }
        if pos + neg == 0 {
            return SentimentScore::NEUTRAL;
        }
        SentimentScore::new((pos as f64 - neg as f64) / (pos + neg) as f64)
    }

    /// At least 70% of word tokens are plain ASCII letters. Links, mentions
    /// and tokens without letters are not counted; no word tokens at all
    /// means "not English".
    fn is_english(&self, text: &str) -> bool {
        let (mut words, mut ascii) = (0usize, 0usize);
        for raw in text.split_whitespace() {
            if is_url_like(raw) || raw.trim_start_matches(|c: char| !c.is_alphanumeric() && c != '@').starts_with('@') {
                continue;
            }
            let tok = raw.trim_matches(|c: char| !c.is_alphanumeric());
            if !tok.chars().any(char::is_alphabetic) {
                continue;
            }
            words += 1;
            if tok.chars().all(|c| c.is_ascii_alphabetic() || c == '\'' || c == '-') {
                ascii += 1;
            }
        }
        words > 0 && ascii as f64 >= self.english_ratio * words as f64
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::{FixtureResolver, NullResolver};

    fn small() -> LexiconProvider {
        let reg = DomainRegistry::new(["sports", "education", "arts"]).unwrap();
        let lex: Lexicon = [
            ("sports".to_owned(), vec!["football".into(), "goal".into(), "match".into()]),
            ("education".to_owned(), vec!["school".into(), "exam".into()]),
            ("arts".to_owned(), vec!["film".into()]),
        ]
        .into_iter()
        .collect();
        let sent = SentimentLexicon {
            positive: vec!["great".into(), "love".into()],
            negative: vec!["awful".into()],
        };
        LexiconProvider::new(&reg, &lex, &sent).unwrap()
    }

    #[test]
    fn empty_text_has_no_domains() {
        assert!(small().classify_text("").is_empty());
    }

    #[test]
    fn scores_follow_hit_ratio() {
        // hits: sports 3, education 1; total 4 >= 2
        let out = small().classify_text("football goal match at school");
        assert_eq!(out.len(), 2);
        assert_eq!(out[0].domain.as_str(), "sports");
        assert_eq!(out[0].score, 1.0);
        assert_eq!(out[1].domain.as_str(), "education");
        assert_eq!(out[1].score, 1.0 / 3.0);
        assert!(out.iter().all(|a| a.confident));
    }

    #[test]
    fn single_domain_and_single_hit_confidence() {
        let p = small();
        let out = p.classify_text("Exam tomorrow!");
        assert_eq!(out.len(), 1);
        assert_eq!(out[0].domain.as_str(), "education");
        assert!(!out[0].confident);
        assert!(p.classify_text("exam and school").iter().all(|a| a.confident));
    }

    #[test]
    fn at_most_three_distinct_domains_and_order_free() {
        let reg = DomainRegistry::new(["a", "b", "c", "d"]).unwrap();
        let lex: Lexicon = ["a", "b", "c", "d"]
            .iter()
            .map(|d| (d.to_string(), vec![format!("{d}{d}")]))
            .collect();
        let p = LexiconProvider::new(&reg, &lex, &SentimentLexicon::default()).unwrap();
        let out = p.classify_text("aa bb cc dd aa");
        assert_eq!(out.len(), 3);
        assert_eq!(out[0].domain.as_str(), "a");
        assert_eq!(p.classify_text("dd aa cc bb aa"), out);
    }

    #[test]
    fn sentiment_tally() {
        let p = small();
        assert_eq!(p.sentiment("").value(), 0.0);
        assert_eq!(p.sentiment("great, love it").value(), 1.0);
        assert_eq!(p.sentiment("great but awful").value(), 0.0);
        // (1 - 2) / 3
        assert_eq!(p.sentiment("great awful awful").value(), -1.0 / 3.0);
    }

    #[test]
    fn english_detection() {
        let p = small();
        assert!(p.is_english("the quick brown fox"));
        assert!(p.is_english("Check this https://example.com/x @bob #news 2015"));
        assert!(!p.is_english("Привет как дела"));
        assert!(!p.is_english("東京は晴れです"));
        assert!(!p.is_english(""));
        assert!(!p.is_english("123 456"));
    }

    #[test]
    fn url_classification_delegates_to_text() {
        let p = small();
        let r = FixtureResolver::new().with_fixture("https://ex.com/a", "film film school");
        assert_eq!(p.classify_url("https://ex.com/a", &r), p.classify_text("film film school"));
        assert!(p.classify_url("https://ex.com/missing", &r).is_empty());
        assert!(p.classify_url("https://ex.com/a", &NullResolver).is_empty());
    }

    #[test]
    fn unknown_lexicon_domain_rejected() {
        let reg = DomainRegistry::new(["x"]).unwrap();
        let lex: Lexicon = [("y".to_owned(), vec!["w".to_owned()])].into_iter().collect();
        assert!(matches!(
            LexiconProvider::new(&reg, &lex, &SentimentLexicon::default()),
            Err(LexiconError::UnknownDomain(_))
        ));
    }

    #[test]
    fn shipped_lexicon_covers_registry() {
        let reg = DomainRegistry::default();
        let lex = LexiconProvider::shipped_lexicon();
        assert_eq!(lex.len(), reg.len());
        let p = LexiconProvider::default();
        let out = p.classify_text("The football team won the match, great goals");
        assert_eq!(out[0].domain.as_str(), "sports");
    }
}
