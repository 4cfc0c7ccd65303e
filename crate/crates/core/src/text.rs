//! Tokenization shared by the similarity penalties and the lexicon provider.

use std::collections::HashSet;
use std::sync::OnceLock;

const DEFAULT_STOPWORDS: &str = include_str!("../assets/stopwords.txt");

/// A replaceable stopword list.
#[derive(Debug, Clone, Default)]
pub struct Stopwords(HashSet<String>);

impl Stopwords {
    /// One word per line; blank lines and `#` comments are ignored.
    pub fn parse(src: &str) -> Self {
        Stopwords(
            src.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .map(str::to_lowercase)
                .collect(),
        )
    }

    pub fn english() -> &'static Stopwords {
        static LIST: OnceLock<Stopwords> = OnceLock::new();
        LIST.get_or_init(|| Stopwords::parse(DEFAULT_STOPWORDS))
    }

    pub fn contains(&self, word: &str) -> bool {
        self.0.contains(word)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// True for whitespace-delimited chunks that look like links.
pub fn is_url_like(raw: &str) -> bool {
    let lower = raw
        .trim_start_matches(|c: char| !c.is_alphanumeric())
        .to_ascii_lowercase();
    lower.contains("://") || lower.starts_with("www.")
}

/// Normalizes one whitespace-delimited chunk.
///
/// Returns `None` for links and @-mentions, and for chunks with no
/// alphanumeric content. Hashtags keep their body.
pub fn normalize_token(raw: &str) -> Option<String> {
    if is_url_like(raw) {
        return None;
    }
    let trimmed = raw.trim_matches(|c: char| !c.is_alphanumeric() && c != '@');
    if trimmed.starts_with('@') {
        return None;
    }
    let trimmed = trimmed.trim_matches(|c: char| !c.is_alphanumeric());
    if trimmed.is_empty() {
        None
    } else {
        Some(trimmed.to_lowercase())
    }
}

/// Content tokens: normalized, with links, mentions and empties dropped.
pub fn content_tokens(text: &str) -> impl Iterator<Item = String> + '_ {
    text.split_whitespace().filter_map(normalize_token)
}

/// Keywords counted by the tweet similarity penalty: content tokens minus
/// stopwords.
pub fn keywords<'a>(text: &'a str, stopwords: &'a Stopwords) -> impl Iterator<Item = String> + 'a {
    content_tokens(text).filter(move |t| !stopwords.contains(t))
}

/// Collapses internal whitespace runs and trims.
pub fn normalize_whitespace(text: &str) -> String {
    text.split_whitespace().collect::<Vec<_>>().join(" ")
}
