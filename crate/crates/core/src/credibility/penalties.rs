use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use url::Url;

use crate::corpus::Post;
use crate::text::{keywords, Stopwords};

/// Redundancy penalties for one user over one span of posts.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimilarityPenalties {
    pub twt_sim: f64,
    pub url_sim: f64,
    pub word_count: usize,
    pub distinct_word_count: usize,
    pub url_count: usize,
    pub distinct_url_count: usize,
    pub distinct_host_count: usize,
}

impl Default for SimilarityPenalties {
    /// Penalties of a user with no posts.
    fn default() -> Self {
        SimilarityPenalties {
            twt_sim: 1.0,
            url_sim: 0.0,
            word_count: 0,
            distinct_word_count: 0,
            url_count: 0,
            distinct_url_count: 0,
            distinct_host_count: 0,
        }
    }
}

/// `#DistinctWords / #Words` over stopword-free keywords; 1 when there are
/// no keywords. Returns `(twt_sim, #Words, #DistinctWords)`.
pub fn tweet_similarity_penalty<'a>(texts: impl IntoIterator<Item = &'a str>, stopwords: &Stopwords) -> (f64, usize, usize) {
    let mut total = 0usize;
    let mut distinct = HashSet::new();
    for text in texts {
        for w in keywords(text, stopwords) {
            total += 1;
            distinct.insert(w);
        }
    }
    let sim = if total == 0 { 1.0 } else { distinct.len() as f64 / total as f64 };
    (sim, total, distinct.len())
}

/// `0.5 * (#DistinctURLs + #DistinctURLsHosts) / #URLs`; 0 when there are no
/// URLs. Returns `(url_sim, #URLs, #DistinctURLs, #DistinctURLsHosts)`.
pub fn url_similarity_penalty<'a>(urls: impl IntoIterator<Item = &'a str>) -> (f64, usize, usize, usize) {
    let mut total = 0usize;
    let mut distinct = HashSet::new();
    let mut hosts = HashSet::new();
    for raw in urls {
        total += 1;
        match Url::parse(raw.trim()) {
            Ok(u) => {
                hosts.insert(u.host_str().unwrap_or_default().to_ascii_lowercase());
                distinct.insert(u.to_string());
            }
            Err(_) => {
                hosts.insert(String::new());
                distinct.insert(raw.trim().to_owned());
            }
        }
    }
    let sim = if total == 0 {
        0.0
    } else {
        0.5 * ((distinct.len() + hosts.len()) as f64 / total as f64)
    };
    (sim, total, distinct.len(), hosts.len())
}

pub fn similarity_penalties<'a>(posts: impl IntoIterator<Item = &'a Post> + Clone, stopwords: &Stopwords) -> SimilarityPenalties {
    let (twt_sim, word_count, distinct_word_count) =
        tweet_similarity_penalty(posts.clone().into_iter().map(|p| p.text.as_str()), stopwords);
    let (url_sim, url_count, distinct_url_count, distinct_host_count) =
        url_similarity_penalty(posts.into_iter().flat_map(|p| p.urls.iter().map(String::as_str)));
    SimilarityPenalties {
        twt_sim,
        url_sim,
        word_count,
        distinct_word_count,
        url_count,
        distinct_url_count,
        distinct_host_count,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_distinct_and_empty() {
        let sw = Stopwords::english();
        assert_eq!(tweet_similarity_penalty(["alpha beta gamma"], sw).0, 1.0);
        assert_eq!(tweet_similarity_penalty(std::iter::empty(), sw), (1.0, 0, 0));
        assert_eq!(url_similarity_penalty(std::iter::empty()), (0.0, 0, 0, 0));
    }

    #[test]
    fn repeated_tweet() {
        // 4 keywords x 10 repeats
        let texts = vec!["grab free followers instantly"; 10];
        assert_eq!(tweet_similarity_penalty(texts, Stopwords::english()), (0.1, 40, 4));
    }

    #[test]
    fn repeated_url() {
        let urls = vec!["https://spam.example.net/offer"; 5];
        let (sim, n, d, h) = url_similarity_penalty(urls);
        assert_eq!((n, d, h), (5, 1, 1));
        assert_eq!(sim, 0.2);
    }

    #[test]
    fn unique_urls_and_hosts_score_one() {
        let urls = ["https://a.org/1", "https://b.org/1", "http://c.org:8080/x"];
        assert_eq!(url_similarity_penalty(urls).0, 1.0);
    }

    #[test]
    fn host_ignores_port_and_case() {
        let urls = ["https://WWW.Example.com:8443/a", "https://www.example.com/b"];
        assert_eq!(url_similarity_penalty(urls).3, 1);
    }
}
