use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use thiserror::Error;
use url::Url;

#[derive(Debug, Error)]
pub enum ResolveError {
    #[error("no content available for {0}")]
    Unavailable(String),
    #[error("reading {url}: {source}")]
    Io { url: String, source: std::io::Error },
}

/// Fetches the textual content behind a URL.
pub trait UrlResolver: Send + Sync {
    fn resolve(&self, url: &Url) -> Result<String, ResolveError>;
}

/// Resolves nothing.
#[derive(Debug, Clone, Copy, Default)]
pub struct NullResolver;

impl UrlResolver for NullResolver {
    fn resolve(&self, url: &Url) -> Result<String, ResolveError> {
        Err(ResolveError::Unavailable(url.to_string()))
    }
}

/// Offline resolver: an in-memory fixture table plus `file://` URLs.
/// Never touches the network.
#[derive(Debug, Clone, Default)]
pub struct FixtureResolver {
    fixtures: BTreeMap<String, String>,
    allow_files: bool,
}

impl FixtureResolver {
    pub fn new() -> Self {
        FixtureResolver {
            fixtures: BTreeMap::new(),
            allow_files: true,
        }
    }

    pub fn with_fixture(mut self, url: &str, content: impl Into<String>) -> Self {
        self.insert(url, content);
        self
    }

    pub fn insert(&mut self, url: &str, content: impl Into<String>) {
        let key = Url::parse(url).map(|u| u.to_string()).unwrap_or_else(|_| url.to_owned());
        self.fixtures.insert(key, content.into());
    }

    pub fn allow_files(mut self, allow: bool) -> Self {
        self.allow_files = allow;
        self
    }

    /// Loads a JSON object mapping URL to page text.
    pub fn from_json_file(path: &Path) -> Result<Self, Box<dyn std::error::Error + Send + Sync>> {
        let table: BTreeMap<String, String> = serde_json::from_str(&fs::read_to_string(path)?)?;
        let mut r = FixtureResolver::new();
        for (url, text) in table {
            r.insert(&url, text);
        }
        Ok(r)
    }
}

impl UrlResolver for FixtureResolver {
    fn resolve(&self, url: &Url) -> Result<String, ResolveError> {
        if let Some(text) = self.fixtures.get(url.as_str()) {
            return Ok(text.clone());
        }
        if self.allow_files && url.scheme() == "file" {
            let path = url
                .to_file_path()
                .map_err(|_| ResolveError::Unavailable(url.to_string()))?;
            return fs::read_to_string(&path).map_err(|source| ResolveError::Io {
                url: url.to_string(),
                source,
            });
        }
        Err(ResolveError::Unavailable(url.to_string()))
    }
}
