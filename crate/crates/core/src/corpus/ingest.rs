use std::fmt;
use std::fs::{self, File};
use std::io::{self, BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;
use thiserror::Error;
use url::Url;

use super::model::{Corpus, IntegrityError, Post, Reply, UserProfile};

pub const USERS_FILE: &str = "users.jsonl";
pub const POSTS_FILE: &str = "posts.jsonl";
pub const REPLIES_FILE: &str = "replies.jsonl";

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "snake_case")]
pub enum RecordKind {
    User,
    Post,
    Reply,
}

impl fmt::Display for RecordKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RecordKind::User => USERS_FILE,
            RecordKind::Post => POSTS_FILE,
            RecordKind::Reply => REPLIES_FILE,
        })
    }
}

/// Why one input line was rejected.
#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct Diagnostic {
    pub source: RecordKind,
    /// 1-based line number.
    pub line: usize,
    pub field: Option<String>,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.source, self.line)?;
        if let Some(field) = &self.field {
            write!(f, " field `{field}`")?;
        }
        write!(f, ": {}", self.message)
    }
}

#[derive(Debug)]
pub struct Ingested {
    pub corpus: Corpus,
    pub diagnostics: Vec<Diagnostic>,
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("cannot read {path}: {source}")]
    Io { path: PathBuf, source: io::Error },
}

/// Loads users, then posts, then replies. Lines that fail the schema or the
/// integrity rules are skipped and reported; the rest are loaded.
pub fn ingest(users: impl BufRead, posts: impl BufRead, replies: impl BufRead) -> io::Result<Ingested> {
    let mut corpus = Corpus::default();
    let mut diagnostics = Vec::new();

    for (line, rec) in read_records::<UserProfile>(users, RecordKind::User, &mut diagnostics)? {
        if let Err(e) = corpus.insert_user(rec) {
            diagnostics.push(integrity_diag(RecordKind::User, line, e));
        }
    }
    for (line, rec) in read_records::<Post>(posts, RecordKind::Post, &mut diagnostics)? {
        if let Some((idx, msg)) = invalid_url(&rec.urls) {
            diagnostics.push(Diagnostic {
                source: RecordKind::Post,
                line,
                field: Some(format!("urls[{idx}]")),
                message: msg,
            });
            continue;
        }
        if let Err(e) = corpus.insert_post(rec) {
            diagnostics.push(integrity_diag(RecordKind::Post, line, e));
        }
    }
    for (line, rec) in read_records::<Reply>(replies, RecordKind::Reply, &mut diagnostics)? {
        if let Err(e) = corpus.insert_reply(rec) {
            diagnostics.push(integrity_diag(RecordKind::Reply, line, e));
        }
    }
    Ok(Ingested { corpus, diagnostics })
}

/// Ingests `users.jsonl`, `posts.jsonl` and `replies.jsonl` from `dir`.
pub fn ingest_dir(dir: &Path) -> Result<Ingested, IngestError> {
    ingest_files(&dir.join(USERS_FILE), &dir.join(POSTS_FILE), &dir.join(REPLIES_FILE))
}

pub fn ingest_files(users: &Path, posts: &Path, replies: &Path) -> Result<Ingested, IngestError> {
    let open = |p: &Path| {
        File::open(p).map(BufReader::new).map_err(|source| IngestError::Io {
            path: p.to_path_buf(),
            source,
        })
    };
    let (u, p, r) = (open(users)?, open(posts)?, open(replies)?);
    ingest(u, p, r).map_err(|source| IngestError::Io {
        path: users.parent().unwrap_or(Path::new(".")).to_path_buf(),
        source,
    })
}

/// Writes the corpus as the three JSONL files, records in id order.
pub fn write_dir(corpus: &Corpus, dir: &Path) -> io::Result<()> {
    fs::create_dir_all(dir)?;
    write_jsonl(&dir.join(USERS_FILE), corpus.users())?;
    write_jsonl(&dir.join(POSTS_FILE), corpus.posts())?;
    write_jsonl(&dir.join(REPLIES_FILE), corpus.replies())
}

pub fn write_jsonl<'a, T: Serialize + 'a>(path: &Path, records: impl Iterator<Item = &'a T>) -> io::Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for rec in records {
        serde_json::to_writer(&mut w, rec)?;
        w.write_all(b"\n")?;
    }
    w.flush()
}

fn read_records<T: DeserializeOwned>(
    input: impl BufRead,
    kind: RecordKind,
    diagnostics: &mut Vec<Diagnostic>,
) -> io::Result<Vec<(usize, T)>> {
    let mut out = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let mut de = serde_json::Deserializer::from_str(&line);
        let parsed = serde_path_to_error::deserialize::<_, T>(&mut de);
        match parsed {
            Ok(rec) => match de.end() {
                Ok(()) => out.push((idx + 1, rec)),
                Err(e) => diagnostics.push(Diagnostic {
                    source: kind,
                    line: idx + 1,
                    field: None,
                    message: e.to_string(),
                }),
            },
            Err(err) => {
                let path = err.path().to_string();
                let message = err.into_inner().to_string();
                let field = if path != "." && !path.is_empty() {
                    Some(path)
                } else {
                    missing_field(&message)
                };
                diagnostics.push(Diagnostic {
                    source: kind,
                    line: idx + 1,
                    field,
                    message,
                });
            }
        }
    }
    Ok(out)
}

fn missing_field(msg: &str) -> Option<String> {
    let rest = msg.strip_prefix("missing field `")?;
    rest.split('`').next().map(str::to_owned)
}

fn invalid_url(urls: &[String]) -> Option<(usize, String)> {
    urls.iter().enumerate().find_map(|(i, raw)| match Url::parse(raw) {
        Ok(u) if u.has_host() || u.scheme() == "file" => None,
        Ok(_) => Some((i, format!("url `{raw}` has no host"))),
        Err(e) => Some((i, format!("invalid url `{raw}`: {e}"))),
    })
}

fn integrity_diag(kind: RecordKind, line: usize, err: IntegrityError) -> Diagnostic {
    let field = match &err {
        IntegrityError::DuplicateUser(_) => "user_id",
        IntegrityError::DuplicatePost(_) => "post_id",
        IntegrityError::DuplicateReply(_) => "reply_id",
        IntegrityError::UnknownAuthor { .. } => "user_id",
        IntegrityError::PostBeforeProfile { .. } => "created_at",
        IntegrityError::UnknownParent { .. } => "parent_post_id",
    };
    Diagnostic {
        source: kind,
        line,
        field: Some(field.to_owned()),
        message: err.to_string(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn user(id: &str) -> String {
        format!(
            r#"{{"user_id":"{id}","handle":"h{id}","created_at":"2014-01-01T00:00:00Z","followers_count":10,"friends_count":5,"bio":""}}"#
        )
    }

    fn post(id: &str, user: &str) -> String {
        format!(
            r#"{{"post_id":"{id}","user_id":"{user}","created_at":"2015-01-02T10:00:00+02:00","text":"hello world","urls":["https://example.com/a"],"retweet_count":1,"favorite_count":2,"replies_count":0,"is_retweet":false,"language":null}}"#
        )
    }

    fn run(users: &[String], posts: &[String], replies: &[String]) -> Ingested {
        ingest(
            users.join("\n").as_bytes(),
            posts.join("\n").as_bytes(),
            replies.join("\n").as_bytes(),
        )
        .unwrap()
    }

    #[test]
    fn loads_valid_records() {
        let users: Vec<_> = ["a", "b", "c"].iter().map(|u| user(u)).collect();
        let posts: Vec<_> = (0..5).map(|i| post(&format!("p{i}"), "a")).collect();
        let out = run(&users, &posts, &[]);
        assert!(out.diagnostics.is_empty(), "{:?}", out.diagnostics);
        assert_eq!(out.corpus.user_count(), 3);
        assert_eq!(out.corpus.post_count(), 5);
    }

    #[test]
    fn timestamps_are_normalized_to_utc() {
        let out = run(&[user("a")], &[post("p", "a")], &[]);
        let p = out.corpus.posts().next().unwrap();
        assert_eq!(p.created_at.to_rfc3339(), "2015-01-02T08:00:00+00:00");
    }

    #[test]
    fn dangling_author_rejects_only_that_post() {
        let out = run(&[user("a")], &[post("p1", "a"), post("p2", "ghost")], &[]);
        assert_eq!(out.corpus.post_count(), 1);
        assert_eq!(out.diagnostics.len(), 1);
        assert_eq!(out.diagnostics[0].line, 2);
        assert_eq!(out.diagnostics[0].field.as_deref(), Some("user_id"));
    }

    #[test]
    fn duplicate_post_id_rejects_second_occurrence() {
        let out = run(&[user("a")], &[post("p1", "a"), post("p1", "a")], &[]);
        assert_eq!(out.corpus.post_count(), 1);
        assert_eq!(out.diagnostics[0].line, 2);
        assert_eq!(out.diagnostics[0].field.as_deref(), Some("post_id"));
    }

    #[test]
    fn schema_violation_names_field() {
        let bad = user("a").replace("10", "-3");
        let missing = r#"{"user_id":"b","handle":"x","followers_count":1,"friends_count":1,"bio":""}"#;
        let out = run(&[bad, missing.to_owned()], &[], &[]);
        assert_eq!(out.corpus.user_count(), 0);
        assert_eq!(out.diagnostics[0].field.as_deref(), Some("followers_count"));
        assert_eq!(out.diagnostics[1].field.as_deref(), Some("created_at"));
        assert_eq!(out.diagnostics[1].line, 2);
    }

    #[test]
    fn invalid_url_rejects_post() {
        let p = post("p1", "a").replace("https://example.com/a", "not a url");
        let out = run(&[user("a")], &[p], &[]);
        assert_eq!(out.corpus.post_count(), 0);
        assert_eq!(out.diagnostics[0].field.as_deref(), Some("urls[0]"));
    }

    #[test]
    fn reply_to_unknown_post_rejected() {
        let r = r#"{"reply_id":"r1","parent_post_id":"nope","author_user_id":"x","created_at":"2015-01-03T00:00:00Z","text":"hi"}"#;
        let out = run(&[user("a")], &[post("p1", "a")], &[r.to_owned()]);
        assert_eq!(out.corpus.reply_count(), 0);
        assert_eq!(out.diagnostics[0].field.as_deref(), Some("parent_post_id"));
    }

    #[test]
    fn ingest_is_deterministic_and_round_trips() {
        let users: Vec<_> = ["b", "a"].iter().map(|u| user(u)).collect();
        let posts = vec![post("p2", "b"), post("p1", "a")];
        let a = run(&users, &posts, &[]);
        let b = run(&users, &posts, &[]);
        assert_eq!(a.corpus, b.corpus);

        let dir = tempfile::tempdir().unwrap();
        write_dir(&a.corpus, dir.path()).unwrap();
        let back = ingest_dir(dir.path()).unwrap();
        assert!(back.diagnostics.is_empty());
        assert_eq!(back.corpus, a.corpus);
    }
}
