//! On-disk layout of the score stage, so later stages can be re-run alone.
//!
//! ```text
//! <out>/domains.json                   registry used for scoring
//! <out>/profiles.csv                   user_id,handle,followers_count,friends_count
//! <out>/ffr.csv                        user_id,ff_r,ff_r_norm,age_years
//! <out>/penalties.csv                  window-level similarity penalties
//! <out>/trust_levels.csv               user_id,domain,tc_scaled,level,label
//! <out>/matrices/chunk_<k>/<m>.{csv,json}
//! <out>/matrices/{tc,tc_scaled}.{csv,json}
//! <out>/rankings/<domain-slug>.csv     rank,user_id,handle,tc,tc_scaled,level,stars
//! ```

use std::collections::BTreeMap;
use std::fs::{self, File};
use std::io::{self, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{Corpus, UserId};
use crate::credibility::{CredibilityError, DomainMatrix, MatrixName, SimilarityPenalties, TrustLevel, WindowScores};
use crate::semantics::{DomainLabel, DomainRegistry};

pub const DOMAINS_FILE: &str = "domains.json";
pub const PROFILES_FILE: &str = "profiles.csv";
pub const FFR_FILE: &str = "ffr.csv";
pub const PENALTIES_FILE: &str = "penalties.csv";
pub const TRUST_FILE: &str = "trust_levels.csv";
pub const MATRICES_DIR: &str = "matrices";
pub const RANKINGS_DIR: &str = "rankings";

#[derive(Debug, Error)]
pub enum ArtifactError {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("{path}: {source}")]
    Csv { path: PathBuf, source: csv::Error },
    #[error("{path}: {source}")]
    Json { path: PathBuf, source: serde_json::Error },
    #[error("{path}: {message}")]
    Invalid { path: PathBuf, message: String },
    #[error(transparent)]
    Credibility(#[from] CredibilityError),
}

impl ArtifactError {
    fn io(path: &Path) -> impl FnOnce(io::Error) -> Self + '_ {
        move |source| ArtifactError::Io { path: path.to_owned(), source }
    }

    fn csv(path: &Path) -> impl FnOnce(csv::Error) -> Self + '_ {
        move |source| ArtifactError::Csv { path: path.to_owned(), source }
    }

    fn json(path: &Path) -> impl FnOnce(serde_json::Error) -> Self + '_ {
        move |source| ArtifactError::Json { path: path.to_owned(), source }
    }
}

/// File-name form of a domain label: lowercase alphanumerics joined by `_`.
pub fn domain_slug(label: &str) -> String {
    let mut out = String::with_capacity(label.len());
    for c in label.chars() {
        if c.is_alphanumeric() {
            out.extend(c.to_lowercase());
        } else if !out.is_empty() && !out.ends_with('_') {
            out.push('_');
        }
    }
    while out.ends_with('_') {
        out.pop();
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
struct MatrixEntry {
    user_id: UserId,
    domain: DomainLabel,
    value: f64,
}

pub fn write_matrix_csv(w: impl Write, m: &DomainMatrix) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for (u, d, value) in m.iter() {
        wtr.serialize(MatrixEntry {
            user_id: u.clone(),
            domain: d.clone(),
            value,
        })?;
    }
    wtr.flush()?;
    Ok(())
}

pub fn read_matrix_csv(r: impl Read, name: MatrixName, chunk: Option<usize>) -> csv::Result<DomainMatrix> {
    let mut m = DomainMatrix::new(name, chunk);
    for row in csv::Reader::from_reader(r).deserialize() {
        let e: MatrixEntry = row?;
        m.set(&e.user_id, &e.domain, e.value);
    }
    Ok(m)
}

pub fn write_matrix_json(w: impl Write, m: &DomainMatrix) -> serde_json::Result<()> {
    serde_json::to_writer_pretty(w, m)
}

pub fn read_matrix_json(r: impl Read) -> serde_json::Result<DomainMatrix> {
    serde_json::from_reader(r)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRow {
    pub user_id: UserId,
    pub handle: String,
    pub followers_count: u64,
    pub friends_count: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PenaltyRow {
    pub user_id: UserId,
    pub twt_sim: f64,
    pub url_sim: f64,
    pub word_count: usize,
    pub distinct_word_count: usize,
    pub url_count: usize,
    pub distinct_url_count: usize,
    pub distinct_host_count: usize,
}

impl PenaltyRow {
    pub fn new(user_id: UserId, p: &SimilarityPenalties) -> Self {
        PenaltyRow {
            user_id,
            twt_sim: p.twt_sim,
            url_sim: p.url_sim,
            word_count: p.word_count,
            distinct_word_count: p.distinct_word_count,
            url_count: p.url_count,
            distinct_url_count: p.distinct_url_count,
            distinct_host_count: p.distinct_host_count,
        }
    }

    pub fn penalties(&self) -> SimilarityPenalties {
        SimilarityPenalties {
            twt_sim: self.twt_sim,
            url_sim: self.url_sim,
            word_count: self.word_count,
            distinct_word_count: self.distinct_word_count,
            url_count: self.url_count,
            distinct_url_count: self.distinct_url_count,
            distinct_host_count: self.distinct_host_count,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankingRow {
    pub rank: usize,
    pub user_id: UserId,
    pub handle: String,
    pub tc: f64,
    pub tc_scaled: f64,
    pub level: i8,
    pub stars: u8,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrustRow {
    pub user_id: UserId,
    pub domain: DomainLabel,
    pub tc_scaled: Option<f64>,
    pub level: i8,
    pub label: String,
}

/// The parts of a score directory that ranking and anomaly queries need.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoredArtifacts {
    pub registry: DomainRegistry,
    pub tc: DomainMatrix,
    pub tc_scaled: DomainMatrix,
    pub penalties: BTreeMap<UserId, SimilarityPenalties>,
    pub profiles: BTreeMap<UserId, ProfileRow>,
}

impl ScoredArtifacts {
    pub fn from_scores(scores: &WindowScores, corpus: &Corpus) -> Self {
        ScoredArtifacts {
            registry: scores.registry.clone(),
            tc: scores.tc.clone(),
            tc_scaled: scores.tc_scaled.clone(),
            penalties: scores.window_penalties.clone(),
            profiles: profile_rows(corpus).map(|p| (p.user_id.clone(), p)).collect(),
        }
    }

    pub fn followers(&self) -> BTreeMap<UserId, u64> {
        self.profiles.iter().map(|(u, p)| (u.clone(), p.followers_count)).collect()
    }

    /// Top `top` rows of one domain ranking.
    pub fn ranking(&self, domain: &str, top: usize) -> Result<Vec<RankingRow>, CredibilityError> {
        let label = DomainLabel::from(domain);
        let ranked = crate::credibility::rank_domain(&self.tc_scaled, &self.registry, domain, top)?;
        Ok(ranked
            .into_iter()
            .enumerate()
            .map(|(i, r)| RankingRow {
                rank: i + 1,
                handle: self.profiles.get(&r.user_id).map(|p| p.handle.clone()).unwrap_or_default(),
                tc: self.tc.get(&r.user_id, &label),
                tc_scaled: r.tc_scaled,
                level: r.level.level(),
                stars: r.level.stars(),
                user_id: r.user_id,
            })
            .collect())
    }

    /// One row per (profile, registry domain); unrankable users get level -1.
    pub fn trust_rows(&self) -> Result<Vec<TrustRow>, CredibilityError> {
        let mut rows = Vec::with_capacity(self.profiles.len() * self.registry.len());
        for u in self.profiles.keys() {
            for d in self.registry.labels() {
                let v = self.tc_scaled.contains(u, d).then(|| self.tc_scaled.get(u, d));
                let level = TrustLevel::from_scaled(v)?;
                rows.push(TrustRow {
                    user_id: u.clone(),
                    domain: d.clone(),
                    tc_scaled: v,
                    level: level.level(),
                    label: level.label().to_owned(),
                });
            }
        }
        Ok(rows)
    }
}

fn profile_rows(corpus: &Corpus) -> impl Iterator<Item = ProfileRow> + '_ {
    corpus.users().map(|u| ProfileRow {
        user_id: u.user_id.clone(),
        handle: u.handle.clone(),
        followers_count: u.followers_count,
        friends_count: u.friends_count,
    })
}

fn create(path: &Path) -> Result<BufWriter<File>, ArtifactError> {
    File::create(path).map(BufWriter::new).map_err(ArtifactError::io(path))
}

fn open(path: &Path) -> Result<File, ArtifactError> {
    File::open(path).map_err(ArtifactError::io(path))
}

fn write_rows<T: Serialize>(path: &Path, rows: impl IntoIterator<Item = T>) -> Result<(), ArtifactError> {
    let mut wtr = csv::Writer::from_writer(create(path)?);
    for row in rows {
        wtr.serialize(row).map_err(ArtifactError::csv(path))?;
    }
    wtr.flush().map_err(ArtifactError::io(path))
}

fn read_rows<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<Vec<T>, ArtifactError> {
    csv::Reader::from_reader(open(path)?)
        .deserialize()
        .collect::<Result<_, _>>()
        .map_err(ArtifactError::csv(path))
}

fn write_matrix_pair(dir: &Path, m: &DomainMatrix) -> Result<(), ArtifactError> {
    let csv_path = dir.join(format!("{}.csv", m.name.stem()));
    let mut w = create(&csv_path)?;
    write_matrix_csv(&mut w, m).map_err(ArtifactError::csv(&csv_path))?;
    w.flush().map_err(ArtifactError::io(&csv_path))?;
    let json_path = dir.join(format!("{}.json", m.name.stem()));
    let mut w = create(&json_path)?;
    write_matrix_json(&mut w, m).map_err(ArtifactError::json(&json_path))?;
    w.flush().map_err(ArtifactError::io(&json_path))
}

fn mkdir(path: &Path) -> Result<(), ArtifactError> {
    fs::create_dir_all(path).map_err(ArtifactError::io(path))
}

/// Writes every score artifact under `dir`. Files are produced in a fixed
/// order from ordered maps, so identical scores give identical bytes.
pub fn write_scores(scores: &WindowScores, corpus: &Corpus, dir: &Path) -> Result<(), ArtifactError> {
    let art = ScoredArtifacts::from_scores(scores, corpus);
    mkdir(dir)?;

    let path = dir.join(DOMAINS_FILE);
    let labels: Vec<&str> = art.registry.labels().iter().map(DomainLabel::as_str).collect();
    let mut w = create(&path)?;
    serde_json::to_writer_pretty(&mut w, &labels).map_err(ArtifactError::json(&path))?;
    w.flush().map_err(ArtifactError::io(&path))?;

    write_rows(&dir.join(PROFILES_FILE), art.profiles.values())?;

    #[derive(Serialize)]
    struct FfrRow<'a> {
        user_id: &'a UserId,
        ff_r: f64,
        ff_r_norm: f64,
        age_years: f64,
    }
    write_rows(
        &dir.join(FFR_FILE),
        scores.ffr.iter().map(|(u, r)| FfrRow {
            user_id: u,
            ff_r: r.ff_r,
            ff_r_norm: r.ff_r_norm,
            age_years: r.age_years,
        }),
    )?;
    write_rows(
        &dir.join(PENALTIES_FILE),
        art.penalties.iter().map(|(u, p)| PenaltyRow::new(u.clone(), p)),
    )?;
    write_rows(&dir.join(TRUST_FILE), art.trust_rows()?)?;

    let mdir = dir.join(MATRICES_DIR);
    for chunk in &scores.chunks {
        let cdir = mdir.join(format!("chunk_{}", chunk.index));
        mkdir(&cdir)?;
        for m in chunk.matrices() {
            write_matrix_pair(&cdir, m)?;
        }
        write_rows(
            &cdir.join("penalties.csv"),
            chunk.penalties.iter().map(|(u, p)| PenaltyRow::new(u.clone(), p)),
        )?;
    }
    write_matrix_pair(&mdir, &scores.tc)?;
    write_matrix_pair(&mdir, &scores.tc_scaled)?;

    let rdir = dir.join(RANKINGS_DIR);
    mkdir(&rdir)?;
    for d in art.registry.labels() {
        let rows = art.ranking(d.as_str(), usize::MAX)?;
        write_rows(&rdir.join(format!("{}.csv", domain_slug(d.as_str()))), rows)?;
    }
    Ok(())
}

/// Reloads what [`write_scores`] wrote.
pub fn read_scores(dir: &Path) -> Result<ScoredArtifacts, ArtifactError> {
    let path = dir.join(DOMAINS_FILE);
    let mut src = String::new();
    open(&path)?.read_to_string(&mut src).map_err(ArtifactError::io(&path))?;
    let registry = DomainRegistry::from_json(&src).map_err(|e| ArtifactError::Invalid {
        path: path.clone(),
        message: e.to_string(),
    })?;

    let mdir = dir.join(MATRICES_DIR);
    let load = |stem: &str| -> Result<DomainMatrix, ArtifactError> {
        let path = mdir.join(format!("{stem}.json"));
        read_matrix_json(open(&path)?).map_err(ArtifactError::json(&path))
    };
    let tc = load(MatrixName::TC.stem())?;
    let tc_scaled = load(MatrixName::TCScaled.stem())?;

    let penalties = read_rows::<PenaltyRow>(&dir.join(PENALTIES_FILE))?
        .into_iter()
        .map(|r| (r.user_id.clone(), r.penalties()))
        .collect();
    let profiles = read_rows::<ProfileRow>(&dir.join(PROFILES_FILE))?
        .into_iter()
        .map(|p| (p.user_id.clone(), p))
        .collect();
    Ok(ScoredArtifacts {
        registry,
        tc,
        tc_scaled,
        penalties,
        profiles,
    })
}
