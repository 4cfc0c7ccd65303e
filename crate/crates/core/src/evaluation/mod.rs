//! Influencer-retrieval metrics against a labelled ground truth.
//!
//! For a domain `d` with ground-truth set `HC` and a method's top-`Q` list
//! `HR`:
//!
//! ```text
//! precision1 = |HC ∩ HR| / |HC|
//! recall     = |HC ∩ HR| / |HC|      (default)
//!            = |HC ∩ HR| / |HR|      (strict mode)
//! F          = 2 p r / (p + r)
//! DCG        = sum_i (2^rel_i - 1) / log2(i + 1)
//! nDCG       = DCG / DCG(grades of HR sorted descending)
//! ```

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::{Read, Write};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::UserId;

pub const MAX_GRADE: u8 = 3;

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("Q must be at least 1")]
    ZeroQ,
    #[error("ground truth for domain `{0}` has no influencers")]
    EmptyTruth(String),
    #[error("user `{user}` in domain `{domain}` has no relevance grade")]
    MissingGrade { domain: String, user: UserId },
    #[error("grade {grade} for user `{user}` is outside 0..=3")]
    GradeRange { user: UserId, grade: u8 },
    #[error("user `{user}` listed twice for domain `{domain}` in {context}")]
    Duplicate { context: String, domain: String, user: UserId },
    #[error("method `{method}` has no ranking for domain `{domain}`")]
    MissingDomain { method: String, domain: String },
    #[error("method `{method}` domain `{domain}` repeats rank {rank}")]
    DuplicateRank { method: String, domain: String, rank: usize },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// How the recall denominator is chosen.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RecallMode {
    /// `|HC ∩ HR| / |HC|`.
    #[default]
    Default,
    /// `|HC ∩ HR| / |HR|`, the denominator as printed.
    Strict,
}

impl fmt::Display for RecallMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RecallMode::Default => "default",
            RecallMode::Strict => "strict",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TruthEntry {
    pub user_id: UserId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grade: Option<u8>,
}

/// Per-domain influencer sets with optional graded relevance.
///
/// Entries graded 0 are listed for nDCG but are not influencers.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroundTruth {
    domains: BTreeMap<String, Vec<TruthEntry>>,
}

impl GroundTruth {
    pub fn new(domains: BTreeMap<String, Vec<TruthEntry>>) -> Result<Self, EvalError> {
        for (d, entries) in &domains {
            let mut seen = BTreeSet::new();
            for e in entries {
                if !seen.insert(&e.user_id) {
                    return Err(EvalError::Duplicate {
                        context: "ground truth".into(),
                        domain: d.clone(),
                        user: e.user_id.clone(),
                    });
                }
                if let Some(g) = e.grade.filter(|&g| g > MAX_GRADE) {
                    return Err(EvalError::GradeRange {
                        user: e.user_id.clone(),
                        grade: g,
                    });
                }
            }
        }
        Ok(GroundTruth { domains })
    }

    pub fn from_reader(r: impl Read) -> Result<Self, EvalError> {
        let domains: BTreeMap<String, Vec<TruthEntry>> = serde_json::from_reader(r)?;
        Self::new(domains)
    }

    pub fn to_writer(&self, w: impl Write) -> Result<(), EvalError> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }

    pub fn domains(&self) -> impl Iterator<Item = &str> {
        self.domains.keys().map(String::as_str)
    }

    /// `HC_d`: users whose grade is absent or non-zero.
    pub fn influencers(&self, domain: &str) -> BTreeSet<UserId> {
        self.domains
            .get(domain)
            .into_iter()
            .flatten()
            .filter(|e| e.grade != Some(0))
            .map(|e| e.user_id.clone())
            .collect()
    }

    /// Graded relevance for `domain`, or binary relevance (1 for `HC_d`)
    /// when the domain carries no grades at all.
    pub fn relevance(&self, domain: &str) -> Relevance {
        let entries = self.domains.get(domain).map(Vec::as_slice).unwrap_or_default();
        if entries.iter().any(|e| e.grade.is_some()) {
            Relevance::Graded(entries.iter().filter_map(|e| e.grade.map(|g| (e.user_id.clone(), g))).collect())
        } else {
            Relevance::Binary(entries.iter().map(|e| e.user_id.clone()).collect())
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Relevance {
    Graded(BTreeMap<UserId, u8>),
    Binary(BTreeSet<UserId>),
}

impl Relevance {
    pub fn grade(&self, user: &UserId) -> Option<u8> {
        match self {
            Relevance::Graded(g) => g.get(user).copied(),
            Relevance::Binary(s) => Some(u8::from(s.contains(user))),
        }
    }
}

/// One method's per-domain ordered user lists.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct MethodRanking {
    pub method: String,
    pub domains: BTreeMap<String, Vec<UserId>>,
}

#[derive(Debug, Serialize, Deserialize)]
struct RankingRecord {
    method: String,
    domain: String,
    rank: usize,
    user_id: UserId,
}

impl MethodRanking {
    pub fn new(method: impl Into<String>) -> Self {
        MethodRanking {
            method: method.into(),
            domains: BTreeMap::new(),
        }
    }

    pub fn with_domain(mut self, domain: impl Into<String>, users: Vec<UserId>) -> Self {
        self.domains.insert(domain.into(), users);
        self
    }

    fn validate(&self) -> Result<(), EvalError> {
        for (d, users) in &self.domains {
            let mut seen = BTreeSet::new();
            for u in users {
                if !seen.insert(u) {
                    return Err(EvalError::Duplicate {
                        context: format!("method `{}`", self.method),
                        domain: d.clone(),
                        user: u.clone(),
                    });
                }
            }
        }
        Ok(())
    }

    /// Reads `method,domain,rank,user_id` rows; one file may hold several
    /// methods. Rows are ordered by rank within each (method, domain).
    pub fn read_csv(r: impl Read) -> Result<Vec<MethodRanking>, EvalError> {
        let mut acc: BTreeMap<String, BTreeMap<String, BTreeMap<usize, UserId>>> = BTreeMap::new();
        for row in csv::Reader::from_reader(r).deserialize() {
            let rec: RankingRecord = row?;
            let slot = acc.entry(rec.method.clone()).or_default().entry(rec.domain.clone()).or_default();
            if slot.insert(rec.rank, rec.user_id).is_some() {
                return Err(EvalError::DuplicateRank {
                    method: rec.method,
                    domain: rec.domain,
                    rank: rec.rank,
                });
            }
        }
        acc.into_iter()
            .map(|(method, domains)| {
                let m = MethodRanking {
                    method,
                    domains: domains.into_iter().map(|(d, ranks)| (d, ranks.into_values().collect())).collect(),
                };
                m.validate().map(|_| m)
            })
            .collect()
    }

    pub fn write_csv(&self, w: impl Write) -> Result<(), EvalError> {
        let mut wtr = csv::Writer::from_writer(w);
        for (d, users) in &self.domains {
            for (i, u) in users.iter().enumerate() {
                wtr.serialize(RankingRecord {
                    method: self.method.clone(),
                    domain: d.clone(),
                    rank: i + 1,
                    user_id: u.clone(),
                })?;
            }
        }
        wtr.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

fn intersection(hc: &BTreeSet<UserId>, hr_q: &[UserId]) -> usize {
    hr_q.iter().filter(|u| hc.contains(u)).count()
}

/// `|HC ∩ HR^Q| / |HC|`.
pub fn precision1(hc: &BTreeSet<UserId>, hr_q: &[UserId]) -> Result<f64, EvalError> {
    if hc.is_empty() {
        return Err(EvalError::EmptyTruth(String::new()));
    }
    Ok(intersection(hc, hr_q) as f64 / hc.len() as f64)
}

pub fn recall(hc: &BTreeSet<UserId>, hr_q: &[UserId], mode: RecallMode) -> Result<f64, EvalError> {
    if hc.is_empty() {
        return Err(EvalError::EmptyTruth(String::new()));
    }
    let hit = intersection(hc, hr_q) as f64;
    Ok(match mode {
        RecallMode::Default => hit / hc.len() as f64,
        RecallMode::Strict if hr_q.is_empty() => 0.0,
        RecallMode::Strict => hit / hr_q.len() as f64,
    })
}

/// Harmonic mean; 0 when both inputs are 0.
pub fn f_score(p: f64, r: f64) -> f64 {
    if p + r == 0.0 {
        0.0
    } else {
        2.0 * p * r / (p + r)
    }
}

/// Discounted cumulative gain of grades in rank order.
pub fn dcg(grades: &[u8]) -> f64 {
    grades
        .iter()
        .enumerate()
        .map(|(i, &g)| (2f64.powi(i32::from(g)) - 1.0) / ((i + 2) as f64).log2())
        .sum()
}

/// nDCG of `hr_q`, the ideal ordering being the same grades sorted
/// descending. 0 when the ideal gain is 0.
pub fn ndcg(hr_q: &[UserId], relevance: &Relevance, domain: &str) -> Result<f64, EvalError> {
    let grades = hr_q
        .iter()
        .map(|u| {
            relevance.grade(u).ok_or_else(|| EvalError::MissingGrade {
                domain: domain.to_owned(),
                user: u.clone(),
            })
        })
        .collect::<Result<Vec<u8>, _>>()?;
    let mut ideal = grades.clone();
    ideal.sort_unstable_by(|a, b| b.cmp(a));
    let idcg = dcg(&ideal);
    Ok(if idcg == 0.0 { 0.0 } else { dcg(&grades) / idcg })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricRow {
    pub method: String,
    pub domain: String,
    pub precision1: f64,
    pub recall: f64,
    pub f_measure: f64,
    pub ndcg: f64,
}

/// Per-method, per-domain metrics and their cross-domain means.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkReport {
    pub q: usize,
    pub recall_mode: RecallMode,
    pub rows: Vec<MetricRow>,
    pub averages: Vec<MetricRow>,
}

pub const AVERAGE_DOMAIN: &str = "average";

#[derive(Serialize)]
struct ReportCsvRow<'a> {
    method: &'a str,
    domain: &'a str,
    precision1: f64,
    recall: f64,
    f_measure: f64,
    ndcg: f64,
    recall_mode: RecallMode,
    q: usize,
}

impl BenchmarkReport {
    /// Per-domain rows followed by one `average` row per method.
    pub fn write_csv(&self, w: impl Write) -> Result<(), EvalError> {
        let mut wtr = csv::Writer::from_writer(w);
        for r in self.rows.iter().chain(&self.averages) {
            wtr.serialize(ReportCsvRow {
                method: &r.method,
                domain: &r.domain,
                precision1: r.precision1,
                recall: r.recall,
                f_measure: r.f_measure,
                ndcg: r.ndcg,
                recall_mode: self.recall_mode,
                q: self.q,
            })?;
        }
        wtr.flush().map_err(csv::Error::from)?;
        Ok(())
    }

    pub fn write_json(&self, w: impl Write) -> Result<(), EvalError> {
        serde_json::to_writer_pretty(w, self)?;
        Ok(())
    }

    pub fn average(&self, method: &str) -> Option<&MetricRow> {
        self.averages.iter().find(|r| r.method == method)
    }
}

/// Scores every method over every ground-truth domain at cutoff `q`.
pub fn run_benchmark(methods: &[MethodRanking], truth: &GroundTruth, q: usize, mode: RecallMode) -> Result<BenchmarkReport, EvalError> {
    if q == 0 {
        return Err(EvalError::ZeroQ);
    }
    let mut rows = Vec::new();
    let mut averages = Vec::new();
    for m in methods {
        m.validate()?;
        let mut per_method = Vec::new();
        for domain in truth.domains() {
            let hc = truth.influencers(domain);
            if hc.is_empty() {
                return Err(EvalError::EmptyTruth(domain.to_owned()));
            }
            let list = m.domains.get(domain).ok_or_else(|| EvalError::MissingDomain {
                method: m.method.clone(),
                domain: domain.to_owned(),
            })?;
            let hr_q = &list[..q.min(list.len())];
            let p = precision1(&hc, hr_q)?;
            let r = recall(&hc, hr_q, mode)?;
            per_method.push(MetricRow {
                method: m.method.clone(),
                domain: domain.to_owned(),
                precision1: p,
                recall: r,
                f_measure: f_score(p, r),
                ndcg: ndcg(hr_q, &truth.relevance(domain), domain)?,
            });
        }
        let n = per_method.len().max(1) as f64;
        let mean = |f: fn(&MetricRow) -> f64| per_method.iter().map(f).sum::<f64>() / n;
        averages.push(MetricRow {
            method: m.method.clone(),
            domain: AVERAGE_DOMAIN.to_owned(),
            precision1: mean(|r| r.precision1),
            recall: mean(|r| r.recall),
            f_measure: mean(|r| r.f_measure),
            ndcg: mean(|r| r.ndcg),
        });
        rows.extend(per_method);
    }
    Ok(BenchmarkReport {
        q,
        recall_mode: mode,
        rows,
        averages,
    })
}
