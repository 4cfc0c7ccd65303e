//! "Very untrustworthy" retrieval and its precision against labels.
//!
//! The two credibility criteria keep users whose scaled credibility is zero
//! in every registry domain (unrankable users count as zero unless
//! disabled), then order them by ascending tweet or URL similarity penalty.
//! The baseline orders every user by ascending follower count.

use std::collections::BTreeMap;
use std::fmt;
use std::io::{Read, Write};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::UserId;
use crate::credibility::{DomainMatrix, SimilarityPenalties};
use crate::semantics::DomainRegistry;

/// Cutoffs of the standard precision curve.
pub const DEFAULT_CUTOFFS: [usize; 5] = [10, 20, 30, 40, 50];

#[derive(Debug, Error)]
pub enum AnomalyError {
    #[error("top_k must be at least 1")]
    ZeroTopK,
    #[error("precision cutoff must be at least 1")]
    ZeroCutoff,
    #[error("retrieved user `{0}` has no anomaly label")]
    Unlabeled(UserId),
    #[error("unknown criterion `{0}` (expected twt, url or indegree)")]
    UnknownCriterion(String),
    #[error("unknown label `{label}` for user `{user}` (expected normal or anomalous)")]
    UnknownLabel { user: String, label: String },
    #[error("duplicate label for user `{0}`")]
    DuplicateLabel(UserId),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Criterion {
    VeryUntrustworthyLowTwtSim,
    VeryUntrustworthyLowUrlSim,
    LowInDegree,
}

impl Criterion {
    pub const ALL: [Criterion; 3] = [
        Criterion::VeryUntrustworthyLowTwtSim,
        Criterion::VeryUntrustworthyLowUrlSim,
        Criterion::LowInDegree,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Criterion::VeryUntrustworthyLowTwtSim => "very_untrustworthy_low_twt_sim",
            Criterion::VeryUntrustworthyLowUrlSim => "very_untrustworthy_low_url_sim",
            Criterion::LowInDegree => "low_in_degree",
        }
    }
}

impl fmt::Display for Criterion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Criterion {
    type Err = AnomalyError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "twt" | "very_untrustworthy_low_twt_sim" => Ok(Criterion::VeryUntrustworthyLowTwtSim),
            "url" | "very_untrustworthy_low_url_sim" => Ok(Criterion::VeryUntrustworthyLowUrlSim),
            "indegree" | "low_in_degree" => Ok(Criterion::LowInDegree),
            other => Err(AnomalyError::UnknownCriterion(other.to_owned())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnomalyQuery {
    pub criterion: Criterion,
    pub top_k: usize,
    /// Treat users without any credibility row as "zero in every domain".
    pub include_unrankable: bool,
}

impl AnomalyQuery {
    pub fn new(criterion: Criterion, top_k: usize) -> Result<Self, AnomalyError> {
        if top_k == 0 {
            return Err(AnomalyError::ZeroTopK);
        }
        Ok(AnomalyQuery {
            criterion,
            top_k,
            include_unrankable: true,
        })
    }

    pub fn include_unrankable(mut self, yes: bool) -> Self {
        self.include_unrankable = yes;
        self
    }
}

/// One retrieved user with the value it was ordered by.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Retrieved {
    pub user_id: UserId,
    pub criterion_value: f64,
}

/// True when every registry domain has scaled credibility 0 for `user`.
pub fn is_very_untrustworthy(tc_scaled: &DomainMatrix, registry: &DomainRegistry, user: &UserId, include_unrankable: bool) -> bool {
    if tc_scaled.has_row(user) {
        registry.labels().iter().all(|d| tc_scaled.get(user, d) == 0.0)
    } else {
        include_unrankable
    }
}

/// Runs one query. `penalties` and `followers` define the candidate
/// populations (all users of the corpus). Ties break by user id; fewer than
/// `top_k` candidates returns them all.
pub fn query_anomalies(
    tc_scaled: &DomainMatrix,
    registry: &DomainRegistry,
    penalties: &BTreeMap<UserId, SimilarityPenalties>,
    followers: &BTreeMap<UserId, u64>,
    query: &AnomalyQuery,
) -> Vec<Retrieved> {
    let mut hits: Vec<Retrieved> = match query.criterion {
        Criterion::LowInDegree => followers
            .iter()
            .map(|(u, &f)| Retrieved {
                user_id: u.clone(),
                criterion_value: f as f64,
            })
            .collect(),
        c => penalties
            .iter()
            .filter(|(u, _)| is_very_untrustworthy(tc_scaled, registry, u, query.include_unrankable))
            .map(|(u, p)| Retrieved {
                user_id: u.clone(),
                criterion_value: if c == Criterion::VeryUntrustworthyLowTwtSim { p.twt_sim } else { p.url_sim },
            })
            .collect(),
    };
    hits.sort_by(|a, b| a.criterion_value.total_cmp(&b.criterion_value).then_with(|| a.user_id.cmp(&b.user_id)));
    hits.truncate(query.top_k);
    hits
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnomalyLabel {
    Normal,
    Anomalous,
}

impl FromStr for AnomalyLabel {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        match s {
            "normal" => Ok(AnomalyLabel::Normal),
            "anomalous" => Ok(AnomalyLabel::Anomalous),
            _ => Err(()),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct AnomalyLabelSet {
    labels: BTreeMap<UserId, AnomalyLabel>,
}

#[derive(Serialize, Deserialize)]
struct LabelRow {
    user_id: String,
    label: String,
}

impl AnomalyLabelSet {
    pub fn new(labels: BTreeMap<UserId, AnomalyLabel>) -> Self {
        AnomalyLabelSet { labels }
    }

    pub fn get(&self, user: &UserId) -> Option<AnomalyLabel> {
        self.labels.get(user).copied()
    }

    pub fn insert(&mut self, user: UserId, label: AnomalyLabel) {
        self.labels.insert(user, label);
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&UserId, AnomalyLabel)> {
        self.labels.iter().map(|(u, l)| (u, *l))
    }

    /// Reads `user_id,label` CSV.
    pub fn read_csv(r: impl Read) -> Result<Self, AnomalyError> {
        let mut labels = BTreeMap::new();
        for row in csv::Reader::from_reader(r).deserialize() {
            let row: LabelRow = row?;
            let label = row.label.trim().parse().map_err(|_| AnomalyError::UnknownLabel {
                user: row.user_id.clone(),
                label: row.label.clone(),
            })?;
            let user = UserId::from(row.user_id);
            if labels.insert(user.clone(), label).is_some() {
                return Err(AnomalyError::DuplicateLabel(user));
            }
        }
        Ok(AnomalyLabelSet { labels })
    }

    pub fn write_csv(&self, w: impl Write) -> Result<(), AnomalyError> {
        let mut wtr = csv::Writer::from_writer(w);
        for (u, l) in &self.labels {
            let label = match l {
                AnomalyLabel::Normal => "normal",
                AnomalyLabel::Anomalous => "anomalous",
            };
            wtr.serialize(LabelRow {
                user_id: u.to_string(),
                label: label.to_owned(),
            })?;
        }
        wtr.flush().map_err(csv::Error::from)?;
        Ok(())
    }
}

/// Anomalous users among the first `k` retrieved, divided by the number of
/// users actually retrieved at that cutoff (`min(k, retrieved.len())`).
/// An empty retrieval scores 0.
pub fn anomaly_precision(retrieved: &[UserId], labels: &AnomalyLabelSet, k: usize) -> Result<f64, AnomalyError> {
    if k == 0 {
        return Err(AnomalyError::ZeroCutoff);
    }
    let top = &retrieved[..k.min(retrieved.len())];
    let mut hits = 0usize;
    for u in top {
        match labels.get(u) {
            Some(AnomalyLabel::Anomalous) => hits += 1,
            Some(AnomalyLabel::Normal) => {}
            None => return Err(AnomalyError::Unlabeled(u.clone())),
        }
    }
    if top.is_empty() {
        Ok(0.0)
    } else {
        Ok(hits as f64 / top.len() as f64)
    }
}

/// Precision at each cutoff plus their mean.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PrecisionCurve {
    pub points: Vec<(usize, f64)>,
    pub average: f64,
}

pub fn precision_curve(retrieved: &[UserId], labels: &AnomalyLabelSet, cutoffs: &[usize]) -> Result<PrecisionCurve, AnomalyError> {
    let points = cutoffs
        .iter()
        .map(|&k| anomaly_precision(retrieved, labels, k).map(|p| (k, p)))
        .collect::<Result<Vec<_>, _>>()?;
    let average = if points.is_empty() {
        0.0
    } else {
        points.iter().map(|(_, p)| p).sum::<f64>() / points.len() as f64
    };
    Ok(PrecisionCurve { points, average })
}

#[derive(Serialize)]
struct ResultRow<'a> {
    rank: usize,
    user_id: &'a UserId,
    criterion_value: f64,
}

/// Writes `rank,user_id,criterion_value`.
pub fn write_results_csv(w: impl Write, retrieved: &[Retrieved]) -> csv::Result<()> {
    let mut wtr = csv::Writer::from_writer(w);
    for (i, r) in retrieved.iter().enumerate() {
        wtr.serialize(ResultRow {
            rank: i + 1,
            user_id: &r.user_id,
            criterion_value: r.criterion_value,
        })?;
    }
    wtr.flush()?;
    Ok(())
}
