use chrono::{DateTime, Datelike, Duration, NaiveDate, TimeZone, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::model::{Corpus, Post, Reply};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Period {
    #[default]
    Month,
    /// ISO weeks, starting Monday 00:00 UTC.
    Week,
    Day,
}

impl std::str::FromStr for Period {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "month" => Ok(Period::Month),
            "week" => Ok(Period::Week),
            "day" => Ok(Period::Day),
            other => Err(format!("unknown period `{other}` (expected month, week or day)")),
        }
    }
}

impl Period {
    /// Start of the calendar period containing `t`.
    pub fn floor(self, t: DateTime<Utc>) -> DateTime<Utc> {
        let d = t.date_naive();
        let start = match self {
            Period::Month => NaiveDate::from_ymd_opt(d.year(), d.month(), 1).expect("valid first of month"),
            Period::Week => d - Duration::days(d.weekday().num_days_from_monday() as i64),
            Period::Day => d,
        };
        Utc.from_utc_datetime(&start.and_hms_opt(0, 0, 0).expect("midnight"))
    }

    /// Moves a period start by `n` periods (negative = earlier).
    pub fn shift(self, start: DateTime<Utc>, n: i64) -> DateTime<Utc> {
        match self {
            Period::Day => start + Duration::days(n),
            Period::Week => start + Duration::weeks(n),
            Period::Month => {
                let d = start.date_naive();
                let months = d.year() as i64 * 12 + d.month0() as i64 + n;
                let (y, m0) = (months.div_euclid(12) as i32, months.rem_euclid(12) as u32);
                let first = NaiveDate::from_ymd_opt(y, m0 + 1, 1).expect("valid month");
                Utc.from_utc_datetime(&first.and_hms_opt(0, 0, 0).expect("midnight"))
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct WindowSpec {
    /// Number of chunks in the credibility window.
    pub chunks: usize,
    pub period: Period,
    /// Defaults to the newest post timestamp. The last chunk is the period
    /// containing this instant.
    pub window_end: Option<DateTime<Utc>>,
}

impl Default for WindowSpec {
    fn default() -> Self {
        WindowSpec {
            chunks: 6,
            period: Period::Month,
            window_end: None,
        }
    }
}

#[derive(Debug, Error, PartialEq)]
pub enum PartitionError {
    #[error("credibility window must hold at least one chunk")]
    EmptyWindow,
    #[error("corpus has no posts and no window_end was given")]
    NoAnchor,
}

/// The records of one calendar period `[period_start, period_end)`.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeChunk {
    /// 1 = oldest.
    pub index: usize,
    pub period_start: DateTime<Utc>,
    pub period_end: DateTime<Utc>,
    pub posts: Vec<Post>,
    pub replies: Vec<Reply>,
}

impl TimeChunk {
    pub fn contains(&self, t: DateTime<Utc>) -> bool {
        self.period_start <= t && t < self.period_end
    }
}

/// Splits the most recent `spec.chunks` periods into chunks, oldest first.
/// Records outside the window belong to no chunk.
pub fn partition(corpus: &Corpus, spec: &WindowSpec) -> Result<Vec<TimeChunk>, PartitionError> {
    if spec.chunks == 0 {
        return Err(PartitionError::EmptyWindow);
    }
    let anchor = spec.window_end.or_else(|| corpus.newest_post()).ok_or(PartitionError::NoAnchor)?;
    let last_start = spec.period.floor(anchor);
    let n = spec.chunks as i64;
    let mut chunks: Vec<TimeChunk> = (0..n)
        .map(|i| {
            let start = spec.period.shift(last_start, i - (n - 1));
            TimeChunk {
                index: i as usize + 1,
                period_start: start,
                period_end: spec.period.shift(start, 1),
                posts: Vec::new(),
                replies: Vec::new(),
            }
        })
        .collect();
    let window_start = chunks[0].period_start;
    let window_end = chunks[chunks.len() - 1].period_end;
    let slot = |t: DateTime<Utc>| -> Option<usize> {
        if t < window_start || t >= window_end {
            return None;
        }
        chunks.iter().position(|c| c.contains(t))
    };
    let post_slots: Vec<_> = corpus.posts().map(|p| (slot(p.created_at), p)).collect();
    let reply_slots: Vec<_> = corpus.replies().map(|r| (slot(r.created_at), r)).collect();
    for (k, p) in post_slots {
        if let Some(k) = k {
            chunks[k].posts.push(p.clone());
        }
    }
    for (k, r) in reply_slots {
        if let Some(k) = k {
            chunks[k].replies.push(r.clone());
        }
    }
    Ok(chunks)
}
