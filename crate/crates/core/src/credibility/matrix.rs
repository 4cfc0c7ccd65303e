use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::UserId;
use crate::semantics::DomainLabel;

/// Which quantity a [`DomainMatrix`] holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatrixName {
    /// Penalized content scores.
    Sc,
    /// Thresholded, IDF-weighted content scores.
    W,
    WNorm,
    /// Distributed retweet counts.
    R,
    RNorm,
    /// Distributed favorite counts.
    L,
    LNorm,
    /// Distributed reply counts.
    P,
    PNorm,
    /// Positive reply sentiment.
    SP,
    /// Negative reply sentiment (entries <= 0).
    SN,
    S,
    SNorm,
    /// Per-chunk credibility.
    C,
    /// Time-weighted credibility.
    TC,
    /// Time-weighted credibility rescaled to [0, 5].
    TCScaled,
}

impl MatrixName {
    pub const ALL: [MatrixName; 16] = [
        MatrixName::Sc,
        MatrixName::W,
        MatrixName::WNorm,
        MatrixName::R,
        MatrixName::RNorm,
        MatrixName::L,
        MatrixName::LNorm,
        MatrixName::P,
        MatrixName::PNorm,
        MatrixName::SP,
        MatrixName::SN,
        MatrixName::S,
        MatrixName::SNorm,
        MatrixName::C,
        MatrixName::TC,
        MatrixName::TCScaled,
    ];

    /// File stem used by the exporters.
    pub fn stem(self) -> &'static str {
        match self {
            MatrixName::Sc => "sc",
            MatrixName::W => "w",
            MatrixName::WNorm => "w_norm",
            MatrixName::R => "r",
            MatrixName::RNorm => "r_norm",
            MatrixName::L => "l",
            MatrixName::LNorm => "l_norm",
            MatrixName::P => "p",
            MatrixName::PNorm => "p_norm",
            MatrixName::SP => "sp",
            MatrixName::SN => "sn",
            MatrixName::S => "s",
            MatrixName::SNorm => "s_norm",
            MatrixName::C => "c",
            MatrixName::TC => "tc",
            MatrixName::TCScaled => "tc_scaled",
        }
    }

    /// Entries are expected in [0, 1].
    pub fn is_unit_normalized(self) -> bool {
        matches!(
            self,
            MatrixName::WNorm | MatrixName::RNorm | MatrixName::LNorm | MatrixName::PNorm | MatrixName::SNorm | MatrixName::C
        )
    }
}

impl fmt::Display for MatrixName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.stem())
    }
}

/// Sparse `(user, domain) -> value` mapping. Missing entries read as 0.
///
/// Rows and columns iterate in ascending key order, so every reduction over
/// a matrix has a fixed summation order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DomainMatrix {
    pub name: MatrixName,
    pub chunk: Option<usize>,
    rows: BTreeMap<UserId, BTreeMap<DomainLabel, f64>>,
}

impl DomainMatrix {
    pub fn new(name: MatrixName, chunk: Option<usize>) -> Self {
        DomainMatrix {
            name,
            chunk,
            rows: BTreeMap::new(),
        }
    }

    pub fn get(&self, user: &UserId, domain: &DomainLabel) -> f64 {
        self.rows.get(user).and_then(|r| r.get(domain)).copied().unwrap_or(0.0)
    }

    pub fn contains(&self, user: &UserId, domain: &DomainLabel) -> bool {
        self.rows.get(user).is_some_and(|r| r.contains_key(domain))
    }

    pub fn set(&mut self, user: &UserId, domain: &DomainLabel, value: f64) {
        self.rows.entry(user.clone()).or_default().insert(domain.clone(), value);
    }

    pub fn add(&mut self, user: &UserId, domain: &DomainLabel, value: f64) {
        *self.rows.entry(user.clone()).or_default().entry(domain.clone()).or_insert(0.0) += value;
    }

    /// Ensures a (possibly empty) row exists for `user`.
    pub fn touch(&mut self, user: &UserId) {
        self.rows.entry(user.clone()).or_default();
    }

    pub fn row(&self, user: &UserId) -> Option<&BTreeMap<DomainLabel, f64>> {
        self.rows.get(user)
    }

    pub fn has_row(&self, user: &UserId) -> bool {
        self.rows.contains_key(user)
    }

    pub fn users(&self) -> impl Iterator<Item = &UserId> {
        self.rows.keys()
    }

    pub fn user_count(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// All stored entries, user-major.
    pub fn iter(&self) -> impl Iterator<Item = (&UserId, &DomainLabel, f64)> {
        self.rows
            .iter()
            .flat_map(|(u, row)| row.iter().map(move |(d, &v)| (u, d, v)))
    }

    pub fn entry_count(&self) -> usize {
        self.rows.values().map(BTreeMap::len).sum()
    }

    /// Copy with a different name.
    pub fn renamed(&self, name: MatrixName) -> Self {
        DomainMatrix {
            name,
            chunk: self.chunk,
            rows: self.rows.clone(),
        }
    }

    /// Divides each column by its maximum over `users`. The result is dense
    /// over `users x domains`; a column whose maximum is not positive
    /// becomes all zeros.
    pub fn normalize_by_column_max(&self, name: MatrixName, users: &[UserId], domains: &[DomainLabel]) -> DomainMatrix {
        let mut out = DomainMatrix::new(name, self.chunk);
        for d in domains {
            let max = users.iter().map(|u| self.get(u, d)).fold(0.0_f64, f64::max);
            for u in users {
                let v = if max > 0.0 { self.get(u, d) / max } else { 0.0 };
                out.set(u, d, v);
            }
        }
        out
    }

    /// Per-column min-max rescaling onto `[0, scale]` over `users`, dense.
    /// Degenerate columns (max == min) become all zeros.
    pub fn min_max_scale(&self, name: MatrixName, users: &[UserId], domains: &[DomainLabel], scale: f64) -> DomainMatrix {
        let mut out = DomainMatrix::new(name, self.chunk);
        for d in domains {
            let (min, max) = min_max(users.iter().map(|u| self.get(u, d)));
            for u in users {
                let v = if max > min {
                    ((self.get(u, d) - min) * scale / (max - min)).clamp(0.0, scale)
                } else {
                    0.0
                };
                out.set(u, d, v);
            }
        }
        out
    }
}

/// `(min, max)` of a sequence; `(0, 0)` when empty.
pub fn min_max(values: impl Iterator<Item = f64>) -> (f64, f64) {
    let mut it = values.peekable();
    if it.peek().is_none() {
        return (0.0, 0.0);
    }
    it.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(n: &[&str]) -> Vec<UserId> {
        n.iter().map(|s| UserId::from(*s)).collect()
    }

    #[test]
    fn column_max_normalization() {
        let d = DomainLabel::from("x");
        let users = ids(&["a", "b", "c"]);
        let mut m = DomainMatrix::new(MatrixName::W, Some(1));
        m.set(&users[0], &d, 4.0);
        m.set(&users[1], &d, 2.0);
        let n = m.normalize_by_column_max(MatrixName::WNorm, &users, std::slice::from_ref(&d));
        assert_eq!([n.get(&users[0], &d), n.get(&users[1], &d), n.get(&users[2], &d)], [1.0, 0.5, 0.0]);
        let empty = DomainLabel::from("y");
        let n = m.normalize_by_column_max(MatrixName::WNorm, &users, std::slice::from_ref(&empty));
        assert!(users.iter().all(|u| n.get(u, &empty) == 0.0 && n.contains(u, &empty)));
    }

    #[test]
    fn min_max_rescaling() {
        let d = DomainLabel::from("x");
        let users = ids(&["a", "b", "c"]);
        let mut m = DomainMatrix::new(MatrixName::TC, None);
        for (u, v) in users.iter().zip([0.2, 0.4, 0.6]) {
            m.set(u, &d, v);
        }
        let s = m.min_max_scale(MatrixName::TCScaled, &users, std::slice::from_ref(&d), 5.0);
        let got: Vec<f64> = users.iter().map(|u| s.get(u, &d)).collect();
        assert_eq!(got[0], 0.0);
        assert!((got[1] - 2.5).abs() < 1e-12);
        assert_eq!(got[2], 5.0);
    }

    #[test]
    fn min_max_of_signed_column() {
        let d = DomainLabel::from("x");
        let users = ids(&["a", "b"]);
        let mut m = DomainMatrix::new(MatrixName::S, Some(1));
        m.set(&users[0], &d, 3.0);
        m.set(&users[1], &d, -1.0);
        let s = m.min_max_scale(MatrixName::SNorm, &users, std::slice::from_ref(&d), 1.0);
        assert_eq!((s.get(&users[0], &d), s.get(&users[1], &d)), (1.0, 0.0));
    }
}
