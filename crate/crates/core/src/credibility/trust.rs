use std::fmt;

use serde::{Deserialize, Serialize};

use crate::corpus::UserId;
use crate::semantics::{DomainLabel, DomainRegistry};

use super::matrix::DomainMatrix;
use super::CredibilityError;

/// Seven-level trust ladder over scaled credibility.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(into = "i8", try_from = "i8")]
pub enum TrustLevel {
    NewUser,
    VeryUntrustworthy,
    Untrustworthy,
    PartiallyTrustworthy,
    LargelyTrustworthy,
    Trustworthy,
    VeryTrustworthy,
}

impl TrustLevel {
    pub const ALL: [TrustLevel; 7] = [
        TrustLevel::NewUser,
        TrustLevel::VeryUntrustworthy,
        TrustLevel::Untrustworthy,
        TrustLevel::PartiallyTrustworthy,
        TrustLevel::LargelyTrustworthy,
        TrustLevel::Trustworthy,
        TrustLevel::VeryTrustworthy,
    ];

    /// -1 ..= 5
    pub fn level(self) -> i8 {
        self as i8 - 1
    }

    pub fn label(self) -> &'static str {
        match self {
            TrustLevel::NewUser => "New User",
            TrustLevel::VeryUntrustworthy => "Very Untrustworthy User",
            TrustLevel::Untrustworthy => "Untrustworthy User",
            TrustLevel::PartiallyTrustworthy => "Partially Trustworthy User",
            TrustLevel::LargelyTrustworthy => "Largely Trustworthy User",
            TrustLevel::Trustworthy => "Trustworthy User",
            TrustLevel::VeryTrustworthy => "Very Trustworthy User",
        }
    }

    /// Number of stars shown; levels -1 and 0 are not displayed.
    pub fn stars(self) -> u8 {
        self.level().max(0) as u8
    }

    /// Maps a scaled credibility in `[0, 5]` (or `None` for a user with no
    /// scored content) onto the ladder: 0 is level 0, `(m-1, m]` is level m.
    pub fn from_scaled(tc_scaled: Option<f64>) -> Result<Self, CredibilityError> {
        let Some(v) = tc_scaled else {
            return Ok(TrustLevel::NewUser);
        };
        if !(0.0..=5.0).contains(&v) {
            return Err(CredibilityError::ScaledOutOfRange(v));
        }
        Ok(if v == 0.0 {
            TrustLevel::VeryUntrustworthy
        } else {
            Self::ALL[v.ceil() as usize + 1]
        })
    }
}

impl From<TrustLevel> for i8 {
    fn from(t: TrustLevel) -> i8 {
        t.level()
    }
}

impl TryFrom<i8> for TrustLevel {
    type Error = String;

    fn try_from(v: i8) -> Result<Self, Self::Error> {
        if (-1..=5).contains(&v) {
            Ok(Self::ALL[(v + 1) as usize])
        } else {
            Err(format!("trust level {v} outside -1..=5"))
        }
    }
}

impl fmt::Display for TrustLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Level {} ({})", self.level(), self.label())
    }
}

/// One row of a domain ranking.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankedUser {
    pub user_id: UserId,
    pub tc_scaled: f64,
    pub level: TrustLevel,
}

/// Users of `domain` by scaled credibility, highest first, ties by user id;
/// at most `top` rows. Users without a row (unrankable) never appear.
pub fn rank_domain(
    tc_scaled: &DomainMatrix,
    registry: &DomainRegistry,
    domain: &str,
    top: usize,
) -> Result<Vec<RankedUser>, CredibilityError> {
    let label = DomainLabel::from(domain);
    if !registry.contains(&label) {
        return Err(CredibilityError::UnknownDomain(domain.to_owned()));
    }
    let mut rows: Vec<(&UserId, f64)> = tc_scaled
        .users()
        .filter(|u| tc_scaled.contains(u, &label))
        .map(|u| (u, tc_scaled.get(u, &label)))
        .collect();
    rows.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    rows.truncate(top);
    rows.into_iter()
        .map(|(u, v)| {
            Ok(RankedUser {
                user_id: u.clone(),
                tc_scaled: v,
                level: TrustLevel::from_scaled(Some(v))?,
            })
        })
        .collect()
}
