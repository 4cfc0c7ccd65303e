use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::corpus::{UserId, UserProfile};

use super::matrix::min_max;
use super::CredibilityError;

const SECONDS_PER_YEAR: f64 = 365.25 * 86_400.0;
const MIN_AGE_YEARS: f64 = 1.0 / 365.25;

/// Follower-friend relation of one profile.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FollowerFriendRatio {
    pub ff_r: f64,
    /// Min-max normalized over the population; filled by [`normalize_ffr`].
    pub ff_r_norm: f64,
    pub age_years: f64,
}

/// Profile age in years (365.25-day years), floored at one day.
pub fn profile_age_years(created_at: DateTime<Utc>, as_of: DateTime<Utc>) -> f64 {
    let secs = (as_of - created_at).num_milliseconds() as f64 / 1000.0;
    (secs / SECONDS_PER_YEAR).max(MIN_AGE_YEARS)
}

/// `(followers - friends) / age`, or `1 / age` when the difference is zero.
pub fn follower_friend_ratio(user: &UserProfile, as_of: DateTime<Utc>) -> Result<FollowerFriendRatio, CredibilityError> {
    if as_of < user.created_at {
        return Err(CredibilityError::ProfileAfterReference {
            user: user.user_id.clone(),
            as_of,
        });
    }
    let age_years = profile_age_years(user.created_at, as_of);
    let diff = user.followers_count as f64 - user.friends_count as f64;
    let ff_r = if diff != 0.0 { diff / age_years } else { 1.0 / age_years };
    Ok(FollowerFriendRatio {
        ff_r,
        ff_r_norm: 0.0,
        age_years,
    })
}

/// Min-max normalizes `ff_r` across all entries; a degenerate population
/// (max == min) gets 0 everywhere.
pub fn normalize_ffr(ratios: &mut BTreeMap<UserId, FollowerFriendRatio>) {
    let (min, max) = min_max(ratios.values().map(|r| r.ff_r));
    for r in ratios.values_mut() {
        r.ff_r_norm = if max > min { ((r.ff_r - min) / (max - min)).clamp(0.0, 1.0) } else { 0.0 };
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::Duration;

    fn profile(fol: u64, frd: u64, created: DateTime<Utc>) -> UserProfile {
        UserProfile {
            user_id: format!("u{fol}-{frd}").as_str().into(),
            handle: String::new(),
            created_at: created,
            followers_count: fol,
            friends_count: frd,
            bio: String::new(),
        }
    }

    fn two_years_ago(now: DateTime<Utc>) -> DateTime<Utc> {
        now - Duration::milliseconds((2.0 * SECONDS_PER_YEAR * 1000.0) as i64)
    }

    #[test]
    fn positive_difference() {
        let now = DateTime::parse_from_rfc3339("2015-05-01T00:00:00Z").unwrap().with_timezone(&Utc);
        let r = follower_friend_ratio(&profile(100, 50, two_years_ago(now)), now).unwrap();
        assert!((r.age_years - 2.0).abs() < 1e-12);
        assert!((r.ff_r - 25.0).abs() < 1e-9);
    }

    #[test]
    fn zero_difference_branch() {
        let now = DateTime::parse_from_rfc3339("2015-05-01T00:00:00Z").unwrap().with_timezone(&Utc);
        let r = follower_friend_ratio(&profile(70, 70, two_years_ago(now)), now).unwrap();
        assert!((r.ff_r - 0.5).abs() < 1e-12);
    }

    #[test]
    fn age_is_floored() {
        let now = Utc::now();
        let r = follower_friend_ratio(&profile(10, 0, now), now).unwrap();
        assert_eq!(r.age_years, MIN_AGE_YEARS);
    }

    #[test]
    fn future_profile_is_an_error() {
        let now = Utc::now();
        assert!(follower_friend_ratio(&profile(1, 0, now + Duration::days(1)), now).is_err());
    }

    #[test]
    fn normalization() {
        let now = Utc::now();
        let created = two_years_ago(now);
        let mut single = BTreeMap::from([("a".into(), follower_friend_ratio(&profile(9, 1, created), now).unwrap())]);
        normalize_ffr(&mut single);
        assert_eq!(single[&UserId::from("a")].ff_r_norm, 0.0);

        let mut many: BTreeMap<UserId, _> = [(0, 10), (10, 0), (5, 5)]
            .iter()
            .enumerate()
            .map(|(i, &(f, d))| (UserId::from(format!("u{i}")), follower_friend_ratio(&profile(f, d, created), now).unwrap()))
            .collect();
        normalize_ffr(&mut many);
        let v: Vec<f64> = many.values().map(|r| r.ff_r_norm).collect();
        assert_eq!(v[0], 0.0);
        assert_eq!(v[1], 1.0);
        assert!(v[2] > 0.5 && v[2] < 1.0);
    }
}
