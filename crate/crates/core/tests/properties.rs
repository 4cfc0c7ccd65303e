mod common;

use std::collections::{BTreeMap, BTreeSet};

use credrank::anomaly::{anomaly_precision, AnomalyLabel, AnomalyLabelSet};
use credrank::corpus::{cleanse, CleansingConfig, Post};
use credrank::credibility::{domain_weight, inverse_domain_frequency, relativeness_distribute, TrustLevel};
use credrank::evaluation::{dcg, ndcg, precision1, recall, RecallMode, Relevance};
use credrank::{Corpus, DomainLabel, UserId};
use proptest::prelude::*;

fn ids(n: usize) -> Vec<UserId> {
    (0..n).map(|i| UserId::from(format!("u{i:03}"))).collect()
}

fn rebuild(corpus: &Corpus, posts: Vec<Post>) -> Corpus {
    Corpus::new(corpus.users().cloned().collect::<Vec<_>>(), posts, corpus.replies().cloned().collect::<Vec<_>>()).unwrap()
}

proptest! {
    #[test]
    fn relativeness_conserves_mass(value in -1e4f64..1e4, scores in prop::collection::vec(0.001f64..1.0, 1..8)) {
        let weights: BTreeMap<DomainLabel, f64> =
            scores.iter().enumerate().map(|(i, &s)| (DomainLabel::new(format!("d{i}")), s)).collect();
        let parts = relativeness_distribute(value, &weights);
        prop_assert_eq!(parts.len(), weights.len());
        let total: f64 = parts.values().sum();
        prop_assert!((total - value).abs() <= 1e-9 * value.abs().max(1.0));
    }

    #[test]
    fn idf_strictly_decreases_with_domain_frequency(n in 2usize..40, base in prop::option::of(1.5f64..20.0)) {
        let idf: Vec<f64> = (1..=n).map(|df| inverse_domain_frequency(df, n, base).unwrap()).collect();
        prop_assert!(idf.windows(2).all(|w| w[0] > w[1]));
        prop_assert_eq!(idf[n - 1], 0.0);
        prop_assert!(inverse_domain_frequency(0, n, base).is_none());
    }

    #[test]
    fn domain_weight_is_zero_at_or_below_rho(sc in 0.0f64..10.0, idf in 0.0f64..4.0, rho in 0.0f64..10.0) {
        let w = domain_weight(sc, idf, rho);
        if sc <= rho {
            prop_assert_eq!(w, 0.0);
        } else {
            prop_assert_eq!(w, sc * idf);
        }
    }

    #[test]
    fn trust_level_is_monotone(a in 0.0f64..=5.0, b in 0.0f64..=5.0) {
        let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
        let l = TrustLevel::from_scaled(Some(lo)).unwrap().level();
        let h = TrustLevel::from_scaled(Some(hi)).unwrap().level();
        prop_assert!(l <= h);
        prop_assert!((0..=5).contains(&l));
    }

    #[test]
    fn ndcg_is_a_unit_fraction_and_one_when_sorted(grades in prop::collection::vec(0u8..=3, 1..30)) {
        let users = ids(grades.len());
        let rel = Relevance::Graded(users.iter().cloned().zip(grades.iter().copied()).collect());
        let v = ndcg(&users, &rel, "d").unwrap();
        prop_assert!((0.0..=1.0 + 1e-12).contains(&v));

        let mut order: Vec<usize> = (0..users.len()).collect();
        order.sort_by(|&a, &b| grades[b].cmp(&grades[a]));
        let sorted: Vec<UserId> = order.iter().map(|&i| users[i].clone()).collect();
        let best = ndcg(&sorted, &rel, "d").unwrap();
        if grades.iter().any(|&g| g > 0) {
            prop_assert!((best - 1.0).abs() < 1e-12);
            prop_assert!(v <= best + 1e-12);
        } else {
            prop_assert_eq!(best, 0.0);
        }
        prop_assert!(dcg(&grades) >= 0.0);
    }

    #[test]
    fn precision_and_recall_grow_with_the_cutoff(
        n in 5usize..60,
        truth in prop::collection::btree_set(0usize..60, 1..20),
        q in 1usize..60,
    ) {
        let users = ids(60);
        let hc: BTreeSet<UserId> = truth.iter().map(|&i| users[i].clone()).collect();
        let ranked = &users[..n];
        let at = |k: usize| &ranked[..k.min(ranked.len())];
        let (p1, p2) = (precision1(&hc, at(q)).unwrap(), precision1(&hc, at(q + 1)).unwrap());
        let (r1, r2) = (
            recall(&hc, at(q), RecallMode::Default).unwrap(),
            recall(&hc, at(q + 1), RecallMode::Default).unwrap(),
        );
        prop_assert!(p1 <= p2 && r1 <= r2);
        prop_assert!((0.0..=1.0).contains(&p2) && (0.0..=1.0).contains(&r2));
        let strict = recall(&hc, at(q), RecallMode::Strict).unwrap();
        prop_assert!((0.0..=1.0).contains(&strict));
    }

    #[test]
    fn anomaly_precision_rises_when_a_label_flips_to_anomalous(
        flags in prop::collection::vec(any::<bool>(), 1..40),
        flip in 0usize..40,
        k in 1usize..50,
    ) {
        let users = ids(flags.len());
        let label = |b: bool| if b { AnomalyLabel::Anomalous } else { AnomalyLabel::Normal };
        let mut labels = AnomalyLabelSet::new(users.iter().cloned().zip(flags.iter().map(|&b| label(b))).collect());
        let before = anomaly_precision(&users, &labels, k).unwrap();
        labels.insert(users[flip % users.len()].clone(), AnomalyLabel::Anomalous);
        let after = anomaly_precision(&users, &labels, k).unwrap();
        prop_assert!(before <= after);
        prop_assert!((0.0..=1.0).contains(&after));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn more_retweets_never_lower_the_author_normalized_retweets(seed in 0u64..10_000, pick in any::<prop::sample::Index>(), bump in 1u64..500) {
        let setup = common::random_setup(seed, 8, 3, 2);
        let originals: Vec<&Post> = setup.corpus.posts().filter(|p| !p.is_retweet).collect();
        prop_assume!(!originals.is_empty());
        let target = pick.get(&originals).post_id.clone();

        let before = setup.scorer().score_corpus(&setup.corpus).unwrap();
        let posts: Vec<Post> = setup
            .corpus
            .posts()
            .map(|p| {
                let mut p = p.clone();
                if p.post_id == target {
                    p.retweet_count += bump;
                }
                p
            })
            .collect();
        let bumped = setup.with_corpus(rebuild(&setup.corpus, posts));
        let after = bumped.scorer().score_corpus(&bumped.corpus).unwrap();

        let author = &setup.corpus.post(&target).unwrap().user_id;
        for (b, a) in before.chunks.iter().zip(&after.chunks) {
            prop_assert_eq!(&b.rankable, &a.rankable);
            for d in setup.registry.labels() {
                prop_assert!(a.r_norm.get(author, d) >= b.r_norm.get(author, d) - 1e-12);
            }
        }
    }

    #[test]
    fn column_maxima_normalize_to_one(seed in 0u64..10_000) {
        let setup = common::random_setup(seed, 10, 3, 2);
        let scores = setup.scorer().score_corpus(&setup.corpus).unwrap();
        for chunk in &scores.chunks {
            for (raw, norm) in [(&chunk.w, &chunk.w_norm), (&chunk.r, &chunk.r_norm), (&chunk.l, &chunk.l_norm), (&chunk.p, &chunk.p_norm)] {
                for d in setup.registry.labels() {
                    let top = chunk.rankable.iter().map(|u| raw.get(u, d)).fold(0.0, f64::max);
                    if top > 0.0 {
                        let argmax = chunk.rankable.iter().find(|u| raw.get(u, d) == top).unwrap();
                        prop_assert_eq!(norm.get(argmax, d), 1.0);
                    }
                }
            }
        }
    }

    #[test]
    fn cleansing_is_idempotent_and_monotone(seed in 0u64..10_000, min_posts in 0usize..6) {
        let setup = common::random_setup(seed, 10, 4, 3);
        let config = CleansingConfig { min_posts, ..CleansingConfig::default() };
        let (once, _) = cleanse(setup.corpus.clone(), &config, &setup.provider);
        let (twice, report) = cleanse(once.clone(), &config, &setup.provider);
        prop_assert_eq!(&once, &twice);
        prop_assert_eq!(report.duplicates.removed + report.low_activity_users.removed + report.non_english.removed, 0);
        for p in once.posts() {
            let orig = setup.corpus.post(&p.post_id);
            prop_assert!(orig.is_some());
            prop_assert_eq!(&orig.unwrap().text, &p.text);
        }
        prop_assert!(once.user_count() <= setup.corpus.user_count());
    }
}
