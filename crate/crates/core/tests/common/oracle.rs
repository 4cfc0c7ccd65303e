//! Straight-line reference evaluation of the credibility metric, written
//! without the crate's credibility code. Only classification, sentiment and
//! the stopword list come from the crate, as inputs.

use std::collections::{BTreeMap, BTreeSet, HashSet};

use chrono::{Datelike, TimeZone, Utc};
use credrank::semantics::{SemanticsProvider, TaxonomyAssignment};

use super::Setup;

type Key = (String, String);

#[derive(Debug, Default)]
pub struct OracleChunk {
    pub rankable: BTreeSet<String>,
    pub sc: BTreeMap<Key, f64>,
    pub w: BTreeMap<Key, f64>,
    pub w_norm: BTreeMap<Key, f64>,
    pub r_norm: BTreeMap<Key, f64>,
    pub l_norm: BTreeMap<Key, f64>,
    pub p_norm: BTreeMap<Key, f64>,
    pub s_norm: BTreeMap<Key, f64>,
    pub c: BTreeMap<Key, f64>,
}

#[derive(Debug, Default)]
pub struct OracleResult {
    pub chunks: Vec<OracleChunk>,
    pub ff_norm: BTreeMap<String, f64>,
    pub tc: BTreeMap<Key, f64>,
    pub tc_scaled: BTreeMap<Key, f64>,
}

fn keyword_tokens(text: &str, setup: &Setup) -> Vec<String> {
    let mut out = Vec::new();
    for raw in text.split_whitespace() {
        if raw.contains("://") || raw.to_lowercase().starts_with("www.") || raw.starts_with('@') {
            continue;
        }
        let t = raw.trim_matches(|c: char| !c.is_alphanumeric()).to_lowercase();
        if t.is_empty() || setup.stopwords.contains(&t) {
            continue;
        }
        out.push(t);
    }
    out
}

fn host(url: &str) -> String {
    let rest = url.split("://").nth(1).unwrap_or(url);
    let authority = rest.split('/').next().unwrap_or("");
    authority.split(':').next().unwrap_or("").to_lowercase()
}

fn kept(setup: &Setup, v: Vec<TaxonomyAssignment>) -> Vec<(String, f64)> {
    v.into_iter()
        .filter(|a| a.confident && setup.registry.contains(&a.domain))
        .map(|a| (a.domain.as_str().to_string(), a.score))
        .collect()
}

fn normalize_by_max(m: &BTreeMap<Key, f64>, users: &BTreeSet<String>, domains: &[String]) -> BTreeMap<Key, f64> {
    let mut out = BTreeMap::new();
    for d in domains {
        let mut max = f64::NEG_INFINITY;
        for u in users {
            max = max.max(*m.get(&(u.clone(), d.clone())).unwrap_or(&0.0));
        }
        for u in users {
            let v = *m.get(&(u.clone(), d.clone())).unwrap_or(&0.0);
            out.insert((u.clone(), d.clone()), if max > 0.0 { v / max } else { 0.0 });
        }
    }
    out
}

fn min_max(m: &BTreeMap<Key, f64>, users: &BTreeSet<String>, domains: &[String], scale: f64) -> BTreeMap<Key, f64> {
    let mut out = BTreeMap::new();
    for d in domains {
        let vals: Vec<f64> = users.iter().map(|u| *m.get(&(u.clone(), d.clone())).unwrap_or(&0.0)).collect();
        let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        for (u, v) in users.iter().zip(vals) {
            let x = if hi > lo { (v - lo) * scale / (hi - lo) } else { 0.0 };
            out.insert((u.clone(), d.clone()), x);
        }
    }
    out
}

pub fn evaluate(setup: &Setup) -> OracleResult {
    let cfg = &setup.config;
    let window = cfg.window as i32;
    let domains: Vec<String> = setup.registry.labels().iter().map(|d| d.as_str().to_string()).collect();
    let n = domains.len() as f64;
    let provider: &dyn SemanticsProvider = &setup.provider;

    let posts: Vec<_> = setup.corpus.posts().collect();
    let newest = posts.iter().map(|p| p.created_at).max().unwrap();
    let last = newest.year() * 12 + newest.month0() as i32;
    let chunk_of = |t: chrono::DateTime<Utc>| -> Option<usize> {
        let k = t.year() * 12 + t.month0() as i32 - last + window;
        (1..=window).contains(&k).then_some(k as usize)
    };
    let as_of = {
        let next = last + 1;
        Utc.with_ymd_and_hms(next / 12, (next % 12) as u32 + 1, 1, 0, 0, 0).unwrap()
    };

    let mut post_domains: BTreeMap<String, (Vec<(String, f64)>, Vec<(String, f64)>)> = BTreeMap::new();
    for p in &posts {
        if chunk_of(p.created_at).is_none() {
            continue;
        }
        let text = kept(setup, provider.classify_text(&p.text));
        let mut url = Vec::new();
        for u in &p.urls {
            if let Some(content) = setup.fixtures.get(u) {
                url.extend(kept(setup, provider.classify_text(content)));
            }
        }
        post_domains.insert(p.post_id.as_str().to_string(), (text, url));
    }
    let weight_of = |pid: &str| -> BTreeMap<String, f64> {
        let mut w = BTreeMap::new();
        let (t, u) = &post_domains[pid];
        for (d, s) in t.iter().chain(u) {
            *w.entry(d.clone()).or_insert(0.0) += s;
        }
        w
    };

    // follower-friend ratio over users with posts in the window
    let mut ff = BTreeMap::new();
    for p in &posts {
        if chunk_of(p.created_at).is_none() {
            continue;
        }
        let u = setup.corpus.user(&p.user_id).unwrap();
        let secs = (as_of - u.created_at).num_seconds() as f64;
        let age = (secs / (365.25 * 86400.0)).max(1.0 / 365.25);
        let diff = u.followers_count as f64 - u.friends_count as f64;
        let r = if diff == 0.0 { 1.0 / age } else { diff / age };
        ff.insert(u.user_id.as_str().to_string(), r);
    }
    let lo = ff.values().cloned().fold(f64::INFINITY, f64::min);
    let hi = ff.values().cloned().fold(f64::NEG_INFINITY, f64::max);
    let ff_norm: BTreeMap<String, f64> =
        ff.iter().map(|(u, &v)| (u.clone(), if hi > lo { (v - lo) / (hi - lo) } else { 0.0 })).collect();

    let w8 = &cfg.weights;
    let mut chunks = Vec::new();
    for k in 1..=window as usize {
        let mut oc = OracleChunk::default();
        let in_chunk: Vec<_> = posts.iter().filter(|p| chunk_of(p.created_at) == Some(k)).collect();
        let authors: BTreeSet<String> = in_chunk.iter().map(|p| p.user_id.as_str().to_string()).collect();

        for u in &authors {
            let mine: Vec<_> = in_chunk.iter().filter(|p| p.user_id.as_str() == u).collect();
            let mut total = 0usize;
            let mut distinct = HashSet::new();
            let mut urls = Vec::new();
            for p in &mine {
                for t in keyword_tokens(&p.text, setup) {
                    total += 1;
                    distinct.insert(t);
                }
                urls.extend(p.urls.iter().cloned());
            }
            let twt_sim = if total == 0 { 1.0 } else { distinct.len() as f64 / total as f64 };
            let url_sim = if urls.is_empty() {
                0.0
            } else {
                let du: HashSet<&String> = urls.iter().collect();
                let dh: HashSet<String> = urls.iter().map(|x| host(x)).collect();
                0.5 * (du.len() + dh.len()) as f64 / urls.len() as f64
            };
            let mut text_sum: BTreeMap<String, f64> = BTreeMap::new();
            let mut url_sum: BTreeMap<String, f64> = BTreeMap::new();
            for p in &mine {
                let (t, us) = &post_domains[p.post_id.as_str()];
                for (d, s) in t {
                    *text_sum.entry(d.clone()).or_insert(0.0) += s;
                }
                for (d, s) in us {
                    *url_sum.entry(d.clone()).or_insert(0.0) += s;
                }
            }
            let mut df = 0usize;
            for d in &domains {
                let v = twt_sim * text_sum.get(d).unwrap_or(&0.0) + url_sim * url_sum.get(d).unwrap_or(&0.0);
                if v > 0.0 {
                    df += 1;
                }
                oc.sc.insert((u.clone(), d.clone()), v);
            }
            if df > 0 {
                oc.rankable.insert(u.clone());
                let idf = (n / df as f64).ln();
                for d in &domains {
                    let sc = oc.sc[&(u.clone(), d.clone())];
                    oc.w.insert((u.clone(), d.clone()), if sc > cfg.rho { sc * idf } else { 0.0 });
                }
            }
        }

        let mut r = BTreeMap::new();
        let mut l = BTreeMap::new();
        let mut pr = BTreeMap::new();
        for p in &in_chunk {
            if p.is_retweet {
                continue;
            }
            let w = weight_of(p.post_id.as_str());
            let total: f64 = w.values().sum();
            if total <= 0.0 {
                continue;
            }
            for (d, s) in &w {
                let key = (p.user_id.as_str().to_string(), d.clone());
                *r.entry(key.clone()).or_insert(0.0) += p.retweet_count as f64 * s / total;
                *l.entry(key.clone()).or_insert(0.0) += p.favorite_count as f64 * s / total;
                *pr.entry(key).or_insert(0.0) += p.replies_count as f64 * s / total;
            }
        }

        let mut pools: BTreeMap<String, (f64, f64)> = BTreeMap::new();
        for reply in setup.corpus.replies() {
            if chunk_of(reply.created_at) != Some(k) {
                continue;
            }
            let Some(parent) = setup.corpus.post(&reply.parent_post_id) else { continue };
            if chunk_of(parent.created_at).is_none() || parent.is_retweet || parent.user_id == reply.author_user_id {
                continue;
            }
            let s = provider.sentiment(&reply.text).value();
            let e = pools.entry(parent.post_id.as_str().to_string()).or_insert((0.0, 0.0));
            if s > 0.0 {
                e.0 += s;
            } else if s < 0.0 {
                e.1 += s;
            }
        }
        let mut s_net = BTreeMap::new();
        for (pid, (pos, neg)) in &pools {
            let owner = setup.corpus.post(&pid.as_str().into()).unwrap().user_id.as_str().to_string();
            let w = weight_of(pid);
            let total: f64 = w.values().sum();
            if total <= 0.0 {
                continue;
            }
            for (d, s) in &w {
                *s_net.entry((owner.clone(), d.clone())).or_insert(0.0) += pos * s / total - (neg * s / total).abs();
            }
        }

        let pool = oc.rankable.clone();
        oc.w_norm = normalize_by_max(&oc.w, &pool, &domains);
        oc.r_norm = normalize_by_max(&r, &pool, &domains);
        oc.l_norm = normalize_by_max(&l, &pool, &domains);
        oc.p_norm = normalize_by_max(&pr, &pool, &domains);
        oc.s_norm = min_max(&s_net, &pool, &domains, 1.0);
        for u in &pool {
            for d in &domains {
                let key = (u.clone(), d.clone());
                let c = w8.alpha * ff_norm[u]
                    + w8.beta * oc.w_norm[&key]
                    + w8.gamma * oc.r_norm[&key]
                    + w8.delta * oc.l_norm[&key]
                    + w8.theta * oc.p_norm[&key]
                    + w8.vartheta * oc.s_norm[&key];
                oc.c.insert(key, c);
            }
        }
        chunks.push(oc);
    }

    let everyone: BTreeSet<String> = chunks.iter().flat_map(|c| c.rankable.iter().cloned()).collect();
    let wsum: f64 = (1..=window).map(|k| k as f64).sum();
    let mut tc = BTreeMap::new();
    for u in &everyone {
        for d in &domains {
            let key = (u.clone(), d.clone());
            let num: f64 = chunks.iter().enumerate().map(|(i, c)| (i + 1) as f64 * c.c.get(&key).unwrap_or(&0.0)).sum();
            tc.insert(key, num / wsum);
        }
    }
    let tc_scaled = min_max(&tc, &everyone, &domains, 5.0);
    OracleResult {
        chunks,
        ff_norm,
        tc,
        tc_scaled,
    }
}
