use std::collections::{BTreeMap, BTreeSet};

use crate::corpus::UserId;
use crate::semantics::DomainLabel;

use super::config::{AttributeWeights, ConfigError, MissingChunk, WeightFunction};
use super::matrix::{DomainMatrix, MatrixName};
use super::CredibilityError;

/// The six normalized attributes of one chunk.
#[derive(Debug, Clone, Copy)]
pub struct ChunkAttributes<'a> {
    pub w: &'a DomainMatrix,
    pub r: &'a DomainMatrix,
    pub l: &'a DomainMatrix,
    pub p: &'a DomainMatrix,
    pub s: &'a DomainMatrix,
}

/// `C = alpha*FF' + beta*W' + gamma*R' + delta*L' + theta*P' + vartheta*S'`
/// for every rankable user and every domain.
pub fn chunk_credibility(
    chunk: Option<usize>,
    attrs: ChunkAttributes<'_>,
    ff_norm: &BTreeMap<UserId, f64>,
    weights: &AttributeWeights,
    rankable: &BTreeSet<UserId>,
    domains: &[DomainLabel],
) -> Result<DomainMatrix, ConfigError> {
    weights.validate()?;
    let mut c = DomainMatrix::new(MatrixName::C, chunk);
    for u in rankable {
        let ff = ff_norm.get(u).copied().unwrap_or(0.0);
        for d in domains {
            let v = weights.alpha * ff
                + weights.beta * attrs.w.get(u, d)
                + weights.gamma * attrs.r.get(u, d)
                + weights.delta * attrs.l.get(u, d)
                + weights.theta * attrs.p.get(u, d)
                + weights.vartheta * attrs.s.get(u, d);
            c.set(u, d, v);
        }
    }
    Ok(c)
}

/// Weighted mean of per-chunk credibility, `sum w(k) C^k / sum w(k)`, with
/// `chunks[0]` as `k = 1`. Users with no row in any chunk get no row.
pub fn temporal_credibility(
    chunks: &[DomainMatrix],
    expected_window: usize,
    weight_fn: &WeightFunction,
    missing: MissingChunk,
) -> Result<DomainMatrix, CredibilityError> {
    if chunks.len() != expected_window {
        return Err(CredibilityError::ChunkCount {
            expected: expected_window,
            got: chunks.len(),
        });
    }
    weight_fn.validate(expected_window)?;
    let users: BTreeSet<&UserId> = chunks.iter().flat_map(|c| c.users()).collect();
    let total: f64 = (1..=chunks.len()).map(|k| weight_fn.weight(k)).sum();
    let mut tc = DomainMatrix::new(MatrixName::TC, None);
    for u in users {
        let domains: BTreeSet<&DomainLabel> = chunks.iter().filter_map(|c| c.row(u)).flat_map(|r| r.keys()).collect();
        let present_weight: f64 = chunks
            .iter()
            .enumerate()
            .filter(|(_, c)| c.has_row(u))
            .map(|(i, _)| weight_fn.weight(i + 1))
            .sum();
        let denom = match missing {
            MissingChunk::Zero => total,
            MissingChunk::Skip => present_weight,
        };
        for d in domains {
            let num: f64 = chunks
                .iter()
                .enumerate()
                .map(|(i, c)| weight_fn.weight(i + 1) * c.get(u, d))
                .sum();
            tc.set(u, d, num / denom);
        }
    }
    Ok(tc)
}

/// Per-domain min-max rescaling of TC onto `[0, 5]`.
pub fn scale_credibility(tc: &DomainMatrix, domains: &[DomainLabel]) -> DomainMatrix {
    let users: Vec<UserId> = tc.users().cloned().collect();
    tc.min_max_scale(MatrixName::TCScaled, &users, domains, 5.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn single(name: MatrixName, v: f64) -> DomainMatrix {
        let mut m = DomainMatrix::new(name, Some(1));
        m.set(&"u".into(), &"d".into(), v);
        m
    }

    fn credibility_for(attrs: [f64; 6], weights: AttributeWeights) -> f64 {
        let [ff, w, r, l, p, s] = attrs;
        let (w, r, l, p, s) = (
            single(MatrixName::WNorm, w),
            single(MatrixName::RNorm, r),
            single(MatrixName::LNorm, l),
            single(MatrixName::PNorm, p),
            single(MatrixName::SNorm, s),
        );
        let ffm = BTreeMap::from([(UserId::from("u"), ff)]);
        let rankable = BTreeSet::from([UserId::from("u")]);
        let c = chunk_credibility(Some(1), ChunkAttributes { w: &w, r: &r, l: &l, p: &p, s: &s }, &ffm, &weights, &rankable, &["d".into()]).unwrap();
        c.get(&"u".into(), &"d".into())
    }

    #[test]
    fn credibility_combination() {
        let w = AttributeWeights::default();
        assert!((credibility_for([1.0; 6], w) - 1.0).abs() < 1e-12);
        assert_eq!(credibility_for([0.0; 6], w), 0.0);
        assert!((credibility_for([1.0, 0.0, 0.0, 0.0, 0.0, 0.0], w) - 0.2).abs() < 1e-12);
    }

    #[test]
    fn credibility_rejects_bad_weights() {
        let mut w = AttributeWeights::default();
        w.vartheta = 0.1;
        let m = single(MatrixName::WNorm, 1.0);
        let attrs = ChunkAttributes { w: &m, r: &m, l: &m, p: &m, s: &m };
        assert!(chunk_credibility(None, attrs, &BTreeMap::new(), &w, &BTreeSet::new(), &[]).is_err());
    }

    fn chunk_seq(values: &[Option<f64>]) -> Vec<DomainMatrix> {
        values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let mut m = DomainMatrix::new(MatrixName::C, Some(i + 1));
                if let Some(v) = v {
                    m.set(&"u".into(), &"d".into(), *v);
                }
                m
            })
            .collect()
    }

    #[test]
    fn temporal_weighting() {
        let tc = |vals: &[Option<f64>], missing| {
            temporal_credibility(&chunk_seq(vals), vals.len(), &WeightFunction::Linear, missing)
                .unwrap()
                .get(&"u".into(), &"d".into())
        };
        assert!((tc(&[Some(0.3); 4], MissingChunk::Zero) - 0.3).abs() < 1e-12);
        assert!((tc(&[Some(0.0), Some(1.0)], MissingChunk::Zero) - 2.0 / 3.0).abs() < 1e-12);
        let oldest_only = [Some(1.0), None, None, None, None, None];
        assert!((tc(&oldest_only, MissingChunk::Zero) - 1.0 / 21.0).abs() < 1e-12);
        assert!((tc(&oldest_only, MissingChunk::Skip) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn temporal_window_mismatch() {
        let err = temporal_credibility(&chunk_seq(&[Some(1.0)]), 2, &WeightFunction::Linear, MissingChunk::Zero);
        assert!(matches!(err, Err(CredibilityError::ChunkCount { expected: 2, got: 1 })));
    }

    #[test]
    fn absent_users_have_no_row() {
        let tc = temporal_credibility(&chunk_seq(&[None, None]), 2, &WeightFunction::Linear, MissingChunk::Zero).unwrap();
        assert!(tc.is_empty());
    }
}
