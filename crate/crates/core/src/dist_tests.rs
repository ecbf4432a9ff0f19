//! Collision-based ℓ₂ testers over sample multisets.

use std::collections::HashMap;
use std::hash::Hash;

use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DistError {
    #[error("need at least 2 samples, got {0}")]
    TooFewSamples(usize),
    #[error("sample sets differ in size ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("{m} samples do not exceed the required {required:.1}; the closeness guarantee is void")]
    BelowSampleBound { m: usize, required: f64 },
    #[error("invalid closeness parameters: {0}")]
    BadParams(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Accept,
    Reject,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Accept => "accept",
            Verdict::Reject => "reject",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct CollisionStats {
    pub m: usize,
    pub self_p: u64,
    pub self_q: u64,
    pub cross: u64,
}

fn histogram<T: Hash + Eq>(samples: &[T]) -> HashMap<&T, u64> {
    let mut h = HashMap::new();
    for s in samples {
        *h.entry(s).or_insert(0) += 1;
    }
    h
}

/// Unordered equal pairs within one multiset.
pub fn self_collisions<T: Hash + Eq>(samples: &[T]) -> u64 {
    histogram(samples).values().map(|&c| c * (c - 1) / 2).sum()
}

/// Equal pairs with one element from each multiset.
pub fn cross_collisions<T: Hash + Eq>(a: &[T], b: &[T]) -> u64 {
    let hb = histogram(b);
    histogram(a)
        .iter()
        .map(|(k, &ca)| ca * hb.get(k).copied().unwrap_or(0))
        .sum()
}

fn pairs(m: usize) -> f64 {
    m as f64 * (m as f64 - 1.0) / 2.0
}

/// Unbiased estimate of `‖p‖₂²`: self-collisions over `m(m−1)/2`.
pub fn estimate_l2_norm_sq<T: Hash + Eq>(samples: &[T]) -> Result<f64, DistError> {
    let m = samples.len();
    if m < 2 {
        return Err(DistError::TooFewSamples(m));
    }
    Ok(self_collisions(samples) as f64 / pairs(m))
}

/// Accepts iff the estimate is at most `θ/2`, the middle of the promise gap
/// `(θ/4, θ]`.
pub fn l2_norm_test<T: Hash + Eq>(samples: &[T], theta: f64) -> Result<Verdict, DistError> {
    Ok(norm_verdict(estimate_l2_norm_sq(samples)?, theta))
}

pub fn norm_verdict(estimate: f64, theta: f64) -> Verdict {
    if estimate <= theta / 2.0 {
        Verdict::Accept
    } else {
        Verdict::Reject
    }
}

/// Closeness-test parameters: gap `ξ`, norm bound `b`, failure probability
/// `δ` and the constant `c31` in the sample bound.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosenessParams {
    pub xi: f64,
    pub b: f64,
    pub delta: f64,
    pub c31: f64,
}

impl ClosenessParams {
    /// `c31 · √b / ξ · ln(1/δ)`; the tester needs strictly more samples.
    pub fn sample_bound(&self) -> Result<f64, DistError> {
        if !(self.xi > 0.0) {
            return Err(DistError::BadParams("ξ must be positive"));
        }
        if !(self.b > 0.0) {
            return Err(DistError::BadParams("b must be positive"));
        }
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return Err(DistError::BadParams("δ must lie in (0, 1)"));
        }
        Ok(self.c31 * self.b.sqrt() / self.xi * (1.0 / self.delta).ln())
    }

    pub fn check_samples(&self, m: usize) -> Result<(), DistError> {
        let required = self.sample_bound()?;
        if (m as f64) <= required {
            Err(DistError::BelowSampleBound { m, required })
        } else {
            Ok(())
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ClosenessOutcome {
    pub verdict: Verdict,
    pub estimate: f64,
    pub stats: CollisionStats,
}

/// Estimate of `‖p − q‖₂²` from equal-size sample sets.
pub fn estimate_l2_distance_sq<T: Hash + Eq>(p: &[T], q: &[T]) -> Result<(f64, CollisionStats), DistError> {
    let m = p.len();
    if m != q.len() {
        return Err(DistError::SizeMismatch(m, q.len()));
    }
    if m < 2 {
        return Err(DistError::TooFewSamples(m));
    }
    let stats = CollisionStats {
        m,
        self_p: self_collisions(p),
        self_q: self_collisions(q),
        cross: cross_collisions(p, q),
    };
    let est = (stats.self_p + stats.self_q) as f64 / pairs(m) - 2.0 * stats.cross as f64 / (m as f64 * m as f64);
    Ok((est, stats))
}

/// Per-sample collision counts, built once so that many pairwise distance
/// estimates reuse them.
#[derive(Debug, Clone, PartialEq)]
pub struct CollisionProfile<T: Hash + Eq> {
    m: usize,
    self_collisions: u64,
    counts: HashMap<T, u64>,
}

impl<T: Hash + Eq + Clone> CollisionProfile<T> {
    pub fn new(samples: &[T]) -> Self {
        let mut counts = HashMap::new();
        for s in samples {
            *counts.entry(s.clone()).or_insert(0) += 1;
        }
        CollisionProfile {
            m: samples.len(),
            self_collisions: counts.values().map(|&c| c * (c - 1) / 2).sum(),
            counts,
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn norm_sq(&self) -> Result<f64, DistError> {
        if self.m < 2 {
            return Err(DistError::TooFewSamples(self.m));
        }
        Ok(self.self_collisions as f64 / pairs(self.m))
    }

    /// Same estimator as [`estimate_l2_distance_sq`].
    pub fn distance_sq(&self, other: &Self) -> Result<f64, DistError> {
        if self.m != other.m {
            return Err(DistError::SizeMismatch(self.m, other.m));
        }
        if self.m < 2 {
            return Err(DistError::TooFewSamples(self.m));
        }
        let (small, large) = if self.counts.len() <= other.counts.len() { (self, other) } else { (other, self) };
        let cross: u64 = small
            .counts
            .iter()
            .map(|(k, &c)| c * large.counts.get(k).copied().unwrap_or(0))
            .sum();
        let m = self.m as f64;
        Ok((self.self_collisions + other.self_collisions) as f64 / pairs(self.m) - 2.0 * cross as f64 / (m * m))
    }
}

pub fn closeness_verdict(estimate: f64, xi: f64) -> Verdict {
    if estimate <= 2.0 * xi {
        Verdict::Accept
    } else {
        Verdict::Reject
    }
}

/// Accepts iff the distance estimate is at most `2ξ`, the middle of the
/// promise gap `[ξ, 4ξ]`. Refuses to run below the sample bound.
pub fn l2_closeness_test<T: Hash + Eq>(p: &[T], q: &[T], params: ClosenessParams) -> Result<ClosenessOutcome, DistError> {
    params.check_samples(p.len())?;
    let (estimate, stats) = estimate_l2_distance_sq(p, q)?;
    Ok(ClosenessOutcome {
        verdict: closeness_verdict(estimate, params.xi),
        estimate,
        stats,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::distributions::{Distribution, WeightedIndex};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn uniform_samples(rng: &mut ChaCha8Rng, n: u32, m: usize) -> Vec<u32> {
        (0..m).map(|_| rng.gen_range(0..n)).collect()
    }

    #[test]
    fn norm_estimates() {
        assert_eq!(estimate_l2_norm_sq(&[7; 50]).unwrap(), 1.0);
        assert_eq!(estimate_l2_norm_sq(&[1, 2]).unwrap(), 0.0);
        assert_eq!(estimate_l2_norm_sq(&[1]), Err(DistError::TooFewSamples(1)));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let est = estimate_l2_norm_sq(&uniform_samples(&mut rng, 100, 100_000)).unwrap();
        assert!((est - 0.01).abs() < 0.001);
    }

    #[test]
    fn norm_test_examples() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        assert_eq!(l2_norm_test(&uniform_samples(&mut rng, 100, 100_000), 0.4).unwrap(), Verdict::Accept);
        assert_eq!(l2_norm_test(&[3u8; 100], 0.5).unwrap(), Verdict::Reject);
    }

    fn loose() -> ClosenessParams {
        ClosenessParams {
            xi: 0.1,
            b: 1.0,
            delta: 0.5,
            c31: 1.0,
        }
    }

    #[test]
    fn closeness_examples() {
        let same = [5u8; 100];
        let out = l2_closeness_test(&same, &same, loose()).unwrap();
        assert_eq!(out.verdict, Verdict::Accept);
        assert!(out.estimate.abs() < 1e-12);

        let other = [6u8; 100];
        let out = l2_closeness_test(&same, &other, loose()).unwrap();
        assert_eq!(out.verdict, Verdict::Reject);
        assert!((out.estimate - 2.0).abs() < 1e-12);

        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let low = uniform_samples(&mut rng, 50, 100_000);
        let high: Vec<u32> = uniform_samples(&mut rng, 50, 100_000).into_iter().map(|x| x + 50).collect();
        let params = ClosenessParams {
            xi: 1.0 / 400.0,
            b: 0.03,
            delta: 0.1,
            c31: 1.0,
        };
        let out = l2_closeness_test(&low, &high, params).unwrap();
        assert_eq!(out.verdict, Verdict::Reject);
        assert!((out.estimate - 0.04).abs() < 0.004);
    }

    #[test]
    fn sample_bound_enforced() {
        let params = ClosenessParams {
            xi: 0.01,
            b: 1.0,
            delta: 0.1,
            c31: 1.0,
        };
        let required = 100.0 * 10f64.ln();
        assert!((params.sample_bound().unwrap() - required).abs() < 1e-9);
        assert!(matches!(
            l2_closeness_test(&[1u8; 200], &[1u8; 200], params),
            Err(DistError::BelowSampleBound { m: 200, .. })
        ));
        assert!(l2_closeness_test(&[1u8; 231], &[1u8; 231], params).is_ok());
        assert_eq!(
            l2_closeness_test(&[1u8; 30], &[1u8; 20], loose()).unwrap_err(),
            DistError::SizeMismatch(30, 20)
        );
    }

    fn truncated_geometric() -> (Vec<f64>, f64) {
        let w: Vec<f64> = (0..20).map(|i| 0.5f64.powi(i)).collect();
        let total: f64 = w.iter().sum();
        let p: Vec<f64> = w.iter().map(|x| x / total).collect();
        let norm = p.iter().map(|x| x * x).sum();
        (p, norm)
    }

    #[test]
    fn estimator_is_unbiased() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (geo, geo_norm) = truncated_geometric();
        let cases: Vec<(Vec<f64>, f64)> = vec![(vec![0.01; 100], 0.01), (geo, geo_norm), (vec![1.0], 1.0)];
        for (p, truth) in cases {
            let dist = WeightedIndex::new(&p).unwrap();
            let reps = 1000;
            let estimates: Vec<f64> = (0..reps)
                .map(|_| {
                    let s: Vec<usize> = (0..200).map(|_| dist.sample(&mut rng)).collect();
                    estimate_l2_norm_sq(&s).unwrap()
                })
                .collect();
            let mean = estimates.iter().sum::<f64>() / reps as f64;
            let var = estimates.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (reps - 1) as f64;
            let se = (var / reps as f64).sqrt();
            assert!((mean - truth).abs() <= 3.0 * se + 1e-12, "mean {mean} truth {truth} se {se}");
        }
    }

    #[test]
    fn profile_matches_direct_estimator() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..20 {
            let a = uniform_samples(&mut rng, 25, 300);
            let b = uniform_samples(&mut rng, 35, 300);
            let (pa, pb) = (CollisionProfile::new(&a), CollisionProfile::new(&b));
            assert_eq!(pa.norm_sq().unwrap(), estimate_l2_norm_sq(&a).unwrap());
            let direct = estimate_l2_distance_sq(&a, &b).unwrap().0;
            assert!((pa.distance_sq(&pb).unwrap() - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn closeness_is_symmetric() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for _ in 0..50 {
            let a = uniform_samples(&mut rng, 30, 200);
            let b = uniform_samples(&mut rng, 40, 200);
            let ab = l2_closeness_test(&a, &b, loose()).unwrap();
            let ba = l2_closeness_test(&b, &a, loose()).unwrap();
            assert_eq!(ab.verdict, ba.verdict);
            assert!((ab.estimate - ba.estimate).abs() < 1e-12);
        }
    }

    #[test]
    fn error_rate_falls_with_more_samples() {
        // p uniform on 40 points, q shifted by 10: ‖p − q‖² = 0.025 = 4ξ·1.25.
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let xi = 0.005;
        let mut rates = Vec::new();
        for m in [100, 200, 400] {
            let mut wrong = 0;
            for _ in 0..400 {
                let p = uniform_samples(&mut rng, 40, m);
                let q: Vec<u32> = uniform_samples(&mut rng, 40, m).into_iter().map(|x| x + 10).collect();
                let (est, _) = estimate_l2_distance_sq(&p, &q).unwrap();
                if closeness_verdict(est, xi) == Verdict::Accept {
                    wrong += 1;
                }
            }
            rates.push(wrong);
        }
        assert!(rates[0] >= rates[1] && rates[1] >= rates[2], "{rates:?}");
    }
}
