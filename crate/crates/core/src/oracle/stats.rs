use std::collections::HashMap;
use std::hash::Hash;

/// Outcome counts of a Monte-Carlo run.
#[derive(Debug, Clone)]
pub struct Histogram<K> {
    counts: HashMap<K, u64>,
    total: u64,
}

impl<K: Hash + Eq> Default for Histogram<K> {
    fn default() -> Self {
        Histogram { counts: HashMap::new(), total: 0 }
    }
}

impl<K: Hash + Eq> Histogram<K> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn record(&mut self, k: K) {
        *self.counts.entry(k).or_insert(0) += 1;
        self.total += 1;
    }

    pub fn total(&self) -> u64 {
        self.total
    }

    pub fn count(&self, k: &K) -> u64 {
        self.counts.get(k).copied().unwrap_or(0)
    }

    pub fn frequency(&self, k: &K) -> f64 {
        self.count(k) as f64 / self.total.max(1) as f64
    }

    pub fn iter(&self) -> impl Iterator<Item = (&K, &u64)> {
        self.counts.iter()
    }

    /// Re-keys the histogram, merging outcomes with the same image.
    pub fn map<J: Hash + Eq>(&self, mut f: impl FnMut(&K) -> J) -> Histogram<J> {
        let mut out = Histogram::new();
        for (k, &c) in &self.counts {
            *out.counts.entry(f(k)).or_insert(0) += c;
        }
        out.total = self.total;
        out
    }
}

impl<K: Hash + Eq> FromIterator<K> for Histogram<K> {
    fn from_iter<I: IntoIterator<Item = K>>(iter: I) -> Self {
        let mut h = Histogram::new();
        for k in iter {
            h.record(k);
        }
        h
    }
}

/// Empirical ℓ1 distance with a 3σ error bar.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Estimate {
    pub value: f64,
    /// `3 Σ_w sqrt(p_w (1 - p_w) / N)`, which bounds three times the
    /// expected distance of an exact sampler.
    pub error_bar: f64,
}

/// ℓ1 distance between empirical frequencies and exact probabilities.
///
/// Outcomes missing from `exact` have probability zero.
pub fn l1_estimate<K: Hash + Eq + Clone>(hist: &Histogram<K>, exact: &HashMap<K, f64>) -> L1Estimate {
    assert!(hist.total() > 0, "empty histogram");
    let n = hist.total() as f64;
    let mut value = 0.0;
    let mut var = 0.0;
    for (k, &p) in exact {
        value += (hist.frequency(k) - p).abs();
        var += (p * (1.0 - p) / n).max(0.0).sqrt();
    }
    for (k, &c) in hist.iter() {
        if !exact.contains_key(k) {
            value += c as f64 / n;
        }
    }
    L1Estimate { value, error_bar: 3.0 * var }
}

/// Standard deviation of a binomial proportion at rate `p` over `n` trials.
pub fn binomial_sigma(p: f64, n: u64) -> f64 {
    (p * (1.0 - p) / n as f64).sqrt()
}

/// Observed failure fraction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FailureRate {
    pub failures: u64,
    pub trials: u64,
}

impl FailureRate {
    /// Runs `trials` independent queries; `query(i)` reports whether query `i` failed.
    pub fn measure(trials: u64, mut query: impl FnMut(u64) -> bool) -> Self {
        let failures = (0..trials).filter(|&i| query(i)).count() as u64;
        FailureRate { failures, trials }
    }

    pub fn rate(&self) -> f64 {
        self.failures as f64 / self.trials.max(1) as f64
    }

    /// `3σ` of the binomial proportion, evaluated at the hypothesised rate.
    pub fn error_bar(&self, hypothesis: f64) -> f64 {
        3.0 * binomial_sigma(hypothesis, self.trials)
    }

    /// Whether the observed rate is consistent with `rate <= bound`.
    pub fn within(&self, bound: f64) -> bool {
        self.rate() <= bound + self.error_bar(bound)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use rand::Rng;

    #[test]
    fn self_distance_is_within_error_bar() {
        let exact: HashMap<u8, f64> = [(0, 0.5), (1, 0.3), (2, 0.2)].into_iter().collect();
        let mut rng = seeded(5);
        let hist: Histogram<u8> = (0..100_000)
            .map(|_| {
                let x: f64 = rng.random();
                if x < 0.5 {
                    0
                } else if x < 0.8 {
                    1
                } else {
                    2
                }
            })
            .collect();
        let est = l1_estimate(&hist, &exact);
        assert!(est.value <= est.error_bar, "{est:?}");
    }

    #[test]
    fn disjoint_support_gives_two() {
        let exact: HashMap<Option<u8>, f64> = [(Some(0), 0.25), (Some(1), 0.75)].into_iter().collect();
        let hist: Histogram<Option<u8>> = std::iter::repeat_n(None, 10).collect();
        assert_eq!(l1_estimate(&hist, &exact).value, 2.0);
    }

    #[test]
    fn failure_rate_tolerance() {
        let r = FailureRate { failures: 130, trials: 1_000 };
        assert!(r.within(0.125));
        assert!(!FailureRate { failures: 170, trials: 1_000 }.within(0.125));
        assert_eq!(FailureRate::measure(10, |i| i % 5 == 0).failures, 2);
    }
}
