use serde::{Deserialize, Serialize};

use crate::rng::hash3;

/// ℓ1 heavy hitters over a non-negative vector, from a Count-Min sketch.
///
/// With width `16k`, a row overestimates `f_i` by more than `‖f‖₁ / (4k)`
/// with probability at most 1/4, so the minimum over `rows` rows does so
/// with probability at most `4^-rows`. Outside that event the query returns
/// every `f_i >= ‖f‖₁/k`, no `f_i <= ‖f‖₁/(2k)`, and estimates with
/// `0 <= f_i - f̃_i <= ‖f‖₁/(4k)`.
///
/// Candidates are found by scanning the whole universe at query time.
// TODO: dyadic candidate search so that queries cost O(k log n) instead of O(n).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HeavyHitter {
    universe: u64,
    k: u64,
    rows: usize,
    width: usize,
    seed: u64,
    counters: Vec<i64>,
}

impl HeavyHitter {
    pub fn new(universe: u64, k: usize, rows: usize, seed: u64) -> Self {
        assert!(k >= 1 && rows >= 1);
        let width = 16 * k;
        HeavyHitter { universe, k: k as u64, rows, width, seed, counters: vec![0; rows * width] }
    }

    /// Rows needed so that some index of the universe is misestimated with
    /// probability at most `failure`.
    pub fn rows_for(universe: u64, failure: f64) -> usize {
        let r = ((universe as f64 / failure).ln() / 4f64.ln()).ceil();
        (r as usize).max(4)
    }

    pub fn k(&self) -> usize {
        self.k as usize
    }

    pub fn counter_count(&self) -> usize {
        self.counters.len()
    }

    fn slot(&self, row: usize, i: u64) -> usize {
        row * self.width + (hash3(self.seed, row as u64, i) % self.width as u64) as usize
    }

    pub fn update(&mut self, i: u64, delta: i64) {
        for row in 0..self.rows {
            let s = self.slot(row, i);
            self.counters[s] += delta;
        }
    }

    /// Raw Count-Min estimate; never below `f_i` for non-negative vectors.
    pub fn upper_estimate(&self, i: u64) -> i64 {
        (0..self.rows).map(|r| self.counters[self.slot(r, i)]).min().unwrap_or(0)
    }

    /// Heavy coordinates and their one-sided estimates, given `l1 = ‖f‖₁`.
    pub fn query(&self, l1: u64) -> Vec<(u64, u64)> {
        let slack = l1 / (4 * self.k);
        (0..self.universe)
            .filter_map(|i| {
                let e = self.upper_estimate(i);
                if e <= 0 || (e as u128) * 4 * self.k as u128 <= 3 * l1 as u128 {
                    return None;
                }
                Some((i, e as u64 - slack))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sketch(f: &[i64], k: usize, seed: u64) -> HeavyHitter {
        let mut h = HeavyHitter::new(f.len() as u64, k, 8, seed);
        for (i, &x) in f.iter().enumerate() {
            h.update(i as u64, x);
        }
        h
    }

    #[test]
    fn skewed_vector_k2() {
        // ‖f‖₁ = 12: 10 >= 12/2 must be reported with an estimate in [7, 10];
        // 1 <= 12/4 must not be.
        for seed in 0..100 {
            let got = sketch(&[10, 1, 1], 2, seed).query(12);
            assert_eq!(got.len(), 1, "{got:?}");
            assert_eq!(got[0].0, 0);
            assert!((7..=10).contains(&got[0].1));
        }
    }

    #[test]
    fn zero_vector_reports_nothing() {
        assert!(sketch(&[0; 5], 3, 1).query(0).is_empty());
    }

    #[test]
    fn uniform_vector_with_k1() {
        let f = [3i64; 4];
        for seed in 0..50 {
            for (i, est) in sketch(&f, 1, seed).query(12) {
                assert!(3 - est as i64 >= 0 && 3 - est as i64 <= 6, "index {i}");
            }
        }
    }

    #[test]
    fn turnstile_updates_cancel() {
        let mut h = HeavyHitter::new(6, 2, 6, 3);
        h.update(2, 5);
        h.update(4, 1);
        h.update(4, -1);
        let mut direct = HeavyHitter::new(6, 2, 6, 3);
        direct.update(2, 5);
        assert_eq!(h, direct);
    }
}
