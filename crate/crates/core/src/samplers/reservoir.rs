use rand::Rng;
use serde::{Deserialize, Serialize};

/// Uniform sample of up to `capacity` stream items, without replacement.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReservoirWor<T> {
    capacity: usize,
    held: Vec<T>,
    seen: u64,
}

impl<T> ReservoirWor<T> {
    pub fn new(capacity: usize) -> Self {
        ReservoirWor { capacity, held: Vec::new(), seen: 0 }
    }

    pub fn feed<R: Rng + ?Sized>(&mut self, item: T, rng: &mut R) {
        self.seen += 1;
        if self.held.len() < self.capacity {
            self.held.push(item);
            return;
        }
        let j = rng.random_range(0..self.seen);
        if (j as usize) < self.capacity {
            self.held[j as usize] = item;
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn seen(&self) -> u64 {
        self.seen
    }

    pub fn held(&self) -> &[T] {
        &self.held
    }

    pub fn into_held(self) -> Vec<T> {
        self.held
    }
}

/// `capacity` independent single-slot reservoirs fed the same stream, i.e.
/// a with-replacement sample.
///
/// All slots see the same item count, so it is stored once. Slot storage
/// is allocated on the first item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReservoirWr<T> {
    capacity: usize,
    cells: Vec<T>,
    seen: u64,
}

impl<T: Clone> ReservoirWr<T> {
    pub fn new(capacity: usize) -> Self {
        ReservoirWr { capacity, cells: Vec::new(), seen: 0 }
    }

    pub fn feed<R: Rng + ?Sized>(&mut self, item: T, rng: &mut R) {
        self.seen += 1;
        if self.seen == 1 {
            self.cells = vec![item; self.capacity];
            return;
        }
        for cell in &mut self.cells {
            if rng.random_range(0..self.seen) == 0 {
                *cell = item.clone();
            }
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    pub fn seen(&self) -> u64 {
        self.seen
    }

    /// Current samples: empty before the first item, `capacity` long after.
    pub fn samples(&self) -> &[T] {
        &self.cells
    }

    pub fn into_samples(self) -> Vec<T> {
        self.cells
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use std::collections::HashMap;

    #[test]
    fn single_item_is_kept() {
        let mut r = ReservoirWor::new(1);
        r.feed('x', &mut seeded(3));
        assert_eq!(r.held(), &['x']);
    }

    #[test]
    fn capacity_one_over_two_items_is_fair() {
        let trials = 40_000;
        let mut first = 0;
        for s in 0..trials {
            let mut rng = seeded(s);
            let mut r = ReservoirWor::new(1);
            r.feed('x', &mut rng);
            r.feed('y', &mut rng);
            if r.held()[0] == 'x' {
                first += 1;
            }
        }
        let p = first as f64 / trials as f64;
        // 5 sigma at p = 1/2
        assert!((p - 0.5).abs() < 5.0 * (0.25 / trials as f64).sqrt(), "p = {p}");
    }

    #[test]
    fn wor_two_of_five_uniform_over_subsets() {
        // Oracle: the 10 two-subsets of {0..5}, each with probability 1/10.
        let mut subsets = Vec::new();
        for a in 0..5u8 {
            for b in a + 1..5 {
                subsets.push((a, b));
            }
        }
        assert_eq!(subsets.len(), 10);
        let trials = 100_000u64;
        let mut counts: HashMap<(u8, u8), u64> = HashMap::new();
        for s in 0..trials {
            let mut rng = seeded(1_000 + s);
            let mut r = ReservoirWor::new(2);
            for item in 0..5u8 {
                r.feed(item, &mut rng);
            }
            let mut h = r.into_held();
            h.sort();
            *counts.entry((h[0], h[1])).or_default() += 1;
        }
        let expected = trials as f64 / 10.0;
        let chi2: f64 = subsets
            .iter()
            .map(|k| {
                let o = *counts.get(k).unwrap_or(&0) as f64;
                (o - expected).powi(2) / expected
            })
            .sum();
        // chi-square with 9 degrees of freedom; 27.88 is the 0.999 quantile.
        assert!(chi2 < 27.88, "chi2 = {chi2}");
        assert_eq!(counts.len(), 10);
    }

    #[test]
    fn wr_cells_fill_on_first_item_and_weight_by_multiplicity() {
        let trials = 30_000u64;
        let mut b = 0u64;
        let mut total = 0u64;
        for s in 0..trials {
            let mut rng = seeded(s);
            let mut r = ReservoirWr::new(4);
            assert!(r.samples().is_empty());
            for item in ['b', 'b', 'c'] {
                r.feed(item, &mut rng);
            }
            assert_eq!(r.samples().len(), 4);
            b += r.samples().iter().filter(|&&x| x == 'b').count() as u64;
            total += 4;
        }
        let p = b as f64 / total as f64;
        assert!((p - 2.0 / 3.0).abs() < 0.01, "p = {p}");
    }
}
