//! Linear-sketch ℓ1 sampler.
//!
//! Coordinates are assigned geometric levels by a keyed hash: coordinate
//! `j` belongs to levels `0..=level(j)`, where `P[level(j) >= l] = 2^-l`.
//! Every level keeps two invertible Bloom lookup tables (three partitions
//! of cells, each cell holding the sums `Σ f`, `Σ j·f` and a fingerprint
//! `Σ f·g(j) mod 2^61-1`). All state is a sum over updates, so any two
//! streams with the same net vector produce identical state.
//!
//! A query decodes levels from the bottom up and stops at the first level
//! whose table peels completely. Among the decoded coordinates it returns
//! `argmin_j E_j / |f_j|` with `E_j` a hash-derived Exp(1) variable, which
//! picks `j` with probability exactly `|f_j| / Σ |f|` over the decoded set.
//! Level 0 holds the whole vector, so whenever the support fits in one
//! table the output distribution is exact. Larger supports are served from
//! a uniform subsample of coordinates, which carries a small ratio-estimator
//! bias toward light coordinates.

use serde::{Deserialize, Serialize};

use crate::rng::{hash3, unit_open};

const PRIME: u64 = (1 << 61) - 1;
const REPS: usize = 2;
const PARTS: usize = 3;

const SALT_LEVEL: u64 = 0x4c45_5645_4c00_0001;
const SALT_CHECK: u64 = 0x4348_4543_4b00_0002;
const SALT_EXP: u64 = 0x4558_5000_0000_0003;
const SALT_COIN: u64 = 0x434f_494e_0000_0004;
const SALT_CELL: u64 = 0x4345_4c4c_0000_0000;

/// Tuning for [`L1Sampler`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct L1SamplerConfig {
    /// Coordinates one lookup table is sized to recover.
    pub sparsity: usize,
    /// Declared failure probability `δ_s`.
    pub delta: f64,
    /// Fail an extra `δ_s` fraction of queries on purpose, emulating a
    /// sampler that uses its whole failure budget.
    pub worst_case_failures: bool,
}

impl Default for L1SamplerConfig {
    fn default() -> Self {
        L1SamplerConfig { sparsity: 8, delta: 0.5, worst_case_failures: false }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
struct Cell {
    count: i64,
    key_sum: i128,
    check: u64,
}

impl Cell {
    fn is_zero(&self) -> bool {
        self.count == 0 && self.key_sum == 0 && self.check == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct L1Sampler {
    universe: u64,
    seed: u64,
    levels: usize,
    width: usize,
    delta_bits: u64,
    worst_case: bool,
    cells: Vec<Cell>,
}

#[inline]
fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % PRIME as u128) as u64
}

#[inline]
fn reduce(x: i128) -> u64 {
    x.rem_euclid(PRIME as i128) as u64
}

impl L1Sampler {
    pub fn new(universe: u64, config: L1SamplerConfig, seed: u64) -> Self {
        assert!(universe >= 1, "empty universe");
        let k = config.sparsity.max(1);
        let ratio = (2.0 * universe as f64 / k as f64).max(1.0);
        let levels = 1 + ratio.log2().ceil() as usize;
        let width = 2 * k;
        L1Sampler {
            universe,
            seed,
            levels,
            width,
            delta_bits: config.delta.to_bits(),
            worst_case: config.worst_case_failures,
            cells: vec![Cell::default(); levels * REPS * PARTS * width],
        }
    }

    pub fn universe(&self) -> u64 {
        self.universe
    }

    pub fn delta(&self) -> f64 {
        f64::from_bits(self.delta_bits)
    }

    /// Number of cells; each holds three machine words.
    pub fn cell_count(&self) -> usize {
        self.cells.len()
    }

    /// Whether the sketched vector is zero.
    pub fn is_zero(&self) -> bool {
        self.cells.iter().all(Cell::is_zero)
    }

    fn level_of(&self, j: u64) -> usize {
        let tz = hash3(self.seed, SALT_LEVEL, j).trailing_zeros() as usize;
        tz.min(self.levels - 1)
    }

    fn fingerprint(&self, j: u64) -> u64 {
        hash3(self.seed, SALT_CHECK, j) % PRIME
    }

    /// Offset of the cell that coordinate `j` touches in partition `part`
    /// of table `(level, rep)`.
    fn cell_index(&self, level: usize, rep: usize, part: usize, j: u64) -> usize {
        let table = (level * REPS + rep) * PARTS + part;
        let slot = hash3(self.seed, SALT_CELL + table as u64, j) % self.width as u64;
        table * self.width + slot as usize
    }

    /// `f_i += delta`.
    pub fn update(&mut self, i: u64, delta: i64) {
        debug_assert!(i < self.universe);
        if delta == 0 {
            return;
        }
        let top = self.level_of(i);
        let g = self.fingerprint(i);
        let check_delta = mulmod(reduce(delta as i128), g);
        for level in 0..=top {
            for rep in 0..REPS {
                for part in 0..PARTS {
                    let idx = self.cell_index(level, rep, part, i);
                    let cell = &mut self.cells[idx];
                    cell.count += delta;
                    cell.key_sum += delta as i128 * i as i128;
                    cell.check = (cell.check + check_delta) % PRIME;
                }
            }
        }
    }

    /// Fully peels table `(level, rep)`; `None` if it does not decode.
    fn decode(&self, level: usize, rep: usize) -> Option<Vec<(u64, i64)>> {
        let start = (level * REPS + rep) * PARTS * self.width;
        let mut cells = self.cells[start..start + PARTS * self.width].to_vec();
        let mut out = Vec::new();
        loop {
            let mut progressed = false;
            for pos in 0..cells.len() {
                let Some(j) = self.pure_key(&cells[pos], level, rep, pos) else {
                    continue;
                };
                let count = cells[pos].count;
                let check_delta = mulmod(reduce(count as i128), self.fingerprint(j));
                for part in 0..PARTS {
                    let idx = self.cell_index(level, rep, part, j) - start;
                    let cell = &mut cells[idx];
                    cell.count -= count;
                    cell.key_sum -= count as i128 * j as i128;
                    cell.check = (cell.check + PRIME - check_delta) % PRIME;
                }
                out.push((j, count));
                progressed = true;
            }
            if !progressed {
                break;
            }
        }
        cells.iter().all(Cell::is_zero).then_some(out)
    }

    fn pure_key(&self, cell: &Cell, level: usize, rep: usize, pos: usize) -> Option<u64> {
        if cell.count == 0 {
            return None;
        }
        let count = cell.count as i128;
        if cell.key_sum % count != 0 {
            return None;
        }
        let key = cell.key_sum / count;
        if key < 0 || key >= self.universe as i128 {
            return None;
        }
        let j = key as u64;
        let part = pos / self.width;
        let start = (level * REPS + rep) * PARTS * self.width;
        if self.cell_index(level, rep, part, j) - start != pos {
            return None;
        }
        (cell.check == mulmod(reduce(count), self.fingerprint(j))).then_some(j)
    }

    /// Samples a coordinate with probability proportional to `|f_j|`, or
    /// `None` on failure. The zero vector always fails.
    pub fn query(&self) -> Option<u64> {
        if self.worst_case && unit_open(hash3(self.seed, SALT_COIN, 0)) < self.delta() {
            return None;
        }
        for level in 0..self.levels {
            let decoded = (0..REPS).find_map(|rep| self.decode(level, rep));
            if let Some(items) = decoded {
                return self.race(&items);
            }
        }
        None
    }

    fn race(&self, items: &[(u64, i64)]) -> Option<u64> {
        items
            .iter()
            .map(|&(j, f)| {
                let e = -unit_open(hash3(self.seed, SALT_EXP, j)).ln();
                (e / f.unsigned_abs() as f64, j)
            })
            .min_by(|a, b| a.0.total_cmp(&b.0))
            .map(|(_, j)| j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sampler(universe: u64, seed: u64) -> L1Sampler {
        L1Sampler::new(universe, L1SamplerConfig::default(), seed)
    }

    #[test]
    fn zero_vector_fails() {
        assert_eq!(sampler(10, 1).query(), None);
    }

    #[test]
    fn point_mass_is_returned() {
        for seed in 0..50 {
            let mut s = sampler(100, seed);
            s.update(37, 5);
            assert_eq!(s.query(), Some(37));
        }
    }

    #[test]
    fn insert_then_delete_restores_state() {
        let mut a = sampler(20, 4);
        a.update(3, 2);
        let before = a.clone();
        a.update(11, 1);
        a.update(11, -1);
        assert_eq!(a, before);
    }

    #[test]
    fn two_point_vector_is_balanced() {
        // f = (1, 1, 0, ...): indices 0 and 1 each with probability 1/2.
        let trials = 10_000;
        let mut zero = 0;
        let mut ok = 0;
        for seed in 0..trials {
            let mut s = sampler(8, seed);
            s.update(0, 1);
            s.update(1, 1);
            match s.query() {
                Some(0) => {
                    zero += 1;
                    ok += 1
                }
                Some(1) => ok += 1,
                other => assert!(other.is_none(), "{other:?}"),
            }
        }
        let p = zero as f64 / ok as f64;
        assert!((p - 0.5).abs() < 5.0 * (0.25 / ok as f64).sqrt(), "p = {p}");
    }

    #[test]
    fn large_support_decodes_at_some_level() {
        let mut fails = 0;
        for seed in 0..500 {
            let mut s = sampler(1_000, seed);
            for j in 0..1_000 {
                s.update(j, 1 + (j % 3) as i64);
            }
            if s.query().is_none() {
                fails += 1;
            }
        }
        assert!(fails < 50, "fails = {fails}");
    }

    #[test]
    fn worst_case_mode_fails_at_about_delta() {
        let cfg = L1SamplerConfig { worst_case_failures: true, ..L1SamplerConfig::default() };
        let trials = 4_000;
        let fails = (0..trials)
            .filter(|&seed| {
                let mut s = L1Sampler::new(4, cfg, seed);
                s.update(2, 1);
                s.query().is_none()
            })
            .count();
        let p = fails as f64 / trials as f64;
        assert!((p - 0.5).abs() < 0.04, "p = {p}");
    }
}
