use serde::{Deserialize, Serialize};

use super::{sampler_universe, HeavyHitter, L1Sampler, L1SamplerConfig};
use crate::error::{Error, Result};
use crate::rng::derive_seed;
use crate::samplers::ImportantArcStore;
use crate::stream::{ArcSink, VertexId};
use crate::walk::{turnstile_sampler_count, Capacity, DirectedSampleSketch, UndirectedSketch};

/// Shared turnstile parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TurnstileParams {
    pub t: u64,
    pub epsilon: f64,
    pub sampler: L1SamplerConfig,
}

impl TurnstileParams {
    pub fn new(t: u64, epsilon: f64) -> Result<Self> {
        if t == 0 || !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::InvalidParameter(format!(
                "need t >= 1 and epsilon in (0, 1], got t={t}, epsilon={epsilon}"
            )));
        }
        Ok(TurnstileParams { t, epsilon, sampler: L1SamplerConfig::default() })
    }
}

/// Per-vertex banks of ℓ1 samplers, allocated on first update.
///
/// Equality treats an unallocated bank as equal to an all-zero one, so
/// streams with the same net vector compare equal.
#[derive(Debug, Clone)]
struct SamplerBank {
    universe: u64,
    per_vertex: usize,
    seed: u64,
    config_bits: (usize, u64, bool),
    banks: Vec<Option<Vec<L1Sampler>>>,
}

impl SamplerBank {
    fn new(n: usize, universe: u64, per_vertex: usize, config: L1SamplerConfig, seed: u64) -> Self {
        SamplerBank {
            universe,
            per_vertex,
            seed,
            config_bits: (config.sparsity, config.delta.to_bits(), config.worst_case_failures),
            banks: vec![None; n],
        }
    }

    fn config(&self) -> L1SamplerConfig {
        L1SamplerConfig {
            sparsity: self.config_bits.0,
            delta: f64::from_bits(self.config_bits.1),
            worst_case_failures: self.config_bits.2,
        }
    }

    fn update(&mut self, u: VertexId, head: VertexId, delta: i64) {
        let (universe, per_vertex, seed, config) = (self.universe, self.per_vertex, self.seed, self.config());
        let bank = self.banks[u.index()].get_or_insert_with(|| {
            (0..per_vertex)
                .map(|j| L1Sampler::new(universe, config, derive_seed(seed, (u.index() * per_vertex + j) as u64)))
                .collect()
        });
        for s in bank {
            s.update(head.0 as u64, delta);
        }
    }

    /// Successful outputs of `u`'s samplers in sampler order, at most `keep`.
    fn successes(&self, u: usize, keep: usize) -> Vec<VertexId> {
        match &self.banks[u] {
            None => Vec::new(),
            Some(bank) => bank.iter().filter_map(L1Sampler::query).take(keep).map(|j| VertexId(j as u32)).collect(),
        }
    }

    fn bank_eq(a: &Option<Vec<L1Sampler>>, b: &Option<Vec<L1Sampler>>) -> bool {
        match (a, b) {
            (Some(x), Some(y)) => x == y,
            (None, None) => true,
            (Some(x), None) | (None, Some(x)) => x.iter().all(L1Sampler::is_zero),
        }
    }

    fn cells(&self) -> usize {
        self.banks.iter().flatten().flatten().map(L1Sampler::cell_count).sum()
    }
}

impl PartialEq for SamplerBank {
    fn eq(&self, other: &Self) -> bool {
        self.universe == other.universe
            && self.per_vertex == other.per_vertex
            && self.seed == other.seed
            && self.config_bits == other.config_bits
            && self.banks.len() == other.banks.len()
            && self.banks.iter().zip(&other.banks).all(|(a, b)| Self::bank_eq(a, b))
    }
}

impl Eq for SamplerBank {}

/// Directed turnstile walker: `C' = 2t + 16 log2(2t/ε)` ℓ1 samplers per
/// vertex over its out-arc vector.
///
/// The frozen sketch keeps the first `t` successful outputs per vertex. A
/// vertex with fewer than `t` successes fails any walk that leaves it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TurnstileDirectedBuilder {
    t: usize,
    degrees: Vec<i64>,
    samplers: SamplerBank,
}

impl TurnstileDirectedBuilder {
    pub fn new(n: usize, params: TurnstileParams, seed: u64) -> Self {
        let per_vertex = turnstile_sampler_count(2 * params.t as usize, params.t, params.epsilon);
        TurnstileDirectedBuilder {
            t: params.t as usize,
            degrees: vec![0; n],
            samplers: SamplerBank::new(n, sampler_universe(n, params.epsilon), per_vertex, params.sampler, seed),
        }
    }

    pub fn samplers_per_vertex(&self) -> usize {
        self.samplers.per_vertex
    }

    /// Sketch cells allocated so far (three words each).
    pub fn sketch_cells(&self) -> usize {
        self.samplers.cells()
    }

    pub fn freeze(self) -> DirectedSampleSketch {
        let samples = (0..self.degrees.len()).map(|u| self.samplers.successes(u, self.t)).collect();
        DirectedSampleSketch { t: self.t, degrees: self.degrees.iter().map(|&d| d.max(0) as u64).collect(), samples }
    }
}

impl ArcSink for TurnstileDirectedBuilder {
    fn arc(&mut self, tail: VertexId, head: VertexId, delta: i64) {
        self.degrees[tail.index()] += delta;
        self.samplers.update(tail, head, delta);
    }
}

/// Undirected turnstile walker.
///
/// During the stream, arc `(u, v, Δ)` feeds `(v, Δ)` to each of `u`'s
/// `C' = 2C + 16 log2(2t/ε)` samplers and `(u, Δ)` to `v`'s heavy-hitter
/// sketch with `k = C`. On freeze, each heavy hitter reports estimates
/// `A_v(u)`; those copies of `(u, v)` become important and are subtracted
/// from `u`'s samplers, which then sample only the unimportant arcs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TurnstileUndirectedBuilder {
    c: usize,
    degrees: Vec<i64>,
    samplers: SamplerBank,
    heavy: Vec<HeavyHitter>,
}

impl TurnstileUndirectedBuilder {
    pub fn new(n: usize, params: TurnstileParams, seed: u64) -> Result<Self> {
        let cap = Capacity::new(params.t, params.epsilon)?;
        Ok(Self::with_capacity(n, cap.c, params, seed))
    }

    /// Builder with an explicit per-vertex capacity `c`.
    pub fn with_capacity(n: usize, c: usize, params: TurnstileParams, seed: u64) -> Self {
        let per_vertex = turnstile_sampler_count(2 * c, params.t, params.epsilon);
        let universe = sampler_universe(n, params.epsilon);
        let rows = HeavyHitter::rows_for(universe, params.epsilon * 1e-2 / n as f64);
        let hh_seed = derive_seed(seed, u64::MAX);
        TurnstileUndirectedBuilder {
            c,
            degrees: vec![0; n],
            samplers: SamplerBank::new(n, universe, per_vertex, params.sampler, seed),
            heavy: (0..n).map(|v| HeavyHitter::new(universe, c, rows, derive_seed(hh_seed, v as u64))).collect(),
        }
    }

    pub fn capacity(&self) -> usize {
        self.c
    }

    pub fn samplers_per_vertex(&self) -> usize {
        self.samplers.per_vertex
    }

    pub fn sketch_cells(&self) -> usize {
        self.samplers.cells() + self.heavy.iter().map(HeavyHitter::counter_count).sum::<usize>()
    }

    pub fn freeze(mut self) -> UndirectedSketch {
        let n = self.degrees.len();
        let mut important = ImportantArcStore::new(n);
        for v in 0..n {
            let l1 = self.degrees[v].max(0) as u64;
            let head = VertexId(v as u32);
            for (u, a) in self.heavy[v].query(l1) {
                let tail = VertexId(u as u32);
                important.add(tail, head, a);
                self.samplers.update(tail, head, -(a as i64));
            }
        }
        let samples = (0..n).map(|u| self.samplers.successes(u, self.c)).collect();
        let degrees = self.degrees.iter().map(|&d| d.max(0) as u64).collect();
        UndirectedSketch::from_parts(self.c, degrees, important, samples)
    }
}

impl ArcSink for TurnstileUndirectedBuilder {
    fn arc(&mut self, tail: VertexId, head: VertexId, delta: i64) {
        self.degrees[head.index()] += delta;
        self.samplers.update(tail, head, delta);
        self.heavy[head.index()].update(tail.0 as u64, delta);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::stream::{Mode, Model, StreamSession, Update, Walk};
    use crate::walk::WalkSketch;

    fn params() -> TurnstileParams {
        TurnstileParams::new(3, 0.25).unwrap()
    }

    fn directed(n: usize, ups: &[Update], seed: u64) -> DirectedSampleSketch {
        let mut s =
            StreamSession::open(n, Mode::Directed, Model::Turnstile, TurnstileDirectedBuilder::new(n, params(), seed))
                .unwrap();
        s.ingest_all(ups.iter().copied()).unwrap();
        s.finish().1.freeze()
    }

    #[test]
    fn sampler_count_formula() {
        let b = TurnstileDirectedBuilder::new(4, TurnstileParams::new(4, 0.25).unwrap(), 0);
        assert_eq!(b.samplers_per_vertex(), 88);
        let u = TurnstileUndirectedBuilder::new(4, TurnstileParams::new(4, 0.25).unwrap(), 0).unwrap();
        assert_eq!(u.capacity(), 17);
        assert_eq!(u.samplers_per_vertex(), 34 + 80);
    }

    #[test]
    fn cancelled_arc_is_never_taken() {
        let ups = [Update::arc(0, 1), Update::arc(0, 1).negated(), Update::arc(0, 2)];
        for seed in 0..30 {
            let sk = directed(3, &ups, seed);
            assert_eq!(sk.walk(VertexId(0), 1, &mut seeded(seed)), Walk::from_ids(&[0, 2]));
        }
    }

    #[test]
    fn doubled_cycle_minus_one_copy() {
        let cycle = [Update::arc(0, 1), Update::arc(1, 2), Update::arc(2, 0)];
        let mut ups: Vec<Update> = cycle.iter().chain(cycle.iter()).copied().collect();
        ups.extend(cycle.iter().map(|u| u.negated()));
        for seed in 0..30 {
            let sk = directed(3, &ups, seed);
            assert_eq!(sk.walk(VertexId(0), 3, &mut seeded(seed)), Walk::from_ids(&[0, 1, 2, 0]));
        }
    }

    #[test]
    fn full_cancellation_fails_everywhere() {
        let ups = [Update::edge(0, 1), Update::edge(1, 2), Update::edge(0, 1).negated(), Update::edge(1, 2).negated()];
        let n = 3;
        let mut s = StreamSession::open(
            n,
            Mode::Undirected,
            Model::Turnstile,
            TurnstileUndirectedBuilder::new(n, params(), 1).unwrap(),
        )
        .unwrap();
        s.ingest_all(ups).unwrap();
        let sk = s.finish().1.freeze();
        for v in 0..3 {
            assert_eq!(sk.walk(VertexId(v), 3, &mut seeded(0)), Walk::Fail);
        }
    }
}
