use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{SpaceReport, WalkQuery, WalkSketch};
use crate::rng::{seeded, SketchRng};
use crate::samplers::{ImportantArcStore, MgTable, ReservoirWr};
use crate::stream::{ArcSink, VertexId};

/// Single-pass builder for the undirected walker.
///
/// Every arc `(u, v)` updates the Misra-Gries table owned by `v`. Copies of
/// arcs `(w, v)` decremented out of that table are unimportant and go to a
/// with-replacement sampler of capacity `C` owned by `w`. After the stream,
/// the surviving table estimates define the important multiset `E1`.
pub struct UndirectedBuilder {
    c: usize,
    degrees: Vec<u64>,
    tables: Vec<MgTable>,
    samplers: Vec<ReservoirWr<VertexId>>,
    rng: SketchRng,
}

impl UndirectedBuilder {
    pub fn new(n: usize, c: usize, seed: u64) -> Self {
        UndirectedBuilder {
            c,
            degrees: vec![0; n],
            tables: (0..n).map(|_| MgTable::new(c)).collect(),
            samplers: (0..n).map(|_| ReservoirWr::new(c)).collect(),
            rng: seeded(seed),
        }
    }

    pub fn capacity(&self) -> usize {
        self.c
    }

    /// Table owned by `v`.
    pub fn table(&self, v: VertexId) -> &MgTable {
        &self.tables[v.index()]
    }

    /// Arcs leaving `u` that were fed to `u`'s sampler.
    pub fn fed(&self, u: VertexId) -> u64 {
        self.samplers[u.index()].seen()
    }

    pub fn freeze(self) -> UndirectedSketch {
        let important = ImportantArcStore::from_tables(&self.tables);
        UndirectedSketch {
            c: self.c,
            degrees: self.degrees,
            important,
            samples: self.samplers.into_iter().map(ReservoirWr::into_samples).collect(),
        }
    }
}

impl ArcSink for UndirectedBuilder {
    fn arc(&mut self, tail: VertexId, head: VertexId, delta: i64) {
        assert_eq!(delta, 1, "insertion-only sketch received a deletion");
        self.degrees[head.index()] += 1;
        let samplers = &mut self.samplers;
        let rng = &mut self.rng;
        self.tables[head.index()].insert(tail, |w| samplers[w.index()].feed(head, rng));
    }
}

/// Frozen undirected walker state: degrees, important arcs and up to `C`
/// sampled unimportant out-neighbors per vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UndirectedSketch {
    pub(crate) c: usize,
    pub(crate) degrees: Vec<u64>,
    pub(crate) important: ImportantArcStore,
    pub(crate) samples: Vec<Vec<VertexId>>,
}

impl UndirectedSketch {
    pub(crate) fn from_parts(
        c: usize,
        degrees: Vec<u64>,
        important: ImportantArcStore,
        samples: Vec<Vec<VertexId>>,
    ) -> Self {
        UndirectedSketch { c, degrees, important, samples }
    }

    pub fn capacity(&self) -> usize {
        self.c
    }

    pub fn important(&self) -> &ImportantArcStore {
        &self.important
    }

    pub fn samples(&self, u: VertexId) -> &[VertexId] {
        &self.samples[u.index()]
    }

    /// `d(u) - d_1(u)`: unimportant arcs leaving `u`.
    pub fn unimportant_degree(&self, u: VertexId) -> u64 {
        self.degrees[u.index()] - self.important.out_degree(u)
    }

    pub fn space(&self) -> SpaceReport {
        SpaceReport {
            important_entries: self.important.entries(),
            important_multiplicity: self.important.total_multiplicity(),
            sample_slots: self.samples.len() * self.c,
            samples_held: self.samples.iter().map(Vec::len).sum(),
            sketch_counters: 0,
        }
    }
}

pub struct UndirectedQuery<'a> {
    sketch: &'a UndirectedSketch,
    used: HashMap<VertexId, usize>,
}

impl WalkQuery for UndirectedQuery<'_> {
    fn step<R: Rng + ?Sized>(&mut self, from: VertexId, rng: &mut R) -> Option<VertexId> {
        let sk = self.sketch;
        let d = sk.degrees[from.index()];
        if d == 0 {
            return None;
        }
        let x = rng.random_range(1..=d);
        if x <= sk.important.out_degree(from) {
            return Some(sk.important.select(from, x));
        }
        let used = self.used.entry(from).or_insert(0);
        let held = &sk.samples[from.index()];
        if *used >= sk.c || *used >= held.len() {
            return None;
        }
        *used += 1;
        Some(held[*used - 1])
    }
}

impl WalkSketch for UndirectedSketch {
    type Query<'a> = UndirectedQuery<'a>;

    fn num_vertices(&self) -> usize {
        self.degrees.len()
    }

    fn degree(&self, v: VertexId) -> u64 {
        self.degrees[v.index()]
    }

    fn query(&self) -> UndirectedQuery<'_> {
        UndirectedQuery { sketch: self, used: HashMap::new() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;
    use crate::stream::{Mode, Model, StreamSession, Update, Walk};

    fn build(n: usize, c: usize, edges: &[(u32, u32)], seed: u64) -> UndirectedBuilder {
        let mut s =
            StreamSession::open(n, Mode::Undirected, Model::Insertion, UndirectedBuilder::new(n, c, seed)).unwrap();
        s.ingest_all(edges.iter().map(|&(a, b)| Update::edge(a, b))).unwrap();
        s.finish().1
    }

    #[test]
    fn triangle_is_all_important() {
        let sk = build(3, 2, &[(0, 1), (1, 2), (2, 0)], 1).freeze();
        assert_eq!(sk.important().total_multiplicity(), 6);
        assert!((0..3).all(|u| sk.samples(VertexId(u)).is_empty()));
        let mut seen = std::collections::HashSet::new();
        for s in 0..2_000 {
            let w = sk.walk(VertexId(0), 4, &mut seeded(s));
            assert!(!w.is_fail());
            seen.insert(w);
        }
        // Each step has two choices: 2^4 walks.
        assert_eq!(seen.len(), 16);
    }

    #[test]
    fn star_overflow_respects_table_bounds() {
        let m = 9u32;
        let c = 3;
        let edges: Vec<(u32, u32)> = (1..=m).map(|leaf| (0, leaf)).collect();
        let b = build(m as usize + 1, c, &edges, 2);
        assert!(b.table(VertexId(0)).len() <= c);
        for leaf in 1..=m {
            assert_eq!(b.table(VertexId(leaf)).estimate(VertexId(0)), 1);
        }
        let n = m as usize + 1;
        let center_fed = b.fed(VertexId(0));
        let sk = b.freeze();
        assert_eq!(sk.important().out_degree(VertexId(0)) + center_fed, m as u64);
        assert!(sk.space().important_entries <= n * c);
    }

    #[test]
    fn heavy_multi_edge_stays_important() {
        // f(a,b) = C + 2 and d(b) = C + 2 with C = 3.
        let c = 3;
        let edges = vec![(0u32, 1u32); c + 2];
        let b = build(2, c, &edges, 0);
        let a_est = b.table(VertexId(1)).estimate(VertexId(0));
        assert!(a_est >= 2);
        let f0 = (c as u64 + 2) - a_est;
        assert!((f0 as f64) / ((c + 2) as f64) < 1.0 / c as f64);
    }

    #[test]
    fn exhausted_samples_fail() {
        // K_{1,6} with C = 1: the center's table keeps at most one leaf, so
        // the center must use unimportant samples and runs out.
        let edges: Vec<(u32, u32)> = (1..=6).map(|l| (0, l)).collect();
        let mut fails = 0;
        for s in 0..500 {
            let sk = build(7, 1, &edges, s).freeze();
            if sk.walk(VertexId(0), 6, &mut seeded(s)) == Walk::Fail {
                fails += 1;
            }
        }
        assert!(fails > 0);
    }
}
