//! Insertion-only walkers and the shared query interface.
//!
//! A frozen sketch answers walk queries through [`WalkSketch`]. Each query
//! owns fresh visit counters; the sampled arcs themselves are shared by all
//! queries on the same sketch, so outputs of successive queries are each
//! individually distributed as the guarantee states but are correlated with
//! one another. Rebuild the sketch for independent walks.

mod capacity;
mod directed;
mod undirected;

pub use capacity::{turnstile_sampler_count, Capacity};
pub use directed::{DirectedSampleSketch, DirectedWorBuilder, DirectedWorSketch, DirectedWrBuilder};
pub use undirected::{UndirectedBuilder, UndirectedSketch};

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::stream::{DegreeTable, VertexId, Walk};

/// Per-query state of a walk in progress.
pub trait WalkQuery {
    /// Next vertex after `from`, or `None` when the query must fail.
    fn step<R: Rng + ?Sized>(&mut self, from: VertexId, rng: &mut R) -> Option<VertexId>;
}

/// A frozen sketch that can simulate walks on the loopless graph.
pub trait WalkSketch {
    type Query<'a>: WalkQuery
    where
        Self: 'a;

    fn num_vertices(&self) -> usize;

    /// Loopless out-degree of `v` as seen by the sketch.
    fn degree(&self, v: VertexId) -> u64;

    /// Starts a query with fresh counters.
    fn query(&self) -> Self::Query<'_>;

    /// Simulates a `t`-step walk from `v0`; fails when `d(v0) = 0`.
    fn walk<R: Rng + ?Sized>(&self, v0: VertexId, t: usize, rng: &mut R) -> Walk {
        if v0.index() >= self.num_vertices() || self.degree(v0) == 0 {
            return Walk::Fail;
        }
        let mut q = self.query();
        let mut path = Vec::with_capacity(t + 1);
        path.push(v0);
        let mut cur = v0;
        for _ in 0..t {
            match q.step(cur, rng) {
                Some(v) => {
                    path.push(v);
                    cur = v;
                }
                None => return Walk::Fail,
            }
        }
        Walk::Path(path)
    }
}

/// Simulates a `t`-step walk on the original graph, self-loops included.
///
/// Loop steps are drawn from the degree table; the loopless sketch is asked
/// for a step only when the walk actually leaves the current vertex, so a
/// vertex whose only edges are loops never needs a sampled arc.
pub fn walk_with_self_loops<W: WalkSketch, R: Rng + ?Sized>(
    sketch: &W,
    degrees: &DegreeTable,
    v0: VertexId,
    t: usize,
    rng: &mut R,
) -> Walk {
    if v0.index() >= degrees.len() || degrees.total(v0) <= 0 {
        return Walk::Fail;
    }
    let mut q = sketch.query();
    let mut path = Vec::with_capacity(t + 1);
    path.push(v0);
    let mut cur = v0;
    for _ in 0..t {
        let loops = degrees.self_loops(cur);
        if loops > 0 {
            let total = degrees.total(cur) as u64;
            if rng.random_range(0..total) < loops as u64 {
                path.push(cur);
                continue;
            }
        }
        match q.step(cur, rng) {
            Some(v) => {
                path.push(v);
                cur = v;
            }
            None => return Walk::Fail,
        }
    }
    Walk::Path(path)
}

/// Item counts held by a frozen sketch.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceReport {
    /// Distinct important arcs stored, one word each plus a count.
    pub important_entries: usize,
    /// Important arcs counted with multiplicity.
    pub important_multiplicity: u64,
    /// Sample slots allocated.
    pub sample_slots: usize,
    /// Sample slots holding an arc.
    pub samples_held: usize,
    /// Counters held by linear sketches before freezing.
    pub sketch_counters: usize,
}

impl SpaceReport {
    /// Stored arcs: important entries plus held samples.
    pub fn stored_arcs(&self) -> usize {
        self.important_entries + self.samples_held
    }
}
