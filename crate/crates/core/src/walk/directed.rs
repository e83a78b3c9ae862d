use std::collections::HashMap;

use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{SpaceReport, WalkQuery, WalkSketch};
use crate::rng::{seeded, SketchRng};
use crate::samplers::{ReservoirWor, ReservoirWr};
use crate::stream::{ArcSink, VertexId};

/// Builds `t` with-replacement samples of each vertex's out-arcs.
pub struct DirectedWrBuilder {
    t: usize,
    degrees: Vec<u64>,
    samplers: Vec<ReservoirWr<VertexId>>,
    rng: SketchRng,
}

impl DirectedWrBuilder {
    pub fn new(n: usize, t: usize, seed: u64) -> Self {
        DirectedWrBuilder {
            t,
            degrees: vec![0; n],
            samplers: (0..n).map(|_| ReservoirWr::new(t)).collect(),
            rng: seeded(seed),
        }
    }

    pub fn freeze(self) -> DirectedSampleSketch {
        DirectedSampleSketch {
            t: self.t,
            degrees: self.degrees,
            samples: self.samplers.into_iter().map(ReservoirWr::into_samples).collect(),
        }
    }
}

impl ArcSink for DirectedWrBuilder {
    fn arc(&mut self, tail: VertexId, head: VertexId, delta: i64) {
        assert_eq!(delta, 1, "insertion-only sketch received a deletion");
        self.degrees[tail.index()] += 1;
        self.samplers[tail.index()].feed(head, &mut self.rng);
    }
}

/// Per-vertex lists of sampled out-neighbors, consumed in order.
///
/// The `i`-th visit to `u` walks to `samples[u][i]`. A vertex holding fewer
/// than `t` samples fails any query that leaves it; for the insertion-only
/// builder that only happens at out-degree zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedSampleSketch {
    pub(crate) t: usize,
    pub(crate) degrees: Vec<u64>,
    pub(crate) samples: Vec<Vec<VertexId>>,
}

impl DirectedSampleSketch {
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn samples(&self, u: VertexId) -> &[VertexId] {
        &self.samples[u.index()]
    }

    pub fn space(&self) -> SpaceReport {
        SpaceReport {
            sample_slots: self.samples.len() * self.t,
            samples_held: self.samples.iter().map(Vec::len).sum(),
            ..SpaceReport::default()
        }
    }
}

pub struct SampleQuery<'a> {
    sketch: &'a DirectedSampleSketch,
    visits: HashMap<VertexId, usize>,
}

impl WalkQuery for SampleQuery<'_> {
    fn step<R: Rng + ?Sized>(&mut self, from: VertexId, _rng: &mut R) -> Option<VertexId> {
        let held = &self.sketch.samples[from.index()];
        if held.len() < self.sketch.t {
            return None;
        }
        let i = self.visits.entry(from).or_insert(0);
        let next = held.get(*i).copied();
        *i += 1;
        next
    }
}

impl WalkSketch for DirectedSampleSketch {
    type Query<'a> = SampleQuery<'a>;

    fn num_vertices(&self) -> usize {
        self.degrees.len()
    }

    fn degree(&self, v: VertexId) -> u64 {
        self.degrees[v.index()]
    }

    fn query(&self) -> SampleQuery<'_> {
        SampleQuery { sketch: self, visits: HashMap::new() }
    }
}

/// Builds a capacity-`t` reservoir of distinct out-neighbors per vertex.
///
/// Only valid for simple digraphs; repeated arcs break uniformity.
pub struct DirectedWorBuilder {
    t: usize,
    degrees: Vec<u64>,
    reservoirs: Vec<ReservoirWor<VertexId>>,
    rng: SketchRng,
}

impl DirectedWorBuilder {
    pub fn new(n: usize, t: usize, seed: u64) -> Self {
        DirectedWorBuilder {
            t,
            degrees: vec![0; n],
            reservoirs: (0..n).map(|_| ReservoirWor::new(t)).collect(),
            rng: seeded(seed),
        }
    }

    pub fn freeze(self) -> DirectedWorSketch {
        DirectedWorSketch {
            t: self.t,
            degrees: self.degrees,
            held: self.reservoirs.into_iter().map(ReservoirWor::into_held).collect(),
        }
    }
}

impl ArcSink for DirectedWorBuilder {
    fn arc(&mut self, tail: VertexId, head: VertexId, delta: i64) {
        assert_eq!(delta, 1, "insertion-only sketch received a deletion");
        self.degrees[tail.index()] += 1;
        self.reservoirs[tail.index()].feed(head, &mut self.rng);
    }
}

/// Without-replacement reservoirs of out-neighbors.
///
/// At a visit to `u`, with probability `d_used(u) / d(u)` the walk reuses a
/// uniformly chosen previously used sample; otherwise it takes a uniformly
/// chosen unused one and marks it used.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DirectedWorSketch {
    pub(crate) t: usize,
    pub(crate) degrees: Vec<u64>,
    pub(crate) held: Vec<Vec<VertexId>>,
}

impl DirectedWorSketch {
    pub fn t(&self) -> usize {
        self.t
    }

    pub fn held(&self, u: VertexId) -> &[VertexId] {
        &self.held[u.index()]
    }

    pub fn space(&self) -> SpaceReport {
        SpaceReport {
            sample_slots: self.held.len() * self.t,
            samples_held: self.held.iter().map(Vec::len).sum(),
            ..SpaceReport::default()
        }
    }
}

/// Used samples of one vertex occupy `order[..used]`.
struct UsedSet {
    order: Vec<u32>,
    used: usize,
}

pub struct WorQuery<'a> {
    sketch: &'a DirectedWorSketch,
    state: HashMap<VertexId, UsedSet>,
}

impl WalkQuery for WorQuery<'_> {
    fn step<R: Rng + ?Sized>(&mut self, from: VertexId, rng: &mut R) -> Option<VertexId> {
        let d = self.sketch.degrees[from.index()];
        if d == 0 {
            return None;
        }
        let held = &self.sketch.held[from.index()];
        let s = self.state.entry(from).or_insert_with(|| UsedSet { order: (0..held.len() as u32).collect(), used: 0 });
        let x = rng.random_range(0..d);
        let slot = if (x as usize) < s.used {
            s.order[rng.random_range(0..s.used)]
        } else {
            if s.used == s.order.len() {
                return None;
            }
            let j = rng.random_range(s.used..s.order.len());
            s.order.swap(s.used, j);
            s.used += 1;
            s.order[s.used - 1]
        };
        Some(held[slot as usize])
    }
}

impl WalkSketch for DirectedWorSketch {
    type Query<'a> = WorQuery<'a>;

    fn num_vertices(&self) -> usize {
        self.degrees.len()
    }

    fn degree(&self, v: VertexId) -> u64 {
        self.degrees[v.index()]
    }

    fn query(&self) -> WorQuery<'_> {
        WorQuery { sketch: self, state: HashMap::new() }
    }
}
