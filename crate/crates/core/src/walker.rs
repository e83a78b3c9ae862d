//! One entry point over all five walkers.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::query_rng;
use crate::stream::{ArcSink, DegreeTable, Mode, Model, StreamSession, Update, VertexId, Walk};
use crate::turnstile::{L1SamplerConfig, TurnstileDirectedBuilder, TurnstileParams, TurnstileUndirectedBuilder};
use crate::walk::{
    walk_with_self_loops, Capacity, DirectedSampleSketch, DirectedWorBuilder, DirectedWorSketch, DirectedWrBuilder,
    SpaceReport, UndirectedBuilder, UndirectedSketch,
};

/// The implemented walkers, each tied to one mode and model.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    Wr,
    Wor,
    UndirectedSketch,
    TurnstileDirected,
    TurnstileUndirected,
}

impl Algorithm {
    pub const ALL: [Algorithm; 5] = [
        Algorithm::Wr,
        Algorithm::Wor,
        Algorithm::UndirectedSketch,
        Algorithm::TurnstileDirected,
        Algorithm::TurnstileUndirected,
    ];

    pub fn mode(self) -> Mode {
        match self {
            Algorithm::Wr | Algorithm::Wor | Algorithm::TurnstileDirected => Mode::Directed,
            Algorithm::UndirectedSketch | Algorithm::TurnstileUndirected => Mode::Undirected,
        }
    }

    pub fn model(self) -> Model {
        match self {
            Algorithm::TurnstileDirected | Algorithm::TurnstileUndirected => Model::Turnstile,
            _ => Model::Insertion,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Wr => "wr",
            Algorithm::Wor => "wor",
            Algorithm::UndirectedSketch => "undirected-sketch",
            Algorithm::TurnstileDirected => "turnstile-directed",
            Algorithm::TurnstileUndirected => "turnstile-undirected",
        }
    }

    /// Default walker for a mode and model.
    pub fn for_stream(mode: Mode, model: Model) -> Algorithm {
        match (mode, model) {
            (Mode::Directed, Model::Insertion) => Algorithm::Wr,
            (Mode::Undirected, Model::Insertion) => Algorithm::UndirectedSketch,
            (Mode::Directed, Model::Turnstile) => Algorithm::TurnstileDirected,
            (Mode::Undirected, Model::Turnstile) => Algorithm::TurnstileUndirected,
        }
    }

    /// Checks that the walker runs on streams of this mode and model.
    pub fn check(self, mode: Mode, model: Model) -> Result<()> {
        if self.mode() == mode && self.model() == model {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "algorithm {} needs a {:?} {:?} stream, got {mode:?} {model:?}",
                self.name(),
                self.mode(),
                self.model()
            )))
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown algorithm {s:?}")))
    }
}

/// Everything needed to build a walker.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WalkerConfig {
    pub algorithm: Algorithm,
    pub n: usize,
    pub t: u64,
    pub epsilon: f64,
    pub seed: u64,
    pub sampler: L1SamplerConfig,
}

impl WalkerConfig {
    pub fn new(algorithm: Algorithm, n: usize, t: u64, epsilon: f64, seed: u64) -> Self {
        WalkerConfig { algorithm, n, t, epsilon, seed, sampler: L1SamplerConfig::default() }
    }

    fn turnstile_params(&self) -> Result<TurnstileParams> {
        Ok(TurnstileParams { sampler: self.sampler, ..TurnstileParams::new(self.t, self.epsilon)? })
    }
}

enum Builder {
    Wr(DirectedWrBuilder),
    Wor(DirectedWorBuilder),
    Undirected(UndirectedBuilder),
    TurnstileDirected(TurnstileDirectedBuilder),
    TurnstileUndirected(TurnstileUndirectedBuilder),
}

impl ArcSink for Builder {
    fn arc(&mut self, tail: VertexId, head: VertexId, delta: i64) {
        match self {
            Builder::Wr(b) => b.arc(tail, head, delta),
            Builder::Wor(b) => b.arc(tail, head, delta),
            Builder::Undirected(b) => b.arc(tail, head, delta),
            Builder::TurnstileDirected(b) => b.arc(tail, head, delta),
            Builder::TurnstileUndirected(b) => b.arc(tail, head, delta),
        }
    }
}

/// Single-pass ingestion into any walker.
pub struct Ingestor {
    config: WalkerConfig,
    session: StreamSession<Builder>,
    updates: u64,
}

impl Ingestor {
    pub fn new(config: WalkerConfig) -> Result<Self> {
        let WalkerConfig { algorithm, n, t, epsilon, seed, .. } = config;
        if t == 0 {
            return Err(Error::InvalidParameter("t must be at least 1".into()));
        }
        let builder = match algorithm {
            Algorithm::Wr => Builder::Wr(DirectedWrBuilder::new(n, t as usize, seed)),
            Algorithm::Wor => Builder::Wor(DirectedWorBuilder::new(n, t as usize, seed)),
            Algorithm::UndirectedSketch => {
                Builder::Undirected(UndirectedBuilder::new(n, Capacity::new(t, epsilon)?.c, seed))
            }
            Algorithm::TurnstileDirected => {
                Builder::TurnstileDirected(TurnstileDirectedBuilder::new(n, config.turnstile_params()?, seed))
            }
            Algorithm::TurnstileUndirected => {
                Builder::TurnstileUndirected(TurnstileUndirectedBuilder::new(n, config.turnstile_params()?, seed)?)
            }
        };
        let session = StreamSession::open(n, algorithm.mode(), algorithm.model(), builder)?;
        Ok(Ingestor { config, session, updates: 0 })
    }

    pub fn ingest(&mut self, u: Update) -> Result<()> {
        self.session.ingest(u)?;
        self.updates += 1;
        Ok(())
    }

    pub fn ingest_all<I: IntoIterator<Item = Update>>(&mut self, updates: I) -> Result<()> {
        updates.into_iter().try_for_each(|u| self.ingest(u))
    }

    pub fn finish(self) -> FrozenWalker {
        let forwarded = self.session.forwarded();
        let (degrees, builder) = self.session.finish();
        let (sketch, sketch_counters) = match builder {
            Builder::Wr(b) => (FrozenSketch::Samples(b.freeze()), 0),
            Builder::Wor(b) => (FrozenSketch::Wor(b.freeze()), 0),
            Builder::Undirected(b) => (FrozenSketch::Undirected(b.freeze()), 0),
            Builder::TurnstileDirected(b) => {
                let cells = b.sketch_cells();
                (FrozenSketch::Samples(b.freeze()), cells)
            }
            Builder::TurnstileUndirected(b) => {
                let cells = b.sketch_cells();
                (FrozenSketch::Undirected(b.freeze()), cells)
            }
        };
        FrozenWalker {
            config: self.config,
            degrees,
            sketch,
            stats: IngestStats { updates: self.updates, forwarded, sketch_counters },
        }
    }
}

/// Frozen state of one of the walkers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum FrozenSketch {
    Samples(DirectedSampleSketch),
    Wor(DirectedWorSketch),
    Undirected(UndirectedSketch),
}

/// Counts recorded during ingestion.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestStats {
    pub updates: u64,
    pub forwarded: i64,
    /// Linear-sketch counters held before freezing (turnstile walkers).
    pub sketch_counters: usize,
}

/// A frozen walker: configuration, degree table and sketch.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrozenWalker {
    pub config: WalkerConfig,
    pub degrees: DegreeTable,
    pub sketch: FrozenSketch,
    pub stats: IngestStats,
}

impl FrozenWalker {
    /// Builds a walker from a whole stream.
    pub fn build<I: IntoIterator<Item = Update>>(config: WalkerConfig, updates: I) -> Result<Self> {
        let mut ing = Ingestor::new(config)?;
        ing.ingest_all(updates)?;
        Ok(ing.finish())
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    /// A `t`-step walk from `v0` on the original graph, self-loops included.
    pub fn walk<R: Rng + ?Sized>(&self, v0: VertexId, rng: &mut R) -> Walk {
        let t = self.config.t as usize;
        match &self.sketch {
            FrozenSketch::Samples(s) => walk_with_self_loops(s, &self.degrees, v0, t, rng),
            FrozenSketch::Wor(s) => walk_with_self_loops(s, &self.degrees, v0, t, rng),
            FrozenSketch::Undirected(s) => walk_with_self_loops(s, &self.degrees, v0, t, rng),
        }
    }

    /// Query number `index`, with randomness derived from the build seed.
    pub fn walk_indexed(&self, v0: VertexId, index: u64) -> Walk {
        self.walk(v0, &mut query_rng(self.config.seed, index))
    }

    pub fn space(&self) -> SpaceReport {
        let mut r = match &self.sketch {
            FrozenSketch::Samples(s) => s.space(),
            FrozenSketch::Wor(s) => s.space(),
            FrozenSketch::Undirected(s) => s.space(),
        };
        r.sketch_counters = self.stats.sketch_counters;
        r
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for a in Algorithm::ALL {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
            assert_eq!(Algorithm::for_stream(a.mode(), a.model()).mode(), a.mode());
        }
        assert!("bogus".parse::<Algorithm>().is_err());
        assert!(Algorithm::Wor.check(Mode::Undirected, Model::Insertion).is_err());
    }

    #[test]
    fn every_walker_handles_a_loopy_triangle() {
        for a in Algorithm::ALL {
            let make = |x, y| match a.mode() {
                Mode::Directed => Update::arc(x, y),
                Mode::Undirected => Update::edge(x, y),
            };
            let ups = [make(0, 1), make(1, 2), make(2, 0), make(0, 0)];
            let w = FrozenWalker::build(WalkerConfig::new(a, 3, 4, 0.25, 7), ups).unwrap();
            for i in 0..50 {
                let walk = w.walk_indexed(VertexId(0), i);
                assert_eq!(walk.vertices().unwrap().len(), 5, "{a}: {walk}");
            }
        }
    }

    #[test]
    fn mismatched_stream_is_rejected() {
        let cfg = WalkerConfig::new(Algorithm::Wr, 2, 2, 0.5, 0);
        assert_eq!(FrozenWalker::build(cfg, [Update::edge(0, 1)]), Err(Error::OrientationMismatch));
    }
}
