//! Stream model: vertices, updates, degree tracking and self-loop handling.
//!
//! A [`StreamSession`] owns the exact degree table and forwards every
//! non-loop update to a downstream [`ArcSink`] as one arc event per
//! direction. Self-loops never reach the sink; they are only counted, and
//! [`reinsert_self_loops`] puts them back into walks afterwards.

mod format;

pub use format::{parse_stream, write_stream, UpdateReader};

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Vertex identifier in `[0, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct VertexId(pub u32);

impl VertexId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl From<u32> for VertexId {
    fn from(v: u32) -> Self {
        VertexId(v)
    }
}

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Whether edges are directed arcs or undirected edges.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Mode {
    Directed,
    Undirected,
}

/// Streaming model: insertions only, or signed turnstile updates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Model {
    Insertion,
    Turnstile,
}

/// One stream event.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Update {
    pub tail: VertexId,
    pub head: VertexId,
    /// `+1` or `-1`.
    pub delta: i64,
    pub orientation: Mode,
}

impl Update {
    pub fn arc(tail: u32, head: u32) -> Self {
        Update { tail: VertexId(tail), head: VertexId(head), delta: 1, orientation: Mode::Directed }
    }

    pub fn edge(a: u32, b: u32) -> Self {
        Update { tail: VertexId(a), head: VertexId(b), delta: 1, orientation: Mode::Undirected }
    }

    /// Same endpoints with the opposite sign.
    pub fn negated(self) -> Self {
        Update { delta: -self.delta, ..self }
    }

    pub fn with_delta(self, delta: i64) -> Self {
        Update { delta, ..self }
    }

    pub fn is_self_loop(&self) -> bool {
        self.tail == self.head
    }
}

/// Consumer of the arc events a session forwards.
///
/// `delta` is the signed multiplicity change of arc `tail -> head`.
pub trait ArcSink {
    fn arc(&mut self, tail: VertexId, head: VertexId, delta: i64);
}

impl ArcSink for () {
    fn arc(&mut self, _: VertexId, _: VertexId, _: i64) {}
}

impl<S: ArcSink + ?Sized> ArcSink for &mut S {
    fn arc(&mut self, tail: VertexId, head: VertexId, delta: i64) {
        (**self).arc(tail, head, delta)
    }
}

/// Records every forwarded event.
impl ArcSink for Vec<(VertexId, VertexId, i64)> {
    fn arc(&mut self, tail: VertexId, head: VertexId, delta: i64) {
        self.push((tail, head, delta));
    }
}

/// Exact loopless degrees plus removed self-loop multiplicities.
///
/// Values are signed so that turnstile prefixes can be replayed; under the
/// model's non-negative multiplicity assumption they never drop below zero.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeTable {
    d: Vec<i64>,
    d_self: Vec<i64>,
}

impl DegreeTable {
    pub fn new(n: usize) -> Self {
        DegreeTable { d: vec![0; n], d_self: vec![0; n] }
    }

    pub fn len(&self) -> usize {
        self.d.len()
    }

    pub fn is_empty(&self) -> bool {
        self.d.is_empty()
    }

    /// Degree of `u` in the graph with self-loops removed.
    pub fn degree(&self, u: VertexId) -> i64 {
        self.d[u.index()]
    }

    /// Removed self-loop multiplicity at `u` (undirected loops count twice).
    pub fn self_loops(&self, u: VertexId) -> i64 {
        self.d_self[u.index()]
    }

    /// Degree of `u` in the original graph.
    pub fn total(&self, u: VertexId) -> i64 {
        self.d[u.index()] + self.d_self[u.index()]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.d
    }

    pub fn has_self_loops(&self) -> bool {
        self.d_self.iter().any(|&x| x != 0)
    }
}

/// An open stream with its degree table and downstream sink.
#[derive(Debug)]
pub struct StreamSession<S> {
    mode: Mode,
    model: Model,
    degrees: DegreeTable,
    forwarded: i64,
    sink: S,
}

impl<S: ArcSink> StreamSession<S> {
    pub fn open(n: usize, mode: Mode, model: Model, sink: S) -> Result<Self> {
        if n == 0 {
            return Err(Error::EmptyVertexSet);
        }
        Ok(StreamSession { mode, model, degrees: DegreeTable::new(n), forwarded: 0, sink })
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn model(&self) -> Model {
        self.model
    }

    pub fn degrees(&self) -> &DegreeTable {
        &self.degrees
    }

    pub fn sink(&self) -> &S {
        &self.sink
    }

    /// Signed count of arc events forwarded so far.
    pub fn forwarded(&self) -> i64 {
        self.forwarded
    }

    /// Applies one update.
    ///
    /// A deletion that drives a multiplicity negative violates the model and
    /// is not detected; only aggregate degrees are tracked.
    pub fn ingest(&mut self, u: Update) -> Result<()> {
        let n = self.n();
        for v in [u.tail, u.head] {
            if v.index() >= n {
                return Err(Error::VertexOutOfRange { id: v.0 as u64, n });
            }
        }
        if u.delta != 1 && u.delta != -1 {
            return Err(Error::InvalidDelta(u.delta));
        }
        if u.delta == -1 && self.model == Model::Insertion {
            return Err(Error::DeletionInInsertionStream);
        }
        if u.orientation != self.mode {
            return Err(Error::OrientationMismatch);
        }

        if u.is_self_loop() {
            let weight = match self.mode {
                Mode::Directed => 1,
                Mode::Undirected => 2,
            };
            self.degrees.d_self[u.tail.index()] += weight * u.delta;
            return Ok(());
        }

        self.degrees.d[u.tail.index()] += u.delta;
        self.sink.arc(u.tail, u.head, u.delta);
        self.forwarded += u.delta;
        if self.mode == Mode::Undirected {
            self.degrees.d[u.head.index()] += u.delta;
            self.sink.arc(u.head, u.tail, u.delta);
            self.forwarded += u.delta;
        }
        Ok(())
    }

    pub fn ingest_all<I: IntoIterator<Item = Update>>(&mut self, updates: I) -> Result<()> {
        updates.into_iter().try_for_each(|u| self.ingest(u))
    }

    /// Freezes the session.
    pub fn finish(self) -> (DegreeTable, S) {
        (self.degrees, self.sink)
    }
}

/// A simulated walk: `t + 1` vertices, or a failure marker.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Walk {
    Path(Vec<VertexId>),
    Fail,
}

impl Walk {
    pub fn is_fail(&self) -> bool {
        matches!(self, Walk::Fail)
    }

    pub fn vertices(&self) -> Option<&[VertexId]> {
        match self {
            Walk::Path(p) => Some(p),
            Walk::Fail => None,
        }
    }

    pub fn last(&self) -> Option<VertexId> {
        self.vertices().and_then(|p| p.last().copied())
    }

    pub fn from_ids(ids: &[u32]) -> Self {
        Walk::Path(ids.iter().copied().map(VertexId).collect())
    }
}

impl fmt::Display for Walk {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Walk::Fail => f.write_str("FAIL"),
            Walk::Path(p) => {
                for (i, v) in p.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" ")?;
                    }
                    write!(f, "{v}")?;
                }
                Ok(())
            }
        }
    }
}

/// Turns a walk on the loopless graph into a `t`-step walk on the original one.
///
/// At a vertex `u` the next emitted step is a self-loop with probability
/// `d_self(u) / (d(u) + d_self(u))`; otherwise the next loopless step is
/// consumed. Surplus loopless steps are dropped. The result is `Fail` if the
/// input fails, if a vertex with zero total degree is reached, or if the
/// input runs out of steps.
pub fn reinsert_self_loops<R: Rng + ?Sized>(walk: &Walk, degrees: &DegreeTable, t: usize, rng: &mut R) -> Walk {
    let path = match walk {
        Walk::Fail => return Walk::Fail,
        Walk::Path(p) if p.is_empty() => return Walk::Fail,
        Walk::Path(p) => p,
    };
    let mut pos = 0;
    let mut cur = path[0];
    let mut out = Vec::with_capacity(t + 1);
    out.push(cur);
    for _ in 0..t {
        let total = degrees.total(cur);
        if total <= 0 {
            return Walk::Fail;
        }
        let loops = degrees.self_loops(cur);
        if loops > 0 && rng.random_range(0..total as u64) < loops as u64 {
            out.push(cur);
            continue;
        }
        pos += 1;
        match path.get(pos) {
            Some(&v) => {
                cur = v;
                out.push(v);
            }
            None => return Walk::Fail,
        }
    }
    Walk::Path(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::seeded;

    fn session(n: usize, mode: Mode, model: Model) -> StreamSession<Vec<(VertexId, VertexId, i64)>> {
        StreamSession::open(n, mode, model, Vec::new()).unwrap()
    }

    #[test]
    fn open_rejects_empty_vertex_set() {
        assert_eq!(StreamSession::open(0, Mode::Directed, Model::Insertion, ()).unwrap_err(), Error::EmptyVertexSet);
    }

    #[test]
    fn fresh_session_has_zero_degrees() {
        let s = session(3, Mode::Directed, Model::Insertion);
        assert!((0..3).all(|u| s.degrees().total(VertexId(u)) == 0));
        let one = session(1, Mode::Undirected, Model::Turnstile);
        assert_eq!(one.n(), 1);
    }

    #[test]
    fn undirected_edge_forwards_both_arcs() {
        let mut s = session(6, Mode::Undirected, Model::Insertion);
        s.ingest(Update::edge(2, 5)).unwrap();
        assert_eq!(s.degrees().degree(VertexId(2)), 1);
        assert_eq!(s.degrees().degree(VertexId(5)), 1);
        assert_eq!(s.sink(), &vec![(VertexId(2), VertexId(5), 1), (VertexId(5), VertexId(2), 1)]);
    }

    #[test]
    fn self_loop_is_counted_not_forwarded() {
        let mut s = session(4, Mode::Undirected, Model::Insertion);
        s.ingest(Update::edge(3, 3)).unwrap();
        assert_eq!(s.degrees().self_loops(VertexId(3)), 2);
        assert_eq!(s.degrees().degree(VertexId(3)), 0);
        assert!(s.sink().is_empty());

        let mut d = session(4, Mode::Directed, Model::Insertion);
        d.ingest(Update::arc(1, 1)).unwrap();
        assert_eq!(d.degrees().self_loops(VertexId(1)), 1);
    }

    #[test]
    fn turnstile_cancellation() {
        let mut s = session(6, Mode::Undirected, Model::Turnstile);
        s.ingest(Update::edge(2, 5)).unwrap();
        s.ingest(Update::edge(2, 5).negated()).unwrap();
        assert_eq!(s.degrees().degree(VertexId(2)), 0);
        assert_eq!(s.degrees().degree(VertexId(5)), 0);
        assert_eq!(s.forwarded(), 0);
        let net: i64 = s.sink().iter().map(|e| e.2).sum();
        assert_eq!(net, 0);
    }

    #[test]
    fn rejects_bad_updates() {
        let mut s = session(3, Mode::Directed, Model::Insertion);
        assert_eq!(s.ingest(Update::arc(0, 1).negated()), Err(Error::DeletionInInsertionStream));
        assert_eq!(s.ingest(Update::arc(0, 3)), Err(Error::VertexOutOfRange { id: 3, n: 3 }));
        assert_eq!(s.ingest(Update::arc(0, 1).with_delta(2)), Err(Error::InvalidDelta(2)));
        assert_eq!(s.ingest(Update::edge(0, 1)), Err(Error::OrientationMismatch));
    }

    #[test]
    fn reinsertion_without_loops_truncates() {
        let degrees = DegreeTable { d: vec![1, 2, 1], d_self: vec![0; 3] };
        let w = Walk::from_ids(&[0, 1, 2, 1, 0]);
        let out = reinsert_self_loops(&w, &degrees, 2, &mut seeded(1));
        assert_eq!(out, Walk::from_ids(&[0, 1, 2]));
    }

    #[test]
    fn reinsertion_on_loop_only_vertex() {
        let degrees = DegreeTable { d: vec![0], d_self: vec![1] };
        let out = reinsert_self_loops(&Walk::from_ids(&[0]), &degrees, 3, &mut seeded(9));
        assert_eq!(out, Walk::from_ids(&[0, 0, 0, 0]));
    }

    #[test]
    fn reinsertion_propagates_fail() {
        let degrees = DegreeTable::new(2);
        assert_eq!(reinsert_self_loops(&Walk::Fail, &degrees, 3, &mut seeded(0)), Walk::Fail);
    }

    #[test]
    fn walk_display() {
        assert_eq!(Walk::from_ids(&[0, 1, 2, 0]).to_string(), "0 1 2 0");
        assert_eq!(Walk::Fail.to_string(), "FAIL");
    }
}
