//! Ground truth for the walkers: exact walk distributions over rationals,
//! endpoint marginals, empirical distance estimates and test-graph
//! generators.

mod exact;
mod generators;
mod stats;

pub use exact::{endpoint_marginal, exact_distribution, sketch_walk_distribution, WalkDistribution, ENUMERATION_GUARD};
pub use generators::{
    gadget_directed, gadget_undirected, heavy_multigraph, random_digraph, random_multigraph, random_simple_graph,
    random_turnstile_stream, shuffled, with_random_loops, DirectedGadget, Planted, UndirectedGadget,
};
pub use stats::{binomial_sigma, l1_estimate, FailureRate, Histogram, L1Estimate};

use crate::error::{Error, Result};
use crate::stream::{Mode, Update, VertexId};

/// Arc-multiplicity matrix of a small graph.
///
/// `f(u, v)` counts arcs from `u` to `v`. An undirected edge `{a, b}` adds
/// one arc each way and an undirected loop adds two arcs `(a, a)`, so that
/// `d(u) = Σ_v f(u, v)` and the walk steps with probability `f(u, v) / d(u)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DenseGraph {
    n: usize,
    mode: Mode,
    f: Vec<u64>,
}

impl DenseGraph {
    pub fn new(n: usize, mode: Mode) -> Self {
        DenseGraph { n, mode, f: vec![0; n * n] }
    }

    /// Net graph of an update stream; rejects negative net multiplicities.
    pub fn from_updates<I: IntoIterator<Item = Update>>(n: usize, mode: Mode, updates: I) -> Result<Self> {
        let mut net = vec![0i64; n * n];
        for u in updates {
            let (a, b) = (u.tail.index(), u.head.index());
            if a >= n || b >= n {
                return Err(Error::VertexOutOfRange { id: a.max(b) as u64, n });
            }
            let (a, b) = if mode == Mode::Undirected { (a.min(b), a.max(b)) } else { (a, b) };
            net[a * n + b] += u.delta;
        }
        let mut g = DenseGraph::new(n, mode);
        for a in 0..n {
            for b in 0..n {
                let x = net[a * n + b];
                if x < 0 {
                    return Err(Error::InvalidParameter(format!("negative net multiplicity {x} on ({a}, {b})")));
                }
                if x > 0 {
                    g.add(a as u32, b as u32, x as u64);
                }
            }
        }
        Ok(g)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    /// Adds `count` copies of edge or arc `(a, b)`.
    pub fn add(&mut self, a: u32, b: u32, count: u64) {
        let (a, b) = (a as usize, b as usize);
        match self.mode {
            Mode::Directed => self.f[a * self.n + b] += count,
            Mode::Undirected if a == b => self.f[a * self.n + a] += 2 * count,
            Mode::Undirected => {
                self.f[a * self.n + b] += count;
                self.f[b * self.n + a] += count;
            }
        }
    }

    #[inline]
    pub fn f(&self, u: usize, v: usize) -> u64 {
        self.f[u * self.n + v]
    }

    pub fn degree(&self, u: usize) -> u64 {
        self.f[u * self.n..(u + 1) * self.n].iter().sum()
    }

    /// Out-neighbors of `u` with their multiplicities.
    pub fn neighbors(&self, u: usize) -> impl Iterator<Item = (usize, u64)> + '_ {
        (0..self.n).map(move |v| (v, self.f(u, v))).filter(|&(_, c)| c > 0)
    }

    pub fn has_self_loops(&self) -> bool {
        (0..self.n).any(|u| self.f(u, u) > 0)
    }

    /// The same graph with every loop removed.
    pub fn loopless(&self) -> DenseGraph {
        let mut g = self.clone();
        for u in 0..self.n {
            g.f[u * self.n + u] = 0;
        }
        g
    }

    /// Edges or arcs with multiplicity, each unordered pair listed once.
    pub fn edges(&self) -> Vec<(u32, u32, u64)> {
        let mut out = Vec::new();
        for a in 0..self.n {
            let start = if self.mode == Mode::Undirected { a } else { 0 };
            for b in start..self.n {
                let mut c = self.f(a, b);
                if self.mode == Mode::Undirected && a == b {
                    c /= 2;
                }
                if c > 0 {
                    out.push((a as u32, b as u32, c));
                }
            }
        }
        out
    }

    /// Insertion-only stream listing every copy once, in matrix order.
    pub fn to_updates(&self) -> Vec<Update> {
        let mut out = Vec::new();
        for (a, b, c) in self.edges() {
            let up = match self.mode {
                Mode::Directed => Update::arc(a, b),
                Mode::Undirected => Update::edge(a, b),
            };
            out.extend(std::iter::repeat_n(up, c as usize));
        }
        out
    }

    /// Graph of multiplicities `f(u, v)` restricted by `keep(u, v)`.
    pub fn map_arcs(&self, mut keep: impl FnMut(VertexId, VertexId, u64) -> u64) -> DenseGraph {
        let mut g = self.clone();
        for u in 0..self.n {
            for v in 0..self.n {
                g.f[u * self.n + v] = keep(VertexId(u as u32), VertexId(v as u32), self.f(u, v));
            }
        }
        g
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn undirected_loop_counts_twice() {
        let mut g = DenseGraph::new(2, Mode::Undirected);
        g.add(0, 0, 1);
        g.add(0, 1, 1);
        assert_eq!(g.degree(0), 3);
        assert_eq!(g.degree(1), 1);
        assert_eq!(g.loopless().degree(0), 1);
        assert_eq!(g.edges(), vec![(0, 0, 1), (0, 1, 1)]);
    }

    #[test]
    fn net_graph_of_turnstile_stream() {
        let ups = [Update::edge(0, 1), Update::edge(1, 2), Update::edge(0, 1).negated()];
        let g = DenseGraph::from_updates(3, Mode::Undirected, ups).unwrap();
        assert_eq!(g.f(0, 1), 0);
        assert_eq!(g.f(1, 2), 1);
        assert_eq!(g.f(2, 1), 1);
        assert!(DenseGraph::from_updates(2, Mode::Directed, [Update::arc(0, 1).negated()]).is_err());
    }

    #[test]
    fn stream_round_trip() {
        let mut g = DenseGraph::new(3, Mode::Undirected);
        g.add(0, 1, 2);
        g.add(2, 2, 1);
        let back = DenseGraph::from_updates(3, Mode::Undirected, g.to_updates()).unwrap();
        assert_eq!(back, g);
        assert_eq!(back.degree(2), 2);
    }
}
