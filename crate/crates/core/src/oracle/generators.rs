use rand::seq::{IndexedRandom, SliceRandom};
use rand::Rng;

use super::DenseGraph;
use crate::error::{Error, Result};
use crate::rng::{seeded, SketchRng};
use crate::stream::{Mode, Update, VertexId};

/// Planted bit pattern of the undirected gadget.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Planted {
    Random,
    AllOnes,
    AllZeros,
}

/// Layered undirected gadget.
///
/// `V_0` has `2s` vertices with `s = sqrt(t)`; group `j` has halves `A_j` and
/// `B_j` of `s` vertices each, joined by the planted bipartite edges. The
/// query completion joins every vertex of `A_q` to every vertex of `V_0`.
/// Vertex ids: `V_0 = 0..2s`, then `A_1, B_1, A_2, B_2, ...`.
#[derive(Debug, Clone)]
pub struct UndirectedGadget {
    pub side: usize,
    pub graph: DenseGraph,
    /// Planted stream followed by the query completion.
    pub updates: Vec<Update>,
    /// `bits[j][a * side + b]` for group `j + 1`.
    pub bits: Vec<Vec<bool>>,
    /// Queried group, 1-based.
    pub query_group: usize,
    pub v0: VertexId,
}

impl UndirectedGadget {
    pub fn a(&self, group: usize, i: usize) -> u32 {
        (2 * self.side * group + i) as u32
    }

    pub fn b(&self, group: usize, i: usize) -> u32 {
        (2 * self.side * group + self.side + i) as u32
    }
}

pub fn gadget_undirected(t: u64, groups: usize, planted: Planted, seed: u64) -> Result<UndirectedGadget> {
    let side = (t as f64).sqrt().round() as usize;
    if t < 4 || (side * side) as u64 != t {
        return Err(Error::InvalidParameter(format!("gadget needs a perfect square t >= 4, got {t}")));
    }
    if groups == 0 {
        return Err(Error::InvalidParameter("gadget needs at least one group".into()));
    }
    let mut rng = seeded(seed);
    let n = 2 * side * (groups + 1);
    let mut g = UndirectedGadget {
        side,
        graph: DenseGraph::new(n, Mode::Undirected),
        updates: Vec::new(),
        bits: Vec::new(),
        query_group: rng.random_range(1..=groups),
        v0: VertexId(0),
    };
    let mut planted_edges = Vec::new();
    for j in 1..=groups {
        let bits: Vec<bool> = (0..t)
            .map(|_| match planted {
                Planted::Random => rng.random(),
                Planted::AllOnes => true,
                Planted::AllZeros => false,
            })
            .collect();
        for a in 0..side {
            for b in 0..side {
                if bits[a * side + b] {
                    planted_edges.push(Update::edge(g.a(j, a), g.b(j, b)));
                }
            }
        }
        g.bits.push(bits);
    }
    planted_edges.shuffle(&mut rng);
    g.updates = planted_edges;
    for a in 0..side {
        for v in 0..2 * side {
            g.updates.push(Update::edge(g.a(g.query_group, a), v as u32));
        }
    }
    for u in &g.updates {
        g.graph.add(u.tail.0, u.head.0, 1);
    }
    Ok(g)
}

/// Layered directed gadget on `2n + 1` vertices.
///
/// Each encoder `v_{n+1}, ..., v_{2n}` has arcs to a random `t`-subset of
/// `v_1, ..., v_n`; every `v_0, ..., v_n` then gets an arc to the queried
/// encoder.
#[derive(Debug, Clone)]
pub struct DirectedGadget {
    pub graph: DenseGraph,
    pub updates: Vec<Update>,
    /// Target subset of encoder `v_{n+1+i}`.
    pub subsets: Vec<Vec<u32>>,
    pub query: VertexId,
    pub v0: VertexId,
}

pub fn gadget_directed(n: usize, t: usize, seed: u64) -> Result<DirectedGadget> {
    if t == 0 || 2 * t > n {
        return Err(Error::InvalidParameter(format!("directed gadget needs 1 <= t <= n/2, got n={n}, t={t}")));
    }
    let mut rng = seeded(seed);
    let targets: Vec<u32> = (1..=n as u32).collect();
    let mut updates = Vec::new();
    let mut subsets = Vec::new();
    for i in 0..n {
        let u = (n + 1 + i) as u32;
        let mut s: Vec<u32> = targets.choose_multiple(&mut rng, t).copied().collect();
        s.sort_unstable();
        updates.extend(s.iter().map(|&v| Update::arc(u, v)));
        subsets.push(s);
    }
    let query = VertexId(rng.random_range(n as u32 + 1..=2 * n as u32));
    updates.extend((0..=n as u32).map(|v| Update::arc(v, query.0)));
    let graph = DenseGraph::from_updates(2 * n + 1, Mode::Directed, updates.iter().copied())?;
    Ok(DirectedGadget { graph, updates, subsets, query, v0: VertexId(0) })
}

/// Random digraph with out-degrees in `0..=max_out` (at least 1 at vertex 0)
/// and no loops. Heads repeat only when `multi` is set.
pub fn random_digraph(n: usize, max_out: usize, multi: bool, seed: u64) -> DenseGraph {
    assert!(n >= 2 && (multi || max_out < n));
    let mut rng = seeded(seed);
    let mut g = DenseGraph::new(n, Mode::Directed);
    for u in 0..n {
        let lo = usize::from(u == 0);
        let k = rng.random_range(lo..=max_out);
        let others: Vec<u32> = (0..n as u32).filter(|&v| v as usize != u).collect();
        if multi {
            for _ in 0..k {
                g.add(u as u32, *others.choose(&mut rng).expect("n >= 2"), 1);
            }
        } else {
            for &v in others.choose_multiple(&mut rng, k) {
                g.add(u as u32, v, 1);
            }
        }
    }
    g
}

/// `m` edges or arcs between uniformly random distinct endpoints, repeats allowed.
pub fn random_multigraph(n: usize, m: usize, mode: Mode, seed: u64) -> DenseGraph {
    assert!(n >= 2);
    let mut rng = seeded(seed);
    let mut g = DenseGraph::new(n, mode);
    for _ in 0..m {
        let a = rng.random_range(0..n as u32);
        let b = (a + rng.random_range(1..n as u32)) % n as u32;
        g.add(a, b, 1);
    }
    g
}

/// `m` distinct loop-free edges or arcs, chosen uniformly.
pub fn random_simple_graph(n: usize, m: usize, mode: Mode, seed: u64) -> Result<DenseGraph> {
    let pairs: Vec<(u32, u32)> = (0..n as u32)
        .flat_map(|a| (0..n as u32).map(move |b| (a, b)))
        .filter(|&(a, b)| if mode == Mode::Undirected { a < b } else { a != b })
        .collect();
    if m > pairs.len() {
        return Err(Error::InvalidParameter(format!("{m} edges do not fit in a simple graph on {n} vertices")));
    }
    let mut rng = seeded(seed);
    let mut g = DenseGraph::new(n, mode);
    for &(a, b) in pairs.choose_multiple(&mut rng, m) {
        g.add(a, b, 1);
    }
    Ok(g)
}

/// Hub-and-spoke undirected multigraph with large multiplicities: vertex 0
/// joins every other vertex with multiplicity in `1..=max_mult`, plus `n`
/// random light edges among the rest.
pub fn heavy_multigraph(n: usize, max_mult: u64, seed: u64) -> DenseGraph {
    assert!(n >= 3 && max_mult >= 1);
    let mut rng = seeded(seed);
    let mut g = DenseGraph::new(n, Mode::Undirected);
    for v in 1..n as u32 {
        g.add(0, v, rng.random_range(1..=max_mult));
    }
    for _ in 0..n {
        let a = rng.random_range(1..n as u32);
        let b = 1 + (a - 1 + rng.random_range(1..n as u32 - 1)) % (n as u32 - 1);
        g.add(a, b, 1);
    }
    g
}

/// Adds `1..=max_loops` loops to each vertex with probability one half.
pub fn with_random_loops(g: &DenseGraph, max_loops: u64, seed: u64) -> DenseGraph {
    let mut rng = seeded(seed);
    let mut out = g.clone();
    for u in 0..g.n() as u32 {
        if rng.random_bool(0.5) {
            out.add(u, u, rng.random_range(1..=max_loops));
        }
    }
    out
}

/// A turnstile stream whose net graph is `g`.
///
/// The insertions of `g` are interleaved with `extra` random insert/delete
/// pairs; every deletion follows its insertion, so prefix multiplicities
/// never go negative.
pub fn random_turnstile_stream(g: &DenseGraph, extra: usize, seed: u64) -> Vec<Update> {
    let mut rng = seeded(seed);
    let n = g.n() as u32;
    let make = |a: u32, b: u32| match g.mode() {
        Mode::Directed => Update::arc(a, b),
        Mode::Undirected => Update::edge(a, b),
    };
    let mut timed: Vec<(f64, Update)> = g.to_updates().into_iter().map(|u| (rng.random::<f64>(), u)).collect();
    for _ in 0..extra {
        let a = rng.random_range(0..n);
        let b = (a + rng.random_range(1..n)) % n;
        let up = make(a, b);
        let at: f64 = rng.random();
        let later = at + (1.0 - at) * rng.random::<f64>();
        timed.push((at, up));
        timed.push((later.max(at + f64::EPSILON), up.negated()));
    }
    timed.sort_by(|x, y| x.0.total_cmp(&y.0));
    timed.into_iter().map(|(_, u)| u).collect()
}

/// The updates in a uniformly random order.
pub fn shuffled(updates: &[Update], seed: u64) -> Vec<Update> {
    let mut rng: SketchRng = seeded(seed);
    let mut out = updates.to_vec();
    out.shuffle(&mut rng);
    out
}
