//! Monte-Carlo verification suites.
//!
//! Each suite compares walkers or sketches against the exact oracle and
//! returns one [`CheckRecord`] per measured quantity. Walk suites rebuild
//! the sketch for every query, so the measured distribution is the
//! single-query output distribution.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_traits::ToPrimitive;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::{
    binomial_sigma, endpoint_marginal, exact_distribution, gadget_undirected, heavy_multigraph, l1_estimate,
    random_digraph, random_multigraph, random_turnstile_stream, shuffled, sketch_walk_distribution, with_random_loops,
    DenseGraph, FailureRate, Histogram, Planted,
};
use crate::rng::{derive_seed, query_rng, seeded};
use crate::stream::{ArcSink, Mode, Model, StreamSession, Update, VertexId, Walk};
use crate::turnstile::{
    L1Sampler, L1SamplerConfig, TurnstileDirectedBuilder, TurnstileParams, TurnstileUndirectedBuilder,
};
use crate::walk::{Capacity, UndirectedBuilder, WalkSketch};
use crate::walker::{Algorithm, FrozenSketch, FrozenWalker, WalkerConfig};

/// One measured quantity and the bound it must respect.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    pub value: f64,
    pub bound: f64,
    pub pass: bool,
}

impl CheckRecord {
    pub fn at_most(name: impl Into<String>, value: f64, bound: f64) -> Self {
        CheckRecord { name: name.into(), value, bound, pass: value <= bound }
    }

    /// A count of violated assertions, which must be zero.
    pub fn violations(name: impl Into<String>, count: u64) -> Self {
        Self::at_most(name, count as f64, 0.0)
    }
}

impl fmt::Display for CheckRecord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.pass { "pass" } else { "FAIL" };
        write!(f, "{verdict} {} value={:.6} bound={:.6}", self.name, self.value, self.bound)
    }
}

/// Named groups of checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Suite {
    Perfect,
    Epsilon,
    Failure,
    TurnstileEquiv,
    Capacity,
    MisraGries,
    Space,
    Sampler,
    SelfLoops,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Perfect,
        Suite::Epsilon,
        Suite::Failure,
        Suite::TurnstileEquiv,
        Suite::Capacity,
        Suite::MisraGries,
        Suite::Space,
        Suite::Sampler,
        Suite::SelfLoops,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Perfect => "perfect",
            Suite::Epsilon => "epsilon",
            Suite::Failure => "failure",
            Suite::TurnstileEquiv => "turnstile-equiv",
            Suite::Capacity => "capacity",
            Suite::MisraGries => "misra-gries",
            Suite::Space => "space",
            Suite::Sampler => "sampler",
            Suite::SelfLoops => "self-loops",
        }
    }

    /// Full-size budget for the suite.
    pub fn default_budget(self, seed: u64) -> Budget {
        let (instances, queries) = match self {
            Suite::Perfect => (20, 500_000),
            Suite::Epsilon => (10, 100_000),
            Suite::Failure => (5, 100_000),
            Suite::TurnstileEquiv => (4, 10_000),
            Suite::Capacity => (1, 0),
            Suite::MisraGries => (1_000, 0),
            Suite::Space => (200, 0),
            Suite::Sampler => (1, 10_000),
            Suite::SelfLoops => (6, 500_000),
        };
        Budget { instances, queries, seed }
    }

    pub fn run(self, budget: &Budget) -> Result<Vec<CheckRecord>> {
        match self {
            Suite::Perfect => {
                let mut out = perfect_directed(Algorithm::Wr, budget)?;
                out.extend(perfect_directed(Algorithm::Wor, budget)?);
                Ok(out)
            }
            Suite::Epsilon => undirected_epsilon(budget),
            Suite::Failure => failure_rates(budget),
            Suite::TurnstileEquiv => turnstile_equivalence(budget),
            Suite::Capacity => Ok(capacity_grid()),
            Suite::MisraGries => misra_gries_bounds(budget),
            Suite::Space => space_accounting(budget),
            Suite::Sampler => Ok(l1_sampler_contract(budget)),
            Suite::SelfLoops => self_loop_pipeline(budget),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown suite {s:?}")))
    }
}

/// Size of a suite run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    /// Random instances (graphs, streams) per check family.
    pub instances: usize,
    /// Monte-Carlo queries per instance.
    pub queries: u64,
    pub seed: u64,
}

impl Budget {
    fn instance_seed(&self, family: u64, i: usize) -> u64 {
        derive_seed(derive_seed(self.seed, family), i as u64)
    }
}

fn exact_f64(g: &DenseGraph, v0: VertexId, t: usize) -> Result<HashMap<Walk, f64>> {
    Ok(exact_distribution(g, v0, t)?.to_f64())
}

/// Walks from `v0`, one freshly built walker per query; `inspect` is called
/// on every build and the number of builds it rejects is returned.
fn sample_walks(
    config: WalkerConfig,
    updates: &[Update],
    v0: VertexId,
    queries: u64,
    mut inspect: impl FnMut(&FrozenWalker) -> bool,
) -> Result<(Histogram<Walk>, u64)> {
    let mut hist = Histogram::new();
    let mut rejected = 0;
    for q in 0..queries {
        let cfg = WalkerConfig { seed: derive_seed(config.seed, q), ..config };
        let w = FrozenWalker::build(cfg, updates.iter().copied())?;
        if !inspect(&w) {
            rejected += 1;
        }
        hist.record(w.walk_indexed(v0, 0));
    }
    Ok((hist, rejected))
}

fn fail_rate(hist: &Histogram<Walk>) -> FailureRate {
    FailureRate { failures: hist.count(&Walk::Fail), trials: hist.total() }
}

/// Perfect directed simulation: random digraphs on 3 to 6 vertices with
/// out-degree at most 3 (multigraphs for `Wr`, simple for `Wor`), `t = 4`,
/// ℓ1 distance at most 0.05.
pub fn perfect_directed(algorithm: Algorithm, budget: &Budget) -> Result<Vec<CheckRecord>> {
    let t = 4;
    let multi = algorithm == Algorithm::Wr;
    let mut out = Vec::new();
    for i in 0..budget.instances {
        let seed = budget.instance_seed(1 + multi as u64, i);
        let n = 3 + i % 4;
        let g = random_digraph(n, 3.min(n - 1), multi, seed);
        let ups = shuffled(&g.to_updates(), seed);
        let exact = exact_f64(&g, VertexId(0), t)?;
        let cfg = WalkerConfig::new(algorithm, g.n(), t as u64, 1.0, seed);
        let (hist, _) = sample_walks(cfg, &ups, VertexId(0), budget.queries, |_| true)?;
        let l1 = l1_estimate(&hist, &exact);
        out.push(CheckRecord::at_most(format!("perfect/{algorithm}/g{i:02}/l1"), l1.value, 0.05));
    }
    Ok(out)
}

fn undirected_space_ok(w: &FrozenWalker) -> bool {
    let FrozenSketch::Undirected(s) = &w.sketch else { return true };
    let n = w.n();
    let c = s.capacity();
    let r = s.space();
    r.important_entries <= n * c && r.samples_held <= n * c && r.stored_arcs() <= 2 * n * c
}

/// ε-guarantee of the undirected walker at `ε = 0.25`: random multigraphs
/// and heavy multigraphs with `t = 4`, the layered gadget with `t = 16`
/// (endpoint marginal), and the triangle. Reports the ℓ1 distance, the
/// failure rate and space violations per instance.
pub fn undirected_epsilon(budget: &Budget) -> Result<Vec<CheckRecord>> {
    let eps = 0.25;
    let mut out = Vec::new();
    let mut space_violations = 0;
    let mut instances: Vec<(String, DenseGraph, usize)> = Vec::new();
    for i in 0..budget.instances {
        let seed = budget.instance_seed(3, i);
        let n = 3 + i % 4;
        let g = if i % 3 == 2 {
            heavy_multigraph(6, 40, seed)
        } else {
            random_multigraph(n, 2 * n, Mode::Undirected, seed)
        };
        instances.push((format!("epsilon/multigraph/g{i:02}"), g, 4));
    }
    let mut tri = DenseGraph::new(3, Mode::Undirected);
    for (a, b) in [(0, 1), (1, 2), (2, 0)] {
        tri.add(a, b, 1);
    }
    instances.push(("epsilon/triangle".into(), tri, 4));

    for (k, (name, g, t)) in instances.into_iter().enumerate() {
        let seed = budget.instance_seed(4, k);
        let ups = shuffled(&g.to_updates(), seed);
        let cfg = WalkerConfig::new(Algorithm::UndirectedSketch, g.n(), t as u64, eps, seed);
        let (hist, bad) = sample_walks(cfg, &ups, VertexId(0), budget.queries, undirected_space_ok)?;
        space_violations += bad;
        let l1 = l1_estimate(&hist, &exact_f64(&g, VertexId(0), t)?);
        let bound = if name == "epsilon/triangle" { l1.error_bar } else { eps + l1.error_bar };
        out.push(CheckRecord::at_most(format!("{name}/l1"), l1.value, bound));
        let fr = fail_rate(&hist);
        out.push(CheckRecord::at_most(format!("{name}/fail"), fr.rate(), eps / 2.0 + fr.error_bar(eps / 2.0)));
    }

    let gadget = gadget_undirected(16, 2, Planted::Random, budget.seed)?;
    let cfg = WalkerConfig::new(Algorithm::UndirectedSketch, gadget.graph.n(), 16, eps, budget.seed);
    let (hist, bad) = sample_walks(cfg, &gadget.updates, gadget.v0, budget.queries, undirected_space_ok)?;
    space_violations += bad;
    let exact: HashMap<Option<VertexId>, f64> = endpoint_marginal(&gadget.graph, gadget.v0, 16)
        .into_iter()
        .map(|(k, p)| (k, p.to_f64().unwrap_or(0.0)))
        .collect();
    let l1 = l1_estimate(&hist.map(Walk::last), &exact);
    out.push(CheckRecord::at_most("epsilon/gadget-t16/endpoint-l1", l1.value, eps + l1.error_bar));
    let fr = fail_rate(&hist);
    out.push(CheckRecord::at_most("epsilon/gadget-t16/fail", fr.rate(), eps / 2.0 + fr.error_bar(eps / 2.0)));
    out.push(CheckRecord::violations("epsilon/space", space_violations));
    Ok(out)
}

/// Failure behavior: zero failures where none are possible, the gadget
/// failure rate, and an undirected sketch with capacity 1 whose output
/// distribution, failures included, must match the exact per-walk
/// failure oracle.
pub fn failure_rates(budget: &Budget) -> Result<Vec<CheckRecord>> {
    let mut out = Vec::new();

    for i in 0..budget.instances {
        let seed = budget.instance_seed(5, i);
        let mut g = random_digraph(5, 3, true, seed);
        for u in 0..5 {
            g.add(u, (u + 1) % 5, 1);
        }
        let cfg = WalkerConfig::new(Algorithm::Wr, 5, 4, 1.0, seed);
        let (hist, _) =
            sample_walks(cfg, &shuffled(&g.to_updates(), seed), VertexId(0), budget.queries / 10, |_| true)?;
        out.push(CheckRecord::violations(format!("failure/wr-positive-degrees/g{i:02}"), hist.count(&Walk::Fail)));
    }

    let eps = 0.25;
    let gadget = gadget_undirected(16, 1, Planted::Random, budget.seed)?;
    let cfg = WalkerConfig::new(Algorithm::UndirectedSketch, gadget.graph.n(), 16, eps, budget.seed);
    let (hist, _) = sample_walks(cfg, &gadget.updates, gadget.v0, budget.queries, |_| true)?;
    let fr = fail_rate(&hist);
    out.push(CheckRecord::at_most("failure/gadget-t16", fr.rate(), eps / 2.0 + fr.error_bar(eps / 2.0)));

    for i in 0..budget.instances {
        let seed = budget.instance_seed(6, i);
        let mut g = random_multigraph(5, 8, Mode::Undirected, seed);
        g.add(0, 1, 2);
        let ups = shuffled(&g.to_updates(), seed);
        let (c, t) = (1, 4);
        let important = {
            let mut s = StreamSession::open(5, Mode::Undirected, Model::Insertion, UndirectedBuilder::new(5, c, 0))?;
            s.ingest_all(ups.iter().copied())?;
            let sk = s.finish().1.freeze();
            g.map_arcs(|u, v, _| sk.important().multiplicity(u, v))
        };
        let exact = sketch_walk_distribution(&g, &important, c, VertexId(0), t)?.to_f64();
        let mut hist = Histogram::new();
        for q in 0..budget.queries {
            let qseed = derive_seed(seed, q);
            let mut s =
                StreamSession::open(5, Mode::Undirected, Model::Insertion, UndirectedBuilder::new(5, c, qseed))?;
            s.ingest_all(ups.iter().copied())?;
            hist.record(s.finish().1.freeze().walk(VertexId(0), t, &mut query_rng(qseed, 0)));
        }
        let l1 = l1_estimate(&hist, &exact);
        out.push(CheckRecord::at_most(
            format!("failure/capacity-1/g{i:02}/l1-vs-sketch-oracle"),
            l1.value,
            l1.error_bar,
        ));
        let p = exact.get(&Walk::Fail).copied().unwrap_or(0.0);
        let fr = fail_rate(&hist);
        let dev = (fr.rate() - p).abs();
        out.push(CheckRecord::at_most(
            format!("failure/capacity-1/g{i:02}/fail-deviation"),
            dev,
            3.0 * binomial_sigma(p, fr.trials),
        ));
    }
    Ok(out)
}

fn directed_builder(n: usize, ups: &[Update], params: TurnstileParams, seed: u64) -> Result<TurnstileDirectedBuilder> {
    let mut s =
        StreamSession::open(n, Mode::Directed, Model::Turnstile, TurnstileDirectedBuilder::new(n, params, seed))?;
    s.ingest_all(ups.iter().copied())?;
    Ok(s.finish().1)
}

fn undirected_builder(
    n: usize,
    ups: &[Update],
    params: TurnstileParams,
    seed: u64,
) -> Result<TurnstileUndirectedBuilder> {
    let mut s =
        StreamSession::open(n, Mode::Undirected, Model::Turnstile, TurnstileUndirectedBuilder::new(n, params, seed)?)?;
    s.ingest_all(ups.iter().copied())?;
    Ok(s.finish().1)
}

/// Turnstile walkers on streams with deletions against the exact oracle of
/// the net graph (`t = 3`, `ε = 0.25`), plus linearity: permuted streams and
/// the net insertion-only stream give identical sketch states.
pub fn turnstile_equivalence(budget: &Budget) -> Result<Vec<CheckRecord>> {
    let (t, eps) = (3usize, 0.25);
    let params = TurnstileParams::new(t as u64, eps)?;
    let mut out = Vec::new();
    let mut mismatches = 0;
    for i in 0..budget.instances {
        for algorithm in [Algorithm::TurnstileDirected, Algorithm::TurnstileUndirected] {
            let seed = budget.instance_seed(7, 2 * i + (algorithm == Algorithm::TurnstileUndirected) as usize);
            let n = 3 + i % 4;
            let g = if algorithm.mode() == Mode::Directed {
                random_digraph(n, 3, true, seed)
            } else {
                random_multigraph(n, 2 * n, Mode::Undirected, seed)
            };
            let stream = random_turnstile_stream(&g, 2 * n, seed);
            let cfg = WalkerConfig::new(algorithm, n, t as u64, eps, seed);
            let (hist, _) = sample_walks(cfg, &stream, VertexId(0), budget.queries, |_| true)?;
            let l1 = l1_estimate(&hist, &exact_f64(&g, VertexId(0), t)?);
            out.push(CheckRecord::at_most(format!("turnstile/{algorithm}/g{i:02}/l1"), l1.value, eps + l1.error_bar));

            let permuted = shuffled(&stream, seed ^ 1);
            let net = g.to_updates();
            let same = match algorithm.mode() {
                Mode::Directed => {
                    let a = directed_builder(n, &stream, params, seed)?;
                    a == directed_builder(n, &permuted, params, seed)? && a == directed_builder(n, &net, params, seed)?
                }
                Mode::Undirected => {
                    let a = undirected_builder(n, &stream, params, seed)?;
                    a == undirected_builder(n, &permuted, params, seed)?
                        && a == undirected_builder(n, &net, params, seed)?
                }
            };
            mismatches += u64::from(!same);
        }
    }

    // Triangle with one edge deleted: walks stay on the residual path.
    let tri = [Update::edge(0, 1), Update::edge(1, 2), Update::edge(2, 0), Update::edge(2, 0).negated()];
    let mut path = DenseGraph::new(3, Mode::Undirected);
    path.add(0, 1, 1);
    path.add(1, 2, 1);
    let cfg = WalkerConfig::new(Algorithm::TurnstileUndirected, 3, t as u64, eps, budget.seed);
    let (hist, _) = sample_walks(cfg, &tri, VertexId(0), budget.queries, |_| true)?;
    let l1 = l1_estimate(&hist, &exact_f64(&path, VertexId(0), t)?);
    out.push(CheckRecord::at_most("turnstile/triangle-minus-edge/l1", l1.value, eps + l1.error_bar));
    out.push(CheckRecord::violations("turnstile/linearity", mismatches));
    Ok(out)
}

/// `(e t / C^2)^C < ε / (2t)` over the grid `t ∈ {1, 4, 16, 64, 256, 1024}`,
/// `ε ∈ {1, 0.1, 2^-sqrt(t)}`. The value is the log2 margin, which must be
/// negative.
pub fn capacity_grid() -> Vec<CheckRecord> {
    let mut out = Vec::new();
    for t in [1u64, 4, 16, 64, 256, 1024] {
        for eps in [1.0, 0.1, 2f64.powf(-(t as f64).sqrt())] {
            let name = format!("capacity/t{t}/eps{eps:e}");
            match Capacity::new(t, eps) {
                Ok(cap) => {
                    let margin = cap.log2_failure_bound() - cap.delta.log2();
                    out.push(CheckRecord { name, value: margin, bound: 0.0, pass: margin < 0.0 });
                }
                Err(_) => out.push(CheckRecord { name, value: f64::NAN, bound: 0.0, pass: false }),
            }
        }
    }
    out
}

/// Random undirected multigraph stream for the table checks: up to 12
/// vertices, heavy-tailed multiplicities, random order.
fn table_stream(seed: u64) -> (usize, usize, DenseGraph, Vec<Update>) {
    let mut rng = seeded(seed);
    let n = rng.random_range(2..=12usize);
    let c = rng.random_range(1..=6usize);
    let mut g = DenseGraph::new(n, Mode::Undirected);
    for _ in 0..rng.random_range(1..=40) {
        let a = rng.random_range(0..n as u32);
        let b = (a + rng.random_range(1..n as u32)) % n as u32;
        let mult = if rng.random_bool(0.2) { rng.random_range(2..=15) } else { 1 };
        g.add(a, b, mult);
    }
    let ups = shuffled(&g.to_updates(), seed ^ 0x55);
    (n, c, g, ups)
}

/// Misra-Gries bounds on random streams: `|L_v| <= C`,
/// `0 <= f(u,v) - A_v(u) <= d(v)/(C+1)`, `f_0(u,v)/d(v) < 1/C`, and every
/// arc not kept as important is fed to its tail's sampler exactly once.
pub fn misra_gries_bounds(budget: &Budget) -> Result<Vec<CheckRecord>> {
    let (mut size, mut error, mut ratio, mut conservation) = (0u64, 0u64, 0u64, 0u64);
    for i in 0..budget.instances {
        let (n, c, g, ups) = table_stream(budget.instance_seed(8, i));
        let mut s = StreamSession::open(n, Mode::Undirected, Model::Insertion, UndirectedBuilder::new(n, c, i as u64))?;
        s.ingest_all(ups)?;
        let b = s.finish().1;
        for v in 0..n {
            let vid = VertexId(v as u32);
            let table = b.table(vid);
            size += u64::from(table.len() > c);
            let d = g.degree(v);
            for u in 0..n {
                let f = g.f(u, v);
                let a = table.estimate(VertexId(u as u32));
                if a > f || (f - a) * (c as u64 + 1) > d {
                    error += 1;
                }
                if f > 0 && (f - a.min(f)) * c as u64 >= d {
                    ratio += 1;
                }
            }
        }
        let fed: Vec<u64> = (0..n).map(|u| b.fed(VertexId(u as u32))).collect();
        let sk = b.freeze();
        for (u, fed) in fed.into_iter().enumerate() {
            conservation += u64::from(sk.important().out_degree(VertexId(u as u32)) + fed != g.degree(u));
        }
    }
    Ok(vec![
        CheckRecord::violations("misra-gries/table-size", size),
        CheckRecord::violations("misra-gries/estimate-error", error),
        CheckRecord::violations("misra-gries/unimportant-ratio", ratio),
        CheckRecord::violations("misra-gries/degree-conservation", conservation),
    ])
}

/// Stored items after every build: the undirected sketch keeps at most
/// `2nC` arcs (important entries plus samples), directed `Wr` allocates
/// exactly `n t` sample slots and fills all `t` at every vertex with
/// out-arcs.
pub fn space_accounting(budget: &Budget) -> Result<Vec<CheckRecord>> {
    let (mut undirected, mut directed) = (0u64, 0u64);
    for i in 0..budget.instances {
        let seed = budget.instance_seed(9, i);
        let (n, c, _, ups) = table_stream(seed);
        let mut s = StreamSession::open(n, Mode::Undirected, Model::Insertion, UndirectedBuilder::new(n, c, seed))?;
        s.ingest_all(ups)?;
        let sk = s.finish().1.freeze();
        let r = sk.space();
        undirected += u64::from(r.important_entries > n * c || r.samples_held > n * c || r.stored_arcs() > 2 * n * c);

        let g = random_digraph(2 + i % 5, 3, true, seed);
        let t = 1 + i % 8;
        let w = FrozenWalker::build(WalkerConfig::new(Algorithm::Wr, g.n(), t as u64, 1.0, seed), g.to_updates())?;
        let r = w.space();
        let active = (0..g.n()).filter(|&u| g.degree(u) > 0).count();
        directed += u64::from(r.sample_slots != g.n() * t || r.samples_held != active * t);
    }
    for (k, t) in [4u64, 16, 64].into_iter().enumerate() {
        let g = gadget_undirected(t, 3, Planted::Random, budget.instance_seed(10, k))?;
        let w =
            FrozenWalker::build(WalkerConfig::new(Algorithm::UndirectedSketch, g.graph.n(), t, 0.25, 0), g.updates)?;
        undirected += u64::from(!undirected_space_ok(&w));
    }
    Ok(vec![
        CheckRecord::violations("space/undirected-2nC", undirected),
        CheckRecord::violations("space/wr-nt", directed),
    ])
}

/// Fixed test vectors for the ℓ1 sampler over a universe of 64, each as a
/// list of `(index, value)` updates.
fn sampler_vectors() -> Vec<(&'static str, Vec<(u64, i64)>)> {
    let mut churn = vec![(9, 3), (30, 3), (61, 2)];
    for j in 0..20u64 {
        churn.push((j * 3 + 1, 1 + j as i64 % 3));
    }
    for j in 0..20u64 {
        churn.push((j * 3 + 1, -(1 + j as i64 % 3)));
    }
    vec![
        ("skewed", vec![(3, 8), (17, 1), (40, 1)]),
        ("uniform8", (0..8).map(|j| (j * 7, 1)).collect()),
        ("geometric", (0..7).map(|j| (j * 9 + 2, 1 << (6 - j))).collect()),
        ("signed", vec![(5, 5), (6, -3), (50, 2), (63, -1)]),
        ("churned", churn),
    ]
}

/// ℓ1 sampler contract: over independently seeded sketches, the output
/// conditioned on success is within total variation 0.02 of `|f_j|/‖f‖₁`,
/// and the failure rate is at most `δ_s + 3σ`.
pub fn l1_sampler_contract(budget: &Budget) -> Vec<CheckRecord> {
    let universe = 64;
    let mut out = Vec::new();
    let configs = [
        ("default", L1SamplerConfig::default()),
        ("worst-case", L1SamplerConfig { worst_case_failures: true, ..L1SamplerConfig::default() }),
    ];
    for (label, config) in configs {
        for (k, (name, updates)) in sampler_vectors().into_iter().enumerate() {
            let mut f: HashMap<u64, i64> = HashMap::new();
            for &(j, x) in &updates {
                *f.entry(j).or_insert(0) += x;
            }
            let l1: i64 = f.values().map(|x| x.abs()).sum();
            let exact: HashMap<u64, f64> =
                f.iter().filter(|(_, x)| **x != 0).map(|(&j, &x)| (j, x.abs() as f64 / l1 as f64)).collect();
            let mut hist: Histogram<u64> = Histogram::new();
            let mut fails = 0;
            for s in 0..budget.queries {
                let mut sk = L1Sampler::new(universe, config, derive_seed(budget.instance_seed(11, k), s));
                for &(j, x) in &updates {
                    sk.update(j, x);
                }
                match sk.query() {
                    Some(j) => hist.record(j),
                    None => fails += 1,
                }
            }
            let tv = if hist.total() == 0 { 1.0 } else { l1_estimate(&hist, &exact).value / 2.0 };
            out.push(CheckRecord::at_most(format!("sampler/{label}/{name}/tv"), tv, 0.02));
            let fr = FailureRate { failures: fails, trials: budget.queries };
            let delta = config.delta;
            out.push(CheckRecord::at_most(
                format!("sampler/{label}/{name}/fail"),
                fr.rate(),
                delta + fr.error_bar(delta),
            ));
        }
    }
    out
}

/// The composed pipeline (loopless walker plus loop reinsertion) against
/// the exact walk distribution of the loopy graph, `t = 4`, ℓ1 at most 0.05.
pub fn self_loop_pipeline(budget: &Budget) -> Result<Vec<CheckRecord>> {
    let t = 4;
    let mut out = Vec::new();
    let mut cases: Vec<(String, DenseGraph, Algorithm)> = Vec::new();
    for i in 0..budget.instances {
        let seed = budget.instance_seed(12, i);
        let n = 3 + i % 3;
        let (g, algo) = match i % 3 {
            0 => (random_digraph(n, 3, true, seed), Algorithm::Wr),
            1 => (random_multigraph(n, 2 * n, Mode::Undirected, seed), Algorithm::UndirectedSketch),
            _ => (random_digraph(n, 2, false, seed), Algorithm::Wor),
        };
        cases.push((format!("self-loops/{algo}/g{i:02}"), with_random_loops(&g, 3, seed), algo));
    }
    let mut only_loops = DenseGraph::new(3, Mode::Undirected);
    only_loops.add(0, 0, 2);
    only_loops.add(1, 2, 1);
    only_loops.add(1, 1, 1);
    cases.push(("self-loops/loop-only-start".into(), only_loops, Algorithm::UndirectedSketch));

    for (k, (name, g, algo)) in cases.into_iter().enumerate() {
        let seed = budget.instance_seed(13, k);
        let ups = shuffled(&g.to_updates(), seed);
        let cfg = WalkerConfig::new(algo, g.n(), t as u64, 0.25, seed);
        let (hist, _) = sample_walks(cfg, &ups, VertexId(0), budget.queries, |_| true)?;
        let l1 = l1_estimate(&hist, &exact_f64(&g, VertexId(0), t)?);
        out.push(CheckRecord::at_most(format!("{name}/l1"), l1.value, 0.05));
    }
    Ok(out)
}

/// Drains `updates` into a session feeding `sink`.
pub fn replay<S: ArcSink>(n: usize, mode: Mode, model: Model, sink: S, updates: &[Update]) -> Result<S> {
    let mut s = StreamSession::open(n, mode, model, sink)?;
    s.ingest_all(updates.iter().copied())?;
    Ok(s.finish().1)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small(seed: u64) -> Budget {
        Budget { instances: 2, queries: 2_000, seed }
    }

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
    }

    #[test]
    fn capacity_grid_passes() {
        let recs = capacity_grid();
        assert_eq!(recs.len(), 18);
        assert!(recs.iter().all(|r| r.pass), "{recs:?}");
    }

    #[test]
    fn small_table_runs_are_clean() {
        let b = Budget { instances: 100, queries: 0, seed: 1 };
        assert!(misra_gries_bounds(&b).unwrap().iter().all(|r| r.pass));
        assert!(space_accounting(&b).unwrap().iter().all(|r| r.pass));
    }

    #[test]
    fn small_walk_suites_run() {
        let recs = perfect_directed(Algorithm::Wr, &small(2)).unwrap();
        assert_eq!(recs.len(), 2);
        let recs = self_loop_pipeline(&small(3)).unwrap();
        assert_eq!(recs.len(), 3);
    }
}
