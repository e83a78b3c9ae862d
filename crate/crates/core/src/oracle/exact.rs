use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::DenseGraph;
use crate::error::{Error, Result};
use crate::stream::{VertexId, Walk};

/// Largest number of enumerated outcomes before [`exact_distribution`] gives up.
pub const ENUMERATION_GUARD: usize = 1_000_000;

fn ratio(a: u64, b: u64) -> BigRational {
    BigRational::new(BigInt::from(a), BigInt::from(b))
}

/// Exact probabilities of every outcome, `Walk::Fail` included.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct WalkDistribution {
    probs: BTreeMap<Walk, BigRational>,
}

impl WalkDistribution {
    fn add(&mut self, w: Walk, p: BigRational) {
        if p.is_zero() {
            return;
        }
        *self.probs.entry(w).or_insert_with(BigRational::zero) += p;
    }

    pub fn probability(&self, w: &Walk) -> BigRational {
        self.probs.get(w).cloned().unwrap_or_else(BigRational::zero)
    }

    pub fn fail_mass(&self) -> BigRational {
        self.probability(&Walk::Fail)
    }

    pub fn total(&self) -> BigRational {
        self.probs.values().fold(BigRational::zero(), |a, b| a + b)
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Walk, &BigRational)> {
        self.probs.iter()
    }

    pub fn to_f64(&self) -> HashMap<Walk, f64> {
        self.probs.iter().map(|(w, p)| (w.clone(), p.to_f64().unwrap_or(0.0))).collect()
    }

    /// Distribution of the final vertex, failures mapped to `None`.
    pub fn endpoints(&self) -> HashMap<Option<VertexId>, BigRational> {
        let mut out: HashMap<Option<VertexId>, BigRational> = HashMap::new();
        for (w, p) in &self.probs {
            *out.entry(w.last()).or_insert_with(BigRational::zero) += p;
        }
        out
    }
}

/// Exact `t`-step walk distribution from `v0`.
///
/// A walk that reaches a vertex of degree zero before its last step fails,
/// as does every walk from a start of degree zero.
pub fn exact_distribution(g: &DenseGraph, v0: VertexId, t: usize) -> Result<WalkDistribution> {
    sketch_walk_distribution(g, g, usize::MAX, v0, t)
}

/// Exact output distribution of the undirected walker for a fixed
/// important-arc multiset.
///
/// `important` holds `f_1(u, v)`. A step of the walk along `(u, v)` is an
/// unimportant departure with probability `f_0(u, v) / f(u, v)`,
/// independently per step; a walk is returned iff no vertex makes more than
/// `c` unimportant departures, so `P[w] = RW(w) · Π_u P[departures(u) <= c]`.
/// With `important == g` this is the exact walk distribution.
pub fn sketch_walk_distribution(
    g: &DenseGraph,
    important: &DenseGraph,
    c: usize,
    v0: VertexId,
    t: usize,
) -> Result<WalkDistribution> {
    let mut dist = WalkDistribution::default();
    let start = v0.index();
    if start >= g.n() || g.degree(start) == 0 {
        dist.add(Walk::Fail, BigRational::one());
        return Ok(dist);
    }
    let mut path = vec![start];
    let mut visited = 0usize;
    enumerate(g, important, c, t, &mut path, BigRational::one(), &mut dist, &mut visited)?;
    Ok(dist)
}

#[allow(clippy::too_many_arguments)]
fn enumerate(
    g: &DenseGraph,
    important: &DenseGraph,
    c: usize,
    t: usize,
    path: &mut Vec<usize>,
    p: BigRational,
    dist: &mut WalkDistribution,
    visited: &mut usize,
) -> Result<()> {
    *visited += 1;
    if *visited > ENUMERATION_GUARD {
        return Err(Error::EnumerationGuard { guard: ENUMERATION_GUARD });
    }
    if path.len() == t + 1 {
        let success = success_probability(g, important, c, path);
        let fail = &p * (BigRational::one() - &success);
        dist.add(Walk::Path(path.iter().map(|&v| VertexId(v as u32)).collect()), p * success);
        dist.add(Walk::Fail, fail);
        return Ok(());
    }
    let u = *path.last().expect("path starts non-empty");
    let d = g.degree(u);
    if d == 0 {
        dist.add(Walk::Fail, p);
        return Ok(());
    }
    for (v, f) in g.neighbors(u) {
        path.push(v);
        enumerate(g, important, c, t, path, &p * ratio(f, d), dist, visited)?;
        path.pop();
    }
    Ok(())
}

fn success_probability(g: &DenseGraph, important: &DenseGraph, c: usize, path: &[usize]) -> BigRational {
    if c == usize::MAX {
        return BigRational::one();
    }
    let mut per_vertex: HashMap<usize, Vec<BigRational>> = HashMap::new();
    for step in path.windows(2) {
        let (u, v) = (step[0], step[1]);
        let f = g.f(u, v);
        let f0 = f - important.f(u, v).min(f);
        if f0 > 0 {
            per_vertex.entry(u).or_default().push(ratio(f0, f));
        }
    }
    per_vertex.values().fold(BigRational::one(), |acc, ps| acc * at_most(ps, c))
}

/// `P[Σ Bernoulli(p_i) <= c]` by dynamic programming over the count.
fn at_most(ps: &[BigRational], c: usize) -> BigRational {
    if ps.len() <= c {
        return BigRational::one();
    }
    let mut dp = vec![BigRational::zero(); c + 2];
    dp[0] = BigRational::one();
    for p in ps {
        let q = BigRational::one() - p;
        for k in (0..dp.len()).rev() {
            let stay = &dp[k] * &q;
            let moved = if k > 0 { &dp[k - 1] * p } else { BigRational::zero() };
            dp[k] = if k == c + 1 { &dp[k] + moved } else { stay + moved };
        }
    }
    dp[..=c].iter().fold(BigRational::zero(), |a, b| a + b)
}

/// Exact distribution of the walk's final vertex by `t` transition steps,
/// failures (dead ends, zero-degree start) mapped to `None`.
pub fn endpoint_marginal(g: &DenseGraph, v0: VertexId, t: usize) -> HashMap<Option<VertexId>, BigRational> {
    let n = g.n();
    let mut out = HashMap::new();
    let start = v0.index();
    if start >= n || g.degree(start) == 0 {
        out.insert(None, BigRational::one());
        return out;
    }
    let mut mass = vec![BigRational::zero(); n];
    mass[start] = BigRational::one();
    let mut fail = BigRational::zero();
    for _ in 0..t {
        let mut next = vec![BigRational::zero(); n];
        for (u, m) in mass.iter().enumerate() {
            if m.is_zero() {
                continue;
            }
            let d = g.degree(u);
            if d == 0 {
                fail += m;
                continue;
            }
            for (v, f) in g.neighbors(u) {
                next[v] += m * ratio(f, d);
            }
        }
        mass = next;
    }
    for (v, p) in mass.into_iter().enumerate() {
        if !p.is_zero() {
            out.insert(Some(VertexId(v as u32)), p);
        }
    }
    if !fail.is_zero() {
        out.insert(None, fail);
    }
    out
}
