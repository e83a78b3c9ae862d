use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Per-vertex sample budget for the undirected walker.
///
/// With `delta = epsilon / (2t)` and `q = 2 + log2(1/delta) / sqrt(t)`, the
/// capacity is `C = ceil(4 * sqrt(t) * q / log2(q))`. That choice makes
/// `(e * t / C^2)^C < delta`, which bounds the probability that any single
/// vertex runs out of unimportant samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Capacity {
    pub t: u64,
    pub epsilon: f64,
    pub delta: f64,
    pub q: f64,
    pub c: usize,
}

impl Capacity {
    pub fn new(t: u64, epsilon: f64) -> Result<Self> {
        if t == 0 {
            return Err(Error::InvalidParameter("t must be at least 1".into()));
        }
        if !(epsilon > 0.0 && epsilon <= 1.0) {
            return Err(Error::InvalidParameter(format!("epsilon must lie in (0, 1], got {epsilon}")));
        }
        let delta = epsilon / (2.0 * t as f64);
        let root = (t as f64).sqrt();
        let q = 2.0 + (1.0 / delta).log2() / root;
        let c = (4.0 * root * q / q.log2()).ceil() as usize;
        let cap = Capacity { t, epsilon, delta, q, c };
        if !cap.satisfies_failure_bound() {
            return Err(Error::CapacityBound { t, epsilon, c });
        }
        Ok(cap)
    }

    /// `log2((e * t / C^2)^C)`, evaluated in the log domain.
    pub fn log2_failure_bound(&self) -> f64 {
        let c = self.c as f64;
        c * (std::f64::consts::E * self.t as f64 / (c * c)).log2()
    }

    /// Whether `(e * t / C^2)^C < delta`.
    pub fn satisfies_failure_bound(&self) -> bool {
        self.log2_failure_bound() < self.delta.log2()
    }
}

/// Number of turnstile samplers kept per vertex: `ceil(base + 16 * log2(2t / epsilon))`.
///
/// The directed walker uses `base = 2t`, the undirected one `base = 2C`.
pub fn turnstile_sampler_count(base: usize, t: u64, epsilon: f64) -> usize {
    let extra = 16.0 * (2.0 * t as f64 / epsilon).log2();
    (base as f64 + extra).ceil().max(base as f64) as usize
}
