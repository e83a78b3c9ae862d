//! Turnstile-model sketches and walkers.
//!
//! Both walkers keep `C'` independent ℓ1 samplers per vertex over the
//! vertex's out-arc multiplicity vector. Successful sampler outputs play the
//! role of the with-replacement samples of the insertion-only walkers; they
//! are consumed in sampler order, skipping failed samplers.

mod heavy_hitter;
mod l1_sampler;
mod walkers;

pub use heavy_hitter::HeavyHitter;
pub use l1_sampler::{L1Sampler, L1SamplerConfig};
pub use walkers::{TurnstileDirectedBuilder, TurnstileParams, TurnstileUndirectedBuilder};

/// Universe for per-vertex samplers: `n`, padded to `ceil(1/epsilon)` when
/// `epsilon < 1/n`.
pub fn sampler_universe(n: usize, epsilon: f64) -> u64 {
    if epsilon < 1.0 / n as f64 {
        ((1.0 / epsilon).ceil() as u64).max(n as u64)
    } else {
        n as u64
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn padding_only_for_small_epsilon() {
        assert_eq!(sampler_universe(6, 0.25), 6);
        assert_eq!(sampler_universe(6, 0.01), 100);
    }
}
