//! Test support: seeded oracle samplers, synthetic corpora with ground-truth
//! bookkeeping, and brute-force reference implementations of the analytics.
//!
//! Nothing here is used by the production crates; it exists so that tests
//! can check results against routes that share no code with the engine.

pub mod build;
pub mod fixture;
pub mod oracle;
pub mod pages;
pub mod random;
pub mod samplers;

pub use rand_chacha::ChaCha8Rng;

/// Deterministic RNG for a test seed.
pub fn rng(seed: u64) -> ChaCha8Rng {
    use rand::SeedableRng;
    ChaCha8Rng::seed_from_u64(seed)
}
