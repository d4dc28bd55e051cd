//! Benchmark fixtures live in the bench targets.
