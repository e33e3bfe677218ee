//! Shared fixtures for the benchmarks in `benches/`.

use logitmc::harness::simulate_dataset;
use logitmc::{Dataset, ParamVector, RngStream};

/// Simulated dataset of size `n` at `(0.6, 0.3)`, fixed across runs.
pub fn fixture(n: usize) -> Dataset {
    let mut rng = RngStream::derive(2024, n as u64);
    simulate_dataset(ParamVector::new(0.6, 0.3), n, &mut rng).expect("valid fixture")
}
