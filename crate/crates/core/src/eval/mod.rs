//! Exact-span scoring and the training-size benchmark.

mod benchmark;
mod score;

pub use benchmark::{run_disambiguation_benchmark, BenchmarkData, BenchmarkRow};
pub use score::{score, CuiScore, EvalReport};
