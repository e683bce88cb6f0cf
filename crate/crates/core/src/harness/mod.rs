//! Benchmark harness: synthetic dataset generators, the hand-built fixture
//! used across the test suite, evaluation metrics, and the neighbor
//! exploration benchmark driver.

pub mod bench;
pub mod eval;
pub mod generate;

pub use bench::{bench_neighbors, BenchError, BenchParams, BenchReport, BenchRow};
pub use eval::{evaluate, tv_distance, EvalError, EvalReport, PatternEval};
pub use generate::{fixture_fig1, gen_click, gen_dense, ClickParams, DenseParams, GenError};
