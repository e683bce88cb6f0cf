//! Differentially private frequent graph-pattern mining.
//!
//! The engine samples patterns from an exponential-mechanism target
//! distribution by running a Metropolis-Hastings random walk over the space
//! of connected labeled subgraph patterns, classifying each state's
//! neighborhood with as few subgraph-isomorphism tests as possible. The crate
//! also ships the exact (non-private) miner used to derive thresholds and
//! ground truth, synthetic dataset generators, convergence diagnostics, and
//! evaluation metrics.
//!
//! Module map:
//! - [`graph`], [`pattern`], [`canon`], [`dataset`]: labeled graphs, canonical
//!   codes, datasets and their on-disk format.
//! - [`iso`]: subgraph isomorphism and support counting.
//! - [`neighborhood`]: pattern-space neighborhoods and the frequentness
//!   classification strategies (`naive`, `basic`, `een`).
//! - [`sampler`]: the private top-k mining walk.
//! - [`diagnostics`]: Geweke convergence testing.
//! - [`privacy`]: Laplace noise, exponential-mechanism weights, and analytic
//!   privacy/utility bound calculators.
//! - [`miner`]: exact level-wise mining and toy-space enumeration oracles.
//! - [`harness`]: dataset generators, fixtures, metrics, and the neighbor
//!   exploration benchmark driver.

pub mod bitset;
pub mod canon;
pub mod dataset;
pub mod diagnostics;
pub mod graph;
pub mod harness;
pub mod iso;
pub mod miner;
pub mod neighborhood;
pub mod pattern;
pub mod privacy;
pub mod sampler;

pub use bitset::GidSet;
pub use dataset::{parse_dataset, write_dataset, GraphDataset, ParseError};
pub use graph::{LabeledGraph, RuleSet};
pub use iso::{Mapping, Matcher, SupportRecord};
pub use pattern::Pattern;
