//! Approximate counting of tree-shaped motifs in large undirected graphs
//! with the color-coding dynamic program.
//!
//! Three interchangeable engines evaluate one color-coding iteration:
//!
//! - [`EngineKind::Baseline`]: vertex-centric, row-major count tables, one
//!   neighbor traversal per color-set split.
//! - [`EngineKind::Pruned`]: neighbor sums of every passive column are
//!   computed once and reused by all splits sharing that column.
//! - [`EngineKind::Vectorized`]: the pruned schedule expressed as batched
//!   sparse-matrix x dense-matrix products and element-wise
//!   multiply-accumulate over column-major tables.
//!
//! [`oracle::count_exact`] provides brute-force ground truth for small
//! instances, [`cost_model`] predicts per-iteration work, and [`synthgen`]
//! produces synthetic workloads.

pub mod cli;
pub mod color_index;
pub mod cost_model;
pub mod engine;
mod error;
pub mod estimator;
pub mod graph;
pub mod kernels;
pub mod oracle;
pub mod synthgen;
pub mod table;
pub mod template;

pub use color_index::{ColorIndexer, SplitTable, MAX_COLORS};
pub use engine::{Counters, Engine, EngineKind, ExecConfig, IterationResult, PreparedPlan};
pub use error::{Error, Result};
pub use estimator::{estimate, required_iterations, EstimateResult};
pub use graph::{Csc, Graph};
pub use table::{Coloring, CountTable, Layout};
pub use template::{PartitionPlan, PlanNode, TemplateTree};
