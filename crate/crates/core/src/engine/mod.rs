//! One color-coding iteration over a partition plan.
//!
//! The driver walks `dp_order`, builds leaf tables from the coloring, hands
//! each internal node to the selected strategy and frees both children as
//! soon as their parent is done. Every output entry is written by exactly
//! one worker in a fixed order, so results do not depend on worker count.

mod baseline;
mod pruned;
mod vectorized;

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;
use rayon::ThreadPool;
use serde::{Deserialize, Serialize};

use crate::color_index::{ColorIndexer, SplitTable};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::table::{estimate_bytes, init_leaf_table, Coloring, CountTable, Layout};
use crate::template::{PartitionPlan, TemplateTree};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EngineKind {
    Baseline,
    Pruned,
    Vectorized,
}

impl EngineKind {
    pub const ALL: [EngineKind; 3] = [EngineKind::Baseline, EngineKind::Pruned, EngineKind::Vectorized];

    pub fn layout(self) -> Layout {
        match self {
            EngineKind::Baseline => Layout::RowMajor,
            EngineKind::Pruned | EngineKind::Vectorized => Layout::ColumnMajor,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            EngineKind::Baseline => "baseline",
            EngineKind::Pruned => "pruned",
            EngineKind::Vectorized => "vectorized",
        }
    }
}

impl fmt::Display for EngineKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for EngineKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "baseline" => Ok(EngineKind::Baseline),
            "pruned" => Ok(EngineKind::Pruned),
            "vectorized" => Ok(EngineKind::Vectorized),
            other => Err(Error::Config(format!(
                "unknown engine {other:?} (expected baseline, pruned or vectorized)"
            ))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExecConfig {
    pub workers: usize,
    /// Passive columns per sparse-times-dense batch (vectorized engine).
    pub batch: usize,
    pub mem_budget: Option<u64>,
}

pub const DEFAULT_BATCH: usize = 16;

impl Default for ExecConfig {
    fn default() -> Self {
        ExecConfig {
            workers: std::thread::available_parallelism().map_or(1, |n| n.get()),
            batch: DEFAULT_BATCH,
            mem_budget: None,
        }
    }
}

impl ExecConfig {
    pub fn serial() -> Self {
        ExecConfig {
            workers: 1,
            ..Default::default()
        }
    }
}

/// A partition plan with its color indexer and the split table of every
/// internal node, shared by all iterations.
#[derive(Clone, Debug)]
pub struct PreparedPlan {
    plan: PartitionPlan,
    indexer: ColorIndexer,
    splits: Vec<Option<SplitTable>>,
}

impl PreparedPlan {
    pub fn new(template: &TemplateTree) -> Result<Self> {
        Self::from_plan(template.partition())
    }

    pub fn from_plan(plan: PartitionPlan) -> Result<Self> {
        let indexer = ColorIndexer::new(plan.k)?;
        let splits = plan
            .nodes
            .iter()
            .map(|node| match node.active {
                Some(a) => SplitTable::build(&indexer, node.size(), plan.node(a).size()).map(Some),
                None => Ok(None),
            })
            .collect::<Result<_>>()?;
        Ok(PreparedPlan { plan, indexer, splits })
    }

    pub fn k(&self) -> usize {
        self.plan.k
    }

    pub fn plan(&self) -> &PartitionPlan {
        &self.plan
    }

    pub fn indexer(&self) -> &ColorIndexer {
        &self.indexer
    }

    pub fn split(&self, node: usize) -> Option<&SplitTable> {
        self.splits[node].as_ref()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counters {
    /// Per-vertex walks over a neighbor list.
    pub neighbor_traversals: u64,
    /// Adjacency entries read during those walks.
    pub edge_visits: u64,
    pub flops: u64,
}

impl Counters {
    /// Whole-graph neighbor passes (one per column of neighbor sums).
    pub fn column_passes(&self, n: usize) -> u64 {
        self.neighbor_traversals / n.max(1) as u64
    }
}

impl std::ops::Add for Counters {
    type Output = Counters;

    fn add(self, o: Counters) -> Counters {
        Counters {
            neighbor_traversals: self.neighbor_traversals + o.neighbor_traversals,
            edge_visits: self.edge_visits + o.edge_visits,
            flops: self.flops + o.flops,
        }
    }
}

impl std::ops::AddAssign for Counters {
    fn add_assign(&mut self, o: Counters) {
        *self = *self + o;
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IterationResult {
    pub engine: EngineKind,
    /// Sum over vertices of the full-template table.
    pub rooted_total: f64,
    /// The full-template table (a single column).
    pub full_counts: Vec<f64>,
    /// Wall seconds per plan node, indexed by node id.
    pub node_seconds: Vec<f64>,
    pub counters: Counters,
}

pub struct Engine {
    kind: EngineKind,
    config: ExecConfig,
    pool: Option<ThreadPool>,
}

impl Engine {
    pub fn new(kind: EngineKind, config: ExecConfig) -> Result<Self> {
        if config.workers == 0 {
            return Err(Error::Config("worker count must be at least 1".into()));
        }
        if config.batch == 0 {
            return Err(Error::Config("batch size must be at least 1".into()));
        }
        let pool = if config.workers > 1 {
            Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(config.workers)
                    .build()
                    .map_err(|e| Error::Config(format!("thread pool: {e}")))?,
            )
        } else {
            None
        };
        Ok(Engine { kind, config, pool })
    }

    pub fn kind(&self) -> EngineKind {
        self.kind
    }

    pub fn config(&self) -> &ExecConfig {
        &self.config
    }

    pub fn check_budget(&self, prepared: &PreparedPlan, n: usize) -> Result<u64> {
        let required = estimate_bytes(prepared.plan(), n, prepared.k());
        match self.config.mem_budget {
            Some(budget) if required > budget => Err(Error::MemoryBudget { required, budget }),
            _ => Ok(required),
        }
    }

    pub fn run_iteration(
        &self,
        graph: &Graph,
        prepared: &PreparedPlan,
        coloring: &Coloring,
    ) -> Result<IterationResult> {
        let n = graph.n();
        let k = prepared.k();
        if coloring.len() != n {
            return Err(Error::Config(format!(
                "coloring covers {} vertices, graph has {n}",
                coloring.len()
            )));
        }
        self.check_budget(prepared, n)?;

        let plan = prepared.plan();
        let layout = self.kind.layout();
        let mut tables: Vec<Option<CountTable>> = vec![None; plan.nodes.len()];
        let mut node_seconds = vec![0.0; plan.nodes.len()];
        let mut counters = Counters::default();

        for &id in &plan.dp_order {
            let started = Instant::now();
            let node = plan.node(id);
            let table = match (node.active, node.passive, prepared.split(id)) {
                (Some(a), Some(p), Some(split)) => {
                    let active = tables[a].take().expect("active child table consumed once");
                    let mut passive = tables[p].take().expect("passive child table consumed once");
                    let cols = prepared.indexer().set_count(node.size());
                    let mut out = CountTable::zeros(id, n, cols, layout);
                    counters += match self.kind {
                        EngineKind::Baseline => baseline::compute(self, graph, split, &active, &passive, &mut out),
                        EngineKind::Pruned => pruned::compute(self, graph, split, &active, &mut passive, &mut out),
                        EngineKind::Vectorized => {
                            vectorized::compute(self, graph, split, &active, &mut passive, &mut out)
                        }
                    };
                    out
                }
                _ => init_leaf_table(id, coloring, k, layout),
            };
            debug_assert!(table.all_finite_non_negative(), "node {id} has invalid entries");
            node_seconds[id] = started.elapsed().as_secs_f64();
            tables[id] = Some(table);
        }

        let full = tables[0].take().expect("full template table");
        debug_assert!(tables.iter().all(Option::is_none), "all child tables released");
        let full_counts: Vec<f64> = (0..n).map(|i| full.get(i, 0)).collect();
        let rooted_total = full_counts.iter().sum();
        Ok(IterationResult {
            engine: self.kind,
            rooted_total,
            full_counts,
            node_seconds,
            counters,
        })
    }

    /// Runs `f` on every part, in parallel when a pool is configured.
    fn run_parts<T, F>(&self, parts: Vec<T>, f: F) -> Counters
    where
        T: Send,
        F: Fn(T) -> Counters + Sync + Send,
    {
        match &self.pool {
            Some(pool) if parts.len() > 1 => {
                pool.install(|| parts.into_par_iter().map(&f).reduce(Counters::default, |a, b| a + b))
            }
            _ => parts.into_iter().map(f).fold(Counters::default(), |a, b| a + b),
        }
    }
}

pub fn run_iteration_baseline(
    graph: &Graph,
    prepared: &PreparedPlan,
    coloring: &Coloring,
    config: &ExecConfig,
) -> Result<IterationResult> {
    Engine::new(EngineKind::Baseline, config.clone())?.run_iteration(graph, prepared, coloring)
}

pub fn run_iteration_pruned(
    graph: &Graph,
    prepared: &PreparedPlan,
    coloring: &Coloring,
    config: &ExecConfig,
) -> Result<IterationResult> {
    Engine::new(EngineKind::Pruned, config.clone())?.run_iteration(graph, prepared, coloring)
}

pub fn run_iteration_vectorized(
    graph: &Graph,
    prepared: &PreparedPlan,
    coloring: &Coloring,
    config: &ExecConfig,
) -> Result<IterationResult> {
    Engine::new(EngineKind::Vectorized, config.clone())?.run_iteration(graph, prepared, coloring)
}
