//! Exact counting of non-induced tree embeddings by backtracking.
//!
//! Template vertices are mapped in DFS order from the template root, so each
//! vertex after the first only has to be adjacent to the image of its DFS
//! parent. The number of injective edge-preserving maps divided by
//! `|Aut(T)|` is the embedding count.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::template::TemplateTree;

pub const MAX_ORACLE_VERTICES: usize = 50;
pub const MAX_ORACLE_TEMPLATE: usize = 7;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ExactCount {
    pub embeddings: u64,
    pub mappings: u64,
    pub automorphisms: u64,
    #[serde(skip)]
    pub elapsed: Duration,
}

pub fn within_limits(graph: &Graph, template: &TemplateTree) -> bool {
    graph.n() <= MAX_ORACLE_VERTICES && template.k() <= MAX_ORACLE_TEMPLATE
}

pub fn count_exact(graph: &Graph, template: &TemplateTree) -> Result<ExactCount> {
    count_exact_with(graph, template, false)
}

/// `force` skips the size limits.
pub fn count_exact_with(graph: &Graph, template: &TemplateTree, force: bool) -> Result<ExactCount> {
    if !force && !within_limits(graph, template) {
        return Err(Error::OracleLimit(format!(
            "n = {} (max {MAX_ORACLE_VERTICES}), k = {} (max {MAX_ORACLE_TEMPLATE})",
            graph.n(),
            template.k()
        )));
    }
    let started = Instant::now();
    let (order, parent) = dfs_order(template);
    let mut search = Search {
        graph,
        order: &order,
        parent: &parent,
        image: vec![usize::MAX; template.k()],
        used: vec![false; graph.n()],
    };
    let mut mappings = 0u64;
    for v in 0..graph.n() {
        search.image[order[0]] = v;
        search.used[v] = true;
        mappings += search.extend(1);
        search.used[v] = false;
    }
    let automorphisms = template.automorphisms();
    assert_eq!(
        mappings % automorphisms,
        0,
        "mapping count must be a multiple of |Aut(T)|"
    );
    Ok(ExactCount {
        embeddings: mappings / automorphisms,
        mappings,
        automorphisms,
        elapsed: started.elapsed(),
    })
}

/// DFS preorder from the root and each vertex's DFS parent.
fn dfs_order(t: &TemplateTree) -> (Vec<usize>, Vec<usize>) {
    let mut order = Vec::with_capacity(t.k());
    let mut parent = vec![usize::MAX; t.k()];
    let mut stack = vec![(t.root(), usize::MAX)];
    while let Some((v, p)) = stack.pop() {
        order.push(v);
        parent[v] = p;
        for &c in t.neighbors(v).iter().rev() {
            if c != p {
                stack.push((c, v));
            }
        }
    }
    (order, parent)
}

struct Search<'a> {
    graph: &'a Graph,
    order: &'a [usize],
    parent: &'a [usize],
    image: Vec<usize>,
    used: Vec<bool>,
}

impl Search<'_> {
    fn extend(&mut self, depth: usize) -> u64 {
        if depth == self.order.len() {
            return 1;
        }
        let t = self.order[depth];
        let anchor = self.image[self.parent[t]];
        let graph = self.graph;
        if depth + 1 == self.order.len() {
            return graph.neighbors(anchor).iter().filter(|&&u| !self.used[u]).count() as u64;
        }
        let mut total = 0;
        for &u in graph.neighbors(anchor) {
            if self.used[u] {
                continue;
            }
            self.used[u] = true;
            self.image[t] = u;
            total += self.extend(depth + 1);
            self.used[u] = false;
        }
        total
    }
}
