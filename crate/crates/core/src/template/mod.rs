//! Tree templates, their automorphism counts and the recursive
//! active/passive partition that fixes the dynamic-programming order.

mod automorphism;
mod plan;

use std::fs;
use std::path::Path;

use serde::Serialize;

pub use automorphism::automorphism_count;
pub use plan::{partition, PartitionPlan, PlanNode};

use crate::color_index::MAX_COLORS;
use crate::error::{Error, Result};
use crate::graph::parse_pairs;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TemplateTree {
    k: usize,
    edges: Vec<(usize, usize)>,
    root: usize,
    #[serde(skip)]
    adj: Vec<Vec<usize>>,
}

impl TemplateTree {
    /// Validates `edges` as a tree on `0..k`. The root defaults to the vertex
    /// of maximum degree, smallest id on ties.
    pub fn new(k: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        if k == 0 {
            return Err(Error::NotATree("template has no vertices".into()));
        }
        if k > MAX_COLORS {
            return Err(Error::TemplateTooLarge { k, max: MAX_COLORS });
        }
        let mut adj = vec![Vec::new(); k];
        for &(u, v) in &edges {
            if u >= k || v >= k {
                return Err(Error::NotATree(format!("edge ({u}, {v}) outside vertices 0..{k}")));
            }
            if u == v {
                return Err(Error::NotATree(format!("self-loop at {u}")));
            }
            if adj[u].contains(&v) {
                return Err(Error::NotATree(format!("duplicate edge ({u}, {v})")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }

        let mut seen = vec![false; k];
        let mut stack = vec![0];
        seen[0] = true;
        let mut reached = 1;
        while let Some(u) = stack.pop() {
            for &v in &adj[u] {
                if !seen[v] {
                    seen[v] = true;
                    reached += 1;
                    stack.push(v);
                }
            }
        }
        if reached != k {
            return Err(Error::NotATree(format!(
                "disconnected: {reached} of {k} vertices reachable from vertex 0"
            )));
        }
        if edges.len() != k - 1 {
            return Err(Error::NotATree(format!(
                "{} edges on {k} vertices contain a cycle",
                edges.len()
            )));
        }

        let root = (0..k)
            .max_by(|&a, &b| adj[a].len().cmp(&adj[b].len()).then(b.cmp(&a)))
            .unwrap();
        Ok(TemplateTree { k, edges, root, adj })
    }

    pub fn single_vertex() -> Self {
        Self::new(1, Vec::new()).unwrap()
    }

    pub fn path(k: usize) -> Result<Self> {
        Self::new(k, (1..k).map(|v| (v - 1, v)).collect())
    }

    pub fn star(leaves: usize) -> Result<Self> {
        Self::new(leaves + 1, (1..=leaves).map(|l| (0, l)).collect())
    }

    pub fn with_root(mut self, root: usize) -> Result<Self> {
        if root >= self.k {
            return Err(Error::Config(format!(
                "root {root} outside template vertices 0..{}",
                self.k
            )));
        }
        self.root = root;
        Ok(self)
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn root(&self) -> usize {
        self.root
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Sorted neighbors of template vertex `v`.
    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn automorphisms(&self) -> u64 {
        automorphism_count(self)
    }

    pub fn partition(&self) -> PartitionPlan {
        partition(self)
    }

    /// One `u v` line per edge, readable by [`parse_template_str`].
    pub fn to_edge_list_string(&self) -> String {
        self.edges.iter().map(|(u, v)| format!("{u} {v}\n")).collect()
    }
}

/// Reads a template edge list (`u v` per line). An empty file is the
/// single-vertex template.
pub fn parse_template_str(text: &str) -> Result<TemplateTree> {
    let edges: Vec<_> = parse_pairs(text)?.into_iter().map(|(_, e)| e).collect();
    let k = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(1);
    TemplateTree::new(k, edges)
}

pub fn parse_template(path: impl AsRef<Path>) -> Result<TemplateTree> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_template_str(&text)
}
