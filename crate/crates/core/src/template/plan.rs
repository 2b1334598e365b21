use serde::Serialize;

use super::TemplateTree;

/// One rooted sub-template of the partition.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PlanNode {
    pub id: usize,
    /// Template vertices, ascending.
    pub vertices: Vec<usize>,
    pub root: usize,
    pub active: Option<usize>,
    pub passive: Option<usize>,
    /// `(root, tau)`: the edge cut to form the children.
    pub cut: Option<(usize, usize)>,
}

impl PlanNode {
    pub fn size(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_leaf(&self) -> bool {
        self.active.is_none()
    }
}

/// Strict binary decomposition of a template. Node 0 is the full template;
/// `dp_order` is a post-order ending at node 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PartitionPlan {
    pub k: usize,
    pub nodes: Vec<PlanNode>,
    pub dp_order: Vec<usize>,
}

impl PartitionPlan {
    pub fn node(&self, id: usize) -> &PlanNode {
        &self.nodes[id]
    }

    pub fn full(&self) -> &PlanNode {
        &self.nodes[0]
    }

    /// Iterates `(node, active, passive)` for internal nodes in DP order.
    pub fn internal_nodes(&self) -> impl Iterator<Item = (&PlanNode, &PlanNode, &PlanNode)> {
        self.dp_order.iter().filter_map(move |&id| {
            let node = &self.nodes[id];
            Some((node, &self.nodes[node.active?], &self.nodes[node.passive?]))
        })
    }

    /// `(|T_s|, |T_{s,p}|)` of every internal node in DP order.
    pub fn shapes(&self) -> Vec<(usize, usize)> {
        self.internal_nodes().map(|(s, _, p)| (s.size(), p.size())).collect()
    }

    /// Parent of each node, `None` for the full template.
    pub fn parents(&self) -> Vec<Option<usize>> {
        let mut parents = vec![None; self.nodes.len()];
        for node in &self.nodes {
            for child in [node.active, node.passive].into_iter().flatten() {
                parents[child] = Some(node.id);
            }
        }
        parents
    }
}

/// Recursively cuts the edge from each sub-template's root to its
/// smallest-id neighbor inside the sub-template.
pub fn partition(t: &TemplateTree) -> PartitionPlan {
    let mut builder = Builder {
        t,
        nodes: Vec::with_capacity(2 * t.k() - 1),
        dp_order: Vec::with_capacity(2 * t.k() - 1),
    };
    let all: Vec<usize> = (0..t.k()).collect();
    builder.split(all, t.root());
    PartitionPlan {
        k: t.k(),
        nodes: builder.nodes,
        dp_order: builder.dp_order,
    }
}

struct Builder<'a> {
    t: &'a TemplateTree,
    nodes: Vec<PlanNode>,
    dp_order: Vec<usize>,
}

impl Builder<'_> {
    fn split(&mut self, vertices: Vec<usize>, root: usize) -> usize {
        let id = self.nodes.len();
        self.nodes.push(PlanNode {
            id,
            vertices: vertices.clone(),
            root,
            active: None,
            passive: None,
            cut: None,
        });
        if vertices.len() > 1 {
            let tau = *self
                .t
                .neighbors(root)
                .iter()
                .find(|v| vertices.binary_search(v).is_ok())
                .expect("sub-template is connected");
            let passive_set = self.component(&vertices, tau, root);
            let active_set: Vec<usize> = vertices
                .iter()
                .copied()
                .filter(|v| passive_set.binary_search(v).is_err())
                .collect();
            let active = self.split(active_set, root);
            let passive = self.split(passive_set, tau);
            let node = &mut self.nodes[id];
            node.active = Some(active);
            node.passive = Some(passive);
            node.cut = Some((root, tau));
        }
        self.dp_order.push(id);
        id
    }

    /// Vertices of `within` reachable from `start` without stepping onto `blocked`.
    fn component(&self, within: &[usize], start: usize, blocked: usize) -> Vec<usize> {
        let mut out = vec![start];
        let mut stack = vec![(start, blocked)];
        while let Some((u, from)) = stack.pop() {
            for &v in self.t.neighbors(u) {
                if v != from && within.binary_search(&v).is_ok() {
                    out.push(v);
                    stack.push((v, u));
                }
            }
        }
        out.sort_unstable();
        out
    }
}
