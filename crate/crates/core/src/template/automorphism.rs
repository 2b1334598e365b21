use std::collections::HashMap;

use super::TemplateTree;

/// `|Aut(T)|` via AHU canonical labels rooted at the tree's center.
///
/// For a rooted tree, `aut(v) = prod aut(child) * prod (multiplicity of each
/// isomorphism class among the children)!`. With two centers the tree is
/// split at the central edge, and the halves may additionally be swapped
/// when their canonical labels agree.
pub fn automorphism_count(t: &TemplateTree) -> u64 {
    let k = t.k();
    if k == 1 {
        return 1;
    }
    let mut labels = Labels::default();
    match centers(t) {
        (c, None) => labels.rooted(t, c, usize::MAX).1,
        (c1, Some(c2)) => {
            let (l1, a1) = labels.rooted(t, c1, c2);
            let (l2, a2) = labels.rooted(t, c2, c1);
            let swap = if l1 == l2 { 2 } else { 1 };
            a1 * a2 * swap
        }
    }
}

/// Interns sorted child-label multisets to dense ids.
#[derive(Default)]
struct Labels {
    ids: HashMap<Vec<usize>, usize>,
}

impl Labels {
    /// Returns `(canonical label, automorphisms fixing v)` for the subtree at
    /// `v` hanging away from `parent`.
    fn rooted(&mut self, t: &TemplateTree, v: usize, parent: usize) -> (usize, u64) {
        let mut children: Vec<(usize, u64)> = t
            .neighbors(v)
            .iter()
            .filter(|&&c| c != parent)
            .map(|&c| self.rooted(t, c, v))
            .collect();
        children.sort_unstable();

        let mut aut: u64 = children.iter().map(|&(_, a)| a).product();
        for group in children.chunk_by(|a, b| a.0 == b.0) {
            aut *= factorial(group.len());
        }
        let key: Vec<usize> = children.iter().map(|&(l, _)| l).collect();
        let next = self.ids.len();
        let label = *self.ids.entry(key).or_insert(next);
        (label, aut)
    }
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

/// Center(s) of the tree by repeatedly stripping leaves.
fn centers(t: &TemplateTree) -> (usize, Option<usize>) {
    let k = t.k();
    let mut degree: Vec<usize> = (0..k).map(|v| t.neighbors(v).len()).collect();
    let mut layer: Vec<usize> = (0..k).filter(|&v| degree[v] <= 1).collect();
    let mut remaining = k;
    while remaining > 2 {
        remaining -= layer.len();
        let mut next = Vec::new();
        for &leaf in &layer {
            for &u in t.neighbors(leaf) {
                degree[u] -= 1;
                if degree[u] == 1 {
                    next.push(u);
                }
            }
        }
        layer = next;
    }
    match layer[..] {
        [c] => (c, None),
        [a, b] => (a.min(b), Some(a.max(b))),
        _ => unreachable!("a tree has one or two centers"),
    }
}
