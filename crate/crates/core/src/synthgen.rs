//! Reproducible synthetic workloads: R-MAT and Erdős–Rényi graphs, random
//! trees, and the built-in benchmark template shapes.
//!
//! All randomness comes from `ChaCha8Rng::seed_from_u64(seed)`.
//!
//! R-MAT skew ladder used for `RmatSpec::skewed(level)`, `level` in `0..=8`:
//!
//! | level | a      | b = c    | d     |
//! |-------|--------|----------|-------|
//! | 0     | 0.25   | 0.25     | 0.25  |
//! | 3     | 0.4375 | 0.19375  | 0.175 |
//! | 5     | 0.5625 | 0.15625  | 0.125 |
//! | 8     | 0.75   | 0.1      | 0.05  |
//!
//! i.e. `a = 0.25 + 0.0625 * level`, `d = 0.25 - 0.025 * level`,
//! `b = c = (1 - a - d) / 2`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::template::TemplateTree;

pub const MAX_RMAT_SCALE: u32 = 26;
pub const MAX_SKEW_LEVEL: u32 = 8;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RmatSpec {
    pub scale: u32,
    /// Edges drawn before deduplication.
    pub edges: usize,
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub seed: u64,
}

impl RmatSpec {
    pub fn new(scale: u32, edges: usize, probs: [f64; 4], seed: u64) -> Self {
        let [a, b, c, d] = probs;
        RmatSpec {
            scale,
            edges,
            a,
            b,
            c,
            d,
            seed,
        }
    }

    /// Graph500 quadrant probabilities (0.57, 0.19, 0.19, 0.05).
    pub fn graph500(scale: u32, edges: usize, seed: u64) -> Self {
        Self::new(scale, edges, [0.57, 0.19, 0.19, 0.05], seed)
    }

    pub fn uniform(scale: u32, edges: usize, seed: u64) -> Self {
        Self::new(scale, edges, [0.25; 4], seed)
    }

    /// Rung `level` of the skew ladder (see module docs).
    pub fn skewed(scale: u32, edges: usize, level: u32, seed: u64) -> Result<Self> {
        Ok(Self::new(scale, edges, skew_ladder(level)?, seed))
    }

    pub fn validate(&self) -> Result<()> {
        let probs = [self.a, self.b, self.c, self.d];
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) {
            return Err(Error::Config(format!("R-MAT probabilities {probs:?} outside [0, 1]")));
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > 1e-9 {
            return Err(Error::Config(format!("R-MAT probabilities sum to {total}, not 1")));
        }
        if self.scale > MAX_RMAT_SCALE {
            return Err(Error::Config(format!(
                "R-MAT scale {} above {MAX_RMAT_SCALE}",
                self.scale
            )));
        }
        Ok(())
    }
}

pub fn skew_ladder(level: u32) -> Result<[f64; 4]> {
    if level > MAX_SKEW_LEVEL {
        return Err(Error::Config(format!("skew level {level} above {MAX_SKEW_LEVEL}")));
    }
    let a = 0.25 + 0.0625 * level as f64;
    let d = 0.25 - 0.025 * level as f64;
    let bc = (1.0 - a - d) / 2.0;
    Ok([a, bc, bc, d])
}

pub fn generate_rmat(spec: &RmatSpec) -> Result<Graph> {
    spec.validate()?;
    let n = 1usize << spec.scale;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let (ab, abc) = (spec.a + spec.b, spec.a + spec.b + spec.c);
    let edges: Vec<(usize, usize)> = (0..spec.edges)
        .map(|_| {
            let (mut u, mut v) = (0usize, 0usize);
            for _ in 0..spec.scale {
                let r: f64 = rng.random();
                let (du, dv) = if r < spec.a {
                    (0, 0)
                } else if r < ab {
                    (0, 1)
                } else if r < abc {
                    (1, 0)
                } else {
                    (1, 1)
                };
                u = (u << 1) | du;
                v = (v << 1) | dv;
            }
            (u, v)
        })
        .collect();
    Graph::from_edges(n, edges)
}

/// G(n, p) with geometric skipping over the lower triangle, so the cost is
/// proportional to the number of edges produced.
pub fn generate_erdos_renyi(n: usize, p: f64, seed: u64) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::Config(format!("edge probability {p} outside [0, 1]")));
    }
    let mut edges = Vec::new();
    if p >= 1.0 {
        for v in 1..n {
            edges.extend((0..v).map(|w| (v, w)));
        }
    } else if p > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let log_q = (1.0 - p).ln();
        let (mut v, mut w) = (1usize, -1i64);
        while v < n {
            let r: f64 = rng.random();
            w += 1 + ((1.0 - r).ln() / log_q).floor() as i64;
            while w >= v as i64 && v < n {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                edges.push((v, w as usize));
            }
        }
    }
    Graph::from_edges(n, edges)
}

/// Uniformly random labeled tree on `k` vertices (Prüfer decoding).
pub fn random_tree(k: usize, seed: u64) -> Result<TemplateTree> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let edges = match k {
        0 => return Err(Error::NotATree("template has no vertices".into())),
        1 => Vec::new(),
        2 => vec![(0, 1)],
        _ => {
            let code: Vec<usize> = (0..k - 2).map(|_| rng.random_range(0..k)).collect();
            prufer_edges(k, &code)
        }
    };
    TemplateTree::new(k, edges)
}

fn prufer_edges(k: usize, code: &[usize]) -> Vec<(usize, usize)> {
    let mut degree = vec![1usize; k];
    for &c in code {
        degree[c] += 1;
    }
    let mut edges = Vec::with_capacity(k - 1);
    for &c in code {
        let leaf = (0..k).find(|&v| degree[v] == 1).unwrap();
        edges.push((leaf.min(c), leaf.max(c)));
        degree[leaf] -= 1;
        degree[c] -= 1;
    }
    let rest: Vec<usize> = (0..k).filter(|&v| degree[v] == 1).collect();
    edges.push((rest[0], rest[1]));
    edges
}

/// A spine `0..spine` with one leg hanging off each listed spine vertex.
fn caterpillar(spine: usize, legs_at: &[usize]) -> TemplateTree {
    let mut edges: Vec<(usize, usize)> = (1..spine).map(|v| (v - 1, v)).collect();
    for (i, &s) in legs_at.iter().enumerate() {
        edges.push((s, spine + i));
    }
    TemplateTree::new(spine + legs_at.len(), edges).expect("caterpillar is a tree")
}

/// Complete binary tree on `k` vertices in heap order.
fn binary_tree(k: usize) -> TemplateTree {
    TemplateTree::new(k, (1..k).map(|v| ((v - 1) / 2, v)).collect()).expect("heap tree")
}

/// Spider: a center with legs of the given lengths.
fn spider(legs: &[usize]) -> TemplateTree {
    let mut edges = Vec::new();
    let mut next = 1;
    for &len in legs {
        let mut prev = 0;
        for _ in 0..len {
            edges.push((prev, next));
            prev = next;
            next += 1;
        }
    }
    TemplateTree::new(next, edges).expect("spider is a tree")
}

/// Names of the built-in benchmark templates, smallest first.
pub const TEMPLATE_NAMES: [&str; 13] = [
    "u3", "u5", "u7", "u10-1", "u10-2", "u12-1", "u12-2", "u13", "u14", "u15-1", "u15-2", "u16", "u17",
];

pub fn builtin_template(name: &str) -> Option<TemplateTree> {
    let t = match name {
        "u3" => TemplateTree::path(3).ok()?,
        "u5" => TemplateTree::path(5).ok()?,
        "u7" => caterpillar(5, &[1, 3]),
        "u10-1" => TemplateTree::path(10).ok()?,
        "u10-2" => caterpillar(6, &[1, 2, 3, 4]),
        "u12-1" => caterpillar(8, &[1, 3, 4, 6]),
        "u12-2" => spider(&[3, 3, 3, 2]),
        "u13" => caterpillar(9, &[1, 3, 5, 7]),
        "u14" => caterpillar(10, &[1, 3, 6, 8]),
        "u15-1" => caterpillar(10, &[1, 2, 4, 6, 8]),
        "u15-2" => binary_tree(15),
        "u16" => caterpillar(11, &[1, 3, 5, 7, 9]),
        "u17" => caterpillar(12, &[1, 3, 5, 8, 10]),
        _ => return None,
    };
    Some(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn assert_simple(g: &Graph) {
        for v in 0..g.n() {
            assert!(!g.neighbors(v).contains(&v));
            for &u in g.neighbors(v) {
                assert!(g.has_edge(u, v));
            }
        }
    }

    #[test]
    fn rmat_bounds_and_determinism() {
        let spec = RmatSpec::graph500(2, 4, 11);
        let g = generate_rmat(&spec).unwrap();
        assert_eq!(g.n(), 4);
        assert!(g.m() <= 4);
        assert_simple(&g);
        let big = RmatSpec::graph500(10, 8 << 10, 5);
        let g1 = generate_rmat(&big).unwrap();
        let g2 = generate_rmat(&big).unwrap();
        assert_eq!(g1, g2);
        assert_simple(&g1);
    }

    #[test]
    fn rmat_rejects_bad_specs() {
        assert!(generate_rmat(&RmatSpec::new(4, 10, [0.5, 0.5, 0.5, 0.0], 0)).is_err());
        assert!(generate_rmat(&RmatSpec::uniform(27, 10, 0)).is_err());
        assert!(skew_ladder(9).is_err());
    }

    #[test]
    fn skew_ladder_is_monotone() {
        let mut prev = skew_ladder(0).unwrap();
        assert_eq!(prev, [0.25; 4]);
        for level in 1..=MAX_SKEW_LEVEL {
            let p = skew_ladder(level).unwrap();
            assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            assert!(p[0] > prev[0] && p[3] < prev[3]);
            prev = p;
        }
    }

    #[test]
    fn erdos_renyi_extremes() {
        let empty = generate_erdos_renyi(10, 0.0, 1).unwrap();
        assert_eq!(empty.m(), 0);
        let k4 = generate_erdos_renyi(4, 1.0, 1).unwrap();
        assert_eq!(k4.m(), 6);
        assert!(generate_erdos_renyi(4, 1.5, 1).is_err());
    }

    #[test]
    fn erdos_renyi_edge_count_within_three_sigma() {
        let (n, p) = (100usize, 0.3);
        let pairs = (n * (n - 1) / 2) as f64;
        let sigma = (pairs * p * (1.0 - p)).sqrt();
        for seed in 0..5 {
            let g = generate_erdos_renyi(n, p, seed).unwrap();
            assert_simple(&g);
            assert!((g.m() as f64 - p * pairs).abs() <= 3.0 * sigma, "m = {}", g.m());
        }
        assert_eq!(
            generate_erdos_renyi(n, p, 3).unwrap(),
            generate_erdos_renyi(n, p, 3).unwrap()
        );
    }

    #[test]
    fn random_trees_are_valid() {
        for k in 1..=15 {
            for seed in 0..20 {
                let t = random_tree(k, seed).unwrap();
                assert_eq!(t.k(), k);
            }
        }
    }

    #[test]
    fn builtin_templates_have_named_sizes() {
        for name in TEMPLATE_NAMES {
            let t = builtin_template(name).unwrap();
            let size: usize = name[1..].split('-').next().unwrap().parse().unwrap();
            assert_eq!(t.k(), size, "{name}");
        }
        assert!(builtin_template("u99").is_none());
    }
}
