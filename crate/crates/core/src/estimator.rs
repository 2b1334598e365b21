//! Repeated color-coding iterations scaled to an estimate of the number of
//! non-induced embeddings.
//!
//! A fixed embedding of a `k`-vertex tree is colorful with probability
//! `k! / k^k`, and the dynamic program counts each colorful embedding once
//! per automorphism of the template, so each iteration contributes
//! `rooted_total / (|Aut(T)| * k! / k^k)`.

use std::time::Instant;

use serde::Serialize;

use crate::engine::{Counters, Engine, EngineKind, ExecConfig, PreparedPlan};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::table::random_coloring;
use crate::template::TemplateTree;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimateResult {
    pub engine: EngineKind,
    pub k: usize,
    pub seed: u64,
    pub iterations: usize,
    pub rooted_totals: Vec<f64>,
    pub colorful_probability: f64,
    pub automorphisms: u64,
    pub estimate: f64,
    /// Standard error of the mean of the per-iteration estimates.
    pub stderr: f64,
    pub counters: Counters,
}

impl EstimateResult {
    pub fn scale(&self) -> f64 {
        1.0 / (self.automorphisms as f64 * self.colorful_probability)
    }

    /// Per-iteration estimates.
    pub fn samples(&self) -> impl Iterator<Item = f64> + '_ {
        let scale = self.scale();
        self.rooted_totals.iter().map(move |t| t * scale)
    }
}

/// Wall-clock breakdown, kept apart from the deterministic result.
#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Timing {
    pub total_seconds: f64,
    pub iteration_seconds: Vec<f64>,
    /// Summed over iterations, indexed by plan node id.
    pub node_seconds: Vec<f64>,
}

/// `k! / k^k`.
pub fn colorful_probability(k: usize) -> f64 {
    (1..=k).map(|i| i as f64 / k as f64).product()
}

/// Iterations sufficient for an (epsilon, delta)-approximation:
/// `ceil(e^k * ln(1/delta) / epsilon^2)`.
pub fn required_iterations(k: usize, epsilon: f64, delta: f64) -> u64 {
    assert!(
        epsilon > 0.0 && delta > 0.0 && delta < 1.0,
        "epsilon > 0, 0 < delta < 1"
    );
    let raw = (k as f64).exp() * (1.0 / delta).ln() / (epsilon * epsilon);
    // Guard against 1.0000000000000002-style round-up of exact integers.
    let nearest = raw.round();
    if (raw - nearest).abs() <= 1e-9 * nearest.max(1.0) {
        nearest as u64
    } else {
        raw.ceil() as u64
    }
}

/// Mean and standard error of the mean (0 for a single sample).
pub fn mean_and_stderr(samples: &[f64]) -> (f64, f64) {
    let n = samples.len();
    if n == 0 {
        return (0.0, 0.0);
    }
    let mean = samples.iter().sum::<f64>() / n as f64;
    if n == 1 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
    (mean, (var / n as f64).sqrt())
}

pub fn estimate(
    graph: &Graph,
    template: &TemplateTree,
    engine: EngineKind,
    iterations: usize,
    seed: u64,
    config: &ExecConfig,
) -> Result<EstimateResult> {
    estimate_timed(graph, template, engine, iterations, seed, config).map(|(r, _)| r)
}

/// Like [`estimate`], also returning wall-clock timings. Iteration `i` uses
/// the coloring seeded with `seed + i`.
pub fn estimate_timed(
    graph: &Graph,
    template: &TemplateTree,
    kind: EngineKind,
    iterations: usize,
    seed: u64,
    config: &ExecConfig,
) -> Result<(EstimateResult, Timing)> {
    if iterations == 0 {
        return Err(Error::Config("iterations must be at least 1".into()));
    }
    let prepared = PreparedPlan::new(template)?;
    let engine = Engine::new(kind, config.clone())?;
    engine.check_budget(&prepared, graph.n())?;

    let k = template.k();
    let started = Instant::now();
    let mut timing = Timing {
        node_seconds: vec![0.0; prepared.plan().nodes.len()],
        ..Default::default()
    };
    let mut rooted_totals = Vec::with_capacity(iterations);
    let mut counters = Counters::default();
    for i in 0..iterations {
        let iter_start = Instant::now();
        let coloring = random_coloring(graph.n(), k, seed.wrapping_add(i as u64));
        let result = engine.run_iteration(graph, &prepared, &coloring)?;
        rooted_totals.push(result.rooted_total);
        counters += result.counters;
        for (acc, s) in timing.node_seconds.iter_mut().zip(&result.node_seconds) {
            *acc += s;
        }
        timing.iteration_seconds.push(iter_start.elapsed().as_secs_f64());
    }
    timing.total_seconds = started.elapsed().as_secs_f64();

    let mut result = EstimateResult {
        engine: kind,
        k,
        seed,
        iterations,
        rooted_totals,
        colorful_probability: colorful_probability(k),
        automorphisms: template.automorphisms(),
        estimate: 0.0,
        stderr: 0.0,
        counters,
    };
    let samples: Vec<f64> = result.samples().collect();
    (result.estimate, result.stderr) = mean_and_stderr(&samples);
    Ok((result, timing))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn k3() -> Graph {
        Graph::from_edges(3, [(0, 1), (1, 2), (0, 2)]).unwrap()
    }

    #[test]
    fn required_iterations_examples() {
        assert_eq!(required_iterations(0, 1.0, (-1.0f64).exp()), 1);
        assert_eq!(required_iterations(5, 0.1, 0.1), 34174);
        let a = required_iterations(8, 0.2, 0.05) as f64;
        let b = required_iterations(8, 0.4, 0.05) as f64;
        assert!((a / b - 4.0).abs() < 1e-3);
    }

    #[test]
    fn colorful_probability_values() {
        assert_eq!(colorful_probability(1), 1.0);
        assert_eq!(colorful_probability(2), 0.5);
        assert!((colorful_probability(3) - 6.0 / 27.0).abs() < 1e-15);
    }

    #[test]
    fn single_vertex_template_counts_vertices() {
        let r = estimate(
            &k3(),
            &TemplateTree::single_vertex(),
            EngineKind::Pruned,
            5,
            1,
            &ExecConfig::serial(),
        )
        .unwrap();
        assert!(r.rooted_totals.iter().all(|&t| t == 3.0));
        assert_eq!(r.estimate, 3.0);
        assert_eq!(r.stderr, 0.0);
    }

    #[test]
    fn edge_template_on_triangle() {
        let t = TemplateTree::path(2).unwrap();
        for engine in EngineKind::ALL {
            let r = estimate(&k3(), &t, engine, 10_000, 77, &ExecConfig::serial()).unwrap();
            assert!((r.estimate - 3.0).abs() / 3.0 < 0.1, "{engine}: {}", r.estimate);
        }
    }

    #[test]
    fn three_path_on_triangle() {
        let t = TemplateTree::path(3).unwrap();
        let r = estimate(&k3(), &t, EngineKind::Vectorized, 100_000, 5, &ExecConfig::serial()).unwrap();
        assert!((r.estimate - 3.0).abs() / 3.0 < 0.1, "{}", r.estimate);
    }

    #[test]
    fn deterministic_given_seed() {
        let g = crate::synthgen::generate_erdos_renyi(40, 0.2, 9).unwrap();
        let t = TemplateTree::path(4).unwrap();
        let a = estimate(&g, &t, EngineKind::Baseline, 20, 3, &ExecConfig::serial()).unwrap();
        let b = estimate(&g, &t, EngineKind::Baseline, 20, 3, &ExecConfig::serial()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn zero_iterations_rejected() {
        let t = TemplateTree::path(2).unwrap();
        assert!(estimate(&k3(), &t, EngineKind::Baseline, 0, 0, &ExecConfig::serial()).is_err());
    }

    #[test]
    fn memory_refusal_propagates() {
        let t = TemplateTree::path(3).unwrap();
        let config = ExecConfig {
            mem_budget: Some(16),
            ..ExecConfig::serial()
        };
        let err = estimate(&k3(), &t, EngineKind::Vectorized, 1, 0, &config).unwrap_err();
        assert!(err.is_resource_refusal());
    }
}
