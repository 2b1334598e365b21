use treecount::cost_model::{envelope, iteration_cost, CostModel, ModelParams};
use treecount::engine::{EngineKind, ExecConfig};
use treecount::estimator::estimate;
use treecount::oracle::count_exact;
use treecount::synthgen::{generate_erdos_renyi, generate_rmat, random_tree, RmatSpec};
use treecount::TemplateTree;

#[test]
fn mean_of_estimates_is_unbiased() {
    // Star with 3 leaves in a fixed graph; average many independent short runs.
    let g = generate_erdos_renyi(25, 0.2, 31).unwrap();
    let t = TemplateTree::star(3).unwrap();
    let exact = count_exact(&g, &t).unwrap().embeddings as f64;
    let r = estimate(&g, &t, EngineKind::Pruned, 40_000, 12, &ExecConfig::serial()).unwrap();
    assert!(
        (r.estimate - exact).abs() <= 4.0 * r.stderr,
        "{} vs {exact}",
        r.estimate
    );
}

#[test]
fn cost_stays_under_envelope() {
    // A single constant (1 with unit parameters) covers every plan, and the
    // ratio does not grow with k.
    let unit = ModelParams::unit(8.0);
    for (n, m) in [(1000, 1000), (1000, 4000), (1000, 25_000)] {
        let mut worst = [0.0f64; 13];
        for seed in 0..400 {
            let k = 2 + (seed as usize % 11);
            let plan = random_tree(k, seed).unwrap().partition();
            let ratio = iteration_cost(&plan, n, m, CostModel::Pgbsc, &unit) / envelope(k, n, m);
            assert!(ratio > 0.0 && ratio <= 1.0, "k={k}, m={m}: ratio {ratio}");
            worst[k] = worst[k].max(ratio);
        }
        let small = worst[2..=8].iter().cloned().fold(0.0, f64::max);
        let large = worst[9..=12].iter().cloned().fold(0.0, f64::max);
        assert!(large <= small, "m={m}: {worst:?}");
    }
}

#[test]
fn rmat_skew_controls_max_degree() {
    let (scale, edges) = (12, 40_000);
    let n = 1usize << scale;
    let er = generate_erdos_renyi(n, 2.0 * edges as f64 / (n * n) as f64, 5).unwrap();
    let er_max = er.degree_stats().max_degree as f64;
    let uniform = generate_rmat(&RmatSpec::uniform(scale, edges, 5)).unwrap();
    let skewed = generate_rmat(&RmatSpec::graph500(scale, edges, 5)).unwrap();
    let u_max = uniform.degree_stats().max_degree as f64;
    let s_max = skewed.degree_stats().max_degree as f64;
    assert!(u_max <= 3.0 * er_max, "uniform {u_max} vs ER {er_max}");
    assert!(s_max >= 5.0 * er_max, "skewed {s_max} vs ER {er_max}");
    let mut prev = 0;
    for level in [0, 4, 8] {
        let g = generate_rmat(&RmatSpec::skewed(scale, edges, level, 5).unwrap()).unwrap();
        let max = g.degree_stats().max_degree;
        assert!(max > prev, "level {level}");
        prev = max;
    }
}
