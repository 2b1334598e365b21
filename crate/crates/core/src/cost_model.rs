//! Per-node and per-iteration work formulas for the three engines, fitting
//! of their constants from measured runtimes, and the closed-form bounds
//! on the speedup of the linear-algebra engine over the baseline.
//!
//! With `E` the number of stored adjacency nonzeros (`2m`), `k` the template
//! size, `s = |T_s|` and `p = |T_{s,p}|`, one internal node costs
//!
//! - baseline:   `gamma * E * C(k, s) * C(s, p)`
//! - pruned:     `alpha * E * C(k, p) + beta * V * (C(k, s) * C(s, p) + C(k, p))`
//! - vectorized: `alpha * E * C(k, p) + beta * V * C(k, s) * C(s, p)`

use serde::{Deserialize, Serialize};

use crate::engine::EngineKind;
use crate::error::{Error, Result};
use crate::template::PartitionPlan;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CostModel {
    Fascia,
    Pfascia,
    Pgbsc,
}

impl From<EngineKind> for CostModel {
    fn from(kind: EngineKind) -> Self {
        match kind {
            EngineKind::Baseline => CostModel::Fascia,
            EngineKind::Pruned => CostModel::Pfascia,
            EngineKind::Vectorized => CostModel::Pgbsc,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ModelParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    /// Average degree.
    pub d: f64,
}

impl ModelParams {
    pub fn unit(d: f64) -> Self {
        ModelParams {
            alpha: 1.0,
            beta: 1.0,
            gamma: 1.0,
            d,
        }
    }
}

fn binom(a: usize, b: usize) -> f64 {
    if b > a {
        return 0.0;
    }
    let b = b.min(a - b);
    (0..b).fold(1.0, |acc, i| acc * (a - i) as f64 / (i + 1) as f64)
}

/// Coefficients of the model constants for one node: `(alpha, beta)` terms
/// for the pruned and vectorized models, `(gamma, 0)` for the baseline.
/// `passive == 0` denotes a leaf, which costs nothing.
pub fn node_terms(size: usize, passive: usize, k: usize, n: usize, m: usize, model: CostModel) -> (f64, f64) {
    if passive == 0 {
        return (0.0, 0.0);
    }
    let e = 2.0 * m as f64;
    let v = n as f64;
    let combos = binom(k, size) * binom(size, passive);
    let passive_cols = binom(k, passive);
    match model {
        CostModel::Fascia => (e * combos, 0.0),
        CostModel::Pfascia => (e * passive_cols, v * (combos + passive_cols)),
        CostModel::Pgbsc => (e * passive_cols, v * combos),
    }
}

pub fn shape_cost(
    size: usize,
    passive: usize,
    k: usize,
    n: usize,
    m: usize,
    model: CostModel,
    params: &ModelParams,
) -> f64 {
    let (x, y) = node_terms(size, passive, k, n, m, model);
    match model {
        CostModel::Fascia => params.gamma * x,
        CostModel::Pfascia | CostModel::Pgbsc => params.alpha * x + params.beta * y,
    }
}

/// Cost of plan node `id`; zero for leaves.
pub fn node_cost(plan: &PartitionPlan, id: usize, n: usize, m: usize, model: CostModel, params: &ModelParams) -> f64 {
    let node = plan.node(id);
    match node.passive {
        Some(p) => shape_cost(node.size(), plan.node(p).size(), plan.k, n, m, model, params),
        None => 0.0,
    }
}

pub fn iteration_cost(plan: &PartitionPlan, n: usize, m: usize, model: CostModel, params: &ModelParams) -> f64 {
    plan.dp_order
        .iter()
        .map(|&id| node_cost(plan, id, n, m, model, params))
        .sum()
}

/// `E * 2^k + V * k^(-1/2) * 3^k`, the asymptotic per-iteration envelope.
pub fn envelope(k: usize, n: usize, m: usize) -> f64 {
    let k_f = k as f64;
    2.0 * m as f64 * 2f64.powi(k as i32) + n as f64 * 3f64.powi(k as i32) / k_f.sqrt()
}

/// `(lower, upper)` bounds on the runtime ratio baseline / vectorized:
/// `gamma / (alpha * 2/k + beta/d)` and `gamma / (alpha * (2/3)^k + beta/d)`.
pub fn improvement_bounds(params: &ModelParams, k: usize, d: f64) -> (f64, f64) {
    let k_f = k as f64;
    let degree_term = params.beta / d;
    let lower = params.gamma / (params.alpha * 2.0 / k_f + degree_term);
    let upper = params.gamma / (params.alpha * (2.0f64 / 3.0).powi(k as i32) + degree_term);
    (lower, upper)
}

/// One timed iteration: the plan shape `(|T_s|, |T_{s,p}|)` of every
/// internal node, graph size, the engine's model and measured seconds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Measurement {
    pub model: CostModel,
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub shapes: Vec<(usize, usize)>,
    pub seconds: f64,
}

impl Measurement {
    pub fn from_plan(plan: &PartitionPlan, n: usize, m: usize, model: CostModel, seconds: f64) -> Self {
        Measurement {
            model,
            k: plan.k,
            n,
            m,
            shapes: plan.shapes(),
            seconds,
        }
    }

    pub fn terms(&self) -> (f64, f64) {
        self.shapes.iter().fold((0.0, 0.0), |acc, &(s, p)| {
            let (x, y) = node_terms(s, p, self.k, self.n, self.m, self.model);
            (acc.0 + x, acc.1 + y)
        })
    }

    pub fn predict(&self, params: &ModelParams) -> f64 {
        let (x, y) = self.terms();
        match self.model {
            CostModel::Fascia => params.gamma * x,
            _ => params.alpha * x + params.beta * y,
        }
    }
}

/// Non-negative least squares for the two constants of a pruned or
/// vectorized model. Residuals are relative to the measured time, since
/// timing noise scales with the run length.
pub fn fit_two_term(measurements: &[Measurement], model: CostModel) -> Result<(f64, f64)> {
    let rows: Vec<((f64, f64), f64)> = measurements
        .iter()
        .filter(|m| m.model == model && m.seconds > 0.0)
        .map(|m| {
            let (x, y) = m.terms();
            ((x / m.seconds, y / m.seconds), 1.0)
        })
        .collect();
    if rows.len() < 2 {
        return Err(Error::Fit(format!(
            "{model:?} needs at least 2 measurements for 2 constants, got {}",
            rows.len()
        )));
    }
    // Normalize columns so the Gram matrix is O(1).
    let nx = rows.iter().map(|((x, _), _)| x * x).sum::<f64>().sqrt();
    let ny = rows.iter().map(|((_, y), _)| y * y).sum::<f64>().sqrt();
    if nx == 0.0 || ny == 0.0 {
        return Err(Error::Fit(format!("{model:?} measurements have an all-zero cost term")));
    }
    let (mut g11, mut g12, mut g22, mut b1, mut b2, mut tt) = (0.0, 0.0, 0.0, 0.0, 0.0, 0.0);
    for &((x, y), t) in &rows {
        let (x, y) = (x / nx, y / ny);
        g11 += x * x;
        g12 += x * y;
        g22 += y * y;
        b1 += x * t;
        b2 += y * t;
        tt += t * t;
    }
    let det = g11 * g22 - g12 * g12;
    if det < 1e-12 {
        return Err(Error::Fit(format!(
            "{model:?} measurements are rank deficient: vary the average degree or template \
             so the edge and vertex terms are not proportional"
        )));
    }
    let residual = |u: f64, v: f64| tt - 2.0 * (u * b1 + v * b2) + u * u * g11 + 2.0 * u * v * g12 + v * v * g22;
    let u = (g22 * b1 - g12 * b2) / det;
    let v = (g11 * b2 - g12 * b1) / det;
    let (u, v) = if u >= 0.0 && v >= 0.0 {
        (u, v)
    } else {
        let only_u = ((b1 / g11).max(0.0), 0.0);
        let only_v = (0.0, (b2 / g22).max(0.0));
        if residual(only_u.0, only_u.1) <= residual(only_v.0, only_v.1) {
            only_u
        } else {
            only_v
        }
    };
    Ok((u / nx, v / ny))
}

/// Non-negative least squares for the baseline constant, on relative
/// residuals like [`fit_two_term`].
pub fn fit_one_term(measurements: &[Measurement]) -> Result<f64> {
    let rows: Vec<(f64, f64)> = measurements
        .iter()
        .filter(|m| m.model == CostModel::Fascia && m.seconds > 0.0)
        .map(|m| (m.terms().0 / m.seconds, 1.0))
        .collect();
    if rows.len() < 2 {
        return Err(Error::Fit(format!(
            "Fascia needs at least 2 measurements, got {}",
            rows.len()
        )));
    }
    let xx: f64 = rows.iter().map(|(x, _)| x * x).sum();
    if xx == 0.0 {
        return Err(Error::Fit("Fascia measurements have zero cost terms".into()));
    }
    let xt: f64 = rows.iter().map(|(x, t)| x * t).sum();
    Ok((xt / xx).max(0.0))
}

/// Fits `(alpha, beta)` on vectorized-engine rows and `gamma` on baseline
/// rows; `d` is the mean average degree over all rows.
pub fn fit_constants(measurements: &[Measurement]) -> Result<ModelParams> {
    let (alpha, beta) = fit_two_term(measurements, CostModel::Pgbsc)?;
    let gamma = fit_one_term(measurements)?;
    let d = measurements.iter().map(|m| 2.0 * m.m as f64 / m.n as f64).sum::<f64>() / measurements.len() as f64;
    Ok(ModelParams { alpha, beta, gamma, d })
}
