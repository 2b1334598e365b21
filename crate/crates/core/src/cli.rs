//! Command implementations behind the `treecount` binary. Each command
//! returns a serializable report; the binary only parses flags, prints and
//! maps errors to exit codes (0 ok, 1 input error, 2 resource refusal).

use std::collections::{BTreeMap, HashMap};
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::cost_model::{fit_constants, fit_two_term, improvement_bounds, CostModel, Measurement, ModelParams};
use crate::engine::{EngineKind, ExecConfig, PreparedPlan};
use crate::error::{Error, Result};
use crate::estimator::{estimate_timed, mean_and_stderr, EstimateResult, Timing};
use crate::graph::{load_edge_list, DegreeStats, Graph};
use crate::oracle::{count_exact_with, within_limits, ExactCount};
use crate::synthgen::{builtin_template, generate_erdos_renyi, generate_rmat, RmatSpec};
use crate::table::{estimate_bytes, CountTable, Layout};
use crate::template::{parse_template, TemplateTree};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 1;
pub const EXIT_RESOURCE: i32 = 2;

pub fn exit_code(err: &Error) -> i32 {
    if err.is_resource_refusal() {
        EXIT_RESOURCE
    } else {
        EXIT_INPUT
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Json,
    Csv,
}

/// A template file path, or the name of a built-in template (`u12-1`, ...)
/// when no such file exists.
pub fn resolve_template(spec: &str, root: Option<usize>) -> Result<TemplateTree> {
    let t = if Path::new(spec).exists() {
        parse_template(spec)?
    } else if let Some(t) = builtin_template(spec) {
        t
    } else {
        parse_template(spec)?
    };
    match root {
        Some(r) => t.with_root(r),
        None => Ok(t),
    }
}

fn spec_fields(body: &str) -> Result<HashMap<String, String>> {
    body.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("expected key=value, got {kv:?}")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

fn field<T: std::str::FromStr>(fields: &HashMap<String, String>, key: &str, default: Option<T>) -> Result<T> {
    match fields.get(key) {
        Some(v) => v
            .parse()
            .map_err(|_| Error::Config(format!("invalid value {v:?} for {key}"))),
        None => default.ok_or_else(|| Error::Config(format!("missing {key}"))),
    }
}

/// An edge-list path, or a generator spec:
/// `rmat:scale=S,edges=E[,skew=L | ,a=..,b=..,c=..,d=..][,seed=X]` or
/// `er:n=N,p=P[,seed=X]`.
pub fn resolve_graph(spec: &str) -> Result<Graph> {
    if let Some(body) = spec.strip_prefix("rmat:") {
        let f = spec_fields(body)?;
        let scale: u32 = field(&f, "scale", None)?;
        let edges: usize = field(&f, "edges", Some(8usize << scale))?;
        let seed: u64 = field(&f, "seed", Some(0))?;
        let rmat = if f.contains_key("skew") {
            RmatSpec::skewed(scale, edges, field(&f, "skew", None)?, seed)?
        } else {
            let a = field(&f, "a", Some(0.57))?;
            let b = field(&f, "b", Some(0.19))?;
            let c = field(&f, "c", Some(0.19))?;
            let d = field(&f, "d", Some(1.0 - a - b - c))?;
            RmatSpec::new(scale, edges, [a, b, c, d], seed)
        };
        generate_rmat(&rmat)
    } else if let Some(body) = spec.strip_prefix("er:") {
        let f = spec_fields(body)?;
        generate_erdos_renyi(
            field(&f, "n", None)?,
            field(&f, "p", None)?,
            field(&f, "seed", Some(0))?,
        )
    } else {
        load_edge_list(spec)
    }
}

#[derive(Clone, Debug)]
pub struct RunConfig {
    pub graph: String,
    pub template: String,
    pub root: Option<usize>,
    pub engine: EngineKind,
    pub iterations: usize,
    pub seed: u64,
    pub exec: ExecConfig,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
    /// Writes the last iteration's full-template table as CSV.
    pub dump_table: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(graph: impl Into<String>, template: impl Into<String>) -> Self {
        RunConfig {
            graph: graph.into(),
            template: template.into(),
            root: None,
            engine: EngineKind::Vectorized,
            iterations: 1,
            seed: 0,
            exec: ExecConfig::default(),
            format: OutputFormat::Json,
            out: None,
            dump_table: None,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GraphSummary {
    pub n: usize,
    pub m: usize,
    #[serde(flatten)]
    pub degrees: DegreeStats,
}

impl From<&Graph> for GraphSummary {
    fn from(g: &Graph) -> Self {
        GraphSummary {
            n: g.n(),
            m: g.m(),
            degrees: g.degree_stats(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CountReport {
    pub graph: GraphSummary,
    pub template_root: usize,
    pub batch: usize,
    pub memory_bytes: u64,
    pub result: EstimateResult,
    pub timing: Timing,
}

impl CountReport {
    /// Running estimate and standard error after each iteration, as CSV.
    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["iteration", "rooted_total", "estimate", "stderr"])?;
        let samples: Vec<f64> = self.result.samples().collect();
        for (i, total) in self.result.rooted_totals.iter().enumerate() {
            let (mean, se) = mean_and_stderr(&samples[..=i]);
            w.write_record([i.to_string(), total.to_string(), mean.to_string(), se.to_string()])?;
        }
        let bytes = w.into_inner().map_err(|e| Error::Config(e.to_string()))?;
        Ok(String::from_utf8(bytes).expect("csv is utf-8"))
    }

    pub fn render(&self, format: OutputFormat) -> Result<String> {
        match format {
            OutputFormat::Json => Ok(serde_json::to_string_pretty(self)? + "\n"),
            OutputFormat::Csv => self.to_csv(),
        }
    }
}

fn write_output(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::io(path, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Error::io("<stdout>", e)),
    }
}

pub fn run_count(cfg: &RunConfig) -> Result<CountReport> {
    if cfg.iterations == 0 {
        return Err(Error::Config("iterations must be at least 1".into()));
    }
    let graph = resolve_graph(&cfg.graph)?;
    let template = resolve_template(&cfg.template, cfg.root)?;
    let (result, timing) = estimate_timed(&graph, &template, cfg.engine, cfg.iterations, cfg.seed, &cfg.exec)?;
    if let Some(path) = &cfg.dump_table {
        let prepared = PreparedPlan::new(&template)?;
        let engine = crate::engine::Engine::new(cfg.engine, cfg.exec.clone())?;
        let last_seed = cfg.seed.wrapping_add(cfg.iterations as u64 - 1);
        let coloring = crate::table::random_coloring(graph.n(), template.k(), last_seed);
        let it = engine.run_iteration(&graph, &prepared, &coloring)?;
        let mut table = CountTable::zeros(0, graph.n(), 1, Layout::ColumnMajor);
        table.column_mut(0).copy_from_slice(&it.full_counts);
        let file = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        table.write_csv(file)?;
    }
    Ok(CountReport {
        graph: GraphSummary::from(&graph),
        template_root: template.root(),
        batch: cfg.exec.batch,
        memory_bytes: estimate_bytes(&template.partition(), graph.n(), template.k()),
        result,
        timing,
    })
}

pub fn cmd_count(cfg: &RunConfig) -> Result<()> {
    let report = run_count(cfg)?;
    write_output(cfg.out.as_deref(), &report.render(cfg.format)?)
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub exact: ExactCount,
    pub estimate: f64,
    pub stderr: f64,
    pub relative_error: f64,
    pub engine: EngineKind,
    pub iterations: usize,
}

pub fn run_verify(
    graph: &Graph,
    template: &TemplateTree,
    engine: EngineKind,
    iterations: usize,
    seed: u64,
    exec: &ExecConfig,
) -> Result<VerifyReport> {
    if !within_limits(graph, template) {
        // Surface the oracle's refusal before spending time on iterations.
        count_exact_with(graph, template, false)?;
    }
    let exact = count_exact_with(graph, template, false)?;
    let (est, _) = estimate_timed(graph, template, engine, iterations, seed, exec)?;
    let relative_error = if exact.embeddings == 0 {
        est.estimate.abs()
    } else {
        (est.estimate - exact.embeddings as f64).abs() / exact.embeddings as f64
    };
    Ok(VerifyReport {
        exact,
        estimate: est.estimate,
        stderr: est.stderr,
        relative_error,
        engine,
        iterations,
    })
}

/// A benchmark grid read from a `key = value` file. `graph`, `template`
/// and `engine` may repeat; `template` and `engine` also accept
/// comma-separated lists. Graph entries are paths or generator specs (see
/// [`resolve_graph`]).
#[derive(Clone, Debug, PartialEq)]
pub struct BenchConfig {
    pub graphs: Vec<String>,
    pub templates: Vec<String>,
    pub engines: Vec<EngineKind>,
    pub iterations: usize,
    pub seed: u64,
    pub exec: ExecConfig,
}

impl BenchConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = BenchConfig {
            graphs: Vec::new(),
            templates: Vec::new(),
            engines: Vec::new(),
            iterations: 1,
            seed: 1,
            exec: ExecConfig::default(),
        };
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let parse_err = |message: String| Error::Parse { line: idx + 1, message };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| parse_err(format!("expected key = value, got {line:?}")))?;
            let value = value.trim();
            let list = || value.split(',').map(str::trim).filter(|s| !s.is_empty());
            let number = |what: &str| -> Result<u64> {
                value
                    .parse()
                    .map_err(|_| parse_err(format!("invalid {what} {value:?}")))
            };
            match key.trim() {
                "graph" | "graphs" => cfg.graphs.push(value.to_string()),
                "template" | "templates" => cfg.templates.extend(list().map(String::from)),
                "engine" | "engines" => {
                    for e in list() {
                        cfg.engines.push(e.parse()?);
                    }
                }
                "iterations" | "iters" => cfg.iterations = number("iterations")? as usize,
                "seed" => cfg.seed = number("seed")?,
                "workers" => cfg.exec.workers = number("workers")? as usize,
                "batch" => cfg.exec.batch = number("batch")? as usize,
                "mem_budget" | "mem-budget" => cfg.exec.mem_budget = Some(number("mem_budget")?),
                other => return Err(parse_err(format!("unknown key {other:?}"))),
            }
        }
        if cfg.graphs.is_empty() || cfg.templates.is_empty() {
            return Err(Error::Config(
                "bench config needs at least one graph and one template".into(),
            ));
        }
        if cfg.engines.is_empty() {
            cfg.engines = EngineKind::ALL.to_vec();
        }
        if cfg.iterations == 0 {
            return Err(Error::Config("iterations must be at least 1".into()));
        }
        Ok(cfg)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        Self::parse(&fs::read_to_string(path).map_err(|e| Error::io(path, e))?)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BenchRow {
    pub dataset: String,
    pub template: String,
    pub engine: EngineKind,
    pub k: usize,
    pub n: usize,
    pub m: usize,
    pub avg_degree: f64,
    pub iterations: usize,
    /// Mean wall seconds per iteration.
    pub seconds: f64,
    /// Mean rooted total per iteration.
    pub rooted_total: f64,
    pub neighbor_traversals: u64,
    pub column_passes: u64,
    pub edge_visits: u64,
    pub flops: u64,
    /// Baseline seconds / this row's seconds, when the grid has a baseline row.
    pub speedup_vs_baseline: Option<f64>,
    /// `size/passive` of each internal plan node, space separated.
    pub plan_shape: String,
}

pub fn format_shapes(shapes: &[(usize, usize)]) -> String {
    shapes
        .iter()
        .map(|(s, p)| format!("{s}/{p}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn parse_shapes(text: &str) -> Result<Vec<(usize, usize)>> {
    text.split_whitespace()
        .map(|tok| {
            let bad = || Error::Config(format!("invalid plan shape entry {tok:?}"));
            let (s, p) = tok.split_once('/').ok_or_else(bad)?;
            Ok((s.parse().map_err(|_| bad())?, p.parse().map_err(|_| bad())?))
        })
        .collect()
}

pub fn run_bench(cfg: &BenchConfig) -> Result<Vec<BenchRow>> {
    let mut rows = Vec::new();
    for dataset in &cfg.graphs {
        let graph = resolve_graph(dataset)?;
        let stats = graph.degree_stats();
        for tspec in &cfg.templates {
            let template = resolve_template(tspec, None)?;
            let shape = format_shapes(&template.partition().shapes());
            let first = rows.len();
            for &engine in &cfg.engines {
                let (result, timing) = estimate_timed(&graph, &template, engine, cfg.iterations, cfg.seed, &cfg.exec)?;
                let iters = cfg.iterations as u64;
                let c = result.counters;
                rows.push(BenchRow {
                    dataset: dataset.clone(),
                    template: tspec.clone(),
                    engine,
                    k: template.k(),
                    n: graph.n(),
                    m: graph.m(),
                    avg_degree: stats.avg_degree,
                    iterations: cfg.iterations,
                    seconds: timing.iteration_seconds.iter().sum::<f64>() / cfg.iterations as f64,
                    rooted_total: result.rooted_totals.iter().sum::<f64>() / cfg.iterations as f64,
                    neighbor_traversals: c.neighbor_traversals / iters,
                    column_passes: c.column_passes(graph.n()) / iters,
                    edge_visits: c.edge_visits / iters,
                    flops: c.flops / iters,
                    speedup_vs_baseline: None,
                    plan_shape: shape.clone(),
                });
            }
            let baseline = rows[first..]
                .iter()
                .find(|r| r.engine == EngineKind::Baseline)
                .map(|r| r.seconds);
            if let Some(base) = baseline {
                for row in &mut rows[first..] {
                    row.speedup_vs_baseline = Some(base / row.seconds.max(f64::MIN_POSITIVE));
                }
            }
        }
    }
    Ok(rows)
}

pub fn write_bench_csv<W: Write>(rows: &[BenchRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush().map_err(|e| Error::io("<bench csv>", e))?;
    Ok(())
}

pub fn read_bench_csv(path: impl AsRef<Path>) -> Result<Vec<BenchRow>> {
    let path = path.as_ref();
    let mut r = csv::Reader::from_path(path)?;
    r.deserialize().map(|row| row.map_err(Error::from)).collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct PredictionRow {
    pub dataset: String,
    pub template: String,
    pub engine: EngineKind,
    pub measured_seconds: f64,
    pub predicted_seconds: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundRow {
    pub k: usize,
    pub d: f64,
    pub lower: f64,
    pub upper: f64,
    /// Baseline / vectorized seconds measured for this (dataset, template).
    pub measured: Option<f64>,
    pub dataset: String,
    pub template: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct ModelReport {
    pub params: ModelParams,
    /// `(alpha, beta)` of the pruned engine, when it was measured.
    pub pruned: Option<(f64, f64)>,
    pub predictions: Vec<PredictionRow>,
    pub bounds: Vec<BoundRow>,
}

pub fn run_model(rows: &[BenchRow]) -> Result<ModelReport> {
    let measurements: Vec<Measurement> = rows
        .iter()
        .map(|r| {
            Ok(Measurement {
                model: CostModel::from(r.engine),
                k: r.k,
                n: r.n,
                m: r.m,
                shapes: parse_shapes(&r.plan_shape)?,
                seconds: r.seconds,
            })
        })
        .collect::<Result<_>>()?;
    let params = fit_constants(&measurements)?;
    let pruned = fit_two_term(&measurements, CostModel::Pfascia).ok();

    let predictions = rows
        .iter()
        .zip(&measurements)
        .map(|(r, m)| {
            let predicted = match (m.model, pruned) {
                (CostModel::Pfascia, Some((alpha, beta))) => m.predict(&ModelParams { alpha, beta, ..params }),
                _ => m.predict(&params),
            };
            PredictionRow {
                dataset: r.dataset.clone(),
                template: r.template.clone(),
                engine: r.engine,
                measured_seconds: r.seconds,
                predicted_seconds: predicted,
            }
        })
        .collect();

    let mut seen = BTreeMap::new();
    for r in rows {
        seen.entry((r.dataset.clone(), r.template.clone()))
            .or_insert((r.k, r.avg_degree));
    }
    let bounds = seen
        .into_iter()
        .map(|((dataset, template), (k, d))| {
            let (lower, upper) = improvement_bounds(&params, k, d);
            let secs = |e: EngineKind| {
                rows.iter()
                    .find(|r| r.dataset == dataset && r.template == template && r.engine == e)
                    .map(|r| r.seconds)
            };
            let measured = match (secs(EngineKind::Baseline), secs(EngineKind::Vectorized)) {
                (Some(b), Some(v)) if v > 0.0 => Some(b / v),
                _ => None,
            };
            BoundRow {
                k,
                d,
                lower,
                upper,
                measured,
                dataset,
                template,
            }
        })
        .collect();
    Ok(ModelReport {
        params,
        pruned,
        predictions,
        bounds,
    })
}

/// Writes every built-in template as `<dir>/<name>.txt`.
pub fn write_builtin_templates(dir: impl AsRef<Path>) -> Result<Vec<PathBuf>> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    crate::synthgen::TEMPLATE_NAMES
        .iter()
        .map(|name| {
            let t = builtin_template(name).expect("listed template");
            let path = dir.join(format!("{name}.txt"));
            fs::write(&path, t.to_edge_list_string()).map_err(|e| Error::io(&path, e))?;
            Ok(path)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph_specs() {
        let g = resolve_graph("er:n=4,p=1").unwrap();
        assert_eq!(g.m(), 6);
        let g = resolve_graph("rmat:scale=6,edges=200,skew=3,seed=2").unwrap();
        assert_eq!(g.n(), 64);
        assert!(resolve_graph("rmat:edges=4").is_err());
        assert!(resolve_graph("er:n=4,p=x").is_err());
    }

    #[test]
    fn bench_config_parsing() {
        let cfg = BenchConfig::parse(
            "# grid\ngraph = er:n=30,p=0.2,seed=1\ngraph = er:n=40,p=0.1\ntemplate = u3, u5\nengines = baseline,vectorized\nworkers = 1\n",
        )
        .unwrap();
        assert_eq!(cfg.graphs.len(), 2);
        assert_eq!(cfg.templates, vec!["u3", "u5"]);
        assert_eq!(cfg.engines, vec![EngineKind::Baseline, EngineKind::Vectorized]);
        assert_eq!(cfg.exec.workers, 1);
        assert!(BenchConfig::parse("graph = x\n").is_err());
        assert!(matches!(
            BenchConfig::parse("graph = x\ntemplate = u3\nbogus = 1\n"),
            Err(Error::Parse { line: 3, .. })
        ));
    }

    #[test]
    fn shapes_round_trip() {
        let shapes = vec![(2, 1), (5, 3)];
        assert_eq!(parse_shapes(&format_shapes(&shapes)).unwrap(), shapes);
        assert!(parse_shapes("2-1").is_err());
    }
}
