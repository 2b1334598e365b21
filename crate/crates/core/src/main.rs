use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand};

use treecount::cli::{self, BenchConfig, OutputFormat, RunConfig};
use treecount::synthgen::{generate_erdos_renyi, generate_rmat, RmatSpec};
use treecount::{EngineKind, Error, ExecConfig, Graph};

#[derive(Parser)]
#[command(
    name = "treecount",
    version,
    about = "Estimate tree-template embedding counts by color coding"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Estimate the number of embeddings of a template in a graph.
    Count(CountArgs),
    /// Compare an estimate against the exact count on a small instance.
    Verify(VerifyArgs),
    /// Run a benchmark grid and write one CSV row per (graph, template, engine).
    Bench(BenchArgs),
    /// Fit the cost model to a benchmark CSV and report predictions and bounds.
    Model(ModelArgs),
    /// Generate synthetic graphs or write the built-in templates.
    #[command(subcommand)]
    Generate(GenerateCommand),
    /// Print the partition plan of a template as JSON.
    Plan(PlanArgs),
}

#[derive(Args, Clone)]
struct ExecArgs {
    #[arg(long, default_value_t = EngineKind::Vectorized)]
    engine: EngineKind,
    #[arg(long, default_value_t = 1)]
    iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Columns per SpMM batch (vectorized engine).
    #[arg(long, default_value_t = treecount::engine::DEFAULT_BATCH)]
    batch: usize,
    /// Worker threads; defaults to the available parallelism.
    #[arg(long)]
    workers: Option<usize>,
    /// Refuse to run when the table memory estimate exceeds this many bytes.
    #[arg(long)]
    mem_budget: Option<u64>,
}

impl ExecArgs {
    fn exec(&self) -> ExecConfig {
        let mut cfg = ExecConfig::default();
        if let Some(w) = self.workers {
            cfg.workers = w;
        }
        cfg.batch = self.batch;
        cfg.mem_budget = self.mem_budget;
        cfg
    }
}

#[derive(Args)]
struct CountArgs {
    /// Edge-list file, or `rmat:...` / `er:...` generator spec.
    #[arg(long)]
    graph: String,
    /// Template file or built-in template name.
    #[arg(long)]
    template: String,
    #[arg(long)]
    root: Option<usize>,
    #[command(flatten)]
    exec: ExecArgs,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the full-template table of the last iteration as CSV.
    #[arg(long)]
    dump_table: Option<PathBuf>,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    graph: String,
    #[arg(long)]
    template: String,
    #[command(flatten)]
    exec: ExecArgs,
}

#[derive(Args)]
struct BenchArgs {
    /// `key = value` grid description.
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ModelArgs {
    /// CSV written by `bench`.
    #[arg(long)]
    input: PathBuf,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PlanArgs {
    #[arg(long)]
    template: String,
    #[arg(long)]
    root: Option<usize>,
}

#[derive(Subcommand)]
enum GenerateCommand {
    /// Recursive-matrix graph.
    Rmat {
        #[arg(long)]
        scale: u32,
        #[arg(long)]
        edges: usize,
        /// Skew ladder level 0..=8; overrides --probs.
        #[arg(long)]
        skew: Option<u32>,
        /// Quadrant probabilities a,b,c,d.
        #[arg(long, value_delimiter = ',', num_args = 4)]
        probs: Option<Vec<f64>>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Erdős–Rényi G(n, p) graph.
    Er {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write every built-in template into a directory.
    Templates {
        #[arg(long)]
        dir: PathBuf,
    },
}

#[derive(Clone, Copy, clap::ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn emit(out: Option<&PathBuf>, text: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_graph(g: &Graph, out: &PathBuf) -> anyhow::Result<()> {
    g.write_edge_list(out)?;
    eprintln!("wrote {} (n = {}, m = {})", out.display(), g.n(), g.m());
    Ok(())
}

fn run(cli: Cli) -> anyhow::Result<()> {
    match cli.command {
        Command::Count(a) => {
            let cfg = RunConfig {
                graph: a.graph,
                template: a.template,
                root: a.root,
                engine: a.exec.engine,
                iterations: a.exec.iters,
                seed: a.exec.seed,
                exec: a.exec.exec(),
                format: match a.format {
                    Format::Json => OutputFormat::Json,
                    Format::Csv => OutputFormat::Csv,
                },
                out: a.out,
                dump_table: a.dump_table,
            };
            cli::cmd_count(&cfg)?;
        }
        Command::Verify(a) => {
            let graph = cli::resolve_graph(&a.graph)?;
            let template = cli::resolve_template(&a.template, None)?;
            let report = cli::run_verify(
                &graph,
                &template,
                a.exec.engine,
                a.exec.iters,
                a.exec.seed,
                &a.exec.exec(),
            )?;
            emit(None, &(serde_json::to_string_pretty(&report)? + "\n"))?;
        }
        Command::Bench(a) => {
            let cfg = BenchConfig::load(&a.config)?;
            let rows = cli::run_bench(&cfg)?;
            match &a.out {
                Some(path) => {
                    let file = fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
                    cli::write_bench_csv(&rows, file)?;
                }
                None => cli::write_bench_csv(&rows, std::io::stdout())?,
            }
        }
        Command::Model(a) => {
            let rows = cli::read_bench_csv(&a.input)?;
            let report = cli::run_model(&rows)?;
            emit(a.out.as_ref(), &(serde_json::to_string_pretty(&report)? + "\n"))?;
        }
        Command::Generate(GenerateCommand::Rmat {
            scale,
            edges,
            skew,
            probs,
            seed,
            out,
        }) => {
            let spec = match (skew, probs) {
                (Some(level), _) => RmatSpec::skewed(scale, edges, level, seed)?,
                (None, Some(p)) => RmatSpec::new(scale, edges, [p[0], p[1], p[2], p[3]], seed),
                (None, None) => RmatSpec::graph500(scale, edges, seed),
            };
            write_graph(&generate_rmat(&spec)?, &out)?;
        }
        Command::Generate(GenerateCommand::Er { n, p, seed, out }) => {
            write_graph(&generate_erdos_renyi(n, p, seed)?, &out)?;
        }
        Command::Generate(GenerateCommand::Templates { dir }) => {
            for path in cli::write_builtin_templates(&dir)? {
                eprintln!("wrote {}", path.display());
            }
        }
        Command::Plan(a) => {
            let template = cli::resolve_template(&a.template, a.root)?;
            emit(None, &(serde_json::to_string_pretty(&template.partition())? + "\n"))?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::from(cli::EXIT_OK as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            let code = err.downcast_ref::<Error>().map_or(cli::EXIT_INPUT, cli::exit_code);
            ExitCode::from(code as u8)
        }
    }
}
