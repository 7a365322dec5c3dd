//! `stemtree`: inspect the degree-sum condition, search for spanning trees
//! with few stem leaves, generate extremal graphs, and sweep graph streams.
//!
//! JSON goes to stdout; summaries and warnings go to stderr. Exit codes: 0
//! success, 1 counterexample found by `verify`, 2 usage or input error.

use std::fs;
use std::io::{self, BufRead, BufReader, Read, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use stemtree::extremal::{build_g, build_h, Extremal, ExtremalParamsG, ExtremalParamsH};
use stemtree::graph::encode_edge_list;
use stemtree::harness::{sample_k1t_free, sweep, SamplerConfig, SolverChoice, SweepConfig};
use stemtree::invariants::alpha_m;
use stemtree::search::{local_search_solve, DEFAULT_MOVE_BUDGET, DEFAULT_TREE_LIMIT};
use stemtree::{
    encode_graph6, evaluate_condition, exact_solve, find_induced_star, parse_edge_list, parse_graph6, Graph,
};

#[derive(Parser)]
#[command(name = "stemtree", version, about = "Spanning trees whose stems have few leaves")]
struct Cli {
    /// Repeat for more log output on stderr.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate the degree-sum condition (ConditionReport JSON).
    Inspect {
        /// Graph file, or `-` for stdin.
        file: PathBuf,
        #[arg(long)]
        t: usize,
        /// Without it, reports every l from 1 to the distance-4 independence number.
        #[arg(long)]
        l: Option<usize>,
        #[arg(long, value_enum, default_value_t = Format::Auto)]
        format: Format,
    },
    /// Search for a spanning tree with l-ended stem (SearchOutcome JSON).
    Find {
        file: PathBuf,
        #[arg(long)]
        l: usize,
        /// Defaults to max(3, Δ+1), for which every graph is K_{1,t}-free.
        #[arg(long)]
        t: Option<usize>,
        #[arg(long, value_enum, default_value_t = Method::Auto)]
        method: Method,
        #[command(flatten)]
        budgets: Budgets,
        #[arg(long, value_enum, default_value_t = Format::Auto)]
        format: Format,
    },
    /// Build an extremal graph.
    Gen {
        #[command(subcommand)]
        family: Family,
    },
    /// Check the theorem on every graph of a graph6 stream (SweepReport JSON).
    Verify {
        stream: PathBuf,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        l: usize,
        #[arg(long, value_enum, default_value_t = SolverArg::Exact)]
        solver: SolverArg,
        /// Worker threads; 0 uses all cores.
        #[arg(long, default_value_t = 1)]
        jobs: usize,
        #[arg(long)]
        per_instance: bool,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Emit random connected K_{1,t}-free graphs as graph6 lines.
    Sample {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        t: usize,
        #[arg(long)]
        density: f64,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Args)]
struct Budgets {
    /// Search-leaf budget of the exact solver.
    #[arg(long, env = "STEMTREE_TREE_LIMIT", default_value_t = DEFAULT_TREE_LIMIT)]
    tree_limit: u64,
    /// Move budget of the local search.
    #[arg(long, env = "STEMTREE_MOVE_BUDGET", default_value_t = DEFAULT_MOVE_BUDGET)]
    move_budget: u64,
}

#[derive(Subcommand)]
enum Family {
    /// G(t, k, m) with l = k(t-2).
    G {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        out: GenOutput,
    },
    /// H(t, m) with l = t-2.
    H {
        #[arg(long)]
        t: usize,
        #[arg(long)]
        m: usize,
        #[command(flatten)]
        out: GenOutput,
    },
}

#[derive(Args)]
struct GenOutput {
    #[arg(long, value_enum, default_value_t = OutFormat::EdgeList)]
    format: OutFormat,
    /// Write the graph here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write the vertex labeling JSON here.
    #[arg(long)]
    labels: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Auto,
    EdgeList,
    Graph6,
}

#[derive(Clone, Copy, ValueEnum)]
enum OutFormat {
    EdgeList,
    Graph6,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Exact,
    Local,
    /// Local search, confirmed by the exact solver when it does not find a tree.
    Auto,
}

#[derive(Clone, Copy, ValueEnum)]
enum SolverArg {
    Exact,
    Local,
    Both,
}

impl From<SolverArg> for SolverChoice {
    fn from(s: SolverArg) -> Self {
        match s {
            SolverArg::Exact => SolverChoice::Exact,
            SolverArg::Local => SolverChoice::Local,
            SolverArg::Both => SolverChoice::Both,
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

fn run(command: Command) -> Result<ExitCode> {
    match command {
        Command::Inspect { file, t, l, format } => inspect(&file, t, l, format),
        Command::Find {
            file,
            l,
            t,
            method,
            budgets,
            format,
        } => find(&file, l, t, method, &budgets, format),
        Command::Gen { family } => generate(family),
        Command::Verify {
            stream,
            t,
            l,
            solver,
            jobs,
            per_instance,
            budgets,
        } => verify(&stream, t, l, solver, jobs, per_instance, &budgets),
        Command::Sample {
            n,
            t,
            density,
            count,
            seed,
        } => sample(n, t, density, count, seed),
    }
}

fn read_input(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s).context("reading stdin")?;
        Ok(s)
    } else {
        fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
    }
}

/// Edge list when the first non-blank byte is a digit, graph6 otherwise.
fn read_graph(path: &Path, format: Format) -> Result<Graph> {
    let text = read_input(path)?;
    let trimmed = text.trim_start();
    let edge_list = match format {
        Format::EdgeList => true,
        Format::Graph6 => false,
        Format::Auto => trimmed.starts_with(|c: char| c.is_ascii_digit()),
    };
    if edge_list {
        let parsed = parse_edge_list(&text)?;
        if parsed.duplicate_edges > 0 {
            log::warn!("{} duplicate edges ignored", parsed.duplicate_edges);
        }
        Ok(parsed.graph)
    } else {
        let line = trimmed.lines().next().unwrap_or("");
        Ok(parse_graph6(line)?)
    }
}

fn print_json<T: serde::Serialize>(value: &T) -> Result<()> {
    let mut out = io::stdout().lock();
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    Ok(())
}

fn check_t(t: usize) -> Result<()> {
    if t < 3 {
        bail!("--t must be at least 3");
    }
    Ok(())
}

fn inspect(file: &Path, t: usize, l: Option<usize>, format: Format) -> Result<ExitCode> {
    check_t(t)?;
    let g = read_graph(file, format)?;
    match l {
        Some(l) => print_json(&evaluate_condition(&g, t, l)?)?,
        None => {
            let top = alpha_m(&g, 4)?.max(1);
            let reports = (1..=top)
                .map(|l| evaluate_condition(&g, t, l))
                .collect::<Result<Vec<_>, _>>()?;
            print_json(&reports)?;
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn find(
    file: &Path,
    l: usize,
    t: Option<usize>,
    method: Method,
    budgets: &Budgets,
    format: Format,
) -> Result<ExitCode> {
    if l < 1 {
        bail!("--l must be at least 1");
    }
    let g = read_graph(file, format)?;
    if !g.is_connected() {
        bail!("input graph is not connected");
    }
    let t = t.unwrap_or_else(|| (g.max_degree() + 1).max(3));
    check_t(t)?;
    if let Some(star) = find_induced_star(&g, t) {
        log::warn!(
            "graph is not K_1,{t}-free: center {} leaves {:?}",
            star.center,
            star.leaves
        );
    }
    let exact = || exact_solve(&g, l, budgets.tree_limit);
    let local = || local_search_solve(&g, t, l, budgets.move_budget);
    let outcome = match method {
        Method::Exact => exact()?,
        Method::Local => local()?,
        Method::Auto => {
            let lo = local()?;
            if lo.is_found() {
                lo
            } else {
                let ex = exact()?;
                if ex.is_found() {
                    log::warn!("local search ended {:?}; the exact solver found a tree", lo.status);
                    ex
                } else {
                    lo
                }
            }
        }
    };
    eprintln!("status: {:?}", outcome.status);
    print_json(&outcome)?;
    Ok(ExitCode::SUCCESS)
}

fn generate(family: Family) -> Result<ExitCode> {
    let (built, out): (Extremal, GenOutput) = match family {
        Family::G { t, k, m, out } => (build_g(ExtremalParamsG::new(t, k, m)?), out),
        Family::H { t, m, out } => (build_h(ExtremalParamsH::new(t, m)?), out),
    };
    let text = match out.format {
        OutFormat::EdgeList => encode_edge_list(&built.graph),
        OutFormat::Graph6 => format!("{}\n", encode_graph6(&built.graph)),
    };
    match &out.out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display()))?,
        None => io::stdout().write_all(text.as_bytes())?,
    }
    if let Some(path) = &out.labels {
        let json = serde_json::to_string_pretty(&built.labeling)?;
        fs::write(path, json + "\n").with_context(|| format!("writing {}", path.display()))?;
    }
    eprintln!(
        "n = {}, edges = {}, hub {:?}, pendants {:?}",
        built.graph.order(),
        built.graph.edge_count(),
        built.labeling.hub,
        built.labeling.pendants
    );
    Ok(ExitCode::SUCCESS)
}

fn verify(
    stream: &Path,
    t: usize,
    l: usize,
    solver: SolverArg,
    jobs: usize,
    per_instance: bool,
    budgets: &Budgets,
) -> Result<ExitCode> {
    let mut cfg = SweepConfig::new(t, l, solver.into())?;
    cfg.jobs = jobs;
    cfg.per_instance = per_instance;
    cfg.tree_limit = budgets.tree_limit;
    cfg.move_budget = budgets.move_budget;
    let reader: Box<dyn BufRead> = if stream.as_os_str() == "-" {
        Box::new(BufReader::new(io::stdin()))
    } else {
        let f = fs::File::open(stream).with_context(|| format!("opening {}", stream.display()))?;
        Box::new(BufReader::new(f))
    };
    let mut read_error = None;
    let lines = reader.lines().map_while(|r| r.map_err(|e| read_error = Some(e)).ok());
    let report = sweep(lines, &cfg);
    if let Some(e) = read_error {
        return Err(e).context("reading stream");
    }
    eprintln!(
        "total {} checked {} found {} counterexamples {} parse errors {}",
        report.total,
        report.checked,
        report.found,
        report.counterexamples.len(),
        report.errors.len()
    );
    print_json(&report)?;
    Ok(if report.counterexamples.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn sample(n: usize, t: usize, density: f64, count: usize, seed: u64) -> Result<ExitCode> {
    let mut sampler = sample_k1t_free(SamplerConfig::new(n, t, density, seed, count)?);
    let mut out = io::BufWriter::new(io::stdout().lock());
    for g in sampler.by_ref() {
        writeln!(out, "{}", encode_graph6(&g))?;
    }
    out.flush()?;
    eprintln!("{:?}", sampler.stats);
    Ok(ExitCode::SUCCESS)
}
