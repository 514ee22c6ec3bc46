//! `colpath` — solve, generate, validate, rasterize, render and benchmark
//! colored path instances.
//!
//! Exit codes: 0 YES (or success), 1 NO, 2 input error, 3 resource cap.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path as FsPath, PathBuf};
use std::process::ExitCode;
use std::sync::mpsc;
use std::sync::Mutex;
use std::time::Instant;

use anyhow::{anyhow, bail, Context};
use clap::{Parser, Subcommand, ValueEnum};

use colpath::bounded::solve_bounded_with;
use colpath::generators::{
    gen_apex_connected, gen_multicolored_clique, gen_random_partitioned, gen_random_planar,
    gen_vertex_cover, min_vertex_cover, PartitionedGraph, SimpleGraph,
};
use colpath::geometry::{parse_scene, rasterize_scene, render_svg};
use colpath::io::{parse_decomposition, parse_instance, write_instance, write_solution, Solution, SolveStats};
use colpath::oracles::{bounded_pareto, pareto_exact, xp_subset_solver};
use colpath::repset::{solve_colored_path_with, SolveOptions, DEFAULT_TABLE_CAP};
use colpath::{chi_of_path, first_disconnected_color, intersection_number, validate_decomposition, validate_instance, ColoredGraph, Error, Path, Strategy};

const YES: u8 = 0;
const NO: u8 = 1;
const INPUT: u8 = 2;
const CAP: u8 = 3;

#[derive(Parser)]
#[command(name = "colpath", version, about = "Colored s-t paths with few colors")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Alg {
    /// Tree-decomposition dynamic program (color-connected input).
    Repset,
    /// The same program with a path-length budget.
    Bounded,
    /// Exhaustive color-subset search.
    Xp,
    /// Pareto label-correcting search.
    Pareto,
}

impl Alg {
    fn name(self) -> &'static str {
        match self {
            Alg::Repset => "repset",
            Alg::Bounded => "bounded",
            Alg::Xp => "xp",
            Alg::Pareto => "pareto",
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Family {
    Vc,
    Mcc,
    Apex,
    Random,
}

#[derive(clap::Args, Clone)]
struct SolveArgs {
    /// Algorithm; defaults to `bounded` when a length budget is known,
    /// `repset` otherwise.
    #[arg(long, value_enum)]
    alg: Option<Alg>,
    /// Color budget (overrides the instance's).
    #[arg(long)]
    k: Option<usize>,
    /// Length budget in edges (overrides the instance's).
    #[arg(long)]
    ell: Option<usize>,
    /// Answer non-color-connected input with the Pareto oracle instead of
    /// rejecting it.
    #[arg(long)]
    fallback_oracle: bool,
    /// Decomposition of the input graph to use.
    #[arg(long)]
    td: Option<PathBuf>,
    #[arg(long, default_value = "min-fill")]
    strategy: Strategy,
    /// Maximum candidates per pattern before aborting with exit code 3.
    #[arg(long, default_value_t = DEFAULT_TABLE_CAP)]
    table_cap: usize,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide an instance or an obstacle scene.
    Solve {
        input: PathBuf,
        #[command(flatten)]
        args: SolveArgs,
        /// Print decomposition width and table sizes.
        #[arg(long)]
        stats: bool,
        /// Find the smallest feasible budget by binary search.
        #[arg(long)]
        optimize: bool,
    },
    /// Emit a generated instance.
    Generate {
        #[arg(long, value_enum)]
        family: Family,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// vc: edge list; mcc: edge list with `class` lines; apex: instance.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Budget (vc: defaults to the minimum vertex cover; random: 0).
        #[arg(long)]
        k: Option<usize>,
        /// random: vertex count.
        #[arg(long, default_value_t = 30)]
        n: usize,
        /// random: color count.
        #[arg(long, default_value_t = 6)]
        colors: usize,
        /// mcc without input: number of classes.
        #[arg(long, default_value_t = 3)]
        classes: usize,
        /// mcc without input: vertices per class.
        #[arg(long, default_value_t = 2)]
        class_size: usize,
        /// mcc without input: cross-class edge probability.
        #[arg(long, default_value_t = 0.5)]
        density: f64,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Check an instance (and optionally a decomposition of it).
    Validate {
        input: PathBuf,
        #[arg(long)]
        td: Option<PathBuf>,
    },
    /// Convert an obstacle scene to a grid instance.
    Rasterize {
        input: PathBuf,
        #[arg(long, default_value_t = 0)]
        k: usize,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Draw a scene as SVG, optionally with a path.
    Render {
        input: PathBuf,
        /// Solution file whose `path` line is drawn.
        #[arg(long, conflicts_with = "k")]
        solution: Option<PathBuf>,
        /// Solve the scene at this budget and draw the witness, if any.
        #[arg(long)]
        k: Option<usize>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Run algorithms over every instance in a directory and write CSV.
    Bench {
        corpus: PathBuf,
        #[arg(long, value_enum, value_delimiter = ',', default_values_t = [Alg::Repset, Alg::Pareto, Alg::Xp])]
        algs: Vec<Alg>,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        ell: Option<usize>,
        #[arg(long, default_value_t = DEFAULT_TABLE_CAP)]
        table_cap: usize,
        /// Worker threads (default: available parallelism).
        #[arg(long)]
        workers: Option<usize>,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
}

/// An error that carries its exit code.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl<E: Into<anyhow::Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        let err = e.into();
        let code = match err.downcast_ref::<Error>() {
            Some(Error::TableCap { .. } | Error::Guard(_)) => CAP,
            _ => INPUT,
        };
        Failure { code, err }
    }
}

type CmdResult = std::result::Result<u8, Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { INPUT } else { YES });
        }
    };
    let res = match cli.cmd {
        Cmd::Solve { input, args, stats, optimize } => cmd_solve(&input, &args, stats, optimize),
        Cmd::Generate { family, seed, input, k, n, colors, classes, class_size, density, output } => {
            cmd_generate(family, seed, input.as_deref(), k, n, colors, (classes, class_size, density), output.as_deref())
        }
        Cmd::Validate { input, td } => cmd_validate(&input, td.as_deref()),
        Cmd::Rasterize { input, k, output } => cmd_rasterize(&input, k, output.as_deref()),
        Cmd::Render { input, solution, k, output } => {
            cmd_render(&input, solution.as_deref(), k, output.as_deref())
        }
        Cmd::Bench { corpus, algs, k, ell, table_cap, workers, output } => {
            cmd_bench(&corpus, &algs, k, ell, table_cap, workers, output.as_deref())
        }
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(Failure { code, err }) => {
            eprintln!("error: {err:#}");
            ExitCode::from(code)
        }
    }
}

fn read(path: &FsPath) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn emit(output: Option<&FsPath>, text: &str) -> anyhow::Result<()> {
    match output {
        Some(p) => fs::write(p, text).with_context(|| format!("cannot write {}", p.display())),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn is_scene(text: &str) -> bool {
    text.lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .find(|l| !l.is_empty())
        .is_some_and(|l| l.starts_with("scene"))
}

/// Loads an instance or rasterizes a scene (budget 0 unless overridden).
fn load(path: &FsPath) -> anyhow::Result<ColoredGraph> {
    let text = read(path)?;
    let g = if is_scene(&text) { rasterize_scene(&parse_scene(&text)?)? } else { parse_instance(&text)? };
    Ok(g)
}

/// One decision: the witness (if any) and the program's statistics when
/// the program ran.
fn decide(
    g: &ColoredGraph,
    alg: Alg,
    ell: Option<usize>,
    opts: &SolveOptions,
    fallback: bool,
) -> anyhow::Result<(Option<Path>, Option<SolveStats>)> {
    let needs_cc = matches!(alg, Alg::Repset | Alg::Bounded);
    let alg = match first_disconnected_color(g) {
        Some(color) if needs_cc && !fallback => {
            bail!(Error::NotColorConnected { color })
        }
        Some(_) if needs_cc => Alg::Pareto,
        _ => alg,
    };
    let within = |found: Option<(usize, Path)>| found.filter(|(c, _)| *c <= g.budget()).map(|(_, p)| p);
    Ok(match (alg, ell) {
        (Alg::Repset, None) => {
            let out = solve_colored_path_with(g, opts)?;
            (out.answer.path().cloned(), Some(out.stats))
        }
        (Alg::Repset, Some(_)) => bail!("repset ignores path length; use --alg bounded"),
        (Alg::Bounded, Some(ell)) => {
            let out = solve_bounded_with(g, ell, opts)?;
            (out.answer.path().cloned(), Some(out.stats))
        }
        (Alg::Bounded, None) => bail!("--alg bounded needs a length budget (--ell)"),
        (Alg::Xp, None) => (xp_subset_solver(g, g.budget())?, None),
        (Alg::Xp, Some(_)) => bail!("xp ignores path length; use --alg pareto or bounded"),
        (Alg::Pareto, None) => (within(pareto_exact(g)), None),
        (Alg::Pareto, Some(ell)) => (within(bounded_pareto(g, ell)), None),
    })
}

fn solve_options(args: &SolveArgs, table_cap: usize) -> anyhow::Result<SolveOptions> {
    let decomposition = match &args.td {
        Some(p) => Some(parse_decomposition(&read(p)?)?),
        None => None,
    };
    Ok(SolveOptions { strategy: args.strategy, table_cap, decomposition })
}

fn cmd_solve(input: &FsPath, args: &SolveArgs, stats: bool, optimize: bool) -> CmdResult {
    let mut g = load(input)?;
    if let Some(k) = args.k {
        g = g.with_budget(k);
    }
    let ell = args.ell.or(g.length_bound());
    let alg = args.alg.unwrap_or(if ell.is_some() { Alg::Bounded } else { Alg::Repset });
    let opts = solve_options(args, args.table_cap)?;

    let mut prefix = String::new();
    if optimize {
        // Feasibility is monotone in k; the largest useful budget is the
        // number of colors.
        let top = g.n_colors();
        if decide(&g.clone().with_budget(top), alg, ell, &opts, args.fallback_oracle)?.0.is_none() {
            g = g.with_budget(top);
            prefix.push_str("optimum none\n");
        } else {
            let (mut lo, mut hi) = (0, top);
            while lo < hi {
                let mid = (lo + hi) / 2;
                if decide(&g.clone().with_budget(mid), alg, ell, &opts, args.fallback_oracle)?.0.is_some() {
                    hi = mid;
                } else {
                    lo = mid + 1;
                }
            }
            g = g.with_budget(lo);
            prefix.push_str(&format!("optimum {lo}\n"));
        }
    }

    let (path, st) = decide(&g, alg, ell, &opts, args.fallback_oracle)?;
    let sol = match path {
        Some(p) => Solution {
            colors: chi_of_path(&g, &p)?,
            length: ell.map(|_| p.length()),
            path: Some(p),
            stats: None,
        },
        None => Solution::no(),
    };
    let sol = Solution { stats: if stats { Some(st.unwrap_or_default()) } else { None }, ..sol };
    print!("{prefix}{}", write_solution(&sol));
    Ok(if sol.is_yes() { YES } else { NO })
}

#[allow(clippy::too_many_arguments)]
fn cmd_generate(
    family: Family,
    seed: u64,
    input: Option<&FsPath>,
    k: Option<usize>,
    n: usize,
    colors: usize,
    (classes, class_size, density): (usize, usize, f64),
    output: Option<&FsPath>,
) -> CmdResult {
    let need_input = || input.ok_or_else(|| anyhow!("--input is required for this family"));
    let g = match family {
        Family::Vc => {
            let h = SimpleGraph::parse(&read(need_input()?)?)?;
            let k = k.unwrap_or_else(|| min_vertex_cover(&h));
            gen_vertex_cover(&h, k)?
        }
        Family::Mcc => {
            let p = match input {
                Some(path) => PartitionedGraph::parse(&read(path)?)?,
                None => gen_random_partitioned(classes, class_size, density, seed),
            };
            gen_multicolored_clique(&p)?
        }
        Family::Apex => {
            let g = parse_instance(&read(need_input()?)?)?;
            let g = gen_apex_connected(&g);
            match k {
                Some(k) => g.with_budget(k),
                None => g,
            }
        }
        Family::Random => gen_random_planar(n, colors, seed)?.with_budget(k.unwrap_or(0)),
    };
    emit(output, &write_instance(&g))?;
    Ok(YES)
}

fn cmd_validate(input: &FsPath, td: Option<&FsPath>) -> CmdResult {
    let text = read(input)?;
    let g = colpath::io::parse_instance_unchecked(&text)?;
    let report = validate_instance(&g);
    for w in &report.warnings {
        println!("warning: {w}");
    }
    if !report.is_empty() {
        for v in &report.violations {
            println!("invalid: {v}");
        }
        return Ok(INPUT);
    }
    let mut ok = true;
    if let Some(c) = first_disconnected_color(&g) {
        println!("not color-connected: color {c} induces a disconnected subgraph");
        ok = false;
    }
    if let Some(td) = td {
        let td = parse_decomposition(&read(td)?)?;
        let r = validate_decomposition(&g, &td);
        if r.is_empty() {
            println!("decomposition ok: width {}", td.width());
        } else {
            for v in &r.violations {
                println!("decomposition invalid: {v}");
            }
            ok = false;
        }
    }
    if !ok {
        return Ok(INPUT);
    }
    println!(
        "OK: n={} m={} colors={} k={} intersection={}",
        g.n(),
        g.edge_count(),
        g.n_colors(),
        g.budget(),
        intersection_number(&g)
    );
    Ok(YES)
}

fn cmd_rasterize(input: &FsPath, k: usize, output: Option<&FsPath>) -> CmdResult {
    let g = rasterize_scene(&parse_scene(&read(input)?)?)?.with_budget(k);
    emit(output, &write_instance(&g))?;
    Ok(YES)
}

fn parse_solution_path(text: &str) -> anyhow::Result<Option<Path>> {
    for line in text.lines() {
        let mut toks = line.split_whitespace();
        if toks.next() == Some("path") {
            let vs = toks.map(|t| t.parse().with_context(|| format!("bad vertex {t:?}"))).collect::<anyhow::Result<_>>()?;
            return Ok(Some(Path(vs)));
        }
    }
    Ok(None)
}

fn cmd_render(input: &FsPath, solution: Option<&FsPath>, k: Option<usize>, output: Option<&FsPath>) -> CmdResult {
    let scene = parse_scene(&read(input)?)?;
    let path = match (solution, k) {
        (Some(s), _) => parse_solution_path(&read(s)?)?,
        (None, Some(k)) => {
            let g = rasterize_scene(&scene)?.with_budget(k);
            solve_colored_path_with(&g, &SolveOptions::default())?.answer.path().cloned()
        }
        (None, None) => None,
    };
    emit(output, &render_svg(&scene, path.as_ref())?)?;
    Ok(YES)
}

struct Job {
    index: usize,
    name: String,
    alg: Alg,
}

fn bench_row(
    graphs: &BTreeMap<String, anyhow::Result<ColoredGraph>>,
    job: &Job,
    k: Option<usize>,
    ell: Option<usize>,
    table_cap: usize,
) -> Vec<String> {
    let loaded = &graphs[&job.name];
    let (k_col, ell) = match loaded {
        Ok(g) => (k.unwrap_or(g.budget()).to_string(), ell.or(g.length_bound())),
        Err(_) => (String::new(), ell),
    };
    // Length-aware algorithms need a budget; the others ignore it.
    let ell = match job.alg {
        Alg::Bounded | Alg::Pareto => ell,
        _ => None,
    };
    let start = Instant::now();
    let (decision, st) = match loaded {
        Err(_) => ("error".to_string(), None),
        Ok(g) => {
            let g = match k {
                Some(k) => g.clone().with_budget(k),
                None => g.clone(),
            };
            let opts = SolveOptions { table_cap, ..SolveOptions::default() };
            match decide(&g, job.alg, ell, &opts, false) {
                Ok((p, st)) => ((if p.is_some() { "yes" } else { "no" }).to_string(), st),
                Err(e) => match e.downcast_ref::<Error>() {
                    Some(Error::TableCap { .. } | Error::Guard(_)) => ("cap".to_string(), None),
                    _ => ("error".to_string(), None),
                },
            }
        }
    };
    let millis = start.elapsed().as_secs_f64() * 1e3;
    let st_col = |f: fn(&SolveStats) -> usize| st.as_ref().map(|s| f(s).to_string()).unwrap_or_default();
    vec![
        job.name.clone(),
        job.alg.name().to_string(),
        k_col,
        ell.map(|l| l.to_string()).unwrap_or_default(),
        decision,
        st_col(|s| s.width),
        st_col(|s| s.max_table),
        st_col(|s| s.nodes),
        format!("{millis:.3}"),
    ]
}

fn cmd_bench(
    corpus: &FsPath,
    algs: &[Alg],
    k: Option<usize>,
    ell: Option<usize>,
    table_cap: usize,
    workers: Option<usize>,
    output: Option<&FsPath>,
) -> CmdResult {
    let mut files: Vec<PathBuf> = fs::read_dir(corpus)
        .with_context(|| format!("cannot read corpus {}", corpus.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file())
        .collect();
    files.sort();
    let graphs: BTreeMap<String, anyhow::Result<ColoredGraph>> = files
        .iter()
        .map(|p| (p.file_name().unwrap().to_string_lossy().into_owned(), load(p)))
        .collect();
    let jobs: Vec<Job> = graphs
        .keys()
        .flat_map(|name| algs.iter().map(move |&alg| (name.clone(), alg)))
        .enumerate()
        .map(|(index, (name, alg))| Job { index, name, alg })
        .collect();

    let sink: Box<dyn std::io::Write + Send> = match output {
        Some(p) => Box::new(fs::File::create(p).with_context(|| format!("cannot write {}", p.display()))?),
        None => Box::new(std::io::stdout()),
    };
    let workers = workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()))
        .clamp(1, jobs.len().max(1));
    let queue = Mutex::new(jobs.iter());
    let (tx, rx) = mpsc::channel::<(usize, Vec<String>)>();

    std::thread::scope(|scope| -> anyhow::Result<()> {
        // Single writer; rows are released in job order so the file does not
        // depend on scheduling.
        let writer = scope.spawn(move || -> anyhow::Result<()> {
            let mut w = csv::Writer::from_writer(sink);
            w.write_record(["instance", "alg", "k", "ell", "decision", "width", "max_table", "nodes", "millis"])?;
            let mut pending = BTreeMap::new();
            let mut next = 0;
            for (i, row) in rx {
                pending.insert(i, row);
                while let Some(row) = pending.remove(&next) {
                    w.write_record(&row)?;
                    next += 1;
                }
            }
            w.flush()?;
            Ok(())
        });
        for _ in 0..workers {
            let tx = tx.clone();
            let queue = &queue;
            let graphs = &graphs;
            scope.spawn(move || loop {
                let Some(job) = queue.lock().unwrap().next() else { break };
                let row = bench_row(graphs, job, k, ell, table_cap);
                if tx.send((job.index, row)).is_err() {
                    break;
                }
            });
        }
        drop(tx);
        writer.join().map_err(|_| anyhow!("writer thread panicked"))?
    })?;
    Ok(YES)
}
