//! Command-line front end. Exit codes: 0 success, 1 infeasible or SFMs
//! present, 2 usage or parse error.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::{Read, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::bench::{bench, write_csv, write_jsonl, BenchConfig};
use crate::cost::{Cost, Precision, DEFAULT_DECIMALS};
use crate::generator::{generate, GenerationError, GeneratorConfig, StateShape};
use crate::graph::{build_graphs, decompose_sccs};
use crate::io::{check_json, parse_instance, parse_wsc, report_json, report_table, write_instance, write_wsc, CoverJson};
use crate::matching::build_bipartite;
use crate::selector::{diagnose_sfm, select_min_cost_io, SelectorError, SelectorOptions};
use crate::set_cover::{exact_solve, greedy_solve, harmonic, reduce_accessibility_to_wsc, reduce_sensability_to_wsc, SetCoverError};
use crate::system::{Mode, Selection, StructuredSystem};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "ioselect", version, about = "Minimum-cost input/output selection without structurally fixed modes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide whether a selection (default: everything) leaves SFMs.
    Check(CheckArgs),
    /// Run the three-stage selection.
    Select(SelectArgs),
    /// Emit the accessibility (or, with --dual, sensability) set-cover instance.
    ReduceSetcover(ReduceArgs),
    /// Solve a weighted set-cover instance.
    SolveSetcover(SolveArgs),
    /// Generate a random instance.
    Gen(GenArgs),
    /// Ratio and runtime benchmark over generated instances.
    Bench(BenchArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

#[derive(Debug, Args)]
struct Common {
    /// Decimal places kept when parsing costs (0..=12).
    #[arg(long, default_value_t = DEFAULT_DECIMALS)]
    precision: u32,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the main output here instead of stdout.
    #[arg(short = 'o', long)]
    output: Option<PathBuf>,
}

/// Comma-separated 1-based indices; the empty string is the empty set.
#[derive(Debug, Clone)]
struct IndexList(Vec<usize>);

fn parse_index_list(s: &str) -> Result<IndexList, String> {
    let s = s.trim();
    if s.is_empty() {
        return Ok(IndexList(Vec::new()));
    }
    s.split(',')
        .map(|t| match t.trim().parse::<usize>() {
            Ok(0) => Err("indices are 1-based".to_string()),
            Ok(i) => Ok(i),
            Err(_) => Err(format!("`{}` is not an index", t.trim())),
        })
        .collect::<Result<Vec<_>, _>>()
        .map(IndexList)
}

#[derive(Debug, Args)]
struct CheckArgs {
    /// Instance JSON, `-` for stdin.
    file: PathBuf,
    #[arg(long, value_parser = parse_index_list)]
    inputs: Option<IndexList>,
    #[arg(long, value_parser = parse_index_list)]
    outputs: Option<IndexList>,
    /// Evaluate only the SCC condition.
    #[arg(long)]
    discrete: bool,
    /// Write system digraph and condensation edges to this file.
    #[arg(long)]
    dump_graph: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SelectArgs {
    file: PathBuf,
    /// Add exact set-cover optima and the brute-force optimum (small instances).
    #[arg(long)]
    exact: bool,
    /// Include greedy traces, matching edges and per-state witnesses.
    #[arg(long)]
    trace: bool,
    #[arg(long)]
    discrete: bool,
    #[arg(long)]
    dump_graph: Option<PathBuf>,
    /// Write the bipartite graph and the optimal matching to this file.
    #[arg(long)]
    dump_matching: Option<PathBuf>,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct ReduceArgs {
    file: PathBuf,
    /// Reduce sensability instead of accessibility.
    #[arg(long)]
    dual: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct SolveArgs {
    file: PathBuf,
    #[arg(long)]
    exact: bool,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ShapeArg {
    Random,
    Diagonal,
    Irreducible,
}

#[derive(Debug, Args)]
struct GenParams {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    p: usize,
    #[arg(long, default_value_t = 0.3)]
    state_density: f64,
    #[arg(long, default_value_t = 0.3)]
    input_density: f64,
    #[arg(long, default_value_t = 0.3)]
    output_density: f64,
    #[arg(long, default_value = "1")]
    cost_lo: String,
    #[arg(long, default_value = "10")]
    cost_hi: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    discrete: bool,
    #[arg(long, value_enum, default_value_t = ShapeArg::Random)]
    shape: ShapeArg,
    /// Accept the first draw even if it has SFMs.
    #[arg(long)]
    allow_infeasible: bool,
    #[arg(long, default_value_t = 1000)]
    max_attempts: u32,
}

#[derive(Debug, Args)]
struct GenArgs {
    #[command(flatten)]
    params: GenParams,
    #[command(flatten)]
    common: Common,
}

#[derive(Debug, Args)]
struct BenchArgs {
    #[command(flatten)]
    params: GenParams,
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// Comma-separated state dimensions; overrides --n with one config each.
    #[arg(long, value_parser = parse_index_list)]
    sizes: Option<IndexList>,
    /// Compare against the brute-force optimum (m + p <= 16).
    #[arg(long)]
    oracle: bool,
    /// Emit CSV records instead of JSON lines.
    #[arg(long)]
    csv: bool,
    /// Record wall-clock timings and the runtime-by-n table.
    #[arg(long)]
    timings: bool,
    #[command(flatten)]
    common: Common,
}

/// Error carrying its exit code.
struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl ToString) -> Failure {
    Failure { code: EXIT_USAGE, message: message.to_string() }
}

fn infeasible(message: impl ToString) -> Failure {
    Failure { code: EXIT_INFEASIBLE, message: message.to_string() }
}

type Outcome = Result<i32, Failure>;

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = stderr.write_all(text.as_bytes());
            } else {
                let _ = stdout.write_all(text.as_bytes());
            }
            return code;
        }
    };
    let result = match cli.command {
        Command::Check(a) => check(a, stdout),
        Command::Select(a) => select(a, stdout),
        Command::ReduceSetcover(a) => reduce(a, stdout),
        Command::SolveSetcover(a) => solve(a, stdout),
        Command::Gen(a) => gen(a, stdout),
        Command::Bench(a) => run_bench(a, stdout),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message);
            f.code
        }
    }
}

fn precision(c: &Common) -> Result<Precision, Failure> {
    Precision::new(c.precision).map_err(usage)
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path == Path::new("-") {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(usage)?;
        return Ok(s);
    }
    std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_system(path: &Path, c: &Common, discrete: bool) -> Result<StructuredSystem, Failure> {
    let text = read_input(path)?;
    let system = parse_instance(&text, precision(c)?).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    Ok(if discrete { system.with_mode(Mode::Discrete) } else { system })
}

fn emit(common: &Common, stdout: &mut dyn Write, text: &str) -> Result<(), Failure> {
    match &common.output {
        Some(path) => std::fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display()))),
        None => stdout.write_all(text.as_bytes()).map_err(usage),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Failure> {
    std::fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn json_line<T: serde::Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("output serializes");
    s.push('\n');
    s
}

fn graph_dump(system: &StructuredSystem) -> String {
    let (state, sys) = build_graphs(system);
    let mut s = String::from("# system digraph\n");
    s.push_str(&sys.to_edge_list());
    s.push_str("# condensation\n");
    s.push_str(&decompose_sccs(&state).to_edge_list());
    s
}

fn check(a: CheckArgs, stdout: &mut dyn Write) -> Outcome {
    let system = load_system(&a.file, &a.common, a.discrete)?;
    let full = |l: Option<IndexList>, n: usize| l.map_or_else(|| (1..=n).collect(), |l| l.0);
    let sel = Selection::one_based(full(a.inputs, system.m()), full(a.outputs, system.p()));
    let d = diagnose_sfm(&system, &sel).map_err(usage)?;
    if let Some(path) = &a.dump_graph {
        let r = system.restrict(&sel).map_err(usage)?;
        write_file(path, &graph_dump(&r.system))?;
    }
    let j = check_json(&d, &sel, system.mode);
    let text = match a.common.format {
        Format::Json => json_line(&j),
        Format::Table => {
            let mut s = String::new();
            let _ = writeln!(s, "no SFM        {}", j.no_sfm);
            let _ = writeln!(s, "reason        {}", j.reason);
            let _ = writeln!(s, "mode          {}", j.mode);
            if !j.type1_states.is_empty() {
                let xs: Vec<String> = j.type1_states.iter().map(|x| format!("x{x}")).collect();
                let _ = writeln!(s, "type-1 states {}", xs.join(", "));
            }
            if let Some(w) = &j.type2_witness {
                let _ = writeln!(s, "hall set      {{{}}} -> {{{}}}", w.left.join(", "), w.neighbors.join(", "));
            }
            s
        }
    };
    emit(&a.common, stdout, &text)?;
    Ok(if d.status.is_free() { EXIT_OK } else { EXIT_INFEASIBLE })
}

fn select(a: SelectArgs, stdout: &mut dyn Write) -> Outcome {
    let system = load_system(&a.file, &a.common, a.discrete)?;
    if let Some(path) = &a.dump_graph {
        write_file(path, &graph_dump(&system))?;
    }
    let opts = SelectorOptions { exact: a.exact, parallel: true };
    let report = match select_min_cost_io(&system, opts) {
        Ok(r) => r,
        Err(e @ (SelectorError::SystemHasSfms(_) | SelectorError::SetCover(_) | SelectorError::Matching(_))) => {
            return Err(infeasible(e))
        }
        Err(e) => return Err(usage(e)),
    };
    if let Some(path) = &a.dump_matching {
        let mut s = String::from("# bipartite graph\n");
        s.push_str(&build_bipartite(&system).to_edge_list());
        s.push_str("# matching\n");
        for e in report.cycle.iter().flat_map(|c| &c.edges) {
            s.push_str(e);
            s.push('\n');
        }
        write_file(path, &s)?;
    }
    let j = report_json(&report, system.precision, a.trace);
    let text = match a.common.format {
        Format::Json => json_line(&j),
        Format::Table => report_table(&j),
    };
    emit(&a.common, stdout, &text)?;
    Ok(EXIT_OK)
}

fn reduce(a: ReduceArgs, stdout: &mut dyn Write) -> Outcome {
    let system = load_system(&a.file, &a.common, false)?;
    let (inst, labels) = if a.dual {
        reduce_sensability_to_wsc(&system)
    } else {
        reduce_accessibility_to_wsc(&system)
    };
    let text = match a.common.format {
        Format::Json => write_wsc(&inst),
        Format::Table => {
            let mut s = String::new();
            for (e, states) in labels.iter().enumerate() {
                let xs: Vec<String> = states.iter().map(|x| format!("x{}", x + 1)).collect();
                let _ = writeln!(s, "element {}  {{{}}}", e + 1, xs.join(", "));
            }
            for (i, set) in inst.sets.iter().enumerate() {
                let es: Vec<String> = set.iter().map(|e| (e + 1).to_string()).collect();
                let _ = writeln!(s, "set {}  weight {}  {{{}}}", i + 1, inst.weights[i].to_decimal(inst.precision), es.join(", "));
            }
            s
        }
    };
    emit(&a.common, stdout, &text)?;
    Ok(EXIT_OK)
}

fn solve(a: SolveArgs, stdout: &mut dyn Write) -> Outcome {
    let p = precision(&a.common)?;
    let text = read_input(&a.file)?;
    let inst = parse_wsc(&text, p).map_err(|e| usage(format!("{}: {e}", a.file.display())))?;
    let greedy = greedy_solve(&inst).map_err(infeasible)?;
    let exact = if a.exact {
        match exact_solve(&inst) {
            Ok(c) => Some(c),
            Err(SetCoverError::TooLarge(r)) => return Err(usage(SetCoverError::TooLarge(r))),
            Err(e) => return Err(infeasible(e)),
        }
    } else {
        None
    };
    let v = SolveJson {
        cover: CoverJson::new(&greedy, p),
        harmonic_bound: harmonic(inst.max_set_size()),
        exact: exact.as_ref().map(|e| CoverJson::new(e, p)),
    };
    let text = match a.common.format {
        Format::Json => json_line(&v),
        Format::Table => {
            let mut s = String::new();
            let list = |c: &[usize]| c.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
            let _ = writeln!(s, "greedy  {}  weight {}", list(&greedy.chosen), greedy.weight.to_decimal(p));
            if let Some(e) = &exact {
                let _ = writeln!(s, "exact   {}  weight {}", list(&e.chosen), e.weight.to_decimal(p));
            }
            s
        }
    };
    emit(&a.common, stdout, &text)?;
    Ok(EXIT_OK)
}

#[derive(serde::Serialize)]
struct SolveJson {
    #[serde(flatten)]
    cover: CoverJson,
    /// `H(d)` for the largest set size `d`.
    harmonic_bound: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<CoverJson>,
}

fn generator_config(g: &GenParams, c: &Common) -> Result<GeneratorConfig, Failure> {
    let p = precision(c)?;
    let lo = Cost::parse(&g.cost_lo, p).map_err(|e| usage(format!("--cost-lo: {e}")))?;
    let hi = Cost::parse(&g.cost_hi, p).map_err(|e| usage(format!("--cost-hi: {e}")))?;
    Ok(GeneratorConfig {
        n: g.n,
        m: g.m,
        p: g.p,
        state_density: g.state_density,
        input_density: g.input_density,
        output_density: g.output_density,
        cost_range: (lo, hi),
        precision: p,
        seed: g.seed,
        mode: if g.discrete { Mode::Discrete } else { Mode::Continuous },
        require_feasible: !g.allow_infeasible,
        shape: match g.shape {
            ShapeArg::Random => StateShape::Random,
            ShapeArg::Diagonal => StateShape::Diagonal,
            ShapeArg::Irreducible => StateShape::Irreducible,
        },
        max_attempts: g.max_attempts,
    })
}

fn gen(a: GenArgs, stdout: &mut dyn Write) -> Outcome {
    let cfg = generator_config(&a.params, &a.common)?;
    let system = match generate(&cfg) {
        Ok(s) => s,
        Err(e @ GenerationError::BadConfig(_)) => return Err(usage(e)),
        Err(e) => return Err(infeasible(e)),
    };
    let text = match a.common.format {
        Format::Json => write_instance(&system),
        Format::Table => system_table(&system),
    };
    emit(&a.common, stdout, &text)?;
    Ok(EXIT_OK)
}

fn system_table(s: &StructuredSystem) -> String {
    let mut out = String::new();
    let rows = |out: &mut String, name: &str, pat: &crate::pattern::SparsityPattern| {
        let _ = writeln!(out, "{name}:");
        for r in 0..pat.rows() {
            let line: String = (0..pat.cols()).map(|c| if pat.contains(r, c) { '*' } else { '.' }).collect();
            let _ = writeln!(out, "  {line}");
        }
    };
    rows(&mut out, "A", &s.a);
    rows(&mut out, "B", &s.b);
    rows(&mut out, "C", &s.c);
    let costs = |cs: &[Cost]| cs.iter().map(|c| s.cost_str(*c)).collect::<Vec<_>>().join(" ");
    let _ = writeln!(out, "cost_u: {}", costs(&s.cost_u));
    let _ = writeln!(out, "cost_y: {}", costs(&s.cost_y));
    let _ = writeln!(out, "mode: {}", s.mode.as_str());
    out
}

fn run_bench(a: BenchArgs, stdout: &mut dyn Write) -> Outcome {
    let base = generator_config(&a.params, &a.common)?;
    let sizes = a.sizes.map_or_else(|| vec![base.n], |l| l.0);
    let configs: Vec<BenchConfig> = sizes
        .iter()
        .map(|&n| BenchConfig {
            generator: GeneratorConfig { n, ..base.clone() },
            trials: a.trials,
            oracle: a.oracle,
            timings: a.timings,
        })
        .collect();
    let out = bench(&configs);
    let text = if a.csv {
        write_csv(&out.records).map_err(usage)?
    } else {
        match a.common.format {
            Format::Json => write_jsonl(&out),
            Format::Table => bench_table(&out.summary),
        }
    };
    emit(&a.common, stdout, &text)?;
    Ok(EXIT_OK)
}

fn bench_table(s: &crate::bench::BenchSummary) -> String {
    let mut out = String::new();
    let f = |x: Option<f64>| x.map_or_else(|| "-".into(), |v| format!("{v:.4}"));
    let _ = writeln!(out, "instances           {}", s.instances);
    let _ = writeln!(out, "failures            {}", s.failures);
    let _ = writeln!(out, "infeasible outputs  {}", s.infeasible_outputs);
    let _ = writeln!(out, "oracle runs         {}", s.oracle_runs);
    let _ = writeln!(out, "max ratio           {}", f(s.max_ratio));
    let _ = writeln!(out, "mean ratio          {}", f(s.mean_ratio));
    if !s.runtime_by_n.is_empty() {
        let _ = writeln!(out, "{:>6} {:>10} {:>12} {:>12}", "n", "instances", "mean ms", "max ms");
        for r in &s.runtime_by_n {
            let _ = writeln!(out, "{:>6} {:>10} {:>12.3} {:>12.3}", r.n, r.instances, r.mean_ms, r.max_ms);
        }
    }
    out
}
