//! Command-line driver: encode families to QCIR, decide or enumerate
//! instances, and check graphs against the oracle predicates.

use std::io::Read;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qsms::cegar::{CegarState, QbfOutcome};
use qsms::circuit::{Assignment, Qbf};
use qsms::encoders::{
    augment_with_qstatic, edge_var_name, encode_family, filter_treewidth_critical,
    DominationVariant, Family,
};
use qsms::graph::{
    all_pairs, emit_graph6, parse_edge_list, parse_graph6, CellOrder, Graph,
};
use qsms::oracle;
use qsms::qcir::{emit_qcir, parse_qcir};

const EXIT_TRUE: u8 = 10;
const EXIT_FALSE: u8 = 20;
const EXIT_USAGE: u8 = 2;

#[derive(Parser)]
#[command(
    name = "qsms",
    version,
    about = "Graph search modulo isomorphism under exists-forall constraints"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Emit a problem family instance in QCIR format
    Encode(EncodeArgs),
    /// Decide an instance: TRUE (exit 10) or FALSE (exit 20)
    Solve(SolveArgs),
    /// Enumerate all solutions modulo isomorphism
    Enumerate(EnumerateArgs),
    /// Report oracle-computed properties of graphs
    Check(CheckArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Problem {
    None,
    TriangleFree,
    Folkman,
    Domination,
    Treewidth,
    Snark,
    KochenSpecker,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Variant {
    ThreeConnected,
    Bipartite,
    Girth6,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Order {
    Lex,
    Colex,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Switch {
    On,
    Off,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Edgelist,
    Graph6,
}

#[derive(Args)]
struct FamilyArgs {
    /// Problem family
    #[arg(long, value_enum)]
    problem: Problem,
    /// Number of vertices
    #[arg(long)]
    n: usize,
    /// Family parameter (triangle-free: color threshold; folkman: clique
    /// size; treewidth: target width)
    #[arg(long)]
    k: Option<usize>,
    /// Domination variant
    #[arg(long, value_enum)]
    variant: Option<Variant>,
    /// Restrict to maximal triangle-free graphs (triangle-free with --k)
    #[arg(long)]
    maximal: bool,
}

#[derive(Args)]
struct EncodeArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Conjoin the static minimality encoding (universal p-vars)
    #[arg(long)]
    qstatic: bool,
    /// Cell order for the minimality encoding
    #[arg(long, value_enum, default_value = "lex")]
    order: Order,
    /// Write to this path instead of stdout
    #[arg(long)]
    output: Option<String>,
}

#[derive(Args)]
struct SolveArgs {
    /// QCIR file to solve (alternative to --problem)
    input: Option<String>,
    #[command(flatten)]
    family: SolveFamilyArgs,
    /// Dynamic symmetry breaking
    #[arg(long, value_enum, default_value = "on")]
    sms: Switch,
    /// Conjoin the static minimality encoding before solving
    #[arg(long)]
    qstatic: bool,
    /// Cell order for symmetry breaking
    #[arg(long, value_enum, default_value = "lex")]
    order: Order,
    /// Witness output format
    #[arg(long, value_enum, default_value = "edgelist")]
    format: Format,
    /// Random seed (QSMS_SEED overrides)
    #[arg(long, default_value = "0")]
    seed: u64,
}

/// Like FamilyArgs but fully optional, for solving QCIR files directly.
#[derive(Args)]
struct SolveFamilyArgs {
    #[arg(long, value_enum)]
    problem: Option<Problem>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum)]
    variant: Option<Variant>,
    #[arg(long)]
    maximal: bool,
}

#[derive(Args)]
struct EnumerateArgs {
    #[command(flatten)]
    family: FamilyArgs,
    /// Dynamic symmetry breaking
    #[arg(long, value_enum, default_value = "on")]
    sms: Switch,
    /// Enumerate over the statically symmetry-broken encoding instead
    #[arg(long)]
    qstatic: bool,
    /// Cell order for symmetry breaking
    #[arg(long, value_enum, default_value = "lex")]
    order: Order,
    /// Stop after this many solutions
    #[arg(long)]
    limit: Option<usize>,
    /// Keep only treewidth-critical graphs (treewidth family)
    #[arg(long)]
    critical: bool,
    /// Output format, one graph per line
    #[arg(long, value_enum, default_value = "edgelist")]
    format: Format,
    /// Random seed (QSMS_SEED overrides)
    #[arg(long, default_value = "0")]
    seed: u64,
}

#[derive(Args)]
struct CheckArgs {
    /// Graphs file, one per line ("-" for stdin)
    #[arg(default_value = "-")]
    input: String,
    /// Family predicate to evaluate per graph
    #[arg(long, value_enum)]
    problem: Option<Problem>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long, value_enum)]
    variant: Option<Variant>,
    #[arg(long)]
    maximal: bool,
}

fn usage_error(msg: &str) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(EXIT_USAGE)
}

fn build_family(
    problem: Problem,
    k: Option<usize>,
    variant: Option<Variant>,
    maximal: bool,
) -> Result<Family, String> {
    let no_k = || -> Result<(), String> {
        match k {
            Some(_) => Err("--k is not accepted by this family".into()),
            None => Ok(()),
        }
    };
    if variant.is_some() && problem != Problem::Domination {
        return Err("--variant is only accepted by the domination family".into());
    }
    if maximal && problem != Problem::TriangleFree {
        return Err("--maximal is only accepted by the triangle-free family".into());
    }
    Ok(match problem {
        Problem::None => {
            no_k()?;
            Family::None
        }
        Problem::TriangleFree => match k {
            None => {
                if maximal {
                    return Err("--maximal requires --k".into());
                }
                Family::TriangleFree
            }
            Some(k) => Family::TriangleFreeNonColorable { k, maximal },
        },
        Problem::Folkman => Family::Folkman {
            k: k.ok_or("folkman requires --k")?,
        },
        Problem::Domination => Family::Domination {
            variant: match variant.unwrap_or(Variant::ThreeConnected) {
                Variant::ThreeConnected => DominationVariant::ThreeConnected,
                Variant::Bipartite => DominationVariant::Bipartite,
                Variant::Girth6 => DominationVariant::Girth6,
            },
        },
        Problem::Treewidth => Family::TreewidthExact {
            k: k.ok_or("treewidth requires --k")?,
        },
        Problem::Snark => {
            no_k()?;
            Family::Snark
        }
        Problem::KochenSpecker => {
            no_k()?;
            Family::KochenSpecker
        }
    })
}

fn cell_order(order: Order, n: usize) -> CellOrder {
    match order {
        Order::Lex => CellOrder::lex(n),
        Order::Colex => CellOrder::colex(n),
    }
}

fn resolve_seed(flag: u64) -> Result<u64, String> {
    match std::env::var("QSMS_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| format!("QSMS_SEED is not a valid seed: {s:?}")),
        Err(_) => Ok(flag),
    }
}

fn witness_graph(free: &[String], w: &Assignment) -> Option<Graph> {
    if free.is_empty() {
        return None;
    }
    let mut n = 1usize;
    for v in free {
        let rest = v.strip_prefix("e_")?;
        let (i, j) = rest.split_once('_')?;
        let (i, j): (usize, usize) = (i.parse().ok()?, j.parse().ok()?);
        if !(1 <= i && i < j) {
            return None;
        }
        n = n.max(j);
    }
    if free.len() != all_pairs(n).len() {
        return None;
    }
    let mut g = Graph::empty(n);
    for (i, j) in all_pairs(n) {
        if *w.get(&edge_var_name(i, j))? {
            g.set_edge(i, j, true);
        }
    }
    Some(g)
}

fn graph_line(g: &Graph, format: Format) -> Result<String, String> {
    match format {
        Format::Graph6 => emit_graph6(g).map_err(|e| e.to_string()),
        Format::Edgelist => {
            let mut s = format!("{} {}", g.n(), g.edge_count());
            for (u, v) in g.edges() {
                s.push_str(&format!(" {u} {v}"));
            }
            Ok(s)
        }
    }
}

fn parse_graph_line(line: &str) -> Result<Graph, String> {
    let first = line.chars().next().ok_or("empty line")?;
    if first.is_ascii_digit() {
        // one-line edge list: n m u1 v1 u2 v2 ...
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() < 2 {
            return Err("expected 'n m' edge-list header".into());
        }
        let mut text = format!("{} {}\n", toks[0], toks[1]);
        if !(toks.len() - 2).is_multiple_of(2) {
            return Err("odd number of edge endpoints".into());
        }
        for pair in toks[2..].chunks(2) {
            text.push_str(&format!("{} {}\n", pair[0], pair[1]));
        }
        parse_edge_list(&text).map_err(|e| e.to_string())
    } else {
        parse_graph6(line.trim()).map_err(|e| e.to_string())
    }
}

fn cmd_encode(a: EncodeArgs) -> ExitCode {
    let family = match build_family(a.family.problem, a.family.k, a.family.variant, a.family.maximal)
    {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    let q = match encode_family(&family, a.family.n) {
        Ok(q) => q,
        Err(e) => return usage_error(&e.to_string()),
    };
    let q = if a.qstatic {
        augment_with_qstatic(&q, &cell_order(a.order, a.family.n))
    } else {
        q
    };
    let text = emit_qcir(&q);
    match a.output {
        Some(path) => {
            if let Err(e) = std::fs::write(&path, text) {
                eprintln!("error: cannot write {path}: {e}");
                return ExitCode::FAILURE;
            }
        }
        None => print!("{text}"),
    }
    ExitCode::SUCCESS
}

fn load_qbf_for_solve(a: &SolveArgs) -> Result<(Qbf, usize), ExitCode> {
    match (&a.input, a.family.problem) {
        (Some(_), Some(_)) => Err(usage_error("give either a QCIR file or --problem, not both")),
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).map_err(|e| {
                eprintln!("error: cannot read {path}: {e}");
                ExitCode::from(EXIT_USAGE)
            })?;
            let q = parse_qcir(&text).map_err(|e| {
                eprintln!("error: {path}: {e}");
                ExitCode::from(EXIT_USAGE)
            })?;
            Ok((q, 0))
        }
        (None, Some(problem)) => {
            let n = a
                .family
                .n
                .ok_or_else(|| usage_error("--problem requires --n"))?;
            let family = build_family(problem, a.family.k, a.family.variant, a.family.maximal)
                .map_err(|e| usage_error(&e))?;
            let q = encode_family(&family, n).map_err(|e| usage_error(&e.to_string()))?;
            Ok((q, n))
        }
        (None, None) => Err(usage_error("give a QCIR file or --problem")),
    }
}

fn cmd_solve(a: SolveArgs) -> ExitCode {
    if let Err(e) = resolve_seed(a.seed).map(|_| ()) {
        return usage_error(&e);
    }
    let (q, n) = match load_qbf_for_solve(&a) {
        Ok(x) => x,
        Err(code) => return code,
    };
    let ord_n = if n > 0 { n } else { 1 };
    let q = if a.qstatic {
        augment_with_qstatic(&q, &cell_order(a.order, ord_n))
    } else {
        q
    };
    let start = Instant::now();
    let mut st = match CegarState::init(&q, a.sms == Switch::On, &cell_order(a.order, ord_n)) {
        Ok(st) => st,
        Err(e) => return usage_error(&e.to_string()),
    };
    let outcome = st.solve_2qbf();
    let stats = st.stats();
    eprintln!(
        "iterations={} refinements={} sms_rejections={} wall_ms={}",
        stats.iterations,
        stats.refinements,
        stats.sms_rejections,
        start.elapsed().as_millis()
    );
    match outcome {
        QbfOutcome::True(w) => {
            println!("TRUE");
            if let Some(g) = witness_graph(&q.free, &w) {
                match graph_line(&g, a.format) {
                    Ok(line) => println!("{line}"),
                    Err(e) => eprintln!("error: {e}"),
                }
            }
            ExitCode::from(EXIT_TRUE)
        }
        QbfOutcome::False => {
            println!("FALSE");
            ExitCode::from(EXIT_FALSE)
        }
    }
}

fn cmd_enumerate(a: EnumerateArgs) -> ExitCode {
    if let Err(e) = resolve_seed(a.seed).map(|_| ()) {
        return usage_error(&e);
    }
    if a.critical && a.family.problem != Problem::Treewidth {
        return usage_error("--critical is only accepted by the treewidth family");
    }
    let family = match build_family(a.family.problem, a.family.k, a.family.variant, a.family.maximal)
    {
        Ok(f) => f,
        Err(e) => return usage_error(&e),
    };
    let n = a.family.n;
    let q = match encode_family(&family, n) {
        Ok(q) => q,
        Err(e) => return usage_error(&e.to_string()),
    };
    let q = if a.qstatic {
        augment_with_qstatic(&q, &cell_order(a.order, n))
    } else {
        q
    };
    let start = Instant::now();
    let mut st = match CegarState::init(&q, a.sms == Switch::On, &cell_order(a.order, n)) {
        Ok(st) => st,
        Err(e) => return usage_error(&e.to_string()),
    };
    let (sols, complete) = st.enumerate(a.limit);
    let mut graphs: Vec<Graph> = Vec::with_capacity(sols.len());
    for w in &sols {
        let mut g = Graph::empty(n);
        for (i, j) in all_pairs(n) {
            if w[&edge_var_name(i, j)] {
                g.set_edge(i, j, true);
            }
        }
        graphs.push(g);
    }
    if family == Family::Snark {
        graphs.retain(|g| oracle::connectivity_report(g).two_connected);
    }
    if a.critical {
        graphs = match filter_treewidth_critical(&graphs) {
            Ok(g) => g,
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
        };
    }
    for g in &graphs {
        match graph_line(g, a.format) {
            Ok(line) => println!("{line}"),
            Err(e) => {
                eprintln!("error: {e}");
                return ExitCode::FAILURE;
            }
        }
    }
    println!("count={} complete={}", graphs.len(), complete);
    let stats = st.stats();
    eprintln!(
        "iterations={} refinements={} sms_rejections={} wall_ms={}",
        stats.iterations,
        stats.refinements,
        stats.sms_rejections,
        start.elapsed().as_millis()
    );
    ExitCode::SUCCESS
}

fn fmt_opt<T: std::fmt::Display>(x: Option<T>) -> String {
    match x {
        Some(v) => v.to_string(),
        None => "na".into(),
    }
}

fn cmd_check(a: CheckArgs) -> ExitCode {
    let family = match a.problem {
        Some(p) => match build_family(p, a.k, a.variant, a.maximal) {
            Ok(f) => Some(f),
            Err(e) => return usage_error(&e),
        },
        None => None,
    };
    let text = if a.input == "-" {
        let mut s = String::new();
        if let Err(e) = std::io::stdin().read_to_string(&mut s) {
            eprintln!("error: cannot read stdin: {e}");
            return ExitCode::FAILURE;
        }
        s
    } else {
        match std::fs::read_to_string(&a.input) {
            Ok(s) => s,
            Err(e) => {
                eprintln!("error: cannot read {}: {e}", a.input);
                return ExitCode::FAILURE;
            }
        }
    };
    let mut had_errors = false;
    for (ln, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with("count=") {
            continue;
        }
        let g = match parse_graph_line(line) {
            Ok(g) => g,
            Err(e) => {
                eprintln!("line {}: error: {e}", ln + 1);
                had_errors = true;
                continue;
            }
        };
        let r = oracle::property_report(&g);
        let mut out = format!(
            "n={} edges={} chromatic={} girth={} treewidth={} domination={} \
             three_edge_colorable={} zero_one_zero_colorable={} connected={} \
             two_connected={} three_connected={} cubic={} bipartite={} \
             triangle_free={} square_free={}",
            r.n,
            r.edges,
            r.chromatic_number,
            fmt_opt(r.girth),
            fmt_opt(r.treewidth),
            fmt_opt(r.domination_number),
            r.three_edge_colorable,
            fmt_opt(r.zero_one_zero_colorable),
            r.connectivity.connected,
            r.connectivity.two_connected,
            r.connectivity.three_connected,
            r.connectivity.cubic,
            r.connectivity.bipartite,
            r.connectivity.triangle_free,
            r.connectivity.square_free,
        );
        if let Some(f) = &family {
            match oracle::satisfies_family(&g, f) {
                Ok(sat) => out.push_str(&format!(" satisfies={sat}")),
                Err(e) => {
                    eprintln!("line {}: error: {e}", ln + 1);
                    had_errors = true;
                    continue;
                }
            }
        }
        println!("{out}");
    }
    if had_errors {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}

fn main() -> ExitCode {
    match Cli::parse().cmd {
        Cmd::Encode(a) => cmd_encode(a),
        Cmd::Solve(a) => cmd_solve(a),
        Cmd::Enumerate(a) => cmd_enumerate(a),
        Cmd::Check(a) => cmd_check(a),
    }
}
