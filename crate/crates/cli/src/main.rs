use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use gupb_core::catalog;
use gupb_core::filter::{filter, FilterOptions, ObstructionSet, Pattern};
use gupb_core::gen::{enumerate_regular, Connectivity, EnumerationSpec};
use gupb_core::io::{read_graphs, to_edge_list, to_graph6, write_graph6};
use gupb_core::repr::{verify_representation, FloatTolerance, Representation};
use gupb_core::scenario::{self, ReportFormat, ScenarioConfig, ScenarioName, Source};
use gupb_core::search::{solve_for, Outcome, SolveOptions};
use gupb_core::span::check_single_party_spanning;
use gupb_core::{Error, Graph, Result};

#[derive(Parser)]
#[command(name = "gupb-lab", version, about = "Regular graph enumeration, obstruction filtering and FOR checks for GUPB local orthogonality graphs")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Enumerate r-regular graphs on n vertices as graph6.
    Generate(GenerateArgs),
    /// Remove graphs containing an obstruction as an induced subgraph.
    Filter(FilterArgs),
    /// Decide whether a graph has a faithful orthogonal representation.
    Solve(SolveArgs),
    /// Check a representation against a graph.
    Verify {
        #[arg(long)]
        graph: String,
        #[arg(long)]
        rep: PathBuf,
    },
    /// Spanning condition for one party's local vectors.
    Span {
        #[arg(long)]
        rep: PathBuf,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        d: usize,
        #[arg(long = "N")]
        parties: usize,
    },
    /// Run a named analysis end to end.
    Scenario(ScenarioArgs),
    /// Inspect the built-in graph catalog.
    Catalog {
        #[command(subcommand)]
        cmd: CatalogCmd,
    },
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    n: usize,
    #[arg(long)]
    r: usize,
    /// Connected graphs only (default).
    #[arg(long, conflicts_with_all = ["all", "disconnected"])]
    connected: bool,
    #[arg(long, conflicts_with = "disconnected")]
    all: bool,
    #[arg(long)]
    disconnected: bool,
    #[arg(long)]
    girth_min: Option<usize>,
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct FilterArgs {
    #[arg(long)]
    input: PathBuf,
    /// Set name (O3, O3hat, O3-cubic, O3-components, O4) or a graph file.
    #[arg(long)]
    obstructions: String,
    /// Dimension when the obstructions come from a file.
    #[arg(long, default_value_t = 3)]
    d: usize,
    /// Test every pattern on every graph.
    #[arg(long)]
    full_counts: bool,
    /// Write survivors here as graph6.
    #[arg(long)]
    survivors: Option<PathBuf>,
}

#[derive(Args)]
struct SolveArgs {
    /// Catalog name or graph file (first graph is used).
    #[arg(long)]
    graph: String,
    #[arg(long)]
    d: usize,
    #[arg(long, default_value_t = 200)]
    restarts: usize,
    #[arg(long, default_value_t = 5000)]
    iters: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    real: bool,
    /// Write the representation here when one is found.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Args)]
struct ScenarioArgs {
    name: String,
    /// Read families from graph6 files in this directory instead of generating.
    #[arg(long)]
    ingest: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Report file, `.json` or `.md`.
    #[arg(long)]
    report: Option<PathBuf>,
    #[arg(long)]
    restarts: Option<usize>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(short, long)]
    quiet: bool,
}

#[derive(Subcommand)]
enum CatalogCmd {
    List,
    Dump { name: String },
}

fn load_graph(s: &str) -> Result<Graph> {
    if let Ok(g) = catalog::get_graph(s) {
        return Ok(g);
    }
    let path = Path::new(s);
    if !path.exists() {
        return Err(Error::UnknownGraph(s.to_string()));
    }
    read_graphs(path)?.into_iter().next().ok_or_else(|| Error::InvalidInput(format!("{s}: no graph in file")))
}

fn obstructions(spec: &str, d: usize) -> Result<ObstructionSet> {
    if let Ok(set) = catalog::obstruction_set(spec) {
        return Ok(set);
    }
    let path = Path::new(spec);
    if !path.exists() {
        return Err(Error::InvalidInput(format!("{spec} is neither an obstruction set nor a file")));
    }
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("pattern");
    let patterns = read_graphs(path)?
        .into_iter()
        .enumerate()
        .map(|(i, graph)| {
            let name = catalog::identify(&graph).map_or_else(|| format!("{stem}#{}", i + 1), String::from);
            Pattern { name, graph, provenance: spec.to_string() }
        })
        .collect();
    Ok(ObstructionSet { dimension: d, patterns })
}

fn generate(a: GenerateArgs) -> Result<u8> {
    let conn = if a.all {
        Connectivity::All
    } else if a.disconnected {
        Connectivity::DisconnectedOnly
    } else {
        Connectivity::ConnectedOnly
    };
    let mut spec = EnumerationSpec::new(a.n, a.r, conn);
    spec.girth_min = a.girth_min;
    let graphs = enumerate_regular(&spec)?;
    match a.output {
        Some(p) => write_graph6(&p, &graphs)?,
        None => {
            for g in &graphs {
                println!("{}", to_graph6(g));
            }
        }
    }
    eprintln!("{} graphs", graphs.len());
    Ok(0)
}

fn run_filter(a: FilterArgs) -> Result<u8> {
    let graphs = read_graphs(&a.input)?;
    let obs = obstructions(&a.obstructions, a.d)?;
    let report = filter(&graphs, &obs, FilterOptions { full_counts: a.full_counts });
    print!("{}", report.to_table());
    for s in &report.survivors {
        let g = &graphs[s.index];
        let name = catalog::identify(g).unwrap_or("-");
        println!("survivor {} {} {}", s.index, name, to_graph6(g));
    }
    if let Some(p) = a.survivors {
        write_graph6(&p, report.survivors.iter().map(|s| &graphs[s.index]))?;
    }
    Ok(0)
}

fn classes(cs: &[Vec<usize>]) -> String {
    scenario::classes_label(cs)
}

fn solve(a: SolveArgs) -> Result<u8> {
    let g = load_graph(&a.graph)?;
    let opts = SolveOptions { real: a.real, ..SolveOptions::default().with_budget(a.restarts, a.iters).with_seed(a.seed) };
    let v = solve_for(&g, a.d, &opts);
    println!("FOR({}): {}", a.d, v.label());
    if !v.propagation.forced.is_empty() {
        println!("forced classes: {}", classes(&v.propagation.forced));
    }
    match &v.outcome {
        Outcome::Found(rep) => {
            let r = verify_representation(&g, rep, FloatTolerance::default())?;
            println!("max edge residual {:.2e}, min non-edge {:.3e}", r.max_edge_residual, r.min_non_edge);
            let text = rep.to_text()?;
            match a.output {
                Some(p) => std::fs::write(p, text)?,
                None => print!("{text}"),
            }
            Ok(0)
        }
        Outcome::Impossible(p) => {
            println!("proof: {}", serde_json::to_string(p)?);
            Ok(0)
        }
        Outcome::Unknown { restarts, best_residual } => {
            println!("no representation after {restarts} restarts, best residual {best_residual:.3e}");
            Ok(2)
        }
    }
}

fn verify(graph: &str, rep: &Path) -> Result<u8> {
    let g = load_graph(graph)?;
    let rep = Representation::read(rep)?;
    let r = verify_representation(&g, &rep, FloatTolerance::default())?;
    println!("{}", if r.pass { "faithful" } else { "not faithful" });
    println!("mode {:?}, max edge residual {:.2e}, min non-edge {:.3e}", r.mode, r.max_edge_residual, r.min_non_edge);
    for v in &r.violations {
        println!("v{} v{}: {:?} ({:.2e})", v.i + 1, v.j + 1, v.kind, v.magnitude);
    }
    Ok(if r.pass { 0 } else { 1 })
}

fn span(rep: &Path, k: usize, d: usize, parties: usize) -> Result<u8> {
    let rep = Representation::read(rep)?;
    let r = check_single_party_spanning(&rep, k, d, parties)?;
    println!("tuple size {}, largest deficient subset {}", r.tuple_size, r.max_deficient);
    match &r.witness {
        Some(w) => println!("violated: {} spans fewer than {d} dimensions", classes(std::slice::from_ref(w))),
        None => println!("satisfied"),
    }
    Ok(0)
}

fn run_scenario(a: ScenarioArgs) -> Result<u8> {
    let name: ScenarioName = a.name.parse()?;
    let mut cfg = ScenarioConfig::from_env();
    cfg.seed = a.seed;
    cfg.progress = !a.quiet;
    if let Some(dir) = a.ingest {
        cfg.source = Source::Ingest(dir);
    }
    if let Some(r) = a.restarts {
        cfg.solve.restarts = r;
    }
    if let Some(i) = a.iters {
        cfg.solve.iterations = i;
    }
    let ev = scenario::run_scenario(name, &cfg)?;
    if let Some(p) = &a.report {
        let fmt = ReportFormat::from_path(p)?;
        std::fs::write(p, scenario::emit_report(&ev, fmt)?)?;
    }
    let v = &ev.verdict;
    println!("{}: {}", ev.scenario, v.conclusion);
    for c in &v.counts {
        println!("  {}: {}", c.label, c.value);
    }
    for u in &v.undecided {
        println!("  undecided: {u}");
    }
    Ok(v.status.exit_code() as u8)
}

fn catalog_cmd(cmd: CatalogCmd) -> Result<u8> {
    match cmd {
        CatalogCmd::List => {
            for e in catalog::all() {
                let facts: Vec<String> = e.facts.iter().map(|f| f.to_string()).collect();
                println!("{:<10} n={:<3} m={:<4} {}", e.name, e.graph.n(), e.graph.edge_count(), facts.join(","));
            }
            println!("obstruction sets: {}", catalog::obstruction_set_names().join(", "));
            println!("vector sets: {}", catalog::fixture_names().join(", "));
        }
        CatalogCmd::Dump { name } => {
            if let Ok(f) = catalog::get_fixture(&name) {
                print!("{}", f.rep.to_text()?);
                return Ok(0);
            }
            let e = catalog::entry(&name)?;
            println!("# {}", e.name);
            println!("# {}", e.provenance);
            println!("# facts {}", e.facts.iter().map(|f| f.to_string()).collect::<Vec<_>>().join(","));
            println!("{}", to_edge_list(&e.graph));
            println!("# graph6 {}", to_graph6(&e.graph));
        }
    }
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let res = match cli.cmd {
        Cmd::Generate(a) => generate(a),
        Cmd::Filter(a) => run_filter(a),
        Cmd::Solve(a) => solve(a),
        Cmd::Verify { graph, rep } => verify(&graph, &rep),
        Cmd::Span { rep, k, d, parties } => span(&rep, k, d, parties),
        Cmd::Scenario(a) => run_scenario(a),
        Cmd::Catalog { cmd } => catalog_cmd(cmd),
    };
    match res {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
