//! Scenario steps as self-contained operations.
//!
//! Every step is an [`Op`] value. Executing it again with the same context
//! reproduces the recorded result, and with it the digest.

use std::collections::{BTreeMap, HashMap};
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use super::bounds::{count_degree_sequences, decomposition_edge_feasible, gupb_lower_bound, required_log_regularity};
use super::families::{family_label, load, Source};
use crate::canon::canonical_form;
use crate::catalog;
use crate::embed::{find_induced_embedding, Matcher};
use crate::error::{Error, Result};
use crate::filter::{filter, girth_histogram, FilterOptions, FilterReport, ObstructionSet, Pattern};
use crate::gen::EnumerationSpec;
use crate::graph::Graph;
use crate::io::{parse_graph6, to_graph6};
use crate::n11::{check_n11_on, N11Proof};
use crate::propagate::{propagate_equalities, Proof};
use crate::repr::{orthogonality_graph, rank_of_subset, verify_representation, FloatTolerance, Mode, OgMode};
use crate::search::{solve_for, Outcome, SolveOptions};
use crate::span::{check_spanning_certificate, SpanCertificate, SpanReport};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "operation", content = "parameters", rename_all = "kebab-case")]
pub enum Op {
    LowerBound { d: usize, parties: usize },
    Regularity { d: usize, parties: usize, k: usize },
    EdgeFeasibility { n: usize, regularities: Vec<usize> },
    DegreeSequences { n: usize, degrees: Vec<usize> },
    Enumerate { family: EnumerationSpec },
    Filter { family: EnumerationSpec, d: usize, patterns: Vec<String>, full_counts: bool },
    CountContaining { family: EnumerationSpec, pattern: String },
    /// Per-graph elimination by clique number, then by the listed patterns.
    Screen { family: EnumerationSpec, d: usize, patterns: Vec<String> },
    Embed { pattern: String, graph: String },
    /// Component-wise FOR analysis of one LOG plus the spanning certificate.
    AnalyseLog { graph: String, d: usize, parties: usize, patterns: Vec<String> },
    Solve { graph: String, d: usize, options: SolveOptions },
    N11Check { graph: String },
    VerifyFixture { fixture: String },
    SubsetRank { fixture: String, subset: Vec<usize> },
    ProductBasis { fixture: String },
    /// A quoted number that is not recomputed.
    Constant { name: String, value: u64, provenance: String },
}

impl Op {
    pub fn name(&self) -> String {
        match serde_json::to_value(self) {
            Ok(Value::Object(m)) => m.get("operation").and_then(Value::as_str).unwrap_or("?").to_string(),
            _ => "?".into(),
        }
    }

    pub fn parameters(&self) -> Value {
        match serde_json::to_value(self) {
            Ok(Value::Object(mut m)) => m.remove("parameters").unwrap_or(Value::Null),
            _ => Value::Null,
        }
    }
}

/// SHA-256 over the compact JSON of operation, parameters, result and seed.
pub fn step_digest(op: &Op, result: &Value, seed: u64) -> String {
    let doc = json!({ "operation": op.name(), "parameters": op.parameters(), "result": result, "seed": seed });
    let h = Sha256::digest(doc.to_string().as_bytes());
    h.iter().map(|b| format!("{b:02x}")).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct InputRecord {
    pub family: String,
    /// `generated`, `ingested` or `literature-constant`.
    pub source: String,
    pub count: u64,
}

/// Shared state for executing operations: family source and loaded families.
pub struct Context {
    pub seed: u64,
    pub source: Source,
    pub cache: Option<PathBuf>,
    pub progress: bool,
    families: Mutex<HashMap<EnumerationSpec, Arc<Vec<Graph>>>>,
    inputs: Mutex<Vec<InputRecord>>,
}

impl Context {
    pub fn new(seed: u64, source: Source, cache: Option<PathBuf>) -> Self {
        Context { seed, source, cache, progress: false, families: Mutex::default(), inputs: Mutex::default() }
    }

    pub fn inputs(&self) -> Vec<InputRecord> {
        self.inputs.lock().expect("inputs lock").clone()
    }

    pub(crate) fn note_input(&self, rec: InputRecord) {
        let mut v = self.inputs.lock().expect("inputs lock");
        if !v.contains(&rec) {
            v.push(rec);
        }
    }

    pub fn family(&self, spec: &EnumerationSpec) -> Result<Arc<Vec<Graph>>> {
        if let Some(f) = self.families.lock().expect("family lock").get(spec) {
            return Ok(f.clone());
        }
        if self.progress {
            eprintln!("loading {}", family_label(spec));
        }
        let gs = Arc::new(load(spec, &self.source, self.cache.as_deref())?);
        let source = match self.source {
            Source::Generate => "generated",
            Source::Ingest(_) => "ingested",
        };
        self.note_input(InputRecord { family: family_label(spec), source: source.into(), count: gs.len() as u64 });
        self.families.lock().expect("family lock").insert(*spec, gs.clone());
        Ok(gs)
    }

    pub fn execute(&self, op: &Op) -> Result<Value> {
        if self.progress {
            eprintln!("step {}", op.name());
        }
        let v = match op {
            Op::LowerBound { d, parties } => serde_json::to_value(gupb_lower_bound(*d, *parties)?)?,
            Op::Regularity { d, parties, k } => serde_json::to_value(required_log_regularity(*d, *parties, *k)?)?,
            Op::EdgeFeasibility { n, regularities } => {
                serde_json::to_value(decomposition_edge_feasible(*n, regularities)?)?
            }
            Op::DegreeSequences { n, degrees } => json!({ "count": count_degree_sequences(*n, degrees).to_string() }),
            Op::Enumerate { family } => {
                let gs = self.family(family)?;
                let mut forms: Vec<String> = gs.iter().map(|g| canonical_form(g).to_hex()).collect();
                forms.sort_unstable();
                let h = Sha256::digest(forms.join("\n").as_bytes());
                json!({
                    "count": gs.len(),
                    "girth_histogram": girth_map(&gs),
                    "forms_digest": h.iter().map(|b| format!("{b:02x}")).collect::<String>(),
                })
            }
            Op::Filter { family, d, patterns, full_counts } => {
                let gs = self.family(family)?;
                let obs = obstruction_set(*d, patterns)?;
                let report = filter(&gs, &obs, FilterOptions { full_counts: *full_counts });
                serde_json::to_value(FilterResult::new(&gs, report))?
            }
            Op::CountContaining { family, pattern } => {
                let gs = self.family(family)?;
                let m = Matcher::new(&catalog::get_graph(pattern)?);
                use rayon::prelude::*;
                json!({ "count": gs.par_iter().filter(|g| m.is_contained_in(g)).count() })
            }
            Op::Screen { family, d, patterns } => {
                let gs = self.family(family)?;
                serde_json::to_value(screen(&gs, *d, patterns)?)?
            }
            Op::Embed { pattern, graph } => {
                let p = resolve_graph(pattern)?;
                let g = resolve_graph(graph)?;
                json!({ "embedding": find_induced_embedding(&p, &g).map(|e| e.map) })
            }
            Op::AnalyseLog { graph, d, parties, patterns } => {
                serde_json::to_value(analyse_log(&resolve_graph(graph)?, *d, *parties, patterns)?)?
            }
            Op::Solve { graph, d, options } => serde_json::to_value(solve(&resolve_graph(graph)?, *d, options)?)?,
            Op::N11Check { graph } => {
                let g = resolve_graph(graph)?;
                serde_json::to_value(n11_check(&g)?)?
            }
            Op::VerifyFixture { fixture } => serde_json::to_value(verify_fixture(fixture)?)?,
            Op::SubsetRank { fixture, subset } => {
                let f = catalog::get_fixture(fixture)?;
                json!({ "rank": rank_of_subset(&f.rep, subset)? })
            }
            Op::ProductBasis { fixture } => product_basis(fixture)?,
            Op::Constant { value, provenance, .. } => json!({ "value": value, "provenance": provenance }),
        };
        Ok(v)
    }
}

fn girth_map(gs: &[Graph]) -> BTreeMap<String, usize> {
    girth_histogram(gs)
        .into_iter()
        .map(|(g, c)| (g.map_or("acyclic".to_string(), |x| x.to_string()), c))
        .collect()
}

/// A catalog name or a graph6 string.
pub fn resolve_graph(s: &str) -> Result<Graph> {
    match catalog::get_graph(s) {
        Ok(g) => Ok(g),
        Err(_) => parse_graph6(s, 0).map_err(|_| Error::UnknownGraph(s.to_string())),
    }
}

/// Catalog name when the graph is a catalog entry, graph6 otherwise.
pub fn graph_ref(g: &Graph) -> String {
    match catalog::identify(g) {
        Some(name) if catalog::get_graph(name).is_ok_and(|c| &c == g) => name.to_string(),
        _ => to_graph6(g),
    }
}

fn obstruction_set(d: usize, patterns: &[String]) -> Result<ObstructionSet> {
    let patterns = patterns
        .iter()
        .map(|p| {
            let e = catalog::entry(p)?;
            Ok(Pattern { name: e.name.clone(), graph: e.graph.clone(), provenance: e.provenance.clone() })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ObstructionSet { dimension: d, patterns })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedGraph {
    pub index: usize,
    pub graph: String,
    pub name: Option<String>,
    pub girth: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterResult {
    pub report: FilterReport,
    pub survivors: Vec<NamedGraph>,
}

impl FilterResult {
    fn new(gs: &[Graph], report: FilterReport) -> Self {
        let survivors = report
            .survivors
            .iter()
            .map(|s| {
                let g = &gs[s.index];
                NamedGraph {
                    index: s.index,
                    graph: to_graph6(g),
                    name: catalog::identify(g).map(String::from),
                    girth: g.girth(),
                }
            })
            .collect();
        FilterResult { report, survivors }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreenedGraph {
    pub index: usize,
    pub graph: String,
    pub name: Option<String>,
    pub clique_number: usize,
    /// `clique` or the first embedded pattern; `None` for survivors.
    pub eliminated_by: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScreenResult {
    pub total: usize,
    pub d: usize,
    /// Clique number -> graphs, over the whole family.
    pub clique_histogram: BTreeMap<usize, usize>,
    pub eliminated_by_clique: usize,
    pub eliminated_by_pattern: BTreeMap<String, usize>,
    pub survivors: Vec<String>,
    pub graphs: Vec<ScreenedGraph>,
}

fn screen(gs: &[Graph], d: usize, patterns: &[String]) -> Result<ScreenResult> {
    let matchers: Vec<(String, Matcher)> = patterns
        .iter()
        .map(|p| Ok((catalog::entry(p)?.name.clone(), Matcher::new(&catalog::get_graph(p)?))))
        .collect::<Result<_>>()?;
    let mut out = ScreenResult {
        total: gs.len(),
        d,
        clique_histogram: BTreeMap::new(),
        eliminated_by_clique: 0,
        eliminated_by_pattern: BTreeMap::new(),
        survivors: vec![],
        graphs: vec![],
    };
    for (index, g) in gs.iter().enumerate() {
        let w = g.clique_number();
        *out.clique_histogram.entry(w).or_default() += 1;
        let eliminated_by = if w > d {
            out.eliminated_by_clique += 1;
            Some("clique".to_string())
        } else {
            matchers.iter().find(|(_, m)| m.is_contained_in(g)).map(|(name, _)| {
                *out.eliminated_by_pattern.entry(name.clone()).or_default() += 1;
                name.clone()
            })
        };
        let name = catalog::identify(g).map(String::from);
        let graph = to_graph6(g);
        if eliminated_by.is_none() {
            out.survivors.push(name.clone().unwrap_or_else(|| graph.clone()));
        }
        out.graphs.push(ScreenedGraph { index, graph, name, clique_number: w, eliminated_by });
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComponentReport {
    /// Vertices of the component in the LOG's labels.
    pub vertices: Vec<usize>,
    pub name: Option<String>,
    pub impossible: bool,
    pub proof: Option<Proof>,
    /// First listed pattern with an induced copy in the component.
    pub obstruction: Option<String>,
    /// Forced classes, in the LOG's labels.
    pub forced: Vec<Vec<usize>>,
    pub branches: usize,
    pub multipartite: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LogAnalysis {
    pub k: usize,
    pub components: Vec<ComponentReport>,
    pub eliminated: bool,
    pub reason: String,
    pub span: Option<SpanReport>,
}

fn describe_proof(p: &Proof) -> String {
    match p {
        Proof::CliqueBound { clique, d } => format!("{}-clique exceeds d={d}", clique.len()),
        Proof::Multipartite { parts, d } => format!("complete multipartite with {} parts exceeds d={d}", parts.len()),
        Proof::ForcedPair { u, w, .. } => format!("forced equality v{}=v{} contradicts distinct neighbourhoods", u + 1, w + 1),
        Proof::Square { x, u, y, w, .. } => {
            format!("square v{} v{} v{} v{} forces an impossible equality", x + 1, u + 1, y + 1, w + 1)
        }
        Proof::External { name, .. } => format!("dedicated argument {name}"),
    }
}

/// 1-based `{v3,v4}` notation.
pub fn classes_label(classes: &[Vec<usize>]) -> String {
    classes
        .iter()
        .map(|c| format!("{{{}}}", c.iter().map(|v| format!("v{}", v + 1)).collect::<Vec<_>>().join(",")))
        .collect::<Vec<_>>()
        .join(", ")
}

pub fn analyse_log(g: &Graph, d: usize, parties: usize, patterns: &[String]) -> Result<LogAnalysis> {
    let k = g.n();
    let matchers: Vec<(String, Matcher)> = patterns
        .iter()
        .map(|p| Ok((catalog::entry(p)?.name.clone(), Matcher::new(&catalog::get_graph(p)?))))
        .collect::<Result<_>>()?;
    let mut components = Vec::new();
    let mut cert = SpanCertificate::new(k);
    for verts in g.connected_components() {
        let c = g.induced_subgraph(&verts)?;
        let prop = propagate_equalities(&c, d);
        let obstruction = matchers.iter().find(|(_, m)| m.is_contained_in(&c)).map(|(n, _)| n.clone());
        let map = |cls: &[Vec<usize>]| -> Vec<Vec<usize>> {
            cls.iter().map(|cl| cl.iter().map(|&v| verts[v]).collect()).collect()
        };
        let branches: Vec<Vec<Vec<usize>>> = if prop.overflow {
            vec![map(&prop.forced)]
        } else {
            prop.branches.iter().map(|b| map(b)).collect()
        };
        let multipartite = prop.multipartite.as_ref().map(|p| map(p));
        let impossible = prop.is_impossible() || obstruction.is_some();
        if !impossible {
            cert.add_component_branches(&branches, 0);
            if let Some(parts) = &multipartite {
                if parts.len() > 1 {
                    cert.add_multipartite(parts, 0);
                }
            }
        }
        components.push(ComponentReport {
            name: catalog::identify(&c).map(String::from),
            impossible,
            proof: prop.proof().cloned(),
            obstruction,
            forced: map(&prop.forced),
            branches: branches.len(),
            multipartite,
            vertices: verts,
        });
    }
    if let Some(c) = components.iter().find(|c| c.impossible) {
        let what = c.name.clone().unwrap_or_else(|| format!("on {} vertices", c.vertices.len()));
        let mut why = Vec::new();
        if let Some(p) = &c.proof {
            why.push(describe_proof(p));
        }
        if let Some(o) = &c.obstruction {
            why.push(format!("contains {o}"));
        }
        let reason = format!("component {what} has no FOR({d}): {}", why.join("; "));
        return Ok(LogAnalysis { k, components, eliminated: true, reason, span: None });
    }
    let span = check_spanning_certificate(&cert, d, parties)?;
    let reason = if span.satisfied {
        format!(
            "every known rank-deficient set has at most {} vectors, below the tuple size {}",
            span.max_deficient, span.tuple_size
        )
    } else {
        let w = span.witness.clone().unwrap_or_default();
        format!(
            "{} local vectors {} span at most {} dimensions in every case, violating the spanning condition (tuple size {})",
            w.len(),
            classes_label(&[w.clone()]),
            d - 1,
            span.tuple_size
        )
    };
    Ok(LogAnalysis { k, components, eliminated: !span.satisfied, reason, span: Some(span) })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SolveSummary {
    pub outcome: String,
    pub proof: Option<Proof>,
    pub forced: Vec<Vec<usize>>,
    pub restarts: Option<usize>,
    pub best_residual: Option<f64>,
    pub max_edge_residual: Option<f64>,
    pub min_non_edge: Option<f64>,
    pub vectors: Option<String>,
}

fn solve(g: &Graph, d: usize, opts: &SolveOptions) -> Result<SolveSummary> {
    let v = solve_for(g, d, opts);
    let mut s = SolveSummary {
        outcome: v.label().into(),
        proof: None,
        forced: v.propagation.forced.clone(),
        restarts: None,
        best_residual: None,
        max_edge_residual: None,
        min_non_edge: None,
        vectors: None,
    };
    match &v.outcome {
        Outcome::Found(rep) => {
            let r = verify_representation(g, rep, FloatTolerance::default())?;
            s.max_edge_residual = Some(r.max_edge_residual);
            s.min_non_edge = Some(r.min_non_edge);
            s.vectors = Some(rep.to_text()?);
        }
        Outcome::Impossible(p) => s.proof = Some(p.clone()),
        Outcome::Unknown { restarts, best_residual } => {
            s.restarts = Some(*restarts);
            s.best_residual = Some(*best_residual);
        }
    }
    Ok(s)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct N11Result {
    pub embedding: Option<Vec<usize>>,
    pub proof: N11Proof,
    pub rules_out_for3: bool,
}

fn n11_check(g: &Graph) -> Result<N11Result> {
    let pattern = catalog::get_graph("N11hat")?;
    let embedding = find_induced_embedding(&pattern, g).map(|e| e.map);
    let proof = match &embedding {
        Some(map) => check_n11_on(&g.induced_subgraph(map)?),
        None => check_n11_on(&pattern),
    };
    let rules_out_for3 = embedding.is_some() && proof.infeasible;
    Ok(N11Result { embedding, proof, rules_out_for3 })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FixtureCheck {
    pub fixture: String,
    pub graph: Option<String>,
    pub d: usize,
    pub mode: Mode,
    pub pass: bool,
    pub violations: usize,
    pub max_edge_residual: f64,
    pub min_non_edge: f64,
    /// Residual of the isolated root for algebraic fixtures.
    pub field_root_residual: Option<f64>,
}

pub fn verify_fixture(name: &str) -> Result<FixtureCheck> {
    let f = catalog::get_fixture(name)?;
    let g = match &f.graph {
        Some(gname) => catalog::get_graph(gname)?,
        None => orthogonality_graph(&f.rep, OgMode::Exact)?,
    };
    let r = verify_representation(&g, &f.rep, FloatTolerance::default())?;
    let field_root_residual = (f.rep.mode() == Mode::Algebraic).then(|| catalog::cubic_field().root_residual());
    Ok(FixtureCheck {
        fixture: f.name.clone(),
        graph: f.graph.clone(),
        d: f.d,
        mode: f.rep.mode(),
        pass: r.pass,
        violations: r.violations.len(),
        max_edge_residual: r.max_edge_residual,
        min_non_edge: r.min_non_edge,
        field_root_residual,
    })
}

fn product_basis(name: &str) -> Result<Value> {
    let f = catalog::get_fixture(name)?;
    let parties = f
        .parties
        .as_ref()
        .ok_or_else(|| Error::InvalidInput(format!("fixture {name} has no per-party vectors")))?;
    let og = orthogonality_graph(&f.rep, OgMode::Exact)?;
    let logs = parties.iter().map(|p| orthogonality_graph(p, OgMode::Exact)).collect::<Result<Vec<_>>>()?;
    let mut union = Graph::empty(og.n());
    for l in &logs {
        for (u, v) in l.edges() {
            if !union.has_edge(u, v) {
                union.add_edge(u, v);
            }
        }
    }
    Ok(json!({
        "vectors": f.rep.len(),
        "d": f.d,
        "mutually_orthogonal": og == Graph::complete(og.n()),
        "log_union_complete": union == Graph::complete(og.n()),
        "log_edges": logs.iter().map(|l| l.edge_count()).collect::<Vec<_>>(),
    }))
}
