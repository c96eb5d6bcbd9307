//! One PASS/FAIL line per acceptance criterion. All tolerances are pinned below.

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::PathBuf;
use std::sync::OnceLock;
use std::time::Instant;

use gupb_core::catalog;
use gupb_core::filter::{filter, group_digits, FilterOptions, FilterReport};
use gupb_core::gen::{Connectivity, EnumerationSpec};
use gupb_core::n11::check_n11_infeasibility;
use gupb_core::propagate::propagate_equalities;
use gupb_core::repr::{rank_of_subset, Mode};
use gupb_core::scenario::{
    emit_report, generate_cached, run_scenario, verify_fixture, FilterResult, LogAnalysis, ReportFormat, ScenarioConfig,
    ScenarioEvidence, ScenarioName, ScreenResult, VerdictStatus,
};
use gupb_core::{canonical_form, find_induced_embedding, Graph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Residual allowed for the algebraic fixture and its field root.
const ALGEBRAIC_TOL: f64 = 1e-9;
/// Exact criteria compare integers or exact arithmetic; no tolerance.
const EXACT: f64 = 0.0;
/// Runtime budgets from the criteria, in seconds.
const GEN_13_BUDGET: f64 = 120.0;
const FILTER_13_BUDGET: f64 = 60.0;
const GEN_14_BUDGET: f64 = 1800.0;

type Check = std::result::Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg.into())
    }
}

fn cache_dir() -> &'static PathBuf {
    static DIR: OnceLock<PathBuf> = OnceLock::new();
    DIR.get_or_init(|| match std::env::var_os("GUPB_LAB_CACHE").filter(|v| !v.is_empty()) {
        Some(d) => PathBuf::from(d),
        None => {
            let d = std::env::temp_dir().join(format!("gupb-acceptance-{}", std::process::id()));
            std::fs::create_dir_all(&d).expect("cache dir");
            d
        }
    })
}

fn config() -> ScenarioConfig {
    ScenarioConfig { cache: Some(cache_dir().clone()), ..Default::default() }
}

fn family(n: usize, r: usize, c: Connectivity) -> Vec<Graph> {
    generate_cached(&EnumerationSpec::new(n, r, c), Some(cache_dir())).expect("enumeration")
}

fn evidence(name: ScenarioName) -> ScenarioEvidence {
    static RUNS: OnceLock<std::sync::Mutex<BTreeMap<&'static str, ScenarioEvidence>>> = OnceLock::new();
    let runs = RUNS.get_or_init(Default::default);
    if let Some(ev) = runs.lock().unwrap().get(name.as_str()) {
        return ev.clone();
    }
    let ev = run_scenario(name, &config()).expect("scenario runs");
    runs.lock().unwrap().insert(name.as_str(), ev.clone());
    ev
}

fn filter_step(ev: &ScenarioEvidence) -> FilterResult {
    serde_json::from_value(ev.step("filter").expect("filter step").result.clone()).expect("filter result")
}

fn analyses(ev: &ScenarioEvidence) -> Vec<(String, LogAnalysis)> {
    ev.steps_of("analyse-log")
        .map(|s| (s.note.clone(), serde_json::from_value(s.result.clone()).expect("log analysis")))
        .collect()
}

fn check_rows(r: &FilterReport, contained: &[usize], cumulative: &[usize]) -> std::result::Result<(), String> {
    let got_c: Vec<usize> = r.rows.iter().map(|x| x.contained.unwrap_or(usize::MAX)).collect();
    let got_e: Vec<usize> = r.rows.iter().map(|x| x.cumulative_eliminated).collect();
    if !contained.is_empty() {
        ensure(got_c == contained, format!("containment {got_c:?}, expected {contained:?}"))?;
    }
    ensure(got_e == cumulative, format!("cumulative {got_e:?}, expected {cumulative:?}"))
}

fn c1() -> Check {
    let t = Instant::now();
    let gs = family(13, 4, Connectivity::ConnectedOnly);
    let gen = t.elapsed().as_secs_f64();
    ensure(gs.len() == 10_778, format!("{} graphs", gs.len()))?;
    let t = Instant::now();
    let r = filter(&gs, &catalog::obstruction_set("O3").unwrap(), FilterOptions { full_counts: true });
    let filt = t.elapsed().as_secs_f64();
    let names: Vec<&str> = r.rows.iter().map(|x| x.pattern.as_str()).collect();
    ensure(names == ["A6", "K5", "H5", "C4"], format!("row order {names:?}"))?;
    check_rows(&r, &[10_672, 8_919, 10_662, 671], &[10_672, 10_767, 10_776, 10_777])?;
    ensure(r.survivors.len() == 1, format!("{} survivors", r.survivors.len()))?;
    let m = catalog::get_graph("M5057").unwrap();
    ensure(canonical_form(&gs[r.survivors[0].index]) == canonical_form(&m), "survivor is not M5057")?;
    ensure(gen <= GEN_13_BUDGET && filt <= FILTER_13_BUDGET, format!("too slow: {gen:.1}s + {filt:.1}s"))?;
    Ok(format!("10 672 / 8 919 / 10 662 / 671, cumulative to 10 777, survivor M5057 ({gen:.1}s gen, {filt:.2}s filter)"))
}

fn c2() -> Check {
    let t = Instant::now();
    let gs = family(14, 4, Connectivity::ConnectedOnly);
    let gen = t.elapsed().as_secs_f64();
    // 88 168 is the standard count and equals 88 162 eliminated + 6 survivors;
    // the criterion's 88 186 is inconsistent with its own elimination row
    ensure(gs.len() == 88_168, format!("{} graphs", gs.len()))?;
    ensure(gen <= GEN_14_BUDGET, format!("generation took {gen:.0}s"))?;
    let r = filter(&gs, &catalog::obstruction_set("O3hat").unwrap(), FilterOptions { full_counts: true });
    check_rows(&r, &[], &[87_868, 88_139, 88_158, 88_161, 88_162])?;
    let n11 = r.rows.iter().find(|x| x.pattern == "N11hat").and_then(|x| x.contained);
    ensure(n11 == Some(33), format!("N11hat contained in {n11:?}"))?;
    ensure(r.survivors.len() == 6, format!("{} survivors", r.survivors.len()))?;
    let mut names: Vec<&str> = r.survivors.iter().filter_map(|s| catalog::identify(&gs[s.index])).collect();
    names.sort();
    ensure(
        names == ["N11743", "N2359", "N36919", "N87949", "N87956", "N87957"],
        format!("survivors {names:?}"),
    )?;
    Ok(format!("input {} (criterion text says 88 186), cumulative to 88 162, N11hat in 33, six survivors ({gen:.0}s gen)", group_digits(gs.len())))
}

fn c3() -> Check {
    let ev = evidence(ScenarioName::Qutrit13);
    ensure(ev.verdict.status == VerdictStatus::Eliminated, format!("status {:?}", ev.verdict.status))?;
    ensure(ev.verdict.conclusion == "no 13-element three-qutrit GUPB exists", ev.verdict.conclusion.clone())?;
    let f = filter_step(&ev);
    ensure(f.survivors.len() == 1 && f.survivors[0].name.as_deref() == Some("M5057"), "connected survivor is not M5057")?;
    let all = analyses(&ev);
    let (_, m) = all
        .iter()
        .find(|(_, a)| a.components.len() == 1 && a.components[0].name.as_deref() == Some("M5057"))
        .ok_or("no M5057 analysis")?;
    ensure(m.components[0].forced == vec![vec![2, 3], vec![8, 9, 10]], format!("M5057 forced {:?}", m.components[0].forced))?;
    let span = m.span.as_ref().ok_or("M5057 has no span check")?;
    ensure(m.eliminated && !span.satisfied && span.tuple_size == 5, "M5057 not eliminated by the span condition")?;
    let disc: Vec<&LogAnalysis> = all.iter().filter(|(_, a)| a.components.len() > 1).map(|(_, a)| a).collect();
    ensure(disc.len() == 8, format!("{} disconnected analyses", disc.len()))?;
    ensure(disc.iter().all(|a| a.eliminated), "a disconnected graph survives")?;
    let by_clique = disc
        .iter()
        .filter(|a| a.components.iter().any(|c| c.name.as_deref() == Some("clique5") && c.impossible))
        .count();
    let d7b = disc
        .iter()
        .filter(|a| {
            a.components.iter().any(|c| c.name.as_deref() == Some("D7b") && c.impossible && c.obstruction.as_deref() == Some("H5"))
        })
        .count();
    let d7a = disc
        .iter()
        .filter(|a| {
            let mut names: Vec<&str> = a.components.iter().filter_map(|c| c.name.as_deref()).collect();
            names.sort();
            names == ["D6", "D7a"] && a.components.iter().all(|c| !c.impossible) && a.span.as_ref().is_some_and(|s| !s.satisfied)
        })
        .count();
    ensure(by_clique == 6 && d7b == 1 && d7a == 1, format!("clique5 {by_clique}, D7b via H5 {d7b}, D6+D7a by span {d7a}"))?;
    Ok("M5057 forced {v3,v4},{v9,v10,v11} violates spanning; 8 of 8 disconnected eliminated (6 clique, D7b via H5, D6+D7a by span)".into())
}

fn c4() -> Check {
    let exact = [
        "M5057_FOR3", "N2359_FOR3", "N11743_FOR3", "N87949_FOR3", "N87956_FOR3", "N87957_FOR3", "L94_FOR3", "L94_FOR4",
        "g254_FOR3", "g411_FOR3", "g501_FOR3", "heawood_FOR4", "petersen_FOR3", "P3_FOR3",
    ];
    for name in exact {
        let c = verify_fixture(name).map_err(|e| format!("{name}: {e}"))?;
        ensure(c.mode == Mode::Exact, format!("{name} is not exact"))?;
        ensure(c.pass && c.violations == 0, format!("{name}: {} violations", c.violations))?;
        ensure(c.max_edge_residual == EXACT && c.min_non_edge > 0.0, format!("{name}: residual {}", c.max_edge_residual))?;
    }
    let rank = rank_of_subset(&catalog::get_fixture("M5057_FOR3").unwrap().rep, &[2, 3, 8, 9, 10]).unwrap();
    ensure(rank == 2, format!("rank {rank}"))?;
    let a = verify_fixture("N36919_FOR3").map_err(|e| e.to_string())?;
    let root = a.field_root_residual.unwrap_or(f64::INFINITY);
    ensure(a.mode == Mode::Algebraic && a.pass, "N36919 algebraic fixture fails")?;
    ensure(a.max_edge_residual < ALGEBRAIC_TOL && root < ALGEBRAIC_TOL, format!("N36919 residuals {} / {root}", a.max_edge_residual))?;
    Ok(format!("{} exact fixtures, rank {{v3,v4,v9,v10,v11}} = 2, N36919 residual {:.1e}, root {root:.1e}", exact.len(), a.max_edge_residual))
}

fn c5() -> Check {
    for (d, names) in [(3, &["C4", "H5", "K5", "A6", "L6", "D7b"][..]), (4, &["E6", "E6bar", "W7bars", "B6circ", "C4_3"][..])] {
        for name in names {
            let g = catalog::get_graph(name).unwrap();
            let p = propagate_equalities(&g, d);
            let proof = p.proof().ok_or(format!("{name} not impossible at d={d}"))?;
            ensure(proof.replay(&g, d), format!("{name} proof does not replay"))?;
        }
    }
    let pinned: &[(&str, usize, &[&[usize]])] = &[
        ("diamond", 3, &[&[1, 3]]),
        ("D6", 3, &[&[0, 5], &[1, 4], &[2, 3]]),
        ("D7a", 3, &[&[2, 3, 4]]),
        ("M5057", 3, &[&[2, 3], &[8, 9, 10]]),
        ("P3", 3, &[&[6, 7]]),
        ("N2359", 3, &[&[2, 3, 4], &[9, 10, 11]]),
        ("N87949", 3, &[&[1, 2, 3], &[8, 9, 10]]),
        ("N11743", 3, &[&[1, 4], &[2, 3], &[7, 8], &[9, 10], &[11, 12, 13]]),
        ("N87956", 3, &[&[0, 5], &[1, 2], &[3, 4], &[6, 7], &[8, 9], &[10, 11], &[12, 13]]),
        ("N87957", 3, &[&[0, 5], &[1, 2], &[3, 4], &[10, 11], &[12, 13]]),
        ("N36919", 3, &[&[2, 3], &[6, 7], &[8, 9]]),
        ("N80015", 3, &[&[9, 12], &[10, 11]]),
        ("g254", 3, &[&[6, 7], &[8, 9], &[11, 12]]),
        ("g411", 3, &[&[1, 2], &[10, 11]]),
        ("B5", 4, &[&[1, 4]]),
    ];
    for (name, d, want) in pinned {
        let p = propagate_equalities(&catalog::get_graph(name).unwrap(), *d);
        let want: Vec<Vec<usize>> = want.iter().map(|c| c.to_vec()).collect();
        ensure(!p.is_impossible() && p.forced == want, format!("{name}: forced {:?}, expected {want:?}", p.forced))?;
    }
    for (parts, d, size) in [([4usize, 4], 3, 4), ([3, 3], 3, 3)] {
        let g = Graph::complete_multipartite(&parts);
        let p = propagate_equalities(&g, d);
        ensure(!p.is_impossible() && !p.branches.is_empty(), format!("K{},{} refuted", parts[0], parts[1]))?;
        ensure(
            p.branches.iter().all(|b| b.iter().filter(|c| c.len() == size).count() == 1),
            format!("K{},{}: branches {:?}", parts[0], parts[1], p.branches),
        )?;
    }
    Ok(format!("11 impossible with replayed proofs, {} graphs with pinned classes, K4,4 and K3,3 one class per branch", pinned.len()))
}

fn c6() -> Check {
    use Connectivity::*;
    let counts = [
        (5, 4, All, 1),
        (6, 4, All, 1),
        (7, 4, All, 2),
        (8, 4, All, 6),
        (13, 4, ConnectedOnly, 10_778),
        (13, 4, DisconnectedOnly, 8),
        // see C2 for 88 168 against 88 186
        (14, 4, ConnectedOnly, 88_168),
        (14, 4, DisconnectedOnly, 25),
        (14, 3, ConnectedOnly, 509),
        (14, 3, DisconnectedOnly, 31),
        (12, 8, All, 94),
        (11, 8, All, 6),
        (10, 8, All, 1),
        (9, 8, All, 1),
    ];
    let mut hist = BTreeMap::new();
    for (n, r, c, want) in counts {
        let gs = family(n, r, c);
        ensure(gs.len() == want, format!("({n},{r},{c:?}): {} graphs, expected {want}", gs.len()))?;
        if c == ConnectedOnly && n >= 13 {
            let mut h: BTreeMap<usize, usize> = BTreeMap::new();
            for g in &gs {
                *h.entry(g.girth().unwrap_or(usize::MAX)).or_default() += 1;
            }
            hist.insert((n, r), h);
        }
    }
    let at = |k: (usize, usize), girth: usize| hist[&k].get(&girth).copied().unwrap_or(0);
    let from = |k: (usize, usize), girth: usize| hist[&k].range(girth..).map(|(_, c)| c).sum::<usize>();
    ensure(at((13, 4), 4) == 31, format!("(13,4) girth histogram {:?}", hist[&(13, 4)]))?;
    ensure(at((14, 4), 4) == 220, format!("(14,4) girth histogram {:?}", hist[&(14, 4)]))?;
    ensure(from((14, 3), 5) == 9 && at((14, 3), 6) == 1, format!("(14,3) girth histogram {:?}", hist[&(14, 3)]))?;
    Ok("14 family counts; girth 4: 31 (13,4) and 220 (14,4); cubic girth >= 5: 9, girth 6: 1".into())
}

fn c7() -> Check {
    let ev = evidence(ScenarioName::Qutrit14Cubic);
    let f = filter_step(&ev);
    let names: Vec<&str> = f.report.rows.iter().map(|r| r.pattern.as_str()).collect();
    ensure(names == ["H5", "K5", "A6"], format!("patterns {names:?}"))?;
    ensure(f.report.total_input == 509 && f.survivors.len() == 57, format!("{} -> {}", f.report.total_input, f.survivors.len()))?;
    let g = |pred: &dyn Fn(usize) -> bool| f.survivors.iter().filter(|s| s.girth.is_some_and(pred)).count();
    let split = (g(&|x| x == 3), g(&|x| x == 4), g(&|x| x >= 5));
    ensure(split == (42, 6, 9), format!("girth split {split:?}"))?;
    Ok("509 -> 57, girth 3/4/>=5 = 42/6/9".into())
}

fn c8() -> Check {
    let ev = evidence(ScenarioName::Ququart24OcticDisconnected);
    let d: ScreenResult = ev
        .steps_of("screen")
        .map(|s| serde_json::from_value::<ScreenResult>(s.result.clone()).expect("screen"))
        .find(|s| s.total == 94)
        .ok_or("no 12-vertex screen")?;
    let w6: usize = d.clique_histogram.range(6..).map(|(_, c)| c).sum();
    let w5 = d.clique_histogram.get(&5).copied().unwrap_or(0);
    ensure(w6 == 6 && w5 == 75, format!("clique numbers {:?}", d.clique_histogram))?;
    let mut left = d.survivors.clone();
    left.sort();
    ensure(left == ["L70", "L94"], format!("left {left:?}"))?;
    let embed = ev.steps_of("embed").find(|s| s.note.contains("L70")).ok_or("no E6bar embedding step")?;
    let map = &embed.result["embedding"];
    let l70 = catalog::get_graph("L70").unwrap();
    let e6 = catalog::get_graph("E6bar").unwrap();
    ensure(map.is_array() && find_induced_embedding(&e6, &l70).is_some(), format!("E6bar in L70: {map}"))?;
    let all = analyses(&ev);
    let (_, l94) = all.iter().find(|(n, _)| n.contains("L94 + L94")).ok_or("no L94 + L94 analysis")?;
    let span = l94.span.as_ref().ok_or("no certificate")?;
    ensure(l94.eliminated && !span.satisfied && span.cases > 0, format!("L94 pair: {}", l94.reason))?;
    ensure(ev.verdict.status == VerdictStatus::Eliminated, format!("status {:?}", ev.verdict.status))?;
    let left = ev.verdict.counts.iter().find(|c| c.label == "surviving candidates").map(|c| c.value.clone());
    ensure(left.as_deref() == Some("0"), format!("surviving candidates {left:?}"))?;
    Ok(format!("6 with a 6-clique, 75 with a 5-clique, left L70 L94, E6bar in L70, L94 pair violates in all {} cases, 0 candidates", span.cases))
}

fn brute_embeds(p: &Graph, h: &Graph) -> bool {
    fn go(p: &Graph, h: &Graph, map: &mut Vec<usize>, used: u64) -> bool {
        let a = map.len();
        if a == p.n() {
            return true;
        }
        (0..h.n()).any(|x| {
            used >> x & 1 == 0 && (0..a).all(|b| p.has_edge(a, b) == h.has_edge(x, map[b])) && {
                map.push(x);
                let ok = go(p, h, map, used | 1 << x);
                map.pop();
                ok
            }
        })
    }
    p.n() <= h.n() && go(p, h, &mut vec![], 0)
}

fn c9() -> Check {
    let small: Vec<Graph> = catalog::all().iter().filter(|e| e.graph.n() <= 8).map(|e| e.graph.clone()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let mut hosts = small.clone();
    for i in 0..200 {
        let n = 6 + i % 4;
        let mut g = Graph::empty(n);
        for a in 0..n {
            for b in a + 1..n {
                if rng.gen_bool(0.5) {
                    g.add_edge(a, b);
                }
            }
        }
        hosts.push(g);
    }
    let mut pairs = 0;
    for p in &small {
        for h in &hosts {
            let fast = find_induced_embedding(p, h);
            ensure(fast.is_some() == brute_embeds(p, h), format!("embedding disagrees: {} vertices into {}", p.n(), h.n()))?;
            ensure(fast.is_none_or(|e| e.is_induced(p, h)), "embedding is not induced")?;
            pairs += 1;
        }
    }
    let mut ranks = 0;
    for f in catalog::all_fixtures().iter().filter(|f| f.rep.mode() == Mode::Exact) {
        let float = f.rep.as_float();
        let k = f.rep.len();
        for _ in 0..200 {
            let size = rng.gen_range(1..=k.min(f.d + 1));
            let mut s: Vec<usize> = (0..k).collect();
            for i in (1..k).rev() {
                s.swap(i, rng.gen_range(0..=i));
            }
            s.truncate(size);
            let (a, b) = (rank_of_subset(&f.rep, &s).unwrap(), rank_of_subset(&float, &s).unwrap());
            ensure(a == b, format!("{} {s:?}: exact {a}, float {b}", f.name))?;
            ranks += 1;
        }
    }
    let n11 = check_n11_infeasibility();
    ensure(n11.graph_checks && n11.parametrization_checks && n11.infeasible, "N11hat argument does not certify")?;
    Ok(format!("{pairs} embedding pairs and {ranks} ranks agree; N11hat infeasible symbolically"))
}

fn c10() -> Check {
    let cfg = config();
    for name in ScenarioName::ALL {
        let first = emit_report(&evidence(name), ReportFormat::Json).unwrap();
        let second = emit_report(&run_scenario(name, &cfg).map_err(|e| e.to_string())?, ReportFormat::Json).unwrap();
        ensure(first == second, format!("{} differs between runs", name.as_str()))?;
        let back: ScenarioEvidence = serde_json::from_str(&first).map_err(|e| e.to_string())?;
        ensure(emit_report(&back, ReportFormat::Json).unwrap() == first, format!("{} does not roundtrip", name.as_str()))?;
    }
    Ok("all five scenarios byte-identical across two runs".into())
}

fn main() {
    let criteria: [(&str, fn() -> Check); 10] = [
        ("C1 13-vertex quartic filter", c1),
        ("C2 14-vertex quartic filter", c2),
        ("C3 qutrit13 verdict", c3),
        ("C4 exact fixtures", c4),
        ("C5 propagation", c5),
        ("C6 enumeration counts", c6),
        ("C7 cubic filter", c7),
        ("C8 ququart scenario", c8),
        ("C9 oracle equivalence", c9),
        ("C10 determinism", c10),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let t = Instant::now();
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            Err(e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default())
        });
        let secs = t.elapsed().as_secs_f64();
        match res {
            Ok(msg) => println!("PASS {name}: {msg} [{secs:.1}s]"),
            Err(msg) => {
                failed += 1;
                println!("FAIL {name}: {msg} [{secs:.1}s]");
            }
        }
    }
    if std::env::var_os("GUPB_LAB_CACHE").is_none() {
        let _ = std::fs::remove_dir_all(cache_dir());
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria pass");
}
