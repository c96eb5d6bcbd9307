//! Three ququarts, 24 elements: disconnected octic LOGs.

use super::ops::{LogAnalysis, Op, ScreenResult};
use super::{strings, BoundResult, Count, DegreeSpec, Run, Verdict, VerdictStatus};
use crate::catalog;
use crate::error::Result;
use crate::filter::group_digits;
use crate::gen::{Connectivity, EnumerationSpec};
use crate::io::to_graph6;

const OCTIC15: u64 = 1_470_293_676;
const OCTIC14: u64 = 3_459_386;

fn octic(n: usize) -> EnumerationSpec {
    EnumerationSpec::new(n, 8, Connectivity::All)
}

pub(super) fn octic_disconnected(run: &mut Run) -> Result<Verdict> {
    let b: BoundResult = run.exec_as("size lower bound", Op::LowerBound { d: 4, parties: 3 })?;
    let k = b.minimal_size as usize;
    let reg: DegreeSpec = run.exec_as("LOG degrees at 24 elements", Op::Regularity { d: 4, parties: 3, k })?;
    run.exec("degree sequences", Op::DegreeSequences { n: k, degrees: reg.degrees() })?;
    let c4_3 = strings(&["C4_3"]);
    let mut findings = vec![];
    let mut eliminated_all = true;
    let mut screens = Vec::new();
    for n in 9..=12 {
        run.exec(&format!("{n}-vertex octic graphs"), Op::Enumerate { family: octic(n) })?;
        let s: ScreenResult = run.exec_as(
            &format!("{n}-vertex octic components: cliques above 4, then C4_3"),
            Op::Screen { family: octic(n), d: 4, patterns: c4_3.clone() },
        )?;
        screens.push(s);
    }
    let (a, b_, c, d) = (&screens[0], &screens[1], &screens[2], &screens[3]);
    let omegas: Vec<String> = a.clique_histogram.keys().map(|w| w.to_string()).collect();
    findings.push(format!("type A: {} 9-vertex octic graph(s), clique number {}", a.total, omegas.join(", ")));
    findings.push(format!("type B: {} 10-vertex octic graph(s), {} with a 5-clique", b_.total, b_.eliminated_by_clique));
    findings.push(format!(
        "type C: {} 11-vertex octic graphs, {} with a 5-clique, {} containing C4_3",
        c.total,
        c.eliminated_by_clique,
        c.eliminated_by_pattern.values().sum::<usize>()
    ));
    let with6: usize = d.clique_histogram.range(6..).map(|(_, c)| c).sum();
    let with5 = d.clique_histogram.get(&5).copied().unwrap_or(0);
    findings.push(format!(
        "type D: {} 12-vertex octic graphs, {with6} with a 6-clique, {with5} with a 5-clique, {} containing C4_3; left: {}",
        d.total,
        d.eliminated_by_pattern.values().sum::<usize>(),
        d.survivors.join(", ")
    ));
    for s in &screens[..3] {
        eliminated_all &= s.survivors.is_empty();
    }
    // 13-vertex octic graphs are the complements of the 13-vertex quartic ones
    let q13: serde_json::Value =
        run.exec("13-vertex octic count via complements", Op::Enumerate { family: EnumerationSpec::new(13, 4, Connectivity::All) })?;
    let n13 = q13["count"].as_u64().unwrap_or(0);
    let c15: serde_json::Value = run.exec(
        "15-vertex octic count",
        Op::Constant { name: "octic graphs on 15 vertices".into(), value: OCTIC15, provenance: "literature constant".into() },
    )?;
    let c14: serde_json::Value = run.exec(
        "14-vertex octic count",
        Op::Constant { name: "octic graphs on 14 vertices".into(), value: OCTIC14, provenance: "literature constant".into() },
    )?;
    for (name, value) in [("octic graphs on 15 vertices", OCTIC15), ("octic graphs on 14 vertices", OCTIC14)] {
        run.ctx().note_input(super::InputRecord { family: name.into(), source: "literature-constant".into(), count: value });
    }
    let type_a = a.total as u64 * c15["value"].as_u64().unwrap_or(0);
    let type_b = b_.total as u64 * c14["value"].as_u64().unwrap_or(0);
    let type_c = c.total as u64 * n13;
    let m = d.total as u64;
    let type_d = m * (m + 1) / 2;

    // pairs of surviving 12-vertex components
    let mut left: Vec<String> = d.survivors.clone();
    left.sort();
    let mut pair_survivors = 0;
    for s in &left {
        run.exec(&format!("E6bar in {s}"), Op::Embed { pattern: "E6bar".into(), graph: s.clone() })?;
    }
    for (i, x) in left.iter().enumerate() {
        for y in &left[i..] {
            let (gx, gy) = (super::resolve_graph(x)?, super::resolve_graph(y)?);
            let union = gx.disjoint_union(&gy);
            let an: LogAnalysis = run.exec_as(
                &format!("LOG {x} + {y}"),
                Op::AnalyseLog {
                    graph: to_graph6(&union),
                    d: 4,
                    parties: 3,
                    patterns: catalog::obstruction_set("O4")?.names().into_iter().map(String::from).collect(),
                },
            )?;
            findings.push(format!("{x} + {y}: {}", an.reason));
            if !an.eliminated {
                pair_survivors += 1;
            }
        }
    }
    eliminated_all &= pair_survivors == 0;
    let counts = vec![
        Count { label: "type A (9+15)".into(), value: group_digits(type_a as usize) },
        Count { label: "type B (10+14)".into(), value: group_digits(type_b as usize) },
        Count { label: "type C (11+13)".into(), value: group_digits(type_c as usize) },
        Count { label: "type D (12+12)".into(), value: group_digits(type_d as usize) },
        Count { label: "surviving candidates".into(), value: pair_survivors.to_string() },
    ];
    let (status, conclusion) = if eliminated_all {
        (VerdictStatus::Eliminated, "no disconnected-octic LOG pair survives".to_string())
    } else {
        (VerdictStatus::Undecided, format!("{pair_survivors} disconnected-octic LOG candidates remain"))
    };
    let undecided = if eliminated_all { vec![] } else { vec![format!("{pair_survivors} type D pairs not eliminated")] };
    Ok(Verdict { status, conclusion, counts, findings, undecided })
}
