//! Forbidden induced subgraph filtering with per-pattern statistics.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::canon::canonical_form;
use crate::embed::Matcher;
use crate::graph::Graph;

#[derive(Clone, Debug)]
pub struct Pattern {
    pub name: String,
    pub graph: Graph,
    pub provenance: String,
}

/// Ordered list of graphs certified to admit no faithful representation in
/// `dimension`.
#[derive(Clone, Debug)]
pub struct ObstructionSet {
    pub dimension: usize,
    pub patterns: Vec<Pattern>,
}

impl ObstructionSet {
    pub fn names(&self) -> Vec<&str> {
        self.patterns.iter().map(|p| p.name.as_str()).collect()
    }

    /// Same set with patterns in the given name order.
    pub fn reordered(&self, names: &[&str]) -> Option<ObstructionSet> {
        let patterns = names
            .iter()
            .map(|n| self.patterns.iter().find(|p| p.name == *n).cloned())
            .collect::<Option<Vec<_>>>()?;
        Some(ObstructionSet { dimension: self.dimension, patterns })
    }

    pub fn without(&self, name: &str) -> ObstructionSet {
        ObstructionSet {
            dimension: self.dimension,
            patterns: self.patterns.iter().filter(|p| p.name != name).cloned().collect(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PatternRow {
    pub pattern: String,
    /// Input graphs containing the pattern; `None` in fast mode.
    pub contained: Option<usize>,
    pub cumulative_eliminated: usize,
    pub remaining: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Survivor {
    pub canonical_form: String,
    pub index: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FilterReport {
    pub dimension: usize,
    pub total_input: usize,
    pub rows: Vec<PatternRow>,
    pub survivors: Vec<Survivor>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FilterOptions {
    /// Test every pattern on every graph so containment counts are exact.
    pub full_counts: bool,
}

impl Default for FilterOptions {
    fn default() -> Self {
        FilterOptions { full_counts: true }
    }
}

struct Outcome {
    /// Pattern indices (set order) known to embed.
    hits: u64,
    first_hit: Option<usize>,
}

pub fn filter(graphs: &[Graph], obs: &ObstructionSet, opts: FilterOptions) -> FilterReport {
    let k = obs.patterns.len();
    assert!(k <= 64, "at most 64 patterns");
    let matchers: Vec<Matcher> = obs.patterns.iter().map(|p| Matcher::new(&p.graph)).collect();
    let mut by_size: Vec<usize> = (0..k).collect();
    by_size.sort_by_key(|&i| (obs.patterns[i].graph.n(), i));
    let outcomes: Vec<Outcome> = graphs
        .par_iter()
        .map(|g| {
            if opts.full_counts {
                let mut hits = 0u64;
                for (i, m) in matchers.iter().enumerate() {
                    if m.is_contained_in(g) {
                        hits |= 1 << i;
                    }
                }
                let first_hit = (hits != 0).then(|| hits.trailing_zeros() as usize);
                Outcome { hits, first_hit }
            } else {
                // cheapest patterns decide survival; then locate the first hit in set order
                let mut tested_false = 0u64;
                let mut hit = None;
                for &i in &by_size {
                    if matchers[i].is_contained_in(g) {
                        hit = Some(i);
                        break;
                    }
                    tested_false |= 1 << i;
                }
                let first_hit = hit.map(|h| {
                    (0..h)
                        .find(|&i| tested_false >> i & 1 == 0 && matchers[i].is_contained_in(g))
                        .unwrap_or(h)
                });
                Outcome { hits: 0, first_hit }
            }
        })
        .collect();
    let total = graphs.len();
    let mut rows = Vec::with_capacity(k);
    let mut cumulative = 0;
    for (i, p) in obs.patterns.iter().enumerate() {
        cumulative += outcomes.iter().filter(|o| o.first_hit == Some(i)).count();
        let contained = opts
            .full_counts
            .then(|| outcomes.iter().filter(|o| o.hits >> i & 1 == 1).count());
        rows.push(PatternRow {
            pattern: p.name.clone(),
            contained,
            cumulative_eliminated: cumulative,
            remaining: total - cumulative,
        });
    }
    let mut survivors: Vec<Survivor> = outcomes
        .iter()
        .enumerate()
        .filter(|(_, o)| o.first_hit.is_none())
        .map(|(index, _)| Survivor { canonical_form: canonical_form(&graphs[index]).to_hex(), index })
        .collect();
    survivors.sort_by(|a, b| a.canonical_form.cmp(&b.canonical_form).then(a.index.cmp(&b.index)));
    FilterReport { dimension: obs.dimension, total_input: total, rows, survivors }
}

/// Graphs of the family that survive every pattern.
pub fn survivors<'a>(graphs: &'a [Graph], obs: &ObstructionSet) -> Vec<&'a Graph> {
    let report = filter(graphs, obs, FilterOptions { full_counts: false });
    let mut idx: Vec<usize> = report.survivors.iter().map(|s| s.index).collect();
    idx.sort_unstable();
    idx.into_iter().map(|i| &graphs[i]).collect()
}

pub fn count_containing(graphs: &[Graph], pattern: &Graph) -> usize {
    let m = Matcher::new(pattern);
    graphs.par_iter().filter(|g| m.is_contained_in(g)).count()
}

/// Girth value (`None` for forests) to number of graphs.
pub fn girth_histogram(graphs: &[Graph]) -> BTreeMap<Option<usize>, usize> {
    let girths: Vec<Option<usize>> = graphs.par_iter().map(Graph::girth).collect();
    let mut h = BTreeMap::new();
    for g in girths {
        *h.entry(g).or_insert(0) += 1;
    }
    h
}

impl FilterReport {
    pub fn survivor_count(&self) -> usize {
        self.survivors.len()
    }

    /// Aligned text table: pattern, containment, cumulative eliminations,
    /// graphs left.
    pub fn to_table(&self) -> String {
        let header = ["Pattern", "Contained", "Eliminated", "Left"];
        let body: Vec<[String; 4]> = self
            .rows
            .iter()
            .map(|r| {
                [
                    r.pattern.clone(),
                    r.contained.map_or("-".into(), group_digits),
                    group_digits(r.cumulative_eliminated),
                    group_digits(r.remaining),
                ]
            })
            .collect();
        let mut widths = header.map(str::len);
        for row in &body {
            for (w, c) in widths.iter_mut().zip(row) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        let line = |cells: [&str; 4], out: &mut String| {
            let _ = writeln!(
                out,
                "{:<w0$}  {:>w1$}  {:>w2$}  {:>w3$}",
                cells[0],
                cells[1],
                cells[2],
                cells[3],
                w0 = widths[0],
                w1 = widths[1],
                w2 = widths[2],
                w3 = widths[3]
            );
        };
        line(header, &mut out);
        let _ = writeln!(out, "{}", "-".repeat(widths.iter().sum::<usize>() + 6));
        for row in &body {
            line([&row[0], &row[1], &row[2], &row[3]], &mut out);
        }
        let _ = writeln!(out, "input graphs: {}, survivors: {}", group_digits(self.total_input), self.survivors.len());
        out
    }
}

/// `10778` -> `10 778`.
pub fn group_digits(x: usize) -> String {
    let s = x.to_string();
    let mut out = String::new();
    for (i, c) in s.chars().enumerate() {
        if i > 0 && (s.len() - i) % 3 == 0 {
            out.push(' ');
        }
        out.push(c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(patterns: &[(&str, Graph)]) -> ObstructionSet {
        ObstructionSet {
            dimension: 3,
            patterns: patterns
                .iter()
                .map(|(n, g)| Pattern { name: n.to_string(), graph: g.clone(), provenance: String::new() })
                .collect(),
        }
    }

    #[test]
    fn single_vertex_kills_everything() {
        let gs = vec![Graph::cycle(5), Graph::complete(4)];
        let r = filter(&gs, &set(&[("K1", Graph::empty(1))]), FilterOptions::default());
        assert_eq!(r.survivors.len(), 0);
        assert_eq!(r.rows[0].contained, Some(2));
    }

    #[test]
    fn fast_mode_matches_cumulative() {
        let gs = vec![Graph::cycle(4), Graph::cycle(5), Graph::complete(4), Graph::complete_multipartite(&[2, 2, 2])];
        let obs = set(&[("K4", Graph::complete(4)), ("C4", Graph::cycle(4)), ("K3", Graph::complete(3))]);
        let full = filter(&gs, &obs, FilterOptions { full_counts: true });
        let fast = filter(&gs, &obs, FilterOptions { full_counts: false });
        let cum = |r: &FilterReport| r.rows.iter().map(|x| x.cumulative_eliminated).collect::<Vec<_>>();
        assert_eq!(cum(&full), vec![1, 3, 3]);
        assert_eq!(cum(&full), cum(&fast));
        assert_eq!(full.survivors, fast.survivors);
        assert_eq!(full.rows[2].contained, Some(2));
        assert!(full.to_table().contains("C4"));
    }

    #[test]
    fn digits() {
        assert_eq!(group_digits(10778), "10 778");
        assert_eq!(group_digits(1_470_293_676), "1 470 293 676");
        assert_eq!(group_digits(12), "12");
    }
}
