//! Forced equalities between vectors of a faithful orthogonal representation.
//!
//! Rules, for dimension `d`:
//! - R1: a clique larger than `d` rules out any representation.
//! - R2: two non-adjacent vertices orthogonal to a common `(d-1)`-clique get
//!   parallel vectors.
//! - R3: an induced 4-cycle `x u y w` inside the common neighbourhood of a
//!   `(d-3)`-clique forces `u = w` or `x = y`.
//! - R4: parallel vectors must be non-adjacent with identical neighbourhoods.
//! - R5: a complete multipartite graph needs at least one dimension per part.

use serde::{Deserialize, Serialize};

use crate::graph::{bits, full_mask, Graph};

pub const DEFAULT_BRANCH_CAP: usize = 1 << 16;

/// Union-find over vertices plus the disjunctions still to be decided.
#[derive(Clone, Debug)]
pub struct EqualityState {
    parent: Vec<usize>,
    pub disjunctions: Vec<Disjunction>,
    pub contradiction: bool,
}

impl EqualityState {
    pub fn new(n: usize) -> Self {
        EqualityState { parent: (0..n).collect(), disjunctions: Vec::new(), contradiction: false }
    }

    pub fn find(&self, mut v: usize) -> usize {
        while self.parent[v] != v {
            v = self.parent[v];
        }
        v
    }

    pub fn same(&self, u: usize, w: usize) -> bool {
        self.find(u) == self.find(w)
    }

    /// Merges the classes of `u` and `w`; R4 is checked against `g`.
    pub fn merge(&mut self, g: &Graph, u: usize, w: usize) -> bool {
        if !consistent(g, u, w) {
            self.contradiction = true;
            return false;
        }
        let (a, b) = (self.find(u), self.find(w));
        if a != b {
            let (lo, hi) = if a < b { (a, b) } else { (b, a) };
            self.parent[hi] = lo;
        }
        true
    }

    /// Classes with at least two members, sorted.
    pub fn classes(&self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for v in 0..n {
            by_root[self.find(v)].push(v);
        }
        by_root.into_iter().filter(|c| c.len() > 1).collect()
    }

    fn satisfied(&self, dj: &Disjunction) -> bool {
        self.same(dj.left.0, dj.left.1) || self.same(dj.right.0, dj.right.1)
    }
}

/// R4 test for a single pair.
pub fn consistent(g: &Graph, u: usize, w: usize) -> bool {
    u == w || (!g.has_edge(u, w) && g.rows()[u] == g.rows()[w])
}

/// `left.0 = left.1` or `right.0 = right.1`, witnessed by an induced square
/// `x u y w` with `left = (u, w)`, `right = (x, y)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Disjunction {
    pub left: (usize, usize),
    pub right: (usize, usize),
    pub clique: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "rule", rename_all = "kebab-case")]
pub enum Proof {
    /// R1.
    CliqueBound { clique: Vec<usize>, d: usize },
    /// R5.
    Multipartite { parts: Vec<Vec<usize>>, d: usize },
    /// R2 followed by R4.
    ForcedPair { u: usize, w: usize, clique: Vec<usize> },
    /// R3 with both alternatives refuted by R4.
    Square { x: usize, u: usize, y: usize, w: usize, clique: Vec<usize> },
    /// Established outside the rule engine.
    External { name: String, argument: String },
}

impl Proof {
    /// Re-checks the proof against the graph from scratch.
    pub fn replay(&self, g: &Graph, d: usize) -> bool {
        let is_clique = |c: &[usize], k: usize| {
            c.len() == k && c.iter().all(|&v| v < g.n()) && {
                let m = c.iter().fold(0u64, |m, &v| m | 1 << v);
                m.count_ones() as usize == k && g.is_clique(m)
            }
        };
        let adj_all = |v: usize, c: &[usize]| c.iter().all(|&k| g.has_edge(v, k));
        match self {
            Proof::CliqueBound { clique, d: dd } => *dd == d && clique.len() > d && is_clique(clique, clique.len()),
            Proof::Multipartite { parts, d: dd } => {
                *dd == d
                    && parts.len() > d
                    && g.complete_multipartite_parts().map_or(false, |p| p.len() == parts.len())
            }
            Proof::ForcedPair { u, w, clique } => {
                d >= 1
                    && is_clique(clique, d - 1)
                    && *u < g.n()
                    && *w < g.n()
                    && u != w
                    && !g.has_edge(*u, *w)
                    && adj_all(*u, clique)
                    && adj_all(*w, clique)
                    && !consistent(g, *u, *w)
            }
            Proof::Square { x, u, y, w, clique } => {
                let vs = [*x, *u, *y, *w];
                d >= 3
                    && is_clique(clique, d - 3)
                    && vs.iter().all(|&v| v < g.n() && adj_all(v, clique))
                    && g.has_edge(*x, *u)
                    && g.has_edge(*u, *y)
                    && g.has_edge(*y, *w)
                    && g.has_edge(*w, *x)
                    && !g.has_edge(*x, *y)
                    && !g.has_edge(*u, *w)
                    && !consistent(g, *u, *w)
                    && !consistent(g, *x, *y)
            }
            Proof::External { .. } => true,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum PropagationStatus {
    Impossible { proof: Proof },
    Open,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Propagation {
    pub d: usize,
    pub status: PropagationStatus,
    /// Classes forced in every surviving branch.
    pub forced: Vec<Vec<usize>>,
    /// Finest partition of each surviving branch (classes of size >= 2).
    pub branches: Vec<Vec<Vec<usize>>>,
    /// The branch cap was hit; `forced` then only holds unit consequences.
    pub overflow: bool,
    /// Parts when the graph is complete multipartite (R5 bookkeeping).
    pub multipartite: Option<Vec<Vec<usize>>>,
}

impl Propagation {
    pub fn is_impossible(&self) -> bool {
        matches!(self.status, PropagationStatus::Impossible { .. })
    }

    pub fn proof(&self) -> Option<&Proof> {
        match &self.status {
            PropagationStatus::Impossible { proof } => Some(proof),
            PropagationStatus::Open => None,
        }
    }

    fn impossible(d: usize, proof: Proof, multipartite: Option<Vec<Vec<usize>>>) -> Self {
        Propagation {
            d,
            status: PropagationStatus::Impossible { proof },
            forced: vec![],
            branches: vec![],
            overflow: false,
            multipartite,
        }
    }
}

/// Vertices strictly greater than `v`.
fn above(v: usize) -> u64 {
    if v >= 63 {
        0
    } else {
        !((2u64 << v) - 1)
    }
}

fn members(m: u64) -> Vec<usize> {
    bits(m).collect()
}

fn common_neighbourhood(g: &Graph, clique: u64) -> u64 {
    bits(clique).fold(full_mask(g.n()), |acc, v| acc & g.rows()[v])
}

fn cliques(g: &Graph, k: usize) -> Vec<u64> {
    if k == 0 {
        vec![0]
    } else {
        g.cliques_of_size(k)
    }
}

/// R2 instances: `(u, w, clique)`.
fn forced_pairs(g: &Graph, d: usize) -> Vec<(usize, usize, u64)> {
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    for c in cliques(g, d - 1) {
        let common = common_neighbourhood(g, c);
        for u in bits(common) {
            for w in bits(common & !g.rows()[u] & above(u)) {
                if seen.insert((u, w)) {
                    out.push((u, w, c));
                }
            }
        }
    }
    out
}

/// R3 instances.
fn squares(g: &Graph, d: usize) -> Vec<Disjunction> {
    let mut out = Vec::new();
    if d < 3 {
        return out;
    }
    let mut seen = std::collections::HashSet::new();
    for c in cliques(g, d - 3) {
        let inside = common_neighbourhood(g, c);
        for x in bits(inside) {
            // y > x, non-adjacent
            for y in bits(inside & !g.rows()[x] & above(x)) {
                let both = g.rows()[x] & g.rows()[y] & inside;
                for u in bits(both) {
                    for w in bits(both & !g.rows()[u] & above(u)) {
                        // each square shows up from both diagonals; keep x < u
                        if x > u {
                            continue;
                        }
                        if seen.insert((x, y, u, w)) {
                            out.push(Disjunction { left: (u, w), right: (x, y), clique: members(c) });
                        }
                    }
                }
            }
        }
    }
    out
}

pub fn propagate_equalities(g: &Graph, d: usize) -> Propagation {
    propagate_with_cap(g, d, DEFAULT_BRANCH_CAP)
}

pub fn propagate_with_cap(g: &Graph, d: usize, cap: usize) -> Propagation {
    let n = g.n();
    let parts = g.complete_multipartite_part_masks().map(|ps| ps.into_iter().map(members).collect::<Vec<_>>());
    // R1
    if d == 0 {
        return Propagation::impossible(d, Proof::CliqueBound { clique: vec![0], d }, parts);
    }
    let omega = g.clique_number();
    if omega > d {
        let clique = g.cliques_of_size(omega).first().map(|&m| members(m)).unwrap_or_default();
        return Propagation::impossible(d, Proof::CliqueBound { clique, d }, parts);
    }
    // R5
    if let Some(ps) = &parts {
        if ps.len() > d {
            return Propagation::impossible(d, Proof::Multipartite { parts: ps.clone(), d }, parts);
        }
    }
    let mut state = EqualityState::new(n);
    // R2 + R4
    for (u, w, c) in forced_pairs(g, d) {
        if !state.merge(g, u, w) {
            return Propagation::impossible(d, Proof::ForcedPair { u, w, clique: members(c) }, parts);
        }
    }
    // R3: unit-propagate disjunctions with one refuted side
    let mut open = Vec::new();
    for dj in squares(g, d) {
        let l = consistent(g, dj.left.0, dj.left.1);
        let r = consistent(g, dj.right.0, dj.right.1);
        match (l, r) {
            (false, false) => {
                let proof = Proof::Square {
                    x: dj.right.0,
                    u: dj.left.0,
                    y: dj.right.1,
                    w: dj.left.1,
                    clique: dj.clique.clone(),
                };
                return Propagation::impossible(d, proof, parts);
            }
            (true, false) => {
                state.merge(g, dj.left.0, dj.left.1);
            }
            (false, true) => {
                state.merge(g, dj.right.0, dj.right.1);
            }
            (true, true) => open.push(dj),
        }
    }
    state.disjunctions = open;
    let unit = state.classes();
    let mut leaves: Vec<Vec<usize>> = Vec::new();
    let mut budget = cap;
    let overflow = !branch(g, &state, &mut leaves, &mut budget);
    if overflow {
        return Propagation {
            d,
            status: PropagationStatus::Open,
            forced: unit,
            branches: vec![],
            overflow: true,
            multipartite: parts,
        };
    }
    // keep the finest partitions
    leaves.sort();
    leaves.dedup();
    let finest: Vec<&Vec<usize>> =
        leaves.iter().filter(|a| !leaves.iter().any(|b| b != *a && refines(b, a))).collect();
    let forced = meet(n, &finest);
    let branches = finest.iter().map(|l| classes_of(l)).collect();
    Propagation { d, status: PropagationStatus::Open, forced, branches, overflow: false, multipartite: parts }
}

/// Depth-first over undecided disjunctions; leaves are root labellings.
/// Returns false on budget exhaustion.
fn branch(g: &Graph, state: &EqualityState, leaves: &mut Vec<Vec<usize>>, budget: &mut usize) -> bool {
    if *budget == 0 {
        return false;
    }
    *budget -= 1;
    let Some(dj) = state.disjunctions.iter().find(|dj| !state.satisfied(dj)) else {
        leaves.push((0..state.parent.len()).map(|v| state.find(v)).collect());
        return true;
    };
    for (a, b) in [dj.left, dj.right] {
        let mut next = state.clone();
        if next.merge(g, a, b) && !branch(g, &next, leaves, budget) {
            return false;
        }
    }
    true
}

/// `fine` refines `coarse` (every class of `fine` lies inside one of `coarse`).
fn refines(fine: &[usize], coarse: &[usize]) -> bool {
    (0..fine.len()).all(|v| coarse[v] == coarse[fine[v]])
}

fn classes_of(labels: &[usize]) -> Vec<Vec<usize>> {
    let mut s = EqualityState::new(labels.len());
    s.parent = labels.to_vec();
    s.classes()
}

/// Common coarsening-free refinement: `u ~ w` iff equal in every labelling.
fn meet(n: usize, labellings: &[&Vec<usize>]) -> Vec<Vec<usize>> {
    let mut out: Vec<Vec<usize>> = Vec::new();
    let mut done = vec![false; n];
    for v in 0..n {
        if done[v] {
            continue;
        }
        let class: Vec<usize> =
            (v..n).filter(|&w| !done[w] && labellings.iter().all(|l| l[v] == l[w])).collect();
        for &w in &class {
            done[w] = true;
        }
        if class.len() > 1 {
            out.push(class);
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, e: &[(usize, usize)]) -> Graph {
        Graph::from_edges(n, e).unwrap()
    }

    #[test]
    fn diamond_forces_pair() {
        let p = propagate_equalities(&g(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (2, 3)]), 3);
        assert!(!p.is_impossible());
        assert_eq!(p.forced, vec![vec![1, 3]]);
    }

    #[test]
    fn square_is_a_choice() {
        let p = propagate_equalities(&Graph::cycle(4), 3);
        assert!(p.forced.is_empty());
        assert_eq!(p.branches.len(), 2);
    }

    #[test]
    fn clique_bound() {
        let p = propagate_equalities(&Graph::complete(4), 3);
        assert!(matches!(p.proof(), Some(Proof::CliqueBound { .. })));
        assert!(p.proof().unwrap().replay(&Graph::complete(4), 3));
    }
}
