//! Canonical labelling by colour refinement and individualisation.
//!
//! The search tree is explored fully except for subtrees that are images of
//! already explored ones under a discovered automorphism fixing the current
//! prefix; the canonical graph is the lexicographically least relabelled
//! adjacency over all leaves.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::graph::{bits, Graph};

/// Isomorphism-invariant encoding: the vertex count followed by the upper
/// triangle of the canonical adjacency matrix, row-major, packed MSB first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CanonicalForm {
    pub bytes: Vec<u8>,
}

impl CanonicalForm {
    pub fn n(&self) -> usize {
        self.bytes.first().copied().unwrap_or(0) as usize
    }

    pub fn to_hex(&self) -> String {
        self.bytes.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// 64-bit FNV-1a digest, used for seeding.
    pub fn hash64(&self) -> u64 {
        let mut h = 0xcbf2_9ce4_8422_2325u64;
        for &b in &self.bytes {
            h ^= b as u64;
            h = h.wrapping_mul(0x100_0000_01b3);
        }
        h
    }

    /// Decodes back into the canonical representative.
    pub fn to_graph(&self) -> Graph {
        let n = self.n();
        let mut g = Graph::empty(n);
        let mut k = 0usize;
        for i in 0..n {
            for j in i + 1..n {
                if self.bytes[1 + k / 8] >> (7 - k % 8) & 1 == 1 {
                    g.add_edge(i, j);
                }
                k += 1;
            }
        }
        g
    }
}

impl fmt::Debug for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CanonicalForm({})", self.to_hex())
    }
}

impl fmt::Display for CanonicalForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_hex())
    }
}

/// Result of a canonical labelling run.
#[derive(Clone, Debug)]
pub struct Labelling {
    /// `lab[i]` is the original vertex placed at canonical position `i`.
    pub lab: Vec<usize>,
    /// Adjacency rows of the canonical graph.
    pub rows: Vec<u64>,
    /// Automorphisms discovered during the search (as vertex maps).
    pub automorphisms: Vec<Vec<u8>>,
}

impl Labelling {
    /// `pos[v]`: canonical position of original vertex `v`.
    pub fn positions(&self) -> Vec<usize> {
        let mut pos = vec![0; self.lab.len()];
        for (i, &v) in self.lab.iter().enumerate() {
            pos[v] = i;
        }
        pos
    }

    pub fn graph(&self) -> Graph {
        Graph::from_rows(self.lab.len(), self.rows.clone())
    }

    /// Orbits of the group generated by the discovered automorphisms,
    /// as a representative (smallest vertex) per vertex.
    pub fn orbit_representatives(&self) -> Vec<usize> {
        let mut uf: Vec<usize> = (0..self.lab.len()).collect();
        for a in &self.automorphisms {
            for (v, &w) in a.iter().enumerate() {
                union(&mut uf, v, w as usize);
            }
        }
        (0..uf.len()).map(|v| find(&mut uf, v)).collect()
    }
}

pub fn canonical_form(g: &Graph) -> CanonicalForm {
    encode(g.n(), &canonical_labelling(g).rows)
}

/// Packs canonical rows into a [`CanonicalForm`].
pub(crate) fn encode(n: usize, rows: &[u64]) -> CanonicalForm {
    let m = n * n.saturating_sub(1) / 2;
    let mut bytes = vec![0u8; 1 + m.div_ceil(8)];
    bytes[0] = n as u8;
    let mut k = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            if rows[i] >> j & 1 == 1 {
                bytes[1 + k / 8] |= 0x80 >> (k % 8);
            }
            k += 1;
        }
    }
    CanonicalForm { bytes }
}

/// Upper-triangle bit string of canonical rows, for graphs with at most 16
/// vertices.
pub fn key128(n: usize, rows: &[u64]) -> u128 {
    debug_assert!(n <= 16);
    let mut key = 0u128;
    for i in 0..n {
        let upper = rows[i] >> (i + 1);
        key = (key << (n - i - 1)) | upper as u128;
    }
    key
}

pub fn are_isomorphic(a: &Graph, b: &Graph) -> bool {
    a.n() == b.n()
        && a.edge_count() == b.edge_count()
        && a.degree_sequence() == b.degree_sequence()
        && canonical_labelling(a).rows == canonical_labelling(b).rows
}

pub fn canonical_labelling(g: &Graph) -> Labelling {
    canonical_labelling_coloured(g, None)
}

/// Canonical labelling respecting an initial vertex colouring: only
/// colour-preserving relabellings are considered and cells are ordered by
/// ascending colour.
pub fn canonical_labelling_coloured(g: &Graph, colours: Option<&[u32]>) -> Labelling {
    let n = g.n();
    let mut cells: Vec<u64> = Vec::with_capacity(n);
    match colours {
        None => {
            if n > 0 {
                cells.push(g.vertex_mask());
            }
        }
        Some(c) => {
            assert_eq!(c.len(), n);
            let mut distinct: Vec<u32> = c.to_vec();
            distinct.sort_unstable();
            distinct.dedup();
            for col in distinct {
                let mut m = 0u64;
                for (v, &cv) in c.iter().enumerate() {
                    if cv == col {
                        m |= 1 << v;
                    }
                }
                cells.push(m);
            }
        }
    }
    let mut s = Search {
        rows: g.rows(),
        n,
        best: None,
        first: None,
        automorphisms: Vec::new(),
        prefix: Vec::with_capacity(n),
    };
    let initial = cells.clone();
    refine(g.rows(), &mut cells, initial);
    s.descend(cells);
    let (lab, rows) = s.best.expect("search visits at least one leaf");
    Labelling {
        lab: lab.into_iter().map(|v| v as usize).collect(),
        rows,
        automorphisms: s.automorphisms,
    }
}

/// Refines the ordered partition `cells` until it is equitable with respect
/// to `splitters` and every cell created along the way.
pub(crate) fn refine(rows: &[u64], cells: &mut Vec<u64>, mut queue: Vec<u64>) {
    let mut head = 0;
    let mut buckets = [0u64; 65];
    while head < queue.len() {
        let w = queue[head];
        head += 1;
        let mut i = 0;
        while i < cells.len() {
            let x = cells[i];
            if x & (x - 1) == 0 {
                i += 1;
                continue;
            }
            let mut seen = 0u128;
            for v in bits(x) {
                let c = (rows[v] & w).count_ones() as usize;
                if seen >> c & 1 == 0 {
                    seen |= 1 << c;
                    buckets[c] = 0;
                }
                buckets[c] |= 1 << v;
            }
            if seen & (seen - 1) == 0 {
                i += 1;
                continue;
            }
            let parts = seen.count_ones() as usize;
            let mut replacement = [0u64; 65];
            let mut k = 0;
            let mut s = seen;
            while s != 0 {
                let c = s.trailing_zeros() as usize;
                s &= s - 1;
                replacement[k] = buckets[c];
                k += 1;
            }
            cells.splice(i..=i, replacement[..parts].iter().copied());
            queue.extend_from_slice(&replacement[..parts]);
            i += parts;
        }
        if cells.len() == rows.len() {
            break;
        }
    }
}

const MAX_AUTOMORPHISMS: usize = 256;

struct Search<'a> {
    rows: &'a [u64],
    n: usize,
    best: Option<(Vec<u8>, Vec<u64>)>,
    first: Option<(Vec<u8>, Vec<u64>)>,
    automorphisms: Vec<Vec<u8>>,
    prefix: Vec<usize>,
}

impl Search<'_> {
    fn descend(&mut self, cells: Vec<u64>) {
        if cells.len() == self.n {
            self.leaf(&cells);
            return;
        }
        let target = cells
            .iter()
            .enumerate()
            .filter(|(_, c)| c.count_ones() > 1)
            .min_by_key(|(i, c)| (c.count_ones(), *i))
            .map(|(i, _)| i)
            .expect("non-discrete partition has a non-singleton cell");
        let cell = cells[target];
        let mut explored: Vec<usize> = Vec::new();
        for v in bits(cell) {
            if !explored.is_empty() && self.equivalent_to_explored(v, &explored) {
                continue;
            }
            explored.push(v);
            let mut child = Vec::with_capacity(self.n);
            child.extend_from_slice(&cells[..target]);
            child.push(1 << v);
            child.push(cell & !(1 << v));
            child.extend_from_slice(&cells[target + 1..]);
            self.prefix.push(v);
            refine(self.rows, &mut child, vec![1 << v]);
            self.descend(child);
            self.prefix.pop();
        }
    }

    /// True if `v` lies in the orbit of an explored sibling under the
    /// automorphisms fixing the current prefix pointwise.
    fn equivalent_to_explored(&self, v: usize, explored: &[usize]) -> bool {
        let mut uf: Vec<usize> = (0..self.n).collect();
        let mut any = false;
        for a in &self.automorphisms {
            if self.prefix.iter().all(|&p| a[p] as usize == p) {
                any = true;
                for (x, &y) in a.iter().enumerate() {
                    union(&mut uf, x, y as usize);
                }
            }
        }
        if !any {
            return false;
        }
        let root = find(&mut uf, v);
        explored.iter().any(|&e| find(&mut uf, e) == root)
    }

    fn leaf(&mut self, cells: &[u64]) {
        let n = self.n;
        let lab: Vec<u8> = cells.iter().map(|c| c.trailing_zeros() as u8).collect();
        let mut pos = [0u8; 64];
        for (i, &v) in lab.iter().enumerate() {
            pos[v as usize] = i as u8;
        }
        let mut rows = vec![0u64; n];
        for (i, &v) in lab.iter().enumerate() {
            let mut r = 0u64;
            for w in bits(self.rows[v as usize]) {
                r |= 1 << pos[w];
            }
            rows[i] = r;
        }
        let Some(first) = &self.first else {
            self.first = Some((lab.clone(), rows.clone()));
            self.best = Some((lab, rows));
            return;
        };
        if rows == first.1 {
            let a = compose_automorphism(&first.0, &lab);
            self.record(a);
            return;
        }
        let best = self.best.as_ref().expect("best set with first");
        match rows.cmp(&best.1) {
            std::cmp::Ordering::Less => self.best = Some((lab, rows)),
            std::cmp::Ordering::Equal => {
                let a = compose_automorphism(&best.0, &lab);
                self.record(a);
            }
            std::cmp::Ordering::Greater => {}
        }
    }

    fn record(&mut self, a: Vec<u8>) {
        if self.automorphisms.len() < MAX_AUTOMORPHISMS {
            self.automorphisms.push(a);
        }
    }
}

/// Map sending `from[i]` to `to[i]` for every position `i`.
fn compose_automorphism(from: &[u8], to: &[u8]) -> Vec<u8> {
    let mut a = vec![0u8; from.len()];
    for (f, t) in from.iter().zip(to) {
        a[*f as usize] = *t;
    }
    a
}

fn find(uf: &mut [usize], mut x: usize) -> usize {
    while uf[x] != x {
        uf[x] = uf[uf[x]];
        x = uf[x];
    }
    x
}

fn union(uf: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(uf, a), find(uf, b));
    if ra != rb {
        let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
        uf[hi] = lo;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_and_empty() {
        for n in 0..10 {
            let k = canonical_form(&Graph::complete(n));
            assert_eq!(k.to_graph(), Graph::complete(n));
            assert_eq!(canonical_form(&Graph::empty(n)).to_graph(), Graph::empty(n));
        }
    }

    #[test]
    fn cycle_relabelled() {
        let c = Graph::cycle(9);
        let perm = [3, 7, 1, 0, 8, 2, 5, 4, 6];
        assert_eq!(canonical_form(&c), canonical_form(&c.relabel(&perm)));
        assert_ne!(canonical_form(&c), canonical_form(&Graph::cycle(4).disjoint_union(&Graph::cycle(5))));
    }

    #[test]
    fn key_matches_bytes_order() {
        let g = Graph::cycle(6);
        let l = canonical_labelling(&g);
        let h = canonical_labelling(&g.relabel(&[5, 4, 3, 0, 1, 2]));
        assert_eq!(key128(6, &l.rows), key128(6, &h.rows));
    }

    #[test]
    fn multipartite_search_is_small() {
        let g = Graph::complete_multipartite(&[4, 4, 4]);
        let l = canonical_labelling(&g);
        assert!(!l.automorphisms.is_empty());
        let reps = l.orbit_representatives();
        assert!(reps.iter().all(|&r| r == 0));
    }
}
