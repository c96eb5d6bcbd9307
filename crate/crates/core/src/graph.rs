//! Simple undirected graphs on at most 64 vertices stored as adjacency bit rows.

use std::collections::VecDeque;
use std::fmt;

use crate::error::{Error, Result};

/// Hard upper bound on the number of vertices of a [`Graph`].
pub const MAX_VERTICES: usize = 64;

/// Simple undirected graph. Vertex `i` has neighbourhood `rows[i]` (bit `j` set
/// iff `{i, j}` is an edge).
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Graph {
    n: usize,
    rows: Vec<u64>,
}

#[inline]
pub(crate) fn bits(mut mask: u64) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if mask == 0 {
            None
        } else {
            let v = mask.trailing_zeros() as usize;
            mask &= mask - 1;
            Some(v)
        }
    })
}

#[inline]
pub(crate) fn full_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Self {
        assert!(n <= MAX_VERTICES, "graph with {n} vertices exceeds {MAX_VERTICES}");
        Graph { n, rows: vec![0; n] }
    }

    pub fn complete(n: usize) -> Self {
        let mut g = Graph::empty(n);
        let all = full_mask(n);
        for v in 0..n {
            g.rows[v] = all & !(1u64 << v);
        }
        g
    }

    pub fn cycle(n: usize) -> Self {
        let mut g = Graph::empty(n);
        for v in 0..n {
            g.add_edge(v, (v + 1) % n);
        }
        g
    }

    /// Complete multipartite graph with the given part sizes; parts occupy
    /// consecutive vertex ranges.
    pub fn complete_multipartite(parts: &[usize]) -> Self {
        let n = parts.iter().sum();
        let mut g = Graph::complete(n);
        let mut start = 0;
        for &p in parts {
            for u in start..start + p {
                for w in u + 1..start + p {
                    g.remove_edge(u, w);
                }
            }
            start += p;
        }
        g
    }

    /// Builds a graph from 0-based edges, rejecting loops, duplicates and
    /// out-of-range endpoints.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        if n > MAX_VERTICES {
            return Err(Error::TooManyVertices(n));
        }
        let mut g = Graph::empty(n);
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::VertexOutOfRange { vertex: u.max(v), n });
            }
            if u == v {
                return Err(Error::SelfLoop(u));
            }
            if g.has_edge(u, v) {
                return Err(Error::DuplicateEdge(u, v));
            }
            g.add_edge(u, v);
        }
        Ok(g)
    }

    /// Same as [`Graph::from_edges`] with 1-based vertex labels `v1..vn`.
    pub fn from_edges_1based(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let shifted: Vec<_> = edges
            .iter()
            .map(|&(u, v)| (u.wrapping_sub(1), v.wrapping_sub(1)))
            .collect();
        Self::from_edges(n, &shifted)
    }

    /// Builds a graph from 0/1 adjacency matrix rows, checking symmetry.
    pub fn from_adjacency(matrix: &[&[u8]]) -> Result<Self> {
        let n = matrix.len();
        let mut g = Graph::empty(n);
        for (i, row) in matrix.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Parse {
                    offset: i,
                    message: format!("adjacency row {i} has length {}", row.len()),
                });
            }
            for (j, &a) in row.iter().enumerate() {
                if a != matrix[j][i] {
                    return Err(Error::Parse {
                        offset: i,
                        message: format!("adjacency not symmetric at ({i},{j})"),
                    });
                }
                if a != 0 {
                    if i == j {
                        return Err(Error::SelfLoop(i));
                    }
                    g.rows[i] |= 1 << j;
                }
            }
        }
        Ok(g)
    }

    pub(crate) fn from_rows(n: usize, rows: Vec<u64>) -> Self {
        debug_assert_eq!(rows.len(), n);
        Graph { n, rows }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> u64 {
        self.rows[v]
    }

    pub fn neighbor_list(&self, v: usize) -> Vec<usize> {
        bits(self.rows[v]).collect()
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.rows[u] >> v & 1 == 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) {
        assert!(u != v && u < self.n && v < self.n);
        self.rows[u] |= 1 << v;
        self.rows[v] |= 1 << u;
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) {
        self.rows[u] &= !(1 << v);
        self.rows[v] &= !(1 << u);
    }

    pub fn vertex_mask(&self) -> u64 {
        full_mask(self.n)
    }

    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.rows[v].count_ones() as usize
    }

    pub fn edge_count(&self) -> usize {
        self.rows.iter().map(|r| r.count_ones() as usize).sum::<usize>() / 2
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for u in 0..self.n {
            for v in bits(self.rows[u] >> u >> 1) {
                out.push((u, u + 1 + v));
            }
        }
        out
    }

    /// Vertex degrees sorted in descending order.
    pub fn degree_sequence(&self) -> Vec<usize> {
        let mut d: Vec<usize> = (0..self.n).map(|v| self.degree(v)).collect();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }

    /// `Some(r)` iff every vertex has degree `r`. The empty graph is 0-regular.
    pub fn is_regular(&self) -> Option<usize> {
        let r = if self.n == 0 { 0 } else { self.degree(0) };
        (0..self.n).all(|v| self.degree(v) == r).then_some(r)
    }

    /// Length of a shortest cycle, `None` for forests.
    pub fn girth(&self) -> Option<usize> {
        let mut best: Option<usize> = None;
        let mut dist = vec![usize::MAX; self.n];
        let mut parent = vec![usize::MAX; self.n];
        for s in 0..self.n {
            dist.iter_mut().for_each(|d| *d = usize::MAX);
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            'bfs: while let Some(u) = queue.pop_front() {
                if let Some(b) = best {
                    if 2 * dist[u] + 1 >= b {
                        break;
                    }
                }
                for w in bits(self.rows[u]) {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[u] + 1;
                        parent[w] = u;
                        queue.push_back(w);
                    } else if parent[u] != w {
                        let len = dist[u] + dist[w] + 1;
                        if best.is_none_or(|b| len < b) {
                            best = Some(len);
                        }
                        if len == 3 {
                            break 'bfs;
                        }
                    }
                }
            }
            if best == Some(3) {
                break;
            }
        }
        best
    }

    /// Size of a maximum clique (branch and bound over bit sets).
    pub fn clique_number(&self) -> usize {
        fn expand(g: &Graph, size: usize, cand: u64, best: &mut usize) {
            if cand == 0 {
                *best = (*best).max(size);
                return;
            }
            let mut cand = cand;
            while cand != 0 {
                if size + cand.count_ones() as usize <= *best {
                    return;
                }
                let v = cand.trailing_zeros() as usize;
                cand &= cand - 1;
                expand(g, size + 1, cand & g.rows[v], best);
            }
        }
        let mut best = 0;
        expand(self, 0, self.vertex_mask(), &mut best);
        best
    }

    /// Returns true iff `mask` induces a clique.
    pub fn is_clique(&self, mask: u64) -> bool {
        bits(mask).all(|v| (self.rows[v] | (1 << v)) & mask == mask)
    }

    /// All cliques of exactly `k` vertices, as bit masks.
    pub fn cliques_of_size(&self, k: usize) -> Vec<u64> {
        fn rec(g: &Graph, k: usize, chosen: u64, cand: u64, out: &mut Vec<u64>) {
            if chosen.count_ones() as usize == k {
                out.push(chosen);
                return;
            }
            let need = k - chosen.count_ones() as usize;
            let mut cand = cand;
            while cand.count_ones() as usize >= need {
                let v = cand.trailing_zeros() as usize;
                cand &= cand - 1;
                rec(g, k, chosen | 1 << v, cand & g.rows[v], out);
            }
        }
        let mut out = Vec::new();
        rec(self, k, 0, self.vertex_mask(), &mut out);
        out
    }

    /// Vertex sets of connected components, ordered by smallest vertex.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        self.component_masks()
            .into_iter()
            .map(|m| bits(m).collect())
            .collect()
    }

    pub fn component_masks(&self) -> Vec<u64> {
        let mut seen = 0u64;
        let mut out = Vec::new();
        for s in 0..self.n {
            if seen >> s & 1 == 1 {
                continue;
            }
            let mut comp = 1u64 << s;
            let mut frontier = comp;
            while frontier != 0 {
                let mut next = 0;
                for v in bits(frontier) {
                    next |= self.rows[v];
                }
                frontier = next & !comp;
                comp |= next;
            }
            seen |= comp;
            out.push(comp);
        }
        out
    }

    pub fn is_connected(&self) -> bool {
        self.n <= 1 || self.component_masks().len() == 1
    }

    pub fn complement(&self) -> Graph {
        let all = self.vertex_mask();
        let rows = (0..self.n)
            .map(|v| !self.rows[v] & all & !(1u64 << v))
            .collect();
        Graph { n: self.n, rows }
    }

    /// `self + other` with the vertices of `other` shifted by `self.n()`.
    pub fn disjoint_union(&self, other: &Graph) -> Graph {
        let n = self.n + other.n;
        assert!(n <= MAX_VERTICES, "disjoint union exceeds {MAX_VERTICES} vertices");
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().map(|r| r << self.n));
        Graph { n, rows }
    }

    /// Induced subgraph on `vertices`, relabelled in the given order.
    pub fn induced_subgraph(&self, vertices: &[usize]) -> Result<Graph> {
        let mut g = Graph::empty(vertices.len());
        for (a, &u) in vertices.iter().enumerate() {
            if u >= self.n {
                return Err(Error::VertexOutOfRange { vertex: u, n: self.n });
            }
            for (b, &w) in vertices.iter().enumerate().skip(a + 1) {
                if u == w {
                    return Err(Error::InvalidInput(format!("vertex {u} repeated")));
                }
                if self.has_edge(u, w) {
                    g.add_edge(a, b);
                }
            }
        }
        Ok(g)
    }

    /// Graph with vertex `v` renamed to `perm[v]`.
    pub fn relabel(&self, perm: &[usize]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let mut rows = vec![0u64; self.n];
        for v in 0..self.n {
            let mut r = 0u64;
            for w in bits(self.rows[v]) {
                r |= 1 << perm[w];
            }
            rows[perm[v]] = r;
        }
        Graph { n: self.n, rows }
    }

    /// Part sizes (ascending) if the graph is complete multipartite.
    pub fn complete_multipartite_parts(&self) -> Option<Vec<usize>> {
        self.complete_multipartite_part_masks()
            .map(|parts| parts.iter().map(|m| m.count_ones() as usize).collect())
    }

    /// Parts (sorted by size, then by smallest vertex) if the graph is complete
    /// multipartite: non-adjacency must be an equivalence relation.
    pub fn complete_multipartite_part_masks(&self) -> Option<Vec<u64>> {
        if self.n == 0 {
            return None;
        }
        let all = self.vertex_mask();
        let mut parts = Vec::new();
        let mut seen = 0u64;
        for v in 0..self.n {
            if seen >> v & 1 == 1 {
                continue;
            }
            let class = !self.rows[v] & all;
            for u in bits(class) {
                if !self.rows[u] & all != class {
                    return None;
                }
            }
            seen |= class;
            parts.push(class);
        }
        parts.sort_by_key(|m| (m.count_ones(), m.trailing_zeros()));
        Some(parts)
    }

    /// Vertices with identical open neighbourhoods, i.e. non-adjacent twins.
    pub fn same_neighborhood(&self, u: usize, v: usize) -> bool {
        self.rows[u] == self.rows[v]
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph(n={}, edges={:?})", self.n, self.edges())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn diamond() -> Graph {
        Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)]).unwrap()
    }

    fn house() -> Graph {
        Graph::from_adjacency(&[
            &[0, 1, 1, 1, 0],
            &[1, 0, 1, 0, 1],
            &[1, 1, 0, 0, 0],
            &[1, 0, 0, 0, 1],
            &[0, 1, 0, 1, 0],
        ])
        .unwrap()
    }

    #[test]
    fn degree_sequences() {
        assert_eq!(diamond().degree_sequence(), vec![3, 3, 2, 2]);
        assert_eq!(Graph::empty(1).degree_sequence(), vec![0]);
        assert_eq!(Graph::complete(5).is_regular(), Some(4));
        assert_eq!(house().is_regular(), None);
    }

    #[test]
    fn girth_and_cliques() {
        assert_eq!(Graph::cycle(7).girth(), Some(7));
        assert_eq!(Graph::from_edges(3, &[(0, 1), (1, 2)]).unwrap().girth(), None);
        assert_eq!(diamond().girth(), Some(3));
        assert_eq!(Graph::complete(4).clique_number(), 4);
        assert_eq!(Graph::complete_multipartite(&[4, 4, 4]).clique_number(), 3);
        assert_eq!(Graph::complete_multipartite(&[3, 3]).girth(), Some(4));
        assert_eq!(Graph::complete(5).cliques_of_size(4).len(), 5);
    }

    #[test]
    fn components_complement_union() {
        let g = Graph::empty(3);
        assert_eq!(g.connected_components(), vec![vec![0], vec![1], vec![2]]);
        let k5 = Graph::complete(5);
        assert_eq!(k5.complement(), Graph::empty(5));
        let u = diamond().disjoint_union(&house());
        assert_eq!(u.n(), 9);
        assert_eq!(u.edge_count(), 5 + 6);
        assert_eq!(u.connected_components().len(), 2);
        assert_eq!(house().disjoint_union(&Graph::empty(0)), house());
    }

    #[test]
    fn induced_subgraph_edge_cases() {
        let h = house();
        assert_eq!(h.induced_subgraph(&[0, 1, 2, 3, 4]).unwrap(), h);
        // {2, 3} is independent in the house graph
        assert_eq!(h.induced_subgraph(&[2, 3]).unwrap(), Graph::empty(2));
        assert!(matches!(
            h.induced_subgraph(&[0, 7]),
            Err(Error::VertexOutOfRange { vertex: 7, .. })
        ));
    }

    #[test]
    fn multipartite_parts() {
        assert_eq!(
            Graph::complete_multipartite(&[4, 4, 4]).complete_multipartite_parts(),
            Some(vec![4, 4, 4])
        );
        assert_eq!(house().complete_multipartite_parts(), None);
        assert_eq!(Graph::complete(3).complete_multipartite_parts(), Some(vec![1, 1, 1]));
    }

    #[test]
    fn construction_errors() {
        assert!(matches!(Graph::from_edges(3, &[(1, 1)]), Err(Error::SelfLoop(1))));
        assert!(matches!(
            Graph::from_edges(3, &[(0, 1), (1, 0)]),
            Err(Error::DuplicateEdge(1, 0))
        ));
    }
}
