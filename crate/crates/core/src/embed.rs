//! Induced subgraph search by backtracking with forward checking on bit masks.

use serde::{Deserialize, Serialize};

use crate::graph::{bits, Graph};

/// Injective map from pattern vertices to host vertices that preserves and
/// reflects adjacency.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Embedding {
    pub map: Vec<usize>,
}

impl Embedding {
    pub fn is_induced(&self, pattern: &Graph, host: &Graph) -> bool {
        let k = pattern.n();
        if self.map.len() != k || self.map.iter().any(|&h| h >= host.n()) {
            return false;
        }
        for a in 0..k {
            for b in a + 1..k {
                if self.map[a] == self.map[b]
                    || pattern.has_edge(a, b) != host.has_edge(self.map[a], self.map[b])
                {
                    return false;
                }
            }
        }
        true
    }
}

/// A pattern preprocessed for repeated searches against many hosts.
#[derive(Clone, Debug)]
pub struct Matcher {
    pattern: Graph,
    /// Pattern vertices in search order.
    order: Vec<usize>,
    /// `adj_later[i]`: bit `t` set iff `order[i]` is adjacent to `order[t]`.
    adj_later: Vec<u64>,
    degree: Vec<usize>,
}

impl Matcher {
    pub fn new(pattern: &Graph) -> Self {
        let k = pattern.n();
        let mut order: Vec<usize> = Vec::with_capacity(k);
        let mut placed = 0u64;
        while order.len() < k {
            let next = (0..k)
                .filter(|&v| placed >> v & 1 == 0)
                .max_by_key(|&v| {
                    (
                        (pattern.neighbors(v) & placed).count_ones(),
                        pattern.degree(v),
                        std::cmp::Reverse(v),
                    )
                })
                .expect("unplaced vertex exists");
            placed |= 1 << next;
            order.push(next);
        }
        let adj_later = (0..k)
            .map(|i| {
                let mut m = 0u64;
                for t in 0..k {
                    if pattern.has_edge(order[i], order[t]) {
                        m |= 1 << t;
                    }
                }
                m
            })
            .collect();
        let degree = order.iter().map(|&v| pattern.degree(v)).collect();
        Matcher { pattern: pattern.clone(), order, adj_later, degree }
    }

    pub fn pattern(&self) -> &Graph {
        &self.pattern
    }

    pub fn find(&self, host: &Graph) -> Option<Embedding> {
        let k = self.order.len();
        if k > host.n() {
            return None;
        }
        if k == 0 {
            return Some(Embedding { map: vec![] });
        }
        let rows = host.rows();
        let all = host.vertex_mask();
        let mut cand: Vec<Vec<u64>> = vec![vec![0; k]; k + 1];
        for (t, c) in cand[0].iter_mut().enumerate() {
            let need = self.degree[t];
            *c = bits(all)
                .filter(|&h| rows[h].count_ones() as usize >= need)
                .fold(0u64, |m, h| m | 1 << h);
        }
        let mut assigned = vec![0usize; k];
        if self.search(rows, 0, &mut cand, &mut assigned) {
            let mut map = vec![0; k];
            for (i, &p) in self.order.iter().enumerate() {
                map[p] = assigned[i];
            }
            Some(Embedding { map })
        } else {
            None
        }
    }

    pub fn is_contained_in(&self, host: &Graph) -> bool {
        self.find(host).is_some()
    }

    fn search(&self, rows: &[u64], depth: usize, cand: &mut [Vec<u64>], assigned: &mut [usize]) -> bool {
        let k = self.order.len();
        let mut options = cand[depth][depth];
        while options != 0 {
            let h = options.trailing_zeros() as usize;
            options &= options - 1;
            assigned[depth] = h;
            if depth + 1 == k {
                return true;
            }
            let (head, tail) = cand.split_at_mut(depth + 1);
            let cur = &head[depth];
            let next = &mut tail[0];
            let adj = self.adj_later[depth];
            let nbrs = rows[h];
            let mut dead = false;
            for t in depth + 1..k {
                let m = if adj >> t & 1 == 1 { nbrs } else { !nbrs };
                let c = cur[t] & m & !(1u64 << h);
                next[t] = c;
                if c == 0 {
                    dead = true;
                    break;
                }
            }
            if !dead && self.search(rows, depth + 1, cand, assigned) {
                return true;
            }
        }
        false
    }
}

pub fn find_induced_embedding(pattern: &Graph, host: &Graph) -> Option<Embedding> {
    Matcher::new(pattern).find(host)
}

pub fn contains_induced(pattern: &Graph, host: &Graph) -> bool {
    find_induced_embedding(pattern, host).is_some()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cliques_and_cycles() {
        let k5 = Graph::complete(5);
        let k4 = Graph::complete(4);
        let e = find_induced_embedding(&k4, &k5).unwrap();
        assert!(e.is_induced(&k4, &k5));
        assert!(find_induced_embedding(&k5, &k4).is_none());
        // C4 is not an induced subgraph of K4 even though it is a subgraph
        assert!(find_induced_embedding(&Graph::cycle(4), &k4).is_none());
        assert!(contains_induced(&Graph::cycle(4), &Graph::complete_multipartite(&[2, 2, 2])));
        assert!(contains_induced(&Graph::empty(0), &k4));
    }
}
