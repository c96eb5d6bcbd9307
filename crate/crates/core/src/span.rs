//! Spanning conditions on local vectors of a product basis.
//!
//! For `k` product vectors on `N` parties of local dimension `d`, every
//! `(k - d^(N-1) + 1)`-tuple of one party's local vectors has to span `C^d`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::Scalar;
use crate::repr::{rank_of_subset, Representation, Vectors};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanReport {
    pub satisfied: bool,
    /// Violating subset of exactly `tuple_size` vertices.
    pub witness: Option<Vec<usize>>,
    /// Upper bound on the witness rank (always below `d`).
    pub rank_bound: Option<usize>,
    pub k: usize,
    pub d: usize,
    pub parties: usize,
    pub tuple_size: usize,
    /// Size of the largest subset known to span less than the target.
    pub max_deficient: usize,
    /// Number of branch/allocation cases examined (certificate mode).
    pub cases: usize,
}

/// `k - d^(N-1) + 1`, the tuple size that must always span.
pub fn tuple_size(k: usize, d: usize, parties: usize) -> Result<usize> {
    if d < 2 || parties < 2 {
        return Err(Error::InvalidInput(format!("need d >= 2 and N >= 2, got d={d}, N={parties}")));
    }
    let others = (d as u64).checked_pow(parties as u32 - 1).ok_or_else(|| Error::InvalidInput("d^(N-1) overflows".into()))?;
    let t = k as i64 - others as i64 + 1;
    if t < 1 {
        return Err(Error::InvalidInput(format!("k={k} is smaller than d^(N-1)={others}")));
    }
    Ok(t as usize)
}

fn combinations(n: usize, r: usize, mut f: impl FnMut(&[usize]) -> bool) {
    if r > n {
        return;
    }
    let mut idx: Vec<usize> = (0..r).collect();
    loop {
        if !f(&idx) {
            return;
        }
        let Some(i) = (0..r).rev().find(|&i| idx[i] != i + n - r) else { return };
        idx[i] += 1;
        for j in i + 1..r {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// Largest subset of the representation whose span has dimension below `d`.
pub fn max_deficient_subset(rep: &Representation) -> Result<Vec<usize>> {
    let k = rep.len();
    let d = rep.d;
    let all: Vec<usize> = (0..k).collect();
    if k == 0 {
        return Ok(all);
    }
    if rank_of_subset(rep, &all)? < d {
        return Ok(all);
    }
    // a maximal deficient set spans a hyperplane, which d-1 of its members span
    let mut best: Vec<usize> = Vec::new();
    let mut err = None;
    combinations(k, d - 1, |base| {
        match rank_of_subset(rep, base) {
            Ok(r) if r == d - 1 => {}
            Ok(_) => return true,
            Err(e) => {
                err = Some(e);
                return false;
            }
        }
        let mut members = Vec::new();
        for v in 0..k {
            let mut s = base.to_vec();
            s.push(v);
            match rank_of_subset(rep, &s) {
                Ok(r) if r < d => members.push(v),
                Ok(_) => {}
                Err(e) => {
                    err = Some(e);
                    return false;
                }
            }
        }
        if members.len() > best.len() {
            best = members;
        }
        true
    });
    match err {
        Some(e) => Err(e),
        None => Ok(best),
    }
}

/// Representation mode: every `tuple_size` subset must have full rank.
pub fn check_single_party_spanning(rep: &Representation, k: usize, d: usize, parties: usize) -> Result<SpanReport> {
    if rep.len() != k || rep.d != d {
        return Err(Error::InvalidInput(format!(
            "representation has {} vectors in dimension {}, expected {k} in {d}",
            rep.len(),
            rep.d
        )));
    }
    let t = tuple_size(k, d, parties)?;
    let worst = max_deficient_subset(rep)?;
    let satisfied = worst.len() < t;
    let (witness, rank_bound) = if satisfied {
        (None, None)
    } else {
        let w: Vec<usize> = worst[..t].to_vec();
        let r = rank_of_subset(rep, &w)?;
        (Some(w), Some(r))
    };
    Ok(SpanReport {
        satisfied,
        witness,
        rank_bound,
        k,
        d,
        parties,
        tuple_size: t,
        max_deficient: worst.len(),
        cases: 1,
    })
}

/// Rank information known without explicit vectors.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpanCertificate {
    pub k: usize,
    /// Alternative equality partitions; the condition has to fail in each.
    /// Classes have rank 1. An empty list means no forced equalities.
    pub branches: Vec<Vec<Vec<usize>>>,
    /// Parts of complete multipartite components: parts are mutually
    /// orthogonal, so their span dimensions sum to at most `d`.
    pub multipartite: Vec<Vec<Vec<usize>>>,
    /// Vertex sets orthogonal to a common nonzero vector.
    pub hyperplanes: Vec<Vec<usize>>,
}

impl SpanCertificate {
    pub fn new(k: usize) -> Self {
        SpanCertificate { k, ..Default::default() }
    }

    /// Adds the classes of one component, shifting vertex labels by `offset`.
    /// Branches of separate components combine as a product.
    pub fn add_component_branches(&mut self, branches: &[Vec<Vec<usize>>], offset: usize) {
        let shifted: Vec<Vec<Vec<usize>>> = if branches.is_empty() {
            vec![vec![]]
        } else {
            branches
                .iter()
                .map(|b| b.iter().map(|c| c.iter().map(|v| v + offset).collect()).collect())
                .collect()
        };
        let current = if self.branches.is_empty() { vec![vec![]] } else { std::mem::take(&mut self.branches) };
        for base in &current {
            for extra in &shifted {
                let mut b = base.clone();
                b.extend(extra.iter().cloned());
                self.branches.push(b);
            }
        }
    }

    pub fn add_multipartite(&mut self, parts: &[Vec<usize>], offset: usize) {
        self.multipartite.push(parts.iter().map(|p| p.iter().map(|v| v + offset).collect()).collect());
    }
}

/// All `a_1..a_m >= 1` with sum at most `d`.
fn allocations(m: usize, d: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    fn rec(m: usize, left: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        let still = m - cur.len() - 1;
        for a in 1..=left.saturating_sub(still) {
            cur.push(a);
            rec(m, left - a, cur, out);
            cur.pop();
        }
    }
    if m <= d {
        rec(m, d, &mut Vec::new(), &mut out);
    }
    out
}

/// Groups of rank-1 blocks; taking `r` units from a group yields its `r`
/// largest blocks, or the whole group once `r` reaches the group's cap.
struct Group {
    blocks: Vec<Vec<usize>>,
    cap: Option<usize>,
}

impl Group {
    fn take(&self, r: usize) -> Vec<usize> {
        if r == 0 {
            return vec![];
        }
        if self.cap.is_some_and(|c| r >= c) {
            return self.blocks.concat();
        }
        self.blocks.iter().take(r).flatten().copied().collect()
    }
}

/// Largest vertex set of rank at most `budget` under one branch/allocation.
fn knapsack(k: usize, classes: &[Vec<usize>], parts: &[(Vec<usize>, usize)], budget: usize) -> Vec<usize> {
    let mut class_of = vec![usize::MAX; k];
    for (i, c) in classes.iter().enumerate() {
        for &v in c {
            class_of[v] = i;
        }
    }
    let mut in_part = vec![false; k];
    let mut groups = Vec::new();
    let blocks_of = |vs: &mut dyn Iterator<Item = usize>| {
        let mut seen = std::collections::BTreeSet::new();
        let mut blocks: Vec<Vec<usize>> = Vec::new();
        for v in vs {
            if class_of[v] == usize::MAX {
                blocks.push(vec![v]);
            } else if seen.insert(class_of[v]) {
                blocks.push(classes[class_of[v]].clone());
            }
        }
        blocks.sort_by(|a, b| b.len().cmp(&a.len()).then(a.cmp(b)));
        blocks
    };
    for (part, a) in parts {
        for &v in part {
            in_part[v] = true;
        }
        groups.push(Group { blocks: blocks_of(&mut part.iter().copied()), cap: Some(*a) });
    }
    // everything outside multipartite parts: one free group
    groups.push(Group { blocks: blocks_of(&mut (0..k).filter(|&v| !in_part[v])), cap: None });
    // multiple-choice knapsack over groups, capacity `budget`
    let mut best: Vec<Option<Vec<usize>>> = vec![None; budget + 1];
    best[0] = Some(vec![]);
    for g in &groups {
        let mut next = best.clone();
        for used in 0..=budget {
            let Some(base) = &best[used] else { continue };
            for r in 1..=budget - used {
                let mut s = base.clone();
                s.extend(g.take(r));
                let slot = &mut next[used + r];
                if slot.as_ref().map_or(true, |x| s.len() > x.len()) {
                    *slot = Some(s);
                }
            }
        }
        best = next;
    }
    let mut out = best.into_iter().flatten().max_by_key(|s| s.len()).unwrap_or_default();
    out.sort_unstable();
    out
}

/// Certificate mode: the condition is violated only if it fails in every
/// branch and under every dimension allocation of multipartite parts.
pub fn check_spanning_certificate(cert: &SpanCertificate, d: usize, parties: usize) -> Result<SpanReport> {
    let k = cert.k;
    let t = tuple_size(k, d, parties)?;
    for v in cert.branches.iter().flatten().flatten().chain(cert.multipartite.iter().flatten().flatten()) {
        if *v >= k {
            return Err(Error::InvalidInput(format!("vertex {v} out of range for k={k}")));
        }
    }
    let branches: Vec<Vec<Vec<usize>>> = if cert.branches.is_empty() { vec![vec![]] } else { cert.branches.clone() };
    let per_component: Vec<Vec<Vec<usize>>> = cert.multipartite.iter().map(|ps| allocations(ps.len(), d)).collect();
    if per_component.iter().any(|a| a.is_empty()) {
        // some component has more parts than dimensions: nothing to allocate
        return Err(Error::InvalidInput("multipartite component with more parts than d".into()));
    }
    let mut worst: Option<Vec<usize>> = None;
    let mut cases = 0;
    let mut combo = vec![0usize; per_component.len()];
    loop {
        let parts: Vec<(Vec<usize>, usize)> = cert
            .multipartite
            .iter()
            .zip(&combo)
            .enumerate()
            .flat_map(|(c, (ps, &ai))| ps.iter().cloned().zip(per_component[c][ai].iter().copied()))
            .collect();
        for classes in &branches {
            cases += 1;
            let mut s = knapsack(k, classes, &parts, d - 1);
            for h in &cert.hyperplanes {
                if h.len() > s.len() {
                    s = h.clone();
                }
            }
            if worst.as_ref().map_or(true, |w| s.len() < w.len()) {
                worst = Some(s);
            }
        }
        let Some(i) = (0..combo.len()).rev().find(|&i| combo[i] + 1 < per_component[i].len()) else { break };
        combo[i] += 1;
        for c in combo.iter_mut().skip(i + 1) {
            *c = 0;
        }
    }
    let worst = worst.unwrap_or_default();
    let satisfied = worst.len() < t;
    Ok(SpanReport {
        satisfied,
        witness: (!satisfied).then(|| worst[..t].to_vec()),
        rank_bound: (!satisfied).then_some(d - 1),
        k,
        d,
        parties,
        tuple_size: t,
        max_deficient: worst.len(),
        cases,
    })
}

/// Componentwise tensor product of two representations over the same index set.
pub fn tensor(a: &Representation, b: &Representation) -> Result<Representation> {
    if a.len() != b.len() {
        return Err(Error::InvalidInput(format!("sizes differ: {} vs {}", a.len(), b.len())));
    }
    fn kron<S: Scalar>(x: &[Vec<S>], y: &[Vec<S>]) -> Vec<Vec<S>> {
        x.iter()
            .zip(y)
            .map(|(u, v)| u.iter().flat_map(|p| v.iter().map(move |q| p.mul(q))).collect())
            .collect()
    }
    let d = a.d * b.d;
    match (&a.vectors, &b.vectors) {
        (Vectors::Exact(x), Vectors::Exact(y)) => Representation::exact(d, kron(x, y)),
        (Vectors::Algebraic(x), Vectors::Algebraic(y)) => Representation::algebraic(d, kron(x, y)),
        _ => {
            let (x, y) = (a.to_float(), b.to_float());
            let v = x.iter().zip(&y).map(|(u, w)| u.iter().flat_map(|p| w.iter().map(move |q| p * q)).collect()).collect();
            Representation::float(d, v)
        }
    }
}

/// Every `tuple`-subset of the pairwise products `a_m (x) b_m` must reach
/// rank `min(tuple, d^2)`; defaults to `tuple = d^2`.
pub fn check_pair_spanning(a: &Representation, b: &Representation, tuple: Option<usize>) -> Result<SpanReport> {
    if a.d != b.d {
        return Err(Error::InvalidInput(format!("dimensions differ: {} vs {}", a.d, b.d)));
    }
    let prod = tensor(a, b)?;
    let k = prod.len();
    let full = prod.d;
    let t = tuple.unwrap_or(full);
    if t == 0 || t > k {
        return Err(Error::InvalidInput(format!("tuple size {t} not in 1..={k}")));
    }
    let target = t.min(full);
    let mut witness = None;
    let mut err = None;
    let mut cases = 0;
    combinations(k, t, |s| {
        cases += 1;
        match rank_of_subset(&prod, s) {
            Ok(r) if r < target => {
                witness = Some((s.to_vec(), r));
                false
            }
            Ok(_) => true,
            Err(e) => {
                err = Some(e);
                false
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(SpanReport {
        satisfied: witness.is_none(),
        rank_bound: witness.as_ref().map(|w| w.1),
        max_deficient: witness.as_ref().map_or(0, |w| w.0.len()),
        witness: witness.map(|w| w.0),
        k,
        d: a.d,
        parties: 2,
        tuple_size: t,
        cases,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sizes() {
        assert_eq!(tuple_size(13, 3, 3).unwrap(), 5);
        assert_eq!(tuple_size(24, 4, 3).unwrap(), 9);
        assert!(tuple_size(5, 3, 3).is_err());
    }

    #[test]
    fn allocation_counts() {
        assert_eq!(allocations(3, 4).len(), 4);
        assert_eq!(allocations(2, 3).len(), 3);
        assert!(allocations(5, 4).is_empty());
    }

    #[test]
    fn certificate_from_classes() {
        let mut c = SpanCertificate::new(13);
        c.add_component_branches(&[vec![vec![2, 3], vec![8, 9, 10]]], 0);
        let r = check_spanning_certificate(&c, 3, 3).unwrap();
        assert!(!r.satisfied);
        assert_eq!(r.witness, Some(vec![2, 3, 8, 9, 10]));
    }

    #[test]
    fn repeated_vectors_break_pairs() {
        let a = Representation::from_ints(2, &[vec![1, 0], vec![1, 0], vec![1, 0], vec![1, 0], vec![0, 1]]).unwrap();
        let b = Representation::from_ints(2, &[vec![1, 0], vec![0, 1], vec![1, 1], vec![1, 2], vec![1, 3]]).unwrap();
        let r = check_pair_spanning(&a, &b, None).unwrap();
        assert!(!r.satisfied);
    }
}
