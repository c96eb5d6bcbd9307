//! Size bounds, LOG degree constraints and edge counting.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BoundResult {
    pub d: usize,
    pub parties: usize,
    /// `(N d^(N-1) - 1) / (N - 1)` in lowest terms, e.g. `47/2`.
    pub rational_bound: String,
    pub numerator: u64,
    pub denominator: u64,
    pub minimal_size: u64,
    /// The bound is an integer, so a minimal basis meets it exactly.
    pub saturated: bool,
    pub required_log_regularity: DegreeSpec,
}

/// Degrees allowed for the vertices of a local orthogonality graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum DegreeSpec {
    Regular { degree: usize },
    /// Range taken from the literature, not derived here.
    PaperRange { degrees: Vec<usize>, marker: String },
    Unresolved { note: String },
}

impl DegreeSpec {
    pub fn degrees(&self) -> Vec<usize> {
        match self {
            DegreeSpec::Regular { degree } => vec![*degree],
            DegreeSpec::PaperRange { degrees, .. } => degrees.clone(),
            DegreeSpec::Unresolved { .. } => vec![],
        }
    }
}

fn others(d: usize, parties: usize) -> Result<u64> {
    if d < 2 || parties < 2 {
        return Err(Error::InvalidInput(format!("need d >= 2 and N >= 2, got d={d}, N={parties}")));
    }
    (d as u64)
        .checked_pow(parties as u32 - 1)
        .filter(|&x| x < 1 << 48)
        .ok_or_else(|| Error::InvalidInput(format!("d^(N-1) too large for d={d}, N={parties}")))
}

pub fn gupb_lower_bound(d: usize, parties: usize) -> Result<BoundResult> {
    let p = others(d, parties)?;
    let num = parties as u64 * p - 1;
    let den = parties as u64 - 1;
    let r = BigRational::new(BigInt::from(num), BigInt::from(den));
    let minimal = r.ceil().to_integer().to_u64().expect("fits");
    let saturated = r.is_integer();
    let rational_bound = if saturated { r.numer().to_string() } else { format!("{}/{}", r.numer(), r.denom()) };
    Ok(BoundResult {
        d,
        parties,
        rational_bound,
        numerator: r.numer().to_u64().expect("fits"),
        denominator: r.denom().to_u64().expect("fits"),
        minimal_size: minimal,
        saturated,
        required_log_regularity: required_log_regularity(d, parties, minimal as usize)?,
    })
}

/// Degrees a LOG of a `k`-element basis may have.
pub fn required_log_regularity(d: usize, parties: usize, k: usize) -> Result<DegreeSpec> {
    let p = others(d, parties)?;
    let num = parties as u64 * p - 1;
    let den = parties as u64 - 1;
    // k >= num/den
    if (k as u64) * den < num {
        return Err(Error::InvalidInput(format!("k={k} is below the lower bound {num}/{den} for d={d}, N={parties}")));
    }
    let marker = "paper-sourced range".to_string();
    Ok(if num % den == 0 && k as u64 == num / den {
        DegreeSpec::Regular { degree: k - p as usize }
    } else {
        match (d, parties, k) {
            (3, 3, 14) => DegreeSpec::PaperRange { degrees: vec![3, 4, 5], marker },
            (4, 3, 24) => DegreeSpec::PaperRange { degrees: vec![7, 8], marker },
            _ => DegreeSpec::Unresolved { note: format!("no recorded degree range for d={d}, N={parties}, k={k}") },
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeFeasibility {
    pub feasible: bool,
    pub edges: Vec<usize>,
    pub total: usize,
    pub needed: usize,
    pub trace: String,
}

/// Whether LOGs of the given regularities can exactly cover `K_n`.
pub fn decomposition_edge_feasible(n: usize, regularities: &[usize]) -> Result<EdgeFeasibility> {
    let mut edges = Vec::with_capacity(regularities.len());
    for &r in regularities {
        if r * n % 2 == 1 {
            return Err(Error::InvalidInput(format!("no {r}-regular graph on {n} vertices: {r}*{n} is odd")));
        }
        edges.push(r * n / 2);
    }
    let total: usize = edges.iter().sum();
    let needed = n * n.saturating_sub(1) / 2;
    let feasible = total == needed;
    let sum = edges.iter().map(|e| e.to_string()).collect::<Vec<_>>().join(" + ");
    let trace = format!("{sum} = {total} {} {needed} = C({n},2)", if feasible { "=" } else { "!=" });
    Ok(EdgeFeasibility { feasible, edges, total, needed, trace })
}

/// Number of ways to split `n` vertices among the allowed degrees.
pub fn count_degree_sequences(n: usize, allowed: &[usize]) -> u128 {
    let mut ds = allowed.to_vec();
    ds.sort_unstable();
    ds.dedup();
    let m = ds.len() as u128;
    if m == 0 {
        return u128::from(n == 0);
    }
    // C(n + m - 1, m - 1)
    let n = n as u128;
    (1..m).fold(1u128, |acc, i| acc * (n + i) / i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_bounds() {
        let b = gupb_lower_bound(3, 3).unwrap();
        assert_eq!((b.rational_bound.as_str(), b.minimal_size), ("13", 13));
        assert_eq!(b.required_log_regularity, DegreeSpec::Regular { degree: 4 });
        let b = gupb_lower_bound(4, 3).unwrap();
        assert_eq!((b.rational_bound.as_str(), b.minimal_size), ("47/2", 24));
        assert_eq!(b.required_log_regularity.degrees(), vec![7, 8]);
        let b = gupb_lower_bound(3, 4).unwrap();
        assert_eq!((b.rational_bound.as_str(), b.minimal_size), ("107/3", 36));
        assert!(gupb_lower_bound(1, 3).is_err());
    }

    #[test]
    fn regularity() {
        assert_eq!(required_log_regularity(3, 3, 14).unwrap().degrees(), vec![3, 4, 5]);
        assert!(required_log_regularity(3, 3, 12).is_err());
    }

    #[test]
    fn edges_and_sequences() {
        assert!(decomposition_edge_feasible(13, &[4, 4, 4]).unwrap().feasible);
        let f = decomposition_edge_feasible(14, &[4, 4, 4]).unwrap();
        assert_eq!((f.feasible, f.total, f.needed), (false, 84, 91));
        assert!(decomposition_edge_feasible(14, &[4, 4, 5]).unwrap().feasible);
        assert!(decomposition_edge_feasible(14, &[3, 5, 5]).unwrap().feasible);
        assert!(decomposition_edge_feasible(13, &[3]).is_err());
        assert_eq!(count_degree_sequences(14, &[3, 4, 5]), 120);
        assert_eq!(count_degree_sequences(24, &[7, 8]), 25);
        assert_eq!(count_degree_sequences(9, &[4]), 1);
    }
}
