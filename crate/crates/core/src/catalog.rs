//! Named graphs and explicit vector sets, with load-time consistency checks.

use std::collections::HashMap;
use std::sync::{Arc, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

use crate::canon::{canonical_form, CanonicalForm};
use crate::error::{Error, Result};
use crate::exact::{AlgNum, GaussRat, NumberField, Scalar};
use crate::filter::{ObstructionSet, Pattern};
use crate::graph::Graph;
use crate::io::parse_edge_list;
use crate::repr::Representation;

const DATA: &str = include_str!("../data/catalog.txt");

/// A structural or representation-theoretic claim attached to a graph.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum Fact {
    Regular(usize),
    Girth(usize),
    Omega(usize),
    Connected,
    Multipartite(Vec<usize>),
    /// A faithful representation exists in this dimension.
    For(usize),
    /// No faithful representation exists in this dimension.
    NoFor(usize),
    /// No faithful real representation in this dimension.
    NoRealFor(usize),
}

impl Fact {
    fn parse(s: &str) -> Result<Fact> {
        let bad = || Error::InvalidInput(format!("unknown fact {s:?}"));
        let (key, val) = s.split_once(':').unwrap_or((s, ""));
        let num = || val.parse::<usize>().map_err(|_| bad());
        Ok(match key {
            "regular" => Fact::Regular(num()?),
            "girth" => Fact::Girth(num()?),
            "omega" => Fact::Omega(num()?),
            "connected" => Fact::Connected,
            "multipartite" => Fact::Multipartite(
                val.split('-').map(|p| p.parse().map_err(|_| bad())).collect::<Result<_>>()?,
            ),
            "for" => Fact::For(num()?),
            "no-for" => Fact::NoFor(num()?),
            "no-real-for" => Fact::NoRealFor(num()?),
            _ => return Err(bad()),
        })
    }

    /// Checks structural facts; representation facts are not checked here.
    pub fn check(&self, g: &Graph) -> std::result::Result<(), String> {
        let ok = match self {
            Fact::Regular(r) => g.is_regular() == Some(*r),
            Fact::Girth(x) => g.girth() == Some(*x),
            Fact::Omega(w) => g.clique_number() == *w,
            Fact::Connected => g.is_connected(),
            Fact::Multipartite(p) => g.complete_multipartite_parts().as_ref() == Some(p),
            Fact::For(_) | Fact::NoFor(_) | Fact::NoRealFor(_) => true,
        };
        if ok {
            Ok(())
        } else {
            Err(format!("{self:?} does not hold"))
        }
    }
}

impl std::fmt::Display for Fact {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Fact::Regular(r) => write!(f, "regular:{r}"),
            Fact::Girth(g) => write!(f, "girth:{g}"),
            Fact::Omega(w) => write!(f, "omega:{w}"),
            Fact::Connected => write!(f, "connected"),
            Fact::Multipartite(p) => {
                write!(f, "multipartite:{}", p.iter().map(|x| x.to_string()).collect::<Vec<_>>().join("-"))
            }
            Fact::For(d) => write!(f, "for:{d}"),
            Fact::NoFor(d) => write!(f, "no-for:{d}"),
            Fact::NoRealFor(d) => write!(f, "no-real-for:{d}"),
        }
    }
}

#[derive(Clone, Debug)]
pub struct CatalogEntry {
    pub name: String,
    pub graph: Graph,
    pub provenance: String,
    pub facts: Vec<Fact>,
}

impl CatalogEntry {
    pub fn no_for(&self, d: usize) -> bool {
        self.facts.contains(&Fact::NoFor(d))
    }
}

fn parse_catalog(text: &str) -> Result<Vec<CatalogEntry>> {
    let mut entries = Vec::new();
    for block in text.split("\n\n") {
        let mut name = None;
        let mut provenance = String::new();
        let mut facts = Vec::new();
        let mut body = String::new();
        for line in block.lines() {
            let line = line.trim();
            if line.starts_with('#') || line.is_empty() {
                continue;
            }
            if let Some(v) = line.strip_prefix("name=") {
                name = Some(v.to_string());
            } else if let Some(v) = line.strip_prefix("source=") {
                provenance = v.to_string();
            } else if let Some(v) = line.strip_prefix("facts=") {
                facts = v.split(',').filter(|s| !s.is_empty()).map(Fact::parse).collect::<Result<_>>()?;
            } else {
                body.push_str(line);
                body.push('\n');
            }
        }
        let Some(name) = name else { continue };
        let mut graphs = parse_edge_list(&body)?;
        if graphs.len() != 1 {
            return Err(Error::Catalog { name, reason: format!("expected one graph, found {}", graphs.len()) });
        }
        let graph = graphs.pop().expect("one graph");
        for f in &facts {
            f.check(&graph).map_err(|reason| Error::Catalog { name: name.clone(), reason })?;
        }
        entries.push(CatalogEntry { name, graph, provenance, facts });
    }
    Ok(entries)
}

fn entries() -> &'static [CatalogEntry] {
    static CELL: OnceLock<Vec<CatalogEntry>> = OnceLock::new();
    CELL.get_or_init(|| parse_catalog(DATA).expect("embedded catalog is consistent"))
}

/// Every catalog entry in file order.
pub fn all() -> &'static [CatalogEntry] {
    entries()
}

pub fn names() -> Vec<&'static str> {
    entries().iter().map(|e| e.name.as_str()).collect()
}

pub fn entry(name: &str) -> Result<&'static CatalogEntry> {
    let key = alias(name);
    entries()
        .iter()
        .find(|e| e.name.eq_ignore_ascii_case(key))
        .ok_or_else(|| Error::UnknownGraph(name.to_string()))
}

pub fn get_graph(name: &str) -> Result<Graph> {
    entry(name).map(|e| e.graph.clone())
}

/// Catalog name of a graph isomorphic to `g`, if any.
pub fn identify(g: &Graph) -> Option<&'static str> {
    static CELL: OnceLock<HashMap<CanonicalForm, usize>> = OnceLock::new();
    let index = CELL.get_or_init(|| {
        let mut m = HashMap::new();
        for (i, e) in entries().iter().enumerate() {
            m.entry(canonical_form(&e.graph)).or_insert(i);
        }
        m
    });
    index.get(&canonical_form(g)).map(|&i| entries()[i].name.as_str())
}

fn alias(name: &str) -> &str {
    match name {
        "G8_6" | "K44" => "G8_6",
        "D7,a" => "D7a",
        "D7,b" => "D7b",
        "E6|" => "E6bar",
        "W7||" => "W7bars",
        "B6°" => "B6circ",
        "C4^(3)" => "C4_3",
        "N̂11" => "N11hat",
        other => other,
    }
}

fn pattern(name: &str) -> Pattern {
    let e = entry(name).expect("obstruction pattern in catalog");
    Pattern { name: e.name.clone(), graph: e.graph.clone(), provenance: e.provenance.clone() }
}

/// Obstruction sets by name: `O3`, `O3hat`, `O3-cubic`, `O4`.
pub fn obstruction_set(name: &str) -> Result<ObstructionSet> {
    let (d, names): (usize, &[&str]) = match name {
        "O3" => (3, &["A6", "K5", "H5", "C4"]),
        "O3hat" => (3, &["A6", "K5", "H5", "C4", "N11hat"]),
        "O3-cubic" => (3, &["H5", "K5", "A6"]),
        "O3-components" => (3, &["K5", "L6"]),
        "O4" => (4, &["E6", "E6bar", "W7bars", "B6circ", "C4_3"]),
        _ => return Err(Error::UnknownGraph(name.to_string())),
    };
    Ok(ObstructionSet { dimension: d, patterns: names.iter().map(|n| pattern(n)).collect() })
}

pub fn obstruction_set_names() -> &'static [&'static str] {
    &["O3", "O3hat", "O3-cubic", "O3-components", "O4"]
}

/// An explicit vector set, optionally tied to a catalog graph.
#[derive(Clone, Debug)]
pub struct VectorFixture {
    pub name: String,
    pub d: usize,
    pub rep: Representation,
    pub graph: Option<String>,
    /// Per-party local vectors for product-vector fixtures.
    pub parties: Option<Vec<Representation>>,
}

fn ints(d: usize, vs: &[&[i64]]) -> Representation {
    let rows: Vec<Vec<i64>> = vs.iter().map(|v| v.to_vec()).collect();
    Representation::from_ints(d, &rows).expect("fixture vectors are nonzero")
}

fn fixture(name: &str, graph: &str, d: usize, vs: &[&[i64]]) -> VectorFixture {
    VectorFixture { name: name.into(), d, rep: ints(d, vs), graph: Some(graph.into()), parties: None }
}

/// Cubic field generated by the real root of `x^3 - 3x^2 + x - 2`.
pub fn cubic_field() -> Arc<NumberField> {
    let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    NumberField::new(&[-2, 1, -3, 1], (r(289, 100), r(29, 10))).expect("isolating interval is valid")
}

fn n36919() -> VectorFixture {
    let k = cubic_field();
    let c = |a: i64, b: i64, q: i64| k.element(&[a, b, q].map(|x| BigRational::from_integer(BigInt::from(x))));
    let v = |a: AlgNum, b: AlgNum, q: AlgNum| vec![a, b, q];
    let (zero, one) = (c(0, 0, 0), c(1, 0, 0));
    let x = c(0, 1, 0);
    let vectors = vec![
        v(one.clone(), zero.clone(), zero.clone()),
        v(zero.clone(), one.clone(), zero.clone()),
        v(zero.clone(), zero.clone(), one.clone()),
        v(zero.clone(), zero.clone(), one.clone()),
        v(zero.clone(), one.clone(), c(0, -1, 0)),
        v(one.clone(), zero.clone(), c(-1, 0, 0)),
        v(one.clone(), c(-1, 0, 0), zero.clone()),
        v(one.clone(), c(-1, 0, 0), zero.clone()),
        v(one.clone(), x.clone(), one.clone()),
        v(one.clone(), x.clone(), one.clone()),
        v(c(1, 0, 1), c(0, -1, 0), c(-1, 0, 0)),
        v(x.clone(), c(-2, 0, 0), x.clone()),
        v(c(-2, 1, 0), c(-2, 1, 0), c(0, 2, 0)),
        v(x.clone(), x.clone(), c(2, -1, 0)),
    ];
    let _ = one.is_zero();
    VectorFixture {
        name: "N36919_FOR3".into(),
        d: 3,
        rep: Representation::algebraic(3, vectors).expect("nonzero vectors"),
        graph: Some("N36919".into()),
        parties: None,
    }
}

/// The nineteen-element three-qutrit product basis with its stopper state.
fn upb19() -> VectorFixture {
    let phi = |p: i64| vec![0, 1, if p == 0 { 1 } else { -1 }];
    let psi = |p: i64| vec![1, if p == 0 { 1 } else { -1 }, 0];
    let e = |k: usize| {
        let mut v = vec![0i64; 3];
        v[k] = 1;
        v
    };
    let mut parties: [Vec<Vec<i64>>; 3] = [vec![], vec![], vec![]];
    let mut push = |a: Vec<i64>, b: Vec<i64>, c: Vec<i64>| {
        parties[0].push(a);
        parties[1].push(b);
        parties[2].push(c);
    };
    let pairs = [(0, 1), (1, 0), (1, 1)];
    for &(i, j) in &pairs {
        push(phi(i), e(0), psi(j));
    }
    for &(i, j) in &pairs {
        push(phi(i), psi(j), e(2));
    }
    for &(i, j) in &pairs {
        push(e(2), phi(i), psi(j));
    }
    for &(i, j) in &pairs {
        push(psi(j), e(2), phi(i));
    }
    for &(i, j) in &pairs {
        push(psi(j), phi(i), e(0));
    }
    for &(i, j) in &pairs {
        push(e(0), psi(j), phi(i));
    }
    push(vec![1, 1, 1], vec![1, 1, 1], vec![1, 1, 1]);
    let local: Vec<Representation> =
        parties.iter().map(|p| Representation::from_ints(3, p).expect("nonzero")).collect();
    let full: Vec<Vec<i64>> = (0..19)
        .map(|k| {
            let mut v = Vec::with_capacity(27);
            for a in &parties[0][k] {
                for b in &parties[1][k] {
                    for c in &parties[2][k] {
                        v.push(a * b * c);
                    }
                }
            }
            v
        })
        .collect();
    VectorFixture {
        name: "upb_19".into(),
        d: 27,
        rep: Representation::from_ints(27, &full).expect("nonzero"),
        graph: None,
        parties: Some(local),
    }
}

fn build_fixtures() -> Vec<VectorFixture> {
    let mut out = vec![
        fixture(
            "M5057_FOR3",
            "M5057",
            3,
            &[
                &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 0, 1], &[0, 2, -3], &[2, 0, -1], &[1, -1, 0],
                &[1, 1, 0], &[1, 3, 2], &[1, 3, 2], &[1, 3, 2], &[1, 1, -2], &[1, -1, 1],
            ],
        ),
        fixture(
            "N2359_FOR3",
            "N2359",
            3,
            &[
                &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 0, 1], &[0, 0, 1], &[1, 2, 0], &[1, -1, 0],
                &[2, -1, 4], &[1, 1, -1], &[1, -2, -1], &[1, -2, -1], &[1, -2, -1], &[7, 4, -1], &[1, -1, 3],
            ],
        ),
        fixture(
            "N11743_FOR3",
            "N11743",
            3,
            &[
                &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 0, 1], &[0, 1, 0], &[1, 0, 1], &[1, 1, 0],
                &[1, 2, -1], &[1, 2, -1], &[1, -1, 1], &[1, -1, 1], &[1, -2, -3], &[1, -2, -3], &[1, -2, -3],
            ],
        ),
        fixture(
            "N87949_FOR3",
            "N87949",
            3,
            &[
                &[1, 0, 0], &[0, 1, 0], &[0, 1, 0], &[0, 1, 0], &[0, 1, -1], &[5, 0, -1], &[3, 0, -1],
                &[2, 0, -1], &[1, -1, -1], &[1, -1, -1], &[1, -1, -1], &[1, -4, 5], &[1, -2, 3], &[1, -1, 2],
            ],
        ),
        fixture(
            "N87956_FOR3",
            "N87956",
            3,
            &[
                &[1, 0, 0], &[0, 1, 0], &[0, 1, 0], &[0, 2, -1], &[0, 2, -1], &[1, 0, 0], &[1, 0, 1],
                &[1, 0, 1], &[1, -1, -2], &[1, -1, -2], &[4, -1, -4], &[4, -1, -4], &[2, -4, 3], &[2, -4, 3],
            ],
        ),
        fixture(
            "N87957_FOR3",
            "N87957",
            3,
            &[
                &[1, 0, 0], &[0, 1, 0], &[0, 1, 0], &[0, 2, -1], &[0, 2, -1], &[1, 0, 0], &[1, 0, 1],
                &[7, 0, -12], &[1, -2, -4], &[1, -1, -2], &[2, 5, -2], &[2, 5, -2], &[12, -2, 7], &[12, -2, 7],
            ],
        ),
        fixture(
            "L94_FOR3",
            "L94",
            3,
            &[
                &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 0, 1], &[0, 0, 1], &[0, 0, 1], &[0, 1, 0],
                &[0, 1, 0], &[0, 1, 0], &[1, 0, 0], &[1, 0, 0], &[1, 0, 0],
            ],
        ),
        fixture(
            "L94_FOR4",
            "L94",
            4,
            &[
                &[1, 0, 0, 0], &[0, 1, 0, 0], &[0, 0, 1, 0], &[0, 0, 1, 1], &[0, 0, 1, 2], &[0, 0, 1, 3],
                &[0, 1, 0, 0], &[0, 1, 0, 0], &[0, 1, 0, 0], &[1, 0, 0, 0], &[1, 0, 0, 0], &[1, 0, 0, 0],
            ],
        ),
        fixture(
            "g254_FOR3",
            "g254",
            3,
            &[
                &[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 2, -3], &[1, 0, 1], &[2, -1, 0], &[2, -3, -2],
                &[2, -3, -2], &[1, 2, -3], &[1, 2, -3], &[4, 2, 1], &[1, 1, 1], &[1, 1, 1], &[1, -3, 2],
            ],
        ),
        fixture(
            "g411_FOR3",
            "g411",
            3,
            &[
                &[1, 0, 0], &[0, 1, 0], &[0, 1, 0], &[0, 1, -1], &[2, 0, -1], &[4, 0, -1], &[5, -1, -1],
                &[1, -1, -1], &[1, 3, 2], &[1, 1, 4], &[1, 1, 0], &[1, 1, 0], &[1, -1, 1], &[1, -1, 0],
            ],
        ),
        fixture(
            "g501_FOR3",
            "g501",
            3,
            &[
                &[1, 0, 0], &[0, 1, 0], &[0, 1, -2], &[0, 1, -1], &[3, 0, -2], &[1, 0, 2], &[2, 6, 3],
                &[2, -2, -1], &[2, 3, 3], &[1, -3, -3], &[6, 5, -3], &[3, -3, 4], &[1, 1, 0], &[3, -3, 1],
            ],
        ),
        fixture(
            "heawood_FOR4",
            "heawood",
            4,
            &[
                &[1, 0, 0, 0], &[0, 14, 7, -4], &[0, 3, -2, 0], &[0, 1, 0, 0], &[2, -2, 0, -7],
                &[10, -22, 32, -21], &[5, 2, 3, 0], &[1, 2, 3, 0], &[1, 0, -2, -1], &[1, 0, 1, 0],
                &[2, -5, 0, 2], &[1, 1, -1, 0], &[1, -1, -1, 0], &[2, -1, 0, 2],
            ],
        ),
        fixture(
            "petersen_FOR3",
            "petersen",
            3,
            &[
                &[0, 1, 0], &[1, 0, 0], &[0, 2, 3], &[2, 3, -2], &[1, 0, 1], &[1, -1, -1], &[2, 0, 1],
                &[0, 1, -1], &[1, 3, -2], &[1, -2, -2],
            ],
        ),
        fixture(
            "P3_FOR3",
            "P3",
            3,
            &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[0, 1, -1], &[1, 0, 1], &[1, 1, 0], &[1, -1, -1], &[1, -1, -1]],
        ),
    ];
    out.push(n36919());
    out.push(upb19());
    out
}

fn fixtures() -> &'static [VectorFixture] {
    static CELL: OnceLock<Vec<VectorFixture>> = OnceLock::new();
    CELL.get_or_init(build_fixtures)
}

pub fn fixture_names() -> Vec<&'static str> {
    fixtures().iter().map(|f| f.name.as_str()).collect()
}

pub fn get_fixture(name: &str) -> Result<VectorFixture> {
    fixtures()
        .iter()
        .find(|f| f.name.eq_ignore_ascii_case(name))
        .cloned()
        .ok_or_else(|| Error::UnknownGraph(name.to_string()))
}

pub fn all_fixtures() -> &'static [VectorFixture] {
    fixtures()
}

/// Gaussian-rational helper for callers building fixtures by hand.
pub fn gauss(re: i64, im: i64) -> GaussRat {
    GaussRat::complex_int(re, im)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_loads() {
        assert!(names().len() >= 40);
        let m = get_graph("M5057").unwrap();
        assert_eq!((m.n(), m.is_regular(), m.is_connected()), (13, Some(4), true));
        assert_eq!(get_graph("heawood").unwrap().girth(), Some(6));
        assert!(matches!(get_graph("nope"), Err(Error::UnknownGraph(_))));
    }

    #[test]
    fn fixtures_present() {
        let f = get_fixture("M5057_FOR3").unwrap();
        assert_eq!(f.rep.len(), 13);
        assert_eq!(get_fixture("upb_19").unwrap().rep.len(), 19);
        assert_eq!(get_fixture("petersen_FOR3").unwrap().d, 3);
    }
}

#[cfg(test)]
mod fixture_graphs {
    use super::*;
    use crate::canon::are_isomorphic;
    use crate::repr::{orthogonality_graph, OgMode};

    #[test]
    fn fixture_orthogonality_graphs() {
        let mut bad = vec![];
        for f in all_fixtures() {
            let Some(gname) = &f.graph else { continue };
            let g = get_graph(gname).unwrap();
            let og = orthogonality_graph(&f.rep, OgMode::Exact).unwrap();
            if og != g {
                bad.push(format!("{} equal={} iso={}", f.name, og == g, are_isomorphic(&og, &g)));
            }
        }
        assert!(bad.is_empty(), "{bad:?}");
    }
}
