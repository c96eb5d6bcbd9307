//! Vector representations of graphs: storage, text format, verification,
//! orthogonality graphs and subset ranks.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::{self, AlgNum, GaussRat, Scalar};
use crate::graph::Graph;
use crate::numeric;

#[derive(Clone, Debug)]
pub enum Vectors {
    Exact(Vec<Vec<GaussRat>>),
    /// Components in a real number field (e.g. a cubic irrationality).
    Algebraic(Vec<Vec<AlgNum>>),
    Float(Vec<Vec<Complex64>>),
}

/// Per-vertex vectors in dimension `d`.
#[derive(Clone, Debug)]
pub struct Representation {
    pub d: usize,
    pub vectors: Vectors,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Exact,
    Algebraic,
    Float,
}

fn check_shape<T>(d: usize, vs: &[Vec<T>], zero: impl Fn(&T) -> bool) -> Result<()> {
    for (i, v) in vs.iter().enumerate() {
        if v.len() != d {
            return Err(Error::InvalidInput(format!("vector {i} has {} components, expected {d}", v.len())));
        }
        if v.iter().all(&zero) {
            return Err(Error::InvalidInput(format!("vector {i} is zero")));
        }
    }
    Ok(())
}

impl Representation {
    pub fn exact(d: usize, vectors: Vec<Vec<GaussRat>>) -> Result<Self> {
        check_shape(d, &vectors, |x| x.is_zero())?;
        Ok(Representation { d, vectors: Vectors::Exact(vectors) })
    }

    /// Exact representation from integer components.
    pub fn from_ints(d: usize, vectors: &[Vec<i64>]) -> Result<Self> {
        Self::exact(d, vectors.iter().map(|v| v.iter().map(|&x| GaussRat::int(x)).collect()).collect())
    }

    pub fn algebraic(d: usize, vectors: Vec<Vec<AlgNum>>) -> Result<Self> {
        check_shape(d, &vectors, |x| x.is_zero())?;
        Ok(Representation { d, vectors: Vectors::Algebraic(vectors) })
    }

    pub fn float(d: usize, vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        check_shape(d, &vectors, |x| x.norm() == 0.0)?;
        Ok(Representation { d, vectors: Vectors::Float(vectors) })
    }

    pub fn len(&self) -> usize {
        match &self.vectors {
            Vectors::Exact(v) => v.len(),
            Vectors::Algebraic(v) => v.len(),
            Vectors::Float(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn mode(&self) -> Mode {
        match &self.vectors {
            Vectors::Exact(_) => Mode::Exact,
            Vectors::Algebraic(_) => Mode::Algebraic,
            Vectors::Float(_) => Mode::Float,
        }
    }

    pub fn to_float(&self) -> Vec<Vec<Complex64>> {
        fn conv<S: Scalar>(vs: &[Vec<S>]) -> Vec<Vec<Complex64>> {
            vs.iter().map(|v| v.iter().map(Scalar::to_complex).collect()).collect()
        }
        match &self.vectors {
            Vectors::Exact(v) => conv(v),
            Vectors::Algebraic(v) => conv(v),
            Vectors::Float(v) => v.clone(),
        }
    }

    pub fn as_float(&self) -> Representation {
        Representation { d: self.d, vectors: Vectors::Float(self.to_float()) }
    }

    /// Sub-representation on the given vertices.
    pub fn select(&self, subset: &[usize]) -> Result<Representation> {
        if let Some(&bad) = subset.iter().find(|&&i| i >= self.len()) {
            return Err(Error::VertexOutOfRange { vertex: bad, n: self.len() });
        }
        let vectors = match &self.vectors {
            Vectors::Exact(v) => Vectors::Exact(subset.iter().map(|&i| v[i].clone()).collect()),
            Vectors::Algebraic(v) => Vectors::Algebraic(subset.iter().map(|&i| v[i].clone()).collect()),
            Vectors::Float(v) => Vectors::Float(subset.iter().map(|&i| v[i].clone()).collect()),
        };
        Ok(Representation { d: self.d, vectors })
    }

    /// Text form: `d=<d> mode=exact|float` header, one vector per line.
    pub fn to_text(&self) -> Result<String> {
        let mut out = String::new();
        match &self.vectors {
            Vectors::Exact(vs) => {
                writeln!(out, "d={} mode=exact", self.d).expect("write to string");
                for v in vs {
                    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
                    writeln!(out, "{}", parts.join(" ")).expect("write to string");
                }
            }
            Vectors::Float(vs) => {
                writeln!(out, "d={} mode=float", self.d).expect("write to string");
                for v in vs {
                    let parts: Vec<String> = v.iter().map(|x| format_complex(*x)).collect();
                    writeln!(out, "{}", parts.join(" ")).expect("write to string");
                }
            }
            Vectors::Algebraic(_) => {
                return Err(Error::InvalidInput("algebraic representations have no text form".into()))
            }
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Representation> {
        let mut header: Option<(usize, Mode)> = None;
        let mut exact_rows: Vec<Vec<GaussRat>> = Vec::new();
        let mut float_rows: Vec<Vec<Complex64>> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fail = |message: String| Error::Line { line: line_no, message };
            let Some((d, mode)) = header else {
                let mut d = None;
                let mut mode = None;
                for tok in line.split_whitespace() {
                    if let Some(v) = tok.strip_prefix("d=") {
                        d = Some(v.parse::<usize>().map_err(|_| fail(format!("bad dimension {v:?}")))?);
                    } else if let Some(v) = tok.strip_prefix("mode=") {
                        mode = Some(match v {
                            "exact" => Mode::Exact,
                            "float" => Mode::Float,
                            _ => return Err(fail(format!("unknown mode {v:?}"))),
                        });
                    } else {
                        return Err(fail(format!("unexpected header token {tok:?}")));
                    }
                }
                match (d, mode) {
                    (Some(d), Some(m)) if d > 0 => header = Some((d, m)),
                    _ => return Err(fail("header must be \"d=<int> mode=exact|float\"".into())),
                }
                continue;
            };
            let comps: Vec<&str> = line.split(|c: char| c.is_whitespace() || c == ',').filter(|s| !s.is_empty()).collect();
            if comps.len() != d {
                return Err(fail(format!("expected {d} components, found {}", comps.len())));
            }
            let parsed: Vec<GaussRat> = comps
                .iter()
                .map(|c| GaussRat::parse(c).map_err(|e| fail(e.to_string())))
                .collect::<Result<_>>()?;
            if parsed.iter().all(|x| x.is_zero()) {
                return Err(fail("zero vector".into()));
            }
            match mode {
                Mode::Float => float_rows.push(parsed.iter().map(Scalar::to_complex).collect()),
                _ => exact_rows.push(parsed),
            }
        }
        let (d, mode) = header.ok_or_else(|| Error::InvalidInput("missing representation header".into()))?;
        match mode {
            Mode::Float => Representation::float(d, float_rows),
            _ => Representation::exact(d, exact_rows),
        }
    }

    pub fn read(path: impl AsRef<std::path::Path>) -> Result<Representation> {
        Representation::parse(&std::fs::read_to_string(path)?)
    }
}

fn format_complex(z: Complex64) -> String {
    if z.im == 0.0 {
        format!("{:e}", z.re)
    } else if z.im < 0.0 {
        format!("{:e}-{:e}i", z.re, -z.im)
    } else {
        format!("{:e}+{:e}i", z.re, z.im)
    }
}

/// Tolerances for floating verification, applied to normalized inner products.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct FloatTolerance {
    pub zero: f64,
    pub far: f64,
}

impl Default for FloatTolerance {
    fn default() -> Self {
        FloatTolerance { zero: 1e-9, far: 1e-6 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ViolationKind {
    EdgeNotOrthogonal,
    NonEdgeOrthogonal,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Violation {
    pub i: usize,
    pub j: usize,
    pub kind: ViolationKind,
    /// Normalized `|<v_i|v_j>|`.
    pub magnitude: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyReport {
    pub pass: bool,
    pub mode: Mode,
    pub violations: Vec<Violation>,
    /// Largest normalized edge inner product, evaluated in floating point.
    pub max_edge_residual: f64,
    /// Smallest normalized non-edge inner product, evaluated in floating point.
    pub min_non_edge: f64,
}

fn normalized_gram(vs: &[Vec<Complex64>]) -> Vec<Vec<f64>> {
    let norms: Vec<f64> = vs.iter().map(|v| numeric::norm(v)).collect();
    let n = vs.len();
    let mut g = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let x = numeric::inner(&vs[i], &vs[j]).norm() / (norms[i] * norms[j]);
            g[i][j] = x;
            g[j][i] = x;
        }
    }
    g
}

fn exact_zero_pattern<S: Scalar>(vs: &[Vec<S>]) -> Vec<Vec<bool>> {
    let n = vs.len();
    let mut z = vec![vec![false; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let zero = exact::inner(&vs[i], &vs[j]).is_zero();
            z[i][j] = zero;
            z[j][i] = zero;
        }
    }
    z
}

/// Checks faithfulness: edges orthogonal, non-edges not orthogonal.
pub fn verify_representation(g: &Graph, rep: &Representation, tol: FloatTolerance) -> Result<VerifyReport> {
    if rep.len() != g.n() {
        return Err(Error::InvalidInput(format!(
            "representation has {} vectors for a graph on {} vertices",
            rep.len(),
            g.n()
        )));
    }
    let n = g.n();
    let gram = normalized_gram(&rep.to_float());
    let zero = match &rep.vectors {
        Vectors::Exact(v) => Some(exact_zero_pattern(v)),
        Vectors::Algebraic(v) => Some(exact_zero_pattern(v)),
        Vectors::Float(_) => None,
    };
    let mut violations = Vec::new();
    let mut max_edge: f64 = 0.0;
    let mut min_non_edge = f64::INFINITY;
    for i in 0..n {
        for j in i + 1..n {
            let m = gram[i][j];
            let is_zero = match &zero {
                Some(z) => z[i][j],
                None => m <= tol.zero,
            };
            if g.has_edge(i, j) {
                max_edge = max_edge.max(m);
                if !is_zero {
                    violations.push(Violation { i, j, kind: ViolationKind::EdgeNotOrthogonal, magnitude: m });
                }
            } else {
                min_non_edge = min_non_edge.min(m);
                let orthogonal = match &zero {
                    Some(z) => z[i][j],
                    None => m < tol.far,
                };
                if orthogonal {
                    violations.push(Violation { i, j, kind: ViolationKind::NonEdgeOrthogonal, magnitude: m });
                }
            }
        }
    }
    Ok(VerifyReport {
        pass: violations.is_empty(),
        mode: rep.mode(),
        violations,
        max_edge_residual: max_edge,
        min_non_edge,
    })
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum OgMode {
    Exact,
    Tolerance(f64),
}

/// Graph with an edge wherever two vectors are orthogonal.
pub fn orthogonality_graph(rep: &Representation, mode: OgMode) -> Result<Graph> {
    let n = rep.len();
    if n > crate::graph::MAX_VERTICES {
        return Err(Error::TooManyVertices(n));
    }
    let mut g = Graph::empty(n);
    match (mode, &rep.vectors) {
        (OgMode::Exact, Vectors::Exact(v)) => fill(&mut g, &exact_zero_pattern(v)),
        (OgMode::Exact, Vectors::Algebraic(v)) => fill(&mut g, &exact_zero_pattern(v)),
        (OgMode::Exact, Vectors::Float(_)) => {
            return Err(Error::InvalidInput("exact orthogonality needs exact components".into()))
        }
        (OgMode::Tolerance(eps), _) => {
            let gram = normalized_gram(&rep.to_float());
            let z: Vec<Vec<bool>> = gram.iter().map(|r| r.iter().map(|&x| x < eps).collect()).collect();
            fill(&mut g, &z);
        }
    }
    Ok(g)
}

fn fill(g: &mut Graph, z: &[Vec<bool>]) {
    for i in 0..z.len() {
        for j in i + 1..z.len() {
            if z[i][j] {
                g.add_edge(i, j);
            }
        }
    }
}

pub const FLOAT_RANK_TOL: f64 = 1e-8;

/// Dimension of the span of the selected vectors.
pub fn rank_of_subset(rep: &Representation, subset: &[usize]) -> Result<usize> {
    if subset.is_empty() {
        return Err(Error::InvalidInput("empty subset".into()));
    }
    let sel = rep.select(subset)?;
    Ok(match &sel.vectors {
        Vectors::Exact(v) => exact::rank(v),
        Vectors::Algebraic(v) => exact::rank(v),
        Vectors::Float(v) => numeric::rank(v, FLOAT_RANK_TOL),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basis_is_triangle() {
        let rep = Representation::from_ints(3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(orthogonality_graph(&rep, OgMode::Exact).unwrap(), Graph::complete(3));
        assert_eq!(rank_of_subset(&rep, &[0, 1, 2]).unwrap(), 3);
        assert_eq!(rank_of_subset(&rep, &[1]).unwrap(), 1);
        assert!(rank_of_subset(&rep, &[]).is_err());
        let back = Representation::parse(&rep.to_text().unwrap()).unwrap();
        assert_eq!(orthogonality_graph(&back, OgMode::Exact).unwrap(), Graph::complete(3));
    }

    #[test]
    fn zero_vector_rejected() {
        assert!(Representation::from_ints(2, &[vec![0, 0]]).is_err());
        assert!(matches!(Representation::parse("d=2 mode=exact\n1 0\n0 0\n"), Err(Error::Line { line: 3, .. })));
    }

    #[test]
    fn float_text_roundtrip() {
        let rep = Representation::parse("d=2 mode=float\n1+0.5i -2\n0.25 3i\n").unwrap();
        let back = Representation::parse(&rep.to_text().unwrap()).unwrap();
        assert_eq!(rep.to_float(), back.to_float());
    }
}
