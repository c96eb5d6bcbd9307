//! graph6 and edge-list readers and writers.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::{Graph, MAX_VERTICES};

const HEADER: &str = ">>graph6<<";

pub fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = String::new();
    if n <= 62 {
        out.push((n as u8 + 63) as char);
    } else {
        out.push(126 as char);
        for shift in [12, 6, 0] {
            out.push((((n >> shift) & 63) as u8 + 63) as char);
        }
    }
    let mut acc = 0u8;
    let mut used = 0;
    for j in 1..n {
        for i in 0..j {
            acc = acc << 1 | g.has_edge(i, j) as u8;
            used += 1;
            if used == 6 {
                out.push((acc + 63) as char);
                acc = 0;
                used = 0;
            }
        }
    }
    if used > 0 {
        out.push(((acc << (6 - used)) + 63) as char);
    }
    out
}

/// Parses one graph6 record. `base` is added to reported byte offsets.
pub fn parse_graph6(line: &str, base: usize) -> Result<Graph> {
    let mut s = line.as_bytes();
    let mut base = base;
    if let Some(rest) = line.strip_prefix(HEADER) {
        s = rest.as_bytes();
        base += HEADER.len();
    }
    let err = |offset: usize, message: &str| Error::Parse { offset: base + offset, message: message.into() };
    for (i, &b) in s.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(err(i, &format!("invalid graph6 byte 0x{b:02x}")));
        }
    }
    if s.is_empty() {
        return Err(err(0, "empty graph6 record"));
    }
    let (n, mut pos) = if s[0] == 126 {
        if s.len() < 4 || s[1] == 126 {
            return Err(err(1, "unsupported or truncated graph6 size field"));
        }
        let n = s[1..4].iter().fold(0usize, |acc, &b| acc << 6 | (b - 63) as usize);
        (n, 4)
    } else {
        ((s[0] - 63) as usize, 1)
    };
    if n > MAX_VERTICES {
        return Err(Error::TooManyVertices(n));
    }
    let need = (n * n.saturating_sub(1) / 2).div_ceil(6);
    if s.len() - pos != need {
        return Err(err(
            pos.min(s.len()),
            &format!("expected {need} adjacency bytes for {n} vertices, found {}", s.len() - pos),
        ));
    }
    let mut g = Graph::empty(n);
    let mut bit = 6;
    let mut cur = 0u8;
    for j in 1..n {
        for i in 0..j {
            if bit == 6 {
                cur = s[pos] - 63;
                pos += 1;
                bit = 0;
            }
            if cur >> (5 - bit) & 1 == 1 {
                g.add_edge(i, j);
            }
            bit += 1;
        }
    }
    if bit < 6 && n > 1 && cur & ((1u8 << (6 - bit)) - 1) != 0 {
        return Err(err(pos - 1, "nonzero padding bits"));
    }
    Ok(g)
}

/// Streams graphs from graph6 text, one record per line.
pub struct Graph6Reader<R> {
    inner: R,
    offset: usize,
    buf: String,
}

impl<R: BufRead> Graph6Reader<R> {
    pub fn new(inner: R) -> Self {
        Graph6Reader { inner, offset: 0, buf: String::new() }
    }
}

impl<R: BufRead> Iterator for Graph6Reader<R> {
    type Item = Result<Graph>;

    fn next(&mut self) -> Option<Result<Graph>> {
        loop {
            self.buf.clear();
            let read = match self.inner.read_line(&mut self.buf) {
                Ok(0) => return None,
                Ok(k) => k,
                Err(e) => return Some(Err(e.into())),
            };
            let start = self.offset;
            self.offset += read;
            let line = self.buf.trim_end_matches(['\n', '\r']);
            if line.is_empty() || line == HEADER {
                continue;
            }
            return Some(parse_graph6(line, start));
        }
    }
}

pub fn read_graph6(path: impl AsRef<Path>) -> Result<Vec<Graph>> {
    Graph6Reader::new(BufReader::new(File::open(path)?)).collect()
}

pub fn parse_graph6_str(text: &str) -> Result<Vec<Graph>> {
    Graph6Reader::new(text.as_bytes()).collect()
}

pub fn write_graph6<'a>(path: impl AsRef<Path>, graphs: impl IntoIterator<Item = &'a Graph>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for g in graphs {
        writeln!(w, "{}", to_graph6(g))?;
    }
    w.flush()?;
    Ok(())
}

/// Parses the block-structured edge-list format. A `;` acts as a line break.
pub fn parse_edge_list(text: &str) -> Result<Vec<Graph>> {
    let mut out = Vec::new();
    let mut current: Option<(usize, Graph)> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let content = raw.split('#').next().unwrap_or("");
        if content.trim().is_empty() {
            if !raw.contains('#') {
                if let Some((_, g)) = current.take() {
                    out.push(g);
                }
            }
            continue;
        }
        for segment in content.split(';') {
            for tok in segment.split_whitespace() {
                let fail = |message: String| Error::Line { line: line_no, message };
                if let Some(v) = tok.strip_prefix("n=") {
                    if let Some((_, g)) = current.take() {
                        out.push(g);
                    }
                    let n: usize = v.parse().map_err(|_| fail(format!("bad vertex count {v:?}")))?;
                    if n > MAX_VERTICES {
                        return Err(fail(format!("{n} vertices exceed {MAX_VERTICES}")));
                    }
                    current = Some((line_no, Graph::empty(n)));
                    continue;
                }
                let Some((_, g)) = current.as_mut() else {
                    return Err(fail(format!("edge {tok:?} before any n= header")));
                };
                let (a, b) = tok.split_once('-').ok_or_else(|| fail(format!("bad edge token {tok:?}")))?;
                let u: usize = a.parse().map_err(|_| fail(format!("bad vertex {a:?}")))?;
                let v: usize = b.parse().map_err(|_| fail(format!("bad vertex {b:?}")))?;
                if u >= g.n() || v >= g.n() {
                    return Err(fail(format!("vertex {} out of range for n={}", u.max(v), g.n())));
                }
                if u == v {
                    return Err(fail(format!("self-loop at vertex {u}")));
                }
                if g.has_edge(u, v) {
                    return Err(fail(format!("duplicate edge {u}-{v}")));
                }
                g.add_edge(u, v);
            }
        }
    }
    if let Some((_, g)) = current {
        out.push(g);
    }
    Ok(out)
}

pub fn read_edge_list(path: impl AsRef<Path>) -> Result<Vec<Graph>> {
    parse_edge_list(&std::fs::read_to_string(path)?)
}

pub fn to_edge_list(g: &Graph) -> String {
    let edges: Vec<String> = g.edges().iter().map(|(u, v)| format!("{u}-{v}")).collect();
    format!("n={}\n{}\n", g.n(), edges.join(" "))
}

pub fn write_edge_list<'a>(path: impl AsRef<Path>, graphs: impl IntoIterator<Item = &'a Graph>) -> Result<()> {
    let mut w = BufWriter::new(File::create(path)?);
    for (i, g) in graphs.into_iter().enumerate() {
        if i > 0 {
            writeln!(w)?;
        }
        write!(w, "{}", to_edge_list(g))?;
    }
    w.flush()?;
    Ok(())
}

/// Reads a graph file, choosing the format by extension (`.g6` or anything
/// starting with the graph6 header is graph6; otherwise edge list).
pub fn read_graphs(path: impl AsRef<Path>) -> Result<Vec<Graph>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    let is_g6 = path.extension().is_some_and(|e| e == "g6") || text.starts_with(HEADER);
    if is_g6 {
        parse_graph6_str(&text)
    } else {
        parse_edge_list(&text)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn graph6_known_strings() {
        let g = parse_graph6("D~{", 0).unwrap();
        assert_eq!(g.n(), 5);
        assert_eq!(to_graph6(&g), "D~{");
        assert_eq!(to_graph6(&Graph::complete(5)), "D~{");
        assert_eq!(parse_graph6(">>graph6<<D~{", 0).unwrap(), Graph::complete(5));
    }

    #[test]
    fn graph6_corrupt_offset() {
        match parse_graph6("D~ {", 0) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("unexpected {other:?}"),
        }
        let text = "D~{\nD~\n";
        match parse_graph6_str(text) {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn edge_list_blocks() {
        let gs = parse_edge_list("n=4; 0-1 1-2 2-3 3-0 0-2").unwrap();
        assert_eq!(gs.len(), 1);
        assert_eq!(gs[0].degree_sequence(), vec![3, 3, 2, 2]);
        assert!(parse_edge_list("").unwrap().is_empty());
        let two = parse_edge_list("# two graphs\nn=2\n0-1\n\nn=3 # path\n0-1\n1-2\n").unwrap();
        assert_eq!(two.len(), 2);
        assert!(matches!(parse_edge_list("n=3\n0-0"), Err(Error::Line { line: 2, .. })));
        assert!(matches!(parse_edge_list("n=3\n0-1\n1-0"), Err(Error::Line { line: 3, .. })));
        assert!(matches!(parse_edge_list("n=3\n0-3"), Err(Error::Line { line: 2, .. })));
    }
}
