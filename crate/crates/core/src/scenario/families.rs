//! Regular graph families for scenarios: generated, cached or ingested.

use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::gen::{enumerate_regular, Connectivity, EnumerationSpec};
use crate::graph::Graph;
use crate::io::{read_graph6, write_graph6};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Source {
    Generate,
    /// Directory holding one graph6 file per family, see [`family_file_name`].
    Ingest(PathBuf),
}

fn conn_label(c: Connectivity) -> &'static str {
    match c {
        Connectivity::All => "all",
        Connectivity::ConnectedOnly => "connected",
        Connectivity::DisconnectedOnly => "disconnected",
    }
}

/// `13_4_connected.g6`, `14_3_all_g5.g6`.
pub fn family_file_name(spec: &EnumerationSpec) -> String {
    let girth = spec.girth_min.map(|g| format!("_g{g}")).unwrap_or_default();
    format!("{}_{}_{}{}.g6", spec.n, spec.r, conn_label(spec.connectivity), girth)
}

pub fn family_label(spec: &EnumerationSpec) -> String {
    let girth = spec.girth_min.map(|g| format!(", girth >= {g}")).unwrap_or_default();
    format!("({}, {}) {}{}", spec.n, spec.r, conn_label(spec.connectivity), girth)
}

/// Cache file for a spec: name plus a short hash of the spec and format version.
pub fn cache_path(dir: &Path, spec: &EnumerationSpec) -> PathBuf {
    let key = format!("gupb-lab/1 {:?}", spec);
    let h = Sha256::digest(key.as_bytes());
    let short: String = h[..6].iter().map(|b| format!("{b:02x}")).collect();
    let stem = family_file_name(spec);
    dir.join(format!("{}-{short}.g6", stem.trim_end_matches(".g6")))
}

fn check_member(spec: &EnumerationSpec, g: &Graph) -> bool {
    let conn_ok = match spec.connectivity {
        Connectivity::All => true,
        Connectivity::ConnectedOnly => g.is_connected(),
        Connectivity::DisconnectedOnly => !g.is_connected(),
    };
    g.n() == spec.n
        && g.is_regular() == Some(spec.r)
        && conn_ok
        && spec.girth_min.map_or(true, |m| g.girth().map_or(true, |x| x >= m))
}

pub fn ingest(dir: &Path, spec: &EnumerationSpec) -> Result<Vec<Graph>> {
    let path = dir.join(family_file_name(spec));
    if !path.is_file() {
        return Err(Error::MissingInput(path));
    }
    let graphs = read_graph6(&path)?;
    if let Some(i) = graphs.iter().position(|g| !check_member(spec, g)) {
        return Err(Error::InvalidInput(format!(
            "{}: record {} is not in family {}",
            path.display(),
            i + 1,
            family_label(spec)
        )));
    }
    Ok(graphs)
}

/// Generates the family, reusing a cached copy under `cache` when present.
pub fn generate_cached(spec: &EnumerationSpec, cache: Option<&Path>) -> Result<Vec<Graph>> {
    if let Some(dir) = cache {
        let path = cache_path(dir, spec);
        if path.is_file() {
            if let Ok(gs) = read_graph6(&path) {
                if gs.iter().all(|g| check_member(spec, g)) {
                    return Ok(gs);
                }
            }
        }
        let gs = enumerate_regular(spec)?;
        std::fs::create_dir_all(dir)?;
        let tmp = path.with_extension("g6.tmp");
        write_graph6(&tmp, &gs)?;
        std::fs::rename(&tmp, &path)?;
        return Ok(gs);
    }
    enumerate_regular(spec)
}

pub fn load(spec: &EnumerationSpec, source: &Source, cache: Option<&Path>) -> Result<Vec<Graph>> {
    match source {
        Source::Generate => generate_cached(spec, cache),
        Source::Ingest(dir) => ingest(dir, spec),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cache_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let spec = EnumerationSpec::new(8, 4, Connectivity::All);
        let a = generate_cached(&spec, Some(dir.path())).unwrap();
        assert!(cache_path(dir.path(), &spec).is_file());
        let b = generate_cached(&spec, Some(dir.path())).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.len(), 6);
    }

    #[test]
    fn missing_ingest_file() {
        let dir = tempfile::tempdir().unwrap();
        let spec = EnumerationSpec::new(8, 4, Connectivity::All);
        assert!(matches!(ingest(dir.path(), &spec), Err(Error::MissingInput(_))));
    }
}
