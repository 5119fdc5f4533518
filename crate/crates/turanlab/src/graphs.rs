//! Graph arguments: named builtins, edge lists, graph6 strings and files
//! holding either.

use std::path::Path;

use turanlab_core::graph::ParseGraphError;
use turanlab_core::Graph;

#[derive(Debug, thiserror::Error)]
pub enum GraphArgError {
    #[error("unknown builtin graph {0:?}")]
    UnknownBuiltin(String),
    #[error("cannot read graph file {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("graph file {0} holds no graph")]
    EmptyFile(String),
    #[error(transparent)]
    Parse(#[from] ParseGraphError),
}

/// `K2..K8`, `C3..C8`, `P2..P6`, `K33` and `Petersen` (case-insensitive).
pub fn builtin(name: &str) -> Option<Graph> {
    let lower = name.to_ascii_lowercase();
    if lower == "petersen" {
        return Some(Graph::petersen());
    }
    if lower == "k33" || lower == "k3,3" {
        return Some(Graph::complete_bipartite(3, 3));
    }
    let (kind, size) = lower.split_at(1);
    let n: usize = size.parse().ok()?;
    match kind {
        "k" if (2..=8).contains(&n) => Some(Graph::complete(n)),
        "c" if (3..=8).contains(&n) => Some(Graph::cycle(n)),
        "p" if (2..=6).contains(&n) => Some(Graph::path(n)),
        _ => None,
    }
}

/// Text holding a graph in edge-list form (anything with a `;`) or graph6.
pub fn parse_graph_text(text: &str) -> Result<Graph, ParseGraphError> {
    let t = text.trim();
    if t.contains(';') {
        Graph::from_edge_list(t)
    } else {
        Graph::from_graph6(t)
    }
}

/// Resolves a command-line graph: a builtin name, an edge list, an existing
/// file (first non-empty, non-comment line is parsed), or a graph6 string.
pub fn parse_graph_arg(arg: &str) -> Result<Graph, GraphArgError> {
    if let Some(g) = builtin(arg) {
        return Ok(g);
    }
    if arg.contains(';') {
        return Ok(Graph::from_edge_list(arg)?);
    }
    let path = arg.strip_prefix('@').unwrap_or(arg);
    if arg.starts_with('@') || Path::new(path).is_file() {
        let text =
            std::fs::read_to_string(path).map_err(|source| GraphArgError::Io { path: path.to_string(), source })?;
        let line = text
            .lines()
            .map(str::trim)
            .find(|l| !l.is_empty() && !l.starts_with('#'))
            .ok_or_else(|| GraphArgError::EmptyFile(path.to_string()))?;
        return Ok(parse_graph_text(line)?);
    }
    let looks_builtin = arg.len() <= 3 && arg.chars().next().is_some_and(|c| "KCPkcp".contains(c));
    if looks_builtin && arg[1..].chars().all(|c| c.is_ascii_digit()) && arg.len() > 1 {
        return Err(GraphArgError::UnknownBuiltin(arg.to_string()));
    }
    Ok(Graph::from_graph6(arg)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtins() {
        assert_eq!(builtin("K4"), Some(Graph::complete(4)));
        assert_eq!(builtin("c5"), Some(Graph::cycle(5)));
        assert_eq!(builtin("P3").unwrap().edge_count(), 2);
        assert_eq!(builtin("K33").unwrap().edge_count(), 9);
        assert_eq!(builtin("Petersen").unwrap().edge_count(), 15);
        assert_eq!(builtin("K9"), None);
        assert!(matches!(parse_graph_arg("K9"), Err(GraphArgError::UnknownBuiltin(_))));
    }

    #[test]
    fn text_forms() {
        let k3 = Graph::complete(3);
        assert_eq!(parse_graph_arg(&k3.to_graph6()).unwrap(), k3);
        assert_eq!(parse_graph_arg("3; 0-1,1-2,0-2").unwrap(), k3);
        assert!(matches!(parse_graph_arg("B\u{1}"), Err(GraphArgError::Parse(_))));
    }

    #[test]
    fn files() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("h.g6");
        std::fs::write(&path, format!("# K4\n\n{}\n", Graph::complete(4).to_graph6())).unwrap();
        assert_eq!(parse_graph_arg(path.to_str().unwrap()).unwrap(), Graph::complete(4));
        let missing = format!("@{}", dir.path().join("nope").display());
        assert!(matches!(parse_graph_arg(&missing), Err(GraphArgError::Io { .. })));
    }
}
