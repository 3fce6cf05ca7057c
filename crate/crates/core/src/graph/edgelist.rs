//! Plain-text weighted edge lists.
//!
//! ```text
//! # comment
//! 2
//! 0 0 4
//! 0 1 2
//! 1 1 1
//! ```
//!
//! The first data line is the vertex count, then one `u v w` triple per line
//! with 0-based indices. `u == v` encodes a self-loop.

use std::fmt::Write as _;

use super::WeightedGraph;
use crate::error::{Error, Result};

pub fn parse_edgelist(text: &str) -> Result<WeightedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (lineno, first) = lines
        .next()
        .ok_or_else(|| Error::Parse("edge list is empty".into()))?;
    let n: usize = first.parse().map_err(|_| {
        Error::Parse(format!(
            "line {lineno}: expected vertex count, got {first:?}"
        ))
    })?;

    let mut edges = Vec::new();
    for (lineno, line) in lines {
        let fields: Vec<&str> = line.split_whitespace().collect();
        let [u, v, w] = fields[..] else {
            return Err(Error::Parse(format!(
                "line {lineno}: expected \"u v w\", got {line:?}"
            )));
        };
        let index = |s: &str| -> Result<usize> {
            let i: usize = s
                .parse()
                .map_err(|_| Error::Parse(format!("line {lineno}: bad vertex index {s:?}")))?;
            if i >= n {
                return Err(Error::Parse(format!(
                    "line {lineno}: vertex {i} out of range for n = {n}"
                )));
            }
            Ok(i)
        };
        let (u, v) = (index(u)?, index(v)?);
        let w: f64 = w
            .parse()
            .map_err(|_| Error::Parse(format!("line {lineno}: bad weight {w:?}")))?;
        if !(w.is_finite() && w > 0.0) {
            return Err(Error::Parse(format!(
                "line {lineno}: weight must be positive, got {w}"
            )));
        }
        edges.push((u, v, w));
    }
    WeightedGraph::from_edges(n, edges)
        .map_err(|e| match e {
            Error::InvalidParameter(msg) => Error::Parse(msg),
            other => other,
        })?
        .require_connected()
}

/// Writes the graph in the format accepted by [`parse_edgelist`]. Weights
/// use the shortest representation that parses back to the same `f64`.
pub fn write_edgelist(g: &WeightedGraph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        for line in c.lines() {
            let _ = writeln!(out, "# {line}");
        }
    }
    let _ = writeln!(out, "{}", g.n());
    for (u, v, w) in g.edges() {
        let _ = writeln!(out, "{u} {v} {w}");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::families::path;

    #[test]
    fn two_node_example() {
        let g = parse_edgelist("2\n0 0 4\n0 1 2\n1 1 1").unwrap();
        let a = g.adjacency();
        assert_eq!(a.as_slice(), &[4.0, 2.0, 2.0, 1.0]);
    }

    #[test]
    fn comments_and_blank_lines() {
        let g = parse_edgelist("# a path\n\n3\n# edges\n0 1 1\n1 2 1\n").unwrap();
        assert_eq!(
            g.edges().collect::<Vec<_>>(),
            path(3).edges().collect::<Vec<_>>()
        );
    }

    #[test]
    fn duplicate_pair() {
        let err = parse_edgelist("2\n0 1 1\n0 1 2").unwrap_err();
        assert!(
            matches!(err, Error::Parse(ref m) if m.contains("duplicate")),
            "{err}"
        );
        assert!(parse_edgelist("2\n0 1 1\n1 0 2").is_err());
    }

    #[test]
    fn bad_inputs() {
        assert!(matches!(parse_edgelist(""), Err(Error::Parse(_))));
        assert!(matches!(parse_edgelist("2\n0 1 0"), Err(Error::Parse(_))));
        assert!(matches!(parse_edgelist("2\n0 1 -3"), Err(Error::Parse(_))));
        assert!(matches!(parse_edgelist("2\n0 1 x"), Err(Error::Parse(_))));
        assert!(matches!(parse_edgelist("2\n0 2 1"), Err(Error::Parse(_))));
        assert!(matches!(parse_edgelist("2\n0 1"), Err(Error::Parse(_))));
        assert_eq!(parse_edgelist("4\n0 1 1\n2 3 1"), Err(Error::Disconnected));
    }

    #[test]
    fn writes_parseable_text() {
        let g = parse_edgelist("2\n0 0 4\n0 1 2.5\n1 1 0.1").unwrap();
        let text = write_edgelist(&g, &["seed=1".to_string()]);
        assert!(text.starts_with("# seed=1\n2\n"));
        assert_eq!(parse_edgelist(&text).unwrap(), g);
    }
}
