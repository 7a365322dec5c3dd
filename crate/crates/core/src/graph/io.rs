//! Edge-list and graph6 text formats.

use std::fmt::Write as _;

use thiserror::Error;

use super::{Graph, GraphError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {message}")]
    Malformed { line: usize, message: String },
    #[error("line {line}: {source}")]
    Graph { line: usize, source: GraphError },
    #[error("graph6: invalid character {found:?} at byte {pos}")]
    InvalidChar { pos: usize, found: char },
    #[error("graph6: truncated input, expected {expected} data bytes, found {found}")]
    Truncated { expected: usize, found: usize },
    #[error("graph6: {found} trailing bytes after the adjacency data")]
    TrailingData { found: usize },
    #[error("graph6: nonzero padding bits")]
    NonzeroPadding,
    #[error("graph6: empty input")]
    Empty,
}

/// Result of reading an edge list: the graph and how many duplicate edge
/// lines were collapsed.
#[derive(Debug, Clone)]
pub struct ParsedEdgeList {
    pub graph: Graph,
    pub duplicate_edges: usize,
}

/// Parses `n m` followed by `m` lines of `u v`. Blank lines are ignored and
/// CRLF line endings are accepted.
pub fn parse_edge_list(text: &str) -> Result<ParsedEdgeList, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or(ParseError::Malformed {
        line: 1,
        message: "missing \"n m\" header".into(),
    })?;
    let [n, m] = parse_pair(hline, header)?;

    let mut edges = Vec::with_capacity(m);
    for (line, body) in lines {
        if edges.len() == m {
            return Err(ParseError::Malformed {
                line,
                message: format!("more than the {m} edges declared in the header"),
            });
        }
        let [u, v] = parse_pair(line, body)?;
        for w in [u, v] {
            if w >= n {
                return Err(ParseError::Graph {
                    line,
                    source: GraphError::VertexOutOfRange { vertex: w, n },
                });
            }
        }
        if u == v {
            return Err(ParseError::Graph {
                line,
                source: GraphError::SelfLoop(u),
            });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(ParseError::Malformed {
            line: hline,
            message: format!("header declares {m} edges but {} were listed", edges.len()),
        });
    }
    let (graph, duplicate_edges) =
        Graph::with_duplicates(n, edges).map_err(|source| ParseError::Graph { line: hline, source })?;
    if duplicate_edges > 0 {
        log::warn!("collapsed {duplicate_edges} duplicate edge(s)");
    }
    Ok(ParsedEdgeList { graph, duplicate_edges })
}

fn parse_pair(line: usize, body: &str) -> Result<[usize; 2], ParseError> {
    let mut it = body.split_whitespace();
    let mut next = || -> Result<usize, ParseError> {
        let tok = it.next().ok_or_else(|| ParseError::Malformed {
            line,
            message: format!("expected two integers, got {body:?}"),
        })?;
        tok.parse().map_err(|_| ParseError::Malformed {
            line,
            message: format!("not a non-negative integer: {tok:?}"),
        })
    };
    let pair = [next()?, next()?];
    if it.next().is_some() {
        return Err(ParseError::Malformed {
            line,
            message: format!("expected two integers, got {body:?}"),
        });
    }
    Ok(pair)
}

/// Writes `n m` followed by one `u v` line per edge (`u < v`, lexicographic).
pub fn encode_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.order(), g.edge_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{u} {v}");
    }
    out
}

/// Decodes one graph6 line. An optional `>>graph6<<` header is accepted.
pub fn parse_graph6(line: &str) -> Result<Graph, ParseError> {
    let line = line.trim_end_matches(['\r', '\n']);
    let line = line.strip_prefix(">>graph6<<").unwrap_or(line);
    let bytes = line.as_bytes();
    if bytes.is_empty() {
        return Err(ParseError::Empty);
    }
    for (pos, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(ParseError::InvalidChar { pos, found: b as char });
        }
    }

    let (n, offset) = decode_order(bytes)?;
    let bits = n * n.saturating_sub(1) / 2;
    let expected = bits.div_ceil(6);
    let data = &bytes[offset..];
    if data.len() < expected {
        return Err(ParseError::Truncated {
            expected,
            found: data.len(),
        });
    }
    if data.len() > expected {
        return Err(ParseError::TrailingData {
            found: data.len() - expected,
        });
    }

    let bit = |k: usize| (data[k / 6] - 63) >> (5 - k % 6) & 1 == 1;
    if (bits..expected * 6).any(bit) {
        return Err(ParseError::NonzeroPadding);
    }
    let mut edges = Vec::new();
    let mut k = 0;
    for v in 1..n {
        for u in 0..v {
            if bit(k) {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    Ok(Graph::from_edges(n, edges).expect("graph6 edges are in range and loop-free"))
}

fn decode_order(bytes: &[u8]) -> Result<(usize, usize), ParseError> {
    let take = |from: usize, count: usize| -> Result<usize, ParseError> {
        if bytes.len() < from + count {
            return Err(ParseError::Truncated {
                expected: count,
                found: bytes.len().saturating_sub(from),
            });
        }
        Ok(bytes[from..from + count]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | usize::from(b - 63)))
    };
    if bytes[0] != 126 {
        return Ok((usize::from(bytes[0] - 63), 1));
    }
    if bytes.get(1) == Some(&126) {
        Ok((take(2, 6)?, 8))
    } else {
        Ok((take(1, 3)?, 4))
    }
}

/// Encodes a graph as a graph6 line (no header, no trailing newline).
pub fn encode_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = Vec::new();
    match n {
        0..=62 => out.push(n as u8 + 63),
        63..=258_047 => {
            out.push(126);
            out.extend((0..3).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
        }
        _ => {
            out.extend([126, 126]);
            out.extend((0..6).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
        }
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            acc = (acc << 1) | u8::from(g.has_edge(u, v));
            filled += 1;
            if filled == 6 {
                out.push(acc + 63);
                acc = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((acc << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 bytes are printable ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_list_path() {
        let p = parse_edge_list("3 2\n0 1\n1 2").unwrap();
        assert_eq!(p.graph.degrees(), vec![1, 2, 1]);
        assert_eq!(p.duplicate_edges, 0);
    }

    #[test]
    fn edge_list_single_vertex() {
        let p = parse_edge_list("1 0").unwrap();
        assert_eq!(p.graph.order(), 1);
        assert_eq!(p.graph.edge_count(), 0);
    }

    #[test]
    fn edge_list_k4() {
        let p = parse_edge_list("4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3").unwrap();
        assert_eq!(p.graph, Graph::complete(4));
        assert!(p.graph.degrees().iter().all(|&d| d == 3));
    }

    #[test]
    fn edge_list_crlf_and_duplicates() {
        let p = parse_edge_list("3 3\r\n0 1\r\n1 0\r\n1 2\r\n").unwrap();
        assert_eq!(p.duplicate_edges, 1);
        assert_eq!(p.graph.edge_count(), 2);
    }

    #[test]
    fn edge_list_errors_name_the_line() {
        let err = parse_edge_list("3 2\n0 1\n1 x").unwrap_err();
        assert!(matches!(err, ParseError::Malformed { line: 3, .. }), "{err}");
        let err = parse_edge_list("3 1\n0 3").unwrap_err();
        assert!(matches!(
            err,
            ParseError::Graph {
                line: 2,
                source: GraphError::VertexOutOfRange { vertex: 3, n: 3 }
            }
        ));
        let err = parse_edge_list("3 1\n2 2").unwrap_err();
        assert!(matches!(
            err,
            ParseError::Graph {
                line: 2,
                source: GraphError::SelfLoop(2)
            }
        ));
        assert!(parse_edge_list("3 2\n0 1").is_err());
        assert!(parse_edge_list("3 1\n0 1\n1 2").is_err());
        assert!(parse_edge_list("3 1\n0 1 2").is_err());
        assert!(parse_edge_list("").is_err());
    }

    #[test]
    fn graph6_star_round_trip() {
        let g = parse_graph6("D?{").unwrap();
        assert_eq!(g.order(), 5);
        assert_eq!(g.edges().collect::<Vec<_>>(), vec![(0, 4), (1, 4), (2, 4), (3, 4)]);
        assert_eq!(encode_graph6(&g), "D?{");
    }

    // Reference strings produced by networkx's graph6 writer.
    #[test]
    fn graph6_matches_reference_encoder() {
        let c5 = parse_graph6("Dhc").unwrap();
        assert_eq!(c5.order(), 5);
        assert_eq!(c5.edge_count(), 5);
        assert!(c5.degrees().iter().all(|&d| d == 2));
        assert_eq!(encode_graph6(&Graph::cycle(5)), "Dhc");
        assert_eq!(encode_graph6(&Graph::complete(4)), "C~");
        assert_eq!(encode_graph6(&Graph::path(5)), "DhC");
        assert_eq!(encode_graph6(&Graph::empty(0)), "?");
        assert_eq!(encode_graph6(&Graph::empty(1)), "@");
        assert!(encode_graph6(&Graph::path(70)).starts_with("~?@EhCGGC@?G"));
    }

    #[test]
    fn graph6_empty_pair() {
        let g = parse_graph6("A?").unwrap();
        assert_eq!(g.order(), 2);
        assert_eq!(g.edge_count(), 0);
    }

    #[test]
    fn graph6_large_order_header() {
        let g = Graph::path(70);
        assert_eq!(parse_graph6(&encode_graph6(&g)).unwrap(), g);
    }

    #[test]
    fn graph6_errors() {
        assert!(matches!(parse_graph6("D?"), Err(ParseError::Truncated { .. })));
        assert!(matches!(
            parse_graph6("D?{?"),
            Err(ParseError::TrailingData { found: 1 })
        ));
        assert!(matches!(
            parse_graph6("D 1"),
            Err(ParseError::InvalidChar { pos: 1, .. })
        ));
        assert!(matches!(parse_graph6("D?~"), Err(ParseError::NonzeroPadding)));
        assert!(matches!(parse_graph6(""), Err(ParseError::Empty)));
        assert!(parse_graph6(">>graph6<<D?{\n").is_ok());
    }
}
