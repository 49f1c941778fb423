//! Text encodings: the `n m` edge-list format and graph6.

use thiserror::Error;

use crate::graph::{Graph, GraphError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FormatError {
    #[error("line {line}: {message}")]
    EdgeList { line: usize, message: String },
    #[error("graph6: {0}")]
    Graph6(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

fn edge_list_error(line: usize, message: impl Into<String>) -> FormatError {
    FormatError::EdgeList { line, message: message.into() }
}

/// Parses the edge-list format: a header line `n m`, then `m` lines `u v`
/// with 0-based endpoints. Blank lines and lines starting with `#` are
/// skipped.
pub fn parse_edge_list(text: &str) -> Result<Graph, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (header_line, header) = lines.next().ok_or_else(|| edge_list_error(1, "missing `n m` header"))?;
    let (n, m) = parse_pair(header_line, header)?;

    let mut edges = Vec::with_capacity(m);
    for (line, body) in lines {
        if edges.len() == m {
            return Err(edge_list_error(line, format!("more than the declared {m} edges")));
        }
        let (u, v) = parse_pair(line, body)?;
        if u >= n || v >= n {
            return Err(edge_list_error(line, format!("endpoint out of range for n = {n}")));
        }
        if u == v {
            return Err(edge_list_error(line, format!("self-loop at vertex {u}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(edge_list_error(header_line, format!("declared {m} edges, found {}", edges.len())));
    }
    Ok(Graph::new(n, edges)?)
}

fn parse_pair(line: usize, body: &str) -> Result<(usize, usize), FormatError> {
    let mut fields = body.split_whitespace();
    let mut next = || -> Result<usize, FormatError> {
        let field = fields.next().ok_or_else(|| edge_list_error(line, "expected two integers"))?;
        field
            .parse::<usize>()
            .map_err(|e| edge_list_error(line, format!("bad integer {field:?}: {e}")))
    };
    let pair = (next()?, next()?);
    if fields.next().is_some() {
        return Err(edge_list_error(line, "expected exactly two integers"));
    }
    Ok(pair)
}

/// Writes the edge-list format with edges sorted `(u, v)`, `u < v`.
///
/// This output is the canonical serialization hashed into certificates.
pub fn write_edge_list(g: &Graph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.edge_count());
    for (u, v) in g.edges() {
        out.push_str(&format!("{u} {v}\n"));
    }
    out
}

const GRAPH6_HEADER: &str = ">>graph6<<";
const GRAPH6_MAX_N: usize = 68_719_476_735;

/// Parses a single graph6 record. A leading `>>graph6<<` header is accepted;
/// any other `>>...<<` header, or a sparse6/digraph6 record, is rejected.
pub fn parse_graph6(text: &str) -> Result<Graph, FormatError> {
    let record = text.trim_end_matches(['\n', '\r']);
    let record = match record.strip_prefix(GRAPH6_HEADER) {
        Some(rest) => rest,
        None if record.starts_with(">>") => {
            return Err(FormatError::Graph6("unsupported header".into()));
        }
        None => record,
    };
    let bytes = record.as_bytes();
    match bytes.first() {
        None => return Err(FormatError::Graph6("empty record".into())),
        Some(b':') => return Err(FormatError::Graph6("sparse6 is not supported".into())),
        Some(b'&') => return Err(FormatError::Graph6("digraph6 is not supported".into())),
        _ => {}
    }
    if let Some(&b) = bytes.iter().find(|&&b| !(63..=126).contains(&b)) {
        return Err(FormatError::Graph6(format!("byte {b:#04x} outside the printable range")));
    }

    let (n, body) = decode_size(bytes)?;
    let pairs = n * n.saturating_sub(1) / 2;
    let expected = pairs.div_ceil(6);
    if body.len() != expected {
        return Err(FormatError::Graph6(format!(
            "expected {expected} data bytes for n = {n}, found {}",
            body.len()
        )));
    }

    let mut edges = Vec::new();
    let mut k = 0usize;
    for v in 1..n {
        for u in 0..v {
            let byte = body[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                edges.push((u, v));
            }
            k += 1;
        }
    }
    if pairs % 6 != 0 {
        let last = body[body.len() - 1] - 63;
        let pad = 6 - pairs % 6;
        if last & ((1 << pad) - 1) != 0 {
            return Err(FormatError::Graph6("nonzero padding bits".into()));
        }
    }
    Ok(Graph::new(n, edges)?)
}

fn decode_size(bytes: &[u8]) -> Result<(usize, &[u8]), FormatError> {
    let short = || FormatError::Graph6("truncated size field".into());
    let big = |digits: &[u8]| digits.iter().fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
    if bytes[0] != 126 {
        return Ok(((bytes[0] - 63) as usize, &bytes[1..]));
    }
    if bytes.get(1) == Some(&126) {
        let digits = bytes.get(2..8).ok_or_else(short)?;
        let n = big(digits);
        if n <= 258_047 {
            return Err(FormatError::Graph6("non-minimal size encoding".into()));
        }
        Ok((n, &bytes[8..]))
    } else {
        let digits = bytes.get(1..4).ok_or_else(short)?;
        let n = big(digits);
        if n <= 62 {
            return Err(FormatError::Graph6("non-minimal size encoding".into()));
        }
        Ok((n, &bytes[4..]))
    }
}

/// Encodes `g` as a graph6 record without header or trailing newline.
pub fn write_graph6(g: &Graph) -> String {
    let n = g.n();
    assert!(n <= GRAPH6_MAX_N, "graph too large for graph6");
    let mut out: Vec<u8> = Vec::new();
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        out.extend((0..3).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    } else {
        out.extend([126, 126]);
        out.extend((0..6).rev().map(|i| ((n >> (6 * i)) & 63) as u8 + 63));
    }
    let mut acc = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            acc = (acc << 1) | g.has_edge(u, v) as u8;
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
    String::from_utf8(out).expect("graph6 output is ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn petersen() -> Graph {
        let outer = (0..5).map(|i| (i, (i + 1) % 5));
        let spokes = (0..5).map(|i| (i, i + 5));
        let inner = (0..5).map(|i| (5 + i, 5 + (i + 2) % 5));
        Graph::new(10, outer.chain(spokes).chain(inner)).unwrap()
    }

    #[test]
    fn known_graph6_strings() {
        // Reference encodings from the graph6 format description and nauty.
        assert_eq!(write_graph6(&Graph::complete(4)), "C~");
        assert_eq!(write_graph6(&Graph::edgeless(0)), "?");
        assert_eq!(write_graph6(&Graph::new(5, [(0, 2), (0, 4), (1, 3), (3, 4)]).unwrap()), "DQc");
        assert_eq!(write_graph6(&petersen()), "IheA@GUAo");
    }

    #[test]
    fn graph6_parses_reference_strings() {
        assert_eq!(parse_graph6("C~").unwrap(), Graph::complete(4));
        assert_eq!(parse_graph6(">>graph6<<C~\n").unwrap(), Graph::complete(4));
        assert_eq!(parse_graph6("IheA@GUAo").unwrap(), petersen());
    }

    #[test]
    fn graph6_large_size_field() {
        let g = Graph::new(100, [(0, 99), (42, 43)]).unwrap();
        let text = write_graph6(&g);
        assert!(text.starts_with("~?@c"));
        assert_eq!(parse_graph6(&text).unwrap(), g);
    }

    #[test]
    fn graph6_rejects_malformed() {
        assert!(parse_graph6(">>sparse6<<:Fa@x^").is_err());
        assert!(parse_graph6(":Fa@x^").is_err());
        assert!(parse_graph6("&C~").is_err());
        assert!(parse_graph6("C").is_err());
        // K4 needs a single data byte; "C~~" has two
        assert!(parse_graph6("C~~").is_err());
        // For n = 3 only 3 bits are used; low bits must be zero
        assert!(parse_graph6("Bw").is_ok());
        assert!(parse_graph6("Bx").is_err());
        assert!(parse_graph6("").is_err());
        assert!(parse_graph6("C\u{7f}").is_err());
    }

    #[test]
    fn edge_list_round_trip() {
        let text = "# a triangle and a pendant\n4 4\n0 1\n1 2\n\n2 0\n# tail\n2 3\n";
        let g = parse_edge_list(text).unwrap();
        assert_eq!(write_edge_list(&g), "4 4\n0 1\n0 2\n1 2\n2 3\n");
        assert_eq!(parse_edge_list(&write_edge_list(&g)).unwrap(), g);
    }

    #[test]
    fn edge_list_errors() {
        assert!(parse_edge_list("").is_err());
        assert!(parse_edge_list("3 2\n0 1\n").is_err());
        assert!(parse_edge_list("3 1\n0 1\n1 2\n").is_err());
        assert!(parse_edge_list("3 1\n0 3\n").is_err());
        assert!(parse_edge_list("3 1\n1 1\n").is_err());
        assert!(parse_edge_list("3 1\n0 x\n").is_err());
        assert!(parse_edge_list("3 1 7\n0 1\n").is_err());
    }
}
