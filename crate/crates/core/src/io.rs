//! Text formats.
//!
//! Edge list: a header line `n m`, then `m` lines `u v` (0-indexed).
//! Adjacency matrix: `n` rows of `0`/`1`, either whitespace-separated or
//! contiguous. Colouring: an edge list whose lines carry a third column with
//! the colour id. Blank lines and lines starting with `#` are ignored.

use std::fmt::Write as _;

use crate::coloring::EdgeColoring;
use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GraphFormat {
    EdgeList,
    Matrix,
}

impl std::str::FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edgelist" | "edge-list" | "el" => Ok(GraphFormat::EdgeList),
            "matrix" | "adj" | "adjacency" => Ok(GraphFormat::Matrix),
            _ => Err(Error::param(format!("unknown graph format {s:?}"))),
        }
    }
}

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        msg: msg.into(),
    }
}

fn field<T: std::str::FromStr>(line: usize, tok: Option<&str>, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("bad {what} {tok:?}")))
}

/// Guesses the format from the first content line. An edge-list header has
/// exactly two tokens; the one ambiguous shape, a spaced 2x2 0/1 matrix, is
/// read as a matrix.
pub fn detect_format(text: &str) -> GraphFormat {
    let mut lines = content_lines(text);
    let Some((_, first)) = lines.next() else {
        return GraphFormat::EdgeList;
    };
    let toks: Vec<&str> = first.split_whitespace().collect();
    let binary = first
        .chars()
        .all(|c| c == '0' || c == '1' || c.is_whitespace());
    if toks.len() == 2 && !(binary && content_lines(text).count() == 2) {
        GraphFormat::EdgeList
    } else {
        GraphFormat::Matrix
    }
}

pub fn read_graph(text: &str, format: Option<GraphFormat>) -> Result<Graph> {
    match format.unwrap_or_else(|| detect_format(text)) {
        GraphFormat::EdgeList => read_edge_list(text),
        GraphFormat::Matrix => read_matrix(text),
    }
}

pub fn read_edge_list(text: &str) -> Result<Graph> {
    Ok(read_triples(text, false)?.0)
}

type Triples = Vec<(usize, usize, u8)>;

/// Parses the header and edge lines; the colour column is required iff
/// `colored`.
fn read_triples(text: &str, colored: bool) -> Result<(Graph, Triples)> {
    let mut lines = content_lines(text);
    let (hl, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing header `n m`"))?;
    let mut it = header.split_whitespace();
    let n: usize = field(hl, it.next(), "vertex count")?;
    let m: usize = field(hl, it.next(), "edge count")?;
    if it.next().is_some() {
        return Err(parse_err(hl, "header must be `n m`"));
    }
    if n > crate::graph::MAX_VERTICES {
        return Err(parse_err(hl, format!("vertex count {n} above cap")));
    }
    let mut g = Graph::empty(n);
    let mut triples = Vec::new();
    for (ln, l) in lines {
        let mut it = l.split_whitespace();
        let u: usize = field(ln, it.next(), "endpoint")?;
        let v: usize = field(ln, it.next(), "endpoint")?;
        let c: u8 = if colored {
            field(ln, it.next(), "colour")?
        } else {
            1
        };
        if it.next().is_some() {
            return Err(parse_err(ln, "trailing tokens"));
        }
        if u >= n || v >= n {
            return Err(parse_err(ln, format!("vertex out of range 0..{n}")));
        }
        if u == v {
            return Err(parse_err(ln, format!("self-loop at {u}")));
        }
        if c == 0 {
            return Err(parse_err(ln, "colour ids start at 1"));
        }
        if g.has_edge(u, v) {
            return Err(parse_err(ln, format!("duplicate edge {u} {v}")));
        }
        g.set_edge(u, v);
        triples.push((u.min(v), u.max(v), c));
    }
    if triples.len() != m {
        return Err(parse_err(
            hl,
            format!("header promises {m} edges, found {}", triples.len()),
        ));
    }
    Ok((g, triples))
}

pub fn read_matrix(text: &str) -> Result<Graph> {
    let rows: Vec<(usize, Vec<bool>)> = content_lines(text)
        .map(|(ln, l)| {
            let cells: Vec<char> = l.chars().filter(|c| !c.is_whitespace()).collect();
            cells
                .iter()
                .map(|&c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    _ => Err(parse_err(ln, format!("unexpected character {c:?}"))),
                })
                .collect::<Result<Vec<bool>>>()
                .map(|r| (ln, r))
        })
        .collect::<Result<_>>()?;
    let n = rows.len();
    let mut g = Graph::empty(n);
    for (u, (ln, row)) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(parse_err(
                *ln,
                format!("row has {} entries, expected {n}", row.len()),
            ));
        }
        if row[u] {
            return Err(parse_err(*ln, format!("self-loop at {u}")));
        }
        for (v, &b) in row.iter().enumerate() {
            if b != rows[v].1[u] {
                return Err(parse_err(*ln, format!("matrix not symmetric at ({u},{v})")));
            }
            if b && v > u {
                g.set_edge(u, v);
            }
        }
    }
    Ok(g)
}

pub fn write_edge_list(g: &Graph) -> String {
    let edges = g.edges();
    let mut s = format!("{} {}\n", g.n(), edges.len());
    for (u, v) in edges {
        writeln!(s, "{u} {v}").unwrap();
    }
    s
}

pub fn write_matrix(g: &Graph) -> String {
    let mut s = String::with_capacity(g.n() * (2 * g.n() + 1));
    for u in 0..g.n() {
        for v in 0..g.n() {
            if v > 0 {
                s.push(' ');
            }
            s.push(if g.has_edge(u, v) { '1' } else { '0' });
        }
        s.push('\n');
    }
    s
}

pub fn write_graph(g: &Graph, format: GraphFormat) -> String {
    match format {
        GraphFormat::EdgeList => write_edge_list(g),
        GraphFormat::Matrix => write_matrix(g),
    }
}

/// Reads a colouring; `r` is the largest colour id present.
pub fn read_coloring(text: &str) -> Result<EdgeColoring> {
    let (host, triples) = read_triples(text, true)?;
    let r = triples.iter().map(|t| t.2).max().unwrap_or(1);
    let lookup: std::collections::BTreeMap<(usize, usize), u8> =
        triples.into_iter().map(|(u, v, c)| ((u, v), c)).collect();
    EdgeColoring::of_host(&host, r, |u, v| lookup[&(u, v)])
}

pub fn write_coloring(c: &EdgeColoring) -> String {
    let t = c.triples();
    let mut s = format!("{} {}\n", c.n(), t.len());
    for (u, v, col) in t {
        writeln!(s, "{u} {v} {col}").unwrap();
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rat;
    use crate::rng::seeded;
    use proptest::prelude::*;

    #[test]
    fn parse_errors_carry_line_numbers() {
        match read_edge_list("3 1\n0 5\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        match read_edge_list("# comment\n3 2\n0 1\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        match read_matrix("010\n101\n011\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn contiguous_and_spaced_matrices_agree() {
        let a = read_matrix("0110\n1001\n1001\n0110\n").unwrap();
        let b = read_matrix("0 1 1 0\n1 0 0 1\n1 0 0 1\n0 1 1 0\n").unwrap();
        assert_eq!(a, b);
        assert_eq!(a.edge_count(), 4);
        assert_eq!(detect_format("0 1\n1 0\n"), GraphFormat::Matrix);
        assert_eq!(detect_format("2 1\n0 1\n"), GraphFormat::EdgeList);
    }

    #[test]
    fn coloring_round_trip() {
        let g = Graph::cycle(5);
        let c = EdgeColoring::of_host(&g, 3, |u, v| ((u + v) % 3 + 1) as u8).unwrap();
        let back = read_coloring(&write_coloring(&c)).unwrap();
        assert_eq!(back.triples(), c.triples());
    }

    proptest! {
        #[test]
        fn both_formats_round_trip(n in 0usize..70, seed in any::<u64>()) {
            let g = Graph::gnp(n, &rat(2, 5), &mut seeded(seed));
            prop_assert_eq!(read_edge_list(&write_edge_list(&g)).unwrap(), g.clone());
            prop_assert_eq!(read_matrix(&write_matrix(&g)).unwrap(), g.clone());
            prop_assert_eq!(read_graph(&write_matrix(&g), Some(GraphFormat::Matrix)).unwrap(), g);
        }
    }
}
