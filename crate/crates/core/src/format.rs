//! The `UMAP v1` text format, one map per document:
//!
//! ```text
//! UMAP v1
//! edges: <e>
//! pair: <h0> <h1>        one line per edge, edge id = line order
//! vertex: <h h h ...>    counterclockwise rotation, one line per vertex
//! twists: <edge ids>     possibly empty
//! root: <half-edge> <side bit>
//! ```
//!
//! Text after `#` is a comment. Blank lines are ignored.

use std::fmt::Write as _;

use thiserror::Error;

use crate::map::{HalfEdge, RibbonMap, Root, Violation};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

/// Serializes a map. The output is canonical: parsing and writing again
/// reproduces it byte for byte.
pub fn write_map(map: &RibbonMap) -> String {
    let mut out = String::from("UMAP v1\n");
    let _ = writeln!(out, "edges: {}", map.edge_count());
    for &[a, b] in map.edges() {
        let _ = writeln!(out, "pair: {a} {b}");
    }
    for rot in map.rotations() {
        out.push_str("vertex:");
        for h in rot {
            let _ = write!(out, " {h}");
        }
        out.push('\n');
    }
    out.push_str("twists:");
    for t in map.twists() {
        let _ = write!(out, " {t}");
    }
    out.push('\n');
    let root = map.root();
    let _ = writeln!(out, "root: {} {}", root.half_edge, root.side);
    out
}

/// Parses exactly one document.
pub fn parse_map(text: &str) -> Result<RibbonMap, ParseError> {
    let docs = parse_documents(text)?;
    match docs.len() {
        1 => Ok(docs.into_iter().next().unwrap()),
        0 => Err(ParseError::new(1, "no UMAP document found")),
        _ => Err(ParseError::new(1, "expected a single UMAP document")),
    }
}

/// Parses a stream of concatenated documents.
pub fn parse_documents(text: &str) -> Result<Vec<RibbonMap>, ParseError> {
    let lines: Vec<(usize, &str)> = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty())
        .collect();
    let mut maps = Vec::new();
    let mut i = 0;
    while i < lines.len() {
        let (map, next) = parse_one(&lines, i)?;
        maps.push(map);
        i = next;
    }
    Ok(maps)
}

fn field<'a>(line: (usize, &'a str), key: &str) -> Result<&'a str, ParseError> {
    let (no, text) = line;
    text.strip_prefix(key)
        .and_then(|rest| rest.strip_prefix(':'))
        .map(str::trim)
        .ok_or_else(|| ParseError::new(no, format!("expected `{key}:`")))
}

fn numbers(no: usize, text: &str) -> Result<Vec<usize>, ParseError> {
    text.split_whitespace()
        .map(|t| {
            t.parse::<usize>()
                .map_err(|_| ParseError::new(no, format!("`{t}` is not a non-negative integer")))
        })
        .collect()
}

fn parse_one(lines: &[(usize, &str)], start: usize) -> Result<(RibbonMap, usize), ParseError> {
    let (no, header) = lines[start];
    if header != "UMAP v1" {
        return Err(ParseError::new(no, "expected header `UMAP v1`"));
    }
    let mut i = start + 1;
    let take = |i: &mut usize, what: &str| -> Result<(usize, &str), ParseError> {
        let last = lines.last().map_or(no, |l| l.0);
        let line = *lines
            .get(*i)
            .ok_or_else(|| ParseError::new(last, format!("unexpected end of document, expected `{what}:`")))?;
        *i += 1;
        Ok(line)
    };

    let line = take(&mut i, "edges")?;
    let edges_no = line.0;
    let e: usize = field(line, "edges")?
        .parse()
        .map_err(|_| ParseError::new(edges_no, "edge count is not an integer"))?;
    if e == 0 {
        return Err(ParseError::new(edges_no, Violation::NoEdges.to_string()));
    }

    let mut edges: Vec<[HalfEdge; 2]> = Vec::with_capacity(e);
    let mut pair_lines = Vec::with_capacity(e);
    let mut paired = vec![false; 2 * e];
    for _ in 0..e {
        let line = take(&mut i, "pair")?;
        let nums = numbers(line.0, field(line, "pair")?)?;
        let [a, b] = nums[..] else {
            return Err(ParseError::new(line.0, "a pair needs exactly two half-edges"));
        };
        for h in [a, b] {
            if h >= 2 * e {
                return Err(ParseError::new(line.0, Violation::HalfEdgeOutOfRange(h).to_string()));
            }
            if paired[h] || a == b {
                return Err(ParseError::new(
                    line.0,
                    Violation::PairingNotInvolution(h).to_string(),
                ));
            }
            paired[h] = true;
        }
        edges.push([a, b]);
        pair_lines.push(line.0);
    }

    let mut rotation = Vec::new();
    let mut placed = vec![false; 2 * e];
    let mut last_vertex_line = pair_lines[e - 1];
    while let Some(&line) = lines.get(i) {
        if !line.1.starts_with("vertex") {
            break;
        }
        i += 1;
        let nums = numbers(line.0, field(line, "vertex")?)?;
        if nums.is_empty() {
            return Err(ParseError::new(
                line.0,
                Violation::EmptyRotation(rotation.len()).to_string(),
            ));
        }
        for &h in &nums {
            if h >= 2 * e {
                return Err(ParseError::new(line.0, Violation::HalfEdgeOutOfRange(h).to_string()));
            }
            if placed[h] {
                return Err(ParseError::new(line.0, Violation::RotationRepeats(h).to_string()));
            }
            placed[h] = true;
        }
        rotation.push(nums);
        last_vertex_line = line.0;
    }
    if let Some(h) = placed.iter().position(|p| !p) {
        return Err(ParseError::new(
            last_vertex_line,
            Violation::RotationMissing(h).to_string(),
        ));
    }

    let line = take(&mut i, "twists")?;
    let twists = numbers(line.0, field(line, "twists")?)?;
    let mut seen = vec![false; e];
    for &t in &twists {
        if t >= e {
            return Err(ParseError::new(line.0, Violation::TwistOutOfRange(t).to_string()));
        }
        if seen[t] {
            return Err(ParseError::new(line.0, Violation::TwistRepeated(t).to_string()));
        }
        seen[t] = true;
    }

    let line = take(&mut i, "root")?;
    let root_no = line.0;
    let nums = numbers(root_no, field(line, "root")?)?;
    let [h, side] = nums[..] else {
        return Err(ParseError::new(root_no, "root needs a half-edge and a side bit"));
    };
    if h >= 2 * e {
        return Err(ParseError::new(root_no, Violation::RootOutOfRange(h).to_string()));
    }
    if side > 1 {
        return Err(ParseError::new(root_no, Violation::RootSide(side as u8).to_string()));
    }

    // everything local is checked; what remains (connectivity) is global
    let map = RibbonMap::new(edges, rotation, twists, Root::new(h, side as u8))
        .map_err(|v| ParseError::new(root_no, v.to_string()))?;
    Ok((map, i))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::map::fixtures::*;

    #[test]
    fn writes_the_documented_layout() {
        let text = write_map(&projective_precubic());
        assert_eq!(
            text,
            "UMAP v1\nedges: 2\npair: 0 1\npair: 2 3\nvertex: 0\nvertex: 1 2 3\ntwists: 1\nroot: 0 0\n"
        );
        let plane = write_map(&path2());
        assert!(plane.contains("\ntwists:\n"));
    }

    #[test]
    fn round_trips_and_accepts_comments() {
        for m in [twisted_loop(), torus(), path2(), projective_precubic()] {
            let text = write_map(&m);
            assert_eq!(parse_map(&text).unwrap(), m);
        }
        let commented = "# a comment\nUMAP v1\nedges: 1 # one edge\npair: 0 1\nvertex: 0 1\n\ntwists: 0\nroot: 0 1\n";
        assert_eq!(parse_map(commented).unwrap().twists(), vec![0]);
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = parse_map("UMAP v1\nedges: 2\npair: 0 1\npair: 1 2\nvertex: 0 1 2 3\ntwists:\nroot: 0 0\n")
            .unwrap_err();
        assert_eq!(err.line, 4);
        assert!(err.message.contains("pairing not an involution"));

        let err = parse_map("UMAP v1\nedges: 2\npair: 0 1\npair: 2 3\nvertex: 0 1\nvertex: 2 3\ntwists:\nroot: 0 0\n")
            .unwrap_err();
        assert_eq!(err.line, 8);
        assert!(err.message.contains("graph not connected"));

        let err = parse_map("UMAP v2\n").unwrap_err();
        assert_eq!(err.line, 1);

        let err = parse_map("UMAP v1\nedges: 1\npair: 0 1\nvertex: 0 1\ntwists: 3\nroot: 0 0\n")
            .unwrap_err();
        assert_eq!(err.line, 5);
    }

    #[test]
    fn multiple_documents() {
        let text = format!("{}\n{}", write_map(&torus()), write_map(&twisted_loop()));
        let maps = parse_documents(&text).unwrap();
        assert_eq!(maps, vec![torus(), twisted_loop()]);
    }
}
