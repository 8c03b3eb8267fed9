//! graph6 interchange format (McKay's encoding), one graph per line.
//!
//! The encoding stores the vertex count followed by the upper triangle of the
//! adjacency matrix in column order, packed into 6-bit groups offset by 63 so
//! every byte is printable ASCII. Writing is canonical: parse ∘ write is the
//! identity on graphs and write ∘ parse is the identity on valid strings.

use crate::graph::Graph;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum Graph6Error {
    #[error("unexpected end of input at byte {0}")]
    UnexpectedEnd(usize),
    #[error("byte {offset} out of graph6 range 63..=126 (value {value})")]
    OutOfRange { offset: usize, value: u8 },
    #[error("malformed size header at byte {0}")]
    BadSizeHeader(usize),
    #[error("trailing bytes after adjacency data at byte {0}")]
    TrailingGarbage(usize),
    #[error("nonzero padding bits in final group at byte {0}")]
    NonzeroPadding(usize),
}

const BIAS: u8 = 63;
const EXTENDED: u8 = 126;

fn sextet(bytes: &[u8], offset: usize) -> Result<u64, Graph6Error> {
    let &value = bytes.get(offset).ok_or(Graph6Error::UnexpectedEnd(offset))?;
    if !(BIAS..=126).contains(&value) {
        return Err(Graph6Error::OutOfRange { offset, value });
    }
    Ok(u64::from(value - BIAS))
}

/// Decodes a single graph6 line (no `>>graph6<<` header).
pub fn parse_graph6(line: &str) -> Result<Graph, Graph6Error> {
    let bytes = line.as_bytes();
    if bytes.is_empty() {
        return Err(Graph6Error::UnexpectedEnd(0));
    }

    // Size header: 1 byte for n <= 62, 4 bytes for n <= 258047, 8 beyond.
    let (n, mut offset) = if bytes[0] == EXTENDED {
        if bytes.get(1) == Some(&EXTENDED) {
            let mut n: u64 = 0;
            for i in 2..8 {
                n = (n << 6) | sextet(bytes, i)?;
            }
            (n, 8)
        } else {
            let mut n: u64 = 0;
            for i in 1..4 {
                n = (n << 6) | sextet(bytes, i)?;
            }
            if n < 63 {
                return Err(Graph6Error::BadSizeHeader(0));
            }
            (n, 4)
        }
    } else {
        (sextet(bytes, 0)?, 1)
    };
    let n = usize::try_from(n).map_err(|_| Graph6Error::BadSizeHeader(0))?;

    let bit_count = n * n.saturating_sub(1) / 2;
    let mut edges = Vec::new();
    let mut bit_index = 0usize;
    let mut group = 0u64;
    let mut group_bits = 0usize;
    // Column-major upper triangle: (0,1), (0,2), (1,2), (0,3), ...
    for j in 1..n {
        for i in 0..j {
            if group_bits == 0 {
                group = sextet(bytes, offset)?;
                offset += 1;
                group_bits = 6;
            }
            group_bits -= 1;
            if (group >> group_bits) & 1 == 1 {
                edges.push((i, j));
            }
            bit_index += 1;
        }
    }
    debug_assert_eq!(bit_index, bit_count);
    if group_bits > 0 && group & ((1 << group_bits) - 1) != 0 {
        return Err(Graph6Error::NonzeroPadding(offset - 1));
    }
    if offset != bytes.len() {
        return Err(Graph6Error::TrailingGarbage(offset));
    }
    Ok(Graph::new(n, edges).expect("decoded indices are in range"))
}

/// Canonical graph6 encoding of `g`.
pub fn write_graph6(g: &Graph) -> String {
    let n = g.vertex_count();
    let mut out = Vec::new();
    if n <= 62 {
        out.push(n as u8 + BIAS);
    } else if n <= 258_047 {
        out.push(EXTENDED);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + BIAS);
        }
    } else {
        out.push(EXTENDED);
        out.push(EXTENDED);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 0x3f) as u8 + BIAS);
        }
    }

    let mut group = 0u8;
    let mut group_bits = 0usize;
    for j in 1..n {
        for i in 0..j {
            group <<= 1;
            if g.has_edge(i, j) {
                group |= 1;
            }
            group_bits += 1;
            if group_bits == 6 {
                out.push(group + BIAS);
                group = 0;
                group_bits = 0;
            }
        }
    }
    if group_bits > 0 {
        out.push((group << (6 - group_bits)) + BIAS);
    }
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}

#[derive(Debug, Error, PartialEq, Eq)]
#[error("line {line}: {source}")]
pub struct Graph6FileError {
    pub line: usize,
    #[source]
    pub source: Graph6Error,
}

/// Parses a graph6 file: one graph per line, blank lines skipped, an optional
/// `>>graph6<<` header tolerated. Line numbers in errors are 1-based.
pub fn parse_graph6_file(content: &str) -> Result<Vec<Graph>, Graph6FileError> {
    let mut graphs = Vec::new();
    for (idx, raw) in content.lines().enumerate() {
        let mut line = raw.trim_end_matches('\r');
        if idx == 0 {
            line = line.strip_prefix(">>graph6<<").unwrap_or(line);
        }
        if line.is_empty() {
            continue;
        }
        let g = parse_graph6(line).map_err(|source| Graph6FileError {
            line: idx + 1,
            source,
        })?;
        graphs.push(g);
    }
    Ok(graphs)
}

/// One graph per line, trailing newline.
pub fn write_graph6_file(graphs: &[Graph]) -> String {
    let mut out = String::new();
    for g in graphs {
        out.push_str(&write_graph6(g));
        out.push('\n');
    }
    out
}
