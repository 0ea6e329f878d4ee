//! graph6 and plain edge-list encodings.

use std::fmt::Write as _;
use std::str::FromStr;

use super::{Graph, HOST_CAP};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Graph6,
    EdgeList,
}

impl FromStr for GraphFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "graph6" | "g6" => Ok(GraphFormat::Graph6),
            "edge-list" | "edgelist" | "edges" => Ok(GraphFormat::EdgeList),
            other => Err(Error::validation(format!("unknown graph format {other:?}"))),
        }
    }
}

pub fn parse_graph(text: &str, format: GraphFormat) -> Result<Graph> {
    match format {
        GraphFormat::Graph6 => parse_graph6(text),
        GraphFormat::EdgeList => parse_edge_list(text),
    }
}

pub fn serialize_graph(g: &Graph, format: GraphFormat) -> String {
    match format {
        GraphFormat::Graph6 => to_graph6(g),
        GraphFormat::EdgeList => to_edge_list(g),
    }
}

const HEADER: &str = ">>graph6<<";

fn parse_graph6(text: &str) -> Result<Graph> {
    let mut start = 0;
    if text.starts_with(HEADER) {
        start = HEADER.len();
    }
    let bytes = text.trim_end_matches(['\n', '\r']).as_bytes();
    let data = |i: usize| -> Result<u8> {
        match bytes.get(i) {
            None => Err(Error::parse(i, "unexpected end of graph6 data")),
            Some(&b) if (63..=126).contains(&b) => Ok(b - 63),
            Some(&b) => Err(Error::parse(i, format!("byte 0x{b:02x} outside graph6 range"))),
        }
    };

    let (n, mut pos) = if bytes.get(start) == Some(&126) {
        if bytes.get(start + 1) == Some(&126) {
            let mut n = 0usize;
            for k in 0..6 {
                n = (n << 6) | data(start + 2 + k)? as usize;
            }
            (n, start + 8)
        } else {
            let mut n = 0usize;
            for k in 0..3 {
                n = (n << 6) | data(start + 1 + k)? as usize;
            }
            (n, start + 4)
        }
    } else {
        (data(start)? as usize, start + 1)
    };
    if n > HOST_CAP {
        return Err(Error::UnsupportedSize(format!("{n} vertices exceeds host cap {HOST_CAP}")));
    }

    let nbits = n * n.saturating_sub(1) / 2;
    let nbytes = nbits.div_ceil(6);
    if bytes.len() != pos + nbytes {
        let offset = bytes.len().min(pos + nbytes);
        return Err(Error::parse(
            offset,
            format!("expected {nbytes} data bytes for n={n}, found {}", bytes.len().saturating_sub(pos)),
        ));
    }

    let mut g = Graph::empty(n);
    let mut bit = 0usize;
    let mut chunk = 0u8;
    for v in 1..n {
        for u in 0..v {
            if bit.is_multiple_of(6) {
                chunk = data(pos)?;
                pos += 1;
            }
            if chunk & (1 << (5 - bit % 6)) != 0 {
                g.add_edge(u, v);
            }
            bit += 1;
        }
    }
    if nbits % 6 != 0 && chunk & ((1u8 << (6 - nbits % 6)) - 1) != 0 {
        return Err(Error::parse(pos - 1, "nonzero padding bits"));
    }
    Ok(g)
}

fn to_graph6(g: &Graph) -> String {
    let n = g.n();
    let mut out = Vec::with_capacity(8 + n * n / 12);
    if n <= 62 {
        out.push(n as u8 + 63);
    } else if n <= 258_047 {
        out.push(126);
        for shift in [12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    } else {
        out.extend([126, 126]);
        for shift in [30, 24, 18, 12, 6, 0] {
            out.push(((n >> shift) & 63) as u8 + 63);
        }
    }
    let mut chunk = 0u8;
    let mut filled = 0;
    for v in 1..n {
        for u in 0..v {
            chunk = (chunk << 1) | g.has_edge(u, v) as u8;
            filled += 1;
            if filled == 6 {
                out.push(chunk + 63);
                chunk = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push((chunk << (6 - filled)) + 63);
    }
    String::from_utf8(out).expect("graph6 output is ASCII")
}

fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut declared: Option<usize> = None;
    let mut edges = Vec::new();
    let mut offset = 0;
    for (lineno, line) in text.split('\n').enumerate() {
        let line_offset = offset;
        offset += line.len() + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() {
            continue;
        }
        if lineno == 0 || (declared.is_none() && edges.is_empty()) {
            if let Some(rest) = trimmed.strip_prefix("n=") {
                let n = rest
                    .trim()
                    .parse::<usize>()
                    .map_err(|_| Error::parse(line_offset, format!("bad vertex count {rest:?}")))?;
                declared = Some(n);
                continue;
            }
        }
        let mut parts = trimmed.split_whitespace();
        let mut endpoint = || -> Result<usize> {
            let tok = parts.next().ok_or_else(|| Error::parse(line_offset, "expected two vertex indices"))?;
            tok.parse::<usize>()
                .map_err(|_| Error::parse(line_offset, format!("bad vertex index {tok:?}")))
        };
        let u = endpoint()?;
        let v = endpoint()?;
        if parts.next().is_some() {
            return Err(Error::parse(line_offset, "trailing tokens after edge"));
        }
        edges.push((u, v));
    }
    let inferred = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    let n = match declared {
        Some(n) if n < inferred => {
            return Err(Error::validation(format!("edge endpoint {} exceeds declared n={n}", inferred - 1)))
        }
        Some(n) => n,
        None => inferred,
    };
    Graph::from_edges(n, &edges)
}

fn to_edge_list(g: &Graph) -> String {
    let mut out = format!("n={}", g.n());
    for (u, v) in g.edges() {
        let _ = write!(out, "\n{u} {v}");
    }
    out
}
