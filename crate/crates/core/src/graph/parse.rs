//! Graph descriptors: the `"<n>; i-j, ..."` edge list and graph6.

use super::{bit, FiniteGraph, MAX_VERTICES};
use crate::error::{Error, Result};

const GRAPH6_HEADER: &str = ">>graph6<<";

/// Parses an edge list (`"5; 0-1,1-2"`) or a graph6 string.
///
/// A descriptor containing `;` is read as an edge list, anything else as graph6.
pub fn parse_graph(text: &str) -> Result<FiniteGraph> {
    if text.contains(';') {
        parse_edge_list(text)
    } else {
        parse_graph6(text)
    }
}

/// Shorthand names: `K<n>`, `C<n>`, `P<n>` (path on n vertices), `E<n>` (edgeless)
/// and `K<a>,<b>`. Returns `None` when `name` is not of that shape.
pub fn named_graph(name: &str) -> Option<Result<FiniteGraph>> {
    let name = name.trim();
    let (head, rest) = name.split_at(name.char_indices().nth(1)?.0);
    if head == "K" {
        if let Some((a, b)) = rest.split_once(',') {
            let (a, b) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
            return Some(FiniteGraph::complete_bipartite(a, b));
        }
    }
    let n: usize = rest.parse().ok()?;
    match head {
        "K" => Some(FiniteGraph::complete(n)),
        "C" => Some(FiniteGraph::cycle(n)),
        "P" => Some(FiniteGraph::path(n)),
        "E" => Some(FiniteGraph::empty(n)),
        _ => None,
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn expect(&mut self, want: u8) -> Result<()> {
        match self.peek() {
            Some(b) if b == want => {
                self.pos += 1;
                Ok(())
            }
            Some(b) => Err(Error::parse(
                self.pos,
                format!("expected '{}', found '{}'", want as char, b as char),
            )),
            None => Err(Error::parse(self.pos, format!("expected '{}', found end", want as char))),
        }
    }

    fn number(&mut self) -> Result<(usize, usize)> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected a vertex number"));
        }
        let digits = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap_or_default();
        digits
            .parse()
            .map(|v| (v, start))
            .map_err(|_| Error::parse(start, "number too large"))
    }
}

fn parse_edge_list(text: &str) -> Result<FiniteGraph> {
    let mut cur = Cursor {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let (n, n_at) = cur.number()?;
    if n > MAX_VERTICES {
        return Err(Error::Capacity(format!(
            "{n} vertices requested, at most {MAX_VERTICES} supported"
        )));
    }
    if n == 0 {
        return Err(Error::parse(n_at, "vertex count must be at least 1"));
    }
    cur.expect(b';')?;
    let mut adj = vec![0u64; n];
    if cur.peek().is_some() {
        loop {
            let (u, u_at) = cur.number()?;
            cur.expect(b'-')?;
            let (v, v_at) = cur.number()?;
            for (x, at) in [(u, u_at), (v, v_at)] {
                if x >= n {
                    return Err(Error::parse(at, format!("vertex {x} out of range 0..{n}")));
                }
            }
            if u == v {
                return Err(Error::parse(v_at, format!("self-loop at {u}")));
            }
            adj[u] |= bit(v);
            adj[v] |= bit(u);
            match cur.peek() {
                None => break,
                Some(b',') => cur.pos += 1,
                Some(b) => {
                    return Err(Error::parse(
                        cur.pos,
                        format!("expected ',' or end, found '{}'", b as char),
                    ))
                }
            }
        }
    }
    FiniteGraph::from_adjacency(adj)
}

fn parse_graph6(text: &str) -> Result<FiniteGraph> {
    let trimmed_start = text.len() - text.trim_start().len();
    let mut body = text.trim();
    let mut offset = trimmed_start;
    if let Some(rest) = body.strip_prefix(GRAPH6_HEADER) {
        body = rest;
        offset += GRAPH6_HEADER.len();
    }
    let bytes = body.as_bytes();
    if bytes.is_empty() {
        return Err(Error::parse(offset, "empty graph descriptor"));
    }
    for (k, &b) in bytes.iter().enumerate() {
        if !(63..=126).contains(&b) {
            return Err(Error::parse(offset + k, format!("byte {b:#04x} outside graph6 range")));
        }
    }
    let (n, header_len) = if bytes[0] == 126 {
        if bytes.len() >= 2 && bytes[1] == 126 {
            return Err(Error::Capacity("graph6 36-bit vertex counts are not supported".into()));
        }
        if bytes.len() < 4 {
            return Err(Error::parse(offset + bytes.len(), "truncated graph6 vertex count"));
        }
        let n = bytes[1..4]
            .iter()
            .fold(0usize, |acc, &b| (acc << 6) | (b - 63) as usize);
        (n, 4)
    } else {
        ((bytes[0] - 63) as usize, 1)
    };
    if n > MAX_VERTICES {
        return Err(Error::Capacity(format!(
            "graph6 describes {n} vertices, at most {MAX_VERTICES} supported"
        )));
    }
    if n == 0 {
        return Err(Error::parse(offset, "graph6 vertex count must be at least 1"));
    }
    let pairs = n * (n - 1) / 2;
    let need = pairs.div_ceil(6);
    let data = &bytes[header_len..];
    if data.len() != need {
        return Err(Error::parse(
            offset + header_len + data.len().min(need),
            format!("graph6 body has {} bytes, expected {need}", data.len()),
        ));
    }
    let mut adj = vec![0u64; n];
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            let byte = data[k / 6] - 63;
            if byte >> (5 - k % 6) & 1 == 1 {
                adj[i] |= bit(j);
                adj[j] |= bit(i);
            }
            k += 1;
        }
    }
    FiniteGraph::from_adjacency(adj)
}

/// Encodes `g` as graph6 (no header).
pub fn to_graph6(g: &FiniteGraph) -> String {
    let n = g.n();
    let mut out = if n <= 62 {
        vec![(n as u8) + 63]
    } else {
        vec![126, ((n >> 12) & 63) as u8 + 63, ((n >> 6) & 63) as u8 + 63, (n & 63) as u8 + 63]
    };
    let mut acc = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            acc = (acc << 1) | g.has_edge(i, j) as u8;
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
    String::from_utf8(out).expect("graph6 bytes are ASCII")
}
