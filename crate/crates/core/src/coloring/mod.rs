//! Red/blue edge colorings of `K_n` and their monochromatic substructures.
//!
//! Edges are ordered lexicographically: `{i, j}` with `i < j` has index
//! `i*n - i*(i+1)/2 + (j - i - 1)`. The on-disk bit strings and every
//! certificate depend on this order ([`EDGE_ORDER`]).

mod partial;
mod substructures;

pub use partial::{PartialColoring, MAX_PARTIAL_VERTICES};
pub use substructures::{enumerate_bowties, enumerate_copies, mono_triangles, Bowtie, Copy};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{bit, low_bits, MAX_VERTICES};

/// Self-description of the edge order, embedded in certificates.
pub const EDGE_ORDER: &str =
    "lex: edge {i,j}, i<j, has index i*n - i*(i+1)/2 + (j-i-1); bit '1' = red, '0' = blue";

/// Largest `n` for exhaustive enumeration (`n(n-1)/2 <= 28`).
pub const MAX_EXHAUSTIVE_VERTICES: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Color {
    Red,
    Blue,
}

impl Color {
    pub const BOTH: [Color; 2] = [Color::Red, Color::Blue];

    pub fn other(self) -> Color {
        match self {
            Color::Red => Color::Blue,
            Color::Blue => Color::Red,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Color::Red => "red",
            Color::Blue => "blue",
        }
    }
}

pub const fn edge_count(n: usize) -> usize {
    n * n.saturating_sub(1) / 2
}

/// Index of `{i, j}` in the lexicographic edge order of `K_n`.
pub fn edge_index(n: usize, i: usize, j: usize) -> usize {
    let (i, j) = if i < j { (i, j) } else { (j, i) };
    debug_assert!(i != j && j < n);
    i * n - i * (i + 1) / 2 + (j - i - 1)
}

/// Inverse of [`edge_index`].
pub fn edge_endpoints(n: usize, index: usize) -> (usize, usize) {
    debug_assert!(index < edge_count(n));
    let mut i = 0;
    let mut start = 0;
    loop {
        let row = n - i - 1;
        if index < start + row {
            return (i, i + 1 + index - start);
        }
        start += row;
        i += 1;
    }
}

/// A 2-coloring of the edges of `K_n`, `n <= 64`; blue is the complement of red.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct EdgeColoring {
    n: usize,
    red: Vec<u64>,
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::Domain("a coloring needs at least one vertex".into()));
    }
    if n > MAX_VERTICES {
        return Err(Error::Capacity(format!(
            "K_{n} requested, at most {MAX_VERTICES} vertices supported"
        )));
    }
    Ok(())
}

impl EdgeColoring {
    pub fn monochromatic(n: usize, color: Color) -> Result<Self> {
        check_n(n)?;
        let red = match color {
            Color::Red => (0..n).map(|v| low_bits(n) & !bit(v)).collect(),
            Color::Blue => vec![0; n],
        };
        Ok(EdgeColoring { n, red })
    }

    pub fn from_fn(n: usize, mut color: impl FnMut(usize, usize) -> Color) -> Result<Self> {
        let mut c = Self::monochromatic(n, Color::Blue)?;
        for i in 0..n {
            for j in i + 1..n {
                if color(i, j) == Color::Red {
                    c.red[i] |= bit(j);
                    c.red[j] |= bit(i);
                }
            }
        }
        Ok(c)
    }

    pub fn from_red_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut c = Self::monochromatic(n, Color::Blue)?;
        for &(i, j) in edges {
            if i == j || i >= n || j >= n {
                return Err(Error::Domain(format!("{i}-{j} is not an edge of K_{n}")));
            }
            c.set(i, j, Color::Red);
        }
        Ok(c)
    }

    /// Bit `k` of `code` is the color of edge `k` (1 = red). Needs `n(n-1)/2 <= 64`.
    pub fn from_code(n: usize, code: u64) -> Result<Self> {
        if edge_count(n) > 64 {
            return Err(Error::Capacity(format!("K_{n} has more than 64 edges")));
        }
        let mut k = 0;
        Self::from_fn(n, |_, _| {
            let c = if code >> k & 1 == 1 { Color::Red } else { Color::Blue };
            k += 1;
            c
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn color(&self, i: usize, j: usize) -> Color {
        debug_assert!(i != j);
        if self.red[i] & bit(j) != 0 {
            Color::Red
        } else {
            Color::Blue
        }
    }

    pub fn set(&mut self, i: usize, j: usize, color: Color) {
        debug_assert!(i != j && i < self.n && j < self.n);
        match color {
            Color::Red => {
                self.red[i] |= bit(j);
                self.red[j] |= bit(i);
            }
            Color::Blue => {
                self.red[i] &= !bit(j);
                self.red[j] &= !bit(i);
            }
        }
    }

    /// Neighbors of `v` along edges of `color`.
    #[inline]
    pub fn neighbors(&self, v: usize, color: Color) -> u64 {
        match color {
            Color::Red => self.red[v],
            Color::Blue => low_bits(self.n) & !self.red[v] & !bit(v),
        }
    }

    /// The same coloring with red and blue exchanged.
    pub fn swapped(&self) -> Self {
        EdgeColoring {
            n: self.n,
            red: (0..self.n).map(|v| self.neighbors(v, Color::Blue)).collect(),
        }
    }

    pub fn to_bit_string(&self) -> String {
        let mut s = String::with_capacity(edge_count(self.n));
        for i in 0..self.n {
            for j in i + 1..self.n {
                s.push(if self.color(i, j) == Color::Red { '1' } else { '0' });
            }
        }
        s
    }

    pub fn from_bit_string(n: usize, bits: &str) -> Result<Self> {
        check_n(n)?;
        let bytes = bits.as_bytes();
        if bytes.len() != edge_count(n) {
            return Err(Error::parse(
                bytes.len().min(edge_count(n)),
                format!("expected {} edge bits for K_{n}, found {}", edge_count(n), bytes.len()),
            ));
        }
        if let Some(k) = bytes.iter().position(|&b| b != b'0' && b != b'1') {
            return Err(Error::parse(k, "edge bits must be '0' or '1'"));
        }
        let mut k = 0;
        Self::from_fn(n, |_, _| {
            let c = if bytes[k] == b'1' { Color::Red } else { Color::Blue };
            k += 1;
            c
        })
    }

    /// Coloring file: `n=<int>` on the first line, the bit string on the second.
    pub fn to_file_string(&self) -> String {
        format!("n={}\n{}\n", self.n, self.to_bit_string())
    }

    /// Parses the coloring file format. Byte offsets count from the start of `text`.
    pub fn parse_file(text: &str) -> Result<Self> {
        let mut lines = text.split_inclusive('\n');
        let first = lines.next().unwrap_or("");
        let header = first.trim_end();
        let n = header
            .strip_prefix("n=")
            .ok_or_else(|| Error::parse(0, "first line must be n=<int>"))?
            .trim()
            .parse::<usize>()
            .map_err(|_| Error::parse(2, "vertex count is not an integer"))?;
        let second = lines.next().unwrap_or("");
        let bits = second.trim_end();
        Self::from_bit_string(n, bits).map_err(|e| match e {
            Error::Parse { offset, message } => Error::Parse {
                offset: offset + first.len(),
                message,
            },
            other => other,
        })
    }
}

/// Uniform random coloring, reproducible from `seed` (ChaCha8, one fair bit per
/// edge in edge order).
pub fn random_coloring(n: usize, seed: u64) -> Result<EdgeColoring> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    EdgeColoring::from_fn(n, |_, _| if rng.gen_bool(0.5) { Color::Red } else { Color::Blue })
}

/// Vertices split into five contiguous classes; red inside a class and between
/// cyclically consecutive classes, blue otherwise. For `n = 5` the red graph is `C_5`.
pub fn pentagon_blowup(n: usize) -> Result<EdgeColoring> {
    let class = |v: usize| v * 5 / n;
    EdgeColoring::from_fn(n, |i, j| {
        let d = (class(i) + 5 - class(j)) % 5;
        if d == 0 || d == 1 || d == 4 {
            Color::Red
        } else {
            Color::Blue
        }
    })
}

/// Builds a coloring from a generator descriptor: `random:<n>:<seed>`,
/// `allred:<n>`, `allblue:<n>`, `pentagon-blowup:<n>`.
pub fn generate(spec: &str) -> Result<EdgeColoring> {
    let parts: Vec<&str> = spec.trim().split(':').collect();
    let num = |k: usize| -> Result<u64> {
        let field = parts.get(k).ok_or_else(|| Error::parse(spec.len(), "missing field"))?;
        let at = parts[..k].iter().map(|p| p.len() + 1).sum();
        field.parse().map_err(|_| Error::parse(at, format!("'{field}' is not an integer")))
    };
    let arity = |want: usize| -> Result<()> {
        if parts.len() != want {
            return Err(Error::parse(0, format!("generator '{}' takes {} fields", parts[0], want - 1)));
        }
        Ok(())
    };
    match parts[0] {
        "random" => {
            arity(3)?;
            random_coloring(num(1)? as usize, num(2)?)
        }
        "allred" => {
            arity(2)?;
            EdgeColoring::monochromatic(num(1)? as usize, Color::Red)
        }
        "allblue" => {
            arity(2)?;
            EdgeColoring::monochromatic(num(1)? as usize, Color::Blue)
        }
        "pentagon-blowup" => {
            arity(2)?;
            pentagon_blowup(num(1)? as usize)
        }
        other => Err(Error::parse(0, format!("unknown coloring generator '{other}'"))),
    }
}

/// Number of colorings visited by [`enumerate_colorings`].
pub fn exhaustive_space(n: usize) -> Result<u64> {
    if n > MAX_EXHAUSTIVE_VERTICES {
        return Err(Error::Capacity(format!(
            "exhaustive enumeration of K_{n} ({} edges) exceeds the 28-edge budget",
            edge_count(n)
        )));
    }
    Ok(1u64 << edge_count(n))
}

/// Visits all `2^(n(n-1)/2)` colorings of `K_n` in code order; returns the count.
pub fn enumerate_colorings(n: usize, mut visit: impl FnMut(&EdgeColoring)) -> Result<u64> {
    let total = exhaustive_space(n)?;
    check_n(n)?;
    for code in 0..total {
        visit(&EdgeColoring::from_code(n, code)?);
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn edge_index_round_trip() {
        for n in [2usize, 3, 7, 11, 64] {
            let mut k = 0;
            for i in 0..n {
                for j in i + 1..n {
                    assert_eq!(edge_index(n, i, j), k);
                    assert_eq!(edge_index(n, j, i), k);
                    assert_eq!(edge_endpoints(n, k), (i, j));
                    k += 1;
                }
            }
            assert_eq!(k, edge_count(n));
        }
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_colorings(3, |_| {}).unwrap(), 8);
        let mut seen = std::collections::HashSet::new();
        assert_eq!(enumerate_colorings(5, |c| assert!(seen.insert(c.to_bit_string()))).unwrap(), 1024);
        assert_eq!(seen.len(), 1024);
        assert_eq!(exhaustive_space(7).unwrap(), 2_097_152);
        assert!(matches!(enumerate_colorings(9, |_| {}), Err(Error::Capacity(_))));
    }

    #[test]
    fn file_format() {
        let c = pentagon_blowup(5).unwrap();
        let text = c.to_file_string();
        assert_eq!(text, "n=5\n1001100101\n");
        assert_eq!(EdgeColoring::parse_file(&text).unwrap(), c);
        assert!(EdgeColoring::parse_file("m=5\n1\n").is_err());
        match EdgeColoring::parse_file("n=3\n1x1\n") {
            Err(Error::Parse { offset, .. }) => assert_eq!(offset, 5),
            other => panic!("{other:?}"),
        }
        assert!(EdgeColoring::parse_file("n=3\n11\n").is_err());
    }

    #[test]
    fn random_is_reproducible() {
        let a = random_coloring(12, 42).unwrap();
        assert_eq!(a, random_coloring(12, 42).unwrap());
        assert_ne!(a, random_coloring(12, 43).unwrap());
        assert_eq!(generate("random:12:42").unwrap(), a);
    }

    #[test]
    fn generators() {
        let red = generate("allred:6").unwrap();
        assert!((0..6).all(|v| red.neighbors(v, Color::Red).count_ones() == 5));
        assert_eq!(red.swapped(), generate("allblue:6").unwrap());
        let pb = generate("pentagon-blowup:10").unwrap();
        assert_eq!(pb.color(0, 1), Color::Red);
        assert_eq!(pb.color(0, 2), Color::Red);
        assert_eq!(pb.color(0, 4), Color::Blue);
        assert_eq!(pb.color(0, 9), Color::Red);
        assert!(generate("random:5").is_err());
        assert!(generate("plaid:5").is_err());
        assert!(generate("allred:x").is_err());
        assert!(matches!(generate("allred:65"), Err(Error::Capacity(_))));
    }
}
