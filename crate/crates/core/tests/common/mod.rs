//! Brute-force reference implementations shared by the integration tests.
//! Nothing here calls into the search or packing code under test.

#![allow(dead_code)]

use std::collections::HashMap;

use rfl_core::coloring::{Color, EdgeColoring};
use rfl_core::graph::FiniteGraph;

pub fn mask(vs: &[usize]) -> u64 {
    vs.iter().fold(0, |m, &v| m | 1 << v)
}

/// Vertex masks of the monochromatic triangles of `color`, by a triple loop.
pub fn triangles(c: &EdgeColoring, color: Color) -> Vec<u64> {
    let n = c.n();
    let mut out = Vec::new();
    for a in 0..n {
        for b in a + 1..n {
            for d in b + 1..n {
                if c.color(a, b) == color && c.color(a, d) == color && c.color(b, d) == color {
                    out.push(mask(&[a, b, d]));
                }
            }
        }
    }
    out
}

/// Vertex masks of the 5-sets spanning a bowtie, deduplicated.
pub fn bowtie_sets(c: &EdgeColoring) -> Vec<u64> {
    let red = triangles(c, Color::Red);
    let blue = triangles(c, Color::Blue);
    let mut out: Vec<u64> = red
        .iter()
        .flat_map(|&r| blue.iter().filter(move |&&b| (r & b).count_ones() == 1).map(move |&b| r | b))
        .collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Maximum of `sum weight(c)` over pairwise disjoint candidates, by dynamic
/// programming over vertex subsets of `0..n`.
pub fn max_disjoint(n: usize, candidates: &[u64], weight: impl Fn(u64) -> u64) -> u64 {
    fn go(s: u64, cands: &[(u64, u64)], memo: &mut HashMap<u64, u64>) -> u64 {
        if s == 0 {
            return 0;
        }
        if let Some(&v) = memo.get(&s) {
            return v;
        }
        let low = s & s.wrapping_neg();
        let mut best = go(s & !low, cands, memo);
        for &(c, w) in cands {
            if c & low != 0 && c & !s == 0 {
                best = best.max(w + go(s & !c, cands, memo));
            }
        }
        memo.insert(s, best);
        best
    }
    let cands: Vec<(u64, u64)> = candidates.iter().map(|&c| (c, weight(c))).collect();
    let full = if n == 64 { u64::MAX } else { (1u64 << n) - 1 };
    go(full, &cands, &mut HashMap::new())
}

pub fn max_packing_size(n: usize, candidates: &[u64]) -> u64 {
    max_disjoint(n, candidates, |_| 1)
}

pub fn neighbors(g: &FiniteGraph, v: usize) -> u64 {
    (0..g.n()).filter(|&u| g.has_edge(u, v)).fold(0, |m, u| m | 1 << u)
}

pub fn is_independent(g: &FiniteGraph, s: u64) -> bool {
    (0..g.n()).all(|v| s >> v & 1 == 0 || neighbors(g, v) & s == 0)
}

/// Independence number over all `2^n` subsets.
pub fn alpha(g: &FiniteGraph) -> usize {
    (0..1u64 << g.n()).filter(|&s| is_independent(g, s)).map(|s| s.count_ones() as usize).max().unwrap_or(0)
}

/// `min |N(I)|/|I|` over nonempty independent `I`, as a reduced fraction,
/// together with the smallest minimizing mask.
pub fn min_ratio(g: &FiniteGraph) -> ((u64, u64), u64) {
    let mut best: Option<((u64, u64), u64)> = None;
    for s in 1..1u64 << g.n() {
        if !is_independent(g, s) {
            continue;
        }
        let nb = (0..g.n()).filter(|&v| s >> v & 1 == 1).fold(0, |m, v| m | neighbors(g, v));
        let (p, q) = (nb.count_ones() as u64, s.count_ones() as u64);
        let better = match best {
            None => true,
            Some(((bp, bq), _)) => p * bq < bp * q,
        };
        if better {
            best = Some(((p, q), s));
        }
    }
    let ((p, q), s) = best.expect("nonempty graph");
    let d = gcd(p, q);
    ((p / d, q / d), s)
}

pub fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 { a } else { gcd(b, a % b) }
}

/// Reference graph6 decoder for `n <= 62`: returns the order and the edges
/// `(i, j)`, `i < j`, in the column order the format uses.
pub fn decode_graph6(s: &str) -> (usize, Vec<(usize, usize)>) {
    let bytes: Vec<u8> = s.bytes().map(|b| b - 63).collect();
    let n = bytes[0] as usize;
    let bits: Vec<bool> = bytes[1..].iter().flat_map(|&b| (0..6).rev().map(move |k| b >> k & 1 == 1)).collect();
    let mut edges = Vec::new();
    let mut k = 0;
    for j in 1..n {
        for i in 0..j {
            if bits[k] {
                edges.push((i, j));
            }
            k += 1;
        }
    }
    (n, edges)
}

pub mod bowcase {
    //! The two predicates of the two-bowtie configuration on complete colorings.

    use super::triangles;
    use rfl_core::coloring::{Color, EdgeColoring};

    const W1: u64 = 0b11111;

    pub fn predicate_a(c: &EdgeColoring, exactly_four: bool) -> bool {
        Color::BOTH.iter().any(|&color| {
            let t = triangles(c, color);
            t.iter().any(|&x| {
                t.iter().any(|&y| {
                    let inside = ((x | y) & W1).count_ones();
                    x & y == 0 && if exactly_four { inside == 4 } else { inside >= 4 }
                })
            })
        })
    }

    pub fn predicate_b(c: &EdgeColoring) -> bool {
        let pairs = |color| {
            let t = triangles(c, color);
            let mut out = Vec::new();
            for (i, &x) in t.iter().enumerate() {
                for &y in &t[i + 1..] {
                    if x & y == 0 {
                        out.push(x | y);
                    }
                }
            }
            out
        };
        let (red, blue) = (pairs(Color::Red), pairs(Color::Blue));
        red.iter().any(|&r| blue.iter().any(|&b| (r | b).count_ones() <= 9))
    }
}
