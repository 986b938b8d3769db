//! Small pattern graphs on at most 64 vertices.
//!
//! Adjacency is stored as one `u64` neighbor mask per vertex, so vertex sets
//! are single machine words and every invariant the bound formulas consume
//! (independence number, neighborhood ratios) runs on bit operations.

mod independent;
mod parse;

pub use independent::{
    alpha, corollary_condition, for_each_independent_set, min_independent_ratio,
    neighborhood_independent, RatioWitness,
};
pub use parse::{named_graph, parse_graph, to_graph6};

use std::cmp::Ordering;
use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Maximum number of vertices of a [`FiniteGraph`].
pub const MAX_VERTICES: usize = 64;

#[inline]
pub(crate) const fn bit(v: usize) -> u64 {
    1u64 << v
}

/// Mask with the lowest `n` bits set.
#[inline]
pub(crate) const fn low_bits(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A set of vertices of some ambient graph, one bit per vertex.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct VertexSet(u64);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub const fn from_bits(bits: u64) -> Self {
        VertexSet(bits)
    }

    pub fn from_vertices<I: IntoIterator<Item = usize>>(vertices: I) -> Self {
        VertexSet(vertices.into_iter().fold(0, |acc, v| acc | bit(v)))
    }

    pub const fn bits(self) -> u64 {
        self.0
    }

    pub const fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub const fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub const fn contains(self, v: usize) -> bool {
        v < 64 && self.0 >> v & 1 == 1
    }

    pub const fn union(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 | other.0)
    }

    pub const fn intersection(self, other: VertexSet) -> VertexSet {
        VertexSet(self.0 & other.0)
    }

    pub const fn is_disjoint(self, other: VertexSet) -> bool {
        self.0 & other.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let v = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(v)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }

    /// Lexicographic comparison of the sorted vertex lists.
    pub fn lex_cmp(self, other: VertexSet) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl fmt::Display for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, v) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let vs = Vec::<usize>::deserialize(d)?;
        if let Some(&bad) = vs.iter().find(|&&v| v >= MAX_VERTICES) {
            return Err(serde::de::Error::custom(format!("vertex {bad} out of range")));
        }
        Ok(VertexSet::from_vertices(vs))
    }
}

/// A nonnegative rational kept in lowest terms.
///
/// Ordering is exact cross-multiplication in `u128`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawRatio")]
pub struct RatioValue {
    num: u64,
    den: u64,
}

#[derive(Deserialize)]
struct RawRatio {
    num: u64,
    den: u64,
}

impl TryFrom<RawRatio> for RatioValue {
    type Error = String;

    fn try_from(raw: RawRatio) -> std::result::Result<Self, String> {
        RatioValue::new(raw.num, raw.den).ok_or_else(|| "zero denominator".to_string())
    }
}

fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

impl RatioValue {
    /// Returns `None` when `den == 0`.
    pub fn new(num: u64, den: u64) -> Option<Self> {
        if den == 0 {
            return None;
        }
        let g = gcd(num, den).max(1);
        Some(RatioValue {
            num: num / g,
            den: den / g,
        })
    }

    pub const fn integer(value: u64) -> Self {
        RatioValue { num: value, den: 1 }
    }

    pub const fn numer(self) -> u64 {
        self.num
    }

    pub const fn denom(self) -> u64 {
        self.den
    }

    pub fn to_f64(self) -> f64 {
        self.num as f64 / self.den as f64
    }
}

impl Ord for RatioValue {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num as u128 * other.den as u128).cmp(&(other.num as u128 * self.den as u128))
    }
}

impl PartialOrd for RatioValue {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for RatioValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den == 1 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", self.num, self.den)
        }
    }
}

/// A simple undirected graph on vertices `0..n`, `1 <= n <= 64`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FiniteGraph {
    n: usize,
    adj: Vec<u64>,
}

impl FiniteGraph {
    /// The edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("a graph needs at least one vertex".into()));
        }
        if n > MAX_VERTICES {
            return Err(Error::Capacity(format!(
                "{n} vertices requested, at most {MAX_VERTICES} supported"
            )));
        }
        Ok(FiniteGraph { n, adj: vec![0; n] })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Domain(format!("edge {u}-{v} leaves 0..{n}")));
            }
            if u == v {
                return Err(Error::Domain(format!("self-loop at {u}")));
            }
            g.adj[u] |= bit(v);
            g.adj[v] |= bit(u);
        }
        Ok(g)
    }

    /// Builds a graph from raw neighbor masks, checking symmetry and loops.
    pub fn from_adjacency(adj: Vec<u64>) -> Result<Self> {
        let n = adj.len();
        let mut g = Self::empty(n)?;
        let all = low_bits(n);
        for (v, &mask) in adj.iter().enumerate() {
            if mask & !all != 0 {
                return Err(Error::Domain(format!("vertex {v} has neighbors outside 0..{n}")));
            }
            if mask & bit(v) != 0 {
                return Err(Error::Domain(format!("self-loop at {v}")));
            }
            for u in VertexSet(mask).iter() {
                if adj[u] & bit(v) == 0 {
                    return Err(Error::Domain(format!("adjacency not symmetric at {v}-{u}")));
                }
            }
        }
        g.adj = adj;
        Ok(g)
    }

    pub fn complete(n: usize) -> Result<Self> {
        let mut g = Self::empty(n)?;
        let all = low_bits(n);
        for v in 0..n {
            g.adj[v] = all & !bit(v);
        }
        Ok(g)
    }

    pub fn cycle(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::Domain(format!("a cycle needs 3 vertices, got {n}")));
        }
        let edges: Vec<_> = (0..n).map(|i| (i, (i + 1) % n)).collect();
        Self::from_edges(n, &edges)
    }

    /// Path on `n` vertices `0-1-...-(n-1)`.
    pub fn path(n: usize) -> Result<Self> {
        let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
        Self::from_edges(n, &edges)
    }

    /// `K_{a,b}` with parts `0..a` and `a..a+b`.
    pub fn complete_bipartite(a: usize, b: usize) -> Result<Self> {
        let mut edges = Vec::with_capacity(a * b);
        for i in 0..a {
            for j in a..a + b {
                edges.push((i, j));
            }
        }
        Self::from_edges(a + b, &edges)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet(low_bits(self.n))
    }

    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    pub(crate) fn adjacency(&self) -> &[u64] {
        &self.adj
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        u < self.n && v < self.n && self.adj[u] & bit(v) != 0
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(|m| m.count_ones() as usize).sum::<usize>() / 2
    }

    /// Edges `(i, j)` with `i < j` in lexicographic order.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for i in 0..self.n {
            for j in VertexSet(self.adj[i] & !low_bits(i + 1)).iter() {
                out.push((i, j));
            }
        }
        out
    }

    pub fn is_complete(&self) -> bool {
        self.edge_count() == self.n * (self.n - 1) / 2
    }

    /// Union of the neighborhoods of the vertices in `set`.
    pub fn neighborhood(&self, set: VertexSet) -> VertexSet {
        VertexSet(set.iter().fold(0, |acc, v| acc | self.adj[v]))
    }

    pub fn is_independent(&self, set: VertexSet) -> bool {
        set.iter().all(|v| self.adj[v] & set.0 == 0)
    }

    /// Parts `(A, B)` of a proper 2-coloring, or `None` when `F` has an odd cycle.
    /// Each component is rooted at its smallest vertex, which goes to `A`.
    pub fn bipartition(&self) -> Option<(VertexSet, VertexSet)> {
        let mut side = vec![None::<bool>; self.n];
        for root in 0..self.n {
            if side[root].is_some() {
                continue;
            }
            side[root] = Some(false);
            let mut stack = vec![root];
            while let Some(v) = stack.pop() {
                let s = side[v].unwrap_or(false);
                for u in self.neighbors(v).iter() {
                    match side[u] {
                        None => {
                            side[u] = Some(!s);
                            stack.push(u);
                        }
                        Some(t) if t == s => return None,
                        Some(_) => {}
                    }
                }
            }
        }
        let a = VertexSet::from_vertices((0..self.n).filter(|&v| side[v] == Some(false)));
        let b = VertexSet::from_vertices((0..self.n).filter(|&v| side[v] == Some(true)));
        Some((a, b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_reduces_and_compares_exactly() {
        let r = RatioValue::new(6, 4).unwrap();
        assert_eq!((r.numer(), r.denom()), (3, 2));
        assert!(RatioValue::new(1, 3).unwrap() < RatioValue::new(334, 1000).unwrap());
        assert_eq!(RatioValue::new(2, 4), RatioValue::new(1, 2));
        assert!(RatioValue::new(1, 0).is_none());
        assert_eq!(RatioValue::new(0, 5).unwrap(), RatioValue::integer(0));
    }

    #[test]
    fn ratio_rejects_zero_denominator_on_deserialize() {
        assert!(serde_json::from_str::<RatioValue>(r#"{"num":1,"den":0}"#).is_err());
        let r: RatioValue = serde_json::from_str(r#"{"num":4,"den":6}"#).unwrap();
        assert_eq!(r, RatioValue::new(2, 3).unwrap());
    }

    #[test]
    fn constructors_validate() {
        assert!(matches!(FiniteGraph::empty(0), Err(Error::Domain(_))));
        assert!(matches!(FiniteGraph::empty(65), Err(Error::Capacity(_))));
        assert!(FiniteGraph::from_edges(3, &[(0, 0)]).is_err());
        assert!(FiniteGraph::from_edges(3, &[(0, 3)]).is_err());
        assert!(FiniteGraph::from_adjacency(vec![0b10, 0b00]).is_err());
        let k64 = FiniteGraph::complete(64).unwrap();
        assert_eq!(k64.edge_count(), 64 * 63 / 2);
    }

    #[test]
    fn bipartition_of_even_and_odd_cycles() {
        let c6 = FiniteGraph::cycle(6).unwrap();
        let (a, b) = c6.bipartition().unwrap();
        assert_eq!(a.to_vec(), vec![0, 2, 4]);
        assert_eq!(b.to_vec(), vec![1, 3, 5]);
        assert!(FiniteGraph::cycle(5).unwrap().bipartition().is_none());
    }

    #[test]
    fn vertex_set_lex_order() {
        let a = VertexSet::from_vertices([0, 3]);
        let b = VertexSet::from_vertices([1, 2]);
        assert_eq!(a.lex_cmp(b), Ordering::Less);
        assert!(a.bits() > b.bits());
        assert_eq!(a.to_string(), "{0,3}");
    }
}
