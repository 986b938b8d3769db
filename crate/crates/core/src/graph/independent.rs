//! Exhaustive independent-set enumeration and the invariants built on it.

use std::ops::ControlFlow;

use serde::{Deserialize, Serialize};

use super::{bit, FiniteGraph, RatioValue, VertexSet};
use crate::error::{Error, Result};

/// Vertices in descending-degree order (ties by index) with the adjacency
/// relabelled onto positions in that order.
struct Relabelled {
    order: Vec<usize>,
    adj: Vec<u64>,
}

impl Relabelled {
    fn new(g: &FiniteGraph) -> Self {
        let mut order: Vec<usize> = (0..g.n()).collect();
        order.sort_by_key(|&v| (std::cmp::Reverse(g.degree(v)), v));
        let mut pos = vec![0; g.n()];
        for (p, &v) in order.iter().enumerate() {
            pos[v] = p;
        }
        let adj = order
            .iter()
            .map(|&v| g.neighbors(v).iter().fold(0u64, |acc, u| acc | bit(pos[u])))
            .collect();
        Relabelled { order, adj }
    }

    fn to_vertices(&self, positions: u64) -> VertexSet {
        VertexSet::from_vertices(VertexSet::from_bits(positions).iter().map(|p| self.order[p]))
    }
}

/// Calls `visit` once for every nonempty independent set of `g`.
///
/// Backtracking over vertices in descending-degree order; the candidate mask
/// drops the neighbors of each chosen vertex. Stops early on `Break`.
pub fn for_each_independent_set<F>(g: &FiniteGraph, mut visit: F) -> ControlFlow<()>
where
    F: FnMut(VertexSet) -> ControlFlow<()>,
{
    let rl = Relabelled::new(g);
    fn rec<F: FnMut(VertexSet) -> ControlFlow<()>>(
        rl: &Relabelled,
        current: u64,
        mut candidates: u64,
        visit: &mut F,
    ) -> ControlFlow<()> {
        while candidates != 0 {
            let p = candidates.trailing_zeros() as usize;
            candidates &= candidates - 1;
            let next = current | bit(p);
            visit(rl.to_vertices(next))?;
            rec(rl, next, candidates & !rl.adj[p], visit)?;
        }
        ControlFlow::Continue(())
    }
    rec(&rl, 0, super::low_bits(g.n()), &mut visit)
}

/// Independence number, by a branch-and-bound maximum search that is
/// separate from [`for_each_independent_set`].
pub fn alpha(g: &FiniteGraph) -> usize {
    fn rec(adj: &[u64], size: usize, candidates: u64, best: &mut usize) {
        if candidates == 0 {
            *best = (*best).max(size);
            return;
        }
        if size + candidates.count_ones() as usize <= *best {
            return;
        }
        let v = candidates.trailing_zeros() as usize;
        let rest = candidates & !bit(v);
        rec(adj, size + 1, rest & !adj[v], best);
        // excluding v only helps when v has a candidate neighbor
        if adj[v] & rest != 0 {
            rec(adj, size, rest, best);
        }
    }
    let mut best = 0;
    rec(g.adjacency(), 0, g.vertices().bits(), &mut best);
    best
}

/// The minimum of `|N(I)|/|I|` over nonempty independent `I`, with the
/// minimizer whose bit mask is numerically smallest.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RatioWitness {
    pub ratio: RatioValue,
    pub witness: VertexSet,
}

fn ratio_of(g: &FiniteGraph, set: VertexSet) -> RatioValue {
    RatioValue::new(g.neighborhood(set).len() as u64, set.len() as u64)
        .expect("independent sets here are nonempty")
}

pub fn min_independent_ratio(g: &FiniteGraph) -> RatioWitness {
    // Isolated vertices give ratio 0; the smallest mask is the lowest one alone.
    if let Some(v) = (0..g.n()).find(|&v| g.degree(v) == 0) {
        return RatioWitness {
            ratio: RatioValue::integer(0),
            witness: VertexSet::from_vertices([v]),
        };
    }
    let mut best: Option<RatioWitness> = None;
    let _ = for_each_independent_set(g, |set| {
        let ratio = ratio_of(g, set);
        let better = match best {
            None => true,
            Some(b) => ratio < b.ratio || (ratio == b.ratio && set.bits() < b.witness.bits()),
        };
        if better {
            best = Some(RatioWitness { ratio, witness: set });
        }
        ControlFlow::Continue(())
    });
    best.expect("a graph with a vertex has a nonempty independent set")
}

/// Whether some independent set attaining the minimum ratio has size `alpha(g)`.
pub fn corollary_condition(g: &FiniteGraph) -> bool {
    let a = alpha(g);
    let mut min: Option<RatioValue> = None;
    let mut attained = false;
    let _ = for_each_independent_set(g, |set| {
        let ratio = ratio_of(g, set);
        match min {
            Some(m) if ratio > m => {}
            Some(m) if ratio == m => attained |= set.len() == a,
            _ => {
                min = Some(ratio);
                attained = set.len() == a;
            }
        }
        ControlFlow::Continue(())
    });
    attained
}

/// Whether `N(set)` spans no edge. `set` must itself be independent.
pub fn neighborhood_independent(g: &FiniteGraph, set: VertexSet) -> Result<bool> {
    if set.bits() & !g.vertices().bits() != 0 {
        return Err(Error::Contract(format!("{set} has vertices outside the graph")));
    }
    if !g.is_independent(set) {
        return Err(Error::Contract(format!("{set} is not independent")));
    }
    Ok(g.is_independent(g.neighborhood(set)))
}
