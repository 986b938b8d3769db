//! `(C, eps, s)`-adequate sets and the clique-grouping partition built from them.
//!
//! A set `X` is adequate when every subset of size at least `eps|X|` holds a
//! `C`-colored `K_s`. The partition groups a greedy maximal family of
//! disjoint monochromatic `K_alpha`, `alpha = ceil(2/eps) s`, into
//! `T = ceil(3/eps)` nearly equal parts.

use serde::{Deserialize, Serialize};

use crate::coloring::{Color, EdgeColoring};
use crate::error::{Error, Result};
use crate::graph::{bit, low_bits, VertexSet};

/// Largest `|X|` for the exact adequacy check.
pub const MAX_ADEQUACY_SET: usize = 22;
/// Largest clique size searched by the partition construction.
pub const MAX_PARTITION_ALPHA: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AdequacyVerdict {
    Adequate,
    Inadequate,
    /// The part exceeds the exact-check budget.
    Skipped,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdequacyWitness {
    pub part: Option<usize>,
    pub color: Color,
    pub s: usize,
    pub epsilon: f64,
    pub size: usize,
    pub verdict: AdequacyVerdict,
    /// A largest subset of `X` without a `C`-colored `K_s`.
    pub clique_free: Option<VertexSet>,
    /// Vertices covered by a greedy maximal family of disjoint `C`-colored
    /// `K_s`, recorded for adequate sets.
    pub greedy_cover: Option<usize>,
}

fn color_mask(c: &EdgeColoring, v: usize, color: Color) -> u64 {
    c.neighbors(v, color)
}

/// Lexicographically first `C`-colored clique of `size` inside `within`.
pub fn find_clique(c: &EdgeColoring, color: Color, within: u64, size: usize) -> Option<VertexSet> {
    fn rec(c: &EdgeColoring, color: Color, chosen: u64, cand: u64, need: usize) -> Option<u64> {
        if need == 0 {
            return Some(chosen);
        }
        if (cand.count_ones() as usize) < need {
            return None;
        }
        let mut rest = cand;
        while rest != 0 {
            let v = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            if let Some(found) = rec(c, color, chosen | bit(v), rest & color_mask(c, v, color), need - 1) {
                return Some(found);
            }
            if (rest.count_ones() as usize) < need {
                break;
            }
        }
        None
    }
    rec(c, color, 0, within, size).map(VertexSet::from_bits)
}

/// One largest `K_s`-free subset of `x` in `color`.
fn max_clique_free(c: &EdgeColoring, x: VertexSet, color: Color, s: usize) -> VertexSet {
    let verts = x.to_vec();
    let mut best = 0u64;
    fn rec(
        c: &EdgeColoring,
        color: Color,
        s: usize,
        verts: &[usize],
        idx: usize,
        chosen: u64,
        best: &mut u64,
    ) {
        if chosen.count_ones() > best.count_ones() {
            *best = chosen;
        }
        if idx == verts.len() || chosen.count_ones() as usize + verts.len() - idx <= best.count_ones() as usize {
            return;
        }
        let v = verts[idx];
        let closes = s == 1 || find_clique(c, color, chosen & color_mask(c, v, color), s - 1).is_some();
        if !closes {
            rec(c, color, s, verts, idx + 1, chosen | bit(v), best);
        }
        rec(c, color, s, verts, idx + 1, chosen, best);
    }
    rec(c, color, s, &verts, 0, 0, &mut best);
    VertexSet::from_bits(best)
}

fn check_params(epsilon: f64, s: usize) -> Result<()> {
    if !(epsilon > 0.0 && epsilon <= 1.0) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1], got {epsilon}")));
    }
    if s < 2 {
        return Err(Error::Domain(format!("clique size s must be at least 2, got {s}")));
    }
    Ok(())
}

/// Exact adequacy of `x` for `(color, epsilon, s)`.
pub fn adequacy_check(c: &EdgeColoring, x: VertexSet, color: Color, epsilon: f64, s: usize) -> Result<AdequacyWitness> {
    check_params(epsilon, s)?;
    if x.len() > MAX_ADEQUACY_SET {
        return Err(Error::Capacity(format!(
            "exact adequacy check needs |X| <= {MAX_ADEQUACY_SET}, got {}",
            x.len()
        )));
    }
    if x.bits() & !low_bits(c.n()) != 0 {
        return Err(Error::Contract(format!("{x} has vertices outside K_{}", c.n())));
    }
    let free = max_clique_free(c, x, color, s);
    let adequate = (free.len() as f64) < epsilon * x.len() as f64;
    let greedy_cover = if adequate {
        let mut remaining = x.bits();
        let mut covered = 0;
        while let Some(k) = find_clique(c, color, remaining, s) {
            remaining &= !k.bits();
            covered += s;
        }
        if (covered as f64) < (1.0 - epsilon) * x.len() as f64 {
            return Err(Error::Verification(format!(
                "{x} is adequate but greedy {color:?} K_{s} family covers only {covered}"
            )));
        }
        Some(covered)
    } else {
        None
    };
    Ok(AdequacyWitness {
        part: None,
        color,
        s,
        epsilon,
        size: x.len(),
        verdict: if adequate { AdequacyVerdict::Adequate } else { AdequacyVerdict::Inadequate },
        clique_free: Some(free),
        greedy_cover,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Part {
    pub index: usize,
    pub vertices: VertexSet,
    pub color: Color,
    pub pseudo_adequate: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PartitionCertificate {
    pub n: usize,
    pub epsilon: f64,
    pub s: usize,
    pub alpha: usize,
    pub parts_count: usize,
    pub beta: usize,
    pub cliques: Vec<(Color, VertexSet)>,
    pub parts: Vec<Part>,
    pub witnesses: Vec<AdequacyWitness>,
    /// Whether `n` exceeds the size the construction's guarantee needs:
    /// `"does not apply"` when provably too small, `"unknown"` otherwise
    /// (the diagonal Ramsey number involved is not computed).
    pub size_condition: String,
    /// Parts proven inadequate, and how many the guarantee tolerates (`eps T`).
    pub inadequate: usize,
    pub tolerated: f64,
}

fn ceil_div_eps(k: f64, epsilon: f64) -> usize {
    (k / epsilon - 1e-9).ceil() as usize
}

/// Runs the construction on `c`; parts of at most [`MAX_ADEQUACY_SET`]
/// vertices get an exact adequacy check. Leftover vertices fill parts in
/// ascending index order, the first `n mod T` parts taking one extra.
pub fn adequate_partition(c: &EdgeColoring, epsilon: f64, s: usize) -> Result<PartitionCertificate> {
    check_params(epsilon, s)?;
    let n = c.n();
    let alpha = ceil_div_eps(2.0, epsilon) * s;
    let t = ceil_div_eps(3.0, epsilon);
    if alpha > MAX_PARTITION_ALPHA {
        return Err(Error::Capacity(format!(
            "clique size alpha = {alpha} exceeds the desk-scale limit {MAX_PARTITION_ALPHA}"
        )));
    }
    if t > n {
        return Err(Error::Capacity(format!("{t} parts need at least {t} vertices, K_{n} given")));
    }

    let mut remaining = VertexSet::from_vertices(0..n).bits();
    let mut cliques = Vec::new();
    loop {
        let found = Color::BOTH
            .iter()
            .find_map(|&col| find_clique(c, col, remaining, alpha).map(|k| (col, k)));
        match found {
            Some((col, k)) => {
                remaining &= !k.bits();
                cliques.push((col, k));
            }
            None => break,
        }
    }

    let beta = (n / t) / alpha;
    let by_color = |col: Color| cliques.iter().filter(move |(cc, _)| *cc == col).map(|(_, k)| *k);
    let mut groups: Vec<(Color, u64)> = Vec::new();
    if beta > 0 {
        for col in Color::BOTH {
            let members: Vec<VertexSet> = by_color(col).collect();
            for chunk in members.chunks_exact(beta) {
                if groups.len() < t {
                    groups.push((col, chunk.iter().fold(0, |a, k| a | k.bits())));
                }
            }
        }
    }

    let mut parts: Vec<Part> = (0..t)
        .map(|i| Part {
            index: i,
            vertices: VertexSet::EMPTY,
            color: Color::Red,
            pseudo_adequate: false,
        })
        .collect();
    let mut used = 0u64;
    for (part, &(col, mask)) in parts.iter_mut().zip(&groups) {
        part.vertices = VertexSet::from_bits(mask);
        part.color = col;
        part.pseudo_adequate = true;
        used |= mask;
    }
    let target = |i: usize| n / t + usize::from(i < n % t);
    let mut leftovers = (0..n).filter(|&v| used & bit(v) == 0);
    for part in parts.iter_mut() {
        while part.vertices.len() < target(part.index) {
            let v = leftovers.next().expect("part targets sum to n");
            part.vertices = part.vertices.union(VertexSet::from_vertices([v]));
        }
    }

    let mut witnesses = Vec::new();
    for part in &parts {
        let w = if part.vertices.len() <= MAX_ADEQUACY_SET {
            adequacy_check(c, part.vertices, part.color, epsilon, s)?
        } else {
            AdequacyWitness {
                part: None,
                color: part.color,
                s,
                epsilon,
                size: part.vertices.len(),
                verdict: AdequacyVerdict::Skipped,
                clique_free: None,
                greedy_cover: None,
            }
        };
        witnesses.push(AdequacyWitness { part: Some(part.index), ..w });
    }

    // the guarantee needs n > q alpha T and n > ceil(2 alpha / eps) T; q > 2^(alpha/2)
    let ramsey_floor = 2f64.powf(alpha as f64 / 2.0);
    let provably_small = (n as f64) <= ramsey_floor * (alpha * t) as f64
        || n <= ceil_div_eps(2.0 * alpha as f64, epsilon) * t;
    let inadequate = witnesses.iter().filter(|w| w.verdict == AdequacyVerdict::Inadequate).count();
    Ok(PartitionCertificate {
        n,
        epsilon,
        s,
        alpha,
        parts_count: t,
        beta,
        cliques,
        parts,
        witnesses,
        size_condition: if provably_small { "does not apply".into() } else { "unknown".into() },
        inadequate,
        tolerated: epsilon * t as f64,
    })
}
