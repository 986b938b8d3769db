//! Exact maximum vertex-disjoint packings of triangles, bowties and arbitrary
//! candidate vertex sets.
//!
//! The solver branches on the lowest live vertex: either one of the
//! candidates whose smallest vertex it is joins the packing, or the vertex is
//! left uncovered. The bound gives each live vertex the best per-vertex share
//! `w/|copy|` of any candidate through it.

use serde::{Deserialize, Serialize};

use crate::coloring::{enumerate_bowties, mono_triangles, Color, EdgeColoring};
use crate::error::{Error, Result};
use crate::graph::{bit, VertexSet};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PackingBudget {
    /// Largest `n` for exact triangle packing.
    pub triangle_vertices: usize,
    /// Largest `n` for exact bowtie packing.
    pub bowtie_vertices: usize,
    /// Largest candidate list for the weighted solver.
    pub candidates: usize,
}

impl Default for PackingBudget {
    fn default() -> Self {
        PackingBudget {
            triangle_vertices: 30,
            bowtie_vertices: 25,
            candidates: 100_000,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PackingTag {
    Red,
    Blue,
    Bowtie,
}

impl From<Color> for PackingTag {
    fn from(c: Color) -> Self {
        match c {
            Color::Red => PackingTag::Red,
            Color::Blue => PackingTag::Blue,
        }
    }
}

/// Pairwise disjoint copies with a color tag. `optimal` is false for greedy results.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Packing {
    pub copies: Vec<VertexSet>,
    pub tag: PackingTag,
    pub total_weight: u64,
    pub optimal: bool,
}

impl Packing {
    pub fn size(&self) -> usize {
        self.copies.len()
    }

    pub fn covered(&self) -> VertexSet {
        self.copies.iter().fold(VertexSet::EMPTY, |acc, c| acc.union(*c))
    }

    /// Checks disjointness and that each copy is a triangle of the tagged color
    /// (or spans a bowtie, for the bowtie tag).
    pub fn validate(&self, c: &EdgeColoring) -> Result<()> {
        let mut seen = VertexSet::EMPTY;
        for copy in &self.copies {
            if !seen.is_disjoint(*copy) {
                return Err(Error::Verification(format!("{copy} overlaps an earlier copy")));
            }
            seen = seen.union(*copy);
            let ok = match self.tag {
                PackingTag::Red | PackingTag::Blue => {
                    let color = if self.tag == PackingTag::Red { Color::Red } else { Color::Blue };
                    let v = copy.to_vec();
                    v.len() == 3
                        && c.color(v[0], v[1]) == color
                        && c.color(v[0], v[2]) == color
                        && c.color(v[1], v[2]) == color
                }
                PackingTag::Bowtie => spans_bowtie(c, *copy),
            };
            if !ok {
                return Err(Error::Verification(format!("{copy} is not a {:?} copy", self.tag)));
            }
        }
        Ok(())
    }
}

fn spans_bowtie(c: &EdgeColoring, set: VertexSet) -> bool {
    let v = set.to_vec();
    if v.len() != 5 {
        return false;
    }
    v.iter().any(|&x| {
        let r = set.bits() & c.neighbors(x, Color::Red);
        let b = set.bits() & c.neighbors(x, Color::Blue);
        let pair_in = |mask: u64, color: Color| {
            let m = VertexSet::from_bits(mask).to_vec();
            m.len() == 2 && c.color(m[0], m[1]) == color
        };
        pair_in(r, Color::Red) && pair_in(b, Color::Blue)
    })
}

/// Per-candidate nonnegative integer weights.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeightVector(pub Vec<u64>);

impl WeightVector {
    pub fn uniform(len: usize) -> Self {
        WeightVector(vec![1; len])
    }

    /// Weight of a copy is the number of its vertices in `{0, ..., k-1}`.
    pub fn prefix(candidates: &[VertexSet], k: usize) -> Self {
        let prefix = VertexSet::from_vertices(0..k.min(64));
        WeightVector(candidates.iter().map(|c| c.intersection(prefix).len() as u64).collect())
    }
}

/// Indices into the candidate list, in candidate order, and their total weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Selection {
    pub chosen: Vec<usize>,
    pub total_weight: u64,
}

struct Solver {
    masks: Vec<u64>,
    weights: Vec<u64>,
    by_min: Vec<Vec<usize>>,
    share: [u128; 64],
    vertex_share: Option<[u128; 64]>,
    scale: u128,
    min_size: u32,
    max_weight: u64,
    best: u64,
    best_set: Vec<usize>,
    stack: Vec<usize>,
}

fn gcd(a: u128, b: u128) -> u128 {
    if b == 0 { a } else { gcd(b, a % b) }
}

impl Solver {
    fn bound(&self, live: u64) -> u64 {
        let sum = |share: &[u128; 64]| -> u128 { VertexSet::from_bits(live).iter().map(|u| share[u]).sum() };
        let mut total = sum(&self.share);
        if let Some(vs) = &self.vertex_share {
            total = total.min(sum(vs));
        }
        let by_share = u64::try_from(total / self.scale).unwrap_or(u64::MAX);
        let by_count = (live.count_ones() / self.min_size) as u64 * self.max_weight;
        by_share.min(by_count)
    }

    fn rec(&mut self, live: u64, current: u64) {
        if current > self.best {
            self.best = current;
            self.best_set.clone_from(&self.stack);
        }
        if live == 0 || current.saturating_add(self.bound(live)) <= self.best {
            return;
        }
        let v = live.trailing_zeros() as usize;
        for k in 0..self.by_min[v].len() {
            let p = self.by_min[v][k];
            if self.masks[p] & !live == 0 {
                self.stack.push(p);
                self.rec(live & !self.masks[p], current + self.weights[p]);
                self.stack.pop();
            }
        }
        self.rec(live & !bit(v), current);
    }
}

/// Maximum total-weight subfamily of pairwise disjoint candidates, exact.
///
/// The search starts from a greedy family and replaces it only by strictly
/// better ones found in lexicographic candidate order, so results are
/// reproducible.
pub fn max_weighted_packing(
    candidates: &[VertexSet],
    weights: &WeightVector,
    budget: &PackingBudget,
) -> Result<Selection> {
    solve(candidates, weights, None, budget)
}

/// [`max_weighted_packing`] where a copy weighs the sum of `vertex_weights`
/// over its vertices; the per-vertex weights then also bound the search.
pub fn max_vertex_weighted_packing(
    candidates: &[VertexSet],
    vertex_weights: &[u64],
    budget: &PackingBudget,
) -> Result<Selection> {
    let w = WeightVector(
        candidates
            .iter()
            .map(|c| c.iter().map(|u| vertex_weights.get(u).copied().unwrap_or(0)).sum())
            .collect(),
    );
    solve(candidates, &w, Some(vertex_weights), budget)
}

fn solve(
    candidates: &[VertexSet],
    weights: &WeightVector,
    vertex_weights: Option<&[u64]>,
    budget: &PackingBudget,
) -> Result<Selection> {
    if candidates.len() > budget.candidates {
        return Err(Error::Capacity(format!(
            "{} candidate copies exceed the budget of {}",
            candidates.len(),
            budget.candidates
        )));
    }
    if weights.0.len() != candidates.len() {
        return Err(Error::Contract(format!(
            "{} weights for {} candidates",
            weights.0.len(),
            candidates.len()
        )));
    }
    let mut order: Vec<usize> = (0..candidates.len())
        .filter(|&i| weights.0[i] > 0 && !candidates[i].is_empty())
        .collect();
    order.sort_by(|&a, &b| candidates[a].lex_cmp(candidates[b]).then(a.cmp(&b)));

    let mut scale: u128 = 1;
    for &i in &order {
        let s = candidates[i].len() as u128;
        scale = scale / gcd(scale, s) * s;
    }
    let mut share = [0u128; 64];
    let mut by_min = vec![Vec::new(); 64];
    for (p, &i) in order.iter().enumerate() {
        let c = candidates[i];
        let per = (weights.0[i] as u128)
            .checked_mul(scale / c.len() as u128)
            .ok_or_else(|| Error::Capacity("weights too large for the exact bound".into()))?;
        for u in c.iter() {
            share[u] = share[u].max(per);
        }
        by_min[c.bits().trailing_zeros() as usize].push(p);
    }

    let masks: Vec<u64> = order.iter().map(|&i| candidates[i].bits()).collect();
    let ws: Vec<u64> = order.iter().map(|&i| weights.0[i]).collect();

    // greedy incumbent: heaviest first, then candidate order
    let mut greedy: Vec<usize> = (0..order.len()).collect();
    greedy.sort_by_key(|&p| std::cmp::Reverse(ws[p]));
    let (mut used, mut g_set, mut g_val) = (0u64, Vec::new(), 0u64);
    for p in greedy {
        if masks[p] & used == 0 {
            used |= masks[p];
            g_set.push(p);
            g_val += ws[p];
        }
    }

    let vertex_share = match vertex_weights {
        None => None,
        Some(vw) => {
            let mut out = [0u128; 64];
            for (u, slot) in out.iter_mut().enumerate() {
                let w = vw.get(u).copied().unwrap_or(0) as u128;
                *slot = w
                    .checked_mul(scale)
                    .ok_or_else(|| Error::Capacity("weights too large for the exact bound".into()))?;
            }
            Some(out)
        }
    };
    let live = masks.iter().fold(0u64, |a, m| a | m);
    let weights_max = ws.iter().copied().max().unwrap_or(0);
    let mut solver = Solver {
        masks,
        weights: ws,
        by_min,
        share,
        vertex_share,
        scale,
        min_size: order.iter().map(|&i| candidates[i].len() as u32).min().unwrap_or(1),
        max_weight: weights_max,
        best: g_val,
        best_set: g_set,
        stack: Vec::new(),
    };
    solver.rec(live, 0);
    let mut chosen: Vec<usize> = solver.best_set.iter().map(|&p| order[p]).collect();
    chosen.sort_by(|&a, &b| candidates[a].lex_cmp(candidates[b]));
    Ok(Selection { chosen, total_weight: solver.best })
}

fn triangle_sets(c: &EdgeColoring, color: Color) -> Vec<VertexSet> {
    mono_triangles(c, color).into_iter().map(VertexSet::from_vertices).collect()
}

fn bowtie_sets(c: &EdgeColoring) -> Vec<VertexSet> {
    let mut sets: Vec<VertexSet> = enumerate_bowties(c).iter().map(|b| b.vertex_set()).collect();
    sets.sort_by(|a, b| a.lex_cmp(*b));
    sets.dedup();
    sets
}

fn packing_of(candidates: &[VertexSet], sel: Selection, tag: PackingTag, optimal: bool) -> Packing {
    Packing {
        copies: sel.chosen.iter().map(|&i| candidates[i]).collect(),
        tag,
        total_weight: sel.total_weight,
        optimal,
    }
}

fn greedy_selection(candidates: &[VertexSet]) -> Selection {
    let mut used = VertexSet::EMPTY;
    let mut chosen = Vec::new();
    for (i, c) in candidates.iter().enumerate() {
        if used.is_disjoint(*c) {
            used = used.union(*c);
            chosen.push(i);
        }
    }
    Selection { total_weight: chosen.len() as u64, chosen }
}

/// Maximum family of disjoint triangles of `color`.
pub fn max_triangle_packing(c: &EdgeColoring, color: Color, budget: &PackingBudget) -> Result<Packing> {
    if c.n() > budget.triangle_vertices {
        return Err(Error::Capacity(format!(
            "exact triangle packing on K_{} exceeds the budget n <= {}",
            c.n(),
            budget.triangle_vertices
        )));
    }
    let cands = triangle_sets(c, color);
    let sel = max_weighted_packing(&cands, &WeightVector::uniform(cands.len()), budget)?;
    Ok(packing_of(&cands, sel, color.into(), true))
}

/// Larger of the red and blue maximum triangle packings; ties go to red.
pub fn max_mono_triangle_packing(c: &EdgeColoring, budget: &PackingBudget) -> Result<Packing> {
    let red = max_triangle_packing(c, Color::Red, budget)?;
    let blue = max_triangle_packing(c, Color::Blue, budget)?;
    Ok(if blue.size() > red.size() { blue } else { red })
}

/// Maximum family of vertex-disjoint bowties.
pub fn max_bowtie_packing(c: &EdgeColoring, budget: &PackingBudget) -> Result<Packing> {
    if c.n() > budget.bowtie_vertices {
        return Err(Error::Capacity(format!(
            "exact bowtie packing on K_{} exceeds the budget n <= {}",
            c.n(),
            budget.bowtie_vertices
        )));
    }
    let cands = bowtie_sets(c);
    let sel = max_weighted_packing(&cands, &WeightVector::uniform(cands.len()), budget)?;
    Ok(packing_of(&cands, sel, PackingTag::Bowtie, true))
}

/// Greedy triangle packing in lexicographic order, for instances over budget.
pub fn greedy_triangle_packing(c: &EdgeColoring, color: Color) -> Packing {
    let cands = triangle_sets(c, color);
    let sel = greedy_selection(&cands);
    packing_of(&cands, sel, color.into(), false)
}

/// Greedy bowtie packing in lexicographic order, for instances over budget.
pub fn greedy_bowtie_packing(c: &EdgeColoring) -> Packing {
    let cands = bowtie_sets(c);
    let sel = greedy_selection(&cands);
    packing_of(&cands, sel, PackingTag::Bowtie, false)
}

/// Maximum of `|V(packing) ∩ {0..k-1}|` over disjoint triangles of `color`.
pub fn max_prefix_triangle_cover(
    c: &EdgeColoring,
    color: Color,
    k: usize,
    budget: &PackingBudget,
) -> Result<Packing> {
    if c.n() > budget.triangle_vertices {
        return Err(Error::Capacity(format!(
            "exact triangle packing on K_{} exceeds the budget n <= {}",
            c.n(),
            budget.triangle_vertices
        )));
    }
    let cands = triangle_sets(c, color);
    let prefix: Vec<u64> = (0..c.n()).map(|u| (u < k) as u64).collect();
    let sel = max_vertex_weighted_packing(&cands, &prefix, budget)?;
    Ok(packing_of(&cands, sel, color.into(), true))
}
