//! Monochromatic triangles, bowties and copies of a pattern graph.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Color, EdgeColoring};
use crate::error::{Error, Result};
use crate::graph::{bit, low_bits, FiniteGraph, VertexSet};

/// All triangles of `color`, as sorted triples in lexicographic order.
pub fn mono_triangles(c: &EdgeColoring, color: Color) -> Vec<[usize; 3]> {
    let n = c.n();
    let mut out = Vec::new();
    for i in 0..n {
        let ni = c.neighbors(i, color) & !low_bits(i + 1);
        for j in VertexSet::from_bits(ni).iter() {
            let common = ni & c.neighbors(j, color) & !low_bits(j + 1);
            out.extend(VertexSet::from_bits(common).iter().map(|k| [i, j, k]));
        }
    }
    out
}

/// A red triangle and a blue triangle sharing exactly the vertex `center`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Bowtie {
    pub center: usize,
    pub red: [usize; 2],
    pub blue: [usize; 2],
}

impl Bowtie {
    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::from_vertices([self.center, self.red[0], self.red[1], self.blue[0], self.blue[1]])
    }

    pub fn red_triangle(&self) -> [usize; 3] {
        sorted3(self.center, self.red[0], self.red[1])
    }

    pub fn blue_triangle(&self) -> [usize; 3] {
        sorted3(self.center, self.blue[0], self.blue[1])
    }

    /// Checks the six defining edges against `c`.
    pub fn holds_in(&self, c: &EdgeColoring) -> bool {
        let [r1, r2] = self.red;
        let [b1, b2] = self.blue;
        let x = self.center;
        self.vertex_set().len() == 5
            && [(x, r1), (x, r2), (r1, r2)].iter().all(|&(u, v)| c.color(u, v) == Color::Red)
            && [(x, b1), (x, b2), (b1, b2)].iter().all(|&(u, v)| c.color(u, v) == Color::Blue)
    }

    /// The same five vertices read in the color-swapped coloring.
    pub fn swapped(&self) -> Bowtie {
        Bowtie { center: self.center, red: self.blue, blue: self.red }
    }
}

fn sorted3(a: usize, b: usize, c: usize) -> [usize; 3] {
    let mut t = [a, b, c];
    t.sort_unstable();
    t
}

fn edges_within(mask: u64, c: &EdgeColoring, color: Color) -> Vec<[usize; 2]> {
    let mut out = Vec::new();
    for i in VertexSet::from_bits(mask).iter() {
        let later = mask & c.neighbors(i, color) & !low_bits(i + 1);
        out.extend(VertexSet::from_bits(later).iter().map(|j| [i, j]));
    }
    out
}

/// All bowties of `c`, sorted by (center, red pair, blue pair).
pub fn enumerate_bowties(c: &EdgeColoring) -> Vec<Bowtie> {
    let mut out = Vec::new();
    for x in 0..c.n() {
        let reds = edges_within(c.neighbors(x, Color::Red), c, Color::Red);
        if reds.is_empty() {
            continue;
        }
        let blues = edges_within(c.neighbors(x, Color::Blue), c, Color::Blue);
        for &red in &reds {
            for &blue in &blues {
                out.push(Bowtie { center: x, red, blue });
            }
        }
    }
    out
}

/// One copy of a pattern graph: its host vertex set, the image of the pattern
/// edges (sorted pairs), and one embedding realizing it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Copy {
    pub vertices: VertexSet,
    pub edges: Vec<(usize, usize)>,
    pub embedding: Vec<usize>,
}

/// Pattern vertices ordered so each one has as many earlier neighbors as possible.
fn search_order(f: &FiniteGraph) -> Vec<usize> {
    let mut order = Vec::with_capacity(f.n());
    let mut placed = 0u64;
    while order.len() < f.n() {
        let next = (0..f.n())
            .filter(|&v| placed & bit(v) == 0)
            .max_by_key(|&v| {
                let back = (f.neighbors(v).bits() & placed).count_ones();
                (back, f.degree(v), std::cmp::Reverse(v))
            })
            .expect("an unplaced vertex remains");
        placed |= bit(next);
        order.push(next);
    }
    order
}

/// Every subgraph copy of `f` in the `color` class of `c`, one per distinct
/// (vertex set, edge image), sorted by vertex list then edges.
pub fn enumerate_copies(c: &EdgeColoring, f: &FiniteGraph, color: Color) -> Result<Vec<Copy>> {
    if f.n() > c.n() {
        return Err(Error::Contract(format!(
            "pattern has {} vertices, host only {}",
            f.n(),
            c.n()
        )));
    }
    let order = search_order(f);
    let fedges = f.edges();
    let mut map = vec![usize::MAX; f.n()];
    let mut found: BTreeMap<(Vec<usize>, Vec<(usize, usize)>), Vec<usize>> = BTreeMap::new();

    fn rec(
        depth: usize,
        used: u64,
        ctx: &(&EdgeColoring, &FiniteGraph, Color, &[usize], &[(usize, usize)]),
        map: &mut Vec<usize>,
        found: &mut BTreeMap<(Vec<usize>, Vec<(usize, usize)>), Vec<usize>>,
    ) {
        let (c, f, color, order, fedges) = *ctx;
        if depth == order.len() {
            let mut image: Vec<(usize, usize)> = fedges
                .iter()
                .map(|&(u, v)| {
                    let (a, b) = (map[u], map[v]);
                    (a.min(b), a.max(b))
                })
                .collect();
            image.sort_unstable();
            let verts = VertexSet::from_bits(used).to_vec();
            found.entry((verts, image)).or_insert_with(|| map.clone());
            return;
        }
        let p = order[depth];
        let mut cand = low_bits(c.n()) & !used;
        for q in f.neighbors(p).iter() {
            if map[q] != usize::MAX {
                cand &= c.neighbors(map[q], color);
            }
        }
        for h in VertexSet::from_bits(cand).iter() {
            map[p] = h;
            rec(depth + 1, used | bit(h), ctx, map, found);
        }
        map[p] = usize::MAX;
    }

    rec(0, 0, &(c, f, color, &order, &fedges), &mut map, &mut found);
    Ok(found
        .into_iter()
        .map(|((verts, edges), embedding)| Copy {
            vertices: VertexSet::from_vertices(verts),
            edges,
            embedding,
        })
        .collect())
}
