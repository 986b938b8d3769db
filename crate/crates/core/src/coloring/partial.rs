//! Partially assigned colorings, the search-tree nodes of the verifiers.

use super::{edge_count, edge_index, Color, EdgeColoring};
use crate::error::{Error, Result};

/// Largest `n` whose edge set fits one 64-bit mask.
pub const MAX_PARTIAL_VERTICES: usize = 11;

/// Edge-index masks `red`, `blue` and the rest unassigned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PartialColoring {
    n: usize,
    red: u64,
    blue: u64,
}

impl PartialColoring {
    pub fn new(n: usize) -> Result<Self> {
        if n == 0 || n > MAX_PARTIAL_VERTICES {
            return Err(Error::Capacity(format!(
                "partial colorings support 1..={MAX_PARTIAL_VERTICES} vertices, got {n}"
            )));
        }
        Ok(PartialColoring { n, red: 0, blue: 0 })
    }

    pub fn from_coloring(c: &EdgeColoring) -> Result<Self> {
        let mut p = Self::new(c.n())?;
        for i in 0..c.n() {
            for j in i + 1..c.n() {
                p.assign(i, j, c.color(i, j));
            }
        }
        Ok(p)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    fn all(&self) -> u64 {
        let m = edge_count(self.n);
        if m == 64 { u64::MAX } else { (1u64 << m) - 1 }
    }

    pub fn red_mask(&self) -> u64 {
        self.red
    }

    pub fn blue_mask(&self) -> u64 {
        self.blue
    }

    pub fn unassigned_mask(&self) -> u64 {
        self.all() & !(self.red | self.blue)
    }

    pub fn mask(&self, color: Color) -> u64 {
        match color {
            Color::Red => self.red,
            Color::Blue => self.blue,
        }
    }

    pub fn get(&self, i: usize, j: usize) -> Option<Color> {
        self.get_index(edge_index(self.n, i, j))
    }

    pub fn get_index(&self, k: usize) -> Option<Color> {
        if self.red >> k & 1 == 1 {
            Some(Color::Red)
        } else if self.blue >> k & 1 == 1 {
            Some(Color::Blue)
        } else {
            None
        }
    }

    pub fn assign(&mut self, i: usize, j: usize, color: Color) {
        self.assign_index(edge_index(self.n, i, j), color);
    }

    /// Sets edge `k`, overwriting any earlier color.
    pub fn assign_index(&mut self, k: usize, color: Color) {
        let b = 1u64 << k;
        match color {
            Color::Red => {
                self.red |= b;
                self.blue &= !b;
            }
            Color::Blue => {
                self.blue |= b;
                self.red &= !b;
            }
        }
    }

    pub fn with_index(mut self, k: usize, color: Color) -> Self {
        self.assign_index(k, color);
        self
    }

    pub fn is_complete(&self) -> bool {
        self.unassigned_mask() == 0
    }

    /// The full coloring, or `None` while edges remain unassigned.
    pub fn to_coloring(&self) -> Option<EdgeColoring> {
        if !self.is_complete() {
            return None;
        }
        let mut k = 0;
        let red = self.red;
        EdgeColoring::from_fn(self.n, |_, _| {
            let c = if red >> k & 1 == 1 { Color::Red } else { Color::Blue };
            k += 1;
            c
        })
        .ok()
    }

    /// Completes every unassigned edge `k` with `fill(k)`.
    pub fn complete_with(&self, mut fill: impl FnMut(usize) -> Color) -> EdgeColoring {
        let mut p = *self;
        let mut free = self.unassigned_mask();
        while free != 0 {
            let k = free.trailing_zeros() as usize;
            free &= free - 1;
            p.assign_index(k, fill(k));
        }
        p.to_coloring().expect("all edges assigned")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn masks_partition_edges() {
        let mut p = PartialColoring::new(10).unwrap();
        assert_eq!(p.unassigned_mask().count_ones(), 45);
        p.assign(0, 1, Color::Red);
        p.assign(3, 2, Color::Blue);
        assert_eq!(p.get(1, 0), Some(Color::Red));
        assert_eq!(p.get(2, 3), Some(Color::Blue));
        assert_eq!(p.get(4, 5), None);
        p.assign(0, 1, Color::Blue);
        assert_eq!(p.red_mask() & p.blue_mask(), 0);
        assert_eq!(p.unassigned_mask().count_ones(), 43);
        assert!(p.to_coloring().is_none());
        let c = p.complete_with(|_| Color::Red);
        assert_eq!(c.color(0, 1), Color::Blue);
        assert_eq!(c.color(4, 5), Color::Red);
        assert_eq!(PartialColoring::from_coloring(&c).unwrap().to_coloring().unwrap(), c);
        assert!(PartialColoring::new(12).is_err());
    }

    #[test]
    fn eleven_vertices_use_all_but_nine_bits() {
        let p = PartialColoring::new(11).unwrap();
        assert_eq!(p.unassigned_mask().count_ones(), 55);
    }
}
