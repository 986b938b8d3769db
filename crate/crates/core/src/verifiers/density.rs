//! Triangle coverage checks: the `3/5` baseline and the prefix-density
//! statement with the constants `delta*` and `gamma*`.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{sweep, sweep_certificate, ColoringSpace, Outcome, SearchCertificate};
use crate::bounds::TriangleConstants;
use crate::coloring::{Color, EdgeColoring};
use crate::error::Result;
use crate::packing::{max_mono_triangle_packing, max_prefix_triangle_cover, PackingBudget};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BesResult {
    pub n: usize,
    pub triangles: usize,
    /// `3|F| >= 3(n - 5)/5`, checked as `5|F| >= n - 5`.
    pub holds: bool,
}

pub fn bes_coverage_check(c: &EdgeColoring, budget: &PackingBudget) -> Result<BesResult> {
    let f = max_mono_triangle_packing(c, budget)?.size();
    Ok(BesResult {
        n: c.n(),
        triangles: f,
        holds: 5 * f as i64 >= c.n() as i64 - 5,
    })
}

pub fn bes_verify(space: &ColoringSpace, threads: usize, budget: &PackingBudget) -> Result<SearchCertificate> {
    let start = Instant::now();
    let sw = sweep(space, threads, |c| {
        let r = bes_coverage_check(c, budget)?;
        Ok(Outcome {
            holds: r.holds,
            slack: 5 * r.triangles as i64 - (r.n as i64 - 5),
        })
    })?;
    sweep_certificate("bes", space, sw, Default::default(), start.elapsed())
}

/// `floor(delta* n)`, computed exactly as `(isqrt(112 n^2) + 2n) / 27`.
pub fn delta_prefix(n: usize) -> usize {
    let m = 112 * (n as u128) * (n as u128);
    let mut r = (m as f64).sqrt() as u128;
    while r * r > m {
        r -= 1;
    }
    while (r + 1) * (r + 1) <= m {
        r += 1;
    }
    ((r + 2 * n as u128) / 27) as usize
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverageRow {
    pub k: usize,
    pub color: Color,
    /// Maximum of `|V(F) ∩ [k]|` over disjoint triangles of `color`.
    pub coverage: u64,
    /// `gamma* k - 7`.
    pub threshold: f64,
    pub attained: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct FinalLemmaResult {
    pub n: usize,
    pub rows: Vec<CoverageRow>,
    pub holds: bool,
    /// First row in table order that attains its threshold.
    pub witness: Option<CoverageRow>,
}

impl FinalLemmaResult {
    /// Largest `coverage - threshold` over the rows, rounded down.
    pub fn slack(&self) -> i64 {
        self.rows
            .iter()
            .map(|r| (r.coverage as f64 - r.threshold).floor() as i64)
            .max()
            .unwrap_or(0)
    }
}

/// Rows for `k` in `{floor(delta* n), n}` and both colors. The prefix `[k]` is
/// the vertex set `{0, ..., k-1}`.
pub fn final_lemma_check(c: &EdgeColoring, budget: &PackingBudget) -> Result<FinalLemmaResult> {
    let gamma = TriangleConstants::new().gamma_star;
    let n = c.n();
    let mut rows = Vec::new();
    for k in [delta_prefix(n), n] {
        for color in Color::BOTH {
            let coverage = max_prefix_triangle_cover(c, color, k, budget)?.total_weight;
            let threshold = gamma * k as f64 - 7.0;
            rows.push(CoverageRow {
                k,
                color,
                coverage,
                threshold,
                attained: coverage as f64 >= threshold,
            });
        }
    }
    let witness = rows.iter().copied().find(|r| r.attained);
    Ok(FinalLemmaResult { n, holds: witness.is_some(), rows, witness })
}

pub fn final_verify(space: &ColoringSpace, threads: usize, budget: &PackingBudget) -> Result<SearchCertificate> {
    let start = Instant::now();
    let sw = sweep(space, threads, |c| {
        let r = final_lemma_check(c, budget)?;
        Ok(Outcome { holds: r.holds, slack: r.slack() })
    })?;
    sweep_certificate("final", space, sw, Default::default(), start.elapsed())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coloring::pentagon_blowup;

    #[test]
    fn delta_prefix_matches_float() {
        let delta = TriangleConstants::new().delta_star;
        for n in 0..2000 {
            assert_eq!(delta_prefix(n), (delta * n as f64).floor() as usize, "n = {n}");
        }
        assert_eq!(delta_prefix(20), 9);
    }

    #[test]
    fn small_n_is_vacuous() {
        let gamma = TriangleConstants::new().gamma_star;
        assert!(gamma * 11.0 - 7.0 < 0.0);
        let r = final_lemma_check(&pentagon_blowup(11).unwrap(), &PackingBudget::default()).unwrap();
        assert!(r.holds);
    }

    #[test]
    fn all_red_k20() {
        let red = EdgeColoring::monochromatic(20, Color::Red).unwrap();
        let r = final_lemma_check(&red, &PackingBudget::default()).unwrap();
        let full = r.rows.iter().find(|row| row.k == 20 && row.color == Color::Red).unwrap();
        assert_eq!(full.coverage, 18);
        assert!(full.attained);
        assert!((full.threshold - 5.440710539801).abs() < 1e-9);
    }

    #[test]
    fn bes_examples() {
        let r = bes_coverage_check(&pentagon_blowup(5).unwrap(), &PackingBudget::default()).unwrap();
        assert_eq!((r.triangles, r.holds), (0, true));
        let cert = bes_verify(&ColoringSpace::Exhaustive { n: 6 }, 1, &PackingBudget::default()).unwrap();
        assert!(cert.is_verified());
    }
}
