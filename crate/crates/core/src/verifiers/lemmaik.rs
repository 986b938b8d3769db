//! `3|F| + 2|F'| >= n - 5`, where `F` is a largest monochromatic family of
//! disjoint triangles and `F'` a largest family of disjoint bowties.

use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{sweep, sweep_certificate, ColoringSpace, Outcome, SearchCertificate};
use crate::coloring::EdgeColoring;
use crate::error::{Error, Result};
use crate::packing::{max_bowtie_packing, max_mono_triangle_packing, PackingBudget};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LemmaIkResult {
    pub n: usize,
    pub triangles: usize,
    pub bowties: usize,
    pub holds: bool,
}

impl LemmaIkResult {
    /// `3|F| + 2|F'| - (n - 5)`.
    pub fn slack(&self) -> i64 {
        3 * self.triangles as i64 + 2 * self.bowties as i64 - (self.n as i64 - 5)
    }
}

pub fn lemmaik_check(c: &EdgeColoring, budget: &PackingBudget) -> Result<LemmaIkResult> {
    let f = max_mono_triangle_packing(c, budget)?;
    let fp = max_bowtie_packing(c, budget)?;
    // each bowtie contributes its red triangle to a red family
    if f.size() < fp.size() {
        return Err(Error::Verification(format!(
            "max triangle family {} smaller than bowtie family {}",
            f.size(),
            fp.size()
        )));
    }
    let mut r = LemmaIkResult {
        n: c.n(),
        triangles: f.size(),
        bowties: fp.size(),
        holds: false,
    };
    r.holds = r.slack() >= 0;
    Ok(r)
}

pub fn lemmaik_verify(space: &ColoringSpace, threads: usize, budget: &PackingBudget) -> Result<SearchCertificate> {
    let start = Instant::now();
    let sw = sweep(space, threads, |c| {
        let r = lemmaik_check(c, budget)?;
        Ok(Outcome { holds: r.holds, slack: r.slack() })
    })?;
    sweep_certificate("lemmaik", space, sw, Default::default(), start.elapsed())
}
