//! A red triangle and a vertex-disjoint blue triangle in `K_6` always span a bowtie.

use std::time::Instant;

use super::{verdict_of, Checksum, PruneCounts, SearchCertificate, MAX_RECORDED_COUNTEREXAMPLES};
use crate::coloring::{enumerate_bowties, Color, EdgeColoring, EDGE_ORDER};
use crate::error::Result;

/// Red triangle on {0,1,2}, blue on {3,4,5}; bit `k` of `code` colors the
/// `k`-th cross edge `(i, j)`, `i < 3 <= j`, in lexicographic order (1 = red).
pub fn k6_instance(code: u16) -> EdgeColoring {
    let mut c = EdgeColoring::monochromatic(6, Color::Blue).expect("6 vertices");
    for (i, j) in [(0, 1), (0, 2), (1, 2)] {
        c.set(i, j, Color::Red);
    }
    let mut k = 0;
    for i in 0..3 {
        for j in 3..6 {
            if code >> k & 1 == 1 {
                c.set(i, j, Color::Red);
            }
            k += 1;
        }
    }
    c
}

pub fn k6_observation_verify() -> Result<SearchCertificate> {
    let start = Instant::now();
    let mut sum = Checksum::default();
    let mut failures = 0u64;
    let mut counterexamples = Vec::new();
    let mut fewest = usize::MAX;
    for code in 0..512u16 {
        let c = k6_instance(code);
        let ties = enumerate_bowties(&c).len();
        sum.u64(code as u64).u64(ties as u64);
        fewest = fewest.min(ties);
        if ties == 0 {
            failures += 1;
            if counterexamples.len() < MAX_RECORDED_COUNTEREXAMPLES {
                counterexamples.push(c.to_file_string());
            }
        }
    }
    let mut details = serde_json::Map::new();
    details.insert("fewest_bowties".into(), fewest.into());
    details.insert("verified_instances".into(), (512 - failures).into());
    Ok(SearchCertificate {
        lemma: "k6".into(),
        space: "K_6 with red triangle {0,1,2}, blue triangle {3,4,5}, all 2^9 cross colorings".into(),
        space_size: 512,
        edge_order: EDGE_ORDER.into(),
        nodes: 512,
        pruned: PruneCounts::default(),
        leaves: 512,
        counterexample_count: failures,
        counterexamples,
        verdict: verdict_of(failures),
        checksum: sum.finish(),
        details,
        elapsed: start.elapsed(),
    })
}
