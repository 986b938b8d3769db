//! Exhaustive and sampled verification of the finite lemmas, with
//! deterministic certificates.

pub mod adequacy;
pub mod bowcase;
pub mod density;
pub mod k6;
pub mod lemmaik;

pub use adequacy::{adequacy_check, adequate_partition, AdequacyVerdict, AdequacyWitness, PartitionCertificate};
pub use bowcase::{bowcase_exhaustive, BowcaseConfig, BowcaseInstance, Truth, W1Reading};
pub use density::{bes_coverage_check, final_lemma_check, BesResult, CoverageRow, FinalLemmaResult};
pub use k6::k6_observation_verify;
pub use lemmaik::{lemmaik_check, LemmaIkResult};

use std::time::Duration;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::coloring::{exhaustive_space, random_coloring, EdgeColoring, EDGE_ORDER};
use crate::error::{Error, Result};

/// Counterexamples kept verbatim in a certificate; the total is always counted.
pub const MAX_RECORDED_COUNTEREXAMPLES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Verified,
    Failed,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PruneCounts {
    pub predicate_satisfied: u64,
    pub symmetry: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SearchCertificate {
    pub lemma: String,
    pub space: String,
    pub space_size: u64,
    pub edge_order: String,
    pub nodes: u64,
    pub pruned: PruneCounts,
    pub leaves: u64,
    pub counterexample_count: u64,
    /// Coloring-file text of the first counterexamples found.
    pub counterexamples: Vec<String>,
    pub verdict: Verdict,
    pub checksum: String,
    pub details: serde_json::Map<String, serde_json::Value>,
    #[serde(skip)]
    pub elapsed: Duration,
}

impl SearchCertificate {
    pub fn is_verified(&self) -> bool {
        self.verdict == Verdict::Verified
    }

    /// Checks that the verdict agrees with the counterexample record.
    pub fn validate(&self) -> Result<()> {
        let clean = self.counterexample_count == 0 && self.counterexamples.is_empty();
        if clean != (self.verdict == Verdict::Verified) {
            return Err(Error::Contract(format!(
                "{} certificate: verdict {:?} with {} counterexamples",
                self.lemma, self.verdict, self.counterexample_count
            )));
        }
        if self.counterexamples.len() as u64 > self.counterexample_count {
            return Err(Error::Contract("more recorded counterexamples than counted".into()));
        }
        if self.checksum.len() != 64 || !self.checksum.bytes().all(|b| b.is_ascii_hexdigit()) {
            return Err(Error::Contract("checksum is not a sha256 hex digest".into()));
        }
        Ok(())
    }
}

pub(crate) fn verdict_of(counterexamples: u64) -> Verdict {
    if counterexamples == 0 {
        Verdict::Verified
    } else {
        Verdict::Failed
    }
}

/// Incremental sha256 over fixed-width little-endian fields.
#[derive(Clone, Default)]
pub(crate) struct Checksum(Sha256);

impl Checksum {
    pub fn u64(&mut self, v: u64) -> &mut Self {
        self.0.update(v.to_le_bytes());
        self
    }

    pub fn bytes(&mut self, b: &[u8]) -> &mut Self {
        self.u64(b.len() as u64);
        self.0.update(b);
        self
    }

    pub fn finish(self) -> String {
        self.0.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

pub(crate) fn thread_pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads.max(1))
        .build()
        .map_err(|e| Error::Contract(format!("cannot start {threads} worker threads: {e}")))
}

/// The colorings a sweep visits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum ColoringSpace {
    /// Every coloring of `K_n`, in code order.
    Exhaustive { n: usize },
    /// Sample `i` is `random_coloring(n_min + i % (n_max - n_min + 1), seed + i)`.
    Sampled { n_min: usize, n_max: usize, count: u64, seed: u64 },
}

impl ColoringSpace {
    pub fn size(&self) -> Result<u64> {
        match *self {
            ColoringSpace::Exhaustive { n } => exhaustive_space(n),
            ColoringSpace::Sampled { n_min, n_max, count, .. } => {
                if n_min > n_max || n_min == 0 {
                    return Err(Error::Domain(format!("bad sample range {n_min}..={n_max}")));
                }
                Ok(count)
            }
        }
    }

    pub fn coloring(&self, i: u64) -> Result<EdgeColoring> {
        match *self {
            ColoringSpace::Exhaustive { n } => EdgeColoring::from_code(n, i),
            ColoringSpace::Sampled { n_min, n_max, seed, .. } => {
                let n = n_min + (i % (n_max - n_min + 1) as u64) as usize;
                random_coloring(n, seed.wrapping_add(i))
            }
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            ColoringSpace::Exhaustive { n } => format!("all 2-colorings of K_{n}"),
            ColoringSpace::Sampled { n_min, n_max, count, seed } => format!(
                "{count} random 2-colorings, n cycling {n_min}..={n_max}, seeds {seed}+i"
            ),
        }
    }
}

/// Outcome of one per-coloring check: whether it holds and an integer slack
/// (recorded in the checksum and minimized over the sweep).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct Outcome {
    pub holds: bool,
    pub slack: i64,
}

pub(crate) struct Sweep {
    pub visited: u64,
    pub violations: u64,
    pub counterexamples: Vec<String>,
    pub min_slack: Option<i64>,
    pub checksum: String,
}

const CHUNK: u64 = 1 << 14;

struct ChunkResult {
    visited: u64,
    violations: u64,
    counterexamples: Vec<String>,
    min_slack: Option<i64>,
    digest: [u8; 32],
}

/// Runs `check` over `space` on `threads` workers. Work is cut into fixed
/// chunks and merged in chunk order, so the result and checksum do not
/// depend on the thread count.
pub(crate) fn sweep<F>(space: &ColoringSpace, threads: usize, check: F) -> Result<Sweep>
where
    F: Fn(&EdgeColoring) -> Result<Outcome> + Sync,
{
    let total = space.size()?;
    let chunks = total.div_ceil(CHUNK);
    let run_chunk = |k: u64| -> Result<ChunkResult> {
        let mut h = Sha256::new();
        let mut r = ChunkResult {
            visited: 0,
            violations: 0,
            counterexamples: Vec::new(),
            min_slack: None,
            digest: [0; 32],
        };
        for i in k * CHUNK..((k + 1) * CHUNK).min(total) {
            let c = space.coloring(i)?;
            let out = check(&c)?;
            h.update(out.slack.to_le_bytes());
            r.visited += 1;
            r.min_slack = Some(r.min_slack.map_or(out.slack, |m| m.min(out.slack)));
            if !out.holds {
                r.violations += 1;
                if r.counterexamples.len() < MAX_RECORDED_COUNTEREXAMPLES {
                    r.counterexamples.push(c.to_file_string());
                }
            }
        }
        r.digest = h.finalize().into();
        Ok(r)
    };
    let results: Vec<Result<ChunkResult>> =
        thread_pool(threads)?.install(|| (0..chunks).into_par_iter().map(run_chunk).collect());

    let mut sum = Checksum::default();
    sum.bytes(space.describe().as_bytes()).u64(total);
    let mut out = Sweep {
        visited: 0,
        violations: 0,
        counterexamples: Vec::new(),
        min_slack: None,
        checksum: String::new(),
    };
    for r in results {
        let r = r?;
        sum.bytes(&r.digest).u64(r.violations);
        out.visited += r.visited;
        out.violations += r.violations;
        out.min_slack = match (out.min_slack, r.min_slack) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
        for ce in r.counterexamples {
            if out.counterexamples.len() < MAX_RECORDED_COUNTEREXAMPLES {
                out.counterexamples.push(ce);
            }
        }
    }
    out.checksum = sum.finish();
    Ok(out)
}

/// Wraps a finished sweep into a certificate.
pub(crate) fn sweep_certificate(
    lemma: &str,
    space: &ColoringSpace,
    sw: Sweep,
    mut details: serde_json::Map<String, serde_json::Value>,
    elapsed: Duration,
) -> Result<SearchCertificate> {
    details.insert("space".into(), serde_json::to_value(space)?);
    details.insert("min_slack".into(), serde_json::to_value(sw.min_slack)?);
    Ok(SearchCertificate {
        lemma: lemma.into(),
        space: space.describe(),
        space_size: space.size()?,
        edge_order: EDGE_ORDER.into(),
        nodes: sw.visited,
        pruned: PruneCounts::default(),
        leaves: sw.visited,
        counterexample_count: sw.violations,
        counterexamples: sw.counterexamples,
        verdict: verdict_of(sw.violations),
        checksum: sw.checksum,
        details,
        elapsed,
    })
}
