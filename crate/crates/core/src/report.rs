//! Versioned JSON envelope for everything the command-line tool emits.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::bounds::{BoundReport, ConstantCheck};
use crate::error::{Error, Result};
use crate::packing::PackingBudget;
use crate::variational::{FBoundFromG, HEstimate};
use crate::verifiers::bowcase::DEFAULT_SPLIT_DEPTH;
use crate::verifiers::{BesResult, FinalLemmaResult, SearchCertificate};

pub const SCHEMA: &str = "rfl/1";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Every knob a run depends on; echoed into the envelope.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub subcommand: String,
    pub inputs: Vec<String>,
    pub seed: u64,
    pub threads: usize,
    pub budget: PackingBudget,
    pub split_depth: usize,
    pub horizon: f64,
    pub resolution: usize,
    pub output: Option<String>,
    /// Subcommand-specific options, as given.
    pub options: BTreeMap<String, String>,
}

pub const DEFAULT_SEED: u64 = 20240607;

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            subcommand: String::new(),
            inputs: Vec::new(),
            seed: DEFAULT_SEED,
            threads: 1,
            budget: PackingBudget::default(),
            split_depth: DEFAULT_SPLIT_DEPTH,
            horizon: 4096.0,
            resolution: crate::variational::DEFAULT_RESOLUTION,
            output: None,
            options: BTreeMap::new(),
        }
    }
}

/// Triangle coverage of one coloring.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DensityTable {
    pub source: String,
    pub n: usize,
    pub bes: Option<BesResult>,
    pub final_lemma: Option<FinalLemmaResult>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
pub enum Payload {
    Bounds(Vec<BoundReport>),
    Certificate(SearchCertificate),
    Constants(ConstantCheck),
    HEstimate(HEstimate),
    FBound(FBoundFromG),
    Density(DensityTable),
}

impl Payload {
    pub fn validate(&self) -> Result<()> {
        match self {
            Payload::Bounds(reports) => reports.iter().try_for_each(BoundReport::validate),
            Payload::Certificate(c) => c.validate(),
            Payload::Constants(c) => {
                if c.verified {
                    Ok(())
                } else {
                    Err(Error::Contract("constant check payload is not verified".into()))
                }
            }
            Payload::HEstimate(h) => validate_estimate(h),
            Payload::FBound(b) => {
                validate_estimate(&b.estimate)?;
                if !(0.5..=1.0).contains(&b.f_bound) || b.vacuous != b.estimate.sup_ratio.is_infinite() {
                    return Err(Error::Contract(format!("inconsistent f bound {}", b.f_bound)));
                }
                Ok(())
            }
            Payload::Density(d) => {
                if d.bes.is_none() && d.final_lemma.is_none() {
                    return Err(Error::Contract("density table without results".into()));
                }
                let sizes = d.bes.iter().map(|b| b.n).chain(d.final_lemma.iter().map(|f| f.n));
                if sizes.into_iter().any(|n| n != d.n) {
                    return Err(Error::Contract("density results disagree on n".into()));
                }
                Ok(())
            }
        }
    }

    /// Canonical bytes compared across reruns.
    pub fn canonical_bytes(&self) -> Result<Vec<u8>> {
        Ok(serde_json::to_vec(self)?)
    }
}

fn validate_estimate(h: &HEstimate) -> Result<()> {
    let ok = h.trace.len() == 3
        && h.trace.iter().all(|t| t.sup_ratio >= 0.0)
        && h.sup_ratio == h.trace[2].sup_ratio
        && h.gamma > -1.0
        && h.gamma < 1.0;
    if ok {
        Ok(())
    } else {
        Err(Error::Contract("malformed ratio estimate".into()))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ReportEnvelope {
    pub schema: String,
    pub version: String,
    pub config: RunConfig,
    pub timestamp: String,
    pub elapsed_ms: u64,
    pub payload: Payload,
}

impl ReportEnvelope {
    pub fn new(config: RunConfig, timestamp: String, elapsed_ms: u64, payload: Payload) -> Self {
        ReportEnvelope {
            schema: SCHEMA.into(),
            version: VERSION.into(),
            config,
            timestamp,
            elapsed_ms,
            payload,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.schema != SCHEMA {
            return Err(Error::Contract(format!("unknown schema '{}'", self.schema)));
        }
        self.payload.validate()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let env: ReportEnvelope = serde_json::from_str(text)?;
        env.validate()?;
        Ok(env)
    }
}
