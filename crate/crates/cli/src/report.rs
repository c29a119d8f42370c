//! Machine-readable command reports.
//!
//! Every report echoes the command line and carries a SHA-256 digest of its
//! inputs and the seed it used, so a run can be replayed. Exact rationals are
//! written as `p/q` strings.

use std::collections::BTreeMap;

use relaynet::cutset::{Cut, ViolatedCut};
use relaynet::detnet::Side;
use relaynet::gaussian::{AchievabilityReport, GapConfig, Lemma1Gaps, RegionCheck};
use relaynet::scheduler::{AssignmentKind, CompletenessConfig, LevelAssignment, SlotRole};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Vec<String>,
    pub input_digest: String,
    pub seed: Option<u64>,
    pub body: Body,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum Body {
    DetRegion {
        mode: String,
        rates: Vec<String>,
        member: bool,
        violated: Vec<CutRecord>,
        tight: Vec<String>,
    },
    GaussRegion {
        rates: [f64; 4],
        member: bool,
        general: RegionCheck,
        restricted: RegionCheck,
        lemma1_gaps: Lemma1Gaps,
    },
    Schedule {
        strategy: String,
        mode: String,
        rates: Vec<String>,
        slots: Vec<SlotRole>,
        bits: Vec<u64>,
        assignments: Vec<AssignmentRecord>,
        simulation: Option<SimulationRecord>,
    },
    Rejected {
        reason: String,
        violated: Vec<CutRecord>,
    },
    GaussVerify {
        rates: [f64; 4],
        report: Box<AchievabilityReport>,
    },
    Sweep(SweepSummary),
    DetSweep(DetSweepSummary),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CutRecord {
    pub cut: String,
    pub load: String,
    pub bound: String,
}

impl From<&ViolatedCut> for CutRecord {
    fn from(v: &ViolatedCut) -> Self {
        CutRecord {
            cut: v.cut.to_string(),
            load: v.load.to_string(),
            bound: v.bound.to_string(),
        }
    }
}

pub fn cut_names(cuts: &[Cut]) -> Vec<String> {
    cuts.iter().map(Cut::to_string).collect()
}

/// One schedule entry as a flat record.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssignmentRecord {
    pub uplink_slot: u32,
    pub downlink_slot: u32,
    pub uplink_level: u32,
    pub downlink_level: u32,
    pub pair: usize,
    /// `xor` or `solo`.
    pub kind: String,
    /// Transmitting side of a `solo` entry.
    pub side: Option<String>,
}

impl From<&LevelAssignment> for AssignmentRecord {
    fn from(a: &LevelAssignment) -> Self {
        let (kind, side) = match a.kind {
            AssignmentKind::Xor => ("xor", None),
            AssignmentKind::Solo(dir) => (
                "solo",
                Some(match dir.source() {
                    Side::A => "A".to_string(),
                    Side::B => "B".to_string(),
                }),
            ),
        };
        AssignmentRecord {
            uplink_slot: a.uplink_slot,
            downlink_slot: a.downlink_slot,
            uplink_level: a.uplink_level,
            downlink_level: a.downlink_level,
            pair: a.pair,
            kind: kind.to_string(),
            side,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimulationRecord {
    pub payloads: usize,
    pub decoded: usize,
    pub bit_errors: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub config: GapConfig,
    pub trials: usize,
    pub passed: usize,
    pub pass_rate: f64,
    pub max_alpha_slack: Option<f64>,
    pub max_lemma1_gap: Option<f64>,
    pub failures_by_stage: BTreeMap<String, usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetSweepSummary {
    pub config: CompletenessConfig,
    pub trials: usize,
    pub passed: usize,
    pub tuples: usize,
    pub decoded: usize,
    pub induction_steps: usize,
    pub failures: Vec<String>,
}

/// Hex SHA-256 over length-prefixed parts.
pub fn digest<'a>(parts: impl IntoIterator<Item = &'a [u8]>) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}
