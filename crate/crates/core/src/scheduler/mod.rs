//! Level assignment schedules for deterministic relay networks.
//!
//! A schedule lists which relay levels carry which bits. In an `Xor` entry both
//! users of a pair transmit on the same uplink level, the relay forwards the
//! sum on one downlink level, and each side strips its own bit. In a `Solo`
//! entry one side transmits and the other reads the bit directly.
//!
//! Schedules span `Q` slots. In full duplex every slot is used in both
//! directions; in half duplex the first slots are listen slots and the rest
//! transmit slots, so an entry carries separate uplink and downlink slots.
//! Within a slot the uplink-to-downlink level mapping is the relay
//! permutation.
//!
//! Level numbering follows the conventions in [`crate::detnet`].

mod chunk;
mod expand;
mod induction;
mod simulate;
mod strategy;
mod sweep;

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cutset::{CutsetError, ViolatedCut};
use crate::detnet::{DetError, DetNetwork, Direction};

pub use chunk::{chunk_schedule, Chunked};
pub use expand::{
    expand_time, schedule_fractional, schedule_fractional_with, schedule_half_duplex,
    schedule_half_duplex_with,
};
pub use induction::{
    divide_and_conquer, divide_and_conquer_trace, reduce_pair_bidirectional, reduce_pair_oneway,
    DivideAndConquer, InductionStep, Reduction,
};
pub use simulate::{simulate_schedule, Messages, SimulationOutcome};
pub use strategy::{LevelStrategy, StrategyRegistry};
pub use sweep::{
    completeness_sweep, completeness_trial, sample_det_network, CompletenessConfig,
    CompletenessRecord,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScheduleError {
    #[error("rate tuple is outside the cut-set region ({} violated cuts)", .violated.len())]
    NotInRegion { violated: Vec<ViolatedCut> },
    #[error("rates must be integral for a single-slot schedule")]
    NonIntegral,
    #[error("pair {pair} lacks a link needed for this reduction")]
    MissingLink { pair: usize },
    #[error("step {step}: reduced rates left the reduced region")]
    InductionInvariant {
        step: usize,
        violated: Vec<ViolatedCut>,
    },
    #[error("chunk of pair {pair} does not fit below level {cap}")]
    ChunkDoesNotFit { pair: usize, cap: u32 },
    #[error("assignment {index} is invalid: {reason}")]
    InvalidAssignment { index: usize, reason: String },
    #[error("message {index} has {found} bits, schedule carries {expected}")]
    MessageLength {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("expected {expected} messages, got {found}")]
    MessageCount { expected: usize, found: usize },
    #[error("unknown strategy {0:?}")]
    UnknownStrategy(String),
    #[error("time expansion factor overflows")]
    Overflow,
    #[error(transparent)]
    Cutset(#[from] CutsetError),
    #[error(transparent)]
    Det(#[from] DetError),
}

/// What a level carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssignmentKind {
    /// Both users transmit; the relay forwards their XOR.
    Xor,
    /// Only the source of the direction transmits.
    Solo(Direction),
}

impl AssignmentKind {
    /// Directions that receive one bit from this assignment.
    pub fn serves(self) -> &'static [Direction] {
        match self {
            AssignmentKind::Xor => &Direction::BOTH,
            AssignmentKind::Solo(Direction::AtoB) => &[Direction::AtoB],
            AssignmentKind::Solo(Direction::BtoA) => &[Direction::BtoA],
        }
    }
}

/// One relayed bit (or XOR of two bits).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct LevelAssignment {
    pub uplink_slot: u32,
    pub downlink_slot: u32,
    /// Bottom-up relay receive level.
    pub uplink_level: u32,
    /// Top-down relay transmit level.
    pub downlink_level: u32,
    pub pair: usize,
    pub kind: AssignmentKind,
}

impl LevelAssignment {
    /// A single-slot assignment.
    pub fn new(pair: usize, kind: AssignmentKind, uplink_level: u32, downlink_level: u32) -> Self {
        LevelAssignment {
            uplink_slot: 0,
            downlink_slot: 0,
            uplink_level,
            downlink_level,
            pair,
            kind,
        }
    }
}

/// How the relay uses a slot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SlotRole {
    Duplex,
    Listen,
    Transmit,
}

impl SlotRole {
    fn receives(self) -> bool {
        matches!(self, SlotRole::Duplex | SlotRole::Listen)
    }

    fn transmits(self) -> bool {
        matches!(self, SlotRole::Duplex | SlotRole::Transmit)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Schedule {
    slots: Vec<SlotRole>,
    assignments: Vec<LevelAssignment>,
}

impl Schedule {
    pub fn new(slots: Vec<SlotRole>, assignments: Vec<LevelAssignment>) -> Self {
        Schedule { slots, assignments }
    }

    /// A one-slot full-duplex schedule.
    pub fn single_slot(assignments: Vec<LevelAssignment>) -> Self {
        Schedule::new(vec![SlotRole::Duplex], assignments)
    }

    pub fn slots(&self) -> &[SlotRole] {
        &self.slots
    }

    pub fn num_slots(&self) -> usize {
        self.slots.len()
    }

    pub fn count_slots(&self, role: SlotRole) -> usize {
        self.slots.iter().filter(|&&r| r == role).count()
    }

    pub fn assignments(&self) -> &[LevelAssignment] {
        &self.assignments
    }

    /// Bits delivered per direction, indexed like a rate tuple.
    pub fn bit_counts(&self, pairs: usize) -> Vec<u64> {
        let mut counts = vec![0; 2 * pairs];
        for a in &self.assignments {
            for d in a.kind.serves() {
                counts[d.rate_index(a.pair)] += 1;
            }
        }
        counts
    }

    /// Checks level ranges, slot roles and orthogonality against `net`.
    pub fn validate(&self, net: &DetNetwork) -> Result<(), ScheduleError> {
        let mut up_used = HashSet::new();
        let mut down_used = HashSet::new();
        for (index, a) in self.assignments.iter().enumerate() {
            let bad = |reason: String| Err(ScheduleError::InvalidAssignment { index, reason });
            let Ok(g) = net.pair(a.pair) else {
                return bad(format!("pair {} does not exist", a.pair));
            };
            match self.slots.get(a.uplink_slot as usize) {
                Some(role) if role.receives() => {}
                _ => return bad(format!("relay does not listen in slot {}", a.uplink_slot)),
            }
            match self.slots.get(a.downlink_slot as usize) {
                Some(role) if role.transmits() => {}
                _ => {
                    return bad(format!(
                        "relay does not transmit in slot {}",
                        a.downlink_slot
                    ))
                }
            }
            let (up_cap, down_cap) = match a.kind {
                AssignmentKind::Xor => (g.a_up.min(g.b_up), g.a_down.min(g.b_down)),
                AssignmentKind::Solo(d) => (g.up(d.source()), g.down(d.destination())),
            };
            if a.uplink_level == 0 || a.uplink_level > up_cap {
                return bad(format!(
                    "uplink level {} outside 1..={up_cap}",
                    a.uplink_level
                ));
            }
            if a.downlink_level == 0 || a.downlink_level > down_cap {
                return bad(format!(
                    "downlink level {} outside 1..={down_cap}",
                    a.downlink_level
                ));
            }
            if !up_used.insert((a.uplink_slot, a.uplink_level)) {
                return bad(format!(
                    "uplink level {} reused in slot {}",
                    a.uplink_level, a.uplink_slot
                ));
            }
            if !down_used.insert((a.downlink_slot, a.downlink_level)) {
                return bad(format!(
                    "downlink level {} reused in slot {}",
                    a.downlink_level, a.downlink_slot
                ));
            }
        }
        Ok(())
    }
}
