//! Chunked assignment: each pair's XOR bits and one-way bits occupy
//! contiguous runs of levels on both sides of the relay.
//!
//! Uplink and downlink are packed independently. A chunk may only use levels
//! up to its cap (the weaker gain that must reach it), so packing is
//! scheduling jobs with deadlines on a line: placing chunks in order of
//! increasing cap, starting from level 1, fits whenever any placement of the
//! individual bits fits. The divide-and-conquer induction shows such a
//! placement exists for every rate tuple in the region.

use crate::cutset::{in_det_cutset, DuplexMode, RateTuple};
use crate::detnet::{DetNetwork, Direction};

use super::{AssignmentKind, LevelAssignment, LevelStrategy, Schedule, ScheduleError};

struct Chunk {
    pair: usize,
    kind: AssignmentKind,
    size: u32,
    up_cap: u32,
    down_cap: u32,
}

/// First level of each chunk when packed from level 1 in order of cap.
fn pack(chunks: &[Chunk], cap: impl Fn(&Chunk) -> u32) -> Result<Vec<u32>, ScheduleError> {
    let mut order: Vec<usize> = (0..chunks.len()).collect();
    order.sort_by_key(|&i| (cap(&chunks[i]), i));
    let mut start = vec![0; chunks.len()];
    let mut next = 1;
    for i in order {
        let c = &chunks[i];
        if next + c.size - 1 > cap(c) {
            return Err(ScheduleError::ChunkDoesNotFit {
                pair: c.pair,
                cap: cap(c),
            });
        }
        start[i] = next;
        next += c.size;
    }
    Ok(start)
}

/// Single-slot schedule with contiguous per-(pair, kind) level runs.
pub fn chunk_schedule(net: &DetNetwork, rates: &RateTuple) -> Result<Schedule, ScheduleError> {
    rates.check_arity(net)?;
    let ints = rates.to_integers().ok_or(ScheduleError::NonIntegral)?;
    let m = in_det_cutset(net, rates, DuplexMode::Full)?;
    if !m.is_member() {
        return Err(ScheduleError::NotInRegion {
            violated: m.violated,
        });
    }

    let mut chunks = Vec::new();
    for (pair, g) in net.pairs().iter().enumerate() {
        let (ra, rb) = (ints[2 * pair], ints[2 * pair + 1]);
        let both = ra.min(rb) as u32;
        if both > 0 {
            chunks.push(Chunk {
                pair,
                kind: AssignmentKind::Xor,
                size: both,
                up_cap: g.a_up.min(g.b_up),
                down_cap: g.a_down.min(g.b_down),
            });
        }
        let dir = if ra >= rb {
            Direction::AtoB
        } else {
            Direction::BtoA
        };
        let rest = ra.abs_diff(rb) as u32;
        if rest > 0 {
            chunks.push(Chunk {
                pair,
                kind: AssignmentKind::Solo(dir),
                size: rest,
                up_cap: g.up(dir.source()),
                down_cap: g.down(dir.destination()),
            });
        }
    }

    let up = pack(&chunks, |c| c.up_cap)?;
    let down = pack(&chunks, |c| c.down_cap)?;
    let (up, down) = (&up, &down);
    let assignments = chunks
        .iter()
        .enumerate()
        .flat_map(|(i, c)| {
            (0..c.size).map(move |j| LevelAssignment::new(c.pair, c.kind, up[i] + j, down[i] + j))
        })
        .collect();
    Ok(Schedule::single_slot(assignments))
}

/// Chunked assignment as a registered strategy.
#[derive(Debug, Default, Clone, Copy)]
pub struct Chunked;

impl LevelStrategy for Chunked {
    fn name(&self) -> &'static str {
        "chunked"
    }

    fn summary(&self) -> &'static str {
        "contiguous level runs per pair and kind"
    }

    fn schedule(&self, net: &DetNetwork, rates: &RateTuple) -> Result<Schedule, ScheduleError> {
        chunk_schedule(net, rates)
    }
}
