//! Divide-and-conquer level assignment by induction on the sum rate.
//!
//! Each step serves one bit and removes one uplink and one downlink level:
//!
//! * if some pair wants traffic both ways, it gets the highest uplink level
//!   both users reach and the lowest downlink level both users hear, carrying
//!   the XOR of their bits;
//! * otherwise the first remaining directed session gets the top of its
//!   source's uplink range and the bottom of its destination's downlink range.
//!
//! Removing level `l` drops every gain `>= l` by one, which renumbers the
//! levels above it. Removed levels are tracked in original coordinates so the
//! final schedule refers to the original network.

use crate::cutset::{in_det_cutset, DuplexMode, RateTuple};
use crate::detnet::{DetNetwork, Direction};

use super::{AssignmentKind, LevelAssignment, LevelStrategy, Schedule, ScheduleError};

/// A network with one uplink and one downlink level removed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Reduction {
    pub net: DetNetwork,
    /// Removed uplink level (bottom-up, current coordinates).
    pub l_u: u32,
    /// Removed downlink level (top-down, current coordinates).
    pub l_d: u32,
}

fn remove_levels(net: &DetNetwork, l_u: u32, l_d: u32) -> DetNetwork {
    let drop = |l: u32| move |n: u32| if n >= l { n - 1 } else { n };
    net.map_gains(drop(l_u), drop(l_d))
}

/// Serves one XOR bit of `pair`.
pub fn reduce_pair_bidirectional(
    net: &DetNetwork,
    pair: usize,
) -> Result<Reduction, ScheduleError> {
    let g = *net.pair(pair)?;
    if g.a_up == 0 || g.b_up == 0 || g.a_down == 0 || g.b_down == 0 {
        return Err(ScheduleError::MissingLink { pair });
    }
    let l_u = g.a_up.min(g.b_up);
    let l_d = g.a_down.min(g.b_down);
    Ok(Reduction {
        net: remove_levels(net, l_u, l_d),
        l_u,
        l_d,
    })
}

/// Serves one bit of `pair` in direction `dir`.
pub fn reduce_pair_oneway(
    net: &DetNetwork,
    pair: usize,
    dir: Direction,
) -> Result<Reduction, ScheduleError> {
    let g = *net.pair(pair)?;
    let l_u = g.up(dir.source());
    let l_d = g.down(dir.destination());
    if l_u == 0 || l_d == 0 {
        return Err(ScheduleError::MissingLink { pair });
    }
    Ok(Reduction {
        net: remove_levels(net, l_u, l_d),
        l_u,
        l_d,
    })
}

/// Original level numbers still present, ascending; current level `k` is the
/// `k`-th entry.
#[derive(Debug, Clone)]
struct LevelMap(Vec<u32>);

impl LevelMap {
    fn new(depth: usize) -> Self {
        LevelMap((1..=depth as u32).collect())
    }

    fn take(&mut self, current: u32) -> u32 {
        self.0.remove(current as usize - 1)
    }
}

/// One step of the induction.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InductionStep {
    pub assignment: LevelAssignment,
    /// Levels removed, in the coordinates of the network before this step.
    pub l_u: u32,
    pub l_d: u32,
    /// Network and rates left to serve after this step.
    pub net: DetNetwork,
    pub rates: Vec<u64>,
}

fn next_move(rates: &[u64]) -> Option<(usize, AssignmentKind)> {
    let pairs = rates.len() / 2;
    if let Some(p) = (0..pairs).find(|&p| rates[2 * p] > 0 && rates[2 * p + 1] > 0) {
        return Some((p, AssignmentKind::Xor));
    }
    let i = rates.iter().position(|&r| r > 0)?;
    let dir = if i % 2 == 0 {
        Direction::AtoB
    } else {
        Direction::BtoA
    };
    Some((i / 2, AssignmentKind::Solo(dir)))
}

fn integral_rates(net: &DetNetwork, rates: &RateTuple) -> Result<Vec<u64>, ScheduleError> {
    rates.check_arity(net)?;
    let ints = rates.to_integers().ok_or(ScheduleError::NonIntegral)?;
    let m = in_det_cutset(net, rates, DuplexMode::Full)?;
    if !m.is_member() {
        return Err(ScheduleError::NotInRegion {
            violated: m.violated,
        });
    }
    Ok(ints)
}

/// Runs the induction and returns every step. The reduced rates are checked
/// against the reduced region after each step.
pub fn divide_and_conquer_trace(
    net: &DetNetwork,
    rates: &RateTuple,
) -> Result<Vec<InductionStep>, ScheduleError> {
    let mut rates = integral_rates(net, rates)?;
    let mut net = net.clone();
    let mut up_map = LevelMap::new(net.q_up());
    let mut down_map = LevelMap::new(net.q_down());
    let mut steps = Vec::new();

    while let Some((pair, kind)) = next_move(&rates) {
        let red = match kind {
            AssignmentKind::Xor => reduce_pair_bidirectional(&net, pair)?,
            AssignmentKind::Solo(d) => reduce_pair_oneway(&net, pair, d)?,
        };
        for d in kind.serves() {
            rates[d.rate_index(pair)] -= 1;
        }
        let check = in_det_cutset(
            &red.net,
            &RateTuple::from_integers(&rates),
            DuplexMode::Full,
        )?;
        if !check.is_member() {
            return Err(ScheduleError::InductionInvariant {
                step: steps.len(),
                violated: check.violated,
            });
        }
        let assignment =
            LevelAssignment::new(pair, kind, up_map.take(red.l_u), down_map.take(red.l_d));
        net = red.net;
        steps.push(InductionStep {
            assignment,
            l_u: red.l_u,
            l_d: red.l_d,
            net: net.clone(),
            rates: rates.clone(),
        });
    }
    Ok(steps)
}

/// Single-slot schedule for integral rates inside the full-duplex region.
pub fn divide_and_conquer(net: &DetNetwork, rates: &RateTuple) -> Result<Schedule, ScheduleError> {
    let steps = divide_and_conquer_trace(net, rates)?;
    Ok(Schedule::single_slot(
        steps.into_iter().map(|s| s.assignment).collect(),
    ))
}

/// The induction as a registered strategy.
#[derive(Debug, Default, Clone, Copy)]
pub struct DivideAndConquer;

impl LevelStrategy for DivideAndConquer {
    fn name(&self) -> &'static str {
        "divide-and-conquer"
    }

    fn summary(&self) -> &'static str {
        "one bit per induction step, XOR sessions first"
    }

    fn schedule(&self, net: &DetNetwork, rates: &RateTuple) -> Result<Schedule, ScheduleError> {
        divide_and_conquer(net, rates)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn level_map_renumbers() {
        let mut m = LevelMap::new(4);
        assert_eq!(m.take(2), 2);
        // Former level 3 is now level 2.
        assert_eq!(m.take(2), 3);
        assert_eq!(m.take(2), 4);
        assert_eq!(m.take(1), 1);
    }

    #[test]
    fn xor_comes_before_solo() {
        assert_eq!(next_move(&[0, 1, 2, 2]), Some((1, AssignmentKind::Xor)));
        assert_eq!(
            next_move(&[0, 1, 2, 0]),
            Some((0, AssignmentKind::Solo(Direction::BtoA)))
        );
        assert_eq!(next_move(&[0, 0, 0, 0]), None);
    }

    #[test]
    fn oneway_needs_both_links() {
        let net = DetNetwork::from_flat(&[2, 0], &[3, 0]).unwrap();
        assert!(matches!(
            reduce_pair_oneway(&net, 0, Direction::AtoB),
            Err(ScheduleError::MissingLink { pair: 0 })
        ));
        assert!(reduce_pair_oneway(&net, 0, Direction::BtoA).is_err());
    }
}
