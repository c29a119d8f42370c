//! Time expansion: fractional rates and half-duplex relaying.
//!
//! `Q` uses of a network behave like one use of the network with every gain
//! multiplied by `Q`: bit `j` of slot `i` becomes expanded bit `(j-1)Q + i + 1`.
//! A schedule for `Q·R` on the expanded network is therefore a `Q`-slot
//! schedule for `R` on the original one, with expanded level `l` mapped to
//! slot `(l-1) mod Q` and level `ceil(l/Q)`.
//!
//! In half duplex with listen fraction `Δ`, the relay listens for `QΔ` slots
//! and transmits for the remaining `Q(1-Δ)`, so uplink gains are expanded by
//! `QΔ` and downlink gains by `Q(1-Δ)`.

use num_integer::Integer;
use num_rational::Rational64;

use crate::cutset::{in_det_cutset, DuplexMode, RateTuple};
use crate::detnet::DetNetwork;

use super::{DivideAndConquer, LevelAssignment, LevelStrategy, Schedule, ScheduleError, SlotRole};

/// The network seen over `q` slots.
pub fn expand_time(net: &DetNetwork, q: u32) -> DetNetwork {
    net.map_gains(|n| n * q, |n| n * q)
}

fn common_denominator<'a>(
    values: impl IntoIterator<Item = &'a Rational64>,
) -> Result<i64, ScheduleError> {
    values.into_iter().try_fold(1i64, |acc, r| {
        let l = acc.lcm(r.denom());
        if l > i64::from(u32::MAX) {
            Err(ScheduleError::Overflow)
        } else {
            Ok(l)
        }
    })
}

fn scale_gains(net: &DetNetwork, up: u32, down: u32) -> Result<DetNetwork, ScheduleError> {
    let fits = |g: Vec<u32>, k: u32| g.into_iter().all(|n| n.checked_mul(k).is_some());
    if !fits(net.uplink_gains(), up) || !fits(net.downlink_gains(), down) {
        return Err(ScheduleError::Overflow);
    }
    Ok(net.map_gains(|n| n * up, |n| n * down))
}

fn check_member(
    net: &DetNetwork,
    rates: &RateTuple,
    mode: DuplexMode,
) -> Result<(), ScheduleError> {
    rates.check_arity(net)?;
    let m = in_det_cutset(net, rates, mode)?;
    if !m.is_member() {
        return Err(ScheduleError::NotInRegion {
            violated: m.violated,
        });
    }
    Ok(())
}

/// Level `l` of a `k`-fold expansion as `(slot offset, level)`.
fn unfold(l: u32, k: u32) -> (u32, u32) {
    ((l - 1) % k, l.div_ceil(k))
}

/// How expanded levels map back onto slots.
struct Fold {
    /// Uplink and downlink expansion factors.
    up: u32,
    down: u32,
    /// First slot used by the downlink.
    down_offset: u32,
    slots: Vec<SlotRole>,
}

/// Runs `strategy` on the expanded network and folds the result back.
fn expand_and_fold(
    strategy: &dyn LevelStrategy,
    net: &DetNetwork,
    rates: &RateTuple,
    fold: Fold,
) -> Result<Schedule, ScheduleError> {
    let Fold {
        up,
        down,
        down_offset,
        slots,
    } = fold;
    let expanded = scale_gains(net, up, down)?;
    let scaled = rates.scale(slots.len() as i64);
    let inner = strategy.schedule(&expanded, &scaled)?;
    let assignments = inner
        .assignments()
        .iter()
        .map(|a| {
            let (us, ul) = unfold(a.uplink_level, up);
            let (ds, dl) = unfold(a.downlink_level, down);
            LevelAssignment {
                uplink_slot: us,
                downlink_slot: down_offset + ds,
                uplink_level: ul,
                downlink_level: dl,
                pair: a.pair,
                kind: a.kind,
            }
        })
        .collect();
    let sched = Schedule::new(slots, assignments);
    let wanted = scaled.to_integers().ok_or(ScheduleError::NonIntegral)?;
    if sched.bit_counts(net.num_pairs()) != wanted {
        return Err(ScheduleError::InvalidAssignment {
            index: 0,
            reason: "delivered bit counts differ from the requested rates".into(),
        });
    }
    Ok(sched)
}

/// Full-duplex schedule over `Q` slots, `Q` the least common denominator.
pub fn schedule_fractional_with(
    strategy: &dyn LevelStrategy,
    net: &DetNetwork,
    rates: &RateTuple,
) -> Result<Schedule, ScheduleError> {
    check_member(net, rates, DuplexMode::Full)?;
    let q = common_denominator(rates.as_slice())?;
    let k = q as u32;
    let fold = Fold {
        up: k,
        down: k,
        down_offset: 0,
        slots: vec![SlotRole::Duplex; k as usize],
    };
    expand_and_fold(strategy, net, rates, fold)
}

/// Half-duplex schedule: `QΔ` listen slots followed by `Q(1-Δ)` transmit slots.
pub fn schedule_half_duplex_with(
    strategy: &dyn LevelStrategy,
    net: &DetNetwork,
    listen: Rational64,
    rates: &RateTuple,
) -> Result<Schedule, ScheduleError> {
    let mode = DuplexMode::half(listen)?;
    check_member(net, rates, mode)?;
    let q = common_denominator(rates.as_slice().iter().chain([&listen]))?;
    let up = (listen * q).to_integer() as u32;
    let down = q as u32 - up;
    let mut slots = vec![SlotRole::Listen; up as usize];
    slots.extend(std::iter::repeat_n(SlotRole::Transmit, down as usize));
    let fold = Fold {
        up,
        down,
        down_offset: up,
        slots,
    };
    expand_and_fold(strategy, net, rates, fold)
}

pub fn schedule_fractional(net: &DetNetwork, rates: &RateTuple) -> Result<Schedule, ScheduleError> {
    schedule_fractional_with(&DivideAndConquer, net, rates)
}

pub fn schedule_half_duplex(
    net: &DetNetwork,
    listen: Rational64,
    rates: &RateTuple,
) -> Result<Schedule, ScheduleError> {
    schedule_half_duplex_with(&DivideAndConquer, net, listen, rates)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unfold_interleaves() {
        assert_eq!(unfold(1, 2), (0, 1));
        assert_eq!(unfold(2, 2), (1, 1));
        assert_eq!(unfold(3, 2), (0, 2));
        assert_eq!(unfold(5, 1), (0, 5));
    }

    #[test]
    fn lcm_of_denominators() {
        let r: RateTuple = "1/2,1/3,0,1".parse().unwrap();
        assert_eq!(common_denominator(r.as_slice()).unwrap(), 6);
    }
}
