//! Downlink power allocation and decoding checks.
//!
//! The relay superposes four Gaussian codewords: `x1` carries the rest of
//! `A1`'s message (rate `r_A1 - r_B1`) to `B1`, `x2` the function of both pair 1
//! lattice messages (rate `r_B1`) to both users of pair 1, and `x3`, `x4`
//! likewise for pair 2. A node knows its own contribution, so `A_i` never sees
//! `x_(2i-1)` as interference.
//!
//! Allocation works with pairs ordered so that `|h_RB1| >= |h_RB2|`. Each
//! receiver decodes the streams it needs by successive cancellation in a
//! case-dependent order, treating the streams not yet decoded as noise. A
//! stream's power is the largest any of its receivers needs, computed in an
//! order where every interferer is already known.

use serde::{Deserialize, Serialize};

use super::normalize::downlink_case;
use super::{
    c, first_power_failure, require, Case, GaussError, GaussNetwork, Inequality, PowerCheck,
    RateCheck, NODE_NAMES,
};

const A1: usize = 0;
const B1: usize = 1;
const A2: usize = 2;
const B2: usize = 3;

/// One decoding requirement: `stream` at `receiver` with `interference`
/// still undecoded. Labels are in the ordered frame.
struct Requirement {
    stream: usize,
    receiver: usize,
    interference: &'static [usize],
}

const fn req(stream: usize, receiver: usize, interference: &'static [usize]) -> Requirement {
    Requirement {
        stream,
        receiver,
        interference,
    }
}

/// Requirements in the order the powers are fixed.
fn requirements(case: Case) -> &'static [Requirement] {
    const CASE_I: &[Requirement] = &[
        req(0, B1, &[]),
        req(1, B1, &[0]),
        req(1, A1, &[]),
        req(2, B2, &[0, 1]),
        req(3, B2, &[0, 1, 2]),
        req(3, A2, &[0, 1]),
    ];
    const CASE_II: &[Requirement] = &[
        req(0, B1, &[]),
        req(2, B2, &[0]),
        req(1, A1, &[2]),
        req(1, B2, &[0, 2]),
        req(3, B2, &[0, 1, 2]),
        req(3, A1, &[1, 2]),
        req(3, A2, &[0, 1]),
    ];
    const CASE_III: &[Requirement] = &[
        req(0, B1, &[]),
        req(2, B2, &[0]),
        req(3, A2, &[0]),
        req(3, B2, &[0, 2]),
        req(1, B2, &[0, 2, 3]),
        req(1, A1, &[2, 3]),
        req(1, A2, &[0, 3]),
    ];
    match case {
        Case::I => CASE_I,
        Case::II => CASE_II,
        Case::III => CASE_III,
    }
}

/// Relay powers, as fractions of `P`, and stream rates, indexed by stream in
/// the labels of the input network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DownlinkAllocation {
    pub case: Case,
    /// Whether the pairs were exchanged to order `|h_RB|`.
    pub pairs_swapped: bool,
    pub power: [f64; 4],
    pub rate: [f64; 4],
}

impl DownlinkAllocation {
    pub fn power_checks(&self) -> Vec<PowerCheck> {
        vec![PowerCheck {
            name: "relay total power".to_string(),
            value: self.power.iter().sum(),
            bound: 1.0,
        }]
    }
}

fn frame(
    net: &GaussNetwork,
    r: [f64; 4],
) -> Result<(Case, bool, GaussNetwork, [f64; 4]), GaussError> {
    if r[0] < r[1] || r[2] < r[3] {
        return Err(GaussError::Unordered(format!(
            "rates {r:?} need r_A >= r_B per pair"
        )));
    }
    let d = net.downlink();
    if d[0] > d[1] || d[2] > d[3] {
        return Err(GaussError::Unordered(format!(
            "downlink {d:?} needs |h_RA| <= |h_RB| per pair"
        )));
    }
    let (case, swap) = downlink_case(net)?;
    Ok(if swap {
        (case, swap, net.swap_pairs(), super::swap_pairs(r))
    } else {
        (case, swap, *net, r)
    })
}

/// Stream rates for a target tuple: Gaussian remainder, then lattice rate.
fn stream_rates(r: [f64; 4]) -> [f64; 4] {
    [r[0] - r[1], r[1], r[2] - r[3], r[3]]
}

/// The rate conditions under which the allocation is claimed valid.
pub fn downlink_preconditions(net: &GaussNetwork, r: [f64; 4]) -> Vec<Inequality> {
    let mut out = Vec::new();
    for k in 0..4 {
        out.push(Inequality {
            name: format!("r_{} <= C(snr at {}) - 2", NODE_NAMES[k], NODE_NAMES[k ^ 1]),
            rate: r[k],
            bound: c(net.snr_down(k ^ 1)) - 2.0,
        });
    }
    for (k, l) in [(0, 2), (0, 3), (1, 3), (1, 2)] {
        out.push(Inequality {
            name: format!(
                "r_{} + r_{} <= C(max snr) - 3",
                NODE_NAMES[k], NODE_NAMES[l]
            ),
            rate: r[k] + r[l],
            bound: c(net.snr_down(k ^ 1).max(net.snr_down(l ^ 1))) - 3.0,
        });
    }
    out
}

/// Closed-form powers without the budget assertion.
pub fn downlink_powers(net: &GaussNetwork, r: [f64; 4]) -> Result<DownlinkAllocation, GaussError> {
    net.check_side_condition()?;
    let (case, swap, ordered, r_ordered) = frame(net, r)?;
    require("downlink", downlink_preconditions(net, r))?;

    let rate = stream_rates(r_ordered);
    let mut power = [0.0f64; 4];
    for q in requirements(case) {
        let y = ordered.snr_down(q.receiver);
        let noise: f64 = q.interference.iter().map(|&j| power[j]).sum();
        let needed = (rate[q.stream].exp2() - 1.0) * (1.0 + y * noise) / y;
        power[q.stream] = power[q.stream].max(needed);
    }
    let (power, rate) = if swap {
        (super::swap_pairs(power), super::swap_pairs(rate))
    } else {
        (power, rate)
    };
    Ok(DownlinkAllocation {
        case,
        pairs_swapped: swap,
        power,
        rate,
    })
}

/// Closed-form powers, failing if the relay budget is exceeded.
pub fn downlink_allocate(
    net: &GaussNetwork,
    r: [f64; 4],
) -> Result<DownlinkAllocation, GaussError> {
    let alloc = downlink_powers(net, r)?;
    if let Some(f) = first_power_failure(&alloc.power_checks()) {
        return Err(GaussError::PowerBudget {
            stage: "downlink",
            check: f.name.clone(),
            excess: f.excess(),
        });
    }
    Ok(alloc)
}

/// Evaluates every decoding inequality of the allocation's case.
pub fn downlink_rate_check(
    net: &GaussNetwork,
    alloc: &DownlinkAllocation,
) -> Result<RateCheck, GaussError> {
    let (case, swap) = downlink_case(net)?;
    if case != alloc.case || swap != alloc.pairs_swapped {
        return Err(GaussError::CaseMismatch {
            expected: alloc.case,
            found: case,
        });
    }
    let relabel = |j: usize| if swap { j ^ 2 } else { j };
    let inequalities = requirements(case)
        .iter()
        .map(|q| {
            let (stream, receiver) = (relabel(q.stream), relabel(q.receiver));
            let y = net.snr_down(receiver);
            let noise: f64 = q
                .interference
                .iter()
                .map(|&j| alloc.power[relabel(j)])
                .sum();
            Inequality {
                name: format!("x{} at {}", stream + 1, NODE_NAMES[receiver]),
                rate: alloc.rate[stream],
                bound: c(y * alloc.power[stream] / (1.0 + y * noise)),
            }
        })
        .collect();
    Ok(RateCheck { case, inequalities })
}
