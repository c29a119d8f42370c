//! Uplink power allocation and decoding checks.
//!
//! Each user `A_i` splits its message into a Gaussian codeword of rate
//! `r_Ai - r_Bi` and a lattice codeword of rate `r_Bi`. The lattice codewords
//! of a pair are scaled to arrive at the relay with equal power, so the relay
//! decodes their sum at the lattice rate. Decoding order depends on the case:
//!
//! * Case I: `A1` Gaussian, pair 1 lattice sum, `A2` Gaussian, pair 2 sum.
//! * Case II: both Gaussians jointly, then pair 1 sum, then pair 2 sum.
//! * Case III: both Gaussians jointly, then pair 2 sum, then pair 1 sum.
//!
//! Streams not yet decoded are treated as noise. The allocation sets every
//! power so the matching inequality holds with equality.

use serde::{Deserialize, Serialize};

use super::normalize::uplink_case;
use super::{
    c, first_power_failure, lattice_rate, require, Case, GaussError, GaussNetwork, Inequality,
    PowerCheck, RateCheck,
};

/// Uplink powers, as fractions of `P`, and the stream rates they carry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UplinkAllocation {
    pub case: Case,
    /// Gaussian codeword power of `A1`, `A2`.
    pub solo_power: [f64; 2],
    /// Lattice codeword power of `A1`, `A2`.
    pub lattice_power_a: [f64; 2],
    /// Lattice codeword power of `B1`, `B2`.
    pub lattice_power_b: [f64; 2],
    /// Gaussian codeword rate of each pair.
    pub solo_rate: [f64; 2],
    /// Lattice rate of each pair, equal to `r_Bi`.
    pub lattice_rate: [f64; 2],
}

impl UplinkAllocation {
    /// Per-node budgets and lattice alignment.
    pub fn power_checks(&self, net: &GaussNetwork) -> Vec<PowerCheck> {
        let mut checks = Vec::new();
        for i in 0..2 {
            checks.push(PowerCheck {
                name: format!("A{} total power", i + 1),
                value: self.solo_power[i] + self.lattice_power_a[i],
                bound: 1.0,
            });
            checks.push(PowerCheck {
                name: format!("B{} total power", i + 1),
                value: self.lattice_power_b[i],
                bound: 1.0,
            });
            let a = self.lattice_power_a[i] * net.snr_up(2 * i);
            let b = self.lattice_power_b[i] * net.snr_up(2 * i + 1);
            checks.push(PowerCheck {
                name: format!("pair {} lattice alignment", i + 1),
                value: (a - b).abs() / b.max(1.0),
                bound: 0.0,
            });
        }
        checks
    }
}

fn check_ordered(net: &GaussNetwork, r: [f64; 4]) -> Result<Case, GaussError> {
    if r[0] < r[1] || r[2] < r[3] {
        return Err(GaussError::Unordered(format!(
            "rates {r:?} need r_A >= r_B per pair"
        )));
    }
    uplink_case(net)
}

/// The rate conditions under which the allocation is claimed valid.
pub fn uplink_preconditions(net: &GaussNetwork, r: [f64; 4]) -> Vec<Inequality> {
    let mut out = Vec::new();
    for (k, slack) in [(0, 2.0), (1, 1.0), (2, 2.0), (3, 1.0)] {
        out.push(Inequality {
            name: format!("r_{} <= C(snr) - {slack}", super::NODE_NAMES[k]),
            rate: r[k],
            bound: c(net.snr_up(k)) - slack,
        });
    }
    for (k, l) in [(0, 2), (0, 3), (1, 3), (1, 2)] {
        out.push(Inequality {
            name: format!(
                "r_{} + r_{} <= C(snr sum) - 4",
                super::NODE_NAMES[k],
                super::NODE_NAMES[l]
            ),
            rate: r[k] + r[l],
            bound: c(net.snr_up(k) + net.snr_up(l)) - 4.0,
        });
    }
    out
}

/// Closed-form powers without the budget assertion.
///
/// `r` is the target tuple on an ordered network; see
/// [`super::reduce_orderings`].
pub fn uplink_powers(net: &GaussNetwork, r: [f64; 4]) -> Result<UplinkAllocation, GaussError> {
    let case = check_ordered(net, r)?;
    net.check_side_condition()?;
    require("uplink", uplink_preconditions(net, r))?;

    let y: Vec<f64> = (0..4).map(|k| net.snr_up(k)).collect();
    let (ya1, yb1, ya2, yb2) = (y[0], y[1], y[2], y[3]);
    let (s1, s2) = (r[0] - r[1], r[2] - r[3]);
    let (rb1, rb2) = (r[1], r[3]);
    let (b1, b2, a1, a2);
    match case {
        Case::I => {
            b2 = rb2.exp2() / yb2;
            a2 = (s2.exp2() - 1.0) * (2.0 * b2 * yb2 + 1.0) / ya2;
            b1 = rb1.exp2() * (a2 * ya2 + 2.0 * b2 * yb2 + 1.0) / yb1;
            a1 = (s1.exp2() - 1.0) * (2.0 * b1 * yb1 + a2 * ya2 + 2.0 * b2 * yb2 + 1.0) / ya1;
        }
        Case::II | Case::III => {
            if case == Case::II {
                b2 = rb2.exp2() / yb2;
                b1 = rb1.exp2() * (2.0 * b2 * yb2 + 1.0) / yb1;
            } else {
                b1 = rb1.exp2() / yb1;
                b2 = rb2.exp2() * (2.0 * b1 * yb1 + 1.0) / yb2;
            }
            let noise = 2.0 * b1 * yb1 + 2.0 * b2 * yb2 + 1.0;
            a2 = (s2.exp2() - 1.0) * noise / ya2;
            // The joint constraint may need more from A1 than its own does.
            let alone = (s1.exp2() - 1.0) * noise / ya1;
            let joint = ((s1 + s2).exp2() - 1.0) * noise / ya1 - a2 * ya2 / ya1;
            a1 = alone.max(joint);
        }
    }
    Ok(UplinkAllocation {
        case,
        solo_power: [a1, a2],
        lattice_power_a: [b1 * yb1 / ya1, b2 * yb2 / ya2],
        lattice_power_b: [b1, b2],
        solo_rate: [s1, s2],
        lattice_rate: [rb1, rb2],
    })
}

/// Closed-form powers, failing if any budget or alignment check fails.
pub fn uplink_allocate(net: &GaussNetwork, r: [f64; 4]) -> Result<UplinkAllocation, GaussError> {
    let alloc = uplink_powers(net, r)?;
    if let Some(f) = first_power_failure(&alloc.power_checks(net)) {
        return Err(GaussError::PowerBudget {
            stage: "uplink",
            check: f.name.clone(),
            excess: f.excess(),
        });
    }
    Ok(alloc)
}

/// Evaluates every decoding inequality of the allocation's case.
pub fn uplink_rate_check(
    net: &GaussNetwork,
    alloc: &UplinkAllocation,
) -> Result<RateCheck, GaussError> {
    let case = uplink_case(net)?;
    if case != alloc.case {
        return Err(GaussError::CaseMismatch {
            expected: alloc.case,
            found: case,
        });
    }
    let solo = [
        alloc.solo_power[0] * net.snr_up(0),
        alloc.solo_power[1] * net.snr_up(2),
    ];
    let b = [
        alloc.lattice_power_b[0] * net.snr_up(1),
        alloc.lattice_power_b[1] * net.snr_up(3),
    ];
    let lattice = [
        alloc.lattice_power_a[0] * net.snr_up(0) + b[0],
        alloc.lattice_power_a[1] * net.snr_up(2) + b[1],
    ];
    let ineq = |name: &str, rate: f64, bound: f64| Inequality {
        name: name.to_string(),
        rate,
        bound,
    };
    let [s1, s2] = alloc.solo_rate;
    let [l1, l2] = alloc.lattice_rate;
    let inequalities = match case {
        Case::I => vec![
            ineq(
                "A1 Gaussian",
                s1,
                c(solo[0] / (lattice[0] + solo[1] + lattice[1] + 1.0)),
            ),
            ineq(
                "pair 1 lattice",
                l1,
                lattice_rate(b[0] / (solo[1] + lattice[1] + 1.0)),
            ),
            ineq("A2 Gaussian", s2, c(solo[1] / (lattice[1] + 1.0))),
            ineq("pair 2 lattice", l2, lattice_rate(b[1])),
        ],
        Case::II | Case::III => {
            let noise = lattice[0] + lattice[1] + 1.0;
            let mut v = vec![
                ineq("A1 Gaussian", s1, c(solo[0] / noise)),
                ineq("A2 Gaussian", s2, c(solo[1] / noise)),
                ineq("Gaussian sum", s1 + s2, c((solo[0] + solo[1]) / noise)),
            ];
            if case == Case::II {
                v.push(ineq(
                    "pair 1 lattice",
                    l1,
                    lattice_rate(b[0] / (lattice[1] + 1.0)),
                ));
                v.push(ineq("pair 2 lattice", l2, lattice_rate(b[1])));
            } else {
                v.push(ineq(
                    "pair 2 lattice",
                    l2,
                    lattice_rate(b[1] / (lattice[0] + 1.0)),
                ));
                v.push(ineq("pair 1 lattice", l1, lattice_rate(b[0])));
            }
            v
        }
    };
    Ok(RateCheck { case, inequalities })
}
