//! Cut-set and restricted cut-set regions of the two-pair network.
//!
//! Both regions have the same eight constraint families: one per directed
//! rate and one per pair of directed rates from different pairs. Each bound is
//! the smaller of an uplink term (the sources into the relay) and a downlink
//! term (the relay into the destinations). The restricted region replaces the
//! coherent uplink sum `(|h| + |h|)^2` by `|h|^2 + |h|^2` and the downlink sum
//! of SNRs by their maximum, which costs at most one bit per constraint.

use serde::{Deserialize, Serialize};

use super::{c, GaussNetwork, GaussRateTuple, NODE_NAMES, TOLERANCE};

/// Which of the two outer bounds to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoundKind {
    General,
    Restricted,
}

/// A set of source nodes whose rates are summed; destinations are their
/// partners.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct ConstraintFamily {
    pub sources: &'static [usize],
}

impl ConstraintFamily {
    pub const ALL: [ConstraintFamily; 8] = [
        ConstraintFamily { sources: &[0] },
        ConstraintFamily { sources: &[1] },
        ConstraintFamily { sources: &[2] },
        ConstraintFamily { sources: &[3] },
        ConstraintFamily { sources: &[0, 2] },
        ConstraintFamily { sources: &[1, 3] },
        ConstraintFamily { sources: &[0, 3] },
        ConstraintFamily { sources: &[1, 2] },
    ];

    pub fn name(&self) -> String {
        self.sources
            .iter()
            .map(|&k| NODE_NAMES[k])
            .collect::<Vec<_>>()
            .join("+")
    }

    pub fn load(&self, rates: &GaussRateTuple) -> f64 {
        self.sources.iter().map(|&k| rates.get(k)).sum()
    }

    /// The uplink and downlink terms of the bound.
    pub fn terms(&self, net: &GaussNetwork, kind: BoundKind) -> (f64, f64) {
        let p = net.power();
        let (up, down) = (net.uplink(), net.downlink());
        match *self.sources {
            [k] => (c(net.snr_up(k)), c(net.snr_down(k ^ 1))),
            [k, l] => match kind {
                BoundKind::General => {
                    let amp = up[k] + up[l];
                    (
                        c(amp * amp * p),
                        c(net.snr_down(k ^ 1) + net.snr_down(l ^ 1)),
                    )
                }
                BoundKind::Restricted => {
                    let strongest = down[k ^ 1].max(down[l ^ 1]);
                    (
                        c(net.snr_up(k) + net.snr_up(l)),
                        c(strongest * strongest * p),
                    )
                }
            },
            _ => unreachable!("families have one or two sources"),
        }
    }

    pub fn bound(&self, net: &GaussNetwork, kind: BoundKind) -> f64 {
        let (up, down) = self.terms(net, kind);
        up.min(down)
    }
}

/// The eight families with their bounds.
pub fn cutset_constraints(net: &GaussNetwork, kind: BoundKind) -> [(ConstraintFamily, f64); 8] {
    ConstraintFamily::ALL.map(|f| (f, f.bound(net, kind)))
}

/// One constraint evaluated at a rate tuple.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConstraintSlack {
    pub family: String,
    pub load: f64,
    pub bound: f64,
}

impl ConstraintSlack {
    pub fn slack(&self) -> f64 {
        self.bound - self.load
    }
}

/// Membership verdict with every constraint's slack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegionCheck {
    pub kind: BoundKind,
    pub constraints: Vec<ConstraintSlack>,
}

impl RegionCheck {
    pub fn is_member(&self) -> bool {
        self.constraints.iter().all(|c| c.slack() >= -TOLERANCE)
    }

    pub fn violated(&self) -> impl Iterator<Item = &ConstraintSlack> {
        self.constraints.iter().filter(|c| c.slack() < -TOLERANCE)
    }

    /// Constraints met with equality up to the tolerance.
    pub fn binding(&self) -> impl Iterator<Item = &ConstraintSlack> {
        self.constraints
            .iter()
            .filter(|c| c.slack().abs() <= TOLERANCE)
    }
}

fn check(net: &GaussNetwork, rates: &GaussRateTuple, kind: BoundKind) -> RegionCheck {
    let constraints = ConstraintFamily::ALL
        .iter()
        .map(|f| ConstraintSlack {
            family: f.name(),
            load: f.load(rates),
            bound: f.bound(net, kind),
        })
        .collect();
    RegionCheck { kind, constraints }
}

/// Membership in the cut-set region.
pub fn gauss_cutset(net: &GaussNetwork, rates: &GaussRateTuple) -> RegionCheck {
    check(net, rates, BoundKind::General)
}

/// Membership in the restricted cut-set region.
pub fn gauss_restricted_cutset(net: &GaussNetwork, rates: &GaussRateTuple) -> RegionCheck {
    check(net, rates, BoundKind::Restricted)
}

/// General minus restricted bound, per family.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Lemma1Gaps {
    pub gaps: Vec<(String, f64)>,
}

impl Lemma1Gaps {
    pub fn max(&self) -> f64 {
        self.gaps
            .iter()
            .map(|g| g.1)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn min(&self) -> f64 {
        self.gaps.iter().map(|g| g.1).fold(f64::INFINITY, f64::min)
    }

    /// Every gap lies in `[0, 1]` up to the tolerance.
    pub fn holds(&self) -> bool {
        self.min() >= -TOLERANCE && self.max() <= 1.0 + TOLERANCE
    }
}

/// How much each restricted bound gives up against the cut-set bound.
pub fn check_lemma1_gap(net: &GaussNetwork) -> Lemma1Gaps {
    let gaps = ConstraintFamily::ALL
        .iter()
        .map(|f| {
            (
                f.name(),
                f.bound(net, BoundKind::General) - f.bound(net, BoundKind::Restricted),
            )
        })
        .collect();
    Lemma1Gaps { gaps }
}
