//! Two-pair bidirectional relaying over Gaussian channels.
//!
//! Nodes are indexed `A1, B1, A2, B2` (0..4) throughout, so node `k` talks to
//! node `k ^ 1`. Uplink magnitude `k` is the gain from node `k` to the relay,
//! downlink magnitude `k` the gain from the relay to node `k`. Rate tuples use
//! the same order: entry `k` is the rate node `k` sends to its partner.
//!
//! Only magnitudes enter any formula. Rates are in bits per channel use:
//! Gaussian codewords achieve `log2(1 + snr)` ([`awgn_capacity`]), lattice
//! streams `log2(snr)` clamped at zero ([`lattice_rate`]).
//!
//! The scheme splits each pair's larger rate into a lattice part that aligns
//! with the partner's lattice codeword at the relay and a plain Gaussian part.
//! [`verify_theorem2`] checks that every tuple within two bits of the
//! restricted cut-set region is reached by the closed-form power allocations.

mod downlink;
mod montecarlo;
mod normalize;
mod region;
mod theorem;
mod uplink;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use downlink::{
    downlink_allocate, downlink_powers, downlink_preconditions, downlink_rate_check,
    DownlinkAllocation,
};
pub use montecarlo::{
    monte_carlo_gap, sample_network, sample_trial, trial_rng, GapConfig, GapReport, RateSampling,
    TrialRecord, NUDGE,
};
pub use normalize::{classify_case, reduce_orderings, Case, Normalized};
pub use region::{
    check_lemma1_gap, cutset_constraints, gauss_cutset, gauss_restricted_cutset, BoundKind,
    ConstraintFamily, ConstraintSlack, Lemma1Gaps, RegionCheck,
};
pub use theorem::{verify_theorem2, AchievabilityReport, Stage, StageFailure, GAP_BITS};
pub use uplink::{
    uplink_allocate, uplink_powers, uplink_preconditions, uplink_rate_check, UplinkAllocation,
};

/// Absolute slack allowed on every rate and power comparison.
pub const TOLERANCE: f64 = 1e-9;

/// Smallest received SNR `|h|^2 P` for which the closed-form allocations are
/// proved valid.
pub const MIN_SNR: f64 = 2.5;

/// Node names in index order.
pub const NODE_NAMES: [&str; 4] = ["A1", "B1", "A2", "B2"];

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GaussError {
    #[error("{what} must be positive and finite, got {value}")]
    NonPositive { what: &'static str, value: f64 },
    #[error("rate {index} must be non-negative and finite, got {value}")]
    InvalidRate { index: usize, value: f64 },
    #[error("capacity is undefined for negative SNR {0}")]
    Domain(f64),
    #[error("rate tuple is outside the restricted cut-set region ({})", .violated.join(", "))]
    NotInRegion { violated: Vec<String> },
    #[error("rate {} = {value} is below 2", NODE_NAMES[*index])]
    Hypothesis { index: usize, value: f64 },
    #[error("{link} SNR of {} is {snr}, below {MIN_SNR}", NODE_NAMES[*node])]
    LowPower {
        link: &'static str,
        node: usize,
        snr: f64,
    },
    #[error("magnitudes are not ordered as required: {0}")]
    Unordered(String),
    #[error("allocation was built for case {expected:?}, network is case {found:?}")]
    CaseMismatch { expected: Case, found: Case },
    #[error("{stage}: rates violate {inequality} by {excess}")]
    Infeasible {
        stage: &'static str,
        inequality: String,
        excess: f64,
    },
    #[error("{stage}: power check {check} exceeds its bound by {excess}")]
    PowerBudget {
        stage: &'static str,
        check: String,
        excess: f64,
    },
    #[error("invalid sampling configuration: {0}")]
    Config(String),
}

/// `log2(1 + x)`, the rate of a Gaussian codeword at SNR `x`.
pub fn awgn_capacity(x: f64) -> Result<f64, GaussError> {
    if x < 0.0 || x.is_nan() {
        return Err(GaussError::Domain(x));
    }
    Ok(c(x))
}

/// `max(log2 x, 0)`, the rate of a lattice stream at SNR `x`.
pub fn lattice_rate(x: f64) -> f64 {
    if x > 1.0 {
        x.log2()
    } else {
        0.0
    }
}

pub(crate) fn c(x: f64) -> f64 {
    x.ln_1p() / std::f64::consts::LN_2
}

/// Channel magnitudes and transmit power of a two-pair Gaussian network.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussNetwork {
    uplink: [f64; 4],
    downlink: [f64; 4],
    power: f64,
}

impl GaussNetwork {
    /// `uplink[k] = |h_{kR}|`, `downlink[k] = |h_{Rk}|` in node order.
    pub fn new(uplink: [f64; 4], downlink: [f64; 4], power: f64) -> Result<Self, GaussError> {
        let positive = |what, value: f64| {
            if value > 0.0 && value.is_finite() {
                Ok(())
            } else {
                Err(GaussError::NonPositive { what, value })
            }
        };
        for &h in &uplink {
            positive("uplink magnitude", h)?;
        }
        for &h in &downlink {
            positive("downlink magnitude", h)?;
        }
        positive("power", power)?;
        Ok(GaussNetwork {
            uplink,
            downlink,
            power,
        })
    }

    /// The same magnitudes everywhere.
    pub fn symmetric(h: f64, power: f64) -> Result<Self, GaussError> {
        Self::new([h; 4], [h; 4], power)
    }

    pub fn uplink(&self) -> [f64; 4] {
        self.uplink
    }

    pub fn downlink(&self) -> [f64; 4] {
        self.downlink
    }

    pub fn power(&self) -> f64 {
        self.power
    }

    /// Received SNR `|h_{kR}|^2 P` at the relay.
    pub fn snr_up(&self, node: usize) -> f64 {
        self.uplink[node] * self.uplink[node] * self.power
    }

    /// Received SNR `|h_{Rk}|^2 P` at node `k`.
    pub fn snr_down(&self, node: usize) -> f64 {
        self.downlink[node] * self.downlink[node] * self.power
    }

    /// Exchanges the two pairs.
    pub fn swap_pairs(&self) -> Self {
        GaussNetwork {
            uplink: swap_pairs(self.uplink),
            downlink: swap_pairs(self.downlink),
            power: self.power,
        }
    }

    /// Exchanges the A and B sides of `pair`.
    pub fn swap_sides(&self, pair: usize) -> Self {
        let mut out = *self;
        out.uplink.swap(2 * pair, 2 * pair + 1);
        out.downlink.swap(2 * pair, 2 * pair + 1);
        out
    }

    /// Fails with [`GaussError::LowPower`] if any received SNR is below
    /// [`MIN_SNR`].
    pub fn check_side_condition(&self) -> Result<(), GaussError> {
        for node in 0..4 {
            for (link, snr) in [
                ("uplink", self.snr_up(node)),
                ("downlink", self.snr_down(node)),
            ] {
                if snr < MIN_SNR {
                    return Err(GaussError::LowPower { link, node, snr });
                }
            }
        }
        Ok(())
    }
}

/// Rates `(R_A1, R_B1, R_A2, R_B2)` in bits per channel use.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GaussRateTuple([f64; 4]);

impl GaussRateTuple {
    pub fn new(rates: [f64; 4]) -> Result<Self, GaussError> {
        for (index, &value) in rates.iter().enumerate() {
            if !(value >= 0.0 && value.is_finite()) {
                return Err(GaussError::InvalidRate { index, value });
            }
        }
        Ok(GaussRateTuple(rates))
    }

    pub fn zero() -> Self {
        GaussRateTuple([0.0; 4])
    }

    pub fn rates(&self) -> [f64; 4] {
        self.0
    }

    pub fn get(&self, node: usize) -> f64 {
        self.0[node]
    }

    pub fn swap_pairs(&self) -> Self {
        GaussRateTuple(swap_pairs(self.0))
    }

    pub fn swap_sides(&self, pair: usize) -> Self {
        let mut r = self.0;
        r.swap(2 * pair, 2 * pair + 1);
        GaussRateTuple(r)
    }
}

pub(crate) fn swap_pairs(x: [f64; 4]) -> [f64; 4] {
    [x[2], x[3], x[0], x[1]]
}

/// A named inequality `rate <= bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Inequality {
    pub name: String,
    pub rate: f64,
    pub bound: f64,
}

impl Inequality {
    pub fn slack(&self) -> f64 {
        self.bound - self.rate
    }

    pub fn holds(&self) -> bool {
        self.slack() >= -TOLERANCE
    }
}

/// Every decoding inequality of one link, with its slack.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RateCheck {
    pub case: Case,
    pub inequalities: Vec<Inequality>,
}

impl RateCheck {
    pub fn passes(&self) -> bool {
        self.inequalities.iter().all(Inequality::holds)
    }

    /// The inequality with the smallest slack.
    pub fn tightest(&self) -> Option<&Inequality> {
        self.inequalities
            .iter()
            .min_by(|a, b| a.slack().total_cmp(&b.slack()))
    }

    pub fn failures(&self) -> impl Iterator<Item = &Inequality> {
        self.inequalities.iter().filter(|i| !i.holds())
    }
}

/// A power check `value <= bound`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PowerCheck {
    pub name: String,
    pub value: f64,
    pub bound: f64,
}

impl PowerCheck {
    /// Positive when the bound is exceeded.
    pub fn excess(&self) -> f64 {
        self.value - self.bound
    }

    pub fn holds(&self) -> bool {
        self.excess() <= TOLERANCE
    }
}

pub(crate) fn first_power_failure(checks: &[PowerCheck]) -> Option<&PowerCheck> {
    checks
        .iter()
        .filter(|c| !c.holds())
        .max_by(|a, b| a.excess().total_cmp(&b.excess()))
}

pub(crate) fn max_excess(checks: &[PowerCheck]) -> f64 {
    checks
        .iter()
        .map(PowerCheck::excess)
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Fails with the largest violation among `rate <= bound` preconditions.
pub(crate) fn require(stage: &'static str, checks: Vec<Inequality>) -> Result<(), GaussError> {
    match checks
        .into_iter()
        .filter(|i| !i.holds())
        .min_by(|a, b| a.slack().total_cmp(&b.slack()))
    {
        Some(worst) => Err(GaussError::Infeasible {
            stage,
            excess: -worst.slack(),
            inequality: worst.name,
        }),
        None => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn capacity_values() {
        assert_eq!(awgn_capacity(0.0).unwrap(), 0.0);
        assert!((awgn_capacity(1.0).unwrap() - 1.0).abs() < 1e-15);
        assert!((awgn_capacity(15.0).unwrap() - 4.0).abs() < 1e-15);
        assert!(matches!(awgn_capacity(-0.5), Err(GaussError::Domain(_))));
        assert_eq!(lattice_rate(0.5), 0.0);
        assert!((lattice_rate(8.0) - 3.0).abs() < 1e-15);
    }

    #[test]
    fn network_validation() {
        assert!(GaussNetwork::new([1.0; 4], [1.0; 4], 0.0).is_err());
        assert!(GaussNetwork::new([1.0, -1.0, 1.0, 1.0], [1.0; 4], 1.0).is_err());
        assert!(GaussRateTuple::new([0.0, f64::NAN, 0.0, 0.0]).is_err());
        let net = GaussNetwork::symmetric(1.0, 2.0).unwrap();
        assert!(matches!(
            net.check_side_condition(),
            Err(GaussError::LowPower { node: 0, .. })
        ));
        assert!(GaussNetwork::symmetric(1.0, 2.5)
            .unwrap()
            .check_side_condition()
            .is_ok());
    }
}
