//! End-to-end check that a tuple two bits inside the restricted region is
//! reached by the layered scheme.

use serde::{Deserialize, Serialize};

use super::{
    downlink_powers, max_excess, reduce_orderings, uplink_powers, uplink_rate_check,
    DownlinkAllocation, GaussError, GaussNetwork, GaussRateTuple, Normalized, PowerCheck,
    RateCheck, UplinkAllocation,
};

/// Per-user backoff from the restricted region.
pub const GAP_BITS: f64 = 2.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Stage {
    UplinkPreconditions,
    UplinkPower,
    UplinkRates,
    DownlinkPreconditions,
    DownlinkPower,
    DownlinkRates,
}

impl Stage {
    pub fn name(&self) -> &'static str {
        match self {
            Stage::UplinkPreconditions => "uplink-preconditions",
            Stage::UplinkPower => "uplink-power",
            Stage::UplinkRates => "uplink-rates",
            Stage::DownlinkPreconditions => "downlink-preconditions",
            Stage::DownlinkPower => "downlink-power",
            Stage::DownlinkRates => "downlink-rates",
        }
    }
}

impl std::fmt::Display for Stage {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A failed check, with how far it missed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StageFailure {
    pub stage: Stage,
    pub check: String,
    pub excess: f64,
}

/// Every intermediate value of one verification.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AchievabilityReport {
    pub verdict: bool,
    pub failures: Vec<StageFailure>,
    pub normalized: Normalized,
    /// The backed-off tuple in the normalized labels.
    pub target: [f64; 4],
    pub uplink: Option<UplinkAllocation>,
    pub uplink_power: Vec<PowerCheck>,
    pub uplink_rates: Option<RateCheck>,
    pub downlink: Option<DownlinkAllocation>,
    pub downlink_power: Vec<PowerCheck>,
    pub downlink_rates: Option<RateCheck>,
}

impl AchievabilityReport {
    /// The first stage that failed.
    pub fn stage(&self) -> Option<Stage> {
        self.failures.first().map(|f| f.stage)
    }

    /// Largest `value - bound` over all power checks that were evaluated.
    pub fn max_alpha_slack(&self) -> Option<f64> {
        let all: Vec<PowerCheck> = self
            .uplink_power
            .iter()
            .chain(&self.downlink_power)
            .cloned()
            .collect();
        (!all.is_empty()).then(|| max_excess(&all))
    }
}

fn precondition_failure(stage: Stage, e: GaussError) -> Result<StageFailure, GaussError> {
    match e {
        GaussError::Infeasible {
            inequality, excess, ..
        } => Ok(StageFailure {
            stage,
            check: inequality,
            excess,
        }),
        other => Err(other),
    }
}

fn power_failures(stage: Stage, checks: &[PowerCheck]) -> impl Iterator<Item = StageFailure> + '_ {
    checks
        .iter()
        .filter(|c| !c.holds())
        .map(move |c| StageFailure {
            stage,
            check: c.name.clone(),
            excess: c.excess(),
        })
}

fn rate_failures(stage: Stage, check: &RateCheck) -> impl Iterator<Item = StageFailure> + '_ {
    check.failures().map(move |i| StageFailure {
        stage,
        check: i.name.clone(),
        excess: -i.slack(),
    })
}

/// Checks that `rates - (2, 2, 2, 2)` is achievable on `net`.
///
/// Errors are reserved for inputs outside the hypotheses: a component below
/// two, an SNR below [`super::MIN_SNR`], or a tuple outside the restricted
/// region. A scheme that fails on valid input yields `verdict: false` with the
/// failing stages.
pub fn verify_theorem2(
    net: &GaussNetwork,
    rates: &GaussRateTuple,
) -> Result<AchievabilityReport, GaussError> {
    for (index, &value) in rates.rates().iter().enumerate() {
        if value < GAP_BITS {
            return Err(GaussError::Hypothesis { index, value });
        }
    }
    net.check_side_condition()?;
    let normalized = reduce_orderings(net, rates)?;
    let reduced = &normalized.net;
    let target = normalized.rates.rates().map(|x| x - GAP_BITS);

    let mut failures = Vec::new();
    let (mut uplink, mut uplink_power, mut uplink_rates) = (None, Vec::new(), None);
    match uplink_powers(reduced, target) {
        Ok(alloc) => {
            uplink_power = alloc.power_checks(reduced);
            failures.extend(power_failures(Stage::UplinkPower, &uplink_power));
            let check = uplink_rate_check(reduced, &alloc)?;
            failures.extend(rate_failures(Stage::UplinkRates, &check));
            uplink = Some(alloc);
            uplink_rates = Some(check);
        }
        Err(e) => failures.push(precondition_failure(Stage::UplinkPreconditions, e)?),
    }

    let (mut downlink, mut downlink_power, mut downlink_rates) = (None, Vec::new(), None);
    match downlink_powers(reduced, target) {
        Ok(alloc) => {
            downlink_power = alloc.power_checks();
            failures.extend(power_failures(Stage::DownlinkPower, &downlink_power));
            let check = super::downlink_rate_check(reduced, &alloc)?;
            failures.extend(rate_failures(Stage::DownlinkRates, &check));
            downlink = Some(alloc);
            downlink_rates = Some(check);
        }
        Err(e) => failures.push(precondition_failure(Stage::DownlinkPreconditions, e)?),
    }

    Ok(AchievabilityReport {
        verdict: failures.is_empty(),
        failures,
        normalized,
        target,
        uplink,
        uplink_power,
        uplink_rates,
        downlink,
        downlink_power,
        downlink_rates,
    })
}
