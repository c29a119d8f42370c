//! Completeness sweep: every integral tuple of every sampled network must be
//! scheduled and decoded.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cutset::{enumerate_integral_region, DuplexMode, DEFAULT_CELL_BUDGET};
use crate::detnet::DetNetwork;

use super::{
    divide_and_conquer_trace, simulate_schedule, Messages, ScheduleError, StrategyRegistry,
};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletenessConfig {
    pub trials: usize,
    pub seed: u64,
    pub max_pairs: usize,
    pub max_gain: u32,
    pub strategy: String,
}

impl Default for CompletenessConfig {
    fn default() -> Self {
        CompletenessConfig {
            trials: 200,
            seed: 0,
            max_pairs: 3,
            max_gain: 6,
            strategy: StrategyRegistry::DEFAULT.to_string(),
        }
    }
}

/// Outcome for one sampled network.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompletenessRecord {
    pub trial: u64,
    pub seed: u64,
    pub uplink: Vec<u32>,
    pub downlink: Vec<u32>,
    /// Integral tuples in the region.
    pub tuples: usize,
    /// Tuples whose schedule decoded a random payload exactly.
    pub decoded: usize,
    /// Induction steps checked against the reduced region.
    pub induction_steps: usize,
    /// First failure, if any.
    pub failure: Option<String>,
}

impl CompletenessRecord {
    pub fn passed(&self) -> bool {
        self.failure.is_none() && self.decoded == self.tuples
    }
}

/// A network with `1..=max_pairs` pairs and gains in `0..=max_gain`.
pub fn sample_det_network(rng: &mut impl Rng, max_pairs: usize, max_gain: u32) -> DetNetwork {
    let m = rng.gen_range(1..=max_pairs);
    let up: Vec<u32> = (0..2 * m).map(|_| rng.gen_range(0..=max_gain)).collect();
    let down: Vec<u32> = (0..2 * m).map(|_| rng.gen_range(0..=max_gain)).collect();
    DetNetwork::from_flat(&up, &down).expect("sampled gains form whole pairs")
}

fn check_tuple(
    net: &DetNetwork,
    rates: &crate::cutset::RateTuple,
    registry: &StrategyRegistry,
    strategy: &str,
    rng: &mut ChaCha8Rng,
) -> Result<(usize, bool), ScheduleError> {
    let steps = divide_and_conquer_trace(net, rates)?.len();
    let schedule = registry.get(strategy)?.schedule(net, rates)?;
    schedule.validate(net)?;
    let messages = Messages::random(&schedule.bit_counts(net.num_pairs()), rng);
    let out = simulate_schedule(net, &schedule, &messages)?;
    Ok((steps, out.verdict() && out.decoded == messages))
}

/// Schedules and simulates every integral tuple of trial `trial`'s network.
pub fn completeness_trial(
    config: &CompletenessConfig,
    registry: &StrategyRegistry,
    trial: u64,
) -> Result<CompletenessRecord, ScheduleError> {
    registry.get(&config.strategy)?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trial);
    let net = sample_det_network(&mut rng, config.max_pairs, config.max_gain);
    let region = enumerate_integral_region(&net, DuplexMode::Full, DEFAULT_CELL_BUDGET)?;
    let mut record = CompletenessRecord {
        trial,
        seed: config.seed,
        uplink: net.uplink_gains(),
        downlink: net.downlink_gains(),
        tuples: region.len(),
        decoded: 0,
        induction_steps: 0,
        failure: None,
    };
    for rates in &region {
        match check_tuple(&net, rates, registry, &config.strategy, &mut rng) {
            Ok((steps, ok)) => {
                record.induction_steps += steps;
                if ok {
                    record.decoded += 1;
                } else if record.failure.is_none() {
                    record.failure = Some(format!("{rates}: bit errors"));
                }
            }
            Err(e) => {
                record
                    .failure
                    .get_or_insert_with(|| format!("{rates}: {e}"));
            }
        }
    }
    Ok(record)
}

/// Runs `config.trials` trials on the current rayon pool.
pub fn completeness_sweep(
    config: &CompletenessConfig,
    registry: &StrategyRegistry,
) -> Result<Vec<CompletenessRecord>, ScheduleError> {
    (0..config.trials as u64)
        .into_par_iter()
        .map(|t| completeness_trial(config, registry, t))
        .collect()
}
