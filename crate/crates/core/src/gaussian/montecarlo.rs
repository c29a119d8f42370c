//! Randomized verification over sampled networks and boundary tuples.
//!
//! Magnitudes and power are drawn log-uniformly. A rate tuple starts at
//! `(2, 2, 2, 2)` and moves along a random direction with exponential
//! components until it meets the restricted region's boundary, then backs off
//! by [`NUDGE`] per component. Trial `t` draws from stream `t` of a ChaCha
//! generator keyed by the seed, so reports do not depend on thread count.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::Exp1;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{
    check_lemma1_gap, cutset_constraints, verify_theorem2, BoundKind, GaussError, GaussNetwork,
    GaussRateTuple, MIN_SNR,
};

/// Inward backoff of boundary samples, in bits.
pub const NUDGE: f64 = 1e-6;

/// Where along the ray a rate tuple is placed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RateSampling {
    Boundary,
    Interior,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapConfig {
    pub trials: usize,
    pub seed: u64,
    pub h_range: (f64, f64),
    pub p_range: (f64, f64),
    pub sampling: RateSampling,
}

impl Default for GapConfig {
    fn default() -> Self {
        GapConfig {
            trials: 10_000,
            seed: 0,
            h_range: (1.0, 100.0),
            p_range: (4.0, 100.0),
            sampling: RateSampling::Boundary,
        }
    }
}

impl GapConfig {
    /// Rejects ranges that are empty or reach below [`MIN_SNR`].
    pub fn validate(&self) -> Result<(), GaussError> {
        for (what, (lo, hi)) in [("magnitude", self.h_range), ("power", self.p_range)] {
            if !(lo > 0.0 && lo <= hi && hi.is_finite()) {
                return Err(GaussError::Config(format!(
                    "{what} range [{lo}, {hi}] is not a positive interval"
                )));
            }
        }
        let weakest = self.h_range.0 * self.h_range.0 * self.p_range.0;
        if weakest < MIN_SNR {
            return Err(GaussError::Config(format!(
                "weakest SNR {weakest} is below {MIN_SNR}"
            )));
        }
        Ok(())
    }
}

fn log_uniform(rng: &mut impl Rng, (lo, hi): (f64, f64)) -> f64 {
    if lo == hi {
        return lo;
    }
    rng.gen_range(lo.ln()..hi.ln()).exp()
}

/// A network with log-uniform magnitudes and power.
pub fn sample_network(
    rng: &mut impl Rng,
    h_range: (f64, f64),
    p_range: (f64, f64),
) -> GaussNetwork {
    let power = log_uniform(rng, p_range);
    let mut h = [0.0; 8];
    for x in &mut h {
        *x = log_uniform(rng, h_range);
    }
    GaussNetwork::new([h[0], h[1], h[2], h[3]], [h[4], h[5], h[6], h[7]], power)
        .expect("sampled magnitudes are positive")
}

/// The generator of one trial.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// The network and rate tuple of trial `trial`.
pub fn sample_trial(config: &GapConfig, trial: u64) -> (GaussNetwork, GaussRateTuple) {
    let mut rng = trial_rng(config.seed, trial);
    loop {
        let net = sample_network(&mut rng, config.h_range, config.p_range);
        let u: [f64; 4] = std::array::from_fn(|_| rng.sample(Exp1));
        let t_max = cutset_constraints(&net, BoundKind::Restricted)
            .iter()
            .map(|(f, bound)| {
                let used: f64 = f.sources.iter().map(|&k| u[k]).sum();
                (bound - 2.0 * f.sources.len() as f64) / used
            })
            .fold(f64::INFINITY, f64::min);
        if t_max < 0.0 {
            continue;
        }
        let rates = match config.sampling {
            RateSampling::Boundary => u.map(|x| (2.0 + t_max * x - NUDGE).max(2.0)),
            RateSampling::Interior => {
                let t = t_max * rng.gen::<f64>();
                u.map(|x| 2.0 + t * x)
            }
        };
        return (
            net,
            GaussRateTuple::new(rates).expect("sampled rates are finite"),
        );
    }
}

/// Outcome of one trial.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRecord {
    pub trial: u64,
    pub seed: u64,
    pub net: GaussNetwork,
    pub rates: GaussRateTuple,
    pub verdict: bool,
    /// First failing stage, or the error if verification refused the input.
    pub stage: Option<String>,
    pub max_alpha_slack: Option<f64>,
    pub lemma1_gap: f64,
}

fn run_trial(config: &GapConfig, trial: u64) -> TrialRecord {
    let (net, rates) = sample_trial(config, trial);
    let lemma1_gap = check_lemma1_gap(&net).max();
    let (verdict, stage, max_alpha_slack) = match verify_theorem2(&net, &rates) {
        Ok(report) => (
            report.verdict,
            report.stage().map(|s| s.to_string()),
            report.max_alpha_slack(),
        ),
        Err(e) => (false, Some(format!("error: {e}")), None),
    };
    TrialRecord {
        trial,
        seed: config.seed,
        net,
        rates,
        verdict,
        stage,
        max_alpha_slack,
        lemma1_gap,
    }
}

/// Aggregate of a sampling run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GapReport {
    pub config: GapConfig,
    pub trials: usize,
    pub passed: usize,
    pub max_alpha_slack: Option<f64>,
    pub max_lemma1_gap: Option<f64>,
    pub failures_by_stage: BTreeMap<String, usize>,
    pub records: Vec<TrialRecord>,
}

impl GapReport {
    /// Fraction of passing trials; 1 when there are none.
    pub fn pass_rate(&self) -> f64 {
        if self.trials == 0 {
            1.0
        } else {
            self.passed as f64 / self.trials as f64
        }
    }
}

/// Runs `config.trials` trials on the current rayon pool.
pub fn monte_carlo_gap(config: &GapConfig) -> Result<GapReport, GaussError> {
    config.validate()?;
    let records: Vec<TrialRecord> = (0..config.trials as u64)
        .into_par_iter()
        .map(|t| run_trial(config, t))
        .collect();
    let mut failures_by_stage = BTreeMap::new();
    for r in &records {
        if let Some(stage) = &r.stage {
            *failures_by_stage.entry(stage.clone()).or_insert(0) += 1;
        }
    }
    let fmax = |it: &mut dyn Iterator<Item = f64>| it.reduce(f64::max);
    Ok(GapReport {
        config: config.clone(),
        trials: records.len(),
        passed: records.iter().filter(|r| r.verdict).count(),
        max_alpha_slack: fmax(&mut records.iter().filter_map(|r| r.max_alpha_slack)),
        max_lemma1_gap: fmax(&mut records.iter().map(|r| r.lemma1_gap)),
        failures_by_stage,
        records,
    })
}
