//! Acceptance criteria, one line each.
//!
//! Runs as a plain binary so every verdict is printed whether it passes or
//! not. A failed criterion is reported, not raised, so the rest of the
//! workspace tests still run; set `RELAYNET_ACCEPTANCE_STRICT=1` to turn any
//! FAIL into a non-zero exit.

use std::fs;
use std::process::Command;
use std::time::{Duration, Instant};

use num_rational::Rational64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use relaynet::cutset::{
    enumerate_integral_region, in_det_cutset, DuplexMode, RateTuple, DEFAULT_CELL_BUDGET,
};
use relaynet::detnet::DetNetwork;
use relaynet::gaussian::{
    check_lemma1_gap, downlink_allocate, monte_carlo_gap, sample_network, uplink_allocate,
    GapConfig, GaussNetwork,
};
use relaynet::scheduler::{
    chunk_schedule, completeness_sweep, divide_and_conquer, divide_and_conquer_trace,
    sample_det_network, schedule_fractional, schedule_half_duplex, simulate_schedule,
    AssignmentKind, CompletenessConfig, Messages, Schedule, ScheduleError, SlotRole,
    StrategyRegistry,
};

/// Seed shared by every randomized criterion.
const SEED: u64 = 20_240_601;
/// Absolute tolerance on Gaussian rate and power comparisons.
const TOL: f64 = 1e-9;
/// Tolerance on the closed-form spot values.
const SPOT_TOL: f64 = 1e-12;

type Criterion = (&'static str, fn() -> Verdict);

struct Verdict {
    pass: bool,
    detail: String,
}

fn verdict(pass: bool, detail: impl Into<String>) -> Verdict {
    Verdict {
        pass,
        detail: detail.into(),
    }
}

fn within(elapsed: Duration, limit: Duration) -> String {
    format!(
        "{:.2}s of {:.0}s budget",
        elapsed.as_secs_f64(),
        limit.as_secs_f64()
    )
}

fn decodes(net: &DetNetwork, sched: &Schedule, rng: &mut ChaCha8Rng) -> bool {
    let msgs = Messages::random(&sched.bit_counts(net.num_pairs()), rng);
    simulate_schedule(net, sched, &msgs).is_ok_and(|out| out.verdict() && out.decoded == msgs)
}

fn golden_two_pair() -> Verdict {
    let start = Instant::now();
    let net = DetNetwork::from_flat(&[3, 2, 2, 1], &[2, 3, 1, 2]).unwrap();
    let rates = RateTuple::from_integers(&[2, 1, 1, 1]);
    let member = in_det_cutset(&net, &rates, DuplexMode::Full)
        .unwrap()
        .is_member();
    let sched = divide_and_conquer(&net, &rates).unwrap();
    let valid = sched.validate(&net).is_ok();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let decoded = (0..100).filter(|_| decodes(&net, &sched, &mut rng)).count();
    let elapsed = start.elapsed();
    let pass = member && valid && decoded == 100 && elapsed < Duration::from_secs(1);
    verdict(
        pass,
        format!(
            "member={member} valid={valid} decoded {decoded}/100, {}",
            within(elapsed, Duration::from_secs(1))
        ),
    )
}

fn completeness() -> Verdict {
    let start = Instant::now();
    let config = CompletenessConfig {
        trials: 200,
        seed: SEED,
        max_pairs: 3,
        max_gain: 6,
        ..Default::default()
    };
    let records = completeness_sweep(&config, &StrategyRegistry::default()).unwrap();
    let elapsed = start.elapsed();
    let tuples: usize = records.iter().map(|r| r.tuples).sum();
    let decoded: usize = records.iter().map(|r| r.decoded).sum();
    let steps: usize = records.iter().map(|r| r.induction_steps).sum();
    let failed: Vec<_> = records.iter().filter(|r| !r.passed()).collect();
    let pass = failed.is_empty() && elapsed < Duration::from_secs(300);
    let mut detail = format!(
        "{} networks, {decoded}/{tuples} tuples decoded, {steps} induction steps in the reduced region, {}",
        records.len(),
        within(elapsed, Duration::from_secs(300))
    );
    if let Some(f) = failed.first() {
        detail += &format!("; first failure {:?}", f.failure);
    }
    verdict(pass, detail)
}

/// Membership by walking every assignment of {outside, A->B, B->A} to pairs.
fn oracle_member(net: &DetNetwork, rates: &[Rational64]) -> bool {
    let m = net.num_pairs();
    (1..3usize.pow(m as u32)).all(|code| {
        let (mut load, mut up, mut down, mut c) = (Rational64::from_integer(0), 0i64, 0i64, code);
        for (i, g) in net.pairs().iter().enumerate() {
            match c % 3 {
                1 => {
                    load += rates[2 * i];
                    up = up.max(g.a_up as i64);
                    down = down.max(g.b_down as i64);
                }
                2 => {
                    load += rates[2 * i + 1];
                    up = up.max(g.b_up as i64);
                    down = down.max(g.a_down as i64);
                }
                _ => {}
            }
            c /= 3;
        }
        load <= Rational64::from_integer(up.min(down))
    })
}

fn converse() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut rejected, mut produced, mut tried) = (0, 0, 0);
    let mut trial = 0u64;
    while tried < 200 {
        // The networks of the completeness sweep, in order.
        let mut net_rng = ChaCha8Rng::seed_from_u64(SEED);
        net_rng.set_stream(trial % 200);
        trial += 1;
        let net = sample_det_network(&mut net_rng, 3, 6);
        let n = net.num_nodes();
        let rates: Vec<Rational64> = (0..n)
            .map(|_| Rational64::new(rng.gen_range(0..=16), rng.gen_range(1..=2)))
            .collect();
        if oracle_member(&net, &rates) {
            continue;
        }
        tried += 1;
        let tuple = RateTuple::new(rates).unwrap();
        let m = in_det_cutset(&net, &tuple, DuplexMode::Full).unwrap();
        let refused = |r: Result<Schedule, ScheduleError>| {
            matches!(r, Err(ScheduleError::NotInRegion { .. }))
        };
        let fractional = refused(schedule_fractional(&net, &tuple));
        let direct = !tuple.is_integral()
            || (refused(divide_and_conquer(&net, &tuple)) && refused(chunk_schedule(&net, &tuple)));
        if !m.is_member() && !m.violated.is_empty() && fractional && direct {
            rejected += 1;
        }
        if !(fractional && direct) {
            produced += 1;
        }
    }
    verdict(rejected == 200 && produced == 0, format!("{rejected}/200 outside tuples rejected with a violated cut, {produced} schedules produced"))
}

fn half_duplex() -> Verdict {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut tuples, mut ok, mut first_failure) = (0, 0, None);
    for trial in 0..50 {
        let net = sample_det_network(&mut rng, 3, 6);
        for (p, q) in [(1, 3), (1, 2), (2, 3)] {
            let listen = Rational64::new(p, q);
            let region =
                enumerate_integral_region(&net, DuplexMode::Half(listen), DEFAULT_CELL_BUDGET)
                    .unwrap();
            for rates in region {
                tuples += 1;
                let result = schedule_half_duplex(&net, listen, &rates).map(|sched| {
                    let q_total = sched.num_slots() as i64;
                    let listen_slots = sched.count_slots(SlotRole::Listen) as i64;
                    let transmit_slots = sched.count_slots(SlotRole::Transmit) as i64;
                    let counts = Rational64::from_integer(listen_slots) == listen * q_total
                        && Rational64::from_integer(transmit_slots)
                            == (Rational64::from_integer(1) - listen) * q_total;
                    counts && decodes(&net, &sched, &mut rng)
                });
                match result {
                    Ok(true) => ok += 1,
                    other => {
                        first_failure.get_or_insert(format!(
                            "net {trial} listen {listen} rates {rates}: {other:?}"
                        ));
                    }
                }
            }
        }
    }
    let mut detail = format!("{ok}/{tuples} tuples over 50 networks and listen fractions 1/3, 1/2, 2/3 scheduled with matching slot counts and decoded, {:.2}s", start.elapsed().as_secs_f64());
    if let Some(f) = &first_failure {
        detail += &format!("; first failure {f}");
    }
    verdict(ok == tuples && tuples > 0, detail)
}

/// Per (pair, kind), uplink and downlink levels each form one run.
fn contiguous(sched: &Schedule) -> bool {
    use std::collections::BTreeMap;
    let mut groups: BTreeMap<(usize, AssignmentKind), (Vec<u32>, Vec<u32>)> = BTreeMap::new();
    for a in sched.assignments() {
        let g = groups.entry((a.pair, a.kind)).or_default();
        g.0.push(a.uplink_level);
        g.1.push(a.downlink_level);
    }
    let run = |v: &mut Vec<u32>| {
        v.sort_unstable();
        v.windows(2).all(|w| w[1] == w[0] + 1)
    };
    groups.values_mut().all(|(u, d)| run(u) && run(d))
}

fn chunked() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut ok = 0;
    let mut first_failure = None;
    for i in 0..100 {
        let net = sample_det_network(&mut rng, 3, 6);
        let region =
            enumerate_integral_region(&net, DuplexMode::Full, DEFAULT_CELL_BUDGET).unwrap();
        let rates = region[rng.gen_range(0..region.len())].clone();
        let result = chunk_schedule(&net, &rates).map(|sched| {
            let bits_match = sched.bit_counts(net.num_pairs()) == rates.to_integers().unwrap();
            let induction = divide_and_conquer_trace(&net, &rates).is_ok();
            sched.validate(&net).is_ok()
                && bits_match
                && induction
                && contiguous(&sched)
                && decodes(&net, &sched, &mut rng)
        });
        match result {
            Ok(true) => ok += 1,
            other => {
                first_failure.get_or_insert(format!("tuple {i} {rates}: {other:?}"));
            }
        }
    }
    let mut detail =
        format!("{ok}/100 in-region tuples valid, contiguous per pair and kind, decoded");
    if let Some(f) = first_failure {
        detail += &format!("; first failure {f}");
    }
    verdict(ok == 100, detail)
}

fn lemma1() -> Verdict {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for _ in 0..10_000 {
        let net = sample_network(&mut rng, (1.0, 100.0), (1.0, 100.0));
        let gaps = check_lemma1_gap(&net);
        lo = lo.min(gaps.min());
        hi = hi.max(gaps.max());
    }
    verdict(
        lo >= 0.0 && hi <= 1.0 + TOL,
        format!("10000 networks, gaps in [{lo:.3e}, {hi:.12}], limit 1 + {TOL:e}"),
    )
}

fn theorem2() -> Verdict {
    let start = Instant::now();
    let config = GapConfig {
        trials: 100_000,
        seed: SEED,
        ..Default::default()
    };
    let report = monte_carlo_gap(&config).unwrap();
    let elapsed = start.elapsed();
    let excess = report.max_alpha_slack.unwrap_or(0.0);
    let pass =
        report.passed == report.trials && excess <= TOL && elapsed < Duration::from_secs(120);
    let mut detail = format!(
        "{}/{} boundary tuples achieved, max power excess {excess:.3e} (limit {TOL:e}), {}",
        report.passed,
        report.trials,
        within(elapsed, Duration::from_secs(120))
    );
    if !report.failures_by_stage.is_empty() {
        detail += &format!("; failures {:?}", report.failures_by_stage);
        if let Some(r) = report.records.iter().find(|r| !r.verdict) {
            detail += &format!("; e.g. trial {} rates {:?}", r.trial, r.rates.rates());
        }
    }
    verdict(pass, detail)
}

fn spot_checks() -> Verdict {
    // Uplink SNRs 4096, 1024, 256, 16 and r_B2 = 1.
    let up = GaussNetwork::new([64.0, 32.0, 16.0, 4.0], [64.0; 4], 1.0).unwrap();
    let lattice = uplink_allocate(&up, [3.0, 1.0, 2.0, 1.0])
        .unwrap()
        .lattice_power_b[1];
    // Downlink SNR 20 at B1 and r_A1 - r_B1 = 1.
    let down = GaussNetwork::new(
        [64.0; 4],
        [4.0, 20f64.sqrt(), 8f64.sqrt(), 10f64.sqrt()],
        1.0,
    )
    .unwrap();
    let solo = downlink_allocate(&down, [1.0, 0.0, 0.0, 0.0])
        .unwrap()
        .power[0];
    let pass = (lattice - 0.125).abs() <= SPOT_TOL && (solo - 0.05).abs() <= SPOT_TOL;
    verdict(pass, format!("uplink lattice power {lattice} (want 0.125), downlink solo power {solo} (want 0.05), tolerance {SPOT_TOL:e}"))
}

fn determinism() -> Verdict {
    let dir = std::env::temp_dir().join(format!("relaynet-acceptance-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let run = |name: &str, threads: &str| {
        let path = dir.join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_relaynet"))
            .args([
                "sweep",
                "--trials",
                "2000",
                "--seed",
                "77",
                "--threads",
                threads,
                "--out",
            ])
            .arg(&path)
            .output()
            .unwrap()
            .status;
        (status.code(), fs::read(&path).unwrap_or_default())
    };
    let (c1, a) = run("a.csv", "4");
    let (c2, b) = run("b.csv", "4");
    let (c3, c) = run("c.csv", "1");
    fs::remove_dir_all(&dir).ok();
    let same = !a.is_empty() && a == b && a == c;
    verdict(same, format!("2000-trial CSV ({} bytes) identical across two runs and 1 vs 4 threads: {same}; exits {c1:?} {c2:?} {c3:?}", a.len()))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("two-pair golden schedule", golden_two_pair),
        ("completeness over 200 deterministic networks", completeness),
        ("converse: outside tuples rejected", converse),
        ("half-duplex schedules", half_duplex),
        ("chunked schedules contiguous", chunked),
        ("restricted region within 1 bit", lemma1),
        ("Gaussian 2-bit gap on 1e5 samples", theorem2),
        ("closed-form power spot checks", spot_checks),
        ("sweep determinism", determinism),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let v = check();
        if !v.pass {
            failed += 1;
        }
        println!(
            "{} {name}: {}",
            if v.pass { "PASS" } else { "FAIL" },
            v.detail
        );
    }
    println!(
        "acceptance: {}/{} criteria passed",
        criteria.len() - failed,
        criteria.len()
    );
    if failed > 0 && std::env::var_os("RELAYNET_ACCEPTANCE_STRICT").is_some_and(|v| v == "1") {
        std::process::exit(1);
    }
}
