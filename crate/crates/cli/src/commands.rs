//! Command implementations.

use std::fs;
use std::path::Path;
use std::str::FromStr;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use relaynet::cutset::{in_det_cutset, DuplexMode, RateTuple};
use relaynet::detnet::DetNetwork;
use relaynet::gaussian::{
    check_lemma1_gap, gauss_cutset, gauss_restricted_cutset, monte_carlo_gap, verify_theorem2,
    GapConfig, GaussNetwork, GaussRateTuple, RateSampling,
};
use relaynet::scheduler::{
    completeness_sweep, schedule_fractional_with, schedule_half_duplex_with, simulate_schedule,
    CompletenessConfig, Messages, StrategyRegistry,
};

use crate::netfile::{parse_listen, NetworkFile};
use crate::report::{
    cut_names, digest, AssignmentRecord, Body, CutRecord, DetSweepSummary, Report,
    SimulationRecord, SweepSummary,
};
use crate::{
    BoundArg, Cli, CliError, Command, GaussVerifyArgs, Outcome, RatesArg, RegionArgs, ScheduleArgs,
    SweepArgs, EXIT_INFEASIBLE, EXIT_INTERNAL, EXIT_OK,
};

/// Column order of the Gaussian sweep CSV.
pub const GAUSS_CSV_HEADER: [&str; 19] = [
    "trial",
    "seed",
    "verdict",
    "stage",
    "max_alpha_slack",
    "lemma1_gap",
    "h_a1r",
    "h_b1r",
    "h_a2r",
    "h_b2r",
    "h_ra1",
    "h_rb1",
    "h_ra2",
    "h_rb2",
    "p",
    "r_a1",
    "r_b1",
    "r_a2",
    "r_b2",
];

/// Column order of the deterministic sweep CSV.
pub const DET_CSV_HEADER: [&str; 10] = [
    "trial",
    "seed",
    "pairs",
    "uplink",
    "downlink",
    "tuples",
    "decoded",
    "induction_steps",
    "verdict",
    "failure",
];

/// Runs a parsed command line; `argv` is echoed into the report.
pub fn run(cli: &Cli, argv: Vec<String>) -> Result<Outcome, CliError> {
    match &cli.command {
        Command::Region(args) => region(args, argv),
        Command::Schedule(args) => schedule(args, argv),
        Command::GaussVerify(args) => gauss_verify(args, argv),
        Command::Sweep(args) => sweep(args, argv),
    }
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn load(path: &Path) -> Result<(NetworkFile, String), CliError> {
    let text = read(path)?;
    let net = NetworkFile::parse(&text).map_err(|e| match e {
        CliError::Input(msg) => CliError::Input(format!("{}: {msg}", path.display())),
        other => other,
    })?;
    Ok((net, text))
}

fn parse_gauss_rates(text: &str) -> Result<GaussRateTuple, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).collect();
    if parts.len() != 4 {
        return Err(CliError::Input(format!(
            "a Gaussian rate tuple has 4 entries, got {}",
            parts.len()
        )));
    }
    let mut r = [0.0; 4];
    for (x, p) in r.iter_mut().zip(&parts) {
        *x = p
            .parse()
            .map_err(|_| CliError::Input(format!("cannot parse rate {p:?} as a decimal")))?;
    }
    Ok(GaussRateTuple::new(r)?)
}

fn mode_name(mode: DuplexMode) -> String {
    match mode {
        DuplexMode::Full => "full".into(),
        DuplexMode::Half(d) => format!("half {d}"),
    }
}

fn rate_strings(r: &RateTuple) -> Vec<String> {
    r.as_slice().iter().map(|x| x.to_string()).collect()
}

fn det_inputs(
    file: NetworkFile,
    half_duplex: Option<&str>,
) -> Result<(DetNetwork, DuplexMode), CliError> {
    match file {
        NetworkFile::Deterministic { net, mode } => {
            let mode = half_duplex.map(parse_listen).transpose()?.unwrap_or(mode);
            Ok((net, mode))
        }
        NetworkFile::Gaussian(_) => Err(CliError::Input(
            "this command needs a deterministic network".into(),
        )),
    }
}

fn report(argv: Vec<String>, input_digest: String, seed: Option<u64>, body: Body) -> Report {
    Report {
        command: argv,
        input_digest,
        seed,
        body,
    }
}

fn exit_if(ok: bool) -> u8 {
    if ok {
        EXIT_OK
    } else {
        EXIT_INFEASIBLE
    }
}

pub fn region(args: &RegionArgs, argv: Vec<String>) -> Result<Outcome, CliError> {
    let (file, text) = load(&args.network)?;
    let flag = args.half_duplex.clone().unwrap_or_default();
    let input_digest = digest([text.as_bytes(), args.rates.as_bytes(), flag.as_bytes()]);
    let (body, member) = match file {
        NetworkFile::Gaussian(net) => {
            if args.half_duplex.is_some() {
                return Err(CliError::Input(
                    "half duplex applies to deterministic networks only".into(),
                ));
            }
            let rates = parse_gauss_rates(&args.rates)?;
            let general = gauss_cutset(&net, &rates);
            let restricted = gauss_restricted_cutset(&net, &rates);
            let member = match args.bound {
                BoundArg::General => general.is_member(),
                BoundArg::Restricted => restricted.is_member(),
            };
            let body = Body::GaussRegion {
                rates: rates.rates(),
                member,
                general,
                restricted,
                lemma1_gaps: check_lemma1_gap(&net),
            };
            (body, member)
        }
        det => {
            let (net, mode) = det_inputs(det, args.half_duplex.as_deref())?;
            let rates = RateTuple::from_str(&args.rates)?;
            let m = in_det_cutset(&net, &rates, mode)?;
            let body = Body::DetRegion {
                mode: mode_name(mode),
                rates: rate_strings(&rates),
                member: m.is_member(),
                violated: m.violated.iter().map(CutRecord::from).collect(),
                tight: cut_names(&m.tight),
            };
            (body, m.is_member())
        }
    };
    Ok(Outcome {
        report: report(argv, input_digest, None, body),
        exit: exit_if(member),
        summary: None,
    })
}

pub fn schedule(args: &ScheduleArgs, argv: Vec<String>) -> Result<Outcome, CliError> {
    let (file, text) = load(&args.network)?;
    let flag = args.half_duplex.clone().unwrap_or_default();
    let input_digest = digest([text.as_bytes(), args.rates.as_bytes(), flag.as_bytes()]);
    let (net, mode) = det_inputs(file, args.half_duplex.as_deref())?;
    let rates = RateTuple::from_str(&args.rates)?;
    let registry = StrategyRegistry::default();
    let name = if args.chunked {
        "chunked"
    } else {
        args.strategy.as_str()
    };
    let strategy = registry.get(name)?;
    let seed = Some(args.seed);

    let m = in_det_cutset(&net, &rates, mode)?;
    if !m.is_member() {
        let body = Body::Rejected {
            reason: "rate tuple is outside the cut-set region".into(),
            violated: m.violated.iter().map(CutRecord::from).collect(),
        };
        return Ok(Outcome {
            report: report(argv, input_digest, seed, body),
            exit: EXIT_INFEASIBLE,
            summary: None,
        });
    }

    let sched = match mode {
        DuplexMode::Full => schedule_fractional_with(strategy, &net, &rates)?,
        DuplexMode::Half(listen) => schedule_half_duplex_with(strategy, &net, listen, &rates)?,
    };
    let bits = sched.bit_counts(net.num_pairs());
    let mut exit = EXIT_OK;
    let simulation = if args.simulate > 0 {
        let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
        let (mut decoded, mut bit_errors) = (0, 0);
        for _ in 0..args.simulate {
            let msgs = Messages::random(&bits, &mut rng);
            let out = simulate_schedule(&net, &sched, &msgs)?;
            bit_errors += out.bit_errors;
            if out.verdict() && out.decoded == msgs {
                decoded += 1;
            }
        }
        if decoded != args.simulate {
            exit = EXIT_INTERNAL;
        }
        Some(SimulationRecord {
            payloads: args.simulate,
            decoded,
            bit_errors,
        })
    } else {
        None
    };
    let body = Body::Schedule {
        strategy: strategy.name().to_string(),
        mode: mode_name(mode),
        rates: rate_strings(&rates),
        slots: sched.slots().to_vec(),
        bits,
        assignments: sched
            .assignments()
            .iter()
            .map(AssignmentRecord::from)
            .collect(),
        simulation,
    };
    Ok(Outcome {
        report: report(argv, input_digest, seed, body),
        exit,
        summary: None,
    })
}

pub fn gauss_verify(args: &GaussVerifyArgs, argv: Vec<String>) -> Result<Outcome, CliError> {
    let (file, text) = load(&args.network)?;
    let input_digest = digest([text.as_bytes(), args.rates.as_bytes()]);
    let NetworkFile::Gaussian(net) = file else {
        return Err(CliError::Input(
            "gauss-verify needs a gaussian network".into(),
        ));
    };
    let rates = parse_gauss_rates(&args.rates)?;
    let verdict = verify_theorem2(&net, &rates)?;
    let exit = exit_if(verdict.verdict);
    let body = Body::GaussVerify {
        rates: rates.rates(),
        report: Box::new(verdict),
    };
    Ok(Outcome {
        report: report(argv, input_digest, None, body),
        exit,
        summary: None,
    })
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

fn net_columns(net: &GaussNetwork) -> impl Iterator<Item = String> {
    net.uplink()
        .into_iter()
        .chain(net.downlink())
        .chain([net.power()])
        .map(|x| x.to_string())
}

fn with_pool<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Input(format!("cannot start {n} threads: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn write_json(path: &Path, report: &Report) -> Result<(), CliError> {
    let json = serde_json::to_string_pretty(report)?;
    fs::write(path, json + "\n").map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>, CliError> {
    let file = fs::File::create(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    Ok(csv::Writer::from_writer(file))
}

pub fn sweep(args: &SweepArgs, argv: Vec<String>) -> Result<Outcome, CliError> {
    if args.threads == Some(0) {
        return Err(CliError::Input("--threads must be at least 1".into()));
    }
    let outcome = if args.det {
        det_sweep(args, argv)?
    } else {
        gauss_sweep(args, argv)?
    };
    if let Some(path) = &args.report {
        write_json(path, &outcome.report)?;
    }
    Ok(outcome)
}

fn gauss_sweep(args: &SweepArgs, argv: Vec<String>) -> Result<Outcome, CliError> {
    let config = GapConfig {
        trials: args.trials,
        seed: args.seed,
        h_range: (args.hmin, args.hmax),
        p_range: (args.pmin, args.pmax),
        sampling: match args.rates {
            RatesArg::Boundary => RateSampling::Boundary,
            RatesArg::Interior => RateSampling::Interior,
        },
    };
    let input_digest = digest([serde_json::to_string(&config)?.as_bytes()]);
    let gap = with_pool(args.threads, || monte_carlo_gap(&config))??;

    if let Some(path) = &args.out {
        let mut w = csv_writer(path)?;
        w.write_record(GAUSS_CSV_HEADER)?;
        for r in &gap.records {
            let mut row = vec![
                r.trial.to_string(),
                r.seed.to_string(),
                r.verdict.to_string(),
                r.stage.clone().unwrap_or_default(),
                opt(r.max_alpha_slack),
                r.lemma1_gap.to_string(),
            ];
            row.extend(net_columns(&r.net));
            row.extend(r.rates.rates().iter().map(|x| x.to_string()));
            w.write_record(&row)?;
        }
        w.flush().map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }

    let failures: Vec<String> = gap
        .failures_by_stage
        .iter()
        .map(|(s, n)| format!("{s}={n}"))
        .collect();
    let show = |x: Option<f64>| x.map_or_else(|| "n/a".to_string(), |v| format!("{v:.3e}"));
    let mut summary = format!(
        "pass {}/{}, max lemma1 gap {}, max alpha excess {}",
        gap.passed,
        gap.trials,
        gap.max_lemma1_gap
            .map_or_else(|| "n/a".to_string(), |v| format!("{v:.9}")),
        show(gap.max_alpha_slack)
    );
    if !failures.is_empty() {
        summary += &format!(", failures {}", failures.join(" "));
    }
    let exit = exit_if(gap.passed == gap.trials);
    let body = Body::Sweep(SweepSummary {
        pass_rate: gap.pass_rate(),
        config: gap.config,
        trials: gap.trials,
        passed: gap.passed,
        max_alpha_slack: gap.max_alpha_slack,
        max_lemma1_gap: gap.max_lemma1_gap,
        failures_by_stage: gap.failures_by_stage,
    });
    Ok(Outcome {
        report: report(argv, input_digest, Some(args.seed), body),
        exit,
        summary: Some(summary),
    })
}

fn det_sweep(args: &SweepArgs, argv: Vec<String>) -> Result<Outcome, CliError> {
    let config = CompletenessConfig {
        trials: args.trials,
        seed: args.seed,
        max_pairs: args.max_pairs,
        max_gain: args.max_gain,
        strategy: args.strategy.clone(),
    };
    if config.max_pairs == 0 {
        return Err(CliError::Input("--max-pairs must be at least 1".into()));
    }
    let input_digest = digest([serde_json::to_string(&config)?.as_bytes()]);
    let registry = StrategyRegistry::default();
    let records = with_pool(args.threads, || completeness_sweep(&config, &registry))??;

    if let Some(path) = &args.out {
        let mut w = csv_writer(path)?;
        w.write_record(DET_CSV_HEADER)?;
        let join = |v: &[u32]| v.iter().map(u32::to_string).collect::<Vec<_>>().join(" ");
        for r in &records {
            w.write_record([
                r.trial.to_string(),
                r.seed.to_string(),
                (r.uplink.len() / 2).to_string(),
                join(&r.uplink),
                join(&r.downlink),
                r.tuples.to_string(),
                r.decoded.to_string(),
                r.induction_steps.to_string(),
                r.passed().to_string(),
                r.failure.clone().unwrap_or_default(),
            ])?;
        }
        w.flush().map_err(|source| CliError::Io {
            path: path.clone(),
            source,
        })?;
    }

    let passed = records.iter().filter(|r| r.passed()).count();
    let tuples = records.iter().map(|r| r.tuples).sum();
    let decoded = records.iter().map(|r| r.decoded).sum();
    let induction_steps = records.iter().map(|r| r.induction_steps).sum();
    let summary = format!(
        "pass {passed}/{} networks, {decoded}/{tuples} tuples decoded, {induction_steps} induction steps checked",
        records.len()
    );
    let body = Body::DetSweep(DetSweepSummary {
        trials: records.len(),
        passed,
        tuples,
        decoded,
        induction_steps,
        failures: records.iter().filter_map(|r| r.failure.clone()).collect(),
        config,
    });
    Ok(Outcome {
        report: report(argv, input_digest, Some(args.seed), body),
        exit: exit_if(passed == records.len()),
        summary: Some(summary),
    })
}
