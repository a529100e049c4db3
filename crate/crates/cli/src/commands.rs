use std::path::Path;

use anyhow::{bail, Context, Result};
use planted_core::augmenting::{
    aligned_weights, decompose_errors, enumerate_augmenting_cycles, estimate_edge_probability_with,
    lower_bound_from, path_subgraph_frequency, sampler_by_name,
};
use planted_core::combinatorics::{
    cycle_count_distribution, cycle_mgf_bound_check, forest_counts_exact,
    forest_counts_via_spectrum, matchings_on_cycle, CountMode,
};
use planted_core::experiments::{
    error_rate_curve, run_sweep_streaming, summarize, write_records_csv, write_summary_json, DRule,
    Sigma2Rule, SweepConfig,
};
use planted_core::lap::{brute_force_assignment, mle_with, solver_by_name, Direction};
use planted_core::model::{
    cost_matrices, error_report, write_instance, Instance, InstanceSpec, PlantedMode,
};
use planted_core::theory::theory_profile;
use planted_core::tracking::{
    run_tracking_recipe, simulate_tracking_with, write_tracking_csv, TmaxSeries, TrackingOptions,
    TrackingRecipe,
};
use planted_core::verify::{all_checks, analytic_checks, combinatorial_checks};
use serde::{Deserialize, Serialize};

use crate::args::*;
use crate::output::{csv_table, emit, json};
use crate::points::{load_instance, points_csv};

/// Missing or inconsistent flags that clap cannot express.
#[derive(Debug)]
pub struct UsageError(pub &'static str);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.0)
    }
}

impl std::error::Error for UsageError {}

/// Runs the command and returns the exit status.
pub fn dispatch(cli: &Cli) -> Result<u8> {
    let out = cli.out.as_deref();
    let seed = cli.seed();
    match &cli.command {
        Command::Gen(a) => gen(a, seed, cli.format, out),
        Command::Solve(a) => solve(a, seed, cli.format, out),
        Command::Theory(a) => theory(a, cli.format, out),
        Command::Augmenting(c) => augmenting(c, seed, cli.format, out),
        Command::Combinat(c) => combinat(c, seed, cli.format, out),
        Command::Track(c) => track(c, seed, cli.format, out),
        Command::Sweep(a) => sweep(a, cli.seed, cli.format, out),
        Command::Verify(a) => verify(a, cli.format, out),
    }
}

fn planted_mode(p: Planted) -> PlantedMode {
    match p {
        Planted::Random => PlantedMode::Random,
        Planted::Identity => PlantedMode::Identity,
    }
}

fn instance(m: &ModelArgs, seed: u64) -> Result<Instance> {
    Ok(InstanceSpec::new(m.n, m.d, m.sigma2, seed)
        .with_planted(planted_mode(m.planted))
        .generate()?)
}

fn gen(a: &GenArgs, seed: u64, format: Option<Format>, out: Option<&Path>) -> Result<u8> {
    let inst = instance(&a.model, seed)?;
    if let Some(path) = &a.dump {
        let f =
            std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_instance(&inst, std::io::BufWriter::new(f))?;
    }
    match format.unwrap_or(Format::Json) {
        Format::Json => emit(out, &json(&inst.spec)?)?,
        Format::Csv => emit(out, &points_csv(&inst)?)?,
    }
    Ok(0)
}

#[derive(Serialize)]
struct SolveOutput {
    spec: InstanceSpec,
    solver: String,
    objective: f64,
    unique: bool,
    assignment: Vec<usize>,
    planted: Vec<usize>,
    error_count: usize,
    poly_rate: f64,
    error_indices: Vec<usize>,
    /// Objective of the exhaustive optimum, when requested.
    brute_force_objective: Option<f64>,
}

fn solve(a: &SolveArgs, seed: u64, format: Option<Format>, out: Option<&Path>) -> Result<u8> {
    let inst = match (&a.instance, a.n, a.d, a.sigma2) {
        (Some(path), _, _, _) => load_instance(path)?,
        (None, Some(n), Some(d), Some(sigma2)) => InstanceSpec::new(n, d, sigma2, seed)
            .with_planted(planted_mode(a.planted))
            .generate()?,
        _ => {
            return Err(UsageError("solve needs --instance or all of --n, --d and --sigma2").into())
        }
    };
    let solver = solver_by_name(&a.solver)?;
    let sol = mle_with(solver.as_ref(), &inst)?;
    let brute_force_objective = if a.brute_force {
        let costs = cost_matrices(&inst);
        let brute = brute_force_assignment(costs.w0.view(), Direction::Minimize)?;
        if (brute.objective - sol.objective).abs() > 1e-9 * (1.0 + brute.objective.abs()) {
            bail!(
                "solver objective {} differs from exhaustive optimum {}",
                sol.objective,
                brute.objective
            );
        }
        Some(brute.objective)
    } else {
        None
    };
    let report = error_report(&sol.assignment, &inst.planted)?;
    match format.unwrap_or(Format::Json) {
        Format::Json => emit(
            out,
            &json(&SolveOutput {
                spec: inst.spec,
                solver: solver.name().to_string(),
                objective: sol.objective,
                unique: sol.unique,
                assignment: sol.assignment.as_slice().to_vec(),
                planted: inst.planted.as_slice().to_vec(),
                error_count: report.error_count,
                poly_rate: report.poly_rate,
                error_indices: report.error_indices.clone(),
                brute_force_objective,
            })?,
        )?,
        Format::Csv => {
            let rows = (0..inst.n()).map(|i| {
                let (e, p) = (sol.assignment.apply(i), inst.planted.apply(i));
                [
                    i.to_string(),
                    e.to_string(),
                    p.to_string(),
                    (e == p).to_string(),
                ]
            });
            emit(
                out,
                &csv_table(&["i", "estimate", "planted", "correct"], rows)?,
            )?
        }
    }
    Ok(0)
}

fn theory(a: &TheoryArgs, format: Option<Format>, out: Option<&Path>) -> Result<u8> {
    let p = theory_profile(a.n, a.d, a.sigma2, a.tmin, a.tmax)?;
    match format.unwrap_or(Format::Json) {
        Format::Json => emit(out, &json(&p)?)?,
        Format::Csv => {
            let rows = p
                .s_table
                .iter()
                .zip(&p.c_curve)
                .map(|(s, c)| [s.t.to_string(), s.value.to_string(), c.value.to_string()]);
            emit(
                out,
                &csv_table(&["t", "riemann_sum", "cycle_mass_exponent"], rows)?,
            )?
        }
    }
    Ok(0)
}

#[derive(Serialize)]
struct AugInstanceOutput {
    spec: InstanceSpec,
    mle_errors: usize,
    graph_edges: usize,
    matching_size: usize,
    matching_mode: planted_core::augmenting::MatchingMode,
    bound_holds: bool,
    cycle_lengths: Vec<usize>,
    cycles_cover_errors: bool,
    all_cycles_augmenting: bool,
}

fn augmenting(
    c: &AugmentingCommand,
    seed: u64,
    format: Option<Format>,
    out: Option<&Path>,
) -> Result<u8> {
    let format = format.unwrap_or(Format::Json);
    match c {
        AugmentingCommand::Instance(a) => {
            let inst = instance(&a.model, seed)?;
            let sol = planted_core::lap::mle(&inst)?;
            let lb = lower_bound_from(&inst, &sol)?;
            let dec = decompose_errors(&inst, &sol)?;
            let o = AugInstanceOutput {
                spec: inst.spec,
                mle_errors: lb.mle_errors,
                graph_edges: lb.graph_edges,
                matching_size: lb.m,
                matching_mode: lb.mode,
                bound_holds: lb.holds,
                cycle_lengths: dec.cycles.iter().map(|c| c.len()).collect(),
                cycles_cover_errors: dec.support_matches,
                all_cycles_augmenting: dec.all_augmenting,
            };
            match format {
                Format::Json => emit(out, &json(&o)?)?,
                Format::Csv => emit(
                    out,
                    &csv_table(
                        &[
                            "mle_errors",
                            "graph_edges",
                            "matching_size",
                            "bound_holds",
                            "error_cycles",
                        ],
                        [[
                            o.mle_errors.to_string(),
                            o.graph_edges.to_string(),
                            o.matching_size.to_string(),
                            o.bound_holds.to_string(),
                            o.cycle_lengths.len().to_string(),
                        ]],
                    )?,
                )?,
            }
        }
        AugmentingCommand::Cycles(a) => {
            let inst = instance(&a.model, seed)?;
            let cycles =
                enumerate_augmenting_cycles(aligned_weights(&inst).view(), a.tmax, a.limit)?;
            match format {
                Format::Json => emit(out, &json(&cycles)?)?,
                Format::Csv => {
                    let rows = cycles.cycles.iter().map(|c| {
                        let verts: Vec<String> = c.vertices.iter().map(|v| v.to_string()).collect();
                        [c.len().to_string(), verts.join(" "), c.margin.to_string()]
                    });
                    emit(out, &csv_table(&["length", "vertices", "margin"], rows)?)?
                }
            }
        }
        AugmentingCommand::EdgeProb(a) => {
            let sampler = sampler_by_name(&a.sampler)?;
            let e =
                estimate_edge_probability_with(sampler.as_ref(), a.d, a.sigma2, a.trials, seed)?;
            match format {
                Format::Json => emit(out, &json(&e)?)?,
                Format::Csv => emit(
                    out,
                    &csv_table(
                        &[
                            "sampler",
                            "d",
                            "sigma2",
                            "trials",
                            "p",
                            "p_stderr",
                            "phat",
                            "phat_stderr",
                        ],
                        [[
                            e.sampler.clone(),
                            e.d.to_string(),
                            e.sigma2.to_string(),
                            e.trials.to_string(),
                            e.p.to_string(),
                            e.p_stderr.to_string(),
                            e.phat.to_string(),
                            e.phat_stderr.to_string(),
                        ]],
                    )?,
                )?,
            }
        }
        AugmentingCommand::Subgraph(a) => {
            let f = path_subgraph_frequency(a.t, a.d, a.sigma2, a.trials, seed)?;
            match format {
                Format::Json => emit(out, &json(&f)?)?,
                Format::Csv => emit(
                    out,
                    &csv_table(
                        &["t", "trials", "frequency", "stderr", "bound"],
                        [[
                            f.t.to_string(),
                            f.trials.to_string(),
                            f.frequency.to_string(),
                            f.stderr.to_string(),
                            f.bound.to_string(),
                        ]],
                    )?,
                )?,
            }
        }
    }
    Ok(0)
}

/// Recipe for `combinat cycle-counts --config`.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CycleCountsRecipe {
    #[serde(default)]
    pub description: Option<String>,
    /// Sizes to enumerate exhaustively.
    #[serde(default)]
    pub exhaustive: Vec<usize>,
    /// Sizes to sample.
    #[serde(default)]
    pub sampled: Vec<usize>,
    #[serde(default = "default_samples")]
    pub samples: u64,
    #[serde(default)]
    pub seed: Option<u64>,
}

fn default_samples() -> u64 {
    100_000
}

fn combinat(
    c: &CombinatCommand,
    seed: u64,
    format: Option<Format>,
    out: Option<&Path>,
) -> Result<u8> {
    let format = format.unwrap_or(Format::Json);
    match c {
        CombinatCommand::Matchings { t } => {
            let table = matchings_on_cycle(*t)?;
            match format {
                Format::Json => emit(out, &json(&table)?)?,
                Format::Csv => {
                    let rows = table
                        .counts
                        .iter()
                        .enumerate()
                        .map(|(k, c)| [k.to_string(), c.to_string()]);
                    emit(out, &csv_table(&["k", "matchings"], rows)?)?
                }
            }
        }
        CombinatCommand::Forests { t } => {
            let spectral = forest_counts_via_spectrum(*t)?;
            let exact = forest_counts_exact(*t)?;
            if spectral
                .counts
                .iter()
                .zip(&exact)
                .any(|(&s, &e)| s as i128 != e)
            {
                bail!("spectral and exact forest counts disagree at t={t}");
            }
            match format {
                Format::Json => emit(out, &json(&spectral)?)?,
                Format::Csv => {
                    let rows = exact
                        .iter()
                        .enumerate()
                        .map(|(k, c)| [k.to_string(), c.to_string()]);
                    emit(out, &csv_table(&["k", "forests"], rows)?)?
                }
            }
        }
        CombinatCommand::CycleCounts(a) => {
            let dists = match (&a.config, a.ell) {
                (Some(path), _) => {
                    let text = std::fs::read_to_string(path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    let r: CycleCountsRecipe = serde_json::from_str(&text)?;
                    let s = r.seed.unwrap_or(seed);
                    let mut v = Vec::new();
                    for &ell in &r.exhaustive {
                        v.push(cycle_count_distribution(ell, CountMode::Exhaustive, 0, s)?);
                    }
                    for &ell in &r.sampled {
                        v.push(cycle_count_distribution(
                            ell,
                            CountMode::Sampled,
                            r.samples,
                            s,
                        )?);
                    }
                    v
                }
                (None, Some(ell)) => {
                    let mode = if a.sampled {
                        CountMode::Sampled
                    } else {
                        CountMode::Exhaustive
                    };
                    vec![cycle_count_distribution(ell, mode, a.trials, seed)?]
                }
                (None, None) => {
                    return Err(UsageError("cycle-counts needs --ell or --config").into())
                }
            };
            match format {
                Format::Json => emit(out, &json(&dists)?)?,
                Format::Csv => {
                    let rows = dists.iter().flat_map(|d| {
                        d.pmf.iter().enumerate().map(move |(x, p)| {
                            [
                                d.ell.to_string(),
                                format!("{:?}", d.source).to_lowercase(),
                                x.to_string(),
                                p.to_string(),
                            ]
                        })
                    });
                    emit(
                        out,
                        &csv_table(&["ell", "source", "cycles", "probability"], rows)?,
                    )?
                }
            }
        }
        CombinatCommand::MgfBound { ell, a } => {
            let check = cycle_mgf_bound_check(*ell, *a)?;
            match format {
                Format::Json => emit(out, &json(&check)?)?,
                Format::Csv => emit(
                    out,
                    &csv_table(
                        &["ell", "a", "lhs", "rhs", "rhs_coarse", "ok"],
                        [[
                            check.ell.to_string(),
                            check.a.to_string(),
                            check.lhs.to_string(),
                            check.rhs.to_string(),
                            check.rhs_coarse.to_string(),
                            check.ok.to_string(),
                        ]],
                    )?,
                )?,
            }
        }
    }
    Ok(0)
}

fn track(c: &TrackCommand, seed: u64, format: Option<Format>, out: Option<&Path>) -> Result<u8> {
    match c {
        TrackCommand::Run(a) => {
            let opts = TrackingOptions {
                rescale: a.rescale,
                ..TrackingOptions::default()
            };
            let run = simulate_tracking_with(a.n, a.d, a.delta, a.k, seed, opts)?;
            match format.unwrap_or(Format::Csv) {
                Format::Json => emit(out, &json(&run)?)?,
                Format::Csv => {
                    let mut buf = Vec::new();
                    write_tracking_csv(&run, &mut buf)?;
                    emit(out, &buf)?
                }
            }
        }
        TrackCommand::Tmax(a) => {
            let recipe = match (&a.config, a.n, a.d) {
                (Some(path), _, _) => {
                    let text = std::fs::read_to_string(path)
                        .with_context(|| format!("reading {}", path.display()))?;
                    serde_json::from_str::<TrackingRecipe>(&text)?
                }
                (None, Some(n), Some(d)) => {
                    if a.deltas.is_empty() {
                        return Err(UsageError("tmax needs --deltas").into());
                    }
                    TrackingRecipe {
                        description: None,
                        n,
                        trials: a.trials,
                        k_cap: a.k_cap,
                        seed,
                        rescale: a.rescale,
                        series: vec![TmaxSeries {
                            d,
                            deltas: a.deltas.clone(),
                            k_cap: None,
                        }],
                    }
                }
                _ => return Err(UsageError("tmax needs --config or both --n and --d").into()),
            };
            let results = run_tracking_recipe(&recipe)?;
            match format.unwrap_or(Format::Json) {
                Format::Json => emit(out, &json(&results)?)?,
                Format::Csv => {
                    let rows = results.iter().flat_map(|s| {
                        s.estimates.iter().map(move |e| {
                            [
                                s.d.to_string(),
                                e.delta.to_string(),
                                e.mean.to_string(),
                                e.stderr.to_string(),
                                e.restricted_mean.to_string(),
                                e.censored_fraction.to_string(),
                                e.k_cap.to_string(),
                            ]
                        })
                    });
                    emit(
                        out,
                        &csv_table(
                            &[
                                "d",
                                "delta",
                                "tmax_mean",
                                "stderr",
                                "restricted_mean",
                                "censored_fraction",
                                "k_cap",
                            ],
                            rows,
                        )?,
                    )?
                }
            }
        }
    }
    Ok(0)
}

fn sweep(
    a: &SweepArgs,
    seed: Option<u64>,
    format: Option<Format>,
    out: Option<&Path>,
) -> Result<u8> {
    let text = std::fs::read_to_string(&a.config)
        .with_context(|| format!("reading {}", a.config.display()))?;
    let mut cfg = SweepConfig::from_json(&text)?;
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if let Some(t) = a.trials {
        cfg.trials = t;
    }
    cfg.validate()?;
    if a.curve {
        let (DRule::LogRatio { a: ratio }, Sigma2Rule::Values { values }) =
            (&cfg.d_rule, &cfg.sigma2)
        else {
            return Err(UsageError(
                "--curve needs a log_ratio dimension rule and explicit sigma2 values",
            )
            .into());
        };
        let pts = error_rate_curve(*ratio, values, &cfg.ns, cfg.trials, cfg.seed)?;
        match format.unwrap_or(Format::Json) {
            Format::Json => emit(out, &json(&pts)?)?,
            Format::Csv => {
                let rows = pts.iter().map(|p| {
                    [
                        p.n.to_string(),
                        p.d.to_string(),
                        p.sigma2.to_string(),
                        p.mean_poly_rate.to_string(),
                        p.stderr.to_string(),
                        p.predicted.map(|v| v.to_string()).unwrap_or_default(),
                        p.two_cycle.to_string(),
                    ]
                });
                emit(
                    out,
                    &csv_table(
                        &[
                            "n",
                            "d",
                            "sigma2",
                            "mean_poly_rate",
                            "stderr",
                            "predicted",
                            "two_cycle",
                        ],
                        rows,
                    )?,
                )?
            }
        }
        return Ok(0);
    }
    let total = cfg.cells()?.len() * cfg.trials * cfg.estimators.len();
    let done = std::sync::atomic::AtomicUsize::new(0);
    let step = (total / 20).max(1);
    let records = run_sweep_streaming(&cfg, |_| {
        let k = done.fetch_add(1, std::sync::atomic::Ordering::Relaxed) + 1;
        if k % step == 0 || k == total {
            eprintln!("sweep: {k}/{total} records");
        }
    })?;
    let failures = records.iter().filter(|r| r.is_error()).count();
    if failures > 0 {
        eprintln!("sweep: {failures} trial(s) failed; see the error column");
    }
    if let Some(path) = &a.summary {
        let f =
            std::fs::File::create(path).with_context(|| format!("creating {}", path.display()))?;
        write_summary_json(&summarize(&records)?, f)?;
    }
    match format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut buf = Vec::new();
            write_records_csv(&records, &mut buf)?;
            emit(out, &buf)?
        }
        Format::Json => emit(out, &json(&summarize(&records)?)?)?,
    }
    Ok(0)
}

fn verify(a: &VerifyArgs, format: Option<Format>, out: Option<&Path>) -> Result<u8> {
    let checks = match a.only {
        None => all_checks()?,
        Some(VerifyGroup::Analytic) => analytic_checks()?,
        Some(VerifyGroup::Combinatorial) => combinatorial_checks()?,
    };
    for c in &checks {
        let status = match (c.passed, c.known_deviation) {
            (true, _) => "PASS",
            (false, Some(_)) => "FAIL (known deviation)",
            (false, None) => "FAIL",
        };
        eprintln!("{status:<24} {}: {}", c.name, c.detail);
    }
    match format.unwrap_or(Format::Csv) {
        Format::Json => emit(out, &json(&checks)?)?,
        Format::Csv => {
            let rows = checks.iter().map(|c| {
                [
                    c.name.to_string(),
                    c.passed.to_string(),
                    c.known_deviation.is_some().to_string(),
                    c.detail.clone(),
                ]
            });
            emit(
                out,
                &csv_table(&["identity", "passed", "known_deviation", "detail"], rows)?,
            )?
        }
    }
    Ok(if checks.iter().any(|c| c.is_unexpected_failure()) {
        2
    } else {
        0
    })
}
