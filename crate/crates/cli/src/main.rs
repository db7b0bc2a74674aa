//! `acs`: distributed correlation screening from the command line.
//!
//! Exit codes: 0 success, 1 usage, 2 data validation, 3 numerical
//! degeneracy that makes the whole run meaningless.

mod manifest;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use acs_core::aggregation::{
    acs_from_table, local_table, measure_table, prepare_dataset, racs_from_tables,
    racs_partition_seed, sas_from_table, EstimateVector,
};
use acs_core::data::{read_csv, standardize, ColumnSelector, Partition, PartitionMode};
use acs_core::measures::{builtin_measure, EvalMode, LocalStatistic, Measure};
use acs_core::screening::{threshold_screen, top_k_screen, write_retained_csv};
use acs_core::simbench::{
    run_rmse_experiment, run_screening_experiment, write_rmse_csv, write_screening_csv,
    Covariance, Model, RmseConfig, SimConfig, SimRule, AR_RHO,
};
use acs_core::{Method, ScreenError};
use anyhow::{Context, Result};
use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::manifest::{Manifest, Timings};

/// Desk-scale simulation size used when neither `--N`/`--p` nor `--full` is given.
const DESK_N: usize = 600;
const DESK_P: usize = 300;

#[derive(Debug, Parser)]
#[command(name = "acs", version, about = "Aggregated correlation screening")]
struct Cli {
    /// Worker threads (defaults to available parallelism).
    #[arg(long, env = "ACS_THREADS", global = true, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,

    /// Leave wall-clock timings out of every output, manifest included.
    #[arg(long, global = true)]
    no_timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Screen the features of a CSV file against its response column.
    Screen(ScreenArgs),
    /// Run the synthetic screening study for one model.
    Simulate(SimulateArgs),
    /// Accuracy of SA, AC and rAC on independent normal data.
    RmseBench(RmseArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum MethodArg {
    Acs,
    Sas,
    Racs,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum SimMethodArg {
    Acs,
    Sas,
    Racs,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
enum CovArg {
    Identity,
    Ar,
}

fn parse_measure(s: &str) -> std::result::Result<Measure, String> {
    s.parse().map_err(|e: ScreenError| e.to_string())
}

fn parse_model(s: &str) -> std::result::Result<Model, String> {
    s.parse().map_err(|e: ScreenError| e.to_string())
}

fn parse_local(s: &str) -> std::result::Result<LocalStatistic, String> {
    s.parse().map_err(|e: ScreenError| e.to_string())
}

#[derive(Debug, Args, Serialize)]
#[command(group(ArgGroup::new("rule").required(true)))]
struct ScreenArgs {
    /// Input CSV with a header row.
    #[arg(long)]
    input: PathBuf,
    /// Response column: header name, or 0-based column index.
    #[arg(long)]
    response: String,
    /// pearson, kendall, sirs or dc.
    #[arg(long, value_parser = parse_measure)]
    measure: Measure,
    /// Number of segments.
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    m: u32,
    /// Keep features with estimate >= gamma.
    #[arg(long, group = "rule")]
    gamma: Option<f64>,
    /// Keep the k largest estimates.
    #[arg(long, group = "rule", value_parser = clap::value_parser!(u32).range(1..))]
    top_k: Option<u32>,
    #[arg(long, value_enum, default_value_t = MethodArg::Acs)]
    method: MethodArg,
    /// Random partitions for racs.
    #[arg(long = "R", default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    r: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Split rows in file order instead of shuffling.
    #[arg(long)]
    contiguous: bool,
    /// Standardize features first (always done for sirs).
    #[arg(long)]
    standardize: bool,
    /// Enumerate kernels directly instead of the fast paths.
    #[arg(long)]
    naive: bool,
    /// Local statistic behind SAS: unbiased or classical.
    #[arg(long, value_parser = parse_local, default_value = "unbiased")]
    sas_local: LocalStatistic,
    /// Also write the per-segment component table as components.json.
    #[arg(long)]
    dump_components: bool,
    /// Output directory.
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct SimulateArgs {
    /// a, b, c, d, e or f.
    #[arg(long, value_parser = parse_model)]
    model: Model,
    #[arg(long = "N", value_parser = clap::value_parser!(u32).range(1..))]
    n: Option<u32>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    p: Option<u32>,
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..))]
    m: u32,
    #[arg(long, value_parser = parse_measure)]
    measure: Measure,
    /// Oracle threshold scale.
    #[arg(long, default_value_t = 0.8, group = "rule")]
    rho: f64,
    /// Screen the k largest estimates instead of the oracle threshold.
    #[arg(long, group = "rule", value_parser = clap::value_parser!(u32).range(1..))]
    top_k: Option<u32>,
    /// Repetitions (default 30, or 100 with --full).
    #[arg(long = "T", value_parser = clap::value_parser!(u32).range(1..))]
    t: Option<u32>,
    #[arg(long, value_enum, default_value_t = SimMethodArg::All)]
    method: SimMethodArg,
    #[arg(long = "R", default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    r: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Override the model's feature covariance.
    #[arg(long, value_enum)]
    cov: Option<CovArg>,
    /// Use the full-scale N, p and T for the model.
    #[arg(long)]
    full: bool,
    #[arg(long)]
    naive: bool,
    #[arg(long, value_parser = parse_local, default_value = "unbiased")]
    sas_local: LocalStatistic,
    #[arg(long)]
    output: PathBuf,
}

#[derive(Debug, Args, Serialize)]
struct RmseArgs {
    #[arg(long = "N", default_value_t = 2700, value_parser = clap::value_parser!(u32).range(1..))]
    n: u32,
    #[arg(long, value_delimiter = ',', default_value = "45,90,180", value_parser = clap::value_parser!(u32).range(1..))]
    m_list: Vec<u32>,
    #[arg(long = "T", default_value_t = 500, value_parser = clap::value_parser!(u32).range(1..))]
    t: u32,
    #[arg(long, value_delimiter = ',', default_value = "kendall,sirs,dc", value_parser = parse_measure)]
    measures: Vec<Measure>,
    #[arg(long = "R", default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    r: u32,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    naive: bool,
    #[arg(long, value_parser = parse_local, default_value = "unbiased")]
    sas_local: LocalStatistic,
    #[arg(long)]
    output: PathBuf,
}

/// A failure that is not a library error but still maps to an exit code.
#[derive(Debug)]
enum CliError {
    Usage(String),
    Fatal(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(s) | CliError::Fatal(s) => f.write_str(s),
        }
    }
}

impl std::error::Error for CliError {}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<CliError>() {
        return match e {
            CliError::Usage(_) => 1,
            CliError::Fatal(_) => 3,
        };
    }
    match err.downcast_ref::<ScreenError>() {
        Some(
            ScreenError::Io { .. }
            | ScreenError::Csv(_)
            | ScreenError::NonNumeric { .. }
            | ScreenError::NonFinite { .. }
            | ScreenError::ResponseNotFound(_)
            | ScreenError::EmptyTable
            | ScreenError::InvalidDataset(_)
            | ScreenError::NearConstantFeature { .. }
            | ScreenError::EmptyInput,
        ) => 2,
        Some(
            ScreenError::Degenerate(_)
            | ScreenError::DegenerateActiveFeature(_)
            | ScreenError::AllRepetitionsSkipped(_),
        ) => 3,
        Some(_) => 1,
        // output directory and file errors
        None => 2,
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    if let Some(n) = cli.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(usize::from(n))
            .build_global()
            .context("configuring the thread pool")?;
    }
    match &cli.command {
        Command::Screen(args) => screen(cli, args),
        Command::Simulate(args) => simulate(cli, args),
        Command::RmseBench(args) => rmse_bench(cli, args),
    }
}

fn eval_mode(naive: bool) -> EvalMode {
    if naive {
        EvalMode::Naive
    } else {
        EvalMode::Fast
    }
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).with_context(|| format!("creating output directory {}", path.display()))
}

fn write_file(dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
    let path = dir.join(name);
    fs::write(&path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn screen(cli: &Cli, args: &ScreenArgs) -> Result<()> {
    let mut timings = Timings::new(!cli.no_timing);
    let start = Instant::now();
    let bytes = fs::read(&args.input).map_err(|source| ScreenError::Io {
        path: args.input.clone(),
        source,
    })?;
    let mut ds = read_csv(&bytes[..], &ColumnSelector::Name(args.response.clone()))?;
    if args.standardize {
        ds = standardize(&ds)?.0;
    }
    timings.record("load", start);

    let spec = builtin_measure(args.measure);
    let mode = eval_mode(args.naive);
    let m = args.m as usize;
    let part_mode = if args.contiguous {
        PartitionMode::Contiguous
    } else {
        PartitionMode::RandomShuffle
    };
    if args.contiguous && args.method == MethodArg::Racs && args.r > 1 {
        return Err(CliError::Usage("racs needs random partitions; drop --contiguous".into()).into());
    }
    let n = ds.n_rows();

    let start = Instant::now();
    let prepared = prepare_dataset(&ds, &spec)?;
    let part = Partition::new(n, m, args.seed, part_mode)?;
    let (est, tables): (EstimateVector, Vec<_>) = match args.method {
        MethodArg::Acs => {
            let table = measure_table(&prepared, &part, &spec, mode)?;
            (acs_from_table(&table, &spec, args.seed), vec![table])
        }
        MethodArg::Sas => {
            let table = local_table(&prepared, &part, &spec, mode, args.sas_local)?;
            (sas_from_table(&table, &spec, args.seed), vec![table])
        }
        MethodArg::Racs => {
            let tables = (0..args.r as usize)
                .map(|k| {
                    let part = Partition::new(n, m, racs_partition_seed(args.seed, k), part_mode)?;
                    measure_table(&prepared, &part, &spec, mode)
                })
                .collect::<acs_core::Result<Vec<_>>>()?;
            (racs_from_tables(&tables, &spec, args.seed), tables)
        }
    };
    timings.record("estimate", start);

    for fault in &est.faults {
        eprintln!(
            "warning: feature {} ({}): {}; dropped segments {}{}",
            fault.feature,
            ds.feature_name(fault.feature),
            fault.reason,
            fault.dropped_segments,
            if fault.sentinel { ", estimate set to sentinel" } else { "" }
        );
    }
    if est.degenerate_mask().iter().all(|&d| d) {
        return Err(CliError::Fatal(format!(
            "every feature is degenerate under {} (is the response constant?)",
            args.measure
        ))
        .into());
    }

    let result = match (args.gamma, args.top_k) {
        (Some(g), None) => threshold_screen(&est, g)?,
        (None, Some(k)) => top_k_screen(&est, k as usize)?,
        _ => return Err(CliError::Usage("exactly one of --gamma or --top-k is required".into()).into()),
    };

    let names: Vec<String> = (0..ds.n_features()).map(|j| ds.feature_name(j)).collect();
    create_dir(&args.output)?;
    let mut buf = Vec::new();
    est.write_csv(&mut buf, &names)?;
    write_file(&args.output, "estimates.csv", &buf)?;
    let mut buf = Vec::new();
    write_retained_csv(&mut buf, &result, &est, &names)?;
    write_file(&args.output, "retained.csv", &buf)?;
    let mut outputs = vec!["estimates.csv", "retained.csv"];
    if args.dump_components {
        let dump: Vec<_> = tables.iter().map(|t| t.to_json()).collect();
        write_file(&args.output, "components.json", &manifest::to_json_bytes(&dump)?)?;
        outputs.push("components.json");
    }
    let manifest = Manifest::new("screen", cli, args, args.seed, &outputs, timings)
        .with_input(&args.input, &bytes);
    manifest.write(&args.output)?;
    Ok(())
}

fn simulate(cli: &Cli, args: &SimulateArgs) -> Result<()> {
    let (full_n, full_p) = args.model.reference_size();
    let n = args.n.map_or(if args.full { full_n } else { DESK_N }, |v| v as usize);
    let p = args.p.map_or(
        if args.full { full_p } else { DESK_P.max(args.model.min_features()) },
        |v| v as usize,
    );
    let mut cfg = SimConfig::new(args.model, n, p, args.m as usize, args.measure);
    cfg.t = args.t.map_or(if args.full { 100 } else { 30 }, |v| v as usize);
    cfg.cov = match args.cov {
        None => args.model.default_covariance(),
        Some(CovArg::Identity) => Covariance::Identity,
        Some(CovArg::Ar) => Covariance::Ar(AR_RHO),
    };
    cfg.rule = match args.top_k {
        Some(k) => SimRule::TopK { k: k as usize },
        None => SimRule::Oracle { rho: args.rho },
    };
    cfg.r = args.r as usize;
    cfg.seed = args.seed;
    cfg.methods = match args.method {
        SimMethodArg::All => vec![Method::Sas, Method::Acs, Method::Racs],
        SimMethodArg::Acs => vec![Method::Acs],
        SimMethodArg::Sas => vec![Method::Sas],
        SimMethodArg::Racs => vec![Method::Racs],
    };
    cfg.mode = eval_mode(args.naive);
    cfg.sas_local = args.sas_local;

    let mut timings = Timings::new(!cli.no_timing);
    let start = Instant::now();
    let report = run_screening_experiment(&cfg)?;
    timings.record("experiment", start);
    for s in &report.skipped {
        eprintln!("warning: repetition {} skipped: {}", s.rep, s.reason);
    }

    create_dir(&args.output)?;
    let mut buf = Vec::new();
    write_screening_csv(&mut buf, &report, !cli.no_timing)?;
    write_file(&args.output, "metrics.csv", &buf)?;
    let mut json = serde_json::to_value(&report)?;
    if cli.no_timing {
        manifest::strip_timing_keys(&mut json);
    }
    write_file(&args.output, "metrics.json", &manifest::to_json_bytes(&json)?)?;
    let manifest = Manifest::new(
        "simulate",
        cli,
        args,
        args.seed,
        &["metrics.csv", "metrics.json"],
        timings,
    );
    manifest.write(&args.output)?;
    Ok(())
}

fn rmse_bench(cli: &Cli, args: &RmseArgs) -> Result<()> {
    let cfg = RmseConfig {
        n: args.n as usize,
        m_list: args.m_list.iter().map(|&m| m as usize).collect(),
        t: args.t as usize,
        measures: args.measures.clone(),
        r: args.r as usize,
        seed: args.seed,
        mode: eval_mode(args.naive),
        sas_local: args.sas_local,
    };
    let mut timings = Timings::new(!cli.no_timing);
    let start = Instant::now();
    let rows = run_rmse_experiment(&cfg)?;
    timings.record("experiment", start);

    create_dir(&args.output)?;
    let mut buf = Vec::new();
    write_rmse_csv(&mut buf, &rows)?;
    write_file(&args.output, "rmse.csv", &buf)?;
    let manifest = Manifest::new("rmse-bench", cli, args, args.seed, &["rmse.csv"], timings);
    manifest.write(&args.output)?;
    Ok(())
}
