//! Synthetic screening benchmarks.
//!
//! Designs are Gaussian with identity or AR(1) covariance; responses follow
//! one of six models with coefficients `(-1)^W (2 + |V|)`,
//! `W ~ Bernoulli(0.6)`, `V ~ N(0, 1)`. Every repetition draws from its own
//! ChaCha8 stream, so runs are reproducible and independent of how
//! repetitions are scheduled across threads.

use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Bernoulli, Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::aggregation::{
    acs_from_table, local_table, measure_table, prepare_dataset, racs_from_tables, racs_partition_seed,
    sas_from_table, EstimateVector, Method,
};
use crate::data::{Dataset, Partition, PartitionMode};
use crate::error::{Result, ScreenError};
use crate::measures::{builtin_measure, EvalMode, LocalStatistic, Measure, MeasureSpec};
use crate::screening::{
    evaluate_repetitions, oracle_threshold, rmse, threshold_screen, top_k_screen, MetricsReport,
    ScreenResult,
};

/// AR(1) coefficient used by models (b) to (f).
pub const AR_RHO: f64 = 0.5;

/// Probability that a generated coefficient is negative.
pub const NEGATIVE_SIGN_PROB: f64 = 0.6;

/// Independent stream for repetition `rep` of a run seeded with `seed`.
pub fn rep_rng(seed: u64, rep: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(rep);
    rng
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Covariance {
    Identity,
    /// `cov(X_j, X_r) = rho^{|j - r|}`.
    Ar(f64),
}

impl fmt::Display for Covariance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Covariance::Identity => f.write_str("identity"),
            Covariance::Ar(rho) => write!(f, "ar({rho})"),
        }
    }
}

/// Column-major Gaussian design matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Design {
    n_rows: usize,
    n_features: usize,
    data: Vec<f64>,
}

impl Design {
    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.data[j * self.n_rows..(j + 1) * self.n_rows]
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[j * self.n_rows + i]
    }

    /// Builds a design from explicit column-major values.
    pub fn from_columns(n_rows: usize, data: Vec<f64>) -> Result<Self> {
        if n_rows == 0 || data.is_empty() || !data.len().is_multiple_of(n_rows) {
            return Err(ScreenError::InvalidConfig("design shape".into()));
        }
        Ok(Self {
            n_rows,
            n_features: data.len() / n_rows,
            data,
        })
    }

    pub fn into_dataset(self, response: Vec<f64>) -> Result<Dataset> {
        Dataset::from_columns(self.n_rows, self.data, response, None)
    }
}

/// Draws an `n x p` design row by row.
///
/// The AR design uses the recursion `X_1 = e_1`,
/// `X_j = rho X_{j-1} + sqrt(1 - rho^2) e_j`, which has the stationary
/// covariance `rho^{|j - r|}`.
pub fn gen_design<R: Rng + ?Sized>(n: usize, p: usize, cov: Covariance, rng: &mut R) -> Design {
    let mut data = vec![0.0; n * p];
    for i in 0..n {
        let mut prev = 0.0;
        for j in 0..p {
            let e: f64 = rng.sample(StandardNormal);
            let v = match cov {
                Covariance::Identity => e,
                Covariance::Ar(rho) if j > 0 => rho * prev + (1.0 - rho * rho).sqrt() * e,
                Covariance::Ar(_) => e,
            };
            data[j * n + i] = v;
            prev = v;
        }
    }
    Design {
        n_rows: n,
        n_features: p,
        data,
    }
}

/// `count` coefficients `(-1)^W (2 + |V|)`.
pub fn gen_coefficients<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<f64> {
    let sign = Bernoulli::new(NEGATIVE_SIGN_PROB).expect("valid probability");
    (0..count)
        .map(|_| {
            let w = sign.sample(rng);
            let v: f64 = rng.sample(StandardNormal);
            let magnitude = 2.0 + v.abs();
            if w {
                -magnitude
            } else {
                magnitude
            }
        })
        .collect()
}

/// The six data-generating models.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Model {
    A,
    B,
    C,
    D,
    E,
    F,
}

impl Model {
    pub const ALL: [Model; 6] = [Model::A, Model::B, Model::C, Model::D, Model::E, Model::F];

    /// 0-based indices of the features the response depends on.
    pub fn active_set(self) -> &'static [usize] {
        match self {
            Model::A => &[0, 1, 2, 3, 4, 5, 6, 7],
            Model::B | Model::C | Model::D | Model::E => &[0, 3, 6, 9],
            Model::F => &[0, 1, 11, 21],
        }
    }

    pub fn n_coefficients(self) -> usize {
        match self {
            Model::A => 8,
            Model::B | Model::C | Model::D | Model::E => 4,
            Model::F => 3,
        }
    }

    /// Smallest `p` that contains every active feature.
    pub fn min_features(self) -> usize {
        self.active_set().iter().max().map_or(0, |&j| j + 1)
    }

    /// Full-scale `(N, p)` for this model.
    pub fn reference_size(self) -> (usize, usize) {
        match self {
            Model::A => (1500, 1500),
            Model::B => (1200, 1500),
            Model::C => (2400, 2500),
            Model::D => (3600, 3600),
            Model::E => (4800, 4800),
            Model::F => (10_000, 10_000),
        }
    }

    pub fn default_covariance(self) -> Covariance {
        match self {
            Model::A => Covariance::Identity,
            _ => Covariance::Ar(AR_RHO),
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Model::A => "a",
            Model::B => "b",
            Model::C => "c",
            Model::D => "d",
            Model::E => "e",
            Model::F => "f",
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Model {
    type Err = ScreenError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "a" => Ok(Model::A),
            "b" => Ok(Model::B),
            "c" => Ok(Model::C),
            "d" => Ok(Model::D),
            "e" => Ok(Model::E),
            "f" => Ok(Model::F),
            _ => Err(ScreenError::InvalidConfig(format!("unknown model {s:?}"))),
        }
    }
}

fn check_model_shape(model: Model, x: &Design, betas: &[f64]) -> Result<()> {
    if x.n_features() < model.min_features() {
        return Err(ScreenError::InvalidConfig(format!(
            "model ({model}) needs p >= {}, got {}",
            model.min_features(),
            x.n_features()
        )));
    }
    if betas.len() < model.n_coefficients() {
        return Err(ScreenError::InvalidConfig(format!(
            "model ({model}) needs {} coefficients, got {}",
            model.n_coefficients(),
            betas.len()
        )));
    }
    Ok(())
}

#[inline]
fn step(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else {
        0.0
    }
}

/// Response of `model` for the given design, coefficients and noise.
pub fn response_with_noise(model: Model, x: &Design, betas: &[f64], noise: &[f64]) -> Result<Vec<f64>> {
    check_model_shape(model, x, betas)?;
    if noise.len() != x.n_rows() {
        return Err(ScreenError::InvalidConfig("noise length differs from N".into()));
    }
    let b = betas;
    let y = (0..x.n_rows())
        .map(|i| {
            let c = |j: usize| x.get(i, j);
            let e = noise[i];
            match model {
                Model::A => (0..8).map(|k| b[k] * c(k)).sum::<f64>() + e,
                Model::B => b[0] * c(0) + b[1] * c(3) + b[2] * c(6) + b[3] * c(9) + e,
                Model::C => (b[0] * c(0) + b[1] * c(3) + b[2] * c(6) + b[3] * c(9) + e).exp(),
                Model::D => {
                    b[0] * c(0) + b[1] * c(3) + (b[2].abs() * c(6) + b[3].abs() * c(9)).exp() + e
                }
                Model::E => {
                    b[0] * c(0) + b[1] * c(3).powi(2) + b[2] * step(c(6)) + b[3] * c(9).abs() + e
                }
                Model::F => {
                    2.0 * b[0] * c(0) * c(1) + 2.0 * b[1] * step(c(11)) + 3.0 * b[2] * c(21) + e
                }
            }
        })
        .collect();
    Ok(y)
}

/// Response of `model` with fresh `N(0, 1)` noise.
pub fn gen_response<R: Rng + ?Sized>(model: Model, x: &Design, betas: &[f64], rng: &mut R) -> Result<Vec<f64>> {
    check_model_shape(model, x, betas)?;
    let noise: Vec<f64> = (0..x.n_rows()).map(|_| rng.sample(StandardNormal)).collect();
    response_with_noise(model, x, betas, &noise)
}

/// How each repetition turns estimates into a retained set.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SimRule {
    /// `gamma = rho * min over the active set of the centralized estimate`.
    Oracle { rho: f64 },
    TopK { k: usize },
}

/// One screening simulation setup.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimConfig {
    pub model: Model,
    pub n: usize,
    pub p: usize,
    pub cov: Covariance,
    pub t: usize,
    pub m: usize,
    pub measure: Measure,
    pub rule: SimRule,
    pub r: usize,
    pub seed: u64,
    pub methods: Vec<Method>,
    pub mode: EvalMode,
    /// Local statistic whose `g` SAS averages.
    pub sas_local: LocalStatistic,
}

impl SimConfig {
    /// Defaults: the model's covariance, `T = 30`, oracle threshold with
    /// `rho = 0.8`, `R = 3`, all three distributed methods.
    pub fn new(model: Model, n: usize, p: usize, m: usize, measure: Measure) -> Self {
        Self {
            model,
            n,
            p,
            cov: model.default_covariance(),
            t: 30,
            m,
            measure,
            rule: SimRule::Oracle { rho: 0.8 },
            r: 3,
            seed: 1,
            methods: vec![Method::Sas, Method::Acs, Method::Racs],
            mode: EvalMode::Fast,
            sas_local: LocalStatistic::Unbiased,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n == 0 || self.p == 0 || self.t == 0 || self.m == 0 || self.r == 0 {
            return Err(ScreenError::InvalidConfig("N, p, T, m and R must be >= 1".into()));
        }
        if self.p < self.model.min_features() {
            return Err(ScreenError::InvalidConfig(format!(
                "model ({}) needs p >= {}, got {}",
                self.model,
                self.model.min_features(),
                self.p
            )));
        }
        let degree = builtin_measure(self.measure).max_degree();
        if self.m > self.n || self.n / self.m < degree {
            return Err(ScreenError::InvalidConfig(format!(
                "m={} leaves segments smaller than the kernel degree {degree} at N={}",
                self.m, self.n
            )));
        }
        match self.rule {
            SimRule::Oracle { rho } if !(rho > 0.0 && rho <= 1.0) => {
                return Err(ScreenError::InvalidRho(rho))
            }
            SimRule::TopK { k } if k == 0 || k > self.p => {
                return Err(ScreenError::InvalidTopK { k, p: self.p })
            }
            _ => {}
        }
        if self.methods.iter().any(|m| matches!(m, Method::Centralized)) {
            return Err(ScreenError::InvalidConfig(
                "methods are sas, acs and racs".into(),
            ));
        }
        Ok(())
    }
}

/// Metrics and mean wall-clock seconds for one method.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodReport {
    pub method: Method,
    pub metrics: MetricsReport,
    /// Mean seconds per repetition of the distributed pass.
    pub time_distributed: f64,
}

/// A repetition that could not be screened.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SkippedRep {
    pub rep: usize,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreeningReport {
    pub config: SimConfig,
    pub methods: Vec<MethodReport>,
    /// Mean seconds per repetition of the centralized pass; absent under top-k.
    pub time_centralized: Option<f64>,
    pub skipped: Vec<SkippedRep>,
}

struct RepOutcome {
    results: Vec<(ScreenResult, f64)>,
    time_centralized: Option<f64>,
}

fn screen(est: &EstimateVector, gamma: Option<f64>, rule: SimRule) -> Result<ScreenResult> {
    match (rule, gamma) {
        (SimRule::TopK { k }, _) => top_k_screen(est, k),
        (SimRule::Oracle { .. }, Some(g)) => threshold_screen(est, g),
        (SimRule::Oracle { .. }, None) => unreachable!("oracle threshold computed first"),
    }
}

fn run_repetition(cfg: &SimConfig, spec: &MeasureSpec, rep: usize) -> Result<RepOutcome> {
    let mut rng = rep_rng(cfg.seed, rep as u64);
    let x = gen_design(cfg.n, cfg.p, cfg.cov, &mut rng);
    let betas = gen_coefficients(cfg.model.n_coefficients(), &mut rng);
    let y = gen_response(cfg.model, &x, &betas, &mut rng)?;
    let partition_seed = rng.next_u64();
    let ds = x.into_dataset(y)?;
    let active = cfg.model.active_set();

    let (gamma, time_centralized) = match cfg.rule {
        SimRule::Oracle { rho } => {
            let start = Instant::now();
            let prepared = prepare_dataset(&ds, spec)?;
            let whole = Partition::contiguous(cfg.n, 1)?;
            let table = measure_table(&prepared, &whole, spec, cfg.mode)?;
            let mut centralized = acs_from_table(&table, spec, 0);
            centralized.method = Method::Centralized;
            let elapsed = start.elapsed().as_secs_f64();
            let gamma = oracle_threshold(&centralized, active, rho)?;
            if gamma <= 0.0 {
                // an active feature with a zero centralized estimate
                return Err(ScreenError::InvalidThreshold(gamma));
            }
            (Some(gamma), Some(elapsed))
        }
        SimRule::TopK { .. } => (None, None),
    };

    let start = Instant::now();
    let prepared = prepare_dataset(&ds, spec)?;
    let part = Partition::new(cfg.n, cfg.m, partition_seed, PartitionMode::RandomShuffle)?;
    let first = measure_table(&prepared, &part, spec, cfg.mode)?;
    let shared = start.elapsed().as_secs_f64();

    let mut results = Vec::with_capacity(cfg.methods.len());
    for &method in &cfg.methods {
        let start = Instant::now();
        let est = match method {
            Method::Acs => acs_from_table(&first, spec, partition_seed),
            Method::Sas => match cfg.sas_local {
                LocalStatistic::Unbiased => sas_from_table(&first, spec, partition_seed),
                LocalStatistic::Classical => {
                    let table = local_table(&prepared, &part, spec, cfg.mode, cfg.sas_local)?;
                    sas_from_table(&table, spec, partition_seed)
                }
            },
            Method::Racs => {
                let mut tables = vec![first.clone()];
                for k in 1..cfg.r {
                    let part = Partition::new(
                        cfg.n,
                        cfg.m,
                        racs_partition_seed(partition_seed, k),
                        PartitionMode::RandomShuffle,
                    )?;
                    tables.push(measure_table(&prepared, &part, spec, cfg.mode)?);
                }
                racs_from_tables(&tables, spec, partition_seed)
            }
            Method::Centralized => unreachable!("rejected by validate"),
        };
        let elapsed = shared + start.elapsed().as_secs_f64();
        results.push((screen(&est, gamma, cfg.rule)?, elapsed));
    }
    Ok(RepOutcome {
        results,
        time_centralized,
    })
}

/// Runs `cfg.t` repetitions of generate, estimate, screen and evaluate.
///
/// A repetition whose oracle threshold cannot be formed is skipped and
/// listed in the report; it is an error only if every repetition fails.
pub fn run_screening_experiment(cfg: &SimConfig) -> Result<ScreeningReport> {
    cfg.validate()?;
    let spec = builtin_measure(cfg.measure);
    let outcomes: Vec<Result<RepOutcome>> = (0..cfg.t)
        .into_par_iter()
        .map(|rep| run_repetition(cfg, &spec, rep))
        .collect();

    let mut skipped = Vec::new();
    let mut per_method: Vec<Vec<ScreenResult>> = vec![Vec::new(); cfg.methods.len()];
    let mut times: Vec<f64> = vec![0.0; cfg.methods.len()];
    let mut central_time = 0.0;
    let mut done = 0usize;
    for (rep, outcome) in outcomes.into_iter().enumerate() {
        match outcome {
            Ok(o) => {
                done += 1;
                central_time += o.time_centralized.unwrap_or(0.0);
                for (k, (res, t)) in o.results.into_iter().enumerate() {
                    per_method[k].push(res);
                    times[k] += t;
                }
            }
            Err(
                e @ (ScreenError::DegenerateActiveFeature(_)
                | ScreenError::Degenerate(_)
                | ScreenError::InvalidThreshold(_)),
            ) => {
                skipped.push(SkippedRep {
                    rep,
                    reason: e.to_string(),
                });
            }
            Err(e) => return Err(e),
        }
    }
    if done == 0 {
        return Err(ScreenError::AllRepetitionsSkipped(
            skipped.first().map_or_else(String::new, |s| s.reason.clone()),
        ));
    }
    let active = cfg.model.active_set();
    let methods = cfg
        .methods
        .iter()
        .zip(per_method)
        .zip(times)
        .map(|((&method, results), time)| {
            Ok(MethodReport {
                method,
                metrics: evaluate_repetitions(&results, active)?,
                time_distributed: time / done as f64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ScreeningReport {
        config: cfg.clone(),
        methods,
        time_centralized: matches!(cfg.rule, SimRule::Oracle { .. }).then(|| central_time / done as f64),
        skipped,
    })
}

/// Header of the screening CSV.
pub const SCREENING_CSV_HEADER: [&str; 10] = [
    "m", "correlation", "method", "SSR", "MS", "Std(MS)", "PSR", "FDR", "Time^n", "Time^N",
];

/// Writes one row per method. With `timing = false` the two time columns
/// are written as `NA`, making the file a pure function of the config.
pub fn write_screening_csv<W: Write>(out: W, report: &ScreeningReport, timing: bool) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| ScreenError::Csv(e.to_string());
    w.write_record(SCREENING_CSV_HEADER).map_err(err)?;
    let na = || "NA".to_owned();
    for mr in &report.methods {
        let m = &mr.metrics;
        w.write_record([
            report.config.m.to_string(),
            report.config.measure.to_string(),
            mr.method.to_string(),
            m.ssr.to_string(),
            m.ms.to_string(),
            m.std_ms.to_string(),
            m.psr.to_string(),
            m.fdr.to_string(),
            if timing { mr.time_distributed.to_string() } else { na() },
            match (timing, report.time_centralized) {
                (true, Some(t)) => t.to_string(),
                _ => na(),
            },
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| ScreenError::Csv(e.to_string()))
}

/// Estimator family in the accuracy study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RmseMethod {
    /// Simple average of local estimates.
    #[serde(rename = "SA")]
    Sa,
    /// Aggregated components.
    #[serde(rename = "AC")]
    Ac,
    /// Aggregated components over several random partitions.
    #[serde(rename = "rAC")]
    RAc,
}

impl RmseMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            RmseMethod::Sa => "SA",
            RmseMethod::Ac => "AC",
            RmseMethod::RAc => "rAC",
        }
    }
}

impl fmt::Display for RmseMethod {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Settings of the accuracy study on independent `(Y, X)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RmseConfig {
    pub n: usize,
    pub m_list: Vec<usize>,
    pub t: usize,
    pub measures: Vec<Measure>,
    pub r: usize,
    pub seed: u64,
    pub mode: EvalMode,
    /// Local statistic whose `g` SA averages.
    pub sas_local: LocalStatistic,
}

impl RmseConfig {
    /// `N = 2700`, `m in {45, 90, 180}`, `T = 500`, Kendall, SIRS and DC, `R = 3`.
    pub fn reference_setup(seed: u64) -> Self {
        Self {
            n: 2700,
            m_list: vec![45, 90, 180],
            t: 500,
            measures: vec![Measure::Kendall, Measure::Sirs, Measure::Dc],
            r: 3,
            seed,
            mode: EvalMode::Fast,
            sas_local: LocalStatistic::Unbiased,
        }
    }
}

/// One cell of the accuracy table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RmseRow {
    pub measure: Measure,
    pub method: RmseMethod,
    pub m: usize,
    pub rmse: f64,
    /// Delta-method standard error of the RMSE across repetitions.
    pub se: f64,
    /// The `T` estimates, in repetition order.
    pub estimates: Vec<f64>,
}

fn rmse_with_se(estimates: &[f64]) -> Result<(f64, f64)> {
    let value = rmse(estimates, 0.0)?;
    let t = estimates.len() as f64;
    let sq: Vec<f64> = estimates.iter().map(|e| e * e).collect();
    let mean_sq = sq.iter().sum::<f64>() / t;
    let var_sq = if estimates.len() > 1 {
        sq.iter().map(|s| (s - mean_sq).powi(2)).sum::<f64>() / (t - 1.0)
    } else {
        0.0
    };
    let se = if value > 0.0 {
        (var_sq / t).sqrt() / (2.0 * value)
    } else {
        0.0
    };
    Ok((value, se))
}

/// Accuracy of SA, AC and rAC when the true correlation is zero.
///
/// Each repetition draws one dataset of independent standard normals and
/// splits that same dataset for every `m`, so differences across `m` are
/// not confounded with data noise. AC and SA share a partition; rAC adds
/// `R - 1` further random partitions.
pub fn run_rmse_experiment(cfg: &RmseConfig) -> Result<Vec<RmseRow>> {
    if cfg.t == 0 || cfg.r == 0 || cfg.m_list.is_empty() || cfg.measures.is_empty() {
        return Err(ScreenError::InvalidConfig(
            "T, R, m-list and measures must be nonempty".into(),
        ));
    }
    for &m in &cfg.m_list {
        for &measure in &cfg.measures {
            let degree = builtin_measure(measure).max_degree();
            if m == 0 || m > cfg.n || cfg.n / m < degree {
                return Err(ScreenError::InvalidConfig(format!(
                    "m={m} is invalid for N={} with {measure}",
                    cfg.n
                )));
            }
        }
    }
    let specs: Vec<MeasureSpec> = cfg.measures.iter().map(|&m| builtin_measure(m)).collect();
    let cells = cfg.measures.len() * cfg.m_list.len();

    // reps x measures x m-list x 3 estimates
    let per_rep: Vec<Vec<[f64; 3]>> = (0..cfg.t)
        .into_par_iter()
        .map(|rep| {
            let mut rng = rep_rng(cfg.seed, rep as u64);
            let x: Vec<f64> = (0..cfg.n).map(|_| rng.sample(StandardNormal)).collect();
            let y: Vec<f64> = (0..cfg.n).map(|_| rng.sample(StandardNormal)).collect();
            let seeds: Vec<u64> = cfg.m_list.iter().map(|_| rng.next_u64()).collect();
            let ds = Dataset::from_feature_columns(vec![x], y)?;
            let mut out = Vec::with_capacity(cells);
            for spec in &specs {
                let prepared = prepare_dataset(&ds, spec)?;
                for (&m, &seed) in cfg.m_list.iter().zip(&seeds) {
                    let tables = (0..cfg.r)
                        .map(|k| {
                            let part = Partition::new(
                                cfg.n,
                                m,
                                racs_partition_seed(seed, k),
                                PartitionMode::RandomShuffle,
                            )?;
                            measure_table(&prepared, &part, spec, cfg.mode)
                        })
                        .collect::<Result<Vec<_>>>()?;
                    let sa = match cfg.sas_local {
                        LocalStatistic::Unbiased => sas_from_table(&tables[0], spec, seed),
                        LocalStatistic::Classical => {
                            let part = Partition::new(cfg.n, m, seed, PartitionMode::RandomShuffle)?;
                            let table = local_table(&prepared, &part, spec, cfg.mode, cfg.sas_local)?;
                            sas_from_table(&table, spec, seed)
                        }
                    };
                    let ac = acs_from_table(&tables[0], spec, seed);
                    let rac = racs_from_tables(&tables, spec, seed);
                    out.push([sa.values[0], ac.values[0], rac.values[0]]);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;

    let mut rows = Vec::with_capacity(cells * 3);
    for (mi, &measure) in cfg.measures.iter().enumerate() {
        for (k, method) in [RmseMethod::Sa, RmseMethod::Ac, RmseMethod::RAc].into_iter().enumerate() {
            for (li, &m) in cfg.m_list.iter().enumerate() {
                let cell = mi * cfg.m_list.len() + li;
                let estimates: Vec<f64> = per_rep.iter().map(|r| r[cell][k]).collect();
                let (value, se) = rmse_with_se(&estimates)?;
                rows.push(RmseRow {
                    measure,
                    method,
                    m,
                    rmse: value,
                    se,
                    estimates,
                });
            }
        }
    }
    Ok(rows)
}

/// Figure-style CSV: `measure,method,m,RMSE,SE`.
pub fn write_rmse_csv<W: Write>(out: W, rows: &[RmseRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| ScreenError::Csv(e.to_string());
    w.write_record(["measure", "method", "m", "RMSE", "SE"]).map_err(err)?;
    for r in rows {
        w.write_record([
            r.measure.to_string(),
            r.method.to_string(),
            r.m.to_string(),
            r.rmse.to_string(),
            r.se.to_string(),
        ])
        .map_err(err)?;
    }
    w.flush().map_err(|e| ScreenError::Csv(e.to_string()))
}
