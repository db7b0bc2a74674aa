//! Per-feature correlation estimates from segment-level component tables.
//!
//! * ACS averages each component's local U-statistics over segments, then
//!   applies `g` once.
//! * SAS applies `g` on every segment, then averages the local estimates.
//! * rACS averages component means over `R` independent random partitions
//!   before applying `g`.
//! * The centralized estimate is ACS on a single segment.
//!
//! Reductions run in fixed segment and partition order on the calling
//! thread; only table construction is parallel.

use std::borrow::Cow;
use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::data::{standardize, Dataset, Partition, PartitionMode};
use crate::error::{Result, ScreenError};
use crate::kernels::{build_table, check_segments, ComponentTable};
use crate::measures::{EvalMode, LocalStatistic, MeasureSpec};
use crate::sum::NeumaierSum;

/// Value stored for a feature whose estimate could not be formed.
pub const SENTINEL: f64 = 0.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Acs,
    Sas,
    Racs,
    Centralized,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Acs => "acs",
            Method::Sas => "sas",
            Method::Racs => "racs",
            Method::Centralized => "centralized",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for Method {
    type Err = ScreenError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "acs" => Ok(Method::Acs),
            "sas" => Ok(Method::Sas),
            "racs" => Ok(Method::Racs),
            "centralized" => Ok(Method::Centralized),
            _ => Err(ScreenError::InvalidConfig(format!("unknown method {s:?}"))),
        }
    }
}

/// Why a feature's estimate is incomplete.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureFault {
    pub feature: usize,
    pub reason: String,
    /// SAS only: segments left out of the average.
    pub dropped_segments: usize,
    /// True when the stored value is [`SENTINEL`] rather than an estimate.
    pub sentinel: bool,
}

/// One estimate per feature plus the settings that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EstimateVector {
    pub method: Method,
    pub measure: String,
    pub m: usize,
    pub r: usize,
    pub seed: u64,
    pub values: Vec<f64>,
    pub faults: Vec<FeatureFault>,
}

impl EstimateVector {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// True when feature `j` holds a sentinel instead of an estimate.
    pub fn is_degenerate(&self, j: usize) -> bool {
        self.faults.iter().any(|f| f.feature == j && f.sentinel)
    }

    pub fn degenerate_mask(&self) -> Vec<bool> {
        let mut mask = vec![false; self.values.len()];
        for f in self.faults.iter().filter(|f| f.sentinel) {
            mask[f.feature] = true;
        }
        mask
    }

    /// CSV with columns `feature, name, estimate, method, m, degenerate`.
    pub fn write_csv<W: Write>(&self, out: W, names: &[String]) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let err = |e: csv::Error| ScreenError::Csv(e.to_string());
        w.write_record(["feature", "name", "estimate", "method", "m", "degenerate"])
            .map_err(err)?;
        let mask = self.degenerate_mask();
        for (j, v) in self.values.iter().enumerate() {
            let name = names.get(j).map(String::as_str).unwrap_or("");
            w.write_record([
                j.to_string(),
                name.to_owned(),
                v.to_string(),
                self.method.to_string(),
                self.m.to_string(),
                mask[j].to_string(),
            ])
            .map_err(err)?;
        }
        w.flush().map_err(|e| ScreenError::Csv(e.to_string()))
    }
}

/// Standardizes the features when `spec` requires it, otherwise borrows `ds`.
pub fn prepare_dataset<'a>(ds: &'a Dataset, spec: &MeasureSpec) -> Result<Cow<'a, Dataset>> {
    if spec.requires_standardized_features() {
        Ok(Cow::Owned(standardize(ds)?.0))
    } else {
        Ok(Cow::Borrowed(ds))
    }
}

/// Local U-statistics of `spec` for every feature and segment.
///
/// Applies no standardization; callers pass already-prepared data.
pub fn measure_table(
    ds: &Dataset,
    part: &Partition,
    spec: &MeasureSpec,
    mode: EvalMode,
) -> Result<ComponentTable> {
    local_table(ds, part, spec, mode, LocalStatistic::Unbiased)
}

/// Like [`measure_table`] with a choice of local statistic.
pub fn local_table(
    ds: &Dataset,
    part: &Partition,
    spec: &MeasureSpec,
    mode: EvalMode,
    stat: LocalStatistic,
) -> Result<ComponentTable> {
    check_segments(part, spec.max_degree())?;
    let features: Vec<usize> = (0..ds.n_features()).collect();
    build_table(ds, part, &features, spec.component_ids(), |xs, ys| {
        spec.local_components(xs, ys, mode, stat)
    })
}

fn g_of_means(means: &[Vec<f64>], spec: &MeasureSpec) -> (Vec<f64>, Vec<FeatureFault>) {
    let mut values = Vec::with_capacity(means.len());
    let mut faults = Vec::new();
    for (j, comps) in means.iter().enumerate() {
        match spec.apply_g(comps) {
            Ok(v) => values.push(v),
            Err(e) => {
                values.push(SENTINEL);
                faults.push(FeatureFault {
                    feature: j,
                    reason: e.to_string(),
                    dropped_segments: 0,
                    sentinel: true,
                });
            }
        }
    }
    (values, faults)
}

/// ACS from a finished table.
pub fn acs_from_table(table: &ComponentTable, spec: &MeasureSpec, seed: u64) -> EstimateVector {
    let means: Vec<Vec<f64>> = (0..table.features().len())
        .map(|f| table.means(f).to_vec())
        .collect();
    let (values, faults) = g_of_means(&means, spec);
    EstimateVector {
        method: Method::Acs,
        measure: spec.name().to_owned(),
        m: table.m(),
        r: 1,
        seed,
        values,
        faults,
    }
}

/// SAS from a finished table. Segments whose local `g` is degenerate are
/// dropped from that feature's average.
pub fn sas_from_table(table: &ComponentTable, spec: &MeasureSpec, seed: u64) -> EstimateVector {
    let m = table.m();
    let mut values = Vec::with_capacity(table.features().len());
    let mut faults = Vec::new();
    for f in 0..table.features().len() {
        let mut acc = NeumaierSum::new();
        let mut kept = 0usize;
        let mut last_err = None;
        for l in 0..m {
            match spec.apply_g(&table.segment_components(f, l)) {
                Ok(v) => {
                    acc += v;
                    kept += 1;
                }
                Err(e) => last_err = Some(e),
            }
        }
        if kept == 0 {
            values.push(SENTINEL);
        } else {
            values.push(acc.value() / kept as f64);
        }
        if let Some(e) = last_err {
            faults.push(FeatureFault {
                feature: f,
                reason: e.to_string(),
                dropped_segments: m - kept,
                sentinel: kept == 0,
            });
        }
    }
    EstimateVector {
        method: Method::Sas,
        measure: spec.name().to_owned(),
        m,
        r: 1,
        seed,
        values,
        faults,
    }
}

/// rACS from one table per partition, averaged in partition order.
pub fn racs_from_tables(tables: &[ComponentTable], spec: &MeasureSpec, seed: u64) -> EstimateVector {
    assert!(!tables.is_empty(), "at least one partition");
    let p = tables[0].features().len();
    let s = spec.s();
    let r = tables.len();
    let means: Vec<Vec<f64>> = (0..p)
        .map(|f| {
            (0..s)
                .map(|h| {
                    let acc: NeumaierSum = tables.iter().map(|t| t.means(f)[h]).sum();
                    acc.value() / r as f64
                })
                .collect()
        })
        .collect();
    let (values, faults) = g_of_means(&means, spec);
    EstimateVector {
        method: Method::Racs,
        measure: spec.name().to_owned(),
        m: tables[0].m(),
        r,
        seed,
        values,
        faults,
    }
}

/// Aggregated correlation screening estimate on a given partition.
pub fn acs_estimate(
    ds: &Dataset,
    part: &Partition,
    spec: &MeasureSpec,
    mode: EvalMode,
) -> Result<EstimateVector> {
    Ok(acs_estimate_with_table(ds, part, spec, mode)?.0)
}

/// Like [`acs_estimate`], also returning the component table.
pub fn acs_estimate_with_table(
    ds: &Dataset,
    part: &Partition,
    spec: &MeasureSpec,
    mode: EvalMode,
) -> Result<(EstimateVector, ComponentTable)> {
    let ds = prepare_dataset(ds, spec)?;
    let table = measure_table(&ds, part, spec, mode)?;
    Ok((acs_from_table(&table, spec, part.seed()), table))
}

/// Simple-average screening estimate on a given partition.
pub fn sas_estimate(
    ds: &Dataset,
    part: &Partition,
    spec: &MeasureSpec,
    mode: EvalMode,
) -> Result<EstimateVector> {
    sas_estimate_with(ds, part, spec, mode, LocalStatistic::Unbiased)
}

/// SAS whose local estimates are `g` of the chosen local statistic.
pub fn sas_estimate_with(
    ds: &Dataset,
    part: &Partition,
    spec: &MeasureSpec,
    mode: EvalMode,
    stat: LocalStatistic,
) -> Result<EstimateVector> {
    let ds = prepare_dataset(ds, spec)?;
    let table = local_table(&ds, part, spec, mode, stat)?;
    Ok(sas_from_table(&table, spec, part.seed()))
}

/// Seed of the `r`-th random partition used by rACS.
pub fn racs_partition_seed(seed: u64, r: usize) -> u64 {
    seed.wrapping_add(r as u64)
}

/// Reinforced ACS over `r` seeded random partitions into `m` segments.
///
/// Partition `k` uses seed [`racs_partition_seed`]`(seed, k)`, so `r = 1`
/// matches [`acs_estimate`] on `Partition::new(N, m, seed, RandomShuffle)`.
pub fn racs_estimate(
    ds: &Dataset,
    spec: &MeasureSpec,
    m: usize,
    r: usize,
    seed: u64,
    mode: EvalMode,
) -> Result<EstimateVector> {
    if r == 0 {
        return Err(ScreenError::InvalidConfig("R must be at least 1".into()));
    }
    let ds = prepare_dataset(ds, spec)?;
    let tables = (0..r)
        .map(|k| {
            let part = Partition::new(
                ds.n_rows(),
                m,
                racs_partition_seed(seed, k),
                PartitionMode::RandomShuffle,
            )?;
            measure_table(&ds, &part, spec, mode)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(racs_from_tables(&tables, spec, seed))
}

/// The full-sample estimate (a single segment).
pub fn centralized_estimate(
    ds: &Dataset,
    spec: &MeasureSpec,
    mode: EvalMode,
) -> Result<EstimateVector> {
    let part = Partition::contiguous(ds.n_rows(), 1)?;
    let mut est = acs_estimate(ds, &part, spec, mode)?;
    est.method = Method::Centralized;
    Ok(est)
}
