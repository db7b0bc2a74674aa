//! Retained-set selection and screening accuracy metrics.

use std::collections::BTreeSet;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::aggregation::EstimateVector;
use crate::error::{Result, ScreenError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScreenRule {
    Threshold,
    TopK,
}

/// Retained features (sorted, 0-based) and the threshold that produced them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScreenResult {
    pub retained: Vec<usize>,
    pub gamma: f64,
    pub rule: ScreenRule,
}

impl ScreenResult {
    pub fn len(&self) -> usize {
        self.retained.len()
    }

    pub fn is_empty(&self) -> bool {
        self.retained.is_empty()
    }
}

/// Keeps every non-degenerate feature with estimate `>= gamma`.
pub fn threshold_screen(est: &EstimateVector, gamma: f64) -> Result<ScreenResult> {
    if gamma.is_nan() || gamma <= 0.0 {
        return Err(ScreenError::InvalidThreshold(gamma));
    }
    let mask = est.degenerate_mask();
    let retained = est
        .values
        .iter()
        .enumerate()
        .filter(|&(j, &v)| !mask[j] && v >= gamma)
        .map(|(j, _)| j)
        .collect();
    Ok(ScreenResult {
        retained,
        gamma,
        rule: ScreenRule::Threshold,
    })
}

/// Keeps the `k` largest estimates; ties go to the lower index and
/// degenerate features rank last.
pub fn top_k_screen(est: &EstimateVector, k: usize) -> Result<ScreenResult> {
    let p = est.len();
    if k == 0 || k > p {
        return Err(ScreenError::InvalidTopK { k, p });
    }
    let mask = est.degenerate_mask();
    let mut order: Vec<usize> = (0..p).collect();
    order.sort_by(|&a, &b| {
        mask[a]
            .cmp(&mask[b])
            .then(est.values[b].total_cmp(&est.values[a]))
            .then(a.cmp(&b))
    });
    let gamma = est.values[order[k - 1]];
    let mut retained = order[..k].to_vec();
    retained.sort_unstable();
    Ok(ScreenResult {
        retained,
        gamma,
        rule: ScreenRule::TopK,
    })
}

/// `rho` times the smallest centralized estimate over the active set.
pub fn oracle_threshold(centralized: &EstimateVector, true_active: &[usize], rho: f64) -> Result<f64> {
    if true_active.is_empty() {
        return Err(ScreenError::EmptyActiveSet);
    }
    if !(rho > 0.0 && rho <= 1.0) {
        return Err(ScreenError::InvalidRho(rho));
    }
    let mut min = f64::INFINITY;
    for &j in true_active {
        if j >= centralized.len() {
            return Err(ScreenError::InvalidConfig(format!(
                "active feature {j} out of range (p={})",
                centralized.len()
            )));
        }
        if centralized.is_degenerate(j) {
            return Err(ScreenError::DegenerateActiveFeature(j));
        }
        min = min.min(centralized.values[j]);
    }
    Ok(rho * min)
}

/// Lower-middle order statistic.
pub fn lower_median<T: Copy + PartialOrd>(values: &[T]) -> Option<T> {
    if values.is_empty() {
        return None;
    }
    let mut v = values.to_vec();
    v.sort_by(|a, b| a.partial_cmp(b).expect("values are comparable"));
    Some(v[(v.len() - 1) / 2])
}

/// Screening accuracy over `T` repetitions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub ssr: f64,
    pub ms: usize,
    pub std_ms: f64,
    pub psr: f64,
    pub fdr: f64,
    pub repetitions: usize,
    pub sizes: Vec<usize>,
    pub psr_values: Vec<f64>,
    pub fdr_values: Vec<f64>,
    pub retained_sets: Vec<Vec<usize>>,
}

/// SSR, median model size, its sample standard deviation, median PSR and
/// median FDR.
pub fn evaluate_repetitions(results: &[ScreenResult], true_active: &[usize]) -> Result<MetricsReport> {
    if results.is_empty() {
        return Err(ScreenError::EmptyInput);
    }
    if true_active.is_empty() {
        return Err(ScreenError::EmptyActiveSet);
    }
    let truth: BTreeSet<usize> = true_active.iter().copied().collect();
    let t = results.len();
    let mut covered = 0usize;
    let mut sizes = Vec::with_capacity(t);
    let mut psr_values = Vec::with_capacity(t);
    let mut fdr_values = Vec::with_capacity(t);
    for r in results {
        let kept: BTreeSet<usize> = r.retained.iter().copied().collect();
        let hits = truth.intersection(&kept).count();
        if hits == truth.len() {
            covered += 1;
        }
        sizes.push(kept.len());
        psr_values.push(hits as f64 / truth.len() as f64);
        fdr_values.push(if kept.is_empty() {
            0.0
        } else {
            (kept.len() - hits) as f64 / kept.len() as f64
        });
    }
    let std_ms = if t > 1 {
        let mean = sizes.iter().sum::<usize>() as f64 / t as f64;
        let ss: f64 = sizes.iter().map(|&s| (s as f64 - mean).powi(2)).sum();
        (ss / (t - 1) as f64).sqrt()
    } else {
        0.0
    };
    Ok(MetricsReport {
        ssr: covered as f64 / t as f64,
        ms: lower_median(&sizes).expect("nonempty"),
        std_ms,
        psr: lower_median(&psr_values).expect("nonempty"),
        fdr: lower_median(&fdr_values).expect("nonempty"),
        repetitions: t,
        sizes,
        psr_values,
        fdr_values,
        retained_sets: results.iter().map(|r| r.retained.clone()).collect(),
    })
}

/// `sqrt(mean((e - truth)^2))`.
pub fn rmse(estimates: &[f64], truth: f64) -> Result<f64> {
    if estimates.is_empty() {
        return Err(ScreenError::EmptyInput);
    }
    let ss: f64 = estimates.iter().map(|e| (e - truth).powi(2)).sum();
    Ok((ss / estimates.len() as f64).sqrt())
}

/// Writes the retained features as `feature,name,estimate`.
pub fn write_retained_csv<W: Write>(
    out: W,
    result: &ScreenResult,
    est: &EstimateVector,
    names: &[String],
) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    let err = |e: csv::Error| ScreenError::Csv(e.to_string());
    w.write_record(["feature", "name", "estimate"]).map_err(err)?;
    for &j in &result.retained {
        let name = names.get(j).map(String::as_str).unwrap_or("");
        w.write_record([j.to_string(), name.to_owned(), est.values[j].to_string()])
            .map_err(err)?;
    }
    w.flush().map_err(|e| ScreenError::Csv(e.to_string()))
}
