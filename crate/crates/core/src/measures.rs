//! Correlation measures written as an aggregator `g` over component
//! parameters, each with an unbiased symmetric kernel.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{DegenerateDenominator, Result, ScreenError};
use crate::fast;
use crate::kernels::{self, u_statistic_naive, v_statistic_naive, ComponentKernel};

/// Denominator terms at or below this value are treated as degenerate.
pub const DENOMINATOR_EPS: f64 = 1e-12;

/// The built-in measures.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Measure {
    Pearson,
    Kendall,
    Sirs,
    Dc,
}

impl Measure {
    pub const ALL: [Measure; 4] = [Measure::Pearson, Measure::Kendall, Measure::Sirs, Measure::Dc];

    pub fn as_str(self) -> &'static str {
        match self {
            Measure::Pearson => "pearson",
            Measure::Kendall => "kendall",
            Measure::Sirs => "sirs",
            Measure::Dc => "dc",
        }
    }
}

impl fmt::Display for Measure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Measure {
    type Err = ScreenError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "pearson" => Ok(Measure::Pearson),
            "kendall" => Ok(Measure::Kendall),
            "sirs" => Ok(Measure::Sirs),
            "dc" => Ok(Measure::Dc),
            _ => Err(ScreenError::UnknownMeasure(s.to_owned())),
        }
    }
}

/// Whether local U-statistics come from the closed-form fast paths or from
/// full combination enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EvalMode {
    #[default]
    Fast,
    Naive,
}

/// Which local statistic a segment reports for each component.
///
/// `Unbiased` is the U-statistic over distinct index tuples and is what ACS
/// aggregates. `Classical` is the V-statistic over all tuples with repeats;
/// plugging it into `g` gives the conventional sample estimator (for DC, the
/// classical biased squared distance correlation). It only changes the local
/// estimates that SAS averages.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocalStatistic {
    #[default]
    Unbiased,
    Classical,
}

impl LocalStatistic {
    pub fn as_str(self) -> &'static str {
        match self {
            LocalStatistic::Unbiased => "unbiased",
            LocalStatistic::Classical => "classical",
        }
    }
}

impl fmt::Display for LocalStatistic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LocalStatistic {
    type Err = ScreenError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "unbiased" | "u" => Ok(LocalStatistic::Unbiased),
            "classical" | "v" => Ok(LocalStatistic::Classical),
            _ => Err(ScreenError::InvalidConfig(format!("unknown local statistic {s:?}"))),
        }
    }
}

pub type AggregateFn =
    Arc<dyn Fn(&[f64]) -> std::result::Result<f64, DegenerateDenominator> + Send + Sync>;

/// Computes all `s` local U-statistics of a segment at once.
pub type FastComponentsFn = Arc<dyn Fn(&[f64], &[f64]) -> Result<Vec<f64>> + Send + Sync>;

/// A correlation measure `omega = g(theta_1, ..., theta_s)`.
#[derive(Clone)]
pub struct MeasureSpec {
    name: String,
    kernels: Vec<ComponentKernel>,
    aggregate: AggregateFn,
    requires_standardized_features: bool,
    fast: Option<FastComponentsFn>,
    fast_v: Option<FastComponentsFn>,
}

impl MeasureSpec {
    /// A user-defined measure. `aggregate` receives the `s` component values
    /// in kernel order.
    pub fn custom(
        name: impl Into<String>,
        kernels: Vec<ComponentKernel>,
        aggregate: impl Fn(&[f64]) -> std::result::Result<f64, DegenerateDenominator>
            + Send
            + Sync
            + 'static,
        requires_standardized_features: bool,
    ) -> Self {
        Self {
            name: name.into(),
            kernels,
            aggregate: Arc::new(aggregate),
            requires_standardized_features,
            fast: None,
            fast_v: None,
        }
    }

    /// Attaches an exact closed-form evaluator used in [`EvalMode::Fast`].
    pub fn with_fast_path(
        mut self,
        fast: impl Fn(&[f64], &[f64]) -> Result<Vec<f64>> + Send + Sync + 'static,
    ) -> Self {
        self.fast = Some(Arc::new(fast));
        self
    }

    /// Attaches a closed-form evaluator of the V-statistic components.
    pub fn with_fast_v_path(
        mut self,
        fast: impl Fn(&[f64], &[f64]) -> Result<Vec<f64>> + Send + Sync + 'static,
    ) -> Self {
        self.fast_v = Some(Arc::new(fast));
        self
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn kernels(&self) -> &[ComponentKernel] {
        &self.kernels
    }

    /// Number of component parameters.
    pub fn s(&self) -> usize {
        self.kernels.len()
    }

    pub fn max_degree(&self) -> usize {
        self.kernels.iter().map(ComponentKernel::degree).max().unwrap_or(1)
    }

    pub fn requires_standardized_features(&self) -> bool {
        self.requires_standardized_features
    }

    pub fn component_ids(&self) -> Vec<String> {
        self.kernels.iter().map(|k| k.id().to_owned()).collect()
    }

    /// Applies `g`. A non-finite result is reported as degenerate.
    pub fn apply_g(&self, components: &[f64]) -> std::result::Result<f64, DegenerateDenominator> {
        assert_eq!(components.len(), self.s(), "component count for {}", self.name);
        let v = (self.aggregate)(components)?;
        if v.is_finite() {
            Ok(v)
        } else {
            Err(DegenerateDenominator {
                term: "non-finite aggregate",
                value: v,
            })
        }
    }

    /// Local U-statistics of every component on one segment.
    pub fn segment_components(&self, xs: &[f64], ys: &[f64], mode: EvalMode) -> Result<Vec<f64>> {
        match (&self.fast, mode) {
            (Some(fast), EvalMode::Fast) => fast(xs, ys),
            _ => self
                .kernels
                .iter()
                .map(|k| u_statistic_naive(xs, ys, k))
                .collect(),
        }
    }

    /// Local components of one segment under the chosen statistic.
    pub fn local_components(
        &self,
        xs: &[f64],
        ys: &[f64],
        mode: EvalMode,
        stat: LocalStatistic,
    ) -> Result<Vec<f64>> {
        match stat {
            LocalStatistic::Unbiased => self.segment_components(xs, ys, mode),
            LocalStatistic::Classical => match (&self.fast_v, mode) {
                (Some(fast), EvalMode::Fast) => fast(xs, ys),
                _ => self
                    .kernels
                    .iter()
                    .map(|k| v_statistic_naive(xs, ys, k))
                    .collect(),
            },
        }
    }
}

impl fmt::Debug for MeasureSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("MeasureSpec")
            .field("name", &self.name)
            .field("kernels", &self.kernels)
            .field("requires_standardized_features", &self.requires_standardized_features)
            .field("fast", &self.fast.is_some())
            .field("fast_v", &self.fast_v.is_some())
            .finish()
    }
}

fn positive(term: &'static str, value: f64) -> std::result::Result<f64, DegenerateDenominator> {
    if value > DENOMINATOR_EPS {
        Ok(value)
    } else {
        Err(DegenerateDenominator { term, value })
    }
}

/// `|(E[XY] - EX EY) / sqrt((EX^2 - (EX)^2)(EY^2 - (EY)^2))|`.
pub fn g_pearson(t: &[f64; 5]) -> std::result::Result<f64, DegenerateDenominator> {
    let var_x = positive("var(X)", t[3] - t[1] * t[1])?;
    let var_y = positive("var(Y)", t[4] - t[2] * t[2])?;
    Ok(((t[0] - t[1] * t[2]) / (var_x * var_y).sqrt()).abs())
}

/// `|P(X < X', Y < Y') - 1/4|`.
pub fn g_kendall(t1: f64) -> f64 {
    (t1 - 0.25).abs()
}

/// Identity, clamped below at zero.
pub fn g_sirs(t1: f64) -> f64 {
    t1.max(0.0)
}

/// Squared distance correlation from its eight components.
///
/// The numerator is clamped below at zero; a non-positive distance-variance
/// factor is an error.
pub fn g_dc(t: &[f64; 8]) -> std::result::Result<f64, DegenerateDenominator> {
    let dvar_y = positive("dVar(Y)", t[4] + t[1] * t[1] - 2.0 * t[5])?;
    let dvar_x = positive("dVar(X)", t[6] + t[2] * t[2] - 2.0 * t[7])?;
    let dcov = (t[0] + t[1] * t[2] - 2.0 * t[3]).max(0.0);
    Ok(dcov / (dvar_y * dvar_x).sqrt())
}

fn fixed<const N: usize>(t: &[f64]) -> [f64; N] {
    t.try_into().expect("component count checked by apply_g")
}

/// The built-in spec for `measure`.
pub fn builtin_measure(measure: Measure) -> MeasureSpec {
    match measure {
        Measure::Pearson => {
            MeasureSpec::custom("pearson", kernels::pearson_kernels(), |t| g_pearson(&fixed(t)), false)
                .with_fast_path(|xs, ys| Ok(fast::u_pearson_moments(xs, ys)?.to_vec()))
                .with_fast_v_path(|xs, ys| Ok(fast::u_pearson_moments(xs, ys)?.to_vec()))
        }
        Measure::Kendall => MeasureSpec::custom(
            "kendall",
            vec![kernels::kendall_kernel()],
            |t| Ok(g_kendall(t[0])),
            false,
        )
        .with_fast_path(|xs, ys| Ok(vec![fast::u_kendall_fast(xs, ys)?]))
        .with_fast_v_path(|xs, ys| Ok(vec![fast::v_kendall_fast(xs, ys)?])),
        Measure::Sirs => MeasureSpec::custom(
            "sirs",
            vec![kernels::sirs_kernel()],
            |t| Ok(g_sirs(t[0])),
            true,
        )
        .with_fast_path(|xs, ys| Ok(vec![fast::u_sirs_fast(xs, ys)?]))
        .with_fast_v_path(|xs, ys| Ok(vec![fast::v_sirs_fast(xs, ys)?])),
        Measure::Dc => MeasureSpec::custom("dc", kernels::dc_kernels(), |t| g_dc(&fixed(t)), false)
            .with_fast_path(|xs, ys| Ok(fast::u_dc_components_fast(xs, ys)?.to_vec()))
            .with_fast_v_path(|xs, ys| Ok(fast::v_dc_components_fast(xs, ys)?.to_vec())),
    }
}

/// Looks up a built-in measure by its lowercase name.
pub fn builtin_measure_by_name(name: &str) -> Result<MeasureSpec> {
    Ok(builtin_measure(name.parse()?))
}
