//! Distributed feature screening by aggregating per-segment U-statistic
//! component estimates.
//!
//! A correlation measure is written as `g(theta_1, ..., theta_s)` where each
//! component has a symmetric unbiased kernel. Each segment of the data
//! yields local U-statistics for every component; averaging them over
//! segments before applying `g` (ACS) avoids the bias that builds up when
//! local correlation estimates are averaged directly (SAS).

pub mod aggregation;
pub mod data;
pub mod error;
pub mod fast;
pub mod kernels;
pub mod measures;
pub mod screening;
pub mod simbench;
pub mod sum;

pub use aggregation::{
    acs_estimate, centralized_estimate, racs_estimate, sas_estimate, sas_estimate_with, EstimateVector,
    Method,
};
pub use data::{load_csv, partition, standardize, ColumnSelector, Dataset, Partition, PartitionMode};
pub use error::{DegenerateDenominator, Result, ScreenError};
pub use kernels::{component_table, u_statistic_naive, v_statistic_naive, ComponentKernel, ComponentTable};
pub use measures::{builtin_measure, EvalMode, LocalStatistic, Measure, MeasureSpec};
pub use screening::{
    evaluate_repetitions, oracle_threshold, rmse, threshold_screen, top_k_screen, MetricsReport,
    ScreenResult,
};
