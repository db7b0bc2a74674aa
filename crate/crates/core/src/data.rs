//! Tabular data: loading, standardization and row partitioning.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, ScreenError};
use crate::sum::NeumaierSum;

/// Features below this sample variance are refused by [`standardize`].
pub const DEFAULT_VARIANCE_EPS: f64 = 1e-12;

/// An `N x p` feature matrix plus a length-`N` response.
///
/// Features are stored column-major so that one feature is a contiguous slice.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    n_rows: usize,
    n_features: usize,
    features: Vec<f64>,
    response: Vec<f64>,
    feature_names: Option<Vec<String>>,
}

impl Dataset {
    /// Builds a dataset from column-major feature storage.
    pub fn from_columns(
        n_rows: usize,
        features: Vec<f64>,
        response: Vec<f64>,
        feature_names: Option<Vec<String>>,
    ) -> Result<Self> {
        if n_rows == 0 {
            return Err(ScreenError::EmptyTable);
        }
        if response.len() != n_rows {
            return Err(ScreenError::InvalidDataset(format!(
                "response has {} rows, expected {n_rows}",
                response.len()
            )));
        }
        if features.is_empty() || !features.len().is_multiple_of(n_rows) {
            return Err(ScreenError::InvalidDataset(format!(
                "feature storage of length {} is not a nonempty multiple of N={n_rows}",
                features.len()
            )));
        }
        let n_features = features.len() / n_rows;
        if let Some(names) = &feature_names {
            if names.len() != n_features {
                return Err(ScreenError::InvalidDataset(format!(
                    "{} feature names for {n_features} features",
                    names.len()
                )));
            }
        }
        let ds = Self {
            n_rows,
            n_features,
            features,
            response,
            feature_names,
        };
        if let Some(i) = ds.response.iter().position(|v| !v.is_finite()) {
            return Err(ScreenError::NonFinite {
                row: i + 1,
                column: "response".into(),
            });
        }
        for j in 0..n_features {
            if let Some(i) = ds.column(j).iter().position(|v| !v.is_finite()) {
                return Err(ScreenError::NonFinite {
                    row: i + 1,
                    column: ds.feature_name(j),
                });
            }
        }
        Ok(ds)
    }

    /// Builds a dataset from one vector per feature.
    pub fn from_feature_columns(columns: Vec<Vec<f64>>, response: Vec<f64>) -> Result<Self> {
        let n_rows = response.len();
        if columns.iter().any(|c| c.len() != n_rows) {
            return Err(ScreenError::InvalidDataset(
                "feature columns differ in length from the response".into(),
            ));
        }
        Self::from_columns(n_rows, columns.concat(), response, None)
    }

    pub fn n_rows(&self) -> usize {
        self.n_rows
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn column(&self, j: usize) -> &[f64] {
        &self.features[j * self.n_rows..(j + 1) * self.n_rows]
    }

    pub fn response(&self) -> &[f64] {
        &self.response
    }

    pub fn feature_names(&self) -> Option<&[String]> {
        self.feature_names.as_deref()
    }

    /// Header name of feature `j`, or `X{j+1}` when the dataset is unnamed.
    pub fn feature_name(&self, j: usize) -> String {
        match &self.feature_names {
            Some(names) => names[j].clone(),
            None => format!("X{}", j + 1),
        }
    }
}

/// How a response column is selected from a CSV header.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ColumnSelector {
    Name(String),
    Index(usize),
}

impl ColumnSelector {
    /// Header names win over numeric interpretation, so a column literally
    /// called `"0"` is still selected by name.
    fn resolve(&self, headers: &[String]) -> Option<usize> {
        match self {
            ColumnSelector::Name(name) => headers.iter().position(|h| h == name).or_else(|| {
                name.parse::<usize>()
                    .ok()
                    .filter(|&i| i < headers.len())
            }),
            ColumnSelector::Index(i) => (*i < headers.len()).then_some(*i),
        }
    }
}

impl std::fmt::Display for ColumnSelector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            ColumnSelector::Name(n) => write!(f, "{n}"),
            ColumnSelector::Index(i) => write!(f, "#{i}"),
        }
    }
}

/// Loads a comma-delimited numeric table with a header row.
///
/// The selected column becomes the response; every other column is a
/// feature, in file order. Rows are reported 1-based, counting data rows only.
pub fn load_csv(path: impl AsRef<Path>, response_column: &ColumnSelector) -> Result<Dataset> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|source| ScreenError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    read_csv(file, response_column)
}

/// Same as [`load_csv`] over any reader.
pub fn read_csv<R: std::io::Read>(reader: R, response_column: &ColumnSelector) -> Result<Dataset> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let headers: Vec<String> = rdr
        .headers()
        .map_err(|e| ScreenError::Csv(e.to_string()))?
        .iter()
        .map(str::to_owned)
        .collect();
    if headers.is_empty() || headers.iter().all(String::is_empty) {
        return Err(ScreenError::EmptyTable);
    }
    let resp = response_column
        .resolve(&headers)
        .ok_or_else(|| ScreenError::ResponseNotFound(response_column.to_string()))?;
    let n_cols = headers.len();
    if n_cols < 2 {
        return Err(ScreenError::InvalidDataset(
            "table needs at least one feature column besides the response".into(),
        ));
    }

    let mut columns: Vec<Vec<f64>> = vec![Vec::new(); n_cols];
    for (i, record) in rdr.records().enumerate() {
        let record = record.map_err(|e| ScreenError::Csv(e.to_string()))?;
        let row = i + 1;
        if record.len() != n_cols {
            return Err(ScreenError::Csv(format!(
                "row {row} has {} fields, header has {n_cols}",
                record.len()
            )));
        }
        for (c, cell) in record.iter().enumerate() {
            let value: f64 = cell.parse().map_err(|_| ScreenError::NonNumeric {
                row,
                column: headers[c].clone(),
                value: cell.to_owned(),
            })?;
            if !value.is_finite() {
                return Err(ScreenError::NonFinite {
                    row,
                    column: headers[c].clone(),
                });
            }
            columns[c].push(value);
        }
    }
    let n_rows = columns[0].len();
    if n_rows == 0 {
        return Err(ScreenError::EmptyTable);
    }
    let response = columns.remove(resp);
    let mut names = headers;
    names.remove(resp);
    Dataset::from_columns(n_rows, columns.concat(), response, Some(names))
}

/// Per-feature sample means and variances (divisor `N - 1`).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StandardizationMoments {
    pub mean: Vec<f64>,
    pub variance: Vec<f64>,
}

/// Global moments computed from per-segment sums and sums of squares
/// reduced in segment order, as a distributed pass would.
pub fn feature_moments(ds: &Dataset, part: &Partition) -> StandardizationMoments {
    let n = ds.n_rows() as f64;
    let mut mean = Vec::with_capacity(ds.n_features());
    let mut variance = Vec::with_capacity(ds.n_features());
    for j in 0..ds.n_features() {
        let col = ds.column(j);
        let mut s = NeumaierSum::new();
        for seg in part.segments() {
            let local: NeumaierSum = seg.iter().map(|&i| col[i]).sum();
            s += local.value();
        }
        let mu = s.value() / n;
        let mut ss = NeumaierSum::new();
        for seg in part.segments() {
            let local: NeumaierSum = seg
                .iter()
                .map(|&i| {
                    let d = col[i] - mu;
                    d * d
                })
                .sum();
            ss += local.value();
        }
        let var = if ds.n_rows() > 1 {
            ss.value() / (n - 1.0)
        } else {
            0.0
        };
        mean.push(mu);
        variance.push(var);
    }
    StandardizationMoments { mean, variance }
}

/// Centres every feature to mean 0 and scales it to sample variance 1.
///
/// The response is left untouched.
pub fn standardize(ds: &Dataset) -> Result<(Dataset, StandardizationMoments)> {
    standardize_with_eps(ds, DEFAULT_VARIANCE_EPS)
}

pub fn standardize_with_eps(ds: &Dataset, eps: f64) -> Result<(Dataset, StandardizationMoments)> {
    let whole = Partition::contiguous(ds.n_rows(), 1)?;
    let moments = feature_moments(ds, &whole);
    let mut features = Vec::with_capacity(ds.features.len());
    for j in 0..ds.n_features() {
        let var = moments.variance[j];
        if var.is_nan() || var <= eps {
            return Err(ScreenError::NearConstantFeature {
                feature: ds.feature_name(j),
                variance: var,
            });
        }
        let mu = moments.mean[j];
        let sd = var.sqrt();
        features.extend(ds.column(j).iter().map(|v| (v - mu) / sd));
    }
    let out = Dataset {
        features,
        ..ds.clone()
    };
    Ok((out, moments))
}

/// Row order before splitting into segments.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PartitionMode {
    Contiguous,
    RandomShuffle,
}

/// A disjoint cover of `0..N` by `m` segments whose sizes differ by at most one.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Partition {
    segments: Vec<Vec<usize>>,
    seed: u64,
    mode: PartitionMode,
}

impl Partition {
    pub fn contiguous(n_rows: usize, m: usize) -> Result<Self> {
        Self::new(n_rows, m, 0, PartitionMode::Contiguous)
    }

    /// Splits `0..n_rows` into `m` segments.
    ///
    /// The first `N mod m` segments get one extra row. In random-shuffle mode
    /// the row order is permuted by a ChaCha8 stream seeded with `seed` first.
    pub fn new(n_rows: usize, m: usize, seed: u64, mode: PartitionMode) -> Result<Self> {
        if m == 0 || m > n_rows {
            return Err(ScreenError::InvalidSegmentCount { m, n: n_rows });
        }
        let mut order: Vec<usize> = (0..n_rows).collect();
        if mode == PartitionMode::RandomShuffle {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            order.shuffle(&mut rng);
        }
        let base = n_rows / m;
        let extra = n_rows % m;
        let mut segments = Vec::with_capacity(m);
        let mut start = 0;
        for l in 0..m {
            let len = base + usize::from(l < extra);
            segments.push(order[start..start + len].to_vec());
            start += len;
        }
        Ok(Self {
            segments,
            seed,
            mode,
        })
    }

    /// A caller-supplied split; checked to be a disjoint cover of `0..n_rows`.
    pub fn from_segments(n_rows: usize, segments: Vec<Vec<usize>>) -> Result<Self> {
        let mut seen = vec![false; n_rows];
        for seg in &segments {
            if seg.is_empty() {
                return Err(ScreenError::InvalidConfig("empty segment".into()));
            }
            for &i in seg {
                if i >= n_rows || std::mem::replace(&mut seen[i], true) {
                    return Err(ScreenError::InvalidConfig(format!(
                        "row {i} is out of range or assigned twice"
                    )));
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(ScreenError::InvalidConfig(
                "segments do not cover every row".into(),
            ));
        }
        Ok(Self {
            segments,
            seed: 0,
            mode: PartitionMode::Contiguous,
        })
    }

    pub fn m(&self) -> usize {
        self.segments.len()
    }

    pub fn segments(&self) -> &[Vec<usize>] {
        &self.segments
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn mode(&self) -> PartitionMode {
        self.mode
    }

    pub fn min_segment_len(&self) -> usize {
        self.segments.iter().map(Vec::len).min().unwrap_or(0)
    }
}

/// Convenience wrapper matching the dataset-level call shape.
pub fn partition(ds: &Dataset, m: usize, seed: u64, mode: PartitionMode) -> Result<Partition> {
    Partition::new(ds.n_rows(), m, seed, mode)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sample_var(v: &[f64]) -> f64 {
        let n = v.len() as f64;
        let mu = v.iter().sum::<f64>() / n;
        v.iter().map(|x| (x - mu).powi(2)).sum::<f64>() / (n - 1.0)
    }

    #[test]
    fn loads_small_table() {
        let text = "y,x1,x2\n1,2,3\n4,5,6\n7,8,9\n";
        let ds = read_csv(text.as_bytes(), &ColumnSelector::Name("y".into())).unwrap();
        assert_eq!(ds.n_rows(), 3);
        assert_eq!(ds.n_features(), 2);
        assert_eq!(ds.response(), &[1.0, 4.0, 7.0]);
        assert_eq!(ds.column(1), &[3.0, 6.0, 9.0]);
        assert_eq!(ds.feature_names().unwrap(), &["x1".to_string(), "x2".to_string()]);
    }

    #[test]
    fn response_by_index_keeps_file_order_of_features() {
        let text = "a,b,c\n1,2,3\n4,5,6\n";
        let ds = read_csv(text.as_bytes(), &ColumnSelector::Index(1)).unwrap();
        assert_eq!(ds.response(), &[2.0, 5.0]);
        assert_eq!(ds.feature_names().unwrap(), &["a".to_string(), "c".to_string()]);
        let by_digit = read_csv(text.as_bytes(), &ColumnSelector::Name("1".into())).unwrap();
        assert_eq!(by_digit, ds);
    }

    #[test]
    fn non_numeric_cell_names_row_and_column() {
        let text = "y,x1,x2\n1,2,3\n4,abc,6\n";
        let err = read_csv(text.as_bytes(), &ColumnSelector::Name("y".into())).unwrap_err();
        match err {
            ScreenError::NonNumeric { row, column, value } => {
                assert_eq!(row, 2);
                assert_eq!(column, "x1");
                assert_eq!(value, "abc");
            }
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn missing_response_column() {
        let text = "y,x1\n1,2\n";
        let err = read_csv(text.as_bytes(), &ColumnSelector::Name("z".into())).unwrap_err();
        assert!(matches!(err, ScreenError::ResponseNotFound(_)));
        assert!(err.to_string().contains("response column not found"));
    }

    #[test]
    fn empty_tables_are_rejected() {
        let sel = ColumnSelector::Name("y".into());
        assert!(matches!(
            read_csv("y,x1\n".as_bytes(), &sel).unwrap_err(),
            ScreenError::EmptyTable
        ));
        assert!(read_csv("".as_bytes(), &sel).is_err());
    }

    #[test]
    fn missing_cells_are_rejected() {
        let err = read_csv("y,x1\n1,\n".as_bytes(), &ColumnSelector::Name("y".into())).unwrap_err();
        assert!(matches!(err, ScreenError::NonNumeric { row: 1, .. }));
    }

    #[test]
    fn missing_file() {
        let err = load_csv("/nonexistent/data.csv", &ColumnSelector::Index(0)).unwrap_err();
        assert!(matches!(err, ScreenError::Io { .. }));
    }

    #[test]
    fn standardize_unit_column() {
        let ds = Dataset::from_feature_columns(vec![vec![1.0, 2.0, 3.0]], vec![0.0, 1.0, 5.0])
            .unwrap();
        let (z, moments) = standardize(&ds).unwrap();
        assert_eq!(moments.mean, vec![2.0]);
        assert_eq!(moments.variance, vec![1.0]);
        let col = z.column(0);
        assert!(col.iter().sum::<f64>().abs() < 1e-15);
        assert!((sample_var(col) - 1.0).abs() < 1e-15);
        assert_eq!(z.response(), ds.response());
    }

    #[test]
    fn standardize_rejects_constant_column() {
        let ds = Dataset::from_feature_columns(
            vec![vec![1.0, 2.0, 4.0], vec![5.0, 5.0, 5.0]],
            vec![0.0; 3],
        )
        .unwrap();
        match standardize(&ds).unwrap_err() {
            ScreenError::NearConstantFeature { feature, .. } => assert_eq!(feature, "X2"),
            other => panic!("unexpected error {other}"),
        }
    }

    #[test]
    fn partition_examples() {
        let p = Partition::new(10, 2, 0, PartitionMode::Contiguous).unwrap();
        assert_eq!(p.segments(), &[vec![0, 1, 2, 3, 4], vec![5, 6, 7, 8, 9]]);
        let p = Partition::new(10, 3, 0, PartitionMode::Contiguous).unwrap();
        let sizes: Vec<usize> = p.segments().iter().map(Vec::len).collect();
        assert_eq!(sizes, vec![4, 3, 3]);
        assert!(Partition::new(10, 11, 0, PartitionMode::Contiguous).is_err());
        assert!(Partition::new(10, 0, 0, PartitionMode::Contiguous).is_err());
    }

    #[test]
    fn from_segments_validates_cover() {
        assert!(Partition::from_segments(3, vec![vec![0, 2], vec![1]]).is_ok());
        assert!(Partition::from_segments(3, vec![vec![0, 1], vec![1, 2]]).is_err());
        assert!(Partition::from_segments(3, vec![vec![0, 1]]).is_err());
    }

    proptest! {
        #[test]
        fn partition_is_a_balanced_disjoint_cover(
            n in 1usize..300, m_frac in 0.0f64..1.0, seed: u64, shuffle: bool
        ) {
            let m = 1 + ((n - 1) as f64 * m_frac) as usize;
            let mode = if shuffle { PartitionMode::RandomShuffle } else { PartitionMode::Contiguous };
            let p = Partition::new(n, m, seed, mode).unwrap();
            prop_assert_eq!(p.m(), m);
            let mut all: Vec<usize> = p.segments().concat();
            all.sort_unstable();
            prop_assert_eq!(all, (0..n).collect::<Vec<_>>());
            for seg in p.segments() {
                prop_assert!(!seg.is_empty());
                prop_assert!((seg.len() as f64 - n as f64 / m as f64).abs() <= 1.0);
            }
            let again = Partition::new(n, m, seed, mode).unwrap();
            prop_assert_eq!(p, again);
        }

        #[test]
        fn standardize_is_idempotent(
            col in proptest::collection::vec(-1e3f64..1e3, 3..40)
        ) {
            prop_assume!(sample_var(&col) > 1e-3);
            let n = col.len();
            let ds = Dataset::from_feature_columns(vec![col], vec![0.0; n]).unwrap();
            let (once, _) = standardize(&ds).unwrap();
            let (twice, _) = standardize(&once).unwrap();
            for (a, b) in once.column(0).iter().zip(twice.column(0)) {
                prop_assert!((a - b).abs() <= 1e-12);
            }
        }
    }
}
