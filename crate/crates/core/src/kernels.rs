//! Symmetric component kernels and exact local U-statistics.
//!
//! A kernel of degree `k` maps `k` observations `(x, y)` of one feature and
//! the response to a real number and is invariant under reordering of its
//! arguments. Its local U-statistic is the average of the kernel over every
//! unordered `k`-subset of a segment, enumerated here in lexicographic order.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::data::{Dataset, Partition};
use crate::error::{Result, ScreenError};
use crate::sum::NeumaierSum;

/// One observation of a (feature, response) pair.
pub type Point = (f64, f64);

pub type KernelFn = Arc<dyn Fn(&[Point]) -> f64 + Send + Sync>;

/// Largest supported kernel degree.
pub const MAX_DEGREE: usize = 3;

/// A symmetric basis estimator of one component parameter.
#[derive(Clone)]
pub struct ComponentKernel {
    id: String,
    degree: usize,
    eval: KernelFn,
}

impl ComponentKernel {
    /// `eval` must be symmetric in its `degree` arguments.
    pub fn new(
        id: impl Into<String>,
        degree: usize,
        eval: impl Fn(&[Point]) -> f64 + Send + Sync + 'static,
    ) -> Result<Self> {
        if degree == 0 || degree > MAX_DEGREE {
            return Err(ScreenError::UnsupportedDegree(degree));
        }
        Ok(Self {
            id: id.into(),
            degree,
            eval: Arc::new(eval),
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// # Panics
    /// If `points.len()` differs from the kernel degree.
    pub fn evaluate(&self, points: &[Point]) -> f64 {
        assert_eq!(points.len(), self.degree, "kernel {} arity", self.id);
        (self.eval)(points)
    }
}

impl fmt::Debug for ComponentKernel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ComponentKernel")
            .field("id", &self.id)
            .field("degree", &self.degree)
            .finish_non_exhaustive()
    }
}

#[inline]
fn lt(a: f64, b: f64) -> f64 {
    if a < b {
        1.0
    } else {
        0.0
    }
}

/// Mean of `f` over both orderings of a pair.
#[inline]
pub fn symmetrize2(f: impl Fn(Point, Point) -> f64, p: &[Point]) -> f64 {
    0.5 * (f(p[0], p[1]) + f(p[1], p[0]))
}

const PERMS3: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Mean of `f` over all six orderings of a triple.
///
/// Terms are summed in sorted order, so the result is bit-identical for
/// every ordering of the arguments.
#[inline]
pub fn symmetrize3(f: impl Fn(Point, Point, Point) -> f64, p: &[Point]) -> f64 {
    let mut terms = PERMS3.map(|[a, b, c]| f(p[a], p[b], p[c]));
    terms.sort_unstable_by(f64::total_cmp);
    terms.iter().sum::<f64>() / 6.0
}

/// Degree-1 moment kernels `XY, X, Y, X^2, Y^2`.
pub fn pearson_kernels() -> Vec<ComponentKernel> {
    vec![
        ComponentKernel::new("E[XY]", 1, |p| p[0].0 * p[0].1),
        ComponentKernel::new("E[X]", 1, |p| p[0].0),
        ComponentKernel::new("E[Y]", 1, |p| p[0].1),
        ComponentKernel::new("E[X^2]", 1, |p| p[0].0 * p[0].0),
        ComponentKernel::new("E[Y^2]", 1, |p| p[0].1 * p[0].1),
    ]
    .into_iter()
    .map(|k| k.expect("degree 1 is valid"))
    .collect()
}

/// Concordance kernel `I(x < x') I(y < y')`, symmetrized over the pair.
pub fn kendall_kernel() -> ComponentKernel {
    ComponentKernel::new("P[X<X',Y<Y']", 2, |p| {
        symmetrize2(|a, b| lt(a.0, b.0) * lt(a.1, b.1), p)
    })
    .expect("degree 2 is valid")
}

/// `x1 x2 I(y1 < y3) I(y2 < y3)`, symmetrized over the triple.
pub fn sirs_kernel() -> ComponentKernel {
    ComponentKernel::new("E[X I(Y<Y')]^2", 3, |p| {
        symmetrize3(|a, b, c| a.0 * b.0 * lt(a.1, c.1) * lt(b.1, c.1), p)
    })
    .expect("degree 3 is valid")
}

/// The eight distance-covariance components, in order:
/// `E|dY||dX|, E|dY|, E|dX|, E[E(|dY| | Y) E(|dX| | X)], E|dY|^2,
/// E[E^2(|dY| | Y)], E|dX|^2, E[E^2(|dX| | X)]`.
pub fn dc_kernels() -> Vec<ComponentKernel> {
    vec![
        ComponentKernel::new("E|dY||dX|", 2, |p| {
            (p[0].1 - p[1].1).abs() * (p[0].0 - p[1].0).abs()
        }),
        ComponentKernel::new("E|dY|", 2, |p| (p[0].1 - p[1].1).abs()),
        ComponentKernel::new("E|dX|", 2, |p| (p[0].0 - p[1].0).abs()),
        ComponentKernel::new("E[E|dY|E|dX|]", 3, |p| {
            symmetrize3(|a, b, c| (a.1 - c.1).abs() * (b.0 - c.0).abs(), p)
        }),
        ComponentKernel::new("E|dY|^2", 2, |p| (p[0].1 - p[1].1).powi(2)),
        ComponentKernel::new("E[E^2|dY|]", 3, |p| {
            symmetrize3(|a, b, c| (a.1 - c.1).abs() * (b.1 - c.1).abs(), p)
        }),
        ComponentKernel::new("E|dX|^2", 2, |p| (p[0].0 - p[1].0).powi(2)),
        ComponentKernel::new("E[E^2|dX|]", 3, |p| {
            symmetrize3(|a, b, c| (a.0 - c.0).abs() * (b.0 - c.0).abs(), p)
        }),
    ]
    .into_iter()
    .map(|k| k.expect("degrees 2 and 3 are valid"))
    .collect()
}

/// `C(n, k)` as a float.
pub fn binomial(n: usize, k: usize) -> f64 {
    if k > n {
        return 0.0;
    }
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Exact U-statistic of `kernel` over all unordered subsets of the rows.
pub fn u_statistic_naive(xs: &[f64], ys: &[f64], kernel: &ComponentKernel) -> Result<f64> {
    assert_eq!(xs.len(), ys.len(), "xs and ys must have equal length");
    let n = xs.len();
    let k = kernel.degree();
    if n < k {
        return Err(ScreenError::SegmentTooSmall { size: n, degree: k });
    }
    let pt = |i: usize| (xs[i], ys[i]);
    let mut acc = NeumaierSum::new();
    match k {
        1 => {
            for i in 0..n {
                acc += kernel.evaluate(&[pt(i)]);
            }
        }
        2 => {
            for i in 0..n {
                for j in i + 1..n {
                    acc += kernel.evaluate(&[pt(i), pt(j)]);
                }
            }
        }
        3 => {
            for i in 0..n {
                for j in i + 1..n {
                    for l in j + 1..n {
                        acc += kernel.evaluate(&[pt(i), pt(j), pt(l)]);
                    }
                }
            }
        }
        d => return Err(ScreenError::UnsupportedDegree(d)),
    }
    Ok(acc.value() / binomial(n, k))
}

/// V-statistic of `kernel`: the average over all `n^k` ordered tuples,
/// repeats included.
pub fn v_statistic_naive(xs: &[f64], ys: &[f64], kernel: &ComponentKernel) -> Result<f64> {
    assert_eq!(xs.len(), ys.len(), "xs and ys must have equal length");
    let n = xs.len();
    if n == 0 {
        return Err(ScreenError::SegmentTooSmall { size: 0, degree: 1 });
    }
    let pt = |i: usize| (xs[i], ys[i]);
    let mut acc = NeumaierSum::new();
    match kernel.degree() {
        1 => (0..n).for_each(|i| acc += kernel.evaluate(&[pt(i)])),
        2 => {
            for i in 0..n {
                for j in 0..n {
                    acc += kernel.evaluate(&[pt(i), pt(j)]);
                }
            }
        }
        3 => {
            for i in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        acc += kernel.evaluate(&[pt(i), pt(j), pt(l)]);
                    }
                }
            }
        }
        d => return Err(ScreenError::UnsupportedDegree(d)),
    }
    Ok(acc.value() / (n as f64).powi(kernel.degree() as i32))
}

/// Per-feature, per-component, per-segment local U-statistics and their
/// unweighted segment means.
#[derive(Debug, Clone, PartialEq)]
pub struct ComponentTable {
    features: Vec<usize>,
    component_ids: Vec<String>,
    m: usize,
    values: Vec<f64>,
    means: Vec<f64>,
}

impl ComponentTable {
    /// Assembles a table from `values[f][h][l]` laid out flat; means are
    /// reduced in segment order with compensated summation.
    pub fn from_values(
        features: Vec<usize>,
        component_ids: Vec<String>,
        m: usize,
        values: Vec<f64>,
    ) -> Self {
        let s = component_ids.len();
        assert_eq!(values.len(), features.len() * s * m);
        let means = values
            .chunks(m)
            .map(|segs| segs.iter().copied().sum::<NeumaierSum>().value() / m as f64)
            .collect();
        Self {
            features,
            component_ids,
            m,
            values,
            means,
        }
    }

    /// Dataset column indices, in table row order.
    pub fn features(&self) -> &[usize] {
        &self.features
    }

    pub fn component_ids(&self) -> &[String] {
        &self.component_ids
    }

    pub fn n_components(&self) -> usize {
        self.component_ids.len()
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `U^l_{f,h}` for table row `f`.
    pub fn value(&self, f: usize, h: usize, l: usize) -> f64 {
        self.values[(f * self.n_components() + h) * self.m + l]
    }

    /// All segment values of component `h` for table row `f`.
    pub fn segment_values(&self, f: usize, h: usize) -> &[f64] {
        let start = (f * self.n_components() + h) * self.m;
        &self.values[start..start + self.m]
    }

    /// Component vector of table row `f` on segment `l`.
    pub fn segment_components(&self, f: usize, l: usize) -> Vec<f64> {
        (0..self.n_components()).map(|h| self.value(f, h, l)).collect()
    }

    /// Segment means `(U-bar_{f,1}, ..., U-bar_{f,s})` of table row `f`.
    pub fn means(&self, f: usize) -> &[f64] {
        let s = self.n_components();
        &self.means[f * s..(f + 1) * s]
    }

    pub fn to_json(&self) -> TableJson {
        TableJson {
            m: self.m,
            features: self
                .features
                .iter()
                .enumerate()
                .map(|(f, &feature)| FeatureJson {
                    feature,
                    components: self
                        .component_ids
                        .iter()
                        .enumerate()
                        .map(|(h, id)| ComponentJson {
                            id: id.clone(),
                            mean: self.means(f)[h],
                            segments: self.segment_values(f, h).to_vec(),
                        })
                        .collect(),
                })
                .collect(),
        }
    }
}

/// JSON layout of a [`ComponentTable`]: feature, then component, then segment.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableJson {
    pub m: usize,
    pub features: Vec<FeatureJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureJson {
    pub feature: usize,
    pub components: Vec<ComponentJson>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentJson {
    pub id: String,
    pub mean: f64,
    pub segments: Vec<f64>,
}

/// Fills a table by calling `eval(xs, ys)` once per (feature, segment) cell.
///
/// Cells are evaluated in parallel; each writes exactly one slot, so the
/// result does not depend on the worker count.
pub(crate) fn build_table<F>(
    ds: &Dataset,
    part: &Partition,
    feature_set: &[usize],
    component_ids: Vec<String>,
    eval: F,
) -> Result<ComponentTable>
where
    F: Fn(&[f64], &[f64]) -> Result<Vec<f64>> + Sync,
{
    let s = component_ids.len();
    let m = part.m();
    if let Some(&j) = feature_set.iter().find(|&&j| j >= ds.n_features()) {
        return Err(ScreenError::InvalidConfig(format!(
            "feature index {j} out of range (p={})",
            ds.n_features()
        )));
    }
    let response = ds.response();
    let seg_y: Vec<Vec<f64>> = part
        .segments()
        .iter()
        .map(|seg| seg.iter().map(|&i| response[i]).collect())
        .collect();

    let cells: Vec<Vec<f64>> = (0..feature_set.len() * m)
        .into_par_iter()
        .map(|cell| {
            let (f, l) = (cell / m, cell % m);
            let col = ds.column(feature_set[f]);
            let xs: Vec<f64> = part.segments()[l].iter().map(|&i| col[i]).collect();
            let comps = eval(&xs, &seg_y[l])?;
            if comps.len() != s {
                return Err(ScreenError::ComponentCount {
                    expected: s,
                    got: comps.len(),
                });
            }
            Ok(comps)
        })
        .collect::<Result<_>>()?;

    let mut values = vec![0.0; feature_set.len() * s * m];
    for (cell, comps) in cells.into_iter().enumerate() {
        let (f, l) = (cell / m, cell % m);
        for (h, v) in comps.into_iter().enumerate() {
            values[(f * s + h) * m + l] = v;
        }
    }
    Ok(ComponentTable::from_values(
        feature_set.to_vec(),
        component_ids,
        m,
        values,
    ))
}

pub(crate) fn check_segments(part: &Partition, max_degree: usize) -> Result<()> {
    let size = part.min_segment_len();
    if size < max_degree {
        return Err(ScreenError::SegmentTooSmall {
            size,
            degree: max_degree,
        });
    }
    Ok(())
}

/// Local U-statistics of every kernel on every (feature, segment) cell,
/// computed by full combination enumeration.
pub fn component_table(
    ds: &Dataset,
    part: &Partition,
    kernels: &[ComponentKernel],
    feature_set: &[usize],
) -> Result<ComponentTable> {
    let max_degree = kernels.iter().map(ComponentKernel::degree).max().unwrap_or(1);
    check_segments(part, max_degree)?;
    let ids = kernels.iter().map(|k| k.id().to_owned()).collect();
    build_table(ds, part, feature_set, ids, |xs, ys| {
        kernels
            .iter()
            .map(|k| u_statistic_naive(xs, ys, k))
            .collect()
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::data::PartitionMode;
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn all_kernels() -> Vec<ComponentKernel> {
        let mut ks = pearson_kernels();
        ks.push(kendall_kernel());
        ks.push(sirs_kernel());
        ks.extend(dc_kernels());
        ks
    }

    #[test]
    fn degree_one_identity_is_the_mean() {
        let k = ComponentKernel::new("x", 1, |p| p[0].0).unwrap();
        let u = u_statistic_naive(&[1.0, 2.0, 3.0], &[0.0; 3], &k).unwrap();
        assert_eq!(u, 2.0);
    }

    #[test]
    fn kendall_kernel_by_hand() {
        let k = kendall_kernel();
        assert_eq!(k.evaluate(&[(0.0, 0.0), (1.0, 1.0)]), 0.5);
        assert_eq!(k.evaluate(&[(0.0, 1.0), (1.0, 0.0)]), 0.0);
        assert_eq!(u_statistic_naive(&[0.0, 1.0], &[0.0, 1.0], &k).unwrap(), 0.5);
    }

    #[test]
    fn ties_contribute_nothing() {
        let k = kendall_kernel();
        assert_eq!(k.evaluate(&[(0.0, 0.0), (0.0, 1.0)]), 0.0);
        assert_eq!(k.evaluate(&[(0.0, 1.0), (1.0, 1.0)]), 0.0);
    }

    #[test]
    fn sirs_kernel_matches_six_term_enumeration() {
        let pts = [(0.7, 2.0), (-1.3, 0.5), (2.1, 1.0)];
        let mut expected = 0.0;
        for p in [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]] {
            let (a, b, c) = (pts[p[0]], pts[p[1]], pts[p[2]]);
            let i1 = if a.1 < c.1 { 1.0 } else { 0.0 };
            let i2 = if b.1 < c.1 { 1.0 } else { 0.0 };
            expected += a.0 * b.0 * i1 * i2;
        }
        expected /= 6.0;
        let got = sirs_kernel().evaluate(&pts);
        assert!((got - expected).abs() < 1e-15);
        // Only the anchor with the largest y (2.0) has two smaller points.
        assert!((got - 2.0 * (-1.3 * 2.1) / 6.0).abs() < 1e-15);
    }

    #[test]
    fn segment_smaller_than_degree() {
        let err = u_statistic_naive(&[1.0, 2.0], &[1.0, 2.0], &sirs_kernel()).unwrap_err();
        assert!(err.to_string().contains("segment smaller than kernel degree"));
    }

    #[test]
    fn unsupported_degree() {
        assert!(ComponentKernel::new("k4", 4, |_| 0.0).is_err());
        assert!(ComponentKernel::new("k0", 0, |_| 0.0).is_err());
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10.0);
        assert_eq!(binomial(30, 3), 4060.0);
        assert_eq!(binomial(2, 3), 0.0);
    }

    fn random_dataset(rng: &mut ChaCha8Rng, n: usize, p: usize) -> Dataset {
        let cols = (0..p)
            .map(|_| (0..n).map(|_| rng.random::<f64>()).collect())
            .collect();
        let y = (0..n).map(|_| rng.random::<f64>()).collect();
        Dataset::from_feature_columns(cols, y).unwrap()
    }

    #[test]
    fn single_segment_values_equal_means() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let ds = random_dataset(&mut rng, 9, 2);
        let part = Partition::contiguous(9, 1).unwrap();
        let t = component_table(&ds, &part, &dc_kernels(), &[0, 1]).unwrap();
        for f in 0..2 {
            for h in 0..8 {
                assert_eq!(t.value(f, h, 0), t.means(f)[h]);
            }
        }
    }

    #[test]
    fn duplicate_columns_give_identical_rows() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let x: Vec<f64> = (0..12).map(|_| rng.random()).collect();
        let y: Vec<f64> = (0..12).map(|_| rng.random()).collect();
        let ds = Dataset::from_feature_columns(vec![x.clone(), x], y).unwrap();
        let part = Partition::new(12, 3, 5, PartitionMode::RandomShuffle).unwrap();
        let t = component_table(&ds, &part, &[kendall_kernel(), sirs_kernel()], &[0, 1]).unwrap();
        for h in 0..2 {
            assert_eq!(t.segment_values(0, h), t.segment_values(1, h));
        }
    }

    #[test]
    fn kendall_table_matches_per_segment_reference() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let ds = random_dataset(&mut rng, 12, 3);
        let part = Partition::new(12, 3, 9, PartitionMode::RandomShuffle).unwrap();
        let t = component_table(&ds, &part, &[kendall_kernel()], &[0, 1, 2]).unwrap();
        for j in 0..3 {
            let col = ds.column(j);
            let mut total = 0.0;
            for (l, seg) in part.segments().iter().enumerate() {
                // Independent re-implementation: ordered-pair count.
                let mut count = 0.0;
                for &a in seg {
                    for &b in seg {
                        if col[a] < col[b] && ds.response()[a] < ds.response()[b] {
                            count += 1.0;
                        }
                    }
                }
                let n = seg.len() as f64;
                let u = count / (n * (n - 1.0));
                assert!((t.value(j, 0, l) - u).abs() < 1e-15);
                total += u;
            }
            assert!((t.means(j)[0] - total / 3.0).abs() < 1e-15);
        }
    }

    #[test]
    fn means_are_segment_averages() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let ds = random_dataset(&mut rng, 20, 2);
        let part = Partition::new(20, 4, 1, PartitionMode::RandomShuffle).unwrap();
        let t = component_table(&ds, &part, &all_kernels(), &[1, 0]).unwrap();
        assert_eq!(t.features(), &[1, 0]);
        for f in 0..2 {
            for h in 0..t.n_components() {
                let avg = t.segment_values(f, h).iter().sum::<f64>() / 4.0;
                assert!((t.means(f)[h] - avg).abs() < 1e-12);
            }
        }
        let json = t.to_json();
        assert_eq!(json.features.len(), 2);
        assert_eq!(json.features[0].components.len(), t.n_components());
        assert_eq!(json.features[0].components[0].segments.len(), 4);
    }

    #[test]
    fn table_rejects_small_segments() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let ds = random_dataset(&mut rng, 8, 1);
        let part = Partition::contiguous(8, 4).unwrap();
        let err = component_table(&ds, &part, &[sirs_kernel()], &[0]).unwrap_err();
        assert!(matches!(err, ScreenError::SegmentTooSmall { size: 2, degree: 3 }));
    }

    #[test]
    fn unbiased_under_independence() {
        // Mean of the segment-averaged Kendall and SIRS components over
        // independent replications, compared to 1/4 and 0.
        let reps = 500;
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        let normal = rand_distr::StandardNormal;
        let (mut k_vals, mut s_vals) = (Vec::new(), Vec::new());
        for _ in 0..reps {
            let x: Vec<f64> = (0..60).map(|_| rng.sample(normal)).collect();
            let y: Vec<f64> = (0..60).map(|_| rng.sample(normal)).collect();
            let ds = Dataset::from_feature_columns(vec![x], y).unwrap();
            let part = Partition::contiguous(60, 4).unwrap();
            let t = component_table(&ds, &part, &[kendall_kernel(), sirs_kernel()], &[0]).unwrap();
            k_vals.push(t.means(0)[0]);
            s_vals.push(t.means(0)[1]);
        }
        for (vals, target) in [(k_vals, 0.25), (s_vals, 0.0)] {
            let n = vals.len() as f64;
            let mean = vals.iter().sum::<f64>() / n;
            let var = vals.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
            let se = (var / n).sqrt();
            assert!((mean - target).abs() <= 3.0 * se, "mean {mean} target {target} se {se}");
        }
    }

    proptest! {
        #[test]
        fn kernels_are_symmetric(
            pts in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 3),
            perm in 0usize..6,
        ) {
            let order = PERMS3[perm];
            for k in all_kernels() {
                let d = k.degree();
                let base: Vec<Point> = pts[..d].to_vec();
                let permuted: Vec<Point> = match d {
                    1 => base.clone(),
                    2 => if perm % 2 == 0 { base.clone() } else { vec![base[1], base[0]] },
                    _ => order.iter().map(|&i| base[i]).collect(),
                };
                prop_assert_eq!(k.evaluate(&base), k.evaluate(&permuted), "kernel {}", k.id());
            }
        }

        #[test]
        fn degree_one_statistic_is_the_rowwise_mean(
            rows in proptest::collection::vec((-5.0f64..5.0, -5.0f64..5.0), 1..40)
        ) {
            let xs: Vec<f64> = rows.iter().map(|r| r.0).collect();
            let ys: Vec<f64> = rows.iter().map(|r| r.1).collect();
            for k in pearson_kernels() {
                let u = u_statistic_naive(&xs, &ys, &k).unwrap();
                let rowwise: Vec<f64> = rows.iter().map(|&r| k.evaluate(&[r])).collect();
                prop_assert_eq!(u, crate::sum::compensated_mean(&rowwise));
            }
        }
    }
}
