//! Exact fast paths for the built-in local U-statistics.
//!
//! Every function here returns the same value as
//! [`u_statistic_naive`](crate::kernels::u_statistic_naive) with the
//! corresponding built-in kernel, up to floating-point rounding. Indicator
//! comparisons are strict, so tied values never count.

use std::cmp::Ordering;

use crate::error::{Result, ScreenError};
use crate::sum::NeumaierSum;

/// Maps `-0.0` to `0.0` so that sort order agrees with `<`.
#[inline]
fn key(v: f64) -> f64 {
    v + 0.0
}

#[inline]
fn cmp(a: f64, b: f64) -> Ordering {
    key(a).total_cmp(&key(b))
}

fn require(n: usize, degree: usize) -> Result<()> {
    if n < degree {
        Err(ScreenError::SegmentTooSmall { size: n, degree })
    } else {
        Ok(())
    }
}

/// Counts pairs `i < j` with `v[i] < v[j]` while merge-sorting `v` ascending.
fn count_strict_ascending(v: &mut [f64], scratch: &mut Vec<f64>) -> u64 {
    let n = v.len();
    if n < 2 {
        return 0;
    }
    let mid = n / 2;
    let mut count = count_strict_ascending(&mut v[..mid], scratch)
        + count_strict_ascending(&mut v[mid..], scratch);

    scratch.clear();
    let (left, right) = v.split_at(mid);
    let (mut i, mut j) = (0, 0);
    while i < left.len() && j < right.len() {
        if left[i] < right[j] {
            scratch.push(left[i]);
            i += 1;
        } else {
            // every left element already emitted is strictly below right[j]
            count += i as u64;
            scratch.push(right[j]);
            j += 1;
        }
    }
    count += ((right.len() - j) * left.len()) as u64;
    scratch.extend_from_slice(&left[i..]);
    scratch.extend_from_slice(&right[j..]);
    v.copy_from_slice(scratch);
    count
}

/// Number of pairs with both coordinates strictly increasing.
pub fn concordant_pairs(xs: &[f64], ys: &[f64]) -> u64 {
    assert_eq!(xs.len(), ys.len());
    let mut order: Vec<usize> = (0..xs.len()).collect();
    // Within a run of equal x, y descends, so no pair inside the run counts.
    order.sort_unstable_by(|&a, &b| cmp(xs[a], xs[b]).then(cmp(ys[b], ys[a])));
    let mut seq: Vec<f64> = order.iter().map(|&i| key(ys[i])).collect();
    let mut scratch = Vec::with_capacity(seq.len());
    count_strict_ascending(&mut seq, &mut scratch)
}

/// Kendall concordance component in `O(n log n)`.
pub fn u_kendall_fast(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let n = xs.len();
    require(n, 2)?;
    let c = concordant_pairs(xs, ys);
    Ok(c as f64 / (n as f64 * (n - 1) as f64))
}

/// Ordered triple sums for SIRS: over distinct indices and over all
/// indices (repeats allowed).
///
/// For each anchor, `S` and `Q` are the sum and sum of squares of `x` over
/// rows with strictly smaller `y`; the distinct sum is `sum(S^2 - Q)` and the
/// unrestricted sum is `sum(S^2)`.
fn sirs_sums(xs: &[f64], ys: &[f64]) -> (f64, f64) {
    let n = xs.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| cmp(ys[a], ys[b]));

    let mut s = NeumaierSum::new();
    let mut q = NeumaierSum::new();
    let mut distinct = NeumaierSum::new();
    let mut all = NeumaierSum::new();
    let mut start = 0;
    while start < n {
        let y = key(ys[order[start]]);
        let mut end = start;
        while end < n && key(ys[order[end]]) == y {
            end += 1;
        }
        let sv = s.value();
        let anchors = (end - start) as f64;
        distinct += anchors * (sv * sv - q.value());
        all += anchors * sv * sv;
        for &i in &order[start..end] {
            s += xs[i];
            q += xs[i] * xs[i];
        }
        start = end;
    }
    (distinct.value(), all.value())
}

/// SIRS component in `O(n log n)`.
pub fn u_sirs_fast(xs: &[f64], ys: &[f64]) -> Result<f64> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    require(n, 3)?;
    let nf = n as f64;
    Ok(sirs_sums(xs, ys).0 / (nf * (nf - 1.0) * (nf - 2.0)))
}

/// SIRS component as a V-statistic (all `n^3` ordered triples).
pub fn v_sirs_fast(xs: &[f64], ys: &[f64]) -> Result<f64> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    require(n, 1)?;
    Ok(sirs_sums(xs, ys).1 / (n as f64).powi(3))
}

/// Kendall concordance component as a V-statistic. Diagonal pairs never
/// count, so this is the U-statistic scaled by `(n - 1) / n`.
pub fn v_kendall_fast(xs: &[f64], ys: &[f64]) -> Result<f64> {
    let n = xs.len();
    require(n, 1)?;
    let nf = n as f64;
    Ok(concordant_pairs(xs, ys) as f64 / (nf * nf))
}

struct DcSums {
    /// Unordered pair sums of `|dY||dX|, |dY|, |dX|, |dY|^2, |dX|^2`.
    pair: [f64; 5],
    /// Ordered triple sums over distinct indices: cross, Y, X.
    distinct: [f64; 3],
    /// Ordered triple sums over all indices: cross, Y, X.
    all: [f64; 3],
}

/// For every `k`, `sum_l |v_k - v_l|` from sorted prefix sums in `O(n log n)`.
fn abs_dev_row_sums(v: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| cmp(v[a], v[b]));
    let mut prefix = Vec::with_capacity(n + 1);
    let mut acc = NeumaierSum::new();
    prefix.push(0.0);
    for &i in &order {
        acc += v[i];
        prefix.push(acc.value());
    }
    let total = prefix[n];
    let mut rows = vec![0.0; n];
    for (r, &i) in order.iter().enumerate() {
        let a = v[i];
        let below = r as f64;
        let above = (n - r - 1) as f64;
        let terms = [a * below, -prefix[r], total - prefix[r + 1], -a * above];
        rows[i] = terms.into_iter().sum::<NeumaierSum>().value();
    }
    rows
}

/// For every `k`, `sum_l (v_k - v_l)^2`, computed on mean-centred values.
fn sq_dev_row_sums(v: &[f64]) -> Vec<f64> {
    let n = v.len() as f64;
    let mean = v.iter().copied().sum::<NeumaierSum>().value() / n;
    let c: Vec<f64> = v.iter().map(|x| x - mean).collect();
    let s1 = c.iter().copied().sum::<NeumaierSum>().value();
    let s2 = c.iter().map(|x| x * x).sum::<NeumaierSum>().value();
    c.iter()
        .map(|&x| [n * x * x, -2.0 * x * s1, s2].into_iter().sum::<NeumaierSum>().value())
        .collect()
}

fn dc_sums(xs: &[f64], ys: &[f64]) -> DcSums {
    let n = xs.len();
    let row_y = abs_dev_row_sums(ys);
    let row_x = abs_dev_row_sums(xs);
    let row_y2 = sq_dev_row_sums(ys);
    let row_x2 = sq_dev_row_sums(xs);
    // The only quadratic part: per-anchor sums of |dY||dX| over full rows.
    let cross: Vec<f64> = (0..n)
        .map(|k| {
            let (xk, yk) = (xs[k], ys[k]);
            let mut acc = NeumaierSum::new();
            for (&x, &y) in xs.iter().zip(ys) {
                acc += (x - xk).abs() * (y - yk).abs();
            }
            acc.value()
        })
        .collect();

    let half_total = |rows: &[f64]| rows.iter().copied().sum::<NeumaierSum>().value() / 2.0;
    let pair = [
        half_total(&cross),
        half_total(&row_y),
        half_total(&row_x),
        half_total(&row_y2),
        half_total(&row_x2),
    ];
    let mut distinct = [NeumaierSum::new(); 3];
    let mut all = [NeumaierSum::new(); 3];
    for k in 0..n {
        let (ry, rx) = (row_y[k], row_x[k]);
        let full = [ry * rx, ry * ry, rx * rx];
        let diag = [cross[k], row_y2[k], row_x2[k]];
        for t in 0..3 {
            distinct[t] += full[t] - diag[t];
            all[t] += full[t];
        }
    }
    DcSums {
        pair,
        distinct: distinct.map(|s| s.value()),
        all: all.map(|s| s.value()),
    }
}

/// All eight distance-covariance components in `O(n^2)`.
///
/// Only the `|dY||dX|` row sums are quadratic; single-coordinate row sums
/// come from sorting. Triple components use per-anchor row sums: for anchor `k`, the ordered sum over distinct
/// `(i1, i2)` of `a(i1, k) b(i2, k)` is `rowsum_a(k) rowsum_b(k) - sum_i a(i, k) b(i, k)`.
pub fn u_dc_components_fast(xs: &[f64], ys: &[f64]) -> Result<[f64; 8]> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    require(n, 3)?;
    let s = dc_sums(xs, ys);
    let nf = n as f64;
    let pairs = nf * (nf - 1.0) / 2.0;
    let triples = nf * (nf - 1.0) * (nf - 2.0);
    Ok([
        s.pair[0] / pairs,
        s.pair[1] / pairs,
        s.pair[2] / pairs,
        s.distinct[0] / triples,
        s.pair[3] / pairs,
        s.distinct[1] / triples,
        s.pair[4] / pairs,
        s.distinct[2] / triples,
    ])
}

/// The eight distance-covariance components as V-statistics, i.e. averages
/// over all ordered tuples with repeats. `g` of these is the classical
/// (biased) squared distance correlation.
pub fn v_dc_components_fast(xs: &[f64], ys: &[f64]) -> Result<[f64; 8]> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    require(n, 1)?;
    let s = dc_sums(xs, ys);
    let nf = n as f64;
    let n2 = nf * nf / 2.0;
    let n3 = nf * nf * nf;
    Ok([
        s.pair[0] / n2,
        s.pair[1] / n2,
        s.pair[2] / n2,
        s.all[0] / n3,
        s.pair[3] / n2,
        s.all[1] / n3,
        s.pair[4] / n2,
        s.all[2] / n3,
    ])
}

/// Means of `XY, X, Y, X^2, Y^2`.
pub fn u_pearson_moments(xs: &[f64], ys: &[f64]) -> Result<[f64; 5]> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    require(n, 1)?;
    let mut acc = [NeumaierSum::new(); 5];
    for (&x, &y) in xs.iter().zip(ys) {
        acc[0] += x * y;
        acc[1] += x;
        acc[2] += y;
        acc[3] += x * x;
        acc[4] += y * y;
    }
    Ok(acc.map(|a| a.value() / n as f64))
}
