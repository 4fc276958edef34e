//! Theil–Sen slope: median of pairwise slopes.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::stats::{Dataset, ZERO_VARIANCE};

/// Median of `values`; the mean of the two middle values for even lengths.
pub fn median(values: &mut [f64]) -> Option<f64> {
    if values.is_empty() {
        return None;
    }
    values.sort_unstable_by(f64::total_cmp);
    let m = values.len() / 2;
    Some(if values.len() % 2 == 1 {
        values[m]
    } else {
        0.5 * (values[m - 1] + values[m])
    })
}

/// `(slope, intercept)`; pairs sharing an x coordinate are skipped.
pub fn theil_sen(data: &Dataset) -> Result<(f64, f64)> {
    let (xs, ys) = (data.xs(), data.ys());
    let n = data.len();
    let mut slopes = Vec::with_capacity(n * n.saturating_sub(1) / 2);
    for i in 0..n {
        for j in i + 1..n {
            let dx = xs[j] - xs[i];
            if dx != 0.0 {
                slopes.push((ys[j] - ys[i]) / dx);
            }
        }
    }
    let slope = median(&mut slopes).ok_or(Error::NoFit("all x coordinates are equal"))?;
    let mut offsets: Vec<f64> = xs.iter().zip(ys).map(|(x, y)| y - slope * x).collect();
    let intercept = median(&mut offsets).ok_or(Error::NoFit("empty dataset"))?;
    Ok((slope, intercept))
}

/// `1 − SSE/SST` of the line `y = slope·x + intercept` over the whole
/// dataset; negative when the line predicts worse than the mean. `None` when
/// y is constant.
pub fn prediction_r2(data: &Dataset, slope: f64, intercept: f64) -> Option<f64> {
    let n = data.len() as f64;
    let mean = data.ys().iter().sum::<f64>() / n;
    let sst: f64 = data.ys().iter().map(|y| (y - mean) * (y - mean)).sum();
    if sst <= ZERO_VARIANCE {
        return None;
    }
    let sse: f64 = data
        .points()
        .map(|(x, y)| {
            let r = y - (slope * x + intercept);
            r * r
        })
        .sum();
    Some(1.0 - sse / sst)
}
