//! Two-point RANSAC line fitting.

use alloc::vec::Vec;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::seeded;
use crate::stats::{least_squares_line, Dataset, SufficientStats};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RansacConfig {
    pub iterations: usize,
    pub min_inliers: usize,
    /// Maximum vertical residual `|y − (m·x + c)|` of a consensus point.
    pub residual_threshold: f64,
    pub seed: u128,
}

impl RansacConfig {
    pub fn new(min_inliers: usize, seed: u128) -> Self {
        RansacConfig {
            iterations: 100,
            min_inliers,
            residual_threshold: 0.1,
            seed,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RansacFit {
    pub slope: f64,
    pub intercept: f64,
    /// Largest consensus set found, ascending.
    pub consensus: Vec<usize>,
    /// Whether `consensus` reached `min_inliers`. When no sample did, the
    /// largest consensus is still reported.
    pub reached_min_inliers: bool,
}

pub fn ransac_line(data: &Dataset, cfg: &RansacConfig) -> Result<RansacFit> {
    let n = data.len();
    if n < 2 {
        return Err(Error::TooFewPoints { n, required: 2 });
    }
    if cfg.iterations == 0 {
        return Err(Error::Config("RANSAC needs at least one iteration"));
    }
    if !(cfg.residual_threshold >= 0.0) {
        return Err(Error::Config("RANSAC threshold must be nonnegative"));
    }
    let mut rng = seeded(cfg.seed);
    let mut best: Option<(f64, f64, Vec<usize>)> = None;
    let mut consensus = Vec::with_capacity(n);
    for _ in 0..cfg.iterations {
        let a = rng.gen_range(0..n);
        let mut b = rng.gen_range(0..n - 1);
        if b >= a {
            b += 1;
        }
        let (xa, ya) = data.point(a);
        let (xb, yb) = data.point(b);
        let dx = xb - xa;
        if dx == 0.0 {
            continue;
        }
        let slope = (yb - ya) / dx;
        let intercept = ya - slope * xa;
        consensus.clear();
        consensus.extend(
            data.points()
                .enumerate()
                .filter(|(_, (x, y))| libm::fabs(y - (slope * x + intercept)) <= cfg.residual_threshold)
                .map(|(i, _)| i),
        );
        let better = match &best {
            None => true,
            Some((_, _, c)) => consensus.len() > c.len(),
        };
        if better {
            best = Some((slope, intercept, consensus.clone()));
        }
    }
    let (mut slope, mut intercept, consensus) =
        best.ok_or(Error::NoFit("every RANSAC sample was vertical or duplicated"))?;
    let stats = SufficientStats::from_subset(data, &consensus)?;
    if let Some((m, c)) = least_squares_line(&stats) {
        slope = m;
        intercept = c;
    }
    Ok(RansacFit {
        slope,
        intercept,
        reached_min_inliers: consensus.len() >= cfg.min_inliers,
        consensus,
    })
}
