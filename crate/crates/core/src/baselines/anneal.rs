//! Simulated annealing over k-subsets with a swap neighbourhood.

use alloc::vec::Vec;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::rng::seeded;
use crate::stats::{Dataset, Direction, Objective, Score, SufficientStats};
use crate::sweep::SweepResult;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnealConfig {
    pub t_max: f64,
    pub t_min: f64,
    pub steps: usize,
    pub seed: u128,
}

impl Default for AnnealConfig {
    fn default() -> Self {
        AnnealConfig {
            t_max: 100_000.0,
            t_min: 1.0,
            steps: 10_000,
            seed: 0,
        }
    }
}

impl AnnealConfig {
    pub fn with_seed(seed: u128) -> Self {
        AnnealConfig {
            seed,
            ..AnnealConfig::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.t_min > 0.0) || !(self.t_max > self.t_min) || !self.t_max.is_finite() {
            return Err(Error::Config("annealing needs t_max > t_min > 0"));
        }
        if self.steps == 0 {
            return Err(Error::Config("annealing needs at least one step"));
        }
        Ok(())
    }
}

fn energy(objective: Objective, s: &SufficientStats) -> f64 {
    match objective.score_unchecked(s) {
        Score::Invalid => f64::INFINITY,
        Score::Valid(v) => match objective.direction() {
            Direction::Maximize => -v,
            Direction::Minimize => v,
        },
    }
}

/// Anneals from a random k-subset; each step swaps a uniformly chosen member
/// with a uniformly chosen non-member and applies the Metropolis rule under
/// an exponential schedule from `t_max` down to `t_min`. Returns the best
/// state visited.
pub fn simulated_annealing_select(
    data: &Dataset,
    k: usize,
    objective: Objective,
    cfg: &AnnealConfig,
) -> Result<SweepResult> {
    cfg.validate()?;
    let n = data.len();
    if k < objective.min_subset() || k > n {
        return Err(Error::SubsetSize {
            k,
            min: objective.min_subset(),
            max: n,
        });
    }
    let mut rng = seeded(cfg.seed);
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(&mut rng);
    let (members, others) = perm.split_at_mut(k);

    let mut stats = SufficientStats::EMPTY;
    for &i in members.iter() {
        let (x, y) = data.point(i);
        stats.add(x, y);
    }
    let mut current = energy(objective, &stats);
    let mut best_energy = current;
    let mut best: Vec<usize> = members.to_vec();

    let t_factor = -libm::log(cfg.t_max / cfg.t_min);
    if !others.is_empty() {
        for step in 1..=cfg.steps {
            let temperature = cfg.t_max * libm::exp(t_factor * step as f64 / cfg.steps as f64);
            let i = rng.gen_range(0..members.len());
            let j = rng.gen_range(0..others.len());
            let (xo, yo) = data.point(members[i]);
            let (xi, yi) = data.point(others[j]);
            let mut next = stats;
            let _ = next.remove(xo, yo);
            next.add(xi, yi);
            let candidate = energy(objective, &next);
            let delta = if candidate == current {
                0.0
            } else {
                candidate - current
            };
            let accept = delta <= 0.0 || rng.gen::<f64>() < libm::exp(-delta / temperature);
            if !accept {
                continue;
            }
            core::mem::swap(&mut members[i], &mut others[j]);
            stats = next;
            current = candidate;
            if current < best_energy {
                best_energy = current;
                best.clear();
                best.extend_from_slice(members);
            }
        }
    }
    best.sort_unstable();
    let exact = SufficientStats::from_subset(data, &best)?;
    Ok(SweepResult {
        score: objective.score_unchecked(&exact),
        indices: best,
        tuples_examined: 0,
        candidates_scored: cfg.steps as u64,
        degenerate_tuples: 0,
        boundary: None,
    })
}
