//! Exhaustive k-subset search in revolving-door order.
//!
//! Consecutive combinations differ by one element leaving and one entering,
//! so the power sums move by one `remove` and one `add` per subset.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::stats::{compare, least_squares_sse, Dataset, Direction, Objective, Score, SufficientStats};
use crate::sweep::SweepResult;

/// Default cap on the number of enumerated subsets.
pub const DEFAULT_BUDGET: u128 = 100_000_000;

/// Incremental sums are rebuilt from scratch this often.
const REFRESH_EVERY: u64 = 1 << 16;

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        // exact at every step: acc * (n - i) is divisible by (i + 1)
        acc = match acc.checked_mul((n - i) as u128) {
            Some(v) => v / (i as u128 + 1),
            None => return u128::MAX,
        };
    }
    acc
}

/// Revolving-door (Gray code) combinations of `t` out of `0..n`.
///
/// Starts at `{0, …, t-1}`; every [`RevolvingDoor::advance`] swaps one
/// element out and one in and keeps the combination sorted ascending.
#[derive(Debug, Clone)]
pub struct RevolvingDoor {
    /// `c[1..=t]` ascending, `c[t+1] == n` sentinel; `c[0]` unused.
    c: Vec<usize>,
    t: usize,
    done: bool,
}

impl RevolvingDoor {
    pub fn new(n: usize, t: usize) -> Self {
        assert!(t <= n, "cannot choose {t} of {n}");
        let mut c = Vec::with_capacity(t + 2);
        c.push(0);
        c.extend(0..t);
        c.push(n);
        RevolvingDoor {
            c,
            t,
            done: t == 0 || t == n,
        }
    }

    /// The current combination, ascending.
    pub fn current(&self) -> &[usize] {
        &self.c[1..=self.t]
    }

    /// Moves to the next combination and returns `(removed, added)`, or
    /// `None` once every combination has been visited.
    pub fn advance(&mut self) -> Option<(usize, usize)> {
        if self.done {
            return None;
        }
        let t = self.t;
        let c = &mut self.c;
        let mut j;
        let mut increase;
        if t % 2 == 1 {
            if c[1] + 1 < c[2] {
                let out = c[1];
                c[1] += 1;
                return Some((out, c[1]));
            }
            j = 2;
            increase = false;
        } else {
            if c[1] > 0 {
                let out = c[1];
                c[1] -= 1;
                return Some((out, c[1]));
            }
            j = 2;
            increase = true;
        }
        loop {
            if j > t {
                self.done = true;
                return None;
            }
            if increase {
                // c[j-1] == j - 2 here
                if c[j] + 1 < c[j + 1] {
                    let out = c[j - 1];
                    c[j - 1] = c[j];
                    c[j] += 1;
                    return Some((out, c[j]));
                }
                j += 1;
                increase = false;
            } else {
                // c[j] == c[j-1] + 1 here
                if c[j] >= j {
                    let out = c[j];
                    c[j] = c[j - 1];
                    c[j - 1] = j - 2;
                    return Some((out, j - 2));
                }
                j += 1;
                increase = true;
            }
        }
    }
}

fn check_budget(n: usize, k: usize, budget: u128) -> Result<()> {
    let subsets = binomial(n, k);
    if subsets > budget {
        return Err(Error::BudgetExceeded { subsets, budget });
    }
    Ok(())
}

/// Shared driver: best subset under `score` in `direction`, ties to the
/// lexicographically smallest index set.
fn exhaustive<F>(data: &Dataset, k: usize, direction: Direction, mut score: F) -> SweepResult
where
    F: FnMut(&SufficientStats) -> Score,
{
    let n = data.len();
    let mut door = RevolvingDoor::new(n, k);
    let mut stats = SufficientStats::EMPTY;
    for &i in door.current() {
        let (x, y) = data.point(i);
        stats.add(x, y);
    }
    let mut best_score = score(&stats);
    let mut best: Vec<usize> = door.current().to_vec();
    let mut visited: u64 = 1;
    while let Some((out, inc)) = door.advance() {
        visited += 1;
        if visited % REFRESH_EVERY == 0 {
            stats = SufficientStats::EMPTY;
            for &i in door.current() {
                let (x, y) = data.point(i);
                stats.add(x, y);
            }
        } else {
            let (xo, yo) = data.point(out);
            let (xi, yi) = data.point(inc);
            // count is k >= 1 before the removal
            let _ = stats.remove(xo, yo);
            stats.add(xi, yi);
        }
        let s = score(&stats);
        match compare(direction, s, best_score) {
            Ordering::Greater => {
                best_score = s;
                best.clear();
                best.extend_from_slice(door.current());
            }
            Ordering::Equal if door.current() < best.as_slice() => {
                best_score = s;
                best.clear();
                best.extend_from_slice(door.current());
            }
            _ => {}
        }
    }
    let exact = SufficientStats::from_subset(data, &best).expect("indices come from 0..n");
    SweepResult {
        score: score(&exact),
        indices: best,
        tuples_examined: 0,
        candidates_scored: visited,
        degenerate_tuples: 0,
        boundary: None,
    }
}

/// Ground-truth optimum of `objective` over all k-subsets.
pub fn brute_force_select(data: &Dataset, k: usize, objective: Objective) -> Result<SweepResult> {
    brute_force_select_within(data, k, objective, DEFAULT_BUDGET)
}

pub fn brute_force_select_within(
    data: &Dataset,
    k: usize,
    objective: Objective,
    budget: u128,
) -> Result<SweepResult> {
    let n = data.len();
    if k < objective.min_subset() || k > n {
        return Err(Error::SubsetSize {
            k,
            min: objective.min_subset(),
            max: n,
        });
    }
    check_budget(n, k, budget)?;
    Ok(exhaustive(data, k, objective.direction(), |s| {
        objective.score_unchecked(s)
    }))
}

/// Least trimmed squares by exhaustive search: the k-subset whose own
/// least-squares line leaves the smallest residual sum of squares.
pub fn lts_brute_force(data: &Dataset, k: usize) -> Result<SweepResult> {
    lts_brute_force_within(data, k, DEFAULT_BUDGET)
}

pub fn lts_brute_force_within(data: &Dataset, k: usize, budget: u128) -> Result<SweepResult> {
    let n = data.len();
    if k < 2 || k > n {
        return Err(Error::SubsetSize { k, min: 2, max: n });
    }
    check_budget(n, k, budget)?;
    Ok(exhaustive(data, k, Direction::Minimize, least_squares_sse))
}
