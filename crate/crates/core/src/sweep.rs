//! Exact k-subset selection by enumerating hyperplanes through lifted
//! d-tuples, plus the sorted sliding-window solver for univariate variance.
//!
//! For every d-tuple `P` of lifted points the hyperplane through `P` is
//! computed, the remaining points are ordered by their projection onto its
//! normal, and every candidate `P' ∪ prefix(k − |P'|)` with `P' ⊆ P` is
//! scored from prefix power sums. Both orderings of the projection are
//! tried because the normal's sign is arbitrary. If the optimal subset is
//! separable from its complement by a hyperplane in lift space, rotating
//! that hyperplane until it rests on `d` points yields one of the tuples,
//! so the optimum appears among the candidates.
//!
//! Enumeration is split by the first (smallest) index of the tuple so that
//! callers can distribute [`QuadraticSweep::run_first`] across threads and
//! combine the partial results with [`Partial::merge`]. The merge is a
//! maximum under a total order, so the result does not depend on how the
//! work was partitioned.

use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geometry::{fit_rows, Hyperplane};
use crate::lifting::{Frame, Lift, MAX_DIM};
use crate::oracle;
use crate::stats::{compare, Dataset, Direction, Objective, Score, SufficientStats};

/// Largest n for which fully degenerate inputs fall back to brute force.
pub const DEGENERATE_FALLBACK_MAX_N: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    /// Selected points, ascending, 0-based.
    pub indices: Vec<usize>,
    pub score: Score,
    pub tuples_examined: u64,
    pub candidates_scored: u64,
    pub degenerate_tuples: u64,
    /// Hyperplane through the tuple that produced the winning candidate,
    /// in lift coordinates.
    pub boundary: Option<Hyperplane>,
}

/// Best candidate seen so far.
#[derive(Debug, Clone, PartialEq)]
struct Candidate {
    score: Score,
    indices: Vec<usize>,
    tuple: [usize; MAX_DIM],
    boundary: Hyperplane,
}

/// `Greater` when `a` beats `b`: better score, then the lexicographically
/// smaller index set, then the smaller tuple.
fn rank(direction: Direction, a: &Candidate, b: &Candidate) -> Ordering {
    compare(direction, a.score, b.score)
        .then_with(|| b.indices.cmp(&a.indices))
        .then_with(|| b.tuple.cmp(&a.tuple))
}

/// Partial result over a slice of the tuple space.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Partial {
    best: Option<Candidate>,
    direction: Option<Direction>,
    pub tuples_examined: u64,
    pub candidates_scored: u64,
    pub degenerate_tuples: u64,
}

impl Partial {
    /// Combines two partials; associative and commutative.
    pub fn merge(self, other: Partial) -> Partial {
        let direction = self.direction.or(other.direction);
        let best = match (self.best, other.best) {
            (Some(a), Some(b)) => {
                let dir = direction.unwrap_or(Direction::Maximize);
                Some(if rank(dir, &b, &a) == Ordering::Greater { b } else { a })
            }
            (a, b) => a.or(b),
        };
        Partial {
            best,
            direction,
            tuples_examined: self.tuples_examined + other.tuples_examined,
            candidates_scored: self.candidates_scored + other.candidates_scored,
            degenerate_tuples: self.degenerate_tuples + other.degenerate_tuples,
        }
    }
}

/// A configured sweep over one dataset.
#[derive(Debug, Clone)]
pub struct QuadraticSweep<'a> {
    data: &'a Dataset,
    k: usize,
    objective: Objective,
    lift: Lift,
    lifted: Vec<[f64; MAX_DIM]>,
}

impl<'a> QuadraticSweep<'a> {
    /// Sweep under the objective's own lift.
    pub fn new(data: &'a Dataset, k: usize, objective: Objective) -> Result<Self> {
        Self::with_lift(data, k, objective, objective.lift())
    }

    /// Sweep under another lift in the objective's frame; optimality is only
    /// expected when the lift matches the objective.
    pub fn with_lift(data: &'a Dataset, k: usize, objective: Objective, lift: Lift) -> Result<Self> {
        Self::with_embedding(data, k, objective, objective.frame(), lift)
    }

    /// Sweep with candidate subsets generated from `lift ∘ frame`. Scores are
    /// always computed on the original coordinates.
    pub fn with_embedding(
        data: &'a Dataset,
        k: usize,
        objective: Objective,
        frame: Frame,
        lift: Lift,
    ) -> Result<Self> {
        let n = data.len();
        let d = lift.dim();
        if n < d + 1 {
            return Err(Error::TooFewPoints { n, required: d + 1 });
        }
        if k < objective.min_subset() || k > n {
            return Err(Error::SubsetSize {
                k,
                min: objective.min_subset(),
                max: n,
            });
        }
        let mut lifted = vec![[0.0; MAX_DIM]; n];
        for (index, (row, (x, y))) in lifted.iter_mut().zip(data.points()).enumerate() {
            let (u, v) = frame.apply(x, y);
            lift.apply_into(u, v, row);
            if !row.iter().all(|c| c.is_finite()) {
                return Err(Error::NonFinite { index });
            }
        }
        Ok(QuadraticSweep {
            data,
            k,
            objective,
            lift,
            lifted,
        })
    }

    pub fn dim(&self) -> usize {
        self.lift.dim()
    }

    /// Number of distinct first indices; `run_first` accepts `0..num_first()`.
    pub fn num_first(&self) -> usize {
        self.data.len() - self.dim() + 1
    }

    /// Sweeps every tuple whose smallest index is `first`.
    pub fn run_first(&self, first: usize) -> Partial {
        let n = self.data.len();
        let d = self.dim();
        let mut partial = Partial {
            direction: Some(self.objective.direction()),
            ..Partial::default()
        };
        if first + d > n {
            return partial;
        }
        let mut scratch = Scratch::new(n, d, self.k);
        let mut tuple = [0usize; MAX_DIM];
        for (slot, v) in tuple.iter_mut().zip(first..first + d) {
            *slot = v;
        }
        loop {
            self.visit(&tuple[..d], &mut scratch, &mut partial);
            // next combination of tuple[1..d] within first+1..n
            let mut i = d - 1;
            loop {
                if i == 0 {
                    return partial;
                }
                if tuple[i] < n - d + i {
                    break;
                }
                i -= 1;
            }
            tuple[i] += 1;
            for j in i + 1..d {
                tuple[j] = tuple[j - 1] + 1;
            }
        }
    }

    /// Turns merged partials into a result. Falls back to brute force when
    /// every tuple was degenerate and `n` is small.
    pub fn finish(&self, partial: Partial) -> Result<SweepResult> {
        let Some(best) = partial.best else {
            let n = self.data.len();
            if n <= DEGENERATE_FALLBACK_MAX_N {
                let mut res = oracle::brute_force_select(self.data, self.k, self.objective)?;
                res.tuples_examined = partial.tuples_examined;
                res.degenerate_tuples = partial.degenerate_tuples;
                return Ok(res);
            }
            return Err(Error::AllTuplesDegenerate { n });
        };
        let stats = SufficientStats::from_subset(self.data, &best.indices)?;
        Ok(SweepResult {
            score: self.objective.score_unchecked(&stats),
            indices: best.indices,
            tuples_examined: partial.tuples_examined,
            candidates_scored: partial.candidates_scored,
            degenerate_tuples: partial.degenerate_tuples,
            boundary: Some(best.boundary),
        })
    }

    /// Sequential sweep over the whole tuple space.
    pub fn run(&self) -> Result<SweepResult> {
        let partial = (0..self.num_first())
            .map(|f| self.run_first(f))
            .fold(Partial::default(), Partial::merge);
        self.finish(partial)
    }

    fn visit(&self, tuple: &[usize], s: &mut Scratch, partial: &mut Partial) {
        let d = tuple.len();
        let k = self.k;
        let n = self.data.len();
        partial.tuples_examined += 1;

        let mut rows = [[0.0; MAX_DIM]; MAX_DIM];
        for (row, &i) in rows.iter_mut().zip(tuple) {
            *row = self.lifted[i];
        }
        let Some(plane) = fit_rows(&rows[..d], d) else {
            partial.degenerate_tuples += 1;
            return;
        };
        let w = plane.w();

        // project the complement
        s.order.clear();
        let mut t = 0;
        for i in 0..n {
            if t < d && tuple[t] == i {
                t += 1;
                continue;
            }
            let p = &self.lifted[i];
            let proj: f64 = w.iter().zip(p).map(|(a, b)| a * b).sum();
            s.order.push((proj, i));
        }
        s.order
            .sort_unstable_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));

        // descending order, ties still by ascending index
        s.reversed.clear();
        let mut end = s.order.len();
        while end > 0 {
            let mut start = end - 1;
            while start > 0 && s.order[start - 1].0 == s.order[end - 1].0 {
                start -= 1;
            }
            s.reversed.extend_from_slice(&s.order[start..end]);
            end = start;
        }

        // sums over every subset of the tuple
        let masks = 1usize << d;
        s.tuple_stats[0] = SufficientStats::EMPTY;
        for mask in 1..masks {
            let low = mask.trailing_zeros() as usize;
            let (x, y) = self.data.point(tuple[low]);
            s.tuple_stats[mask] = s.tuple_stats[mask & (mask - 1)].with_point(x, y);
        }

        let rest = n - d;
        let ascending = core::mem::take(&mut s.order);
        let descending = core::mem::take(&mut s.reversed);
        for orientation in [&ascending, &descending] {
            // prefix sums at lengths k - j for j = 0..=min(d, k)
            let longest = k.min(rest);
            let mut acc = SufficientStats::EMPTY;
            for m in 0..=longest {
                if m > 0 {
                    let (x, y) = self.data.point(orientation[m - 1].1);
                    acc.add(x, y);
                }
                if m + d >= k {
                    s.prefix[k - m] = acc;
                }
            }
            for mask in 0..masks {
                let j = mask.count_ones() as usize;
                if j > k || k - j > rest {
                    continue;
                }
                let stats = s.tuple_stats[mask].merged(&s.prefix[j]);
                let score = self.objective.score_unchecked(&stats);
                partial.candidates_scored += 1;
                let direction = self.objective.direction();
                let verdict = match &partial.best {
                    None => Ordering::Greater,
                    Some(b) => compare(direction, score, b.score),
                };
                if verdict == Ordering::Less {
                    continue;
                }
                let mut indices: Vec<usize> = (0..d)
                    .filter(|b| mask & (1 << b) != 0)
                    .map(|b| tuple[b])
                    .chain(orientation[..k - j].iter().map(|e| e.1))
                    .collect();
                indices.sort_unstable();
                let mut tup = [usize::MAX; MAX_DIM];
                tup[..d].copy_from_slice(tuple);
                let cand = Candidate {
                    score,
                    indices,
                    tuple: tup,
                    boundary: plane,
                };
                let replace = match &partial.best {
                    None => true,
                    Some(b) => rank(direction, &cand, b) == Ordering::Greater,
                };
                if replace {
                    partial.best = Some(cand);
                }
            }
        }
        s.order = ascending;
        s.reversed = descending;
    }
}

struct Scratch {
    order: Vec<(f64, usize)>,
    reversed: Vec<(f64, usize)>,
    tuple_stats: [SufficientStats; 1 << MAX_DIM],
    /// `prefix[j]` holds the sums of the first `k - j` projected points.
    prefix: [SufficientStats; MAX_DIM + 1],
}

impl Scratch {
    fn new(n: usize, _d: usize, _k: usize) -> Self {
        Scratch {
            order: Vec::with_capacity(n),
            reversed: Vec::with_capacity(n),
            tuple_stats: [SufficientStats::EMPTY; 1 << MAX_DIM],
            prefix: [SufficientStats::EMPTY; MAX_DIM + 1],
        }
    }
}

/// Runs the full sweep sequentially.
pub fn naive_quadratic_sweep(data: &Dataset, k: usize, objective: Objective) -> Result<SweepResult> {
    QuadraticSweep::new(data, k, objective)?.run()
}

/// Minimum sum of squared deviations of `xs` over k-subsets in O(n log n).
///
/// The optimum is contiguous in sorted order, so a width-k window slides
/// over the sorted values while the sums are updated in O(1) per step.
pub fn sliding_window_variance(xs: &[f64], k: usize) -> Result<SweepResult> {
    let n = xs.len();
    if k < 2 || k > n {
        return Err(Error::SubsetSize { k, min: 2, max: n });
    }
    if let Some(index) = xs.iter().position(|x| !x.is_finite()) {
        return Err(Error::NonFinite { index });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| xs[a].total_cmp(&xs[b]).then(a.cmp(&b)));

    let mut stats = SufficientStats::EMPTY;
    for &i in &order[..k] {
        stats.add(xs[i], 0.0);
    }
    let mut best_start = 0;
    let mut best = stats.ssd_x();
    for start in 1..=n - k {
        let out = xs[order[start - 1]];
        let inc = xs[order[start + k - 1]];
        // remove cannot fail: count stays at k
        let _ = stats.remove(out, 0.0);
        stats.add(inc, 0.0);
        let ssd = stats.ssd_x();
        if ssd < best {
            best = ssd;
            best_start = start;
        }
    }
    let mut indices = order[best_start..best_start + k].to_vec();
    indices.sort_unstable();
    let mut exact = SufficientStats::EMPTY;
    for &i in &indices {
        exact.add(xs[i], 0.0);
    }
    Ok(SweepResult {
        indices,
        score: Score::Valid(exact.ssd_x()),
        tuples_examined: 0,
        candidates_scored: (n - k + 1) as u64,
        degenerate_tuples: 0,
        boundary: None,
    })
}
