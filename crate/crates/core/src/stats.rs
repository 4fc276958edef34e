//! Datasets, power-sum sufficient statistics and the objective family.
//!
//! Every objective in scope is a closed-form function of the six running
//! sums `(k, Σx, Σy, Σx², Σy², Σxy)`, so a subset can be scored in O(1)
//! once its sums are known and a point can be added or removed in O(1).

use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::lifting::{Frame, Lift};

/// Deviation sums at or below this are treated as zero variance.
pub const ZERO_VARIANCE: f64 = 1e-12;

/// Paired coordinates `(xs[i], ys[i])`; point identity is the position `i`.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    xs: Vec<f64>,
    ys: Vec<f64>,
}

impl Dataset {
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Result<Self> {
        if xs.len() != ys.len() {
            return Err(Error::LengthMismatch {
                xs: xs.len(),
                ys: ys.len(),
            });
        }
        if xs.is_empty() {
            return Err(Error::EmptyDataset);
        }
        if let Some(index) = xs
            .iter()
            .zip(&ys)
            .position(|(x, y)| !x.is_finite() || !y.is_finite())
        {
            return Err(Error::NonFinite { index });
        }
        Ok(Dataset { xs, ys })
    }

    pub fn from_points(points: &[(f64, f64)]) -> Result<Self> {
        let (xs, ys) = points.iter().copied().unzip();
        Dataset::new(xs, ys)
    }

    pub fn len(&self) -> usize {
        self.xs.len()
    }

    /// Always false; a dataset holds at least one point.
    pub fn is_empty(&self) -> bool {
        self.xs.is_empty()
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn point(&self, i: usize) -> (f64, f64) {
        (self.xs[i], self.ys[i])
    }

    pub fn points(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.xs.iter().copied().zip(self.ys.iter().copied())
    }

    /// The sub-dataset at `indices`, in the given order.
    pub fn select(&self, indices: &[usize]) -> Result<Dataset> {
        check_indices(indices, self.len())?;
        if indices.is_empty() {
            return Err(Error::EmptyDataset);
        }
        Ok(Dataset {
            xs: indices.iter().map(|&i| self.xs[i]).collect(),
            ys: indices.iter().map(|&i| self.ys[i]).collect(),
        })
    }

    /// The dataset expressed in `frame` coordinates.
    pub fn in_frame(&self, frame: Frame) -> Dataset {
        let (xs, ys) = self.points().map(|(x, y)| frame.apply(x, y)).unzip();
        Dataset { xs, ys }
    }

    /// Maps every point through `(x, y) -> (a·x + b, c·y + e)`.
    pub fn affine(&self, a: f64, b: f64, c: f64, e: f64) -> Result<Dataset> {
        Dataset::new(
            self.xs.iter().map(|x| a * x + b).collect(),
            self.ys.iter().map(|y| c * y + e).collect(),
        )
    }
}

pub(crate) fn check_indices(indices: &[usize], n: usize) -> Result<()> {
    let mut seen = alloc::vec![false; n];
    for &index in indices {
        if index >= n {
            return Err(Error::IndexOutOfRange { index, n });
        }
        if core::mem::replace(&mut seen[index], true) {
            return Err(Error::DuplicateIndex { index });
        }
    }
    Ok(())
}

/// Running power sums over a selected subset.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct SufficientStats {
    pub count: usize,
    pub s_x: f64,
    pub s_y: f64,
    pub s_xx: f64,
    pub s_yy: f64,
    pub s_xy: f64,
}

impl SufficientStats {
    pub const EMPTY: SufficientStats = SufficientStats {
        count: 0,
        s_x: 0.0,
        s_y: 0.0,
        s_xx: 0.0,
        s_yy: 0.0,
        s_xy: 0.0,
    };

    /// Sums over `indices`; an empty slice gives [`SufficientStats::EMPTY`].
    pub fn from_subset(data: &Dataset, indices: &[usize]) -> Result<Self> {
        check_indices(indices, data.len())?;
        let mut stats = SufficientStats::EMPTY;
        for &i in indices {
            stats.add(data.xs[i], data.ys[i]);
        }
        Ok(stats)
    }

    pub fn from_dataset(data: &Dataset) -> Self {
        let mut stats = SufficientStats::EMPTY;
        for (x, y) in data.points() {
            stats.add(x, y);
        }
        stats
    }

    #[inline]
    pub fn add(&mut self, x: f64, y: f64) {
        self.count += 1;
        self.s_x += x;
        self.s_y += y;
        self.s_xx += x * x;
        self.s_yy += y * y;
        self.s_xy += x * y;
    }

    #[inline]
    pub fn remove(&mut self, x: f64, y: f64) -> Result<()> {
        if self.count == 0 {
            return Err(Error::EmptyStats);
        }
        self.count -= 1;
        self.s_x -= x;
        self.s_y -= y;
        self.s_xx -= x * x;
        self.s_yy -= y * y;
        self.s_xy -= x * y;
        if self.count == 0 {
            *self = SufficientStats::EMPTY;
        }
        Ok(())
    }

    pub fn with_point(mut self, x: f64, y: f64) -> Self {
        self.add(x, y);
        self
    }

    pub fn without_point(mut self, x: f64, y: f64) -> Result<Self> {
        self.remove(x, y)?;
        Ok(self)
    }

    /// Sums of two disjoint subsets.
    #[inline]
    pub fn merged(&self, other: &SufficientStats) -> SufficientStats {
        SufficientStats {
            count: self.count + other.count,
            s_x: self.s_x + other.s_x,
            s_y: self.s_y + other.s_y,
            s_xx: self.s_xx + other.s_xx,
            s_yy: self.s_yy + other.s_yy,
            s_xy: self.s_xy + other.s_xy,
        }
    }

    /// Σ(x − x̄)².
    #[inline]
    pub fn ssd_x(&self) -> f64 {
        self.s_xx - self.s_x * self.s_x / self.count as f64
    }

    /// Σ(y − ȳ)².
    #[inline]
    pub fn ssd_y(&self) -> f64 {
        self.s_yy - self.s_y * self.s_y / self.count as f64
    }

    /// Σ(x − x̄)(y − ȳ).
    #[inline]
    pub fn sp_xy(&self) -> f64 {
        self.s_xy - self.s_x * self.s_y / self.count as f64
    }
}

/// Objectives over a k-subset.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Objective {
    /// Sum of squared deviations of x (minimized).
    Var,
    /// Total variation σ²ₓ + σ²ᵧ, as deviation sums (minimized).
    Tv,
    /// Difference of variances σ²ₓ − σ²ᵧ, as deviation sums (maximized).
    Dv,
    /// Covariance, as the cross-deviation sum (maximized).
    Cov,
    /// Signed Pearson correlation (maximized).
    R,
    /// Coefficient of determination of the least-squares line (maximized).
    R2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Minimize,
    Maximize,
}

/// Sort order of the projected complement.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SortOrder {
    Ascending,
    Descending,
}

/// Static description of an objective: direction, lift and score rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ObjectiveDescriptor {
    pub id: Objective,
    pub direction: Direction,
    pub lift: Lift,
    /// Coordinates the lift is applied in.
    pub frame: Frame,
    /// Documentation only; the sweep evaluates both orientations.
    pub rho: SortOrder,
}

impl Objective {
    pub const ALL: [Objective; 6] = [
        Objective::Var,
        Objective::Tv,
        Objective::Dv,
        Objective::Cov,
        Objective::R,
        Objective::R2,
    ];

    pub const fn descriptor(self) -> ObjectiveDescriptor {
        let (direction, lift) = match self {
            Objective::Var => (Direction::Minimize, Lift::L2),
            Objective::Tv => (Direction::Minimize, Lift::L4),
            Objective::Dv | Objective::Cov => (Direction::Maximize, Lift::L4),
            Objective::R | Objective::R2 => (Direction::Maximize, Lift::L5),
        };
        let rho = match direction {
            Direction::Minimize => SortOrder::Ascending,
            Direction::Maximize => SortOrder::Descending,
        };
        let frame = match self {
            Objective::Cov => Frame::SumDifference,
            _ => Frame::Identity,
        };
        ObjectiveDescriptor {
            id: self,
            direction,
            lift,
            frame,
            rho,
        }
    }

    pub const fn direction(self) -> Direction {
        self.descriptor().direction
    }

    pub const fn lift(self) -> Lift {
        self.descriptor().lift
    }

    pub const fn frame(self) -> Frame {
        self.descriptor().frame
    }

    /// Smallest subset size for which the objective is meaningful.
    ///
    /// Two points with distinct x are always exactly collinear, so the
    /// correlation objectives start at three.
    pub const fn min_subset(self) -> usize {
        match self {
            Objective::R | Objective::R2 => 3,
            _ => 2,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Objective::Var => "var",
            Objective::Tv => "tv",
            Objective::Dv => "dv",
            Objective::Cov => "cov",
            Objective::R => "r",
            Objective::R2 => "r2",
        }
    }

    /// Score with the precondition checked.
    pub fn score(self, stats: &SufficientStats) -> Result<Score> {
        if stats.count < self.min_subset() {
            return Err(Error::SubsetSize {
                k: stats.count,
                min: self.min_subset(),
                max: usize::MAX,
            });
        }
        Ok(self.score_unchecked(stats))
    }

    /// Score without the size check; callers guarantee `count >= min_subset()`.
    #[inline]
    pub fn score_unchecked(self, s: &SufficientStats) -> Score {
        match self {
            Objective::Var => Score::Valid(s.ssd_x()),
            Objective::Tv => Score::Valid(s.ssd_x() + s.ssd_y()),
            Objective::Dv => Score::Valid(s.ssd_x() - s.ssd_y()),
            Objective::Cov => Score::Valid(s.sp_xy()),
            Objective::R => {
                let (vx, vy) = (s.ssd_x(), s.ssd_y());
                if vx <= ZERO_VARIANCE || vy <= ZERO_VARIANCE {
                    Score::Invalid
                } else {
                    Score::Valid(s.sp_xy() / (libm::sqrt(vx) * libm::sqrt(vy)))
                }
            }
            Objective::R2 => {
                let (vx, vy) = (s.ssd_x(), s.ssd_y());
                if vx <= ZERO_VARIANCE || vy <= ZERO_VARIANCE {
                    Score::Invalid
                } else {
                    let c = s.sp_xy();
                    Score::Valid(c * c / (vx * vy))
                }
            }
        }
    }

    /// Orders two scores so that `Greater` means `a` is preferred.
    #[inline]
    pub fn compare(self, a: Score, b: Score) -> Ordering {
        compare(self.direction(), a, b)
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let lower = s.trim();
        Objective::ALL
            .into_iter()
            .find(|o| o.name().eq_ignore_ascii_case(lower))
            .ok_or(Error::Config("unknown objective (expected var, tv, dv, cov, r or r2)"))
    }
}

/// An objective value; `Invalid` marks a zero-variance denominator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Score {
    Valid(f64),
    Invalid,
}

impl Score {
    pub fn value(self) -> Option<f64> {
        match self {
            Score::Valid(v) => Some(v),
            Score::Invalid => None,
        }
    }

    pub fn is_valid(self) -> bool {
        matches!(self, Score::Valid(_))
    }
}

/// `Greater` when `a` is preferred over `b` under `direction`.
///
/// `Invalid` loses to every valid score and ties with itself.
#[inline]
pub fn compare(direction: Direction, a: Score, b: Score) -> Ordering {
    match (a, b) {
        (Score::Invalid, Score::Invalid) => Ordering::Equal,
        (Score::Invalid, Score::Valid(_)) => Ordering::Less,
        (Score::Valid(_), Score::Invalid) => Ordering::Greater,
        (Score::Valid(x), Score::Valid(y)) => {
            let ord = x.partial_cmp(&y).unwrap_or(Ordering::Equal);
            match direction {
                Direction::Maximize => ord,
                Direction::Minimize => ord.reverse(),
            }
        }
    }
}

/// Residual sum of squares of the least-squares line through the subset.
///
/// `Invalid` when the x deviation sum vanishes (vertical subset).
#[inline]
pub fn least_squares_sse(s: &SufficientStats) -> Score {
    let vx = s.ssd_x();
    if s.count < 2 || vx <= ZERO_VARIANCE {
        return Score::Invalid;
    }
    let c = s.sp_xy();
    Score::Valid(s.ssd_y() - c * c / vx)
}

/// Slope and intercept of the least-squares line, if x varies.
pub fn least_squares_line(s: &SufficientStats) -> Option<(f64, f64)> {
    let vx = s.ssd_x();
    if s.count < 2 || vx <= ZERO_VARIANCE {
        return None;
    }
    let slope = s.sp_xy() / vx;
    let intercept = (s.s_y - slope * s.s_x) / s.count as f64;
    Some((slope, intercept))
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn line3() -> Dataset {
        Dataset::new(vec![1.0, 2.0, 3.0], vec![1.0, 2.0, 3.0]).unwrap()
    }

    #[test]
    fn subset_sums() {
        let s = SufficientStats::from_subset(&line3(), &[0, 1, 2]).unwrap();
        assert_eq!(s.count, 3);
        assert_eq!(s.s_x, 6.0);
        assert_eq!(s.s_xx, 14.0);
        assert_eq!(s.s_xy, 14.0);
        assert_eq!(
            SufficientStats::from_subset(&line3(), &[]).unwrap(),
            SufficientStats::EMPTY
        );
    }

    #[test]
    fn subset_index_errors() {
        assert_eq!(
            SufficientStats::from_subset(&line3(), &[0, 3]),
            Err(Error::IndexOutOfRange { index: 3, n: 3 })
        );
        assert_eq!(
            SufficientStats::from_subset(&line3(), &[1, 1]),
            Err(Error::DuplicateIndex { index: 1 })
        );
    }

    #[test]
    fn dataset_validation() {
        assert!(matches!(
            Dataset::new(vec![1.0], vec![]),
            Err(Error::LengthMismatch { .. })
        ));
        assert_eq!(Dataset::new(vec![], vec![]), Err(Error::EmptyDataset));
        assert_eq!(
            Dataset::new(vec![0.0, f64::NAN], vec![0.0, 1.0]),
            Err(Error::NonFinite { index: 1 })
        );
        assert_eq!(
            Dataset::new(vec![0.0, 1.0], vec![f64::INFINITY, 1.0]),
            Err(Error::NonFinite { index: 0 })
        );
    }

    #[test]
    fn add_and_remove() {
        let s = SufficientStats::from_dataset(&line3());
        let t = s.with_point(4.0, 0.0);
        assert_eq!(t.s_x, 10.0);
        assert_eq!(t.s_xx, 30.0);
        let u = s.with_point(7.5, -2.25).without_point(7.5, -2.25).unwrap();
        assert_eq!(u.count, s.count);
        for (a, b) in [
            (u.s_x, s.s_x),
            (u.s_y, s.s_y),
            (u.s_xx, s.s_xx),
            (u.s_yy, s.s_yy),
            (u.s_xy, s.s_xy),
        ] {
            assert!((a - b).abs() <= 1e-12);
        }
        assert_eq!(
            SufficientStats::EMPTY.without_point(1.0, 1.0),
            Err(Error::EmptyStats)
        );
    }

    #[test]
    fn r2_fixed_points() {
        let on_line = Dataset::from_points(&[(0.0, 0.0), (1.0, 1.0), (2.0, 2.0)]).unwrap();
        let s = SufficientStats::from_dataset(&on_line);
        assert_eq!(Objective::R2.score(&s).unwrap(), Score::Valid(1.0));
        let tent = Dataset::from_points(&[(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)]).unwrap();
        let s = SufficientStats::from_dataset(&tent);
        assert_eq!(Objective::R2.score(&s).unwrap(), Score::Valid(0.0));
    }

    #[test]
    fn zero_variance_is_invalid() {
        let flat = Dataset::from_points(&[(0.0, 1.0), (1.0, 1.0), (2.0, 1.0)]).unwrap();
        let s = SufficientStats::from_dataset(&flat);
        assert_eq!(Objective::R2.score(&s).unwrap(), Score::Invalid);
        assert_eq!(Objective::R.score(&s).unwrap(), Score::Invalid);
        assert_eq!(Objective::Cov.score(&s).unwrap(), Score::Valid(0.0));
    }

    #[test]
    fn minimum_sizes() {
        let s = SufficientStats::from_subset(&line3(), &[0, 1]).unwrap();
        assert!(Objective::R2.score(&s).is_err());
        assert!(Objective::R.score(&s).is_err());
        assert!(Objective::Var.score(&s).is_ok());
        let one = SufficientStats::from_subset(&line3(), &[0]).unwrap();
        assert!(Objective::Cov.score(&one).is_err());
    }

    #[test]
    fn closed_forms() {
        let d = Dataset::from_points(&[(0.0, 1.0), (1.0, 3.0), (3.0, 2.0), (4.0, 6.0)]).unwrap();
        let s = SufficientStats::from_dataset(&d);
        // x̄ = 2, ȳ = 3: Σdx² = 10, Σdy² = 14, Σdxdy = 9
        let v = |o: Objective| o.score(&s).unwrap().value().unwrap();
        assert!((v(Objective::Var) - 10.0).abs() < 1e-12);
        assert!((v(Objective::Tv) - 24.0).abs() < 1e-12);
        assert!((v(Objective::Dv) + 4.0).abs() < 1e-12);
        assert!((v(Objective::Cov) - 9.0).abs() < 1e-12);
        assert!((v(Objective::R2) - 81.0 / 140.0).abs() < 1e-12);
        assert!((v(Objective::R) - 9.0 / libm::sqrt(140.0)).abs() < 1e-12);
    }

    #[test]
    fn comparison_rules() {
        let (hi, lo) = (Score::Valid(0.9), Score::Valid(0.3));
        assert_eq!(compare(Direction::Maximize, hi, lo), Ordering::Greater);
        assert_eq!(compare(Direction::Minimize, hi, lo), Ordering::Less);
        for dir in [Direction::Maximize, Direction::Minimize] {
            assert_eq!(compare(dir, lo, Score::Invalid), Ordering::Greater);
            assert_eq!(compare(dir, Score::Invalid, hi), Ordering::Less);
            assert_eq!(compare(dir, Score::Invalid, Score::Invalid), Ordering::Equal);
            assert_eq!(compare(dir, hi, hi), Ordering::Equal);
        }
    }

    #[test]
    fn descriptor_table() {
        use Direction::*;
        let expect = [
            (Objective::Var, Minimize, Lift::L2, 2),
            (Objective::Tv, Minimize, Lift::L4, 4),
            (Objective::Dv, Maximize, Lift::L4, 4),
            (Objective::Cov, Maximize, Lift::L4, 4),
            (Objective::R, Maximize, Lift::L5, 5),
            (Objective::R2, Maximize, Lift::L5, 5),
        ];
        for (o, dir, lift, d) in expect {
            let desc = o.descriptor();
            assert_eq!(desc.direction, dir);
            assert_eq!(desc.lift, lift);
            assert_eq!(desc.lift.dim(), d);
            let rho = if dir == Maximize {
                SortOrder::Descending
            } else {
                SortOrder::Ascending
            };
            assert_eq!(desc.rho, rho);
            let frame = if o == Objective::Cov {
                Frame::SumDifference
            } else {
                Frame::Identity
            };
            assert_eq!(desc.frame, frame);
        }
    }

    #[test]
    fn parse_objective() {
        assert_eq!("R2".parse::<Objective>().unwrap(), Objective::R2);
        assert_eq!("cov".parse::<Objective>().unwrap(), Objective::Cov);
        assert!("r3".parse::<Objective>().is_err());
    }

    #[test]
    fn lts_closed_form() {
        let d = Dataset::from_points(&[(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)]).unwrap();
        let s = SufficientStats::from_dataset(&d);
        assert!(least_squares_sse(&s).value().unwrap().abs() < 1e-12);
        let (m, c) = least_squares_line(&s).unwrap();
        assert!((m - 2.0).abs() < 1e-12 && (c - 1.0).abs() < 1e-12);
        let vertical = Dataset::from_points(&[(1.0, 0.0), (1.0, 2.0)]).unwrap();
        assert_eq!(
            least_squares_sse(&SufficientStats::from_dataset(&vertical)),
            Score::Invalid
        );
    }
}
