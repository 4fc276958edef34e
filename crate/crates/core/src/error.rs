use core::fmt;

/// Errors raised by the solver and its building blocks.
///
/// Degenerate hyperplanes and zero-variance scores are not errors; they are
/// ordinary values ([`crate::geometry::HyperplaneFit::Degenerate`] and
/// [`crate::stats::Score::Invalid`]).
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Dataset columns have different lengths.
    LengthMismatch { xs: usize, ys: usize },
    /// A dataset must hold at least one point.
    EmptyDataset,
    /// A coordinate was NaN or infinite.
    NonFinite { index: usize },
    /// An index outside `0..n`.
    IndexOutOfRange { index: usize, n: usize },
    /// An index appeared twice in a subset.
    DuplicateIndex { index: usize },
    /// Subset size outside what the objective (or the dataset) permits.
    SubsetSize { k: usize, min: usize, max: usize },
    /// Too few points for the lift dimension.
    TooFewPoints { n: usize, required: usize },
    /// Vectors or point sets of incompatible dimension.
    DimensionMismatch { expected: usize, found: usize },
    /// Removing from empty statistics.
    EmptyStats,
    /// An empty point set where a nonempty one is required.
    EmptyPointSet,
    /// Exhaustive enumeration would exceed the configured budget.
    BudgetExceeded { subsets: u128, budget: u128 },
    /// Every tuple was degenerate and the instance is too large for brute force.
    AllTuplesDegenerate { n: usize },
    /// Invalid configuration value.
    Config(&'static str),
    /// An estimator could not produce a fit (e.g. all x equal).
    NoFit(&'static str),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::LengthMismatch { xs, ys } => {
                write!(f, "x and y columns differ in length ({xs} vs {ys})")
            }
            Error::EmptyDataset => f.write_str("dataset is empty"),
            Error::NonFinite { index } => write!(f, "non-finite coordinate at point {index}"),
            Error::IndexOutOfRange { index, n } => {
                write!(f, "index {index} out of range for {n} points")
            }
            Error::DuplicateIndex { index } => write!(f, "index {index} selected twice"),
            Error::SubsetSize { k, min, max } => {
                write!(f, "subset size {k} outside permitted range [{min}, {max}]")
            }
            Error::TooFewPoints { n, required } => {
                write!(f, "{n} points given, at least {required} required")
            }
            Error::DimensionMismatch { expected, found } => {
                write!(f, "expected dimension {expected}, found {found}")
            }
            Error::EmptyStats => f.write_str("cannot remove a point from empty statistics"),
            Error::EmptyPointSet => f.write_str("point set is empty"),
            Error::BudgetExceeded { subsets, budget } => {
                write!(f, "{subsets} subsets exceed the enumeration budget of {budget}")
            }
            Error::AllTuplesDegenerate { n } => write!(
                f,
                "every tuple is affinely dependent and n = {n} is too large for the brute-force fallback"
            ),
            Error::Config(msg) => write!(f, "invalid configuration: {msg}"),
            Error::NoFit(msg) => write!(f, "no fit: {msg}"),
        }
    }
}

pub type Result<T> = core::result::Result<T, Error>;

impl core::error::Error for Error {}
