//! Hyperplanes through lifted tuples and convex-hull separation.

mod hull;
mod hyperplane;

pub use hull::{check_partition, check_separability, hull_distance, HullConfig, SeparabilityReport};
pub use hyperplane::{hyperplane_from_tuple, Hyperplane, HyperplaneFit, RANK_TOLERANCE};

pub(crate) use hyperplane::fit_rows;
