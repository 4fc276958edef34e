//! Exact k-subset selection for correlation-family objectives.
//!
//! Points are lifted into `R^d` (`d` = 2, 4 or 5) so that the conic boundary
//! between an optimal subset and its complement becomes a hyperplane; the
//! solver then enumerates hyperplanes through d-tuples of lifted points and
//! scores the few subsets each one induces. Everything here is `no_std`
//! with `alloc`; IO, threading and the CLI live in the `quadsweep` crate.
//!
//! ```
//! use quadsweep_core::{naive_quadratic_sweep, Dataset, Objective, Score};
//!
//! let data = Dataset::from_points(&[
//!     (0.9, 0.1), (0.0, 0.0), (0.3, 0.8), (1.0, 1.0), (0.15, 0.55), (2.0, 2.0),
//! ]).unwrap();
//! let best = naive_quadratic_sweep(&data, 3, Objective::R2).unwrap();
//! assert_eq!(best.indices, vec![1, 3, 5]);
//! assert_eq!(best.score, Score::Valid(1.0));
//! ```

#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod baselines;
pub mod error;
pub mod geometry;
pub mod lifting;
pub mod oracle;
pub mod rng;
pub mod stats;
pub mod sweep;

pub use error::{Error, Result};
pub use geometry::{
    check_partition, check_separability, hull_distance, hyperplane_from_tuple, HullConfig,
    Hyperplane, HyperplaneFit, SeparabilityReport,
};
pub use lifting::{lift, lift_dataset, Frame, Lift, LiftedPoint};
pub use oracle::{brute_force_select, brute_force_select_within, lts_brute_force, RevolvingDoor};
pub use stats::{
    compare, Dataset, Direction, Objective, ObjectiveDescriptor, Score, SortOrder, SufficientStats,
};
pub use sweep::{naive_quadratic_sweep, sliding_window_variance, Partial, QuadraticSweep, SweepResult};
