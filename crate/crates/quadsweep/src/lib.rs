//! Std front end for [`quadsweep_core`]: the parallel sweep, seeded dataset
//! generation, `x,y` CSV IO and the experiment harness behind the
//! `quadsweep` binary.
//!
//! ```
//! use quadsweep::{data::generate_dataset, parallel::parallel_sweep};
//! use quadsweep_core::{naive_quadratic_sweep, Objective};
//!
//! let data = generate_dataset(0x5eed, 12).unwrap();
//! let par = parallel_sweep(&data, 6, Objective::R2).unwrap();
//! assert_eq!(par, naive_quadratic_sweep(&data, 6, Objective::R2).unwrap());
//! ```

pub mod data;
pub mod experiment;
pub mod parallel;

pub use quadsweep_core;

/// Package version plus `git describe` output when built from a checkout.
pub const VERSION: &str = env!("QUADSWEEP_VERSION");
