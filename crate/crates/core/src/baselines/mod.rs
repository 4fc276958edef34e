//! Heuristic and robust-regression baselines.

mod anneal;
mod ransac;
mod theil_sen;

pub use anneal::{simulated_annealing_select, AnnealConfig};
pub use ransac::{ransac_line, RansacConfig, RansacFit};
pub use theil_sen::{median, prediction_r2, theil_sen};
