//! Polynomial lifts that turn conic boundaries in the plane into hyperplanes.

use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::error::{Error, Result};
use crate::stats::Dataset;

/// Largest lift dimension.
pub const MAX_DIM: usize = 5;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Lift {
    /// `x ↦ (x², x)`; ignores y.
    L2,
    /// `(x, y) ↦ (x², y², x, y)`: axis-aligned conics.
    L4,
    /// `(x, y) ↦ (x², xy, y², x, y)`: general conics.
    L5,
}

impl Lift {
    pub const fn dim(self) -> usize {
        match self {
            Lift::L2 => 2,
            Lift::L4 => 4,
            Lift::L5 => 5,
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Lift::L2 => "l2",
            Lift::L4 => "l4",
            Lift::L5 => "l5",
        }
    }

    /// Names of the lifted coordinates, in order.
    pub const fn coordinate_names(self) -> &'static [&'static str] {
        match self {
            Lift::L2 => &["x^2", "x"],
            Lift::L4 => &["x^2", "y^2", "x", "y"],
            Lift::L5 => &["x^2", "xy", "y^2", "x", "y"],
        }
    }

    /// Writes the lifted coordinates into the first `dim()` slots of `out`.
    #[inline]
    pub fn apply_into(self, x: f64, y: f64, out: &mut [f64]) {
        match self {
            Lift::L2 => {
                out[0] = x * x;
                out[1] = x;
            }
            Lift::L4 => {
                out[0] = x * x;
                out[1] = y * y;
                out[2] = x;
                out[3] = y;
            }
            Lift::L5 => {
                out[0] = x * x;
                out[1] = x * y;
                out[2] = y * y;
                out[3] = x;
                out[4] = y;
            }
        }
    }
}

impl fmt::Display for Lift {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Lift {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "l2" => Ok(Lift::L2),
            "l4" => Ok(Lift::L4),
            "l5" => Ok(Lift::L5),
            _ => Err(Error::Config("unknown lift (expected l2, l4 or l5)")),
        }
    }
}

/// Planar coordinates a lift is applied in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Frame {
    /// `(x, y)` as given.
    Identity,
    /// `(u, v) = (x + y, x − y)`. Covariance in `(x, y)` is a quarter of the
    /// difference of deviation sums in `(u, v)`, so its rectangular-hyperbola
    /// boundary becomes axis-aligned here.
    SumDifference,
}

impl Frame {
    #[inline]
    pub fn apply(self, x: f64, y: f64) -> (f64, f64) {
        match self {
            Frame::Identity => (x, y),
            Frame::SumDifference => (x + y, x - y),
        }
    }

    pub const fn name(self) -> &'static str {
        match self {
            Frame::Identity => "xy",
            Frame::SumDifference => "uv",
        }
    }
}

/// A dataset point mapped into lift space.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LiftedPoint {
    coords: [f64; MAX_DIM],
    dim: usize,
    pub source_index: usize,
}

impl LiftedPoint {
    pub fn new(coords: &[f64], source_index: usize) -> Result<Self> {
        if coords.is_empty() || coords.len() > MAX_DIM {
            return Err(Error::DimensionMismatch {
                expected: MAX_DIM,
                found: coords.len(),
            });
        }
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(Error::NonFinite {
                index: source_index,
            });
        }
        let mut buf = [0.0; MAX_DIM];
        buf[..coords.len()].copy_from_slice(coords);
        Ok(LiftedPoint {
            coords: buf,
            dim: coords.len(),
            source_index,
        })
    }

    #[inline]
    pub fn coords(&self) -> &[f64] {
        &self.coords[..self.dim]
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.dim
    }
}

pub fn lift(lift: Lift, x: f64, y: f64) -> Result<LiftedPoint> {
    lift_indexed(lift, x, y, 0)
}

fn lift_indexed(lift: Lift, x: f64, y: f64, source_index: usize) -> Result<LiftedPoint> {
    if !x.is_finite() || (lift != Lift::L2 && !y.is_finite()) {
        return Err(Error::NonFinite {
            index: source_index,
        });
    }
    let mut coords = [0.0; MAX_DIM];
    lift.apply_into(x, y, &mut coords);
    if !coords.iter().all(|c| c.is_finite()) {
        return Err(Error::NonFinite {
            index: source_index,
        });
    }
    Ok(LiftedPoint {
        coords,
        dim: lift.dim(),
        source_index,
    })
}

/// Lifts every point; element `i` carries `source_index == i`.
pub fn lift_dataset(lift: Lift, data: &Dataset) -> Result<Vec<LiftedPoint>> {
    data.points()
        .enumerate()
        .map(|(i, (x, y))| lift_indexed(lift, x, y, i))
        .collect()
}

/// Lifts the points at `indices` into a flat row-major buffer.
pub(crate) fn lift_flat(lift: Lift, data: &Dataset, indices: &[usize]) -> Vec<f64> {
    let d = lift.dim();
    let mut out = alloc::vec![0.0; indices.len() * d];
    for (row, &i) in out.chunks_exact_mut(d).zip(indices) {
        let (x, y) = data.point(i);
        lift.apply_into(x, y, row);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn scalar_lifts() {
        assert_eq!(lift(Lift::L2, 3.0, 0.0).unwrap().coords(), &[9.0, 3.0]);
        assert_eq!(lift(Lift::L2, 3.0, f64::NAN).unwrap().coords(), &[9.0, 3.0]);
        assert_eq!(
            lift(Lift::L4, 2.0, 3.0).unwrap().coords(),
            &[4.0, 9.0, 2.0, 3.0]
        );
        assert_eq!(
            lift(Lift::L5, 2.0, 3.0).unwrap().coords(),
            &[4.0, 6.0, 9.0, 2.0, 3.0]
        );
    }

    #[test]
    fn rejects_non_finite() {
        assert!(lift(Lift::L5, f64::NAN, 1.0).is_err());
        assert!(lift(Lift::L4, 1.0, f64::INFINITY).is_err());
        // x² overflows
        assert!(lift(Lift::L2, 1e200, 0.0).is_err());
    }

    #[test]
    fn dataset_lift_keeps_duplicates() {
        let d = Dataset::new(vec![1.0, 1.0, 2.0], vec![0.5, 0.5, 1.0]).unwrap();
        let lifted = lift_dataset(Lift::L5, &d).unwrap();
        assert_eq!(lifted.len(), 3);
        assert!(lifted.iter().all(|p| p.dim() == 5));
        assert_eq!(lifted[0].coords(), lifted[1].coords());
        assert_eq!(
            lifted.iter().map(|p| p.source_index).collect::<Vec<_>>(),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn flat_matches_points() {
        let d = Dataset::new(vec![1.0, -2.0, 0.5], vec![3.0, 0.25, -1.0]).unwrap();
        let flat = lift_flat(Lift::L4, &d, &[2, 0]);
        assert_eq!(&flat[..4], lift(Lift::L4, 0.5, -1.0).unwrap().coords());
        assert_eq!(&flat[4..], lift(Lift::L4, 1.0, 3.0).unwrap().coords());
    }

    #[test]
    fn parse_names() {
        assert_eq!("L5".parse::<Lift>().unwrap(), Lift::L5);
        assert!("l3".parse::<Lift>().is_err());
    }
}
