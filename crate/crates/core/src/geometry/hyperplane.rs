use crate::error::{Error, Result};
use crate::lifting::{LiftedPoint, MAX_DIM};

/// Pivots below this fraction of the largest matrix entry count as zero.
pub const RANK_TOLERANCE: f64 = 1e-10;

/// `{p : w·p + b = 0}` with `‖w‖₂ = 1` and the first nonzero entry of `w`
/// positive.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperplane {
    w: [f64; MAX_DIM],
    dim: usize,
    pub b: f64,
}

impl Hyperplane {
    /// Normalizes `(w, b)` to the canonical scale and sign.
    pub fn new(w: &[f64], b: f64) -> Option<Self> {
        Self::normalized(w, b, true)
    }

    /// Normalizes `(w, b)` to unit `‖w‖` keeping the given orientation.
    pub fn oriented(w: &[f64], b: f64) -> Option<Self> {
        Self::normalized(w, b, false)
    }

    fn normalized(w: &[f64], b: f64, canonical: bool) -> Option<Self> {
        if w.is_empty() || w.len() > MAX_DIM {
            return None;
        }
        let norm = libm::sqrt(w.iter().map(|v| v * v).sum::<f64>());
        if !(norm > 0.0) || !norm.is_finite() {
            return None;
        }
        let mut buf = [0.0; MAX_DIM];
        for (dst, v) in buf.iter_mut().zip(w) {
            *dst = v / norm;
        }
        let mut b = b / norm;
        let flip = canonical
            && buf[..w.len()]
            .iter()
            .find(|v| libm::fabs(**v) > 1e-12)
            .is_some_and(|v| *v < 0.0);
        if flip {
            buf.iter_mut().for_each(|v| *v = -*v);
            b = -b;
        }
        Some(Hyperplane {
            w: buf,
            dim: w.len(),
            b,
        })
    }

    #[inline]
    pub fn w(&self) -> &[f64] {
        &self.w[..self.dim]
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Signed value `w·p + b`.
    #[inline]
    pub fn eval(&self, p: &[f64]) -> f64 {
        self.w().iter().zip(p).map(|(a, b)| a * b).sum::<f64>() + self.b
    }
}

/// Result of fitting a hyperplane through a `d`-tuple.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum HyperplaneFit {
    Plane(Hyperplane),
    /// The tuple is affinely dependent; its kernel has dimension above one.
    Degenerate,
}

impl HyperplaneFit {
    pub fn plane(self) -> Option<Hyperplane> {
        match self {
            HyperplaneFit::Plane(h) => Some(h),
            HyperplaneFit::Degenerate => None,
        }
    }
}

/// Hyperplane through `d` lifted points of dimension `d`.
pub fn hyperplane_from_tuple(points: &[LiftedPoint]) -> Result<HyperplaneFit> {
    let d = points.len();
    if d == 0 || d > MAX_DIM {
        return Err(Error::DimensionMismatch {
            expected: MAX_DIM,
            found: d,
        });
    }
    let mut rows = [[0.0; MAX_DIM]; MAX_DIM];
    for (row, p) in rows.iter_mut().zip(points) {
        if p.dim() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.dim(),
            });
        }
        row[..d].copy_from_slice(p.coords());
    }
    Ok(match fit_rows(&rows[..d], d) {
        Some(h) => HyperplaneFit::Plane(h),
        None => HyperplaneFit::Degenerate,
    })
}

/// Kernel of the `d × (d+1)` matrix `[rows | 1]` by row reduction with
/// partial pivoting. `None` when the rank is below `d`.
pub(crate) fn fit_rows(rows: &[[f64; MAX_DIM]], d: usize) -> Option<Hyperplane> {
    debug_assert_eq!(rows.len(), d);
    let cols = d + 1;
    let mut m = [[0.0f64; MAX_DIM + 1]; MAX_DIM];
    let mut scale = 1.0f64;
    for (dst, src) in m.iter_mut().zip(rows) {
        dst[..d].copy_from_slice(&src[..d]);
        dst[d] = 1.0;
        for v in &src[..d] {
            scale = scale.max(libm::fabs(*v));
        }
    }
    let tol = RANK_TOLERANCE * scale;

    let mut pivot_cols = [usize::MAX; MAX_DIM];
    let mut rank = 0;
    let mut free_col = usize::MAX;
    for col in 0..cols {
        if rank == d {
            if free_col == usize::MAX {
                free_col = col;
            }
            break;
        }
        let (best, best_abs) = (rank..d)
            .map(|r| (r, libm::fabs(m[r][col])))
            .fold((rank, -1.0), |acc, cur| if cur.1 > acc.1 { cur } else { acc });
        if best_abs <= tol {
            if free_col != usize::MAX {
                // a second free column: kernel dimension above one
                return None;
            }
            free_col = col;
            continue;
        }
        m.swap(rank, best);
        let pivot = m[rank][col];
        for r in rank + 1..d {
            let factor = m[r][col] / pivot;
            if factor != 0.0 {
                for c in col..cols {
                    m[r][c] -= factor * m[rank][c];
                }
            }
        }
        pivot_cols[rank] = col;
        rank += 1;
    }
    if rank < d || free_col == usize::MAX {
        return None;
    }

    let mut v = [0.0f64; MAX_DIM + 1];
    v[free_col] = 1.0;
    for r in (0..d).rev() {
        let pc = pivot_cols[r];
        let tail: f64 = (pc + 1..cols).map(|c| m[r][c] * v[c]).sum();
        v[pc] = -tail / m[r][pc];
    }
    Hyperplane::new(&v[..d], v[d])
}
