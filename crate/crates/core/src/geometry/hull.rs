//! Squared distance between two convex hulls by a conditional-gradient
//! method with fully corrective (Wolfe-style) steps.
//!
//! The program is `min ‖Aᵀλ − Bᵀμ‖²` with `λ` and `μ` on the probability
//! simplex, i.e. the min-norm point of the difference polytope
//! `conv{a_i − b_j}`. Its linear minimization oracle splits into an argmin
//! over `A` and an argmax over `B`, so atoms are index pairs `(i, j)` and the
//! barycentric weights are recovered as `λ_i = Σ_j w_ij`, `μ_j = Σ_i w_ij`.
//! Each major iteration adds the oracle atom to a corral of affinely
//! independent atoms; minor iterations then move to the min-norm point of the
//! corral's affine hull, stepping away from (and dropping) atoms whose weight
//! would turn negative. Plain away-step iterations stall with many active
//! atoms near degenerate optima; the corrective cycles terminate in a handful
//! of steps. The Frank–Wolfe gap bounds the suboptimality and is the stopping
//! criterion.

use alloc::vec;
use alloc::vec::Vec;

use super::Hyperplane;
use crate::error::{Error, Result};
use crate::lifting::{lift_flat, Lift};
use crate::stats::Dataset;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HullConfig {
    pub max_iter: usize,
    /// Stop once the duality gap drops below this.
    pub tol: f64,
    /// Hulls count as separable when the squared distance exceeds this.
    pub epsilon: f64,
}

impl Default for HullConfig {
    fn default() -> Self {
        HullConfig {
            max_iter: 20_000,
            tol: 1e-12,
            epsilon: 1e-10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeparabilityReport {
    pub separable: bool,
    /// Squared hull distance at the final iterate.
    pub distance_sq: f64,
    /// Frank–Wolfe duality gap at the final iterate.
    pub gap: f64,
    pub iterations: usize,
    /// False when `max_iter` was reached with `gap >= tol`.
    pub converged: bool,
    /// Closest points of the two hulls.
    pub closest_a: Vec<f64>,
    pub closest_b: Vec<f64>,
    /// Midpoint hyperplane orthogonal to the closest-point difference,
    /// positive on the first set; present when the distance is nonzero.
    pub witness: Option<Hyperplane>,
}

/// Weights of the min-norm point on the affine hull of the corral atoms, or
/// `None` when the atoms are numerically affinely dependent.
fn affine_minimizer(atoms: &[(usize, usize, f64)], fa: &[f64], fb: &[f64], d: usize) -> Option<Vec<f64>> {
    let m = atoms.len();
    let atom = |t: usize, k: usize| fa[atoms[t].0 * d + k] - fb[atoms[t].1 * d + k];
    if m == 1 {
        return Some(vec![1.0]);
    }
    // KKT system [G 1; 1ᵀ 0] [w; ν] = [0; 1] with G the Gram matrix
    let size = m + 1;
    let cols = size + 1;
    let mut sys = vec![0.0; size * cols];
    for s in 0..m {
        for t in 0..m {
            sys[s * cols + t] = (0..d).map(|k| atom(s, k) * atom(t, k)).sum();
        }
        sys[s * cols + m] = 1.0;
        sys[m * cols + s] = 1.0;
    }
    sys[m * cols + size] = 1.0;
    let x = solve_dense(&mut sys, size)?;
    let w = x[..m].to_vec();
    w.iter().all(|v| v.is_finite()).then_some(w)
}

/// Solves the augmented `size × (size + 1)` system in place by Gaussian
/// elimination with partial pivoting; `None` if (numerically) singular.
fn solve_dense(sys: &mut [f64], size: usize) -> Option<Vec<f64>> {
    let cols = size + 1;
    let scale = sys.iter().fold(0.0f64, |m, v| m.max(libm::fabs(*v)));
    let tol = 1e-13 * scale.max(1e-300);
    for col in 0..size {
        let pivot_row = (col..size)
            .max_by(|&r, &q| libm::fabs(sys[r * cols + col]).total_cmp(&libm::fabs(sys[q * cols + col])))?;
        if libm::fabs(sys[pivot_row * cols + col]) <= tol {
            return None;
        }
        if pivot_row != col {
            for c in 0..cols {
                sys.swap(pivot_row * cols + c, col * cols + c);
            }
        }
        let pivot = sys[col * cols + col];
        for r in col + 1..size {
            let f = sys[r * cols + col] / pivot;
            if f != 0.0 {
                for c in col..cols {
                    sys[r * cols + c] -= f * sys[col * cols + c];
                }
            }
        }
    }
    let mut x = vec![0.0; size];
    for r in (0..size).rev() {
        let tail: f64 = (r + 1..size).map(|c| sys[r * cols + c] * x[c]).sum();
        x[r] = (sys[r * cols + size] - tail) / sys[r * cols + r];
    }
    Some(x)
}

/// Index minimizing `sign * v[i]`, first on ties.
fn argmin_by(v: &[f64], sign: f64) -> usize {
    let mut best = 0;
    for (i, x) in v.iter().enumerate() {
        if sign * x < sign * v[best] {
            best = i;
        }
    }
    best
}

#[inline]
fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn flatten<P: AsRef<[f64]>>(set: &[P]) -> Result<(Vec<f64>, usize)> {
    let first = set.first().ok_or(Error::EmptyPointSet)?;
    let d = first.as_ref().len();
    if d == 0 {
        return Err(Error::DimensionMismatch {
            expected: 1,
            found: 0,
        });
    }
    let mut flat = Vec::with_capacity(set.len() * d);
    for (index, p) in set.iter().enumerate() {
        let p = p.as_ref();
        if p.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: p.len(),
            });
        }
        if !p.iter().all(|v| v.is_finite()) {
            return Err(Error::NonFinite { index });
        }
        flat.extend_from_slice(p);
    }
    Ok((flat, d))
}

/// Squared distance between `conv(a)` and `conv(b)`.
pub fn hull_distance<P: AsRef<[f64]>, Q: AsRef<[f64]>>(
    a: &[P],
    b: &[Q],
    cfg: &HullConfig,
) -> Result<SeparabilityReport> {
    let (fa, da) = flatten(a)?;
    let (fb, db) = flatten(b)?;
    if da != db {
        return Err(Error::DimensionMismatch {
            expected: da,
            found: db,
        });
    }
    Ok(solve(&fa, &fb, da, cfg))
}

fn solve(fa: &[f64], fb: &[f64], d: usize, cfg: &HullConfig) -> SeparabilityReport {
    let na = fa.len() / d;
    let nb = fb.len() / d;
    let va = |i: usize| &fa[i * d..(i + 1) * d];
    let vb = |j: usize| &fb[j * d..(j + 1) * d];

    // corral of atoms (i, j, weight) of the difference polytope conv{a_i − b_j}
    let mut atoms: Vec<(usize, usize, f64)> = vec![(0, 0, 1.0)];
    let mut pa = vec![0.0; d];
    let mut pb = vec![0.0; d];
    let mut z = vec![0.0; d];
    let mut sa = vec![0.0; na];
    let mut sb = vec![0.0; nb];
    let mut gap;
    let mut iterations = 0;

    let rebuild = |atoms: &[(usize, usize, f64)], pa: &mut Vec<f64>, pb: &mut Vec<f64>, z: &mut Vec<f64>| {
        pa.iter_mut().chain(pb.iter_mut()).for_each(|v| *v = 0.0);
        for &(i, j, w) in atoms {
            for (acc, v) in pa.iter_mut().zip(va(i)) {
                *acc += w * v;
            }
            for (acc, v) in pb.iter_mut().zip(vb(j)) {
                *acc += w * v;
            }
        }
        for ((zi, a), b) in z.iter_mut().zip(pa.iter()).zip(pb.iter()) {
            *zi = a - b;
        }
    };
    rebuild(&atoms, &mut pa, &mut pb, &mut z);

    'major: loop {
        let zz = dot(&z, &z);
        for (i, s) in sa.iter_mut().enumerate() {
            *s = dot(va(i), &z);
        }
        for (j, s) in sb.iter_mut().enumerate() {
            *s = dot(vb(j), &z);
        }
        let i_fw = argmin_by(&sa, 1.0);
        let j_fw = argmin_by(&sb, -1.0);
        gap = 2.0 * (zz - (sa[i_fw] - sb[j_fw]));
        if gap < cfg.tol || iterations >= cfg.max_iter {
            break;
        }
        if atoms.iter().any(|a| a.0 == i_fw && a.1 == j_fw) {
            // the oracle atom is already in the corral: no further progress
            // is possible at this precision
            break;
        }
        iterations += 1;

        if atoms.len() > d {
            // a full corral cannot take another atom; fall back to a plain
            // line-search step toward the oracle atom
            let mut dir = vec![0.0; d];
            for (k, slot) in dir.iter_mut().enumerate() {
                *slot = va(i_fw)[k] - vb(j_fw)[k] - z[k];
            }
            let dd = dot(&dir, &dir);
            let gamma = if dd > 0.0 { (-dot(&z, &dir) / dd).clamp(0.0, 1.0) } else { 0.0 };
            if gamma <= 0.0 {
                break;
            }
            atoms.iter_mut().for_each(|a| a.2 *= 1.0 - gamma);
            atoms.push((i_fw, j_fw, gamma));
            atoms.retain(|a| a.2 > 0.0);
            rebuild(&atoms, &mut pa, &mut pb, &mut z);
            continue;
        }
        atoms.push((i_fw, j_fw, 0.0));

        // corrective cycles: move to the affine minimizer of the corral,
        // dropping atoms whose weight would turn negative
        loop {
            let Some(alpha) = affine_minimizer(&atoms, fa, fb, d) else {
                // numerically dependent corral: drop the lightest atom
                let lightest = argmin_by(&atoms.iter().map(|a| a.2).collect::<Vec<_>>(), 1.0);
                atoms.remove(lightest);
                let total: f64 = atoms.iter().map(|a| a.2).sum();
                if !(total > 0.0) {
                    break 'major;
                }
                atoms.iter_mut().for_each(|a| a.2 /= total);
                rebuild(&atoms, &mut pa, &mut pb, &mut z);
                continue 'major;
            };
            if alpha.iter().all(|&v| v > 0.0) {
                for (atom, w) in atoms.iter_mut().zip(&alpha) {
                    atom.2 = *w;
                }
                break;
            }
            // largest step from the current weights toward alpha that keeps
            // every weight nonnegative
            let mut theta = 1.0f64;
            let mut blocking = 0;
            for (t, (atom, &a)) in atoms.iter().zip(&alpha).enumerate() {
                if a <= 0.0 {
                    let ratio = atom.2 / (atom.2 - a);
                    if ratio < theta {
                        theta = ratio;
                        blocking = t;
                    }
                }
            }
            for (atom, &a) in atoms.iter_mut().zip(&alpha) {
                atom.2 = theta * a + (1.0 - theta) * atom.2;
            }
            atoms[blocking].2 = 0.0;
            atoms.retain(|a| a.2 > 0.0);
            if atoms.is_empty() {
                break 'major;
            }
            let total: f64 = atoms.iter().map(|a| a.2).sum();
            atoms.iter_mut().for_each(|a| a.2 /= total);
            iterations += 1;
            if iterations >= cfg.max_iter {
                break;
            }
        }
        rebuild(&atoms, &mut pa, &mut pb, &mut z);
    }

    let distance_sq = dot(&z, &z);
    let witness = if distance_sq > 0.0 {
        let mid_dot: f64 = z
            .iter()
            .zip(pa.iter().zip(&pb))
            .map(|(zi, (pa, pb))| zi * 0.5 * (pa + pb))
            .sum();
        // z points from the second hull toward the first
        Hyperplane::oriented(&z, -mid_dot)
    } else {
        None
    };
    SeparabilityReport {
        separable: distance_sq > cfg.epsilon,
        distance_sq,
        gap,
        iterations,
        converged: gap < cfg.tol,
        closest_a: pa,
        closest_b: pb,
        witness,
    }
}

/// Lifts both sets and tests whether their hulls are at squared distance
/// above `cfg.epsilon`.
pub fn check_separability(
    inliers: &Dataset,
    outliers: &Dataset,
    lift: Lift,
    cfg: &HullConfig,
) -> Result<SeparabilityReport> {
    let all_in: Vec<usize> = (0..inliers.len()).collect();
    let all_out: Vec<usize> = (0..outliers.len()).collect();
    let a = lift_flat(lift, inliers, &all_in);
    let b = lift_flat(lift, outliers, &all_out);
    check_flat(&a, &b, lift.dim(), cfg)
}

/// As [`check_separability`] with the outliers being the complement of
/// `inliers` in `data`.
pub fn check_partition(
    data: &Dataset,
    inliers: &[usize],
    lift: Lift,
    cfg: &HullConfig,
) -> Result<SeparabilityReport> {
    crate::stats::check_indices(inliers, data.len())?;
    let mut selected = vec![false; data.len()];
    inliers.iter().for_each(|&i| selected[i] = true);
    let outliers: Vec<usize> = (0..data.len()).filter(|&i| !selected[i]).collect();
    if inliers.is_empty() || outliers.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    let a = lift_flat(lift, data, inliers);
    let b = lift_flat(lift, data, &outliers);
    check_flat(&a, &b, lift.dim(), cfg)
}

fn check_flat(a: &[f64], b: &[f64], d: usize, cfg: &HullConfig) -> Result<SeparabilityReport> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyPointSet);
    }
    if let Some(index) = a.iter().chain(b).position(|v| !v.is_finite()) {
        return Err(Error::NonFinite { index: index / d });
    }
    Ok(solve(a, b, d, cfg))
}
