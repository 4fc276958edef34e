//! Property checks shared by the `properties` and `acceptance` targets. Each
//! runs a deterministic proptest runner for the given number of cases.

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestCaseError, TestRng, TestRunner};
use quadsweep::parallel::parallel_sweep;
use quadsweep_core::baselines::theil_sen;
use quadsweep_core::{
    brute_force_select, check_partition, hull_distance, hyperplane_from_tuple, lift, naive_quadratic_sweep,
    Dataset, HullConfig, HyperplaneFit, Lift, LiftedPoint, Objective, Score, SufficientStats,
};

pub struct Property {
    pub name: &'static str,
    pub cases: u32,
    pub check: fn(u32) -> Result<(), String>,
}

pub const ALL: &[Property] = &[
    Property { name: "welford add/remove roundtrip (1e-12)", cases: 512, check: welford_roundtrip },
    Property { name: "r^2 equals R2 (1e-9 relative)", cases: 512, check: r_squared_identity },
    Property { name: "R2 affine invariance (1e-9 relative, argmax kept)", cases: 128, check: r2_affine_invariance },
    Property { name: "DV on (U,V) equals 4 COV on (X,Y) (1e-9 relative)", cases: 512, check: dv_uv_is_four_cov },
    Property { name: "scores invariant under dataset permutation", cases: 256, check: permutation_invariance },
    Property { name: "hull distance symmetry (1e-12)", cases: 256, check: hull_symmetry },
    Property { name: "hull distance translation invariance (1e-9)", cases: 256, check: hull_translation },
    Property { name: "hull distance matches exhaustive face search (1e-6)", cases: 256, check: hull_matches_exhaustive },
    Property { name: "hull witness separates when separable", cases: 256, check: hull_witness },
    Property { name: "hyperplane residuals below 1e-9", cases: 512, check: hyperplane_residuals },
    Property { name: "conics are hyperplanes under L5", cases: 256, check: conic_is_l5_hyperplane },
    Property { name: "sweep R2 winners are L5-separable", cases: 64, check: sweep_winner_separable },
    Property { name: "parallel sweep equals sequential sweep", cases: 64, check: parallel_deterministic },
    Property { name: "Theil-Sen reorder invariance and affine equivariance", cases: 256, check: theil_sen_equivariance },
];

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run<S: Strategy>(cases: u32, strategy: S, test: impl Fn(S::Value) -> Result<(), TestCaseError>) -> Result<(), String>
where
    S::Value: std::fmt::Debug,
{
    runner(cases).run(&strategy, test).map_err(|e| e.to_string())
}

fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs())
}

fn points(n: std::ops::Range<usize>, lo: f64, hi: f64) -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((lo..hi, lo..hi), n)
}

/// A dataset and a subset of at least `min_k` of its indices.
fn dataset_and_subset(n: std::ops::Range<usize>, min_k: usize) -> impl Strategy<Value = (Vec<(f64, f64)>, Vec<usize>)> {
    points(n, -1.0, 1.0).prop_flat_map(move |pts| {
        let len = pts.len();
        let subset = prop::sample::subsequence((0..len).collect::<Vec<_>>(), min_k..=len);
        (Just(pts), subset)
    })
}

fn score(o: Objective, data: &Dataset, idx: &[usize]) -> Score {
    o.score_unchecked(&SufficientStats::from_subset(data, idx).unwrap())
}

pub fn welford_roundtrip(cases: u32) -> Result<(), String> {
    let strat = (points(0..20, -10.0, 10.0), (-10.0..10.0f64, -10.0..10.0f64));
    run(cases, strat, |(pts, (x, y))| {
        let mut s = SufficientStats::EMPTY;
        for &(a, b) in &pts {
            s.add(a, b);
        }
        let before = s;
        s.add(x, y);
        s.remove(x, y).unwrap();
        prop_assert_eq!(s.count, before.count);
        for (a, b) in [
            (s.s_x, before.s_x),
            (s.s_y, before.s_y),
            (s.s_xx, before.s_xx),
            (s.s_yy, before.s_yy),
            (s.s_xy, before.s_xy),
        ] {
            prop_assert!((a - b).abs() <= 1e-12, "{a} vs {b}");
        }
        Ok(())
    })
}

pub fn r_squared_identity(cases: u32) -> Result<(), String> {
    run(cases, dataset_and_subset(3..30, 3), |(pts, idx)| {
        let data = Dataset::from_points(&pts).unwrap();
        if let (Score::Valid(r), Score::Valid(r2)) = (score(Objective::R, &data, &idx), score(Objective::R2, &data, &idx)) {
            prop_assert!(rel_close(r * r, r2, 1e-9), "r^2 = {} vs R2 = {r2}", r * r);
        }
        Ok(())
    })
}

pub fn r2_affine_invariance(cases: u32) -> Result<(), String> {
    let scale = prop_oneof![0.1..10.0f64, -10.0..-0.1f64];
    let strat = (dataset_and_subset(6..11, 3), scale.clone(), -10.0..10.0f64, scale, -10.0..10.0f64);
    run(cases, strat, |((pts, idx), a, b, c, e)| {
        let data = Dataset::from_points(&pts).unwrap();
        let mapped = data.affine(a, b, c, e).unwrap();
        match (score(Objective::R2, &data, &idx), score(Objective::R2, &mapped, &idx)) {
            (Score::Valid(u), Score::Valid(v)) => prop_assert!(rel_close(u, v, 1e-9), "{u} vs {v}"),
            (u, v) => prop_assert_eq!(u.is_valid(), v.is_valid()),
        }
        let k = data.len() / 2 + 1;
        let best = brute_force_select(&data, k, Objective::R2).unwrap();
        let best_mapped = brute_force_select(&mapped, k, Objective::R2).unwrap();
        let (u, v) = (best.score.value().unwrap(), best_mapped.score.value().unwrap());
        prop_assert!(rel_close(u, v, 1e-9), "optimum {u} vs {v}");
        // the original argmax scores optimally after the map (ties may pick another set)
        let kept = score(Objective::R2, &mapped, &best.indices).value().unwrap();
        prop_assert!(rel_close(kept, v, 1e-9), "argmax moved: {kept} vs {v}");
        Ok(())
    })
}

pub fn dv_uv_is_four_cov(cases: u32) -> Result<(), String> {
    run(cases, dataset_and_subset(2..30, 2), |(pts, idx)| {
        let data = Dataset::from_points(&pts).unwrap();
        let uv = Dataset::from_points(&pts.iter().map(|&(x, y)| (x + y, x - y)).collect::<Vec<_>>()).unwrap();
        let dv = score(Objective::Dv, &uv, &idx).value().unwrap();
        let cov = score(Objective::Cov, &data, &idx).value().unwrap();
        prop_assert!(rel_close(dv, 4.0 * cov, 1e-9), "{dv} vs 4·{cov}");
        Ok(())
    })
}

pub fn permutation_invariance(cases: u32) -> Result<(), String> {
    let strat = dataset_and_subset(3..25, 3).prop_flat_map(|(pts, idx)| {
        let perm = Just((0..pts.len()).collect::<Vec<_>>()).prop_shuffle();
        (Just(pts), Just(idx), perm)
    });
    run(cases, strat, |(pts, idx, perm)| {
        // position p of the permuted dataset holds original point perm[p]
        let data = Dataset::from_points(&pts).unwrap();
        let permuted = Dataset::from_points(&perm.iter().map(|&i| pts[i]).collect::<Vec<_>>()).unwrap();
        let mapped: Vec<usize> = idx
            .iter()
            .map(|&i| perm.iter().position(|&p| p == i).unwrap())
            .collect();
        for o in Objective::ALL {
            match (score(o, &data, &idx), score(o, &permuted, &mapped)) {
                (Score::Valid(u), Score::Valid(v)) => prop_assert!(rel_close(u, v, 1e-9) || (u - v).abs() < 1e-12, "{o}: {u} vs {v}"),
                (u, v) => prop_assert_eq!(u.is_valid(), v.is_valid()),
            }
        }
        Ok(())
    })
}

fn point_sets(max: usize, dims: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = (Vec<Vec<f64>>, Vec<Vec<f64>>)> {
    dims.prop_flat_map(move |d| {
        let p = prop::collection::vec(-1.0..1.0f64, d);
        (prop::collection::vec(p.clone(), 1..=max), prop::collection::vec(p, 1..=max))
    })
}

pub fn hull_symmetry(cases: u32) -> Result<(), String> {
    run(cases, point_sets(8, 1..=5), |(a, b)| {
        let cfg = HullConfig::default();
        let ab = hull_distance(&a, &b, &cfg).unwrap();
        let ba = hull_distance(&b, &a, &cfg).unwrap();
        prop_assert!((ab.distance_sq - ba.distance_sq).abs() <= 1e-12, "{} vs {}", ab.distance_sq, ba.distance_sq);
        Ok(())
    })
}

pub fn hull_translation(cases: u32) -> Result<(), String> {
    let strat = point_sets(8, 1..=5).prop_flat_map(|(a, b)| {
        let d = a[0].len();
        (Just(a), Just(b), prop::collection::vec(-10.0..10.0f64, d))
    });
    run(cases, strat, |(a, b, t)| {
        let cfg = HullConfig::default();
        let shift = |s: &[Vec<f64>]| -> Vec<Vec<f64>> {
            s.iter().map(|p| p.iter().zip(&t).map(|(v, o)| v + o).collect()).collect()
        };
        let base = hull_distance(&a, &b, &cfg).unwrap().distance_sq;
        let moved = hull_distance(&shift(&a), &shift(&b), &cfg).unwrap().distance_sq;
        prop_assert!((base - moved).abs() < 1e-9, "{base} vs {moved}");
        Ok(())
    })
}

/// Minimum of ‖Σλa − Σμb‖² by solving the equality-constrained problem on
/// every pair of faces and keeping the feasible stationary points.
fn exhaustive_hull_distance(a: &[Vec<f64>], b: &[Vec<f64>]) -> f64 {
    let mut best = f64::INFINITY;
    for ma in 1u32..(1 << a.len()) {
        for mb in 1u32..(1 << b.len()) {
            let sa: Vec<&Vec<f64>> = (0..a.len()).filter(|i| ma >> i & 1 == 1).map(|i| &a[i]).collect();
            let sb: Vec<&Vec<f64>> = (0..b.len()).filter(|j| mb >> j & 1 == 1).map(|j| &b[j]).collect();
            if let Some(v) = face_minimum(&sa, &sb) {
                best = best.min(v);
            }
        }
    }
    best
}

fn face_minimum(sa: &[&Vec<f64>], sb: &[&Vec<f64>]) -> Option<f64> {
    let (p, q) = (sa.len(), sb.len());
    let m = p + q;
    // signed rows: +a_i, −b_j; z = Σ v_r row_r with Σλ = Σμ = 1
    let rows: Vec<Vec<f64>> = sa
        .iter()
        .map(|r| r.to_vec())
        .chain(sb.iter().map(|r| r.iter().map(|v| -v).collect()))
        .collect();
    let size = m + 2;
    let mut mat = vec![vec![0.0; size + 1]; size];
    for r in 0..m {
        for c in 0..m {
            mat[r][c] = rows[r].iter().zip(&rows[c]).map(|(x, y)| x * y).sum();
        }
        mat[r][if r < p { m } else { m + 1 }] = 1.0;
    }
    for c in 0..p {
        mat[m][c] = 1.0;
    }
    for c in p..m {
        mat[m + 1][c] = 1.0;
    }
    mat[m][size] = 1.0;
    mat[m + 1][size] = 1.0;
    // Gauss–Jordan with partial pivoting
    for col in 0..size {
        let piv = (col..size).max_by(|&i, &j| mat[i][col].abs().total_cmp(&mat[j][col].abs()))?;
        if mat[piv][col].abs() < 1e-12 {
            return None;
        }
        mat.swap(col, piv);
        for r in 0..size {
            if r != col {
                let f = mat[r][col] / mat[col][col];
                for c in col..=size {
                    mat[r][c] -= f * mat[col][c];
                }
            }
        }
    }
    let v: Vec<f64> = (0..m).map(|r| mat[r][size] / mat[r][r]).collect();
    if v.iter().any(|&w| w < -1e-12) {
        return None;
    }
    let d = rows[0].len();
    let z: Vec<f64> = (0..d).map(|k| (0..m).map(|r| v[r] * rows[r][k]).sum()).collect();
    Some(z.iter().map(|x| x * x).sum())
}

pub fn hull_matches_exhaustive(cases: u32) -> Result<(), String> {
    run(cases, point_sets(4, 1..=3), |(a, b)| {
        let fw = hull_distance(&a, &b, &HullConfig::default()).unwrap().distance_sq;
        let exact = exhaustive_hull_distance(&a, &b);
        prop_assert!((fw - exact).abs() <= 1e-6, "solver {fw} vs exhaustive {exact}");
        Ok(())
    })
}

pub fn hull_witness(cases: u32) -> Result<(), String> {
    run(cases, point_sets(8, 1..=5), |(a, b)| {
        let rep = hull_distance(&a, &b, &HullConfig::default()).unwrap();
        if rep.separable {
            let h = rep.witness.expect("separable report carries a witness");
            prop_assert!(a.iter().all(|p| h.eval(p) > 0.0));
            prop_assert!(b.iter().all(|p| h.eval(p) < 0.0));
        }
        Ok(())
    })
}

pub fn hyperplane_residuals(cases: u32) -> Result<(), String> {
    let strat = prop_oneof![Just(Lift::L2), Just(Lift::L4), Just(Lift::L5)]
        .prop_flat_map(|l| (Just(l), points(l.dim()..l.dim() + 1, -1.0, 1.0)));
    run(cases, strat, |(l, pts)| {
        let lifted: Vec<LiftedPoint> = pts.iter().map(|&(x, y)| lift(l, x, y).unwrap()).collect();
        if let HyperplaneFit::Plane(h) = hyperplane_from_tuple(&lifted).unwrap() {
            prop_assert!((h.w().iter().map(|v| v * v).sum::<f64>() - 1.0).abs() < 1e-12);
            for p in &lifted {
                let r = h.eval(p.coords());
                prop_assert!(r.abs() < 1e-9, "residual {r}");
            }
        }
        Ok(())
    })
}

/// Points on the ellipse `A(x−x₀)² + B(y−y₀)² + C(x−x₀)(y−y₀) = D`.
fn conic_points(a: f64, b: f64, c: f64, d: f64, x0: f64, y0: f64, angles: &[f64]) -> Vec<(f64, f64)> {
    angles
        .iter()
        .map(|&t| {
            let (u, v) = (t.cos(), t.sin());
            let q = a * u * u + b * v * v + c * u * v;
            let r = (d / q).sqrt();
            (x0 + r * u, y0 + r * v)
        })
        .collect()
}

pub fn conic_is_l5_hyperplane(cases: u32) -> Result<(), String> {
    let strat = (0.2..3.0f64, 0.2..3.0f64, -1.0..1.0f64, 0.1..2.0f64, -1.0..1.0f64, -1.0..1.0f64);
    run(cases, strat, |(a, b, c_frac, d, x0, y0)| {
        // keep the form positive definite: C² < 4AB
        let c = c_frac * 1.9 * (a * b).sqrt();
        let angles: Vec<f64> = (0..12).map(|i| 0.3 + i as f64 * 0.5).collect();
        let pts = conic_points(a, b, c, d, x0, y0, &angles);
        let lifted: Vec<LiftedPoint> = pts.iter().map(|&(x, y)| lift(Lift::L5, x, y).unwrap()).collect();
        let h = match hyperplane_from_tuple(&lifted[..5]).unwrap() {
            HyperplaneFit::Plane(h) => h,
            HyperplaneFit::Degenerate => return Err(TestCaseError::fail("five conic points are degenerate")),
        };
        for p in &lifted[5..] {
            let r = h.eval(p.coords());
            prop_assert!(r.abs() < 1e-9, "residual {r}");
        }
        Ok(())
    })
}

/// The hyperbola xy = 1 is a hyperplane under L5 but not under L4.
pub fn hyperbola_needs_cross_term() -> Result<(), String> {
    let pts: Vec<(f64, f64)> = [0.5, 0.8, 1.3, 2.0, 2.5, 3.0, 4.0].iter().map(|&x| (x, 1.0 / x)).collect();
    let fit = |l: Lift, n: usize| {
        let lifted: Vec<LiftedPoint> = pts.iter().map(|&(x, y)| lift(l, x, y).unwrap()).collect();
        let h = hyperplane_from_tuple(&lifted[..n]).unwrap().plane().ok_or("degenerate tuple")?;
        Ok::<f64, String>(lifted[n..].iter().map(|p| h.eval(p.coords()).abs()).fold(0.0, f64::max))
    };
    let l5 = fit(Lift::L5, 5)?;
    let l4 = fit(Lift::L4, 4)?;
    if l5 >= 1e-9 {
        return Err(format!("L5 residual {l5}"));
    }
    if l4 <= 1e-3 {
        return Err(format!("L4 residual {l4} should be bounded away from 0"));
    }
    Ok(())
}

pub fn sweep_winner_separable(cases: u32) -> Result<(), String> {
    let strat = (8usize..15).prop_flat_map(|n| (points(n..n + 1, 0.0, 1.0), 3..n));
    run(cases, strat, |(pts, k)| {
        let data = Dataset::from_points(&pts).unwrap();
        let best = naive_quadratic_sweep(&data, k, Objective::R2).unwrap();
        let rep = check_partition(&data, &best.indices, Lift::L5, &HullConfig::default()).unwrap();
        prop_assert!(rep.separable, "distance_sq {}", rep.distance_sq);
        Ok(())
    })
}

pub fn parallel_deterministic(cases: u32) -> Result<(), String> {
    let objective = prop_oneof![Just(Objective::R2), Just(Objective::R), Just(Objective::Cov), Just(Objective::Var)];
    let strat = (8usize..14).prop_flat_map(move |n| (points(n..n + 1, 0.0, 1.0), 3..=n, objective.clone()));
    run(cases, strat, |(pts, k, o)| {
        let data = Dataset::from_points(&pts).unwrap();
        let a = parallel_sweep(&data, k, o).unwrap();
        let b = naive_quadratic_sweep(&data, k, o).unwrap();
        prop_assert_eq!(a, b);
        Ok(())
    })
}

pub fn theil_sen_equivariance(cases: u32) -> Result<(), String> {
    let scale = prop_oneof![0.1..10.0f64, -10.0..-0.1f64];
    let strat = points(2..30, 0.0, 1.0).prop_flat_map(move |pts| {
        let perm = Just((0..pts.len()).collect::<Vec<_>>()).prop_shuffle();
        (Just(pts), perm, scale.clone(), -5.0..5.0f64, scale.clone(), -5.0..5.0f64)
    });
    run(cases, strat, |(pts, perm, a, b, c, e)| {
        let data = Dataset::from_points(&pts).unwrap();
        let (m, i) = theil_sen(&data).unwrap();
        let shuffled = Dataset::from_points(&perm.iter().map(|&p| pts[p]).collect::<Vec<_>>()).unwrap();
        let (m2, i2) = theil_sen(&shuffled).unwrap();
        prop_assert!(m == m2 && i == i2, "reorder changed ({m}, {i}) to ({m2}, {i2})");
        // x → a·x + b, y → c·y + e maps y = m·x + i to slope c·m/a
        let mapped = data.affine(a, b, c, e).unwrap();
        let (m3, i3) = theil_sen(&mapped).unwrap();
        let (em, ei) = (c * m / a, c * i + e - c * m * b / a);
        let tol = |v: f64| 1e-9 * v.abs().max(1.0);
        prop_assert!((m3 - em).abs() <= tol(em), "slope {m3} vs {em}");
        prop_assert!((i3 - ei).abs() <= tol(ei), "intercept {i3} vs {ei}");
        Ok(())
    })
}
