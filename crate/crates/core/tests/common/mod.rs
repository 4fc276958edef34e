#![allow(dead_code)]

use quadsweep_core::rng::seeded;
use quadsweep_core::Dataset;
use rand::Rng;

pub fn uniform(seed: u128, n: usize) -> Dataset {
    let mut rng = seeded(seed);
    let xs = (0..n).map(|_| rng.gen::<f64>()).collect();
    let ys = (0..n).map(|_| rng.gen::<f64>()).collect();
    Dataset::new(xs, ys).unwrap()
}

/// Every k-subset of 0..n, lexicographic, materialized.
pub fn all_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Centered two-pass moments of a subset: (Σdx², Σdy², Σdxdy).
pub fn centered(data: &Dataset, idx: &[usize]) -> (f64, f64, f64) {
    let k = idx.len() as f64;
    let mx = idx.iter().map(|&i| data.xs()[i]).sum::<f64>() / k;
    let my = idx.iter().map(|&i| data.ys()[i]).sum::<f64>() / k;
    let mut sxx = 0.0;
    let mut syy = 0.0;
    let mut sxy = 0.0;
    for &i in idx {
        let dx = data.xs()[i] - mx;
        let dy = data.ys()[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    (sxx, syy, sxy)
}

pub fn rel_close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * a.abs().max(b.abs()).max(1.0)
}
