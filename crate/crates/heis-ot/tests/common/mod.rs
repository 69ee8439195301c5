//! Shared test oracles, independent of the solver implementations.
//!
//! The lexicographic oracle enumerates extreme points of the coupling
//! polytope directly: permutation matrices for uniform equal-size marginals
//! (Birkhoff), spanning-tree basic solutions for general small instances.
//! Both stages of the lexicographic problem attain their optima at such
//! extreme points, so scanning them yields exact reference values.

use heis_ot::heis::{cc_distance, Point};
use heis_ot::measures::AtomicMeasure;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rand_point(rng: &mut ChaCha8Rng, scale: f64) -> Point {
    Point::h1(
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
        rng.gen_range(-scale..scale),
    )
}

pub fn rand_measure(rng: &mut ChaCha8Rng, k: usize, uniform: bool, scale: f64) -> AtomicMeasure {
    let atoms: Vec<Point> = (0..k).map(|_| rand_point(rng, scale)).collect();
    if uniform {
        AtomicMeasure::uniform_on(atoms).unwrap()
    } else {
        let mut w: Vec<f64> = (0..k).map(|_| rng.gen_range(0.1..1.0)).collect();
        let s: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= s);
        AtomicMeasure::new(atoms, w).unwrap()
    }
}

/// `(min int d, min int d^2 among d-optimal)` over all permutation couplings
/// of two uniform k-atom measures.
pub fn lexicographic_by_permutations(mu: &AtomicMeasure, nu: &AtomicMeasure) -> (f64, f64) {
    let k = mu.len();
    assert_eq!(k, nu.len());
    let d: Vec<Vec<f64>> = mu
        .atoms()
        .iter()
        .map(|x| nu.atoms().iter().map(|y| cc_distance(x, y)).collect())
        .collect();
    let w = 1.0 / k as f64;
    let mut best_d = f64::INFINITY;
    let mut best_d2 = f64::INFINITY;
    let mut perm: Vec<usize> = (0..k).collect();
    permute(&mut perm, 0, &mut |p| {
        let cost_d: f64 = p.iter().enumerate().map(|(i, &j)| w * d[i][j]).sum();
        let cost_d2: f64 = p
            .iter()
            .enumerate()
            .map(|(i, &j)| w * d[i][j] * d[i][j])
            .sum();
        if cost_d < best_d - 1e-9 {
            best_d = cost_d;
            best_d2 = cost_d2;
        } else if cost_d <= best_d + 1e-9 {
            best_d = best_d.min(cost_d);
            best_d2 = best_d2.min(cost_d2);
        }
    });
    (best_d, best_d2)
}

fn permute(items: &mut Vec<usize>, k: usize, visit: &mut impl FnMut(&[usize])) {
    if k == items.len() {
        visit(items);
        return;
    }
    for i in k..items.len() {
        items.swap(k, i);
        permute(items, k + 1, visit);
        items.swap(k, i);
    }
}

/// Exhaustive extreme-point scan for general marginals: every spanning-tree
/// cell subset with a nonnegative basic solution is a vertex of the coupling
/// polytope. Returns `(min int d, min int d^2 among d-optimal)`.
pub fn lexicographic_by_bases(mu: &AtomicMeasure, nu: &AtomicMeasure) -> (f64, f64) {
    let m = mu.len();
    let k = nu.len();
    let cells = m * k;
    let basis_size = m + k - 1;
    assert!(
        cells <= 25,
        "basis enumeration is exponential; keep instances at or below 5x5"
    );
    let d: Vec<f64> = mu
        .atoms()
        .iter()
        .flat_map(|x| nu.atoms().iter().map(move |y| cc_distance(x, y)))
        .collect();

    let mut best_d = f64::INFINITY;
    let mut best_d2 = f64::INFINITY;
    let mut subset: Vec<usize> = (0..basis_size).collect();
    loop {
        if let Some(flows) = basic_solution(&subset, m, k, mu.weights(), nu.weights()) {
            let cost_d: f64 = subset.iter().zip(&flows).map(|(&c, f)| f * d[c]).sum();
            let cost_d2: f64 = subset
                .iter()
                .zip(&flows)
                .map(|(&c, f)| f * d[c] * d[c])
                .sum();
            if cost_d < best_d - 1e-9 {
                best_d = cost_d;
                best_d2 = cost_d2;
            } else if cost_d <= best_d + 1e-9 {
                best_d = best_d.min(cost_d);
                best_d2 = best_d2.min(cost_d2);
            }
        }
        // Next lexicographic combination.
        let mut pos = basis_size as isize - 1;
        while pos >= 0 && subset[pos as usize] == pos as usize + cells - basis_size {
            pos -= 1;
        }
        if pos < 0 {
            return (best_d, best_d2);
        }
        let pos = pos as usize;
        subset[pos] += 1;
        for j in (pos + 1)..basis_size {
            subset[j] = subset[j - 1] + 1;
        }
    }
}

/// Solve the tree system for a candidate basis; `None` when the cells do not
/// form a spanning tree or the solution goes negative.
fn basic_solution(
    subset: &[usize],
    m: usize,
    k: usize,
    supply: &[f64],
    demand: &[f64],
) -> Option<Vec<f64>> {
    let nodes = m + k;
    let mut degree = vec![0usize; nodes];
    for &c in subset {
        degree[c / k] += 1;
        degree[m + c % k] += 1;
    }
    if degree.contains(&0) {
        return None; // not spanning
    }
    let mut rem: Vec<f64> = supply.iter().chain(demand.iter()).cloned().collect();
    let mut flows = vec![f64::NAN; subset.len()];
    let mut used = vec![false; subset.len()];
    let mut used_count = 0usize;
    // Leaf elimination; spanning trees resolve completely.
    while used_count < subset.len() {
        let mut progressed = false;
        for (e, &c) in subset.iter().enumerate() {
            if used[e] {
                continue;
            }
            let (i, j) = (c / k, m + c % k);
            let node = if degree[i] == 1 {
                i
            } else if degree[j] == 1 {
                j
            } else {
                continue;
            };
            let other = if node == i { j } else { i };
            let f = rem[node];
            if f < -1e-12 {
                return None;
            }
            flows[e] = f.max(0.0);
            rem[node] = 0.0;
            rem[other] -= flows[e];
            degree[i] -= 1;
            degree[j] -= 1;
            used[e] = true;
            used_count += 1;
            progressed = true;
        }
        if !progressed {
            return None; // a cycle remains: not a tree
        }
    }
    if rem.iter().any(|r| r.abs() > 1e-9) {
        return None;
    }
    Some(flows)
}
