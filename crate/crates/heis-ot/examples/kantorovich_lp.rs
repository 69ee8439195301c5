//! Exact discrete Kantorovich transport: optimal plan, dual certificate,
//! zero duality gap, and cyclical monotonicity of the support.
//!
//! ```bash
//! cargo run --example kantorovich_lp
//! ```

use heis_ot::boxes::BoundingBox;
use heis_ot::diagnostics::check_cyclical_monotonicity;
use heis_ot::heis::cc_distance;
use heis_ot::measures::SampledMeasure;
use heis_ot::solvers::solve_kantorovich;

fn main() {
    let left = SampledMeasure::uniform_box(BoundingBox::cube(1, -1.0, 0.0));
    let right = SampledMeasure::uniform_box(BoundingBox::cube(1, 0.0, 1.0));
    let mu = left.empirical(30, 7).unwrap();
    let nu = right.empirical(25, 8).unwrap();

    let sol = solve_kantorovich(&mu, &nu, cc_distance).unwrap();
    println!("W_1(mu, nu) = {:.9}", sol.value);
    println!(
        "plan entries: {} (basic bound {})",
        sol.plan.entries().len(),
        mu.len() + nu.len() - 1
    );
    println!("duality gap: {:.3e}", sol.value - sol.dual.value(&mu, &nu));

    // Dual feasibility: psi(x) + psi^c(y) <= d(x, y) everywhere.
    let mut worst = f64::NEG_INFINITY;
    for (i, x) in mu.atoms().iter().enumerate() {
        for (j, y) in nu.atoms().iter().enumerate() {
            worst = worst.max(sol.dual.psi[i] + sol.dual.psi_c[j] - cc_distance(x, y));
        }
    }
    println!("worst dual slack violation: {worst:.3e}");

    let report = check_cyclical_monotonicity(&sol.plan, cc_distance, 3, 2_000, 99);
    println!(
        "cyclical monotonicity: {} cycles sampled, {} violations",
        report.trials, report.violations
    );

    // The potential is 1-Lipschitz for the CC distance.
    let mut lip = 0.0f64;
    for i in 0..mu.len() {
        for k in (i + 1)..mu.len() {
            let d = cc_distance(&mu.atoms()[i], &mu.atoms()[k]);
            lip = lip.max((sol.dual.psi[i] - sol.dual.psi[k]).abs() - d);
        }
    }
    println!("1-Lipschitz excess of psi on atom pairs: {lip:.3e}");
}
