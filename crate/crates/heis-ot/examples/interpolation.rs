//! Displacement interpolation: push plan mass along minimal curves and watch
//! the density bound `||rho_t|| <= (1-t)^{-(2n+3)} ||rho||` in action, then
//! extract the transport map when the plan is one.
//!
//! ```bash
//! cargo run --example interpolation
//! ```

use heis_ot::boxes::BoundingBox;
use heis_ot::measures::{histogram_density, AtomicMeasure, SampledMeasure};
use heis_ot::solvers::{
    c_eps_cost, interpolate, solve_kantorovich, transport_map_extract, MapExtraction,
};
use heis_ot::Point;

fn main() {
    let mu = SampledMeasure::uniform_box(BoundingBox::cube(1, 0.0, 1.0));
    let emp = mu.empirical(2000, 5).unwrap();
    let nu = AtomicMeasure::uniform_on(vec![
        Point::h1(0.35, 0.35, 0.30),
        Point::h1(0.65, 0.45, 0.55),
        Point::h1(0.50, 0.65, 0.75),
    ])
    .unwrap();

    // An eps-penalized optimal plan from the sampled source to three atoms.
    let eps = 0.1;
    let sol = solve_kantorovich(&emp, &nu, |x, y| c_eps_cost(eps, x, y)).unwrap();

    // The interpolant contracts toward the atoms; its histogram max density
    // stays below (1-t)^{-5} times the source bound (rho = 1 here), up to
    // the binomial sampling slack at this grid resolution.
    println!("t      atoms   max cell density   threshold = (1-t)^-5 (1+slack)   holds");
    for t in [0.0, 0.25, 0.5, 0.75] {
        let rho_t = interpolate(&sol.plan, t).unwrap();
        let bbox = BoundingBox::hull(rho_t.atoms()).inflate(1e-9);
        let hist = histogram_density(&rho_t, &bbox, 0.2).unwrap();
        let report =
            heis_ot::diagnostics::check_interpolant_density(&sol.plan, 1.0, t, 0.2).unwrap();
        println!(
            "{t:<6} {:<7} {:<18.4} {:<32.4} {}",
            rho_t.len(),
            hist.max_density(),
            report.tolerance,
            report.pass
        );
    }

    // t = 1 reproduces the target atoms exactly.
    let end = interpolate(&sol.plan, 1.0).unwrap();
    println!(
        "\nt = 1 recovers the target: {} atoms, mass {:.12}",
        end.len(),
        end.weights().iter().sum::<f64>()
    );

    match transport_map_extract(&sol.plan, 1e-9) {
        MapExtraction::Map(map) => {
            println!(
                "the plan is induced by a transport map ({} assignments)",
                map.len()
            );
        }
        MapExtraction::Split(report) => {
            println!(
                "{} source atoms split their mass (split fraction {:.2e}); the finitely \
                 atomic target forces a few LP splits at finite N",
                report.splits.len(),
                report.split_mass
            );
        }
    }
}
