//! The geodesic direction of plan entries against the local gradient of the
//! Kantorovich potential: `chi = -d(x, y) grad_H u(x)` along transport rays.

use heis_ot::boxes::BoundingBox;
use heis_ot::diagnostics::check_potential_lipschitz_and_gradient;
use heis_ot::heis::cc_distance;
use heis_ot::measures::{AtomicMeasure, SampledMeasure};
use heis_ot::solvers::solve_kantorovich;
use heis_ot::Point;

#[test]
fn chi_aligns_with_minus_gradient_on_a_line_like_instance() {
    // A dense sample in a thin slab transported along the xi-axis: the
    // potential decreases along the transport direction, so the local
    // finite-difference gradient of psi should anti-align with chi.
    let slab = BoundingBox::new(vec![0.0, -0.05, -0.05], vec![1.0, 0.05, 0.05]);
    let mu = SampledMeasure::uniform_box(slab)
        .empirical(1000, 77)
        .unwrap();
    let nu = AtomicMeasure::uniform_on(vec![Point::h1(2.5, 0.0, 0.0), Point::h1(3.5, 0.0, 0.0)])
        .unwrap();
    let sol = solve_kantorovich(&mu, &nu, cc_distance).unwrap();
    let check = check_potential_lipschitz_and_gradient(&sol.dual, &sol.plan, 9);

    assert!(check.lipschitz.pass, "{:?}", check.lipschitz);
    assert!(check.support_equality.pass, "{:?}", check.support_equality);
    assert!(
        check.alignment.checked > 500,
        "stencil should cover most entries, got {}",
        check.alignment.checked
    );
    assert!(
        check.alignment.aligned_fraction() >= 0.9,
        "aligned fraction {:.3} (median cosine {:.3}, stencil radius {:.3})",
        check.alignment.aligned_fraction(),
        check.alignment.median_cosine,
        check.alignment.stencil_radius
    );
}
