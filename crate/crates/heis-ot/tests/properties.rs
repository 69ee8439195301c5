//! Property-based invariants for the group, the distance, quantization,
//! histograms and interpolation.

use heis_ot::boxes::BoundingBox;
use heis_ot::heis::{
    cc_distance, eval_curve, exp_geodesic, is_in_omega, log_geodesic, GeodesicParam, Point,
};
use heis_ot::measures::{histogram_density, quantize, AtomicMeasure};
use heis_ot::solvers::{interpolate, solve_kantorovich};
use num_complex::Complex64;
use proptest::prelude::*;
use std::f64::consts::PI;

fn coord() -> impl Strategy<Value = f64> {
    -3.0..3.0f64
}

fn point() -> impl Strategy<Value = Point> {
    (coord(), coord(), coord()).prop_map(|(a, b, c)| Point::h1(a, b, c))
}

proptest! {
    #[test]
    fn group_is_associative_with_identity_and_inverse(x in point(), y in point(), z in point()) {
        let left = x.mul(&y).mul(&z);
        let right = x.mul(&y.mul(&z));
        prop_assert!(left.coord_gap(&right) < 1e-12);
        prop_assert!(x.mul(&Point::origin(1)).coord_gap(&x) == 0.0);
        let e = x.mul(&x.inv());
        prop_assert!(e.coord_gap(&Point::origin(1)) < 1e-12);
        prop_assert!(x.inv().inv().coord_gap(&x) == 0.0);
    }

    #[test]
    fn dilations_are_group_homomorphisms(x in point(), y in point(), r in 0.1..3.0f64) {
        let a = x.mul(&y).dilate(r);
        let b = x.dilate(r).mul(&y.dilate(r));
        prop_assert!(a.coord_gap(&b) < 1e-10);
    }

    #[test]
    fn distance_is_a_left_invariant_metric(g in point(), x in point(), y in point(), z in point()) {
        let d = cc_distance(&x, &y);
        prop_assert!(d >= 0.0);
        prop_assert!((cc_distance(&y, &x) - d).abs() < 1e-10);
        prop_assert!((cc_distance(&g.mul(&x), &g.mul(&y)) - d).abs() < 1e-9);
        prop_assert!(cc_distance(&x, &z) <= d + cc_distance(&y, &z) + 1e-9);
    }

    #[test]
    fn distance_scales_under_dilation(x in point(), y in point(), r in 0.1..3.0f64) {
        let d = cc_distance(&x, &y);
        prop_assert!((cc_distance(&x.dilate(r), &y.dilate(r)) - r * d).abs() < 1e-9 * (1.0 + r));
    }

    #[test]
    fn geodesic_round_trip(re in -2.0..2.0f64, im in -2.0..2.0f64, phi in -6.27..6.27f64) {
        prop_assume!((re * re + im * im).sqrt() > 1e-3);
        let p = GeodesicParam::new(vec![Complex64::new(re, im)], phi);
        let q = log_geodesic(&exp_geodesic(&p, 1.0)).unwrap();
        prop_assert!((q.phi() - phi).abs() < 1e-9);
        prop_assert!((q.chi()[0] - p.chi()[0]).norm() < 1e-9);
    }

    #[test]
    fn curve_speed_is_constant(x in point(), y in point(), s in 0.0..1.0f64, ds in 0.0..1.0f64) {
        prop_assume!(is_in_omega(&x, &y));
        let sp = (s + ds * (1.0 - s)).min(1.0);
        let d = cc_distance(&x, &y);
        let a = eval_curve(&x, &y, s).unwrap();
        let b = eval_curve(&x, &y, sp).unwrap();
        prop_assert!((cc_distance(&a, &b) - (sp - s) * d).abs() < 1e-6);
    }

    #[test]
    fn quantization_net_is_separated_and_covering(
        pts in prop::collection::vec(point(), 1..40),
        m in 1u32..6,
    ) {
        let q = quantize(&pts, m).unwrap();
        let r = q.scale();
        for i in 0..q.card() {
            for j in (i + 1)..q.card() {
                prop_assert!(cc_distance(&q.net()[i], &q.net()[j]) >= r);
            }
        }
        for p in &pts {
            let idx = q.assign(p).unwrap();
            prop_assert!(cc_distance(&q.net()[idx], p) < r);
        }
    }

    #[test]
    fn histogram_conserves_mass(
        pts in prop::collection::vec((0.0..1.0f64, 0.0..1.0f64, 0.0..1.0f64), 1..60),
        h in 0.1..0.6f64,
    ) {
        let atoms: Vec<Point> = pts.iter().map(|(a, b, c)| Point::h1(*a, *b, *c)).collect();
        let mu = AtomicMeasure::uniform_on(atoms).unwrap();
        let hist = histogram_density(&mu, &BoundingBox::cube(1, 0.0, 1.0), h).unwrap();
        prop_assert!((hist.total_mass() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn interpolation_conserves_mass_and_hits_marginals(
        src in prop::collection::vec((coord(), coord(), coord()), 2..6),
        dst in prop::collection::vec((coord(), coord(), coord()), 2..6),
        t in 0.0..1.0f64,
    ) {
        let mu = AtomicMeasure::uniform_on(
            src.iter().map(|(a, b, c)| Point::h1(*a, *b, *c)).collect(),
        ).unwrap();
        let nu = AtomicMeasure::uniform_on(
            dst.iter().map(|(a, b, c)| Point::h1(*a, *b, *c)).collect(),
        ).unwrap();
        let sol = solve_kantorovich(&mu, &nu, cc_distance).unwrap();
        let mid = interpolate(&sol.plan, t).unwrap();
        prop_assert!((mid.weights().iter().sum::<f64>() - 1.0).abs() < 1e-12);
        let start = interpolate(&sol.plan, 0.0).unwrap();
        prop_assert_eq!(start.len(), mu.len());
        let end = interpolate(&sol.plan, 1.0).unwrap();
        prop_assert_eq!(end.len(), sol.plan.second_marginal().len());
    }
}

#[test]
fn vertical_distance_formula_on_center_line() {
    // sqrt(pi |t|) along the center, at machine precision.
    for t in [0.25, 1.0, 4.0, 9.0] {
        let d = cc_distance(&Point::origin(1), &Point::h1(0.0, 0.0, t));
        assert!((d - (PI * t).sqrt()).abs() < 1e-12);
    }
}
