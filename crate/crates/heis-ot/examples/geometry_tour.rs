//! Tour of the Heisenberg group's exact geometry: the group law, dilations,
//! closed-form distances, geodesic parameters, and distance gradients.
//!
//! ```bash
//! cargo run --example geometry_tour
//! ```

use heis_ot::heis::{
    cc_distance, exp_geodesic, grad_distance, is_in_omega, log_geodesic, GeodesicParam, Point,
};
use num_complex::Complex64;
use std::f64::consts::PI;

fn main() {
    // Group law: [zeta, t] . [zeta', t'] twists the vertical coordinate.
    let a = Point::h1(1.0, 0.0, 0.0);
    let b = Point::h1(0.0, 1.0, 0.0);
    println!("a . b      = {:?}", a.mul(&b).coords());
    println!("b . a      = {:?}", b.mul(&a).coords());
    println!("a . a^-1   = {:?}", a.mul(&a.inv()).coords());
    println!("delta_2(a) = {:?}\n", a.dilate(2.0).coords());

    // Closed-form distances: horizontal lines and the center line.
    let origin = Point::origin(1);
    println!(
        "d(0, [e1, 0])   = {:.12}  (= |zeta|)",
        cc_distance(&origin, &a)
    );
    let vertical = Point::h1(0.0, 0.0, 4.0);
    println!(
        "d(0, [0, 4])    = {:.12}  (= sqrt(pi |t|) = {:.12})",
        cc_distance(&origin, &vertical),
        (4.0 * PI).sqrt()
    );

    // Geodesic parameters (chi, phi): length |chi|, twist phi.
    let z = Point::h1(0.8, -0.3, 0.9);
    let p = log_geodesic(&z).unwrap();
    println!(
        "\nlog({:?}): |chi| = {:.6}, phi = {:.6}",
        z.coords(),
        p.length(),
        p.phi()
    );
    let back = exp_geodesic(&p, 1.0);
    println!("exp back round trip gap: {:.2e}", back.coord_gap(&z));

    // A full 2pi twist lands on the center line at height |chi|^2 / pi.
    let full_twist = GeodesicParam::new(vec![Complex64::new(1.0, 0.0)], 2.0 * PI);
    println!(
        "sigma_(e1, 2pi)(1) = {:?} (t = 1/pi)",
        exp_geodesic(&full_twist, 1.0).coords()
    );

    // The distance to a fixed point is smooth off the center line, with a
    // unit horizontal gradient (eikonal property).
    let x = Point::h1(0.5, 0.4, -0.2);
    let y = Point::h1(-0.3, 0.1, 0.3);
    assert!(is_in_omega(&y, &x));
    let g = grad_distance(&x, &y).unwrap();
    let norm: f64 = g
        .horizontal
        .iter()
        .map(|c| c.norm_sqr())
        .sum::<f64>()
        .sqrt();
    println!(
        "\n|grad_H d_y(x)| = {norm:.12} (eikonal), d/dt d_y(x) = {:.6}",
        g.vertical
    );
}
