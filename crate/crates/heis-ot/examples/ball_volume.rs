//! Monte Carlo estimation of CC-ball volumes and the homogeneity law
//! `L(B(0, r)) = c_n r^{2n+2}`.
//!
//! The constant `c_n` has no assumed value anywhere in this crate; only the
//! scaling law is checked.
//!
//! ```bash
//! cargo run --example ball_volume
//! ```

use heis_ot::heis::{ball_volume, haar_unit_ball_volume};

fn main() {
    let c1 = haar_unit_ball_volume(1);
    println!(
        "c_1 = L(B(0,1)) in H^1: {:.6} +- {:.6}  ({} samples)",
        c1.value, c1.std_err, c1.samples
    );

    println!("\nradius   volume estimate      ratio to c_1 r^4");
    for (i, r) in [0.5, 1.0, 2.0, 3.0].iter().enumerate() {
        let v = ball_volume(1, *r, 400_000, 100 + i as u64);
        let predicted = c1.value * r.powi(4);
        println!(
            "{r:<8} {:<12.6} +- {:<9.6} {:.4}",
            v.value,
            v.std_err,
            v.value / predicted
        );
    }

    let v1 = ball_volume(1, 1.0, 1_000_000, 1);
    let v2 = ball_volume(1, 2.0, 1_000_000, 2);
    let ratio = v2.value / v1.value;
    let se = v2.ratio_std_err(&v1);
    println!(
        "\nscaling law: vol(B(0,2))/vol(B(0,1)) = {ratio:.4} +- {se:.4}, expected 2^4 = 16 \
         (deviation {:.2} se)",
        (ratio - 16.0).abs() / se
    );
}
