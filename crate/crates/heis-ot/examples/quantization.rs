//! Greedy metric nets: separation, covering radius, cardinality growth like
//! `m^{2n+2}`, and the Wasserstein quantization bound `W_1(nu, nu_m) <= 1/m`.
//!
//! ```bash
//! cargo run --example quantization
//! ```

use heis_ot::boxes::BoundingBox;
use heis_ot::heis::cc_distance;
use heis_ot::measures::{pushforward_quantize, quantize, SampledMeasure};
use heis_ot::solvers::w1;

fn main() {
    let cloud = SampledMeasure::uniform_box(BoundingBox::cube(1, -0.5, 0.5));
    let nu = cloud.empirical(400, 42).unwrap();

    println!("m    card   card/m^4   covering    min separation   W1(nu, nu_m)   1/m");
    for m in [1u32, 2, 4, 8] {
        let q = quantize(nu.atoms(), m).unwrap();
        let covering = nu
            .atoms()
            .iter()
            .map(|a| cc_distance(&q.net()[q.assign(a).unwrap()], a))
            .fold(0.0f64, f64::max);
        let mut separation = f64::INFINITY;
        for i in 0..q.card() {
            for j in (i + 1)..q.card() {
                separation = separation.min(cc_distance(&q.net()[i], &q.net()[j]));
            }
        }
        let nu_m = pushforward_quantize(&nu, &q).unwrap();
        let dist = w1(&nu, &nu_m).unwrap();
        println!(
            "{m:<4} {:<6} {:<10.2} {covering:<11.4} {:<16.4} {dist:<14.4} {:.4}",
            q.card(),
            q.card() as f64 / (m as f64).powi(4),
            if separation.is_finite() {
                separation
            } else {
                f64::NAN
            },
            q.scale()
        );
    }
    println!("\nnet points are >= 1/m apart, every atom is within 1/m of its net point,");
    println!("and the pushforward moves at most 1/m of Wasserstein mass.");
}
