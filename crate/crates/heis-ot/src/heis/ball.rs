//! Monte Carlo estimation of CC-ball volumes.
//!
//! Haar measure is Lebesgue measure on R^{2n+1} and scales as
//! `L(B(x, r)) = c_n r^{2n+2}`; the constant `c_n = L(B(0, 1))` has no
//! closed form used here, so it is estimated by rejection sampling and only
//! its scaling law is ever asserted.
//!
//! The sampling box exploits the curve description: a point `[zeta, t]` of
//! `B(0, r)` has `|zeta| <= r` (the horizontal projection of a curve is no
//! longer than the curve) and `|t| = 2 |chi|^2 (phi - sin phi)/phi^2 <=
//! 2 r^2 / pi` (the ratio peaks at `phi = pi`). Componentwise that gives
//! `|xi_j|, |eta_j| <= r` and `|t| <= 2 r^2/pi`.

use super::geodesic::cc_norm;
use super::point::Point;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;
use std::f64::consts::PI;
use std::sync::Mutex;

/// A Monte Carlo volume estimate with its standard error.
#[derive(Clone, Copy, Debug)]
pub struct VolumeEstimate {
    pub value: f64,
    pub std_err: f64,
    pub samples: u64,
}

impl VolumeEstimate {
    /// Standard error of the ratio `self / other` by first-order propagation.
    pub fn ratio_std_err(&self, other: &VolumeEstimate) -> f64 {
        let r = self.value / other.value;
        r * ((self.std_err / self.value).powi(2) + (other.std_err / other.value).powi(2)).sqrt()
    }
}

/// Estimate `L(B(0, r))` in H^n by rejection sampling from the tight
/// bounding box, with `samples` proposals.
pub fn ball_volume(n: usize, radius: f64, samples: u64, seed: u64) -> VolumeEstimate {
    assert!(n >= 1, "group index n must be >= 1");
    assert!(radius > 0.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let t_bound = 2.0 * radius * radius / PI;
    let box_volume = (2.0 * radius).powi(2 * n as i32) * 2.0 * t_bound;

    let mut hits: u64 = 0;
    let mut zeta = vec![Complex64::new(0.0, 0.0); n];
    for _ in 0..samples {
        for z in zeta.iter_mut() {
            *z = Complex64::new(
                rng.gen_range(-radius..=radius),
                rng.gen_range(-radius..=radius),
            );
        }
        let t = rng.gen_range(-t_bound..=t_bound);
        let p = Point::new(zeta.clone(), t);
        if cc_norm(&p) <= radius {
            hits += 1;
        }
    }
    let p_hat = hits as f64 / samples as f64;
    VolumeEstimate {
        value: p_hat * box_volume,
        std_err: box_volume * (p_hat * (1.0 - p_hat) / samples as f64).sqrt(),
        samples,
    }
}

static UNIT_BALL_CACHE: Mutex<Option<HashMap<usize, VolumeEstimate>>> = Mutex::new(None);

const UNIT_BALL_SAMPLES: u64 = 1_000_000;
const UNIT_BALL_SEED: u64 = 0x48_45_49_53; // arbitrary fixed seed

/// `c_n = L(B(0,1))`, estimated once per group index and cached.
pub fn haar_unit_ball_volume(n: usize) -> VolumeEstimate {
    let mut guard = UNIT_BALL_CACHE.lock().expect("ball volume cache poisoned");
    let cache = guard.get_or_insert_with(HashMap::new);
    *cache
        .entry(n)
        .or_insert_with(|| ball_volume(n, 1.0, UNIT_BALL_SAMPLES, UNIT_BALL_SEED))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn estimate_is_positive_and_cached() {
        let a = haar_unit_ball_volume(1);
        let b = haar_unit_ball_volume(1);
        assert!(a.value > 0.0);
        assert_eq!(a.value, b.value);
        assert!(a.std_err > 0.0 && a.std_err < a.value);
    }

    #[test]
    fn scaling_law_ratio() {
        // vol(B(0,2)) / vol(B(0,1)) = 2^{2n+2} within 3 combined standard errors.
        let v1 = ball_volume(1, 1.0, 200_000, 11);
        let v2 = ball_volume(1, 2.0, 200_000, 12);
        let ratio = v2.value / v1.value;
        let se = v2.ratio_std_err(&v1);
        assert!((ratio - 16.0).abs() < 3.0 * se, "ratio {ratio} +- {se}");
    }

    #[test]
    fn scaling_law_holds_in_rank_two() {
        // H^2: homogeneous dimension 2n+2 = 6.
        let v1 = ball_volume(2, 1.0, 200_000, 5);
        let v2 = ball_volume(2, 2.0, 200_000, 6);
        let ratio = v2.value / v1.value;
        let se = v2.ratio_std_err(&v1);
        assert!((ratio - 64.0).abs() < 3.0 * se, "ratio {ratio} +- {se}");
    }

    #[test]
    fn wide_box_oracle_agrees() {
        // Same estimate from a deliberately loose box |t| <= 4 (the tight
        // bound is 2/pi): both must agree within combined error bars.
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        let samples = 400_000u64;
        let box_volume = 2.0f64 * 2.0 * 8.0;
        let mut hits = 0u64;
        for _ in 0..samples {
            let p = Point::h1(
                rng.gen_range(-1.0..=1.0),
                rng.gen_range(-1.0..=1.0),
                rng.gen_range(-4.0..=4.0),
            );
            if cc_norm(&p) <= 1.0 {
                hits += 1;
            }
        }
        let p_hat = hits as f64 / samples as f64;
        let loose = VolumeEstimate {
            value: p_hat * box_volume,
            std_err: box_volume * (p_hat * (1.0 - p_hat) / samples as f64).sqrt(),
            samples,
        };
        let tight = ball_volume(1, 1.0, 400_000, 22);
        let gap = (loose.value - tight.value).abs();
        let se = (loose.std_err.powi(2) + tight.std_err.powi(2)).sqrt();
        assert!(
            gap < 3.0 * se,
            "estimators disagree: {} vs {}",
            loose.value,
            tight.value
        );
    }
}
