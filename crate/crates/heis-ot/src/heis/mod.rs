//! Heisenberg group arithmetic, minimal curves, the Carnot-Caratheodory
//! distance and its gradients, and Haar ball volumes.

mod ball;
mod geodesic;
mod point;

pub use ball::{ball_volume, haar_unit_ball_volume, VolumeEstimate};
pub use geodesic::{
    cc_distance, cc_norm, eval_curve, exp_geodesic, grad_distance, is_in_omega, log_geodesic,
    minimal_curve, twist_ratio, DistanceGradient, GeodesicParam, MinimalCurve,
};
pub use point::Point;
