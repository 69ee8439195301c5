//! Optimal transport in the Heisenberg group H^n with its
//! Carnot-Caratheodory distance.
//!
//! The crate provides, in dependency order:
//!
//! - [`heis`]: exact group arithmetic, minimal curves, the CC distance and
//!   its horizontal gradient, Monte Carlo ball volumes;
//! - [`measures`]: atomic and sampled probability measures, greedy
//!   quantization nets, density histograms;
//! - [`solvers`]: exact discrete Kantorovich transport (simplex over the
//!   transportation polytope), the lexicographic secondary problem, the
//!   penalized variational approximation with its epsilon-schedule driver,
//!   and displacement interpolation along minimal curves;
//! - [`diagnostics`]: executable checks for the structural properties of
//!   optimal plans (cyclical monotonicity, monotone rays, measure
//!   contraction, interpolant density bounds, transport-set density,
//!   graph dispersion, non-branching).
//!
//! Every check and solver is deterministic under a fixed seed. Start with
//! the `examples/` directory for one runnable program per capability; `hcli`
//! offers the same entry points as a command line.
//!
//! ```
//! use heis_ot::{cc_distance, w1, AtomicMeasure, Point};
//!
//! // Horizontal moves cost their Euclidean length; vertical moves cost
//! // sqrt(pi |t|).
//! let o = Point::origin(1);
//! assert!((cc_distance(&o, &Point::h1(1.0, 0.0, 0.0)) - 1.0).abs() < 1e-12);
//!
//! // W_1 between atomic measures by exact LP.
//! let mu = AtomicMeasure::dirac(o);
//! let nu = AtomicMeasure::uniform_on(vec![
//!     Point::h1(1.0, 0.0, 0.0),
//!     Point::h1(-1.0, 0.0, 0.0),
//! ])?;
//! assert!((w1(&mu, &nu)? - 1.0).abs() < 1e-9);
//! # Ok::<(), heis_ot::Error>(())
//! ```

pub mod boxes;
pub mod diagnostics;
pub mod error;
pub mod heis;
pub mod io;
pub mod measures;
mod roots;
pub mod solvers;
pub mod tol;

pub use boxes::BoundingBox;
pub use error::{Error, Result};
pub use heis::{
    cc_distance, eval_curve, exp_geodesic, grad_distance, haar_unit_ball_volume, is_in_omega,
    log_geodesic, minimal_curve, GeodesicParam, MinimalCurve, Point,
};
pub use measures::{AtomicMeasure, Histogram, QuantizationMap, SampledMeasure};
pub use solvers::{
    solve_kantorovich, solve_secondary, w1, CepsConfig, DualPotential, TransportPlan,
};
