//! Numerical tolerances used across the crate.
//!
//! Every threshold that appears in library code is named here so that test
//! suites and diagnostics quote the same values.

/// Absolute tolerance on the horizontal part of `x^{-1} y` below which a
/// pair is routed to the center-line branch. Distances stay continuous to
/// about 1e-8 across this switch.
pub const OMEGA_TOL: f64 = 1e-10;

/// Switch to Taylor expansions of the geodesic coefficients for `|phi|`
/// below this value; avoids catastrophic cancellation in
/// `(e^{-i phi s} - 1)/phi` and `(phi s - sin(phi s))/phi^2`.
pub const PHI_TAYLOR_SWITCH: f64 = 1e-4;

/// Switch to the series form of the twist-ratio function
/// `(phi - sin phi)/(1 - cos phi)`; the direct form loses ~6 digits at
/// `phi = 1e-4` while the series is accurate to machine precision below 1e-2.
pub const RATIO_SERIES_SWITCH: f64 = 1e-2;

/// Bracket width at which the geodesic-inversion root find stops.
pub const ROOT_BRACKET_TOL: f64 = 1e-13;

/// Probability weights must sum to one within this.
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

/// Row/column sums of a transport plan must match the marginals within this.
pub const MARGINAL_TOL: f64 = 1e-10;

/// Dual feasibility and complementary slackness slack on returned plans.
pub const DUAL_FEAS_TOL: f64 = 1e-9;

/// Slack on the stage-one cost constraint in the lexicographic solve.
pub const LEX_STAGE_TOL: f64 = 1e-9;

/// Plan entries below this mass are treated as numerically zero.
pub const MASS_EPS: f64 = 1e-15;
