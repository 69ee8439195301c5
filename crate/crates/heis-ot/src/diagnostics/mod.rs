//! Executable checks for the structural properties of minimal curves,
//! optimal plans, interpolants and transport sets.
//!
//! Every check is a pure function of its inputs and a seed, returns a
//! [`CheckReport`], and records the tolerances it used. Statistical checks
//! use 3-standard-error bands; negative controls (deliberately broken plans)
//! are first-class outputs that demonstrate the checks have teeth.

mod checks;
mod suites;

pub use checks::{
    check_cyclical_monotonicity, check_interpolant_density, check_mcp_contraction,
    check_monotone_rays, check_nonbranching, check_potential_lipschitz_and_gradient,
    check_transport_lower_density, graph_dispersion, shuffled_control_plan, GradientAlignment,
    PotentialCheck,
};
pub use suites::{
    check_ball_scaling, density_pipeline_instance, density_pipeline_run, verify_density,
    verify_geometry, verify_transport, DensitySuiteConfig, Suite,
};

use serde::{Deserialize, Serialize};

/// Outcome of one diagnostic: `pass` holds exactly when no violation
/// exceeded the stated tolerance.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub trials: usize,
    pub violations: usize,
    pub worst_violation: f64,
    pub tolerance: f64,
    pub pass: bool,
    /// Free-form measurements: observed floors, incidence counts, slacks.
    pub notes: Vec<String>,
}

impl CheckReport {
    pub(crate) fn new(name: impl Into<String>, tolerance: f64) -> Self {
        CheckReport {
            name: name.into(),
            trials: 0,
            violations: 0,
            worst_violation: 0.0,
            tolerance,
            pass: true,
            notes: Vec::new(),
        }
    }

    /// Record one trial with the given violation magnitude (anything above
    /// zero counts against the check).
    pub(crate) fn record(&mut self, excess: f64) {
        self.trials += 1;
        if excess > 0.0 {
            self.violations += 1;
            self.worst_violation = self.worst_violation.max(excess);
        }
    }

    pub(crate) fn note(&mut self, s: impl Into<String>) {
        self.notes.push(s.into());
    }

    pub(crate) fn finish(mut self) -> Self {
        self.pass = self.violations == 0;
        self
    }
}
