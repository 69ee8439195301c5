//! Exact discrete transport solvers and the variational approximation.

mod interpolate;
mod kantorovich;
mod plan;
mod simplex;
mod varapprox;

pub use interpolate::{interpolate, transport_map_extract, MapExtraction, SplitAtom, SplitReport};
pub use kantorovich::{solve_kantorovich, solve_secondary, w1, KantorovichSolution};
pub use plan::{DualPotential, PlanEntry, TransportPlan};
pub use varapprox::{
    c_eps_cost, default_k_box, evaluate_c_eps, run_approximation_sequence, solve_p_eps, ApproxStep,
    ApproximationRun, CepsBreakdown, CepsConfig, PepsSolution,
};
