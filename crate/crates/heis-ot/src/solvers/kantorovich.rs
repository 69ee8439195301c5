//! Exact Kantorovich transport between atomic measures, and the
//! lexicographic secondary problem.
//!
//! The secondary solve runs in two stages. Stage one minimizes `int d`.
//! By complementary slackness, the set of stage-one optimal plans is exactly
//! the face of the coupling polytope supported on cells where the optimal
//! duals are tight, so stage two minimizes `int d^2` over that face: a second
//! transportation solve with forbidden (off-face) cells, warm-started from
//! the stage-one basis.

use super::plan::{DualPotential, PlanEntry, TransportPlan};
use super::simplex::{solve_transportation, FORBIDDEN};
use crate::error::{Error, Result};
use crate::heis::{cc_distance, Point};
use crate::measures::AtomicMeasure;
use crate::tol::{LEX_STAGE_TOL, MASS_EPS};

/// An optimal plan with its dual certificate and optimal value.
#[derive(Clone, Debug)]
pub struct KantorovichSolution {
    pub plan: TransportPlan,
    pub dual: DualPotential,
    pub value: f64,
}

/// Solve `min int c dgamma` over couplings of `mu` and `nu` exactly.
/// The returned plan is basic (acyclic support, at most `m + k - 1` entries)
/// and the dual is feasible with zero duality gap.
pub fn solve_kantorovich<F: Fn(&Point, &Point) -> f64>(
    mu: &AtomicMeasure,
    nu: &AtomicMeasure,
    cost: F,
) -> Result<KantorovichSolution> {
    let cost_matrix = build_cost_matrix(mu, nu, cost)?;
    let sol = solve_transportation(&cost_matrix, mu.weights(), nu.weights(), None)?;
    let entries = basis_entries(&sol.basis, &sol.flow);
    let plan = TransportPlan::new(mu.clone(), nu.clone(), entries)?;
    Ok(KantorovichSolution {
        plan,
        dual: DualPotential {
            psi: sol.u,
            psi_c: sol.v,
        },
        value: sol.objective,
    })
}

/// 1-Wasserstein distance `W_1(mu, nu)` for the CC metric.
pub fn w1(mu: &AtomicMeasure, nu: &AtomicMeasure) -> Result<f64> {
    Ok(solve_kantorovich(mu, nu, cc_distance)?.value)
}

/// Lexicographic solve: among plans minimizing `int d`, return one
/// minimizing `int d^2`.
pub fn solve_secondary(mu: &AtomicMeasure, nu: &AtomicMeasure) -> Result<TransportPlan> {
    let k = nu.len();
    let d_matrix = build_cost_matrix(mu, nu, cc_distance)?;
    let stage1 = solve_transportation(&d_matrix, mu.weights(), nu.weights(), None)?;

    // Off-face cells (reduced cost > slack) are forbidden in stage two.
    let stage2_cost: Vec<f64> = d_matrix
        .iter()
        .enumerate()
        .map(|(idx, d)| {
            let (i, j) = (idx / k, idx % k);
            if d - stage1.u[i] - stage1.v[j] <= LEX_STAGE_TOL {
                d * d
            } else {
                FORBIDDEN
            }
        })
        .collect();

    let stage2 = solve_transportation(
        &stage2_cost,
        mu.weights(),
        nu.weights(),
        Some((stage1.basis, stage1.flow)),
    )?;
    for (&(i, j), f) in stage2.basis.iter().zip(&stage2.flow) {
        if stage2_cost[i * k + j] >= FORBIDDEN && *f > 1e-9 {
            return Err(Error::SolverStall(format!(
                "stage-two solution left the optimal face at cell ({i}, {j})"
            )));
        }
    }
    TransportPlan::new(
        mu.clone(),
        nu.clone(),
        basis_entries(&stage2.basis, &stage2.flow),
    )
}

fn build_cost_matrix<F: Fn(&Point, &Point) -> f64>(
    mu: &AtomicMeasure,
    nu: &AtomicMeasure,
    cost: F,
) -> Result<Vec<f64>> {
    let k = nu.len();
    let mut out = vec![0.0; mu.len() * k];
    for (i, x) in mu.atoms().iter().enumerate() {
        for (j, y) in nu.atoms().iter().enumerate() {
            let c = cost(x, y);
            if !c.is_finite() {
                return Err(Error::NonFiniteCost { i, j });
            }
            out[i * k + j] = c;
        }
    }
    Ok(out)
}

fn basis_entries(basis: &[(usize, usize)], flow: &[f64]) -> Vec<PlanEntry> {
    basis
        .iter()
        .zip(flow)
        .filter(|(_, f)| **f > MASS_EPS)
        .map(|(&(i, j), &mass)| PlanEntry { i, j, mass })
        .collect()
}
