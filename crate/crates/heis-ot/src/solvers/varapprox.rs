//! The penalized variational approximation and its epsilon-schedule driver.
//!
//! For a fixed first marginal `mu` and a compact box `K`, the functional
//!
//! ```text
//! C_eps(gamma) = (1/eps) W_1((pi_2)_# gamma, nu)
//!              + int d dgamma
//!              + eps int d^2 dgamma
//!              + eps^{6n+8} card(spt (pi_2)_# gamma)
//! ```
//!
//! is minimized over plans with first marginal `mu` and second marginal
//! supported in `K`. The minimizer is searched over the family the
//! convergence argument itself compares against: quantized second marginals
//! `nu_m = (p_m)_# nu` along a geometric schedule of `m`, each solved exactly
//! as a transportation problem for the cost `c_eps = d + eps d^2`, plus a
//! reweighting step that re-optimizes the atom masses on the net support
//! (a transshipment solve that couples the transport cost with the `W_1`
//! penalty), plus `nu` itself.

use super::kantorovich::{solve_kantorovich, w1};
use super::plan::{PlanEntry, TransportPlan};
use super::simplex::{solve_transportation, FORBIDDEN};
use crate::boxes::BoundingBox;
use crate::error::{Error, Result};
use crate::heis::{cc_distance, Point};
use crate::measures::{pushforward_quantize, quantize, AtomicMeasure, SampledMeasure};
use crate::tol::MASS_EPS;

/// Penalized transport cost `c_eps(x, y) = d(x, y) + eps d(x, y)^2`.
pub fn c_eps_cost(epsilon: f64, x: &Point, y: &Point) -> f64 {
    assert!(epsilon > 0.0, "epsilon must be positive");
    let d = cc_distance(x, y);
    d + epsilon * d * d
}

/// Configuration of one `(P_eps)` solve.
#[derive(Clone, Debug)]
pub struct CepsConfig {
    pub epsilon: f64,
    /// Compact set containing both supports and all candidate marginals.
    pub k_box: BoundingBox,
    /// Exponent of the cardinality penalty; `6n + 8` by default. At desk
    /// scale `eps^{6n+8}` underflows quickly, which the term breakdown makes
    /// visible rather than hidden.
    pub cardinality_exponent: f64,
    /// Geometric quantization schedule searched by `solve_p_eps`.
    pub schedule: Vec<u32>,
}

impl CepsConfig {
    pub fn new(epsilon: f64, k_box: BoundingBox, n: usize) -> Self {
        assert!(epsilon > 0.0, "epsilon must be positive");
        CepsConfig {
            epsilon,
            k_box,
            cardinality_exponent: (6 * n + 8) as f64,
            schedule: vec![1, 2, 4, 8, 16, 32, 64],
        }
    }

    pub fn with_schedule(mut self, schedule: Vec<u32>) -> Self {
        self.schedule = schedule;
        self
    }

    pub fn with_cardinality_exponent(mut self, exponent: f64) -> Self {
        self.cardinality_exponent = exponent;
        self
    }
}

/// Value of `C_eps` with each term reported separately.
#[derive(Clone, Copy, Debug)]
pub struct CepsBreakdown {
    /// `W_1((pi_2)_# gamma, nu)`, unweighted.
    pub w1_to_nu: f64,
    /// `int d dgamma`.
    pub d_cost: f64,
    /// `int d^2 dgamma`, unweighted.
    pub d2_cost: f64,
    /// `card(spt (pi_2)_# gamma)`.
    pub cardinality: usize,
    /// `(1/eps) W_1`.
    pub w1_term: f64,
    /// `eps int d^2`.
    pub d2_term: f64,
    /// `eps^{6n+8} card`.
    pub card_term: f64,
    pub total: f64,
}

/// Evaluate `C_eps` for a plan whose prescribed deviation target is `nu`.
/// Rejects plans whose second marginal leaves `K`.
pub fn evaluate_c_eps(
    cfg: &CepsConfig,
    gamma: &TransportPlan,
    nu: &AtomicMeasure,
) -> Result<CepsBreakdown> {
    let second = gamma.second_marginal();
    for a in second.atoms() {
        if !cfg.k_box.contains(a) {
            return Err(Error::MarginalOutsideK(format!("atom at {:?}", a.coords())));
        }
    }
    let w1_to_nu = w1(&second, nu)?;
    let d_cost = gamma.d_cost();
    let d2_cost = gamma.d2_cost();
    let cardinality = second.len();
    let w1_term = w1_to_nu / cfg.epsilon;
    let d2_term = cfg.epsilon * d2_cost;
    let card_term = cfg.epsilon.powf(cfg.cardinality_exponent) * cardinality as f64;
    Ok(CepsBreakdown {
        w1_to_nu,
        d_cost,
        d2_cost,
        cardinality,
        w1_term,
        d2_term,
        card_term,
        total: w1_term + d_cost + d2_term + card_term,
    })
}

/// Result of a `(P_eps)` search.
#[derive(Clone, Debug)]
pub struct PepsSolution {
    pub plan: TransportPlan,
    pub breakdown: CepsBreakdown,
    /// `(label, C_eps)` for every candidate examined, in search order.
    pub candidates: Vec<(String, f64)>,
}

/// Minimize `C_eps` over the quantization search family. The returned plan
/// satisfies `C_eps(plan) <= C_eps(candidate)` for every candidate searched.
pub fn solve_p_eps(
    cfg: &CepsConfig,
    mu_emp: &AtomicMeasure,
    nu: &AtomicMeasure,
) -> Result<PepsSolution> {
    if cfg.schedule.is_empty() {
        return Err(Error::EmptySchedule);
    }
    for a in mu_emp.atoms().iter().chain(nu.atoms()) {
        if !cfg.k_box.contains(a) {
            return Err(Error::MarginalOutsideK(format!(
                "support atom at {:?}",
                a.coords()
            )));
        }
    }

    let mut best: Option<(TransportPlan, CepsBreakdown)> = None;
    let mut trace = Vec::new();
    let mut consider = |label: String,
                        plan: TransportPlan,
                        best: &mut Option<(TransportPlan, CepsBreakdown)>|
     -> Result<()> {
        let bd = evaluate_c_eps(cfg, &plan, nu)?;
        trace.push((label, bd.total));
        if best.as_ref().is_none_or(|(_, b)| bd.total < b.total) {
            *best = Some((plan, bd));
        }
        Ok(())
    };

    for &m in &cfg.schedule {
        let net = quantize(nu.atoms(), m)?;
        let nu_m = pushforward_quantize(nu, &net)?;
        let fixed = solve_kantorovich(mu_emp, &nu_m, |x, y| c_eps_cost(cfg.epsilon, x, y))?;
        consider(format!("net m={m}"), fixed.plan, &mut best)?;

        let reweighted = reweighted_candidate(cfg, mu_emp, nu_m.atoms(), nu)?;
        consider(format!("reweighted m={m}"), reweighted, &mut best)?;
    }
    let direct = solve_kantorovich(mu_emp, nu, |x, y| c_eps_cost(cfg.epsilon, x, y))?;
    consider("target nu".to_string(), direct.plan, &mut best)?;

    let (plan, breakdown) = best.expect("non-empty schedule yields at least one candidate");
    Ok(PepsSolution {
        plan,
        breakdown,
        candidates: trace,
    })
}

/// Re-optimize the masses of a candidate second marginal on a fixed support.
///
/// Solved as one exact transshipment: mass flows from `mu` atoms through the
/// net points (paying `c_eps`) and on to `nu` (paying `(1/eps) d`, the `W_1`
/// penalty); the flow entering each net point is the reweighted marginal. The
/// standard reduction to a transportation problem gives every net point a
/// unit buffer: a source and a sink joined by a free arc.
fn reweighted_candidate(
    cfg: &CepsConfig,
    mu: &AtomicMeasure,
    net: &[Point],
    nu: &AtomicMeasure,
) -> Result<TransportPlan> {
    let m = mu.len();
    let f = net.len();
    let k = nu.len();
    let rows = m + f;
    let cols = f + k;

    let mut cost = vec![FORBIDDEN; rows * cols];
    for (i, x) in mu.atoms().iter().enumerate() {
        for (j, p) in net.iter().enumerate() {
            cost[i * cols + j] = c_eps_cost(cfg.epsilon, x, p);
        }
    }
    for (j, p) in net.iter().enumerate() {
        cost[(m + j) * cols + j] = 0.0;
        for (kk, y) in nu.atoms().iter().enumerate() {
            cost[(m + j) * cols + f + kk] = cc_distance(p, y) / cfg.epsilon;
        }
    }

    let mut supply = Vec::with_capacity(rows);
    supply.extend_from_slice(mu.weights());
    supply.extend(std::iter::repeat_n(1.0, f));
    let mut demand = Vec::with_capacity(cols);
    demand.extend(std::iter::repeat_n(1.0, f));
    demand.extend_from_slice(nu.weights());

    // Hand-built feasible spanning tree on allowed arcs: all of mu feeds the
    // first net sink, diagonal buffer arcs carry the other net points, the
    // first net source feeds nu, and zero-flow arcs complete the tree.
    let mut basis = Vec::with_capacity(rows + cols - 1);
    let mut flow = Vec::with_capacity(rows + cols - 1);
    for i in 0..m {
        basis.push((i, 0));
        flow.push(mu.weights()[i]);
    }
    for j in 1..f {
        basis.push((m + j, j));
        flow.push(1.0);
    }
    for kk in 0..k {
        basis.push((m, f + kk));
        flow.push(nu.weights()[kk]);
    }
    basis.push((m, 0));
    flow.push(0.0);
    for j in 1..f {
        basis.push((0, j));
        flow.push(0.0);
    }

    let sol = solve_transportation(&cost, &supply, &demand, Some((basis, flow)))?;
    for (&(i, j), fl) in sol.basis.iter().zip(&sol.flow) {
        if cost[i * cols + j] >= FORBIDDEN && *fl > 1e-9 {
            return Err(Error::SolverStall(format!(
                "transshipment routed {fl} through a forbidden arc ({i}, {j})"
            )));
        }
    }

    // Restrict to the mu -> net block and compress unused net points.
    let mut sigma = vec![0.0f64; f];
    for (&(i, j), fl) in sol.basis.iter().zip(&sol.flow) {
        if i < m && j < f && *fl > MASS_EPS {
            sigma[j] += fl;
        }
    }
    let mut remap = vec![usize::MAX; f];
    let mut atoms = Vec::new();
    let mut weights = Vec::new();
    for (j, s) in sigma.iter().enumerate() {
        if *s > 0.0 {
            remap[j] = atoms.len();
            atoms.push(net[j].clone());
            weights.push(*s);
        }
    }
    let target = AtomicMeasure::new(atoms, weights)?;
    let entries: Vec<PlanEntry> = sol
        .basis
        .iter()
        .zip(&sol.flow)
        .filter(|(&(i, j), fl)| i < m && j < f && **fl > MASS_EPS)
        .map(|(&(i, j), &mass)| PlanEntry {
            i,
            j: remap[j],
            mass,
        })
        .collect();
    TransportPlan::new(mu.clone(), target, entries)
}

/// One step of the epsilon schedule.
#[derive(Clone, Debug)]
pub struct ApproxStep {
    pub epsilon: f64,
    pub plan: TransportPlan,
    pub breakdown: CepsBreakdown,
    /// `int d dgamma_eps - W_1(mu_N, nu)`.
    pub w1_gap: f64,
    pub dispersion: f64,
}

/// A full approximation run against one fixed empirical sample of `mu`.
#[derive(Clone, Debug)]
pub struct ApproximationRun {
    pub mu_n: AtomicMeasure,
    /// `W_1(mu_N, nu)` by exact LP on the same instance.
    pub w1_ref: f64,
    pub steps: Vec<ApproxStep>,
}

/// Default compact set: the hull of both supports inflated by 10%.
pub fn default_k_box(a: &[Point], b: &[Point]) -> BoundingBox {
    let all: Vec<Point> = a.iter().chain(b.iter()).cloned().collect();
    BoundingBox::hull(&all).inflate(0.1)
}

/// Fix one empirical sample `mu_N` and run `solve_p_eps` for every epsilon
/// in a decreasing schedule, recording costs, gaps and dispersion. The
/// d-cost approaches `W_1(mu_N, nu)` from above as epsilon decreases.
pub fn run_approximation_sequence(
    mu: &SampledMeasure,
    nu: &AtomicMeasure,
    epsilons: &[f64],
    n_samples: usize,
    seed: u64,
    k_box: Option<BoundingBox>,
) -> Result<ApproximationRun> {
    if epsilons.is_empty() {
        return Err(Error::EmptySchedule);
    }
    if epsilons.iter().any(|e| *e <= 0.0 || e.is_nan()) {
        return Err(Error::BadParameter("epsilons must be positive".into()));
    }
    if epsilons.windows(2).any(|w| w[1] > w[0]) {
        return Err(Error::BadParameter(
            "epsilons must be non-increasing".into(),
        ));
    }

    let mu_n = mu.empirical(n_samples, seed)?;
    let k_box = k_box.unwrap_or_else(|| default_k_box(mu_n.atoms(), nu.atoms()));
    let n = mu_n.group_n();
    let w1_ref = w1(&mu_n, nu)?;

    let mut steps = Vec::with_capacity(epsilons.len());
    for &eps in epsilons {
        let cfg = CepsConfig::new(eps, k_box.clone(), n);
        let sol = solve_p_eps(&cfg, &mu_n, nu)?;
        let dispersion = sol.plan.dispersion();
        steps.push(ApproxStep {
            epsilon: eps,
            w1_gap: sol.breakdown.d_cost - w1_ref,
            dispersion,
            breakdown: sol.breakdown,
            plan: sol.plan,
        });
    }
    Ok(ApproximationRun {
        mu_n,
        w1_ref,
        steps,
    })
}
