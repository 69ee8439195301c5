//! Primal simplex over the transportation polytope.
//!
//! Solves `min sum c_ij x_ij` subject to row sums = supplies and column sums
//! = demands, `x >= 0`, keeping a spanning-tree basis of the bipartite
//! source/sink graph. Dantzig's rule picks the entering cell; on stalls
//! (degenerate pivots making no progress) the pivot rule switches to Bland's,
//! which cannot cycle. Flows are re-solved exactly on the final tree from the
//! original marginals, so returned row and column sums match the inputs to
//! machine precision rather than accumulating pivot roundoff.

use crate::error::{Error, Result};

/// Costs above this threshold mark forbidden cells; they never enter an
/// optimal basis as long as a finite-cost feasible tree exists.
pub(crate) const FORBIDDEN: f64 = 1e30;

/// A spanning-tree basis: cells and the flow carried by each.
pub(crate) type Basis = (Vec<(usize, usize)>, Vec<f64>);

#[derive(Clone, Debug)]
pub(crate) struct SimplexSolution {
    /// Basis cells `(i, j)` (spanning tree, `m + k - 1` of them).
    pub basis: Vec<(usize, usize)>,
    /// Flow on each basis cell, aligned with `basis`.
    pub flow: Vec<f64>,
    /// Row duals.
    pub u: Vec<f64>,
    /// Column duals.
    pub v: Vec<f64>,
    pub objective: f64,
}

/// Solve the transportation problem. `cost` is row-major `m x k`.
/// `warm_start` provides an initial spanning-tree basis with feasible flows.
pub(crate) fn solve_transportation(
    cost: &[f64],
    supply: &[f64],
    demand: &[f64],
    warm_start: Option<Basis>,
) -> Result<SimplexSolution> {
    let m = supply.len();
    let k = demand.len();
    assert_eq!(cost.len(), m * k, "cost matrix shape mismatch");
    assert!(m > 0 && k > 0, "empty marginals");

    let sum_a: f64 = supply.iter().sum();
    let sum_b: f64 = demand.iter().sum();
    if (sum_a - sum_b).abs() > 1e-9 {
        return Err(Error::UnbalancedMarginals {
            supply: sum_a,
            demand: sum_b,
        });
    }
    for (idx, c) in cost.iter().enumerate() {
        if c.is_nan() || (*c == f64::INFINITY) {
            return Err(Error::NonFiniteCost {
                i: idx / k,
                j: idx % k,
            });
        }
    }

    let mut tree = match warm_start {
        Some((basis, flow)) => Tree::from_basis(m, k, basis, flow),
        None => Tree::northwest(m, k, supply, demand),
    };

    let finite_scale = cost
        .iter()
        .filter(|c| c.abs() < FORBIDDEN)
        .fold(0.0f64, |a, c| a.max(c.abs()))
        + 1.0;
    let enter_tol = 1e-12 * finite_scale;

    let mut u = vec![0.0; m];
    let mut v = vec![0.0; k];
    let max_iter = 200 * (m + k) * (m + k) + 10_000;
    let stall_limit = 4 * (m + k) + 20;

    let mut bland = false;
    let mut stall = 0usize;
    let mut last_objective = f64::INFINITY;

    for iter in 0..max_iter {
        tree.compute_duals(cost, k, &mut u, &mut v);

        // Entering cell: most negative reduced cost (Dantzig) or first
        // negative in index order (Bland, after a stall).
        let mut enter: Option<(usize, usize)> = None;
        let mut best = -enter_tol;
        'scan: for i in 0..m {
            let ui = u[i];
            for j in 0..k {
                let rc = cost[i * k + j] - ui - v[j];
                if rc < best {
                    enter = Some((i, j));
                    if bland {
                        break 'scan;
                    }
                    best = rc;
                }
            }
        }
        let Some((ei, ej)) = enter else {
            // Optimal. Re-solve flows exactly on the final tree.
            tree.resolve_flows(supply, demand);
            let objective = tree
                .basis
                .iter()
                .zip(&tree.flow)
                .map(|(&(i, j), f)| cost[i * k + j] * f)
                .sum();
            return Ok(SimplexSolution {
                basis: tree.basis.clone(),
                flow: tree.flow.clone(),
                u,
                v,
                objective,
            });
        };

        tree.pivot(ei, ej);

        if iter % 16 == 0 {
            let obj: f64 = tree
                .basis
                .iter()
                .zip(&tree.flow)
                .map(|(&(i, j), f)| cost[i * k + j] * f)
                .sum();
            if obj < last_objective - enter_tol {
                last_objective = obj;
                stall = 0;
            } else {
                stall += 1;
                if stall > stall_limit {
                    bland = true;
                }
            }
        }
    }
    Err(Error::SolverStall(format!(
        "transportation simplex exceeded {max_iter} iterations on a {m}x{k} instance"
    )))
}

/// Spanning-tree basis over `m + k` nodes (sources `0..m`, sinks `m..m+k`).
struct Tree {
    m: usize,
    basis: Vec<(usize, usize)>,
    flow: Vec<f64>,
    /// adjacency: node -> indices into `basis`
    adj: Vec<Vec<usize>>,
}

impl Tree {
    fn from_basis(m: usize, k: usize, basis: Vec<(usize, usize)>, flow: Vec<f64>) -> Tree {
        assert_eq!(basis.len(), m + k - 1, "warm-start basis must span");
        assert_eq!(basis.len(), flow.len());
        let mut adj = vec![Vec::new(); m + k];
        for (e, &(i, j)) in basis.iter().enumerate() {
            adj[i].push(e);
            adj[m + j].push(e);
        }
        Tree {
            m,
            basis,
            flow,
            adj,
        }
    }

    /// Northwest-corner initial basis: always a spanning tree with
    /// `m + k - 1` cells, degenerate cells allowed.
    fn northwest(m: usize, k: usize, supply: &[f64], demand: &[f64]) -> Tree {
        let mut a = supply.to_vec();
        let mut b = demand.to_vec();
        let mut basis = Vec::with_capacity(m + k - 1);
        let mut flow = Vec::with_capacity(m + k - 1);
        let (mut i, mut j) = (0usize, 0usize);
        loop {
            let theta = a[i].min(b[j]);
            basis.push((i, j));
            flow.push(theta);
            a[i] -= theta;
            b[j] -= theta;
            if basis.len() == m + k - 1 {
                break;
            }
            if i + 1 < m && a[i] <= 0.0 {
                i += 1;
            } else {
                j += 1;
            }
        }
        Tree::from_basis(m, k, basis, flow)
    }

    fn compute_duals(&self, cost: &[f64], k: usize, u: &mut [f64], v: &mut [f64]) {
        // u[0] = 0; propagate u_i + v_j = c_ij over the tree.
        let n_nodes = self.adj.len();
        let mut seen = vec![false; n_nodes];
        let mut stack = vec![0usize];
        seen[0] = true;
        u[0] = 0.0;
        while let Some(node) = stack.pop() {
            for &e in &self.adj[node] {
                let (i, j) = self.basis[e];
                let (a, b) = (i, self.m + j);
                let next = if node == a { b } else { a };
                if seen[next] {
                    continue;
                }
                seen[next] = true;
                if next >= self.m {
                    v[next - self.m] = cost[i * k + j] - u[i];
                } else {
                    u[next] = cost[i * k + j] - v[j];
                }
                stack.push(next);
            }
        }
    }

    /// Bring cell `(ei, ej)` into the basis, pushing flow around the unique
    /// tree cycle it closes and dropping the blocking cell.
    fn pivot(&mut self, ei: usize, ej: usize) {
        let src = ei;
        let dst = self.m + ej;
        // Path from src to dst through the tree (parent pointers via DFS).
        let n_nodes = self.adj.len();
        let mut parent_edge: Vec<Option<usize>> = vec![None; n_nodes];
        let mut parent_node: Vec<usize> = vec![usize::MAX; n_nodes];
        let mut seen = vec![false; n_nodes];
        let mut stack = vec![src];
        seen[src] = true;
        while let Some(node) = stack.pop() {
            if node == dst {
                break;
            }
            for &e in &self.adj[node] {
                let (i, j) = self.basis[e];
                let (a, b) = (i, self.m + j);
                let next = if node == a { b } else { a };
                if !seen[next] {
                    seen[next] = true;
                    parent_edge[next] = Some(e);
                    parent_node[next] = node;
                    stack.push(next);
                }
            }
        }
        debug_assert!(seen[dst], "basis must be connected");

        // Edges along the path dst -> src; alternate signs starting with -
        // on the edge incident to src (position parity from the src side).
        let mut path = Vec::new();
        let mut node = dst;
        while node != src {
            let e = parent_edge[node].expect("path edge");
            path.push(e);
            node = parent_node[node];
        }
        path.reverse(); // now path[0] is incident to src

        // theta = min flow over minus-edges (even positions from src side);
        // ties break toward the lexicographically smallest cell so the
        // Bland fallback cannot cycle.
        let mut theta = f64::INFINITY;
        let mut leave_edge = path[0];
        for (pos, &e) in path.iter().enumerate() {
            if pos % 2 == 0
                && (self.flow[e] < theta
                    || (self.flow[e] == theta && self.basis[e] < self.basis[leave_edge]))
            {
                theta = self.flow[e];
                leave_edge = e;
            }
        }

        for (pos, &e) in path.iter().enumerate() {
            if pos % 2 == 0 {
                self.flow[e] -= theta;
            } else {
                self.flow[e] += theta;
            }
        }

        // Replace the leaving cell by the entering one.
        let (li, lj) = self.basis[leave_edge];
        let (la, lb) = (li, self.m + lj);
        self.adj[la].retain(|&e| e != leave_edge);
        self.adj[lb].retain(|&e| e != leave_edge);
        self.basis[leave_edge] = (ei, ej);
        self.flow[leave_edge] = theta;
        self.adj[src].push(leave_edge);
        self.adj[dst].push(leave_edge);
    }

    /// Solve flows exactly on the tree from the marginals by leaf elimination.
    fn resolve_flows(&mut self, supply: &[f64], demand: &[f64]) {
        let m = self.m;
        let n_nodes = self.adj.len();
        let mut rem: Vec<f64> = supply.iter().chain(demand.iter()).cloned().collect();
        let mut degree: Vec<usize> = self.adj.iter().map(Vec::len).collect();
        let mut removed = vec![false; self.basis.len()];
        let mut queue: Vec<usize> = (0..n_nodes).filter(|&n| degree[n] == 1).collect();
        while let Some(node) = queue.pop() {
            let Some(&e) = self.adj[node].iter().find(|&&e| !removed[e]) else {
                continue;
            };
            let (i, j) = self.basis[e];
            let (a, b) = (i, m + j);
            let other = if node == a { b } else { a };
            let f = rem[node].max(0.0);
            self.flow[e] = f;
            rem[node] = 0.0;
            rem[other] -= f;
            removed[e] = true;
            degree[node] -= 1;
            degree[other] -= 1;
            if degree[other] == 1 {
                queue.push(other);
            }
        }
    }
}
