//! Transport plans (sparse couplings) and Kantorovich dual potentials.

use crate::error::{Error, Result};
use crate::heis::{cc_distance, Point};
use crate::measures::{AtomicMeasure, SCHEMA_VERSION};
use crate::tol::MARGINAL_TOL;
use serde::{Deserialize, Serialize};

/// One coupling entry: mass sent from source atom `i` to target atom `j`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PlanEntry {
    pub i: usize,
    pub j: usize,
    pub mass: f64,
}

/// A sparse coupling of two atomic measures.
#[derive(Clone, Debug)]
pub struct TransportPlan {
    source: AtomicMeasure,
    target: AtomicMeasure,
    entries: Vec<PlanEntry>,
}

impl TransportPlan {
    /// Validates index bounds, positive masses, and that row/column sums
    /// reproduce the marginals within `MARGINAL_TOL`.
    pub fn new(
        source: AtomicMeasure,
        target: AtomicMeasure,
        entries: Vec<PlanEntry>,
    ) -> Result<Self> {
        let mut rows = vec![0.0; source.len()];
        let mut cols = vec![0.0; target.len()];
        for e in &entries {
            if e.i >= source.len() || e.j >= target.len() {
                return Err(Error::BadMeasure(format!(
                    "plan entry ({}, {}) out of range",
                    e.i, e.j
                )));
            }
            if e.mass <= 0.0 || !e.mass.is_finite() {
                return Err(Error::BadMeasure(format!(
                    "plan entry mass {} must be positive",
                    e.mass
                )));
            }
            rows[e.i] += e.mass;
            cols[e.j] += e.mass;
        }
        for (r, w) in rows.iter().zip(source.weights()) {
            if (r - w).abs() > MARGINAL_TOL {
                return Err(Error::BadMeasure(format!(
                    "row sum {r} deviates from source weight {w}"
                )));
            }
        }
        for (c, w) in cols.iter().zip(target.weights()) {
            if (c - w).abs() > MARGINAL_TOL {
                return Err(Error::BadMeasure(format!(
                    "column sum {c} deviates from target weight {w}"
                )));
            }
        }
        Ok(TransportPlan {
            source,
            target,
            entries,
        })
    }

    pub fn source(&self) -> &AtomicMeasure {
        &self.source
    }

    pub fn target(&self) -> &AtomicMeasure {
        &self.target
    }

    pub fn entries(&self) -> &[PlanEntry] {
        &self.entries
    }

    /// Iterate `(source atom, target atom, mass)` over the support.
    pub fn support_pairs(&self) -> impl Iterator<Item = (&Point, &Point, f64)> + '_ {
        self.entries
            .iter()
            .map(|e| (&self.source.atoms()[e.i], &self.target.atoms()[e.j], e.mass))
    }

    /// `int c dgamma` for an arbitrary cost.
    pub fn cost_integral<F: Fn(&Point, &Point) -> f64>(&self, cost: F) -> f64 {
        self.support_pairs().map(|(x, y, m)| m * cost(x, y)).sum()
    }

    /// `int d dgamma`.
    pub fn d_cost(&self) -> f64 {
        self.cost_integral(cc_distance)
    }

    /// `int d^2 dgamma`.
    pub fn d2_cost(&self) -> f64 {
        self.cost_integral(|x, y| cc_distance(x, y).powi(2))
    }

    /// Second marginal `(pi_2)_# gamma` restricted to atoms that carry mass.
    pub fn second_marginal(&self) -> AtomicMeasure {
        let mut mass = vec![0.0; self.target.len()];
        for e in &self.entries {
            mass[e.j] += e.mass;
        }
        let mut atoms = Vec::new();
        let mut weights = Vec::new();
        for (j, m) in mass.into_iter().enumerate() {
            if m > 0.0 {
                atoms.push(self.target.atoms()[j].clone());
                weights.push(m);
            }
        }
        AtomicMeasure::new(atoms, weights).expect("marginal of a valid plan is a measure")
    }

    /// Number of target atoms that carry mass.
    pub fn support_cardinality(&self) -> usize {
        let mut seen = vec![false; self.target.len()];
        for e in &self.entries {
            seen[e.j] = true;
        }
        seen.into_iter().filter(|s| *s).count()
    }

    /// Mass fraction not explained by each source atom's dominant target:
    /// `sum_i w_i (1 - max_j gamma_ij / w_i)`. Zero exactly when the plan is
    /// induced by a map.
    pub fn dispersion(&self) -> f64 {
        let mut row_total = vec![0.0; self.source.len()];
        let mut row_max = vec![0.0f64; self.source.len()];
        for e in &self.entries {
            row_total[e.i] += e.mass;
            row_max[e.i] = row_max[e.i].max(e.mass);
        }
        row_total
            .iter()
            .zip(&row_max)
            .filter(|(t, _)| **t > 0.0)
            .map(|(t, m)| t - m)
            .sum()
    }
}

#[derive(Serialize, Deserialize)]
struct PlanWire {
    schema_version: u32,
    source: AtomicMeasure,
    target: AtomicMeasure,
    entries: Vec<(usize, usize, f64)>,
}

impl Serialize for TransportPlan {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PlanWire {
            schema_version: SCHEMA_VERSION,
            source: self.source.clone(),
            target: self.target.clone(),
            entries: self.entries.iter().map(|e| (e.i, e.j, e.mass)).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for TransportPlan {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = PlanWire::deserialize(d)?;
        let entries = wire
            .entries
            .into_iter()
            .map(|(i, j, mass)| PlanEntry { i, j, mass })
            .collect();
        TransportPlan::new(wire.source, wire.target, entries)
            .map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// Values of a Kantorovich dual pair on the two supports. For cost `d` the
/// source potential is 1-Lipschitz.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct DualPotential {
    /// `psi` on source atoms.
    pub psi: Vec<f64>,
    /// `psi^c` on target atoms.
    pub psi_c: Vec<f64>,
}

impl DualPotential {
    /// Dual objective `int psi dmu + int psi^c dnu`.
    pub fn value(&self, mu: &AtomicMeasure, nu: &AtomicMeasure) -> f64 {
        self.psi
            .iter()
            .zip(mu.weights())
            .map(|(p, w)| p * w)
            .sum::<f64>()
            + self
                .psi_c
                .iter()
                .zip(nu.weights())
                .map(|(p, w)| p * w)
                .sum::<f64>()
    }
}
