//! Displacement interpolation along minimal curves and extraction of
//! transport maps from plans.

use super::plan::TransportPlan;
use crate::error::{Error, Result};
use crate::heis::{eval_curve, Point};
use crate::measures::AtomicMeasure;

/// The interpolation `(e_t o S)_# gamma`: each coupling entry contributes an
/// atom at the point a fraction `t` of the way along the selected minimal
/// curve, carrying the entry's mass. Coincident atoms are merged.
pub fn interpolate(gamma: &TransportPlan, t: f64) -> Result<AtomicMeasure> {
    if !(0.0..=1.0).contains(&t) {
        return Err(Error::BadParameter(format!(
            "interpolation time {t} outside [0,1]"
        )));
    }
    let mut atoms = Vec::with_capacity(gamma.entries().len());
    let mut weights = Vec::with_capacity(gamma.entries().len());
    for (x, y, mass) in gamma.support_pairs() {
        atoms.push(eval_curve(x, y, t)?);
        weights.push(mass);
    }
    Ok(AtomicMeasure::new(atoms, weights)?.merged())
}

/// A source atom whose mass does not go to a single target.
#[derive(Clone, Debug)]
pub struct SplitAtom {
    pub source_index: usize,
    /// `(target index, mass)` rows of this atom, heaviest first.
    pub distribution: Vec<(usize, f64)>,
}

/// Report of the atoms preventing a plan from being a map.
#[derive(Clone, Debug)]
pub struct SplitReport {
    pub splits: Vec<SplitAtom>,
    /// Total mass off the dominant targets (the plan's graph dispersion).
    pub split_mass: f64,
}

/// Either a transport map (every source atom sends at least `1 - tol` of its
/// mass to one target) or the list of split atoms.
#[derive(Clone, Debug)]
pub enum MapExtraction {
    /// `map[i]` is the target point of source atom `i`.
    Map(Vec<Point>),
    Split(SplitReport),
}

/// Extract the map induced by `gamma` when one exists at tolerance `tol`.
/// Ties between equal dominant masses break toward the lowest target index.
pub fn transport_map_extract(gamma: &TransportPlan, tol: f64) -> MapExtraction {
    let m = gamma.source().len();
    let mut rows: Vec<Vec<(usize, f64)>> = vec![Vec::new(); m];
    for e in gamma.entries() {
        rows[e.i].push((e.j, e.mass));
    }
    let mut map = Vec::with_capacity(m);
    let mut splits = Vec::new();
    let mut split_mass = 0.0;
    for (i, mut row) in rows.into_iter().enumerate() {
        row.sort_by(|a, b| b.1.partial_cmp(&a.1).unwrap().then(a.0.cmp(&b.0)));
        let total: f64 = row.iter().map(|(_, m)| m).sum();
        let Some(&(j_dom, m_dom)) = row.first() else {
            continue; // zero-weight atom
        };
        map.push(gamma.target().atoms()[j_dom].clone());
        if m_dom < (1.0 - tol) * total {
            split_mass += total - m_dom;
            splits.push(SplitAtom {
                source_index: i,
                distribution: row,
            });
        }
    }
    if splits.is_empty() {
        MapExtraction::Map(map)
    } else {
        MapExtraction::Split(SplitReport { splits, split_mass })
    }
}
