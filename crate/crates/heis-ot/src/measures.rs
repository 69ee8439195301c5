//! Probability measures: finitely atomic measures, sampled absolutely
//! continuous measures, greedy quantization nets, and density histograms.
//!
//! Quantization follows the greedy net construction: scan the input points in
//! order, keep a point as a new net point whenever it is at CC distance at
//! least `1/m` from every earlier net point, and assign every point to the
//! first net point within `1/m`. The net is then `1/m`-separated with
//! covering radius below `1/m`, and its cardinality grows at most like
//! `m^{2n+2}` on a fixed compact set.

use crate::boxes::BoundingBox;
use crate::error::{Error, Result};
use crate::heis::{cc_distance, Point};
use crate::tol::WEIGHT_SUM_TOL;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

/// Schema version stamped into every JSON file this crate writes.
pub const SCHEMA_VERSION: u32 = 1;

/// A finitely supported probability measure.
#[derive(Clone, Debug, PartialEq)]
pub struct AtomicMeasure {
    atoms: Vec<Point>,
    weights: Vec<f64>,
}

impl AtomicMeasure {
    /// Build a measure from atoms and nonnegative weights summing to one
    /// (within `WEIGHT_SUM_TOL`).
    pub fn new(atoms: Vec<Point>, weights: Vec<f64>) -> Result<Self> {
        if atoms.is_empty() || atoms.len() != weights.len() {
            return Err(Error::BadMeasure(format!(
                "{} atoms vs {} weights",
                atoms.len(),
                weights.len()
            )));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::BadMeasure(
                "weights must be finite and nonnegative".into(),
            ));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::BadMeasure(format!(
                "weights sum to {total}, expected 1"
            )));
        }
        let n = atoms[0].n();
        if atoms.iter().any(|a| a.n() != n) {
            return Err(Error::BadMeasure("atoms live in different groups".into()));
        }
        Ok(AtomicMeasure { atoms, weights })
    }

    /// The Dirac measure at `p`.
    pub fn dirac(p: Point) -> Self {
        AtomicMeasure {
            atoms: vec![p],
            weights: vec![1.0],
        }
    }

    /// Uniform weights over the given points.
    pub fn uniform_on(points: Vec<Point>) -> Result<Self> {
        let k = points.len();
        if k == 0 {
            return Err(Error::BadMeasure("empty support".into()));
        }
        let w = 1.0 / k as f64;
        AtomicMeasure::new(points, vec![w; k])
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atoms(&self) -> &[Point] {
        &self.atoms
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn group_n(&self) -> usize {
        self.atoms[0].n()
    }

    /// Check the no-duplicate-atoms invariant (quadratic; meant for small
    /// measures and tests).
    pub fn validate_distinct_atoms(&self, tol: f64) -> Result<()> {
        for i in 0..self.atoms.len() {
            for j in (i + 1)..self.atoms.len() {
                let d = cc_distance(&self.atoms[i], &self.atoms[j]);
                if d <= tol {
                    return Err(Error::BadMeasure(format!(
                        "atoms {i} and {j} coincide within {tol:.1e} (d = {d:.3e})"
                    )));
                }
            }
        }
        Ok(())
    }

    /// Merge exactly coincident atoms (bitwise-equal coordinates), summing
    /// weights; first-occurrence order is kept.
    pub fn merged(self) -> Self {
        let mut order: Vec<(Point, f64)> = Vec::with_capacity(self.atoms.len());
        let mut index: std::collections::HashMap<Vec<u64>, usize> =
            std::collections::HashMap::new();
        for (a, w) in self.atoms.into_iter().zip(self.weights) {
            let key: Vec<u64> = a.coords().iter().map(|c| c.to_bits()).collect();
            match index.entry(key) {
                std::collections::hash_map::Entry::Occupied(e) => order[*e.get()].1 += w,
                std::collections::hash_map::Entry::Vacant(e) => {
                    e.insert(order.len());
                    order.push((a, w));
                }
            }
        }
        let (atoms, weights) = order.into_iter().unzip();
        AtomicMeasure { atoms, weights }
    }
}

#[derive(Serialize, Deserialize)]
struct AtomicMeasureWire {
    schema_version: u32,
    atoms: Vec<Vec<f64>>,
    weights: Vec<f64>,
}

impl Serialize for AtomicMeasure {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        AtomicMeasureWire {
            schema_version: SCHEMA_VERSION,
            atoms: self.atoms.iter().map(Point::coords).collect(),
            weights: self.weights.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for AtomicMeasure {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let wire = AtomicMeasureWire::deserialize(d)?;
        let atoms = wire
            .atoms
            .iter()
            .map(|c| Point::from_coords(c))
            .collect::<Result<Vec<_>>>()
            .map_err(|e| D::Error::custom(e.to_string()))?;
        AtomicMeasure::new(atoms, wire.weights).map_err(|e| D::Error::custom(e.to_string()))
    }
}

/// An absolutely continuous measure presented by a sampler and a density
/// with respect to Haar (= Lebesgue) measure, supported in a box.
pub struct SampledMeasure {
    sampler: Box<dyn Fn(&mut ChaCha8Rng) -> Point + Send + Sync>,
    density: Box<dyn Fn(&Point) -> f64 + Send + Sync>,
    support: BoundingBox,
    density_bound: f64,
}

impl SampledMeasure {
    pub fn new(
        sampler: Box<dyn Fn(&mut ChaCha8Rng) -> Point + Send + Sync>,
        density: Box<dyn Fn(&Point) -> f64 + Send + Sync>,
        support: BoundingBox,
        density_bound: f64,
    ) -> Self {
        SampledMeasure {
            sampler,
            density,
            support,
            density_bound,
        }
    }

    /// The uniform distribution on a box.
    pub fn uniform_box(support: BoundingBox) -> Self {
        let vol = support.volume();
        assert!(vol > 0.0, "uniform box must have positive volume");
        let b1 = support.clone();
        let b2 = support.clone();
        SampledMeasure {
            sampler: Box::new(move |rng| b1.sample(rng)),
            density: Box::new(move |p| {
                if b2.contains(p) {
                    1.0 / b2.volume()
                } else {
                    0.0
                }
            }),
            support,
            density_bound: 1.0 / vol,
        }
    }

    pub fn support(&self) -> &BoundingBox {
        &self.support
    }

    /// Essential sup of the density.
    pub fn density_bound(&self) -> f64 {
        self.density_bound
    }

    pub fn density_at(&self, p: &Point) -> f64 {
        (self.density)(p)
    }

    pub fn sample(&self, rng: &mut ChaCha8Rng) -> Point {
        (self.sampler)(rng)
    }

    /// `n` i.i.d. samples with uniform weights; deterministic under `seed`.
    pub fn empirical(&self, n: usize, seed: u64) -> Result<AtomicMeasure> {
        if n == 0 {
            return Err(Error::BadParameter(
                "empirical sample size must be >= 1".into(),
            ));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let atoms: Vec<Point> = (0..n).map(|_| self.sample(&mut rng)).collect();
        AtomicMeasure::uniform_on(atoms)
    }
}

/// A greedy `1/m`-net over a point cloud together with the first-covering
/// assignment rule.
#[derive(Clone, Debug)]
pub struct QuantizationMap {
    net: Vec<Point>,
    m: u32,
}

impl QuantizationMap {
    pub fn net(&self) -> &[Point] {
        &self.net
    }

    pub fn card(&self) -> usize {
        self.net.len()
    }

    /// Net scale `1/m`.
    pub fn scale(&self) -> f64 {
        1.0 / self.m as f64
    }

    /// Index of the first net point within `1/m` of `p`.
    pub fn assign(&self, p: &Point) -> Result<usize> {
        let radius = self.scale();
        let mut best = f64::INFINITY;
        for (i, q) in self.net.iter().enumerate() {
            let d = cc_distance(q, p);
            if d < radius {
                return Ok(i);
            }
            best = best.min(d);
        }
        Err(Error::OutsideCoverage { dist: best, radius })
    }
}

/// Build the greedy `1/m`-net over `points`, scanning in input order.
pub fn quantize(points: &[Point], m: u32) -> Result<QuantizationMap> {
    if points.is_empty() {
        return Err(Error::BadMeasure(
            "cannot quantize an empty point set".into(),
        ));
    }
    if m == 0 {
        return Err(Error::BadParameter(
            "quantization index m must be >= 1".into(),
        ));
    }
    let radius = 1.0 / m as f64;
    let mut net: Vec<Point> = Vec::new();
    for p in points {
        if net.iter().all(|q| cc_distance(q, p) >= radius) {
            net.push(p.clone());
        }
    }
    Ok(QuantizationMap { net, m })
}

/// Pushforward `(p_m)_# nu`: move every atom to its assigned net point and
/// accumulate weights. Errors if some atom is not covered by the net.
pub fn pushforward_quantize(nu: &AtomicMeasure, q: &QuantizationMap) -> Result<AtomicMeasure> {
    let mut mass = vec![0.0f64; q.card()];
    for (a, w) in nu.atoms().iter().zip(nu.weights()) {
        mass[q.assign(a)?] += w;
    }
    let mut atoms = Vec::new();
    let mut weights = Vec::new();
    for (i, m) in mass.into_iter().enumerate() {
        if m > 0.0 {
            atoms.push(q.net()[i].clone());
            weights.push(m);
        }
    }
    AtomicMeasure::new(atoms, weights)
}

/// Per-cell density field over a regular grid of Euclidean cubes. Haar
/// measure is Lebesgue measure in these coordinates, so cube volumes are the
/// correct reference measure.
#[derive(Clone, Debug)]
pub struct Histogram {
    bbox: BoundingBox,
    h: f64,
    dims: Vec<usize>,
    /// Mass per cell, row-major in the grid index order.
    mass: Vec<f64>,
}

impl Histogram {
    pub fn cell_size(&self) -> f64 {
        self.h
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn cell_volume(&self) -> f64 {
        self.h.powi(self.bbox.dim() as i32)
    }

    /// Total mass (the histogram integral): exact sum of the binned weights.
    pub fn total_mass(&self) -> f64 {
        self.mass.iter().sum()
    }

    pub fn max_density(&self) -> f64 {
        self.mass.iter().cloned().fold(0.0, f64::max) / self.cell_volume()
    }

    /// Iterate `(cell center coordinates, density)` over nonempty cells.
    pub fn nonempty_cells(&self) -> impl Iterator<Item = (Vec<f64>, f64)> + '_ {
        let vol = self.cell_volume();
        self.mass
            .iter()
            .enumerate()
            .filter(|(_, m)| **m > 0.0)
            .map(move |(flat, m)| {
                let mut idx = flat;
                let mut center = Vec::with_capacity(self.dims.len());
                for (k, _) in self.dims.iter().enumerate() {
                    let stride: usize = self.dims[k + 1..].iter().product();
                    let i = idx / stride;
                    idx %= stride;
                    center.push(self.bbox.lo[k] + (i as f64 + 0.5) * self.h);
                }
                (center, m / vol)
            })
    }

    fn flat_index(&self, p: &Point) -> Option<usize> {
        let coords = p.coords();
        let mut flat = 0usize;
        for (k, c) in coords.iter().enumerate() {
            if *c < self.bbox.lo[k] || *c > self.bbox.hi[k] {
                return None;
            }
            let mut i = ((c - self.bbox.lo[k]) / self.h) as usize;
            if i >= self.dims[k] {
                i = self.dims[k] - 1; // atom exactly on the upper face
            }
            flat = flat * self.dims[k] + i;
        }
        Some(flat)
    }
}

/// Bin an atomic measure into cubical cells of side `h` over `bbox`.
/// Rejects atoms outside the grid.
pub fn histogram_density(mu: &AtomicMeasure, bbox: &BoundingBox, h: f64) -> Result<Histogram> {
    assert!(h > 0.0, "cell size must be positive");
    let dims: Vec<usize> = bbox
        .lo
        .iter()
        .zip(&bbox.hi)
        .map(|(a, b)| (((b - a) / h).ceil() as usize).max(1))
        .collect();
    let n_cells: usize = dims.iter().product();
    let mut hist = Histogram {
        bbox: bbox.clone(),
        h,
        dims,
        mass: vec![0.0; n_cells],
    };
    for (a, w) in mu.atoms().iter().zip(mu.weights()) {
        let flat = hist
            .flat_index(a)
            .ok_or_else(|| Error::OutsideGrid(format!("atom at {:?}", a.coords())))?;
        hist.mass[flat] += w;
    }
    Ok(hist)
}
