//! Axis-aligned boxes in the real coordinates `(xi_1..xi_n, eta_1..eta_n, t)`.
//!
//! Boxes serve as sampling domains, histogram grids and the compact set `K`
//! of the variational problem. Haar measure coincides with Lebesgue measure
//! in these coordinates, so box volumes are the ordinary products of side
//! lengths.

use crate::heis::Point;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundingBox {
    pub lo: Vec<f64>,
    pub hi: Vec<f64>,
}

impl BoundingBox {
    pub fn new(lo: Vec<f64>, hi: Vec<f64>) -> Self {
        assert_eq!(lo.len(), hi.len(), "box bounds must have equal dimension");
        assert!(lo.len() % 2 == 1, "box dimension must be 2n+1");
        assert!(
            lo.iter()
                .zip(&hi)
                .all(|(a, b)| a.is_finite() && b.is_finite() && a <= b),
            "box bounds must be finite and ordered"
        );
        BoundingBox { lo, hi }
    }

    /// Cube `[lo, hi]^{2n+1}`.
    pub fn cube(n: usize, lo: f64, hi: f64) -> Self {
        let d = 2 * n + 1;
        BoundingBox::new(vec![lo; d], vec![hi; d])
    }

    /// Smallest box containing all points, in group dimension `n`.
    pub fn hull(points: &[Point]) -> Self {
        assert!(!points.is_empty(), "hull of no points");
        let d = 2 * points[0].n() + 1;
        let mut lo = vec![f64::INFINITY; d];
        let mut hi = vec![f64::NEG_INFINITY; d];
        for p in points {
            for (k, c) in p.coords().iter().enumerate() {
                lo[k] = lo[k].min(*c);
                hi[k] = hi[k].max(*c);
            }
        }
        BoundingBox::new(lo, hi)
    }

    pub fn dim(&self) -> usize {
        self.lo.len()
    }

    /// Group dimension index `n` (coordinate dimension is `2n+1`).
    pub fn group_n(&self) -> usize {
        (self.dim() - 1) / 2
    }

    pub fn volume(&self) -> f64 {
        self.lo.iter().zip(&self.hi).map(|(a, b)| b - a).product()
    }

    pub fn contains(&self, p: &Point) -> bool {
        p.coords()
            .iter()
            .zip(self.lo.iter().zip(&self.hi))
            .all(|(c, (a, b))| *a <= *c && *c <= *b)
    }

    /// Grow every side by `frac` of its length (and by a small absolute
    /// amount so degenerate sides keep points strictly inside).
    pub fn inflate(&self, frac: f64) -> Self {
        let lo = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| a - frac * (b - a) - 1e-9)
            .collect();
        let hi = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| b + frac * (b - a) + 1e-9)
            .collect();
        BoundingBox::new(lo, hi)
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Point {
        let coords: Vec<f64> = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| rng.gen_range(*a..=*b))
            .collect();
        Point::from_coords(&coords).expect("box sample has valid coordinates")
    }

    pub fn center(&self) -> Point {
        let coords: Vec<f64> = self
            .lo
            .iter()
            .zip(&self.hi)
            .map(|(a, b)| 0.5 * (a + b))
            .collect();
        Point::from_coords(&coords).expect("box center has valid coordinates")
    }
}
