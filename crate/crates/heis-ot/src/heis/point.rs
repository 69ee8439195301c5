//! Points of the Heisenberg group and the group operations.
//!
//! A point is written `[zeta, t]` with `zeta` in C^n and `t` real, and is
//! identified with `(xi, eta, t)` in R^{2n+1} through `zeta_j = xi_j + i eta_j`.
//! The group law is
//!
//! ```text
//! [zeta, t] . [zeta', t'] = [zeta + zeta', t + t' + 2 sum_j Im(zeta_j conj(zeta'_j))]
//! ```
//!
//! with identity `[0, 0]`, inverse `[-zeta, -t]`, and dilations
//! `delta_r([zeta, t]) = [r zeta, r^2 t]` acting as group homomorphisms.

use crate::error::{Error, Result};
use num_complex::Complex64;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

/// Element of the Heisenberg group H^n.
#[derive(Clone, Debug, PartialEq)]
pub struct Point {
    zeta: Vec<Complex64>,
    t: f64,
}

impl Point {
    pub fn new(zeta: Vec<Complex64>, t: f64) -> Self {
        assert!(
            !zeta.is_empty(),
            "point needs at least one horizontal coordinate"
        );
        assert!(
            t.is_finite() && zeta.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
            "point coordinates must be finite"
        );
        Point { zeta, t }
    }

    /// The identity element of H^n.
    pub fn origin(n: usize) -> Self {
        Point::new(vec![Complex64::new(0.0, 0.0); n], 0.0)
    }

    /// Convenience constructor for H^1.
    pub fn h1(xi: f64, eta: f64, t: f64) -> Self {
        Point::new(vec![Complex64::new(xi, eta)], t)
    }

    pub fn n(&self) -> usize {
        self.zeta.len()
    }

    pub fn zeta(&self) -> &[Complex64] {
        &self.zeta
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Euclidean norm of the horizontal part.
    pub fn zeta_norm(&self) -> f64 {
        self.zeta.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Group product `self . rhs`.
    pub fn mul(&self, rhs: &Point) -> Point {
        assert_eq!(
            self.n(),
            rhs.n(),
            "group product of points with different n"
        );
        let zeta: Vec<Complex64> = self
            .zeta
            .iter()
            .zip(&rhs.zeta)
            .map(|(a, b)| a + b)
            .collect();
        let twist: f64 = self
            .zeta
            .iter()
            .zip(&rhs.zeta)
            .map(|(a, b)| (a * b.conj()).im)
            .sum();
        Point::new(zeta, self.t + rhs.t + 2.0 * twist)
    }

    /// Group inverse `[-zeta, -t]`.
    pub fn inv(&self) -> Point {
        Point::new(self.zeta.iter().map(|z| -z).collect(), -self.t)
    }

    /// `self^{-1} . rhs`, the group offset from `self` to `rhs`.
    pub fn inv_mul(&self, rhs: &Point) -> Point {
        self.inv().mul(rhs)
    }

    /// Anisotropic dilation `delta_r`. Panics on `r <= 0`.
    pub fn dilate(&self, r: f64) -> Point {
        assert!(
            r > 0.0 && r.is_finite(),
            "dilation factor must be positive, got {r}"
        );
        Point::new(self.zeta.iter().map(|z| z * r).collect(), r * r * self.t)
    }

    /// Flat coordinates `(xi_1..xi_n, eta_1..eta_n, t)`.
    pub fn coords(&self) -> Vec<f64> {
        let n = self.n();
        let mut out = Vec::with_capacity(2 * n + 1);
        out.extend(self.zeta.iter().map(|z| z.re));
        out.extend(self.zeta.iter().map(|z| z.im));
        out.push(self.t);
        out
    }

    /// Largest componentwise coordinate difference. Identity checks use this
    /// rather than the CC distance, whose square-root behavior in the
    /// vertical direction turns coordinate roundoff of 1e-13 into CC
    /// separations near 1e-6.
    pub fn coord_gap(&self, other: &Point) -> f64 {
        self.coords()
            .iter()
            .zip(other.coords())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Parse flat coordinates of length `2n+1`.
    pub fn from_coords(coords: &[f64]) -> Result<Point> {
        if coords.len() < 3 || coords.len().is_multiple_of(2) {
            return Err(Error::BadCoordinates(format!(
                "expected 2n+1 coordinates, got {}",
                coords.len()
            )));
        }
        if !coords.iter().all(|c| c.is_finite()) {
            return Err(Error::BadCoordinates("non-finite coordinate".into()));
        }
        let n = (coords.len() - 1) / 2;
        let zeta = (0..n)
            .map(|j| Complex64::new(coords[j], coords[n + j]))
            .collect();
        Ok(Point::new(zeta, coords[2 * n]))
    }
}

// Points serialize as the flat coordinate array [xi.., eta.., t].
impl Serialize for Point {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.coords().serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Point {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let coords = Vec::<f64>::deserialize(deserializer)?;
        Point::from_coords(&coords).map_err(|e| D::Error::custom(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn group_law_matches_formula() {
        // n=1: [1,0] . [i,0] = [1+i, -2] since Im(1 * conj(i)) = -1.
        let x = Point::new(vec![c(1.0, 0.0)], 0.0);
        let y = Point::new(vec![c(0.0, 1.0)], 0.0);
        let p = x.mul(&y);
        assert_eq!(p.zeta()[0], c(1.0, 1.0));
        assert_eq!(p.t(), -2.0);
    }

    #[test]
    fn identity_and_inverse() {
        let x = Point::h1(0.3, -1.2, 2.5);
        assert_eq!(x.mul(&Point::origin(1)), x);
        assert_eq!(Point::origin(1).mul(&x), x);
        let e = x.mul(&x.inv());
        assert_eq!(e.zeta()[0], c(0.0, 0.0));
        assert_eq!(e.t(), 0.0);
    }

    #[test]
    fn inverse_closed_form() {
        let x = Point::h1(1.0, 1.0, 3.0);
        let xi = x.inv();
        assert_eq!(xi, Point::h1(-1.0, -1.0, -3.0));
        assert_eq!(xi.inv(), x);
    }

    #[test]
    fn dilation_formula_and_composition() {
        let x = Point::h1(1.0, 0.0, 1.0);
        assert_eq!(x.dilate(2.0), Point::h1(2.0, 0.0, 4.0));
        assert_eq!(x.dilate(1.0), x);
        let a = x.dilate(3.0).dilate(0.5);
        let b = x.dilate(1.5);
        assert!((a.zeta()[0] - b.zeta()[0]).norm() < 1e-15);
        assert!((a.t() - b.t()).abs() < 1e-15);
    }

    #[test]
    fn coords_round_trip() {
        let x = Point::new(vec![c(1.0, -2.0), c(0.5, 3.0)], -7.0);
        let back = Point::from_coords(&x.coords()).unwrap();
        assert_eq!(x, back);
    }

    #[test]
    fn rejects_malformed_coords() {
        assert!(Point::from_coords(&[1.0, 2.0]).is_err());
        assert!(Point::from_coords(&[1.0, 2.0, f64::NAN]).is_err());
    }

    #[test]
    fn json_is_flat_array() {
        let x = Point::h1(1.0, 2.0, 3.0);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, "[1.0,2.0,3.0]");
        let back: Point = serde_json::from_str(&s).unwrap();
        assert_eq!(x, back);
    }
}
