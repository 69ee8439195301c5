//! Minimal curves and the Carnot-Caratheodory distance.
//!
//! Non-trivial minimal curves from the origin, parameterized on `[0, 1]`, are
//!
//! ```text
//! sigma_{chi,phi}(s) = [ i (e^{-i phi s} - 1) chi / phi ,  2 |chi|^2 (phi s - sin(phi s)) / phi^2 ]
//! ```
//!
//! for a direction `chi` in C^n \ {0} and a twist `phi` in `[-2pi, 2pi]`, with
//! the straight horizontal line `[chi s, 0]` at `phi = 0`, and
//! `|chi| = d(0, sigma(1))`. Off the center line `L = {[0, t]}` the map
//! `(chi, phi) -> sigma_{chi,phi}(1)` is a diffeomorphism, so geodesic
//! parameters are recovered by inverting the scalar twist-ratio function
//!
//! ```text
//! t / |zeta|^2 = (phi - sin phi) / (1 - cos phi)
//! ```
//!
//! which is odd, strictly increasing on `(-2pi, 2pi)` and blows up at the
//! endpoints; a bracketed root find inverts it. Points of `L` itself are
//! reached by infinitely many curves, all with `|chi| = sqrt(pi |t|)` and
//! `phi = +-2pi`; a fixed canonical representative (`chi` along `e_1`) stands
//! in for the measurable selection there.

use super::point::Point;
use crate::error::{Error, Result};
use crate::roots::brent;
use crate::tol::{OMEGA_TOL, PHI_TAYLOR_SWITCH, RATIO_SERIES_SWITCH, ROOT_BRACKET_TOL};
use num_complex::Complex64;
use std::f64::consts::PI;

const TWO_PI: f64 = 2.0 * PI;

/// Parameters `(chi, phi)` of a minimal curve from the origin.
#[derive(Clone, Debug, PartialEq)]
pub struct GeodesicParam {
    chi: Vec<Complex64>,
    phi: f64,
}

impl GeodesicParam {
    pub fn new(chi: Vec<Complex64>, phi: f64) -> Self {
        assert!(!chi.is_empty(), "chi must have at least one component");
        assert!(
            chi.iter().all(|z| z.re.is_finite() && z.im.is_finite()),
            "chi must be finite"
        );
        assert!(
            phi.is_finite() && phi.abs() <= TWO_PI * (1.0 + 1e-12),
            "phi must lie in [-2pi, 2pi], got {phi}"
        );
        GeodesicParam { chi, phi }
    }

    pub fn chi(&self) -> &[Complex64] {
        &self.chi
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    /// Curve length `|chi|`, which equals `d(0, sigma_{chi,phi}(1))`.
    pub fn length(&self) -> f64 {
        self.chi.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// `w(u) = i (e^{-iu} - 1) / u`, the coefficient mapping `chi` to the
/// horizontal part of the curve point. Series below the switch to avoid
/// cancellation; `w(0) = 1`.
fn zeta_coeff(u: f64) -> Complex64 {
    if u.abs() < PHI_TAYLOR_SWITCH {
        let u2 = u * u;
        Complex64::new(1.0 - u2 / 6.0 + u2 * u2 / 120.0, -u / 2.0 + u * u2 / 24.0)
    } else {
        Complex64::i() * (Complex64::new(0.0, -u).exp() - 1.0) / u
    }
}

/// `g(u) = (u - sin u) / u^2`, the coefficient of the vertical part.
fn vertical_coeff(u: f64) -> f64 {
    if u.abs() < PHI_TAYLOR_SWITCH {
        let u2 = u * u;
        u * (1.0 / 6.0 - u2 / 120.0 + u2 * u2 / 5040.0)
    } else {
        (u - u.sin()) / (u * u)
    }
}

/// Twist-ratio function `r(phi) = (phi - sin phi)/(1 - cos phi)`, equal to
/// `t / |zeta|^2` along `sigma_{chi,phi}(1)`. Odd and strictly increasing on
/// `(-2pi, 2pi)`.
pub fn twist_ratio(phi: f64) -> f64 {
    if phi.abs() < RATIO_SERIES_SWITCH {
        let p2 = phi * phi;
        (phi / 3.0) * (1.0 + p2 / 30.0 + p2 * p2 / 840.0)
    } else {
        (phi - phi.sin()) / (1.0 - phi.cos())
    }
}

/// Evaluate the minimal curve `sigma_{chi,phi}` at `s` in `[0, 1]`.
pub fn exp_geodesic(p: &GeodesicParam, s: f64) -> Point {
    assert!(
        (0.0..=1.0).contains(&s),
        "curve parameter s must lie in [0,1], got {s}"
    );
    let u = p.phi * s;
    let w = zeta_coeff(u);
    let zeta: Vec<Complex64> = p.chi.iter().map(|c| c * w * s).collect();
    let len2: f64 = p.chi.iter().map(|z| z.norm_sqr()).sum();
    let t = 2.0 * len2 * s * s * vertical_coeff(u);
    Point::new(zeta, t)
}

/// Recover the unique `(chi, phi)` with `sigma_{chi,phi}(1) = z` for a point
/// `z` off the center line. Rejects points with `|zeta| <= OMEGA_TOL`
/// (including the origin), where the parameter is not unique.
pub fn log_geodesic(z: &Point) -> Result<GeodesicParam> {
    let zeta_norm = z.zeta_norm();
    if zeta_norm <= OMEGA_TOL {
        return Err(Error::CenterLine(format!(
            "|zeta| = {zeta_norm:.3e} <= {OMEGA_TOL:.0e}: no unique geodesic parameter"
        )));
    }
    let phi = solve_twist(z.t() / (zeta_norm * zeta_norm));
    let w = zeta_coeff(phi);
    let chi = z.zeta().iter().map(|zj| zj / w).collect();
    Ok(GeodesicParam::new(chi, phi))
}

/// Invert `twist_ratio` on `(-2pi, 2pi)`.
fn solve_twist(rho: f64) -> f64 {
    if rho == 0.0 {
        return 0.0;
    }
    let target = rho.abs();
    let hi = TWO_PI - 1e-12;
    let phi_abs = if twist_ratio(hi) <= target {
        hi
    } else {
        brent(
            |phi| twist_ratio(phi) - target,
            0.0,
            hi,
            ROOT_BRACKET_TOL,
            200,
        )
    };
    phi_abs.copysign(rho)
}

/// CC distance from the origin: `|chi|` off the center line,
/// `sqrt(pi |t|)` on it.
pub fn cc_norm(w: &Point) -> f64 {
    let zeta_norm = w.zeta_norm();
    if zeta_norm <= OMEGA_TOL {
        return (PI * w.t().abs()).sqrt().max(zeta_norm);
    }
    if w.t() == 0.0 {
        return zeta_norm;
    }
    let phi = solve_twist(w.t() / (zeta_norm * zeta_norm));
    zeta_norm / zeta_coeff(phi).norm()
}

/// Carnot-Caratheodory distance. Left-invariant, symmetric,
/// 1-homogeneous under dilations.
pub fn cc_distance(x: &Point, y: &Point) -> f64 {
    cc_norm(&x.inv_mul(y))
}

/// Whether `(x, y)` lies in `Omega`, i.e. `x^{-1} y` is off the center line
/// (beyond the `OMEGA_TOL` absolute tolerance), so the minimal curve between
/// them is unique.
pub fn is_in_omega(x: &Point, y: &Point) -> bool {
    x.inv_mul(y).zeta_norm() > OMEGA_TOL
}

/// A minimal curve between two points, stored as a left translate of a curve
/// from the origin.
#[derive(Clone, Debug)]
pub struct MinimalCurve {
    base: Point,
    kind: CurveKind,
}

#[derive(Clone, Debug)]
enum CurveKind {
    /// The trivial curve `x -> x`.
    Degenerate,
    Arc(GeodesicParam),
}

impl MinimalCurve {
    pub fn base(&self) -> &Point {
        &self.base
    }

    pub fn is_degenerate(&self) -> bool {
        matches!(self.kind, CurveKind::Degenerate)
    }

    pub fn params(&self) -> Option<&GeodesicParam> {
        match &self.kind {
            CurveKind::Degenerate => None,
            CurveKind::Arc(p) => Some(p),
        }
    }

    /// Curve length; zero for the degenerate curve.
    pub fn length(&self) -> f64 {
        self.params().map_or(0.0, GeodesicParam::length)
    }

    pub fn eval(&self, s: f64) -> Point {
        match &self.kind {
            CurveKind::Degenerate => self.base.clone(),
            CurveKind::Arc(p) => self.base.mul(&exp_geodesic(p, s)),
        }
    }
}

/// The selected minimal curve from `x` to `y`: the unique one for pairs in
/// `Omega`; the canonical representative (`chi` proportional to `e_1`,
/// `phi = +-2pi`) for center-line pairs; the degenerate curve for `x = y`.
pub fn minimal_curve(x: &Point, y: &Point) -> MinimalCurve {
    let w = x.inv_mul(y);
    let kind = if w.zeta_norm() > OMEGA_TOL {
        CurveKind::Arc(log_geodesic(&w).expect("off-center point has unique parameters"))
    } else if w.t() != 0.0 {
        let mut chi = vec![Complex64::new(0.0, 0.0); w.n()];
        chi[0] = Complex64::new((PI * w.t().abs()).sqrt(), 0.0);
        CurveKind::Arc(GeodesicParam::new(chi, TWO_PI.copysign(w.t())))
    } else {
        CurveKind::Degenerate
    };
    MinimalCurve {
        base: x.clone(),
        kind,
    }
}

/// Point at parameter `s` on the selected minimal curve from `x` to `y`.
/// Endpoints are returned exactly.
pub fn eval_curve(x: &Point, y: &Point, s: f64) -> Result<Point> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::BadParameter(format!(
            "curve parameter s = {s} outside [0,1]"
        )));
    }
    if s == 0.0 {
        return Ok(x.clone());
    }
    if s == 1.0 {
        return Ok(y.clone());
    }
    Ok(minimal_curve(x, y).eval(s))
}

/// Horizontal gradient and vertical derivative of `d_y := d(., y)` at `x`.
#[derive(Clone, Debug)]
pub struct DistanceGradient {
    /// `nabla_H d_y(x)`, a unit vector in C^n.
    pub horizontal: Vec<Complex64>,
    /// `d/dt d_y(x)`.
    pub vertical: f64,
}

/// Gradient of the distance-to-`y` function at `x`, via left invariance:
/// with `(chi, phi)` the parameters of `y^{-1} x`,
/// `nabla_H d_y(x) = (chi/|chi|) e^{-i phi}` and `d/dt d_y(x) = phi/(4|chi|)`.
/// Rejects `x` on the translated center line `L_y`, where `d_y` is not smooth.
pub fn grad_distance(x: &Point, y: &Point) -> Result<DistanceGradient> {
    let w = y.inv_mul(x);
    let p = log_geodesic(&w).map_err(|_| {
        Error::CenterLine("x lies on the center line through y; d_y is not smooth there".into())
    })?;
    let len = p.length();
    let rot = Complex64::from_polar(1.0, -p.phi());
    Ok(DistanceGradient {
        horizontal: p.chi().iter().map(|c| c / len * rot).collect(),
        vertical: p.phi() / (4.0 * len),
    })
}
