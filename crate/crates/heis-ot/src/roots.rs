//! Bracketed scalar root finding (Brent's method).
//!
//! Used to invert the monotone twist-ratio function when recovering geodesic
//! parameters from a point. The function is smooth and strictly increasing on
//! the brackets we pass, so Brent's inverse-quadratic/secant steps converge in
//! a handful of iterations; bisection is the fallback that guarantees the
//! bracket shrinks.

/// Find the root of `f` in `[a, b]`, assuming `f(a)` and `f(b)` have opposite
/// signs (or one of them is zero). Stops when the bracket is narrower than
/// `xtol`. Panics if the bracket is invalid; callers construct brackets from
/// monotonicity so this is a programming error, not a data error.
pub fn brent<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, xtol: f64, max_iter: usize) -> f64 {
    let (mut a, mut b) = (a, b);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return a;
    }
    if fb == 0.0 {
        return b;
    }
    assert!(
        fa.signum() != fb.signum(),
        "brent: root not bracketed: f({a}) = {fa}, f({b}) = {fb}"
    );

    // Keep |f(b)| <= |f(a)|: b is the best iterate.
    if fa.abs() < fb.abs() {
        std::mem::swap(&mut a, &mut b);
        std::mem::swap(&mut fa, &mut fb);
    }
    let mut c = a;
    let mut fc = fa;
    let mut d = b - a;
    let mut mflag = true;

    for _ in 0..max_iter {
        if fb == 0.0 || (b - a).abs() < xtol {
            return b;
        }
        let mut s = if fa != fc && fb != fc {
            // Inverse quadratic interpolation.
            a * fb * fc / ((fa - fb) * (fa - fc))
                + b * fa * fc / ((fb - fa) * (fb - fc))
                + c * fa * fb / ((fc - fa) * (fc - fb))
        } else {
            // Secant.
            b - fb * (b - a) / (fb - fa)
        };

        let lo = (3.0 * a + b) / 4.0;
        let cond1 = !((lo.min(b) < s) && (s < lo.max(b)));
        let cond2 = mflag && (s - b).abs() >= (b - c).abs() / 2.0;
        let cond3 = !mflag && (s - b).abs() >= d.abs() / 2.0;
        let cond4 = mflag && (b - c).abs() < xtol;
        let cond5 = !mflag && d.abs() < xtol;
        if cond1 || cond2 || cond3 || cond4 || cond5 {
            s = (a + b) / 2.0;
            mflag = true;
        } else {
            mflag = false;
        }

        let fs = f(s);
        d = b - c;
        c = b;
        fc = fb;
        if fa.signum() != fs.signum() {
            b = s;
            fb = fs;
        } else {
            a = s;
            fa = fs;
        }
        if fa.abs() < fb.abs() {
            std::mem::swap(&mut a, &mut b);
            std::mem::swap(&mut fa, &mut fb);
        }
    }
    b
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cubic_root() {
        let r = brent(|x| x * x * x - 2.0, 0.0, 2.0, 1e-14, 200);
        assert!((r - 2f64.powf(1.0 / 3.0)).abs() < 1e-12);
    }

    #[test]
    fn endpoint_root_returned_exactly() {
        let r = brent(|x| x, 0.0, 1.0, 1e-14, 200);
        assert_eq!(r, 0.0);
    }

    #[test]
    fn steep_transcendental() {
        // Same shape as the twist-ratio inversion near its pole.
        let f = |x: f64| (x - x.sin()) / (1.0 - x.cos()) - 1.0e5;
        let r = brent(f, 1e-6, 2.0 * std::f64::consts::PI - 1e-12, 1e-13, 200);
        assert!(f(r - 1e-10) < 0.0 && f(r + 1e-10) > 0.0);
    }
}
