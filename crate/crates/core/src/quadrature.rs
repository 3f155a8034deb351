//! Double-exponential (tanh-sinh) quadrature on finite intervals.
//!
//! Handles integrable endpoint singularities (logarithmic and inverse
//! square-root) without special casing, which is exactly what the
//! covolume and swept-area integrands need. The error estimate is the
//! difference between successive level doublings.

/// Integrate f over [a, b]. Returns (value, error_estimate).
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> (f64, f64) {
    if a == b {
        return (0.0, 0.0);
    }
    let half = 0.5 * (b - a);
    // x(t) = tanh(pi/2 sinh t), weight pi/2 cosh t sech^2(pi/2 sinh t).
    // Node positions are computed as distances from the nearer endpoint:
    // 1 -|x| = 2 e^{-2|u|} / (1 + e^{-2|u|}), which stays accurate where
    // the naive mid + half*x cancels catastrophically.
    let eval = |t: f64| -> f64 {
        let u = std::f64::consts::FRAC_PI_2 * t.sinh();
        let eu = (-2.0 * u.abs()).exp();
        let delta = 2.0 * eu / (1.0 + eu); // 1 - |tanh u|
        let sech2 = 4.0 * eu / ((1.0 + eu) * (1.0 + eu));
        let w = std::f64::consts::FRAC_PI_2 * t.cosh() * sech2;
        let point = if t >= 0.0 {
            b - half * delta
        } else {
            a + half * delta
        };
        if delta == 0.0 || point == a || point == b {
            return 0.0;
        }
        let v = f(point);
        if v.is_finite() {
            v * w
        } else {
            0.0
        }
    };
    let t_max = 6.5; // exp(-pi/2 sinh 6.5) ~ 1e-178: far past double range
    // level 0: trapezoid over integer nodes with h = 1
    let mut h = 1.0;
    let mut sum = eval(0.0);
    let mut k = 1.0;
    while k <= t_max {
        sum += eval(k) + eval(-k);
        k += 1.0;
    }
    let mut value = sum * h * half;
    let mut prev = value;
    let mut err = f64::INFINITY;
    for level in 0..12 {
        // refine: add midpoints of the current grid, then halve h
        let mut k = 0.5;
        let mut added = 0.0;
        while k * h <= t_max {
            added += eval(k * h) + eval(-k * h);
            k += 1.0;
        }
        h *= 0.5;
        sum += added;
        value = sum * h * half;
        err = (value - prev).abs();
        prev = value;
        if err < tol * value.abs().max(1.0) && level >= 2 {
            break;
        }
    }
    (value, err)
}

/// Adaptive composite wrapper: split [a, b] at the given interior points
/// (sorted, deduplicated by the caller) and tanh-sinh each piece.
pub fn integrate_piecewise<F: Fn(f64) -> f64>(
    f: &F,
    mut cuts: Vec<f64>,
    a: f64,
    b: f64,
    tol: f64,
) -> (f64, f64) {
    cuts.retain(|&c| c > a && c < b);
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    cuts.dedup();
    let mut points = vec![a];
    points.extend(cuts);
    points.push(b);
    let mut total = 0.0;
    let mut err = 0.0;
    for w in points.windows(2) {
        let (v, e) = tanh_sinh(f, w[0], w[1], tol);
        total += v;
        err += e;
    }
    (total, err)
}

/// Recursive adaptive Simpson with a forced minimum subdivision depth,
/// so that narrow features cannot hide between probe points that happen
/// to look consistent with a low-order polynomial. Used by the
/// independent swept-area oracle.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, tol: f64) -> f64 {
    fn simpson<F: Fn(f64) -> f64>(f: &F, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
        let m = 0.5 * (a + b);
        let fm = f(m);
        ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
    }
    #[allow(clippy::too_many_arguments)]
    fn rec<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        fa: f64,
        b: f64,
        fb: f64,
        whole: f64,
        m: f64,
        fm: f64,
        tol: f64,
        depth: u32,
        force: u32,
    ) -> f64 {
        let (left, lm, flm) = simpson(f, a, fa, m, fm);
        let (right, rm, frm) = simpson(f, m, fm, b, fb);
        let delta = left + right - whole;
        if depth == 0 || (force == 0 && delta.abs() <= 15.0 * tol) {
            left + right + delta / 15.0
        } else {
            let force = force.saturating_sub(1);
            rec(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth - 1, force)
                + rec(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth - 1, force)
        }
    }
    let fa = f(a);
    let fb = f(b);
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    rec(f, a, fa, b, fb, whole, m, fm, tol, 48, 10)
}
