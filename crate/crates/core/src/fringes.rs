//! Extremum detection on sampled curves.

use alloc::vec::Vec;

/// Indices `i` with `y[i-1] < y[i] >= y[i+1]`.
pub fn local_maxima(y: &[f64]) -> Vec<usize> {
    (1..y.len().saturating_sub(1))
        .filter(|&i| y[i] > y[i - 1] && y[i] >= y[i + 1])
        .collect()
}

/// Indices `i` with `y[i-1] > y[i] <= y[i+1]`.
pub fn local_minima(y: &[f64]) -> Vec<usize> {
    (1..y.len().saturating_sub(1))
        .filter(|&i| y[i] < y[i - 1] && y[i] <= y[i + 1])
        .collect()
}

/// Vertex of the parabola through samples `i-1, i, i+1`. Falls back to the
/// sample itself at the ends or when the three points are collinear.
pub fn parabolic_vertex(x: &[f64], y: &[f64], i: usize) -> (f64, f64) {
    if i == 0 || i + 1 >= y.len() {
        return (x[i], y[i]);
    }
    let (x0, x1, x2) = (x[i - 1], x[i], x[i + 1]);
    let (y0, y1, y2) = (y[i - 1], y[i], y[i + 1]);
    let d1 = (y1 - y0) / (x1 - x0);
    let d2 = (y2 - y1) / (x2 - x1);
    let curvature = (d2 - d1) / (x2 - x0);
    if curvature == 0.0 || !curvature.is_finite() {
        return (x1, y1);
    }
    // Newton form y1 + d1 (t - x1) + curvature (t - x1)(t - x0)
    let t = (0.5 * (x0 + x1) - d1 / (2.0 * curvature)).clamp(x0, x2);
    (t, y1 + d1 * (t - x1) + curvature * (t - x1) * (t - x0))
}

/// Golden-section search for a minimum of `f` on `[lo, hi]`.
pub fn golden_minimum<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let ratio = 0.5 * (libm::sqrt(5.0) - 1.0);
    let mut c = hi - ratio * (hi - lo);
    let mut d = lo + ratio * (hi - lo);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..200 {
        if hi - lo <= tol * (1.0 + libm::fabs(lo) + libm::fabs(hi)) {
            break;
        }
        if fc < fd {
            hi = d;
            d = c;
            fd = fc;
            c = hi - ratio * (hi - lo);
            fc = f(c);
        } else {
            lo = c;
            c = d;
            fc = fd;
            d = lo + ratio * (hi - lo);
            fd = f(d);
        }
    }
    let x = 0.5 * (lo + hi);
    (x, f(x))
}

/// Minima of a sampled function refined by golden-section search on the
/// bracketing cells.
pub fn refined_minima<F: Fn(f64) -> f64>(f: &F, x: &[f64], y: &[f64], tol: f64) -> Vec<f64> {
    local_minima(y)
        .into_iter()
        .map(|i| golden_minimum(f, x[i - 1], x[i + 1], tol).0)
        .collect()
}

/// Mean spacing between consecutive positions; `None` for fewer than two.
pub fn mean_spacing(positions: &[f64]) -> Option<f64> {
    if positions.len() < 2 {
        return None;
    }
    Some((positions[positions.len() - 1] - positions[0]) / (positions.len() - 1) as f64)
}
