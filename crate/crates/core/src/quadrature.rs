//! Numerical integration used by the oracles and by the grid-based wave
//! propagation in [`crate::normalization`].
//!
//! Everything here is independent of the Fresnel-integral kernel so that it
//! can serve as a cross-check of the closed forms.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{bail, Result};

/// Kronrod abscissae on [0, 1]; even indices are the embedded Gauss nodes.
const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_5,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_48,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224,
    0.063_092_092_629_978_56,
    0.104_790_010_322_250_19,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_42,
    0.204_432_940_075_298_89,
    0.209_482_141_084_727_82,
];

/// Gauss weights for the nodes `XGK[1], XGK[3], XGK[5], XGK[7]`.
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_64,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Result of one 15-point Gauss–Kronrod panel.
#[derive(Debug, Clone, Copy)]
pub struct PanelEstimate {
    pub kronrod: f64,
    pub gauss: f64,
    /// QUADPACK-style error estimate.
    pub error: f64,
    /// Error level below which rounding dominates.
    pub roundoff: f64,
}

/// Accumulated result of an adaptive integration.
#[derive(Debug, Clone, Copy, Default)]
pub struct Estimate {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

/// Applies the 15-point Kronrod rule and its embedded 7-point Gauss rule on `[a, b]`.
pub fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> PanelEstimate {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let f_center = f(center);
    let mut kronrod = WGK[7] * f_center;
    let mut gauss = WG[3] * f_center;
    let mut abs_sum = libm::fabs(kronrod);
    let mut values = [0.0f64; 14];
    for j in 0..7 {
        let dx = half * XGK[j];
        let lo = f(center - dx);
        let hi = f(center + dx);
        values[2 * j] = lo;
        values[2 * j + 1] = hi;
        kronrod += WGK[j] * (lo + hi);
        abs_sum += WGK[j] * (libm::fabs(lo) + libm::fabs(hi));
        if j % 2 == 1 {
            gauss += WG[j / 2] * (lo + hi);
        }
    }
    let mean = 0.5 * kronrod;
    let mut asc = WGK[7] * libm::fabs(f_center - mean);
    for j in 0..7 {
        asc += WGK[j] * (libm::fabs(values[2 * j] - mean) + libm::fabs(values[2 * j + 1] - mean));
    }
    let kronrod = kronrod * half;
    let gauss = gauss * half;
    let abs_sum = abs_sum * libm::fabs(half);
    let asc = asc * libm::fabs(half);

    let mut error = libm::fabs(kronrod - gauss);
    if asc != 0.0 && error != 0.0 {
        error = asc * libm::fmin(1.0, libm::pow(200.0 * error / asc, 1.5));
    }
    let roundoff = 50.0 * f64::EPSILON * abs_sum;
    error = libm::fmax(error, roundoff);
    PanelEstimate { kronrod, gauss, error, roundoff }
}

/// Adaptive bisection with a local error budget proportional to panel length.
///
/// A panel is accepted when its estimate falls below `tol * len / (b - a)`
/// or reaches the rounding floor of the rule.
/// `max_panels` caps the total number of accepted panels.
pub fn integrate<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    tol: f64,
    max_panels: usize,
) -> Result<Estimate> {
    if a == b {
        return Ok(Estimate::default());
    }
    let (lo, hi, sign) = if a < b { (a, b, 1.0) } else { (b, a, -1.0) };
    let span = hi - lo;
    let mut out = Estimate::default();
    let mut stack = vec![(lo, hi, 0u32)];
    let mut visited = 0usize;
    while let Some((pa, pb, depth)) = stack.pop() {
        visited += 1;
        if visited > 2 * max_panels {
            bail!(Convergence, "panel budget {max_panels} exhausted on [{a}, {b}]");
        }
        let est = gauss_kronrod_15(f, pa, pb);
        let budget = libm::fmax(tol * (pb - pa) / span, est.roundoff);
        let mid = 0.5 * (pa + pb);
        if est.error <= budget || depth >= 60 || mid <= pa || mid >= pb {
            if est.error > budget && depth >= 60 {
                bail!(Convergence, "bisection depth exceeded near {pa} (error {})", est.error);
            }
            out.value += est.kronrod;
            out.error += est.error;
            out.panels += 1;
        } else {
            stack.push((mid, pb, depth + 1));
            stack.push((pa, mid, depth + 1));
        }
    }
    out.value *= sign;
    Ok(out)
}

/// Complex result of integrating real and imaginary parts separately.
#[derive(Debug, Clone, Copy, Default)]
pub struct ComplexEstimate {
    pub value: Complex64,
    pub error: f64,
    pub panels: usize,
}

/// Integrates a complex integrand whose phase is dominated by
/// `curvature * (w - center)^2`, splitting `[a, b]` at the zeros of that
/// phase modulo π so that each panel holds at most one half-oscillation.
pub fn integrate_chirped<F: Fn(f64) -> Complex64>(
    f: &F,
    a: f64,
    b: f64,
    center: f64,
    curvature: f64,
    tol: f64,
) -> Result<ComplexEstimate> {
    let breaks = chirp_breakpoints(a, b, center, curvature);
    let span = b - a;
    let mut out = ComplexEstimate::default();
    for pair in breaks.windows(2) {
        let (pa, pb) = (pair[0], pair[1]);
        let budget = 0.5 * tol * (pb - pa) / span;
        let re = integrate(&|w| f(w).re, pa, pb, budget, 4096)?;
        let im = integrate(&|w| f(w).im, pa, pb, budget, 4096)?;
        out.value += Complex64::new(re.value, im.value);
        out.error += re.error + im.error;
        out.panels += re.panels + im.panels;
    }
    Ok(out)
}

/// Sorted breakpoints `a, ..., b` placed where `curvature * (w - center)^2`
/// crosses a multiple of π.
pub fn chirp_breakpoints(a: f64, b: f64, center: f64, curvature: f64) -> Vec<f64> {
    let mut points = vec![a];
    let q = libm::fabs(curvature);
    if q > 0.0 && b > a {
        let index = |w: f64| q * (w - center) * (w - center) / PI;
        let node = |k: f64| libm::sqrt(k * PI / q);
        // left of center, walking towards it
        if a < center {
            let hi = libm::fmin(b, center);
            let k_start = libm::floor(index(a));
            let mut k = k_start;
            while k >= 1.0 {
                let w = center - node(k);
                if w > a && w < hi {
                    points.push(w);
                }
                k -= 1.0;
            }
            if center < b && center > a {
                points.push(center);
            }
        }
        if b > center {
            let lo = libm::fmax(a, center);
            let k_end = libm::floor(index(b));
            let mut k = libm::floor(index(lo)) + 1.0;
            while k <= k_end {
                let w = center + node(k);
                if w > lo && w < b {
                    points.push(w);
                }
                k += 1.0;
            }
        }
    }
    points.push(b);
    points.dedup();
    points
}

/// Extrapolates samples `(h_i, v_i)` to `h = 0` with Neville's scheme.
pub fn extrapolate_to_zero(samples: &[(f64, Complex64)]) -> Complex64 {
    let n = samples.len();
    if n == 0 {
        return Complex64::new(0.0, 0.0);
    }
    let mut table: Vec<Complex64> = samples.iter().map(|s| s.1).collect();
    for level in 1..n {
        for i in 0..n - level {
            let hi = samples[i].0;
            let hj = samples[i + level].0;
            table[i] = (table[i + 1] * hi - table[i] * hj) / (hi - hj);
        }
    }
    table[0]
}

/// Composite Simpson rule on uniformly spaced samples (odd count, ≥ 3).
pub fn simpson(values: &[f64], step: f64) -> f64 {
    let n = values.len();
    debug_assert!(n >= 3 && n % 2 == 1, "simpson needs an odd sample count");
    let mut odd = 0.0;
    let mut even = 0.0;
    for (i, v) in values.iter().enumerate().take(n - 1).skip(1) {
        if i % 2 == 1 {
            odd += v;
        } else {
            even += v;
        }
    }
    step / 3.0 * (values[0] + values[n - 1] + 4.0 * odd + 2.0 * even)
}

/// Filon–Simpson approximation of `∫ f(y) exp(i ω y) dy` over uniformly
/// spaced complex samples starting at `start` (odd count, ≥ 3).
///
/// Exact when `f` is piecewise quadratic on consecutive sample pairs,
/// independently of ω.
pub fn filon(values: &[Complex64], start: f64, step: f64, omega: f64) -> Complex64 {
    let n = values.len();
    debug_assert!(n >= 3 && n % 2 == 1, "filon needs an odd sample count");
    let theta = omega * step;
    let (alpha, beta, gamma) = filon_coefficients(theta);
    let end = start + step * (n - 1) as f64;
    let (s0, c0) = (libm::sin(omega * start), libm::cos(omega * start));
    let (sn, cn) = (libm::sin(omega * end), libm::cos(omega * end));
    let (f0, fn_) = (values[0], values[n - 1]);

    let mut c_even = Complex64::new(0.0, 0.0);
    let mut s_even = Complex64::new(0.0, 0.0);
    let mut c_odd = Complex64::new(0.0, 0.0);
    let mut s_odd = Complex64::new(0.0, 0.0);
    for (i, v) in values.iter().enumerate() {
        let y = start + step * i as f64;
        let (s, c) = (libm::sin(omega * y), libm::cos(omega * y));
        if i % 2 == 0 {
            c_even += v * c;
            s_even += v * s;
        } else {
            c_odd += v * c;
            s_odd += v * s;
        }
    }
    c_even -= 0.5 * (fn_ * cn + f0 * c0);
    s_even -= 0.5 * (fn_ * sn + f0 * s0);

    let cos_part = (fn_ * sn - f0 * s0) * alpha + c_even * beta + c_odd * gamma;
    let sin_part = -(fn_ * cn - f0 * c0) * alpha + s_even * beta + s_odd * gamma;
    (cos_part + Complex64::i() * sin_part) * step
}

/// Filon weights α(θ), β(θ), γ(θ); power series below |θ| = 1.
pub(crate) fn filon_coefficients(theta: f64) -> (f64, f64, f64) {
    if libm::fabs(theta) >= 1.0 {
        let (s, c) = (libm::sin(theta), libm::cos(theta));
        let t2 = theta * theta;
        let t3 = t2 * theta;
        let alpha = (t2 + theta * s * c - 2.0 * s * s) / t3;
        let beta = 2.0 * (theta * (1.0 + c * c) - 2.0 * s * c) / t3;
        let gamma = 4.0 * (s - theta * c) / t3;
        return (alpha, beta, gamma);
    }
    let t2 = theta * theta;
    // α = Σ_{j≥1} (−1)^j [2^{2j+4}/(2j+4)! − 2^{2j+2}/(2j+3)!] θ^{2j+1}
    // β = Σ_{k≥1} (−1)^k 4^k [1/(2k)! − 4/(2k+1)!] θ^{2k−2}
    // γ = Σ_{k≥1} (−1)^k 4 [1/(2k+1)! − 1/(2k)!] θ^{2k−2}
    let mut alpha = 0.0;
    let mut beta = 0.0;
    let mut gamma = 0.0;
    let mut power = 1.0; // θ^{2k−2}
    for k in 1..=12 {
        let kf = k as f64;
        let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
        let four_k = libm::pow(4.0, kf);
        let f2k = factorial(2 * k);
        let f2k1 = f2k * (2.0 * kf + 1.0);
        beta += sign * four_k * (1.0 / f2k - 4.0 / f2k1) * power;
        gamma += sign * 4.0 * (1.0 / f2k1 - 1.0 / f2k) * power;
        // α's θ^{2k+1} term, i.e. j = k
        let f2k3 = f2k1 * (2.0 * kf + 2.0) * (2.0 * kf + 3.0);
        let f2k4 = f2k3 * (2.0 * kf + 4.0);
        alpha += sign * (4.0 * 4.0 * four_k / f2k4 - 4.0 * four_k / f2k3) * power * t2 * theta;
        power *= t2;
    }
    (alpha, beta, gamma)
}

fn factorial(n: usize) -> f64 {
    (1..=n).fold(1.0, |acc, k| acc * k as f64)
}
